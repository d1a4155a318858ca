//! JSON instance and schedule-trace files.
//!
//! Instance: `{"nodes":n,"edges":[[u,v],..],"sink":s,"d_I":k,"packets":[{"origin":o,"release":r},..]}`
//! with an optional trailing `"comment"` recording how the file was produced.
//!
//! Trace: `{"sigma":σ,"rounds":[[{"packet":j,"from":u,"to":v},..],..]}`, calls in
//! each round sorted by packet index.
//!
//! Writers emit a single line followed by a newline so output is byte-stable.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Call, Instance, ModelError, Network, Packet, Schedule};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid instance: {0}")]
    Model(#[from] ModelError),
    #[error("sigma must be at least 1")]
    ZeroSigma,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    nodes: usize,
    edges: Vec<[usize; 2]>,
    sink: usize,
    #[serde(rename = "d_I")]
    radius: u32,
    packets: Vec<PacketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    comment: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PacketEntry {
    origin: usize,
    release: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleFile {
    sigma: u32,
    rounds: Vec<Vec<CallEntry>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CallEntry {
    packet: usize,
    from: usize,
    to: usize,
}

/// An instance read from disk, with its provenance comment if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceDoc {
    pub instance: Instance,
    pub comment: Option<String>,
}

pub fn write_instance(instance: &Instance, comment: Option<&str>) -> String {
    let net = &instance.network;
    let file = InstanceFile {
        nodes: net.node_count(),
        edges: net.edges().iter().map(|&(a, b)| [a, b]).collect(),
        sink: net.sink(),
        radius: net.radius(),
        packets: instance
            .packets
            .iter()
            .map(|p| PacketEntry {
                origin: p.origin,
                release: p.release,
            })
            .collect(),
        comment: comment.map(str::to_owned),
    };
    let mut out = serde_json::to_string(&file).expect("instance serializes");
    out.push('\n');
    out
}

pub fn read_instance(text: &str) -> Result<InstanceDoc, FormatError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let network = Network::new(
        file.nodes,
        file.edges.iter().map(|&[a, b]| (a, b)),
        file.sink,
        file.radius,
    )?;
    let packets = file
        .packets
        .iter()
        .map(|p| Packet {
            origin: p.origin,
            release: p.release,
        })
        .collect();
    Ok(InstanceDoc {
        instance: Instance::new(network, packets)?,
        comment: file.comment,
    })
}

pub fn write_schedule(schedule: &Schedule) -> String {
    let file = ScheduleFile {
        sigma: schedule.sigma,
        rounds: schedule
            .rounds
            .iter()
            .map(|round| {
                let mut calls: Vec<_> = round.clone();
                calls.sort();
                calls
                    .into_iter()
                    .map(|c| CallEntry {
                        packet: c.packet,
                        from: c.from,
                        to: c.to,
                    })
                    .collect()
            })
            .collect(),
    };
    let mut out = serde_json::to_string(&file).expect("schedule serializes");
    out.push('\n');
    out
}

pub fn read_schedule(text: &str) -> Result<Schedule, FormatError> {
    let file: ScheduleFile = serde_json::from_str(text)?;
    if file.sigma == 0 {
        return Err(FormatError::ZeroSigma);
    }
    let rounds = file
        .rounds
        .into_iter()
        .map(|round| {
            round
                .into_iter()
                .map(|c| Call::new(c.packet, c.from, c.to))
                .collect()
        })
        .collect();
    Ok(Schedule::new(file.sigma, rounds))
}
