//! Schedule replay and feasibility checking.

use num_rational::Ratio;
use thiserror::Error;

use crate::model::{compatible, Call, Instance, NodeId, PacketId, Schedule, Time};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("schedule speed must be at least 1")]
    ZeroSigma,
    #[error("round {round}: unknown packet {packet}")]
    UnknownPacket { round: usize, packet: PacketId },
    #[error("round {round}: {call} is not along an edge")]
    NotAnEdge { round: usize, call: Call },
    #[error("round {round}: packet {packet} called more than once")]
    DuplicatePacket { round: usize, packet: PacketId },
    #[error("round {round}: {call} sent before its release round {release_round}")]
    BeforeRelease {
        round: usize,
        call: Call,
        release_round: u64,
    },
    #[error("round {round}: sender of {call} does not hold the packet (held at {holder})")]
    NotHolder {
        round: usize,
        call: Call,
        holder: NodeId,
    },
    #[error("round {round}: {call} moves a packet already delivered")]
    AlreadyDelivered { round: usize, call: Call },
    #[error("round {round}: calls {a} and {b} interfere")]
    Interference { round: usize, a: Call, b: Call },
    #[error("packet {packet} never delivered (left at node {at})")]
    NeverDelivered { packet: PacketId, at: NodeId },
}

/// Per-packet and aggregate times of a feasible schedule, in original rounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleMetrics {
    pub completion: Vec<Time>,
    pub flow: Vec<Time>,
    pub max_completion: Time,
    pub max_flow: Time,
    pub round_count: usize,
}

impl ScheduleMetrics {
    fn from_completion(instance: &Instance, completion: Vec<Time>, round_count: usize) -> Self {
        let flow: Vec<Time> = completion
            .iter()
            .zip(&instance.packets)
            .map(|(c, p)| c - Ratio::from_integer(p.release as i64))
            .collect();
        let zero = Ratio::from_integer(0);
        ScheduleMetrics {
            max_completion: completion.iter().copied().max().unwrap_or(zero),
            max_flow: flow.iter().copied().max().unwrap_or(zero),
            completion,
            flow,
            round_count,
        }
    }
}

/// Replays `schedule` on `instance` and returns its metrics if every call is
/// legal, every round is pairwise compatible and every packet reaches the sink.
///
/// A call in round index `t` may move packet `j` only when `t >= sigma * r_j`;
/// a packet delivered by a call in round `t` completes at `(t + 1) / sigma`.
/// Packets released at the sink complete at their release date.
pub fn validate_schedule(
    instance: &Instance,
    schedule: &Schedule,
) -> Result<ScheduleMetrics, ScheduleError> {
    let sigma = schedule.sigma;
    if sigma == 0 {
        return Err(ScheduleError::ZeroSigma);
    }
    let network = &instance.network;
    let sink = network.sink();
    let m = instance.packet_count();

    let mut position: Vec<NodeId> = instance.packets.iter().map(|p| p.origin).collect();
    let mut completion: Vec<Option<Time>> = instance
        .packets
        .iter()
        .map(|p| (p.origin == sink).then(|| Ratio::from_integer(p.release as i64)))
        .collect();
    let mut seen = vec![usize::MAX; m];

    for (round, calls) in schedule.rounds.iter().enumerate() {
        for call in calls {
            let j = call.packet;
            if j >= m {
                return Err(ScheduleError::UnknownPacket { round, packet: j });
            }
            if !network.is_edge(call.from, call.to) {
                return Err(ScheduleError::NotAnEdge { round, call: *call });
            }
            if seen[j] == round {
                return Err(ScheduleError::DuplicatePacket { round, packet: j });
            }
            seen[j] = round;
            let release_round = instance.release(j) * sigma as u64;
            if (round as u64) < release_round {
                return Err(ScheduleError::BeforeRelease {
                    round,
                    call: *call,
                    release_round,
                });
            }
            if completion[j].is_some() {
                return Err(ScheduleError::AlreadyDelivered { round, call: *call });
            }
            if position[j] != call.from {
                return Err(ScheduleError::NotHolder {
                    round,
                    call: *call,
                    holder: position[j],
                });
            }
        }
        for (i, a) in calls.iter().enumerate() {
            if let Some(b) = calls[i + 1..].iter().find(|b| !compatible(a, b, network)) {
                return Err(ScheduleError::Interference {
                    round,
                    a: *a,
                    b: *b,
                });
            }
        }
        for call in calls {
            position[call.packet] = call.to;
            if call.to == sink {
                completion[call.packet] = Some(Ratio::new(round as i64 + 1, sigma as i64));
            }
        }
    }

    let completion = completion
        .into_iter()
        .enumerate()
        .map(|(packet, c)| {
            c.ok_or(ScheduleError::NeverDelivered {
                packet,
                at: position[packet],
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ScheduleMetrics::from_completion(
        instance,
        completion,
        schedule.rounds.len(),
    ))
}
