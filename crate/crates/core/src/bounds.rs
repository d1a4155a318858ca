//! Blocking forest of a Priority Greedy run and the completion-time bounds
//! derived from it.
//!
//! In the last round a packet `j` is blocked, its parent is the closest
//! higher-priority packet that was sending in that round (ties by packet index).
//! Packets never blocked are roots.

use num_rational::Ratio;
use thiserror::Error;

use crate::model::{Instance, PacketId, Schedule, Time};
use crate::schedulers::GreedyRun;
use crate::validate::{validate_schedule, ScheduleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("packet set must be nonempty")]
    EmptySet,
    #[error("packet {0} out of range")]
    UnknownPacket(PacketId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockingForest {
    parent: Vec<Option<PacketId>>,
}

impl BlockingForest {
    pub fn from_run(instance: &Instance, run: &GreedyRun) -> Self {
        let net = &instance.network;
        let mut parent = vec![None; instance.packet_count()];
        for event in &run.blocks {
            let closest = event
                .senders
                .iter()
                .filter(|(k, _)| run.priority.outranks(*k, event.packet))
                .min_by_key(|&&(k, from)| (net.dist(from, event.at), k))
                .map(|&(k, _)| k);
            parent[event.packet] = closest;
        }
        BlockingForest { parent }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, j: PacketId) -> Option<PacketId> {
        self.parent[j]
    }

    /// Root `b(j)` of the tree containing `j`.
    pub fn root(&self, mut j: PacketId) -> PacketId {
        while let Some(k) = self.parent[j] {
            j = k;
        }
        j
    }

    pub fn roots(&self) -> Vec<PacketId> {
        (0..self.len())
            .filter(|&j| self.parent[j].is_none())
            .collect()
    }

    /// Packets on the forest path from `b(j)` down to `j`, root first.
    pub fn path(&self, j: PacketId) -> Vec<PacketId> {
        let mut path = vec![j];
        let mut cur = j;
        while let Some(k) = self.parent[cur] {
            path.push(k);
            cur = k;
        }
        path.reverse();
        path
    }

    /// All packets sharing `j`'s root, ascending.
    pub fn tree(&self, j: PacketId) -> Vec<PacketId> {
        let root = self.root(j);
        (0..self.len()).filter(|&i| self.root(i) == root).collect()
    }

    /// Trees ordered by root index.
    pub fn trees(&self) -> Vec<Vec<PacketId>> {
        self.roots().into_iter().map(|r| self.tree(r)).collect()
    }
}

/// `R_{b(j)} + (gamma / gamma0) * sum of pi_i over the forest path to j`.
pub fn upper_bound(instance: &Instance, forest: &BlockingForest, j: PacketId) -> Time {
    let root = forest.root(j);
    let hops: u64 = forest
        .path(j)
        .iter()
        .map(|&i| instance.ball_hops(i) as u64)
        .sum();
    Ratio::from_integer(instance.ball_entry(root) as i64)
        + instance.network.blocking_factor() * Ratio::from_integer(hops as i64)
}

/// Certified lower bound on the optimal maximum completion time of any schedule
/// for the packets in `set`:
/// `max(min_k R_k + sum pi_i, max_j (r_j + delta_j))`.
pub fn lower_bound(instance: &Instance, set: &[PacketId]) -> Result<u64, BoundsError> {
    if set.is_empty() {
        return Err(BoundsError::EmptySet);
    }
    if let Some(&bad) = set.iter().find(|&&j| j >= instance.packet_count()) {
        return Err(BoundsError::UnknownPacket(bad));
    }
    let min_entry = set
        .iter()
        .map(|&j| instance.ball_entry(j))
        .min()
        .unwrap_or(0);
    let hops: u64 = set.iter().map(|&j| instance.ball_hops(j) as u64).sum();
    let routing = set
        .iter()
        .map(|&j| instance.release(j) + instance.sink_distance(j) as u64)
        .max()
        .unwrap_or(0);
    Ok((min_entry + hops).max(routing))
}

/// Largest [`lower_bound`] over the trees of `forest`.
pub fn best_tree_lower_bound(instance: &Instance, forest: &BlockingForest) -> Option<u64> {
    forest
        .trees()
        .iter()
        .filter_map(|tree| lower_bound(instance, tree).ok())
        .max()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundRow {
    pub packet: PacketId,
    pub completion: Time,
    pub upper: Time,
    pub slack: Time,
}

/// Per-packet upper-bound table for a greedy run on `instance`, in the run's
/// own round units.
pub fn bounds_table(
    instance: &Instance,
    run: &GreedyRun,
) -> Result<(BlockingForest, Vec<BoundRow>), ScheduleError> {
    let unit = Schedule {
        sigma: 1,
        rounds: run.schedule.rounds.clone(),
    };
    let metrics = validate_schedule(instance, &unit)?;
    let forest = BlockingForest::from_run(instance, run);
    let rows = metrics
        .completion
        .iter()
        .enumerate()
        .map(|(packet, &completion)| {
            let upper = upper_bound(instance, &forest, packet);
            BoundRow {
                packet,
                completion,
                upper,
                slack: upper - completion,
            }
        })
        .collect();
    Ok((forest, rows))
}
