//! Priority Greedy scheduling and its FIFO and sped-up FIFO instances.
//!
//! Every round the released, undelivered packets are scanned from highest to
//! lowest priority; each one is forwarded one hop along a fixed shortest-path
//! tree unless that call interferes with a call already accepted in the round.
//! Rejected packets are recorded in the run's block log, which is what the
//! blocking forest in [`crate::bounds`] is built from.

use thiserror::Error;

use crate::model::{compatible, Call, Instance, Network, NodeId, PacketId, Schedule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchedulerError {
    #[error("horizon of {horizon} rounds exceeded with {remaining} packets undelivered")]
    HorizonExceeded { horizon: u64, remaining: usize },
    #[error("priority is not a permutation of the {0} packets")]
    BadPriority(usize),
    #[error("speed must be at least 1")]
    ZeroSigma,
}

/// Next hop towards the sink for every node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NextHopTree {
    parent: Vec<Option<NodeId>>,
}

impl NextHopTree {
    /// `None` for the sink.
    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        self.parent[node]
    }

    /// Nodes visited from `node` to the sink, both ends included.
    pub fn path(&self, mut node: NodeId) -> Vec<NodeId> {
        let mut path = vec![node];
        while let Some(next) = self.parent[node] {
            path.push(next);
            node = next;
        }
        path
    }
}

/// Shortest-path tree rooted at the sink; each node forwards to its
/// lowest-numbered neighbor one hop closer to the sink.
pub fn shortest_path_tree(network: &Network) -> NextHopTree {
    let parent = (0..network.node_count())
        .map(|v| {
            let d = network.dist_to_sink(v);
            if d == 0 {
                return None;
            }
            network
                .neighbors(v)
                .iter()
                .copied()
                .find(|&w| network.dist_to_sink(w) + 1 == d)
        })
        .collect();
    NextHopTree { parent }
}

/// Strict total order over packets; position 0 is the highest priority.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Priority {
    order: Vec<PacketId>,
    rank: Vec<usize>,
}

impl Priority {
    pub fn from_order(order: Vec<PacketId>) -> Result<Self, SchedulerError> {
        let m = order.len();
        let mut rank = vec![usize::MAX; m];
        for (r, &j) in order.iter().enumerate() {
            if j >= m || rank[j] != usize::MAX {
                return Err(SchedulerError::BadPriority(m));
            }
            rank[j] = r;
        }
        Ok(Priority { order, rank })
    }

    /// Orders packets by ascending `key`, ties by packet index.
    pub fn by_key<K: Ord>(m: usize, key: impl Fn(PacketId) -> K) -> Self {
        let mut order: Vec<PacketId> = (0..m).collect();
        order.sort_by_key(|&j| (key(j), j));
        Priority::from_order(order).expect("sorted indices form a permutation")
    }

    /// Earlier release first.
    pub fn fifo(instance: &Instance) -> Self {
        Priority::by_key(instance.packet_count(), |j| instance.release(j))
    }

    /// Earlier ball entry `r_j + delta_j - pi_j` first.
    pub fn by_ball_entry(instance: &Instance) -> Self {
        Priority::by_key(instance.packet_count(), |j| instance.ball_entry(j))
    }

    pub fn order(&self) -> &[PacketId] {
        &self.order
    }

    pub fn rank(&self, j: PacketId) -> usize {
        self.rank[j]
    }

    pub fn outranks(&self, a: PacketId, b: PacketId) -> bool {
        self.rank[a] < self.rank[b]
    }
}

/// A round in which a released packet was not forwarded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockEvent {
    pub round: usize,
    pub packet: PacketId,
    /// Node holding the blocked packet.
    pub at: NodeId,
    /// Higher-priority packets already sending in that round, with their senders.
    pub senders: Vec<(PacketId, NodeId)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyRun {
    pub schedule: Schedule,
    pub priority: Priority,
    /// Block events in round order; round indices are those of `schedule`.
    pub blocks: Vec<BlockEvent>,
}

/// Round cap used when none is given: `sigma * (max r_j + m (diameter + 1) gamma)`.
pub fn default_horizon(instance: &Instance, sigma: u32) -> u64 {
    let net = &instance.network;
    let m = instance.packet_count() as u64;
    sigma as u64 * (instance.max_release() + m * (net.diameter() as u64 + 1) * net.gamma() as u64)
}

pub fn priority_greedy(
    instance: &Instance,
    priority: &Priority,
) -> Result<GreedyRun, SchedulerError> {
    priority_greedy_capped(instance, priority, default_horizon(instance, 1))
}

/// Priority Greedy with an explicit round cap; release dates are read as round
/// indices of the produced schedule.
pub fn priority_greedy_capped(
    instance: &Instance,
    priority: &Priority,
    horizon: u64,
) -> Result<GreedyRun, SchedulerError> {
    let m = instance.packet_count();
    if priority.order().len() != m {
        return Err(SchedulerError::BadPriority(m));
    }
    let network = &instance.network;
    let sink = network.sink();
    let tree = shortest_path_tree(network);

    let mut position: Vec<NodeId> = instance.packets.iter().map(|p| p.origin).collect();
    let mut remaining = position.iter().filter(|&&x| x != sink).count();
    let mut rounds = Vec::new();
    let mut blocks = Vec::new();

    let mut round = 0usize;
    while remaining > 0 {
        if round as u64 >= horizon {
            return Err(SchedulerError::HorizonExceeded { horizon, remaining });
        }
        let mut accepted: Vec<Call> = Vec::new();
        for &j in priority.order() {
            let at = position[j];
            if at == sink || instance.release(j) > round as u64 {
                continue;
            }
            let next = tree.parent(at).expect("non-sink node has a parent");
            let call = Call::new(j, at, next);
            if accepted.iter().all(|c| compatible(c, &call, network)) {
                accepted.push(call);
            } else {
                blocks.push(BlockEvent {
                    round,
                    packet: j,
                    at,
                    senders: accepted.iter().map(|c| (c.packet, c.from)).collect(),
                });
            }
        }
        for call in &accepted {
            position[call.packet] = call.to;
            if call.to == sink {
                remaining -= 1;
            }
        }
        accepted.sort();
        rounds.push(accepted);
        round += 1;
    }

    Ok(GreedyRun {
        schedule: Schedule::unit(rounds),
        priority: priority.clone(),
        blocks,
    })
}

/// Priority Greedy with release-date priority, ties by packet index.
pub fn fifo(instance: &Instance) -> Result<GreedyRun, SchedulerError> {
    priority_greedy(instance, &Priority::fifo(instance))
}

/// Priority Greedy ordered by ball entry `R_j`, ties by packet index.
pub fn ball_entry_greedy(instance: &Instance) -> Result<GreedyRun, SchedulerError> {
    priority_greedy(instance, &Priority::by_ball_entry(instance))
}

/// FIFO run on the instance with releases multiplied by `sigma`, then read at
/// speed `sigma`. The returned schedule has `sigma` as its speed; its block log
/// refers to rounds of the scaled instance.
pub fn sigma_fifo(instance: &Instance, sigma: u32) -> Result<GreedyRun, SchedulerError> {
    if sigma == 0 {
        return Err(SchedulerError::ZeroSigma);
    }
    let scaled = instance.with_scaled_releases(sigma as u64);
    let mut run = priority_greedy_capped(
        &scaled,
        &Priority::fifo(&scaled),
        default_horizon(instance, sigma),
    )?;
    run.schedule.sigma = sigma;
    Ok(run)
}
