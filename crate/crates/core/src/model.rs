//! Network, instance and schedule data model plus the interference predicate.
//!
//! A [`Network`] is an undirected connected graph with a designated sink and an
//! interference radius. Hop distances between every pair of nodes are computed
//! once at construction with repeated breadth-first search and kept in a flat
//! matrix, which is what every other part of the crate queries.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

/// Exact time value in units of original (unit-speed) rounds.
pub type Time = Ratio<i64>;

pub type NodeId = usize;
pub type PacketId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("network must have at least one node")]
    Empty,
    #[error("node {node} out of range (node count {node_count})")]
    NodeOutOfRange { node: NodeId, node_count: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(NodeId, NodeId),
    #[error("interference radius must be at least 1")]
    ZeroRadius,
    #[error("network is disconnected: node {unreachable} cannot reach node {from}")]
    Disconnected { from: NodeId, unreachable: NodeId },
    #[error("packet {packet} has invalid origin {origin}")]
    BadOrigin { packet: PacketId, origin: NodeId },
}

/// Undirected graph with a sink node and an interference radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    node_count: usize,
    edges: Vec<(NodeId, NodeId)>,
    adjacency: Vec<Vec<NodeId>>,
    sink: NodeId,
    radius: u32,
    dist: Vec<u32>,
}

impl Network {
    /// Builds and validates a network. Edges are normalized to `(low, high)`
    /// and sorted, so two networks built from permuted edge lists compare equal.
    pub fn new(
        node_count: usize,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
        sink: NodeId,
        radius: u32,
    ) -> Result<Self, ModelError> {
        if node_count == 0 {
            return Err(ModelError::Empty);
        }
        if radius == 0 {
            return Err(ModelError::ZeroRadius);
        }
        let in_range = |node: NodeId| {
            if node < node_count {
                Ok(())
            } else {
                Err(ModelError::NodeOutOfRange { node, node_count })
            }
        };
        in_range(sink)?;

        let mut set = BTreeSet::new();
        for (a, b) in edges {
            in_range(a)?;
            in_range(b)?;
            if a == b {
                return Err(ModelError::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if !set.insert(e) {
                return Err(ModelError::DuplicateEdge(e.0, e.1));
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); node_count];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        let dist = all_pairs_hops(&adjacency)?;
        Ok(Network {
            node_count,
            edges,
            adjacency,
            sink,
            radius,
            dist,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn sink(&self) -> NodeId {
        self.sink
    }

    /// Interference radius `d_I`.
    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// Neighbors of `node` in increasing id order.
    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.adjacency[node]
    }

    pub fn is_edge(&self, a: NodeId, b: NodeId) -> bool {
        a < self.node_count && self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Hop distance between two nodes.
    pub fn dist(&self, a: NodeId, b: NodeId) -> u32 {
        self.dist[a * self.node_count + b]
    }

    pub fn dist_to_sink(&self, node: NodeId) -> u32 {
        self.dist(node, self.sink)
    }

    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    /// `d_I + 2`.
    pub fn gamma(&self) -> u32 {
        self.radius + 2
    }

    /// `floor((d_I + 1) / 2)`, the radius of the ball around the sink in which
    /// at most one packet can make progress per round.
    pub fn gamma0(&self) -> u32 {
        self.radius.div_ceil(2)
    }

    /// The greedy's approximation factor `gamma / gamma0` as an exact ratio.
    pub fn blocking_factor(&self) -> Time {
        Ratio::new(self.gamma() as i64, self.gamma0() as i64)
    }

    /// Full distance matrix as rows.
    pub fn distances(&self) -> Vec<Vec<u32>> {
        self.dist
            .chunks(self.node_count)
            .map(|row| row.to_vec())
            .collect()
    }
}

fn all_pairs_hops(adjacency: &[Vec<NodeId>]) -> Result<Vec<u32>, ModelError> {
    let n = adjacency.len();
    let mut dist = vec![u32::MAX; n * n];
    let mut queue = VecDeque::with_capacity(n);
    for src in 0..n {
        let row = &mut dist[src * n..(src + 1) * n];
        row[src] = 0;
        queue.clear();
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = row[u];
            for &v in &adjacency[u] {
                if row[v] == u32::MAX {
                    row[v] = du + 1;
                    queue.push_back(v);
                }
            }
        }
        if let Some(unreachable) = row.iter().position(|&d| d == u32::MAX) {
            return Err(ModelError::Disconnected {
                from: src,
                unreachable,
            });
        }
    }
    Ok(dist)
}

/// Hop-distance matrix of a network.
pub fn distances(network: &Network) -> Vec<Vec<u32>> {
    network.distances()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Packet {
    pub origin: NodeId,
    pub release: u64,
}

/// A network together with the packets to be gathered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub network: Network,
    pub packets: Vec<Packet>,
}

impl Instance {
    pub fn new(network: Network, packets: Vec<Packet>) -> Result<Self, ModelError> {
        for (packet, p) in packets.iter().enumerate() {
            if p.origin >= network.node_count() {
                return Err(ModelError::BadOrigin {
                    packet,
                    origin: p.origin,
                });
            }
        }
        Ok(Instance { network, packets })
    }

    pub fn packet_count(&self) -> usize {
        self.packets.len()
    }

    pub fn release(&self, j: PacketId) -> u64 {
        self.packets[j].release
    }

    pub fn max_release(&self) -> u64 {
        self.packets.iter().map(|p| p.release).max().unwrap_or(0)
    }

    /// Minimum number of calls packet `j` needs to reach the sink.
    pub fn sink_distance(&self, j: PacketId) -> u32 {
        self.network.dist_to_sink(self.packets[j].origin)
    }

    /// Hops packet `j` must make inside the `gamma0` ball around the sink:
    /// `min(sink_distance, gamma0)`.
    pub fn ball_hops(&self, j: PacketId) -> u32 {
        self.sink_distance(j).min(self.network.gamma0())
    }

    /// Earliest round at which packet `j` can enter the `gamma0` ball:
    /// `release + sink_distance - ball_hops`.
    pub fn ball_entry(&self, j: PacketId) -> u64 {
        self.release(j) + (self.sink_distance(j) - self.ball_hops(j)) as u64
    }

    /// Copy with every release date multiplied by `factor`.
    pub fn with_scaled_releases(&self, factor: u64) -> Instance {
        Instance {
            network: self.network.clone(),
            packets: self
                .packets
                .iter()
                .map(|p| Packet {
                    origin: p.origin,
                    release: p.release * factor,
                })
                .collect(),
        }
    }
}

/// One-hop transmission of a packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Call {
    pub packet: PacketId,
    pub from: NodeId,
    pub to: NodeId,
}

impl Call {
    pub fn new(packet: PacketId, from: NodeId, to: NodeId) -> Self {
        Call { packet, from, to }
    }
}

impl fmt::Display for Call {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}:{}->{}", self.packet, self.from, self.to)
    }
}

/// Two calls in the same round are compatible unless either sender lies within
/// the interference radius of the other call's receiver.
pub fn compatible(a: &Call, b: &Call, network: &Network) -> bool {
    let r = network.radius();
    network.dist(b.from, a.to) > r && network.dist(a.from, b.to) > r
}

/// Rounds of calls executed at speed `sigma`: round index `t` occupies real time
/// `[t/sigma, (t+1)/sigma)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub sigma: u32,
    pub rounds: Vec<Vec<Call>>,
}

impl Schedule {
    pub fn new(sigma: u32, mut rounds: Vec<Vec<Call>>) -> Self {
        for round in &mut rounds {
            round.sort();
        }
        Schedule { sigma, rounds }
    }

    pub fn unit(rounds: Vec<Vec<Call>>) -> Self {
        Schedule::new(1, rounds)
    }

    pub fn call_count(&self) -> usize {
        self.rounds.iter().map(Vec::len).sum()
    }
}
