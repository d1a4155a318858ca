//! Benchmark instances: standard topologies, seeded random corpora, and the two
//! adversarial constructions together with their hand-built schedules.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use thiserror::Error;

use crate::matching::{is_induced_matching, BipartiteGraph};
use crate::model::{Call, Instance, ModelError, Network, NodeId, Packet, Schedule};
use crate::validate::{validate_schedule, ScheduleError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("no connected random graph after {0} attempts")]
    NotConnected(usize),
    #[error("matching has {got} edges, expected {want}")]
    MatchingSize { got: usize, want: usize },
    #[error("matching is not an induced matching of the graph")]
    NotInduced,
    #[error("constructed schedule is infeasible: {0}")]
    Schedule(#[from] ScheduleError),
    #[error("instance is not a trap instance")]
    NotTrap,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Topology {
    /// Path `0 - 1 - ... - (nodes-1)`, sink 0.
    Line { nodes: usize },
    /// Sink 0 at the center, leaves `1..=leaves`.
    Star { leaves: usize },
    /// `width x height` grid, node `y * width + x`, sink 0.
    Grid { width: usize, height: usize },
    /// Erdos-Renyi graph, resampled until connected, sink 0.
    Random { nodes: usize, edge_prob: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OriginPolicy {
    /// One packet on every non-sink node; the packet count is ignored.
    PerNode,
    /// All packets on the node farthest from the sink (lowest id on ties).
    Farthest,
    Fixed(NodeId),
    /// Uniform over non-sink nodes.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReleasePolicy {
    Zero,
    /// First release 0, then Poisson-distributed integer gaps with this mean.
    Spaced {
        mean_gap: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StandardParams {
    pub topology: Topology,
    pub radius: u32,
    pub packets: usize,
    pub origins: OriginPolicy,
    pub releases: ReleasePolicy,
}

const CONNECT_ATTEMPTS: usize = 10_000;

fn param(msg: impl Into<String>) -> GenError {
    GenError::Param(msg.into())
}

fn build_network(
    topology: Topology,
    radius: u32,
    rng: &mut ChaCha8Rng,
) -> Result<Network, GenError> {
    match topology {
        Topology::Line { nodes } => {
            if nodes == 0 {
                return Err(param("line needs at least one node"));
            }
            Ok(Network::new(
                nodes,
                (1..nodes).map(|i| (i - 1, i)),
                0,
                radius,
            )?)
        }
        Topology::Star { leaves } => {
            if leaves == 0 {
                return Err(param("star needs at least one leaf"));
            }
            Ok(Network::new(
                leaves + 1,
                (1..=leaves).map(|i| (0, i)),
                0,
                radius,
            )?)
        }
        Topology::Grid { width, height } => {
            if width == 0 || height == 0 {
                return Err(param("grid sides must be at least 1"));
            }
            let id = |x: usize, y: usize| y * width + x;
            let mut edges = Vec::new();
            for y in 0..height {
                for x in 0..width {
                    if x + 1 < width {
                        edges.push((id(x, y), id(x + 1, y)));
                    }
                    if y + 1 < height {
                        edges.push((id(x, y), id(x, y + 1)));
                    }
                }
            }
            Ok(Network::new(width * height, edges, 0, radius)?)
        }
        Topology::Random { nodes, edge_prob } => {
            if nodes == 0 {
                return Err(param("random graph needs at least one node"));
            }
            if !(edge_prob > 0.0 && edge_prob <= 1.0) {
                return Err(param("edge probability must lie in (0, 1]"));
            }
            for _ in 0..CONNECT_ATTEMPTS {
                let mut edges = Vec::new();
                for a in 0..nodes {
                    for b in a + 1..nodes {
                        if rng.random_bool(edge_prob) {
                            edges.push((a, b));
                        }
                    }
                }
                match Network::new(nodes, edges, 0, radius) {
                    Ok(net) => return Ok(net),
                    Err(ModelError::Disconnected { .. }) => continue,
                    Err(e) => return Err(e.into()),
                }
            }
            Err(GenError::NotConnected(CONNECT_ATTEMPTS))
        }
    }
}

/// Seeded instance on a standard topology. Same parameters and seed always give
/// the same instance.
pub fn gen_standard(params: &StandardParams, seed: u64) -> Result<Instance, GenError> {
    if params.radius == 0 {
        return Err(param("interference radius must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let net = build_network(params.topology, params.radius, &mut rng)?;
    let sink = net.sink();
    let n = net.node_count();

    let origins: Vec<NodeId> = match params.origins {
        OriginPolicy::PerNode => (0..n).filter(|&v| v != sink).collect(),
        OriginPolicy::Farthest => {
            let far = (0..n)
                .max_by_key(|&v| (net.dist_to_sink(v), std::cmp::Reverse(v)))
                .unwrap_or(sink);
            vec![far; params.packets]
        }
        OriginPolicy::Fixed(v) => {
            if v >= n {
                return Err(param(format!("origin {v} out of range")));
            }
            vec![v; params.packets]
        }
        OriginPolicy::Uniform => {
            let pool: Vec<NodeId> = (0..n).filter(|&v| v != sink).collect();
            if pool.is_empty() {
                vec![sink; params.packets]
            } else {
                (0..params.packets)
                    .map(|_| pool[rng.random_range(0..pool.len())])
                    .collect()
            }
        }
    };

    let releases: Vec<u64> = match params.releases {
        ReleasePolicy::Zero => vec![0; origins.len()],
        ReleasePolicy::Spaced { mean_gap } => {
            let gaps = Poisson::new(mean_gap).map_err(|_| param("mean gap must be positive"))?;
            let mut t = 0u64;
            (0..origins.len())
                .map(|i| {
                    if i > 0 {
                        t += gaps.sample(&mut rng) as u64;
                    }
                    t
                })
                .collect()
        }
    };

    let packets = origins
        .into_iter()
        .zip(releases)
        .map(|(origin, release)| Packet { origin, release })
        .collect();
    Ok(Instance::new(net, packets)?)
}

/// Shape of a seeded random test corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub max_packets: usize,
    pub radii: Vec<u32>,
    pub max_release: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            min_nodes: 3,
            max_nodes: 8,
            max_packets: 4,
            radii: vec![1, 2],
            max_release: 6,
        }
    }
}

/// `count` small instances mixing random graphs with lines, stars and grids.
/// Packets start anywhere, the sink included, with uniform release dates.
pub fn random_corpus(
    seed: u64,
    count: usize,
    spec: &CorpusSpec,
) -> Result<Vec<Instance>, GenError> {
    if spec.radii.is_empty()
        || spec.min_nodes < 2
        || spec.max_nodes < spec.min_nodes
        || spec.max_packets == 0
    {
        return Err(param("bad corpus shape"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let nodes = rng.random_range(spec.min_nodes..=spec.max_nodes);
            let radius = spec.radii[rng.random_range(0..spec.radii.len())];
            let topology = match rng.random_range(0..10) {
                0 => Topology::Line { nodes },
                1 => Topology::Star { leaves: nodes - 1 },
                2 if nodes >= 4 => Topology::Grid {
                    width: 2,
                    height: nodes / 2,
                },
                _ => Topology::Random {
                    nodes,
                    edge_prob: rng.random_range(0.25..0.7),
                },
            };
            let net = build_network(topology, radius, &mut rng)?;
            let m = rng.random_range(1..=spec.max_packets);
            let packets = (0..m)
                .map(|_| Packet {
                    origin: rng.random_range(0..net.node_count()),
                    release: rng.random_range(0..=spec.max_release),
                })
                .collect();
            Ok(Instance::new(net, packets)?)
        })
        .collect()
}

/// Four-layer network built from a bipartite graph: source, clique on the left
/// side, clique on the right side, sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IbmReduction {
    pub instance: Instance,
    pub graph: BipartiteGraph,
    pub k: usize,
    pub phases: usize,
}

impl IbmReduction {
    pub fn source(&self) -> NodeId {
        0
    }

    pub fn left_node(&self, i: usize) -> NodeId {
        1 + i
    }

    pub fn right_node(&self, i: usize) -> NodeId {
        1 + self.graph.left() + i
    }

    pub fn sink(&self) -> NodeId {
        1 + self.graph.left() + self.graph.right()
    }
}

/// `k * phases` packets at the source, group `h` released at `(k + 1) h`,
/// interference radius 1.
pub fn gen_ibm_reduction(
    graph: &BipartiteGraph,
    k: usize,
    phases: usize,
) -> Result<IbmReduction, GenError> {
    if k == 0 || phases == 0 {
        return Err(param("k and phases must be at least 1"));
    }
    let (l, r) = (graph.left(), graph.right());
    let left = |i: usize| 1 + i;
    let right = |i: usize| 1 + l + i;
    let sink = 1 + l + r;
    let mut edges = Vec::new();
    edges.extend((0..l).map(|i| (0, left(i))));
    edges.extend((0..r).map(|i| (right(i), sink)));
    for a in 0..l {
        edges.extend((a + 1..l).map(|b| (left(a), left(b))));
    }
    for a in 0..r {
        edges.extend((a + 1..r).map(|b| (right(a), right(b))));
    }
    edges.extend(graph.edges().iter().map(|&(u, v)| (left(u), right(v))));
    let net = Network::new(sink + 1, edges, sink, 1)?;
    let packets = (0..phases)
        .flat_map(|h| {
            (0..k).map(move |_| Packet {
                origin: 0,
                release: ((k + 1) * h) as u64,
            })
        })
        .collect();
    Ok(IbmReduction {
        instance: Instance::new(net, packets)?,
        graph: graph.clone(),
        k,
        phases,
    })
}

/// Phase-by-phase schedule driven by an induced matching `(u_i, v_i)` of size
/// `k`. In round `i < k` of each phase the `i`th new packet moves from the
/// source to `u_i` while the previous phase's packet at `v_{(i+1) mod k}` moves
/// to the sink; in round `k` all new packets cross their matching edges.
///
/// The schedule is replayed before it is returned, so an interfering plan is an
/// error rather than an invalid schedule.
pub fn ibm_matching_schedule(
    red: &IbmReduction,
    matching: &[(usize, usize)],
) -> Result<Schedule, GenError> {
    let k = red.k;
    if matching.len() != k {
        return Err(GenError::MatchingSize {
            got: matching.len(),
            want: k,
        });
    }
    if !is_induced_matching(&red.graph, matching) {
        return Err(GenError::NotInduced);
    }
    let phase_len = k + 1;
    let total = phase_len * red.phases + k;
    let mut rounds: Vec<Vec<Call>> = vec![Vec::new(); total];
    for h in 0..=red.phases {
        let base = phase_len * h;
        for i in 0..k {
            if h < red.phases {
                let j = h * k + i;
                rounds[base + i].push(Call::new(j, red.source(), red.left_node(matching[i].0)));
            }
            if h > 0 {
                let prev = (i + 1) % k;
                let j = (h - 1) * k + prev;
                rounds[base + i].push(Call::new(j, red.right_node(matching[prev].1), red.sink()));
            }
        }
        if h < red.phases {
            for (i, &(u, v)) in matching.iter().enumerate() {
                rounds[base + k].push(Call::new(h * k + i, red.left_node(u), red.right_node(v)));
            }
        }
    }
    let schedule = Schedule::unit(rounds);
    validate_schedule(&red.instance, &schedule)?;
    Ok(schedule)
}

const TRAP_NODES: usize = 15;
const TRAP_SINK: NodeId = 0;
const TRAP_HUB: NodeId = 1;
const TRAP_ARC: NodeId = 2;
const TRAP_PERIOD: u64 = 5;

/// Node at `step` (0..4) of side path `side` (0..3); step 0 is the packet origin
/// adjacent to the hub, step 3 is adjacent to the sink.
pub fn trap_side_node(side: usize, step: usize) -> NodeId {
    3 + 4 * side + step
}

/// Trap network: hub `u` joined to the three origins and to the sink through
/// the two-hop arc `u - q - s`; each origin also has a private four-hop path to
/// the sink. Three packets, one per origin, every 5 rounds; radius 1.
pub fn gen_trap(phases: usize) -> Result<Instance, GenError> {
    if phases == 0 {
        return Err(param("phases must be at least 1"));
    }
    let mut edges = vec![(TRAP_HUB, TRAP_ARC), (TRAP_ARC, TRAP_SINK)];
    for side in 0..3 {
        edges.push((TRAP_HUB, trap_side_node(side, 0)));
        for step in 0..3 {
            edges.push((trap_side_node(side, step), trap_side_node(side, step + 1)));
        }
        edges.push((trap_side_node(side, 3), TRAP_SINK));
    }
    let net = Network::new(TRAP_NODES, edges, TRAP_SINK, 1)?;
    let packets = (0..phases as u64)
        .flat_map(|i| {
            (0..3).map(move |side| Packet {
                origin: trap_side_node(side, 0),
                release: TRAP_PERIOD * i,
            })
        })
        .collect();
    Ok(Instance::new(net, packets)?)
}

/// Off-hub schedule for a trap instance: the packets of phase `i` walk their
/// side paths in rounds `5i..5i+2` and enter the sink one per round in
/// `5i+3, 5i+4, 5i+5`.
pub fn trap_adversary_schedule(instance: &Instance) -> Result<Schedule, GenError> {
    let m = instance.packet_count();
    if m == 0 || !m.is_multiple_of(3) || *instance != gen_trap(m / 3)? {
        return Err(GenError::NotTrap);
    }
    let mut by_round: BTreeMap<usize, Vec<Call>> = BTreeMap::new();
    for phase in 0..m / 3 {
        let start = TRAP_PERIOD as usize * phase;
        for side in 0..3 {
            let j = 3 * phase + side;
            for step in 0..3 {
                by_round.entry(start + step).or_default().push(Call::new(
                    j,
                    trap_side_node(side, step),
                    trap_side_node(side, step + 1),
                ));
            }
            by_round
                .entry(start + 3 + side)
                .or_default()
                .push(Call::new(j, trap_side_node(side, 3), TRAP_SINK));
        }
    }
    let len = by_round.keys().last().map_or(0, |&t| t + 1);
    let mut rounds = vec![Vec::new(); len];
    for (t, calls) in by_round {
        rounds[t] = calls;
    }
    Ok(Schedule::unit(rounds))
}
