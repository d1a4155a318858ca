//! Exact solver for small gathering instances.
//!
//! The optimum is found by iterative deepening on the objective value. For a
//! candidate value every packet gets a deadline (the value itself for maximum
//! completion, `r_j + value` for maximum flow) and a depth-first search over
//! rounds decides whether all deadlines can be met. Each round branches over
//! every set of pairwise-compatible calls, where a released packet may be sent
//! to any neighbor, so non-shortest routes and waiting are both explored.
//!
//! Pruning is admissible only:
//! - a packet at `x` needs `max(t, r_j) + d(x, s)` rounds;
//! - the sink receives at most one packet per round, so earliest arrivals and
//!   deadlines must admit distinct completion rounds;
//! - optionally, the ball-entry lower bound of [`crate::bounds::lower_bound`]
//!   on every subset of the remaining packets;
//! - a state that failed at round `t` fails at every later round with the same
//!   packet positions, since the earlier state can wait into the later one.
//!
//! The greedy schedulers give the initial upper bound: if every smaller value
//! is infeasible the best greedy schedule is optimal. If the node budget runs
//! out the result is [`OracleOutcome::Unknown`], never a guessed optimum.

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{compatible, Call, Instance, Network, NodeId, Schedule};
use crate::schedulers::{ball_entry_greedy, fifo, SchedulerError};
use crate::validate::validate_schedule;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    MaxCompletion,
    MaxFlow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleConfig {
    /// Search nodes (expanded states) allowed across the whole solve.
    pub node_budget: u64,
    pub max_packets: usize,
    pub max_nodes: usize,
    /// Also prune with the ball-entry subset bound.
    pub ball_pruning: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            max_packets: 5,
            max_nodes: 12,
            ball_pruning: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance too large for the exact solver ({packets} packets, {nodes} nodes; limits {max_packets} and {max_nodes})")]
    TooLarge {
        packets: usize,
        nodes: usize,
        max_packets: usize,
        max_nodes: usize,
    },
    #[error("no feasible upper bound: {0}")]
    Infeasible(#[from] SchedulerError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Optimal {
        value: u64,
        schedule: Schedule,
        nodes: u64,
    },
    /// Budget exhausted; the optimum lies in `lower..=upper`.
    Unknown { lower: u64, upper: u64, nodes: u64 },
}

impl OracleOutcome {
    pub fn value(&self) -> Option<u64> {
        match self {
            OracleOutcome::Optimal { value, .. } => Some(*value),
            OracleOutcome::Unknown { .. } => None,
        }
    }

    pub fn nodes(&self) -> u64 {
        match self {
            OracleOutcome::Optimal { nodes, .. } | OracleOutcome::Unknown { nodes, .. } => *nodes,
        }
    }
}

/// Round index plus the node holding each packet (the sink once delivered).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SearchState {
    pub round: u64,
    pub positions: Vec<NodeId>,
}

impl SearchState {
    pub fn initial(instance: &Instance) -> Self {
        SearchState {
            round: 0,
            positions: instance.packets.iter().map(|p| p.origin).collect(),
        }
    }
}

fn candidate_calls(state: &SearchState, instance: &Instance) -> Vec<Call> {
    let net = &instance.network;
    let mut calls = Vec::new();
    for (j, &at) in state.positions.iter().enumerate() {
        if at == net.sink() || instance.release(j) > state.round {
            continue;
        }
        calls.extend(net.neighbors(at).iter().map(|&v| Call::new(j, at, v)));
    }
    calls
}

/// Every inclusion-maximal set of pairwise-compatible calls drawn from
/// `candidates`, at most one call per packet. Each set is sorted and the list
/// is sorted lexicographically.
pub fn maximal_compatible_sets(network: &Network, candidates: &[Call]) -> Vec<Vec<Call>> {
    let n = candidates.len();
    let ok = |a: usize, b: usize| {
        candidates[a].packet != candidates[b].packet
            && compatible(&candidates[a], &candidates[b], network)
    };
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|a| (0..n).map(|b| a != b && ok(a, b)).collect())
        .collect();

    // Bron-Kerbosch with pivoting over the compatibility graph.
    fn expand(
        r: &mut Vec<usize>,
        p: Vec<usize>,
        x: Vec<usize>,
        adj: &[Vec<bool>],
        out: &mut Vec<Vec<usize>>,
    ) {
        if p.is_empty() {
            if x.is_empty() {
                out.push(r.clone());
            }
            return;
        }
        let pivot = p
            .iter()
            .chain(&x)
            .copied()
            .max_by_key(|&u| p.iter().filter(|&&v| adj[u][v]).count())
            .unwrap();
        let mut p = p;
        let mut x = x;
        let branch: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
        for v in branch {
            r.push(v);
            let np = p.iter().copied().filter(|&w| adj[v][w]).collect();
            let nx = x.iter().copied().filter(|&w| adj[v][w]).collect();
            expand(r, np, nx, adj, out);
            r.pop();
            p.retain(|&w| w != v);
            x.push(v);
        }
    }

    let mut found = Vec::new();
    expand(
        &mut Vec::new(),
        (0..n).collect(),
        Vec::new(),
        &adj,
        &mut found,
    );
    let mut sets: Vec<Vec<Call>> = found
        .into_iter()
        .map(|idx| {
            let mut s: Vec<Call> = idx.into_iter().map(|i| candidates[i]).collect();
            s.sort();
            s
        })
        .collect();
    sets.sort();
    sets.dedup();
    sets
}

/// Maximal compatible call sets available in `state`, plus the empty (wait)
/// set, which comes first.
pub fn enumerate_call_sets(state: &SearchState, instance: &Instance) -> Vec<Vec<Call>> {
    let candidates = candidate_calls(state, instance);
    let mut sets = vec![Vec::new()];
    if !candidates.is_empty() {
        sets.extend(maximal_compatible_sets(&instance.network, &candidates));
    }
    sets
}

/// Every set of pairwise-compatible calls, one call per packet at most,
/// including the empty set. `movable` lists, per packet, the calls it may make.
fn all_compatible_sets(network: &Network, movable: &[Vec<Call>]) -> Vec<Vec<Call>> {
    fn rec(
        i: usize,
        movable: &[Vec<Call>],
        network: &Network,
        cur: &mut Vec<Call>,
        out: &mut Vec<Vec<Call>>,
    ) {
        if i == movable.len() {
            out.push(cur.clone());
            return;
        }
        rec(i + 1, movable, network, cur, out);
        for call in &movable[i] {
            if cur.iter().all(|c| compatible(c, call, network)) {
                cur.push(*call);
                rec(i + 1, movable, network, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(0, movable, network, &mut Vec::new(), &mut out);
    out
}

struct Exhausted;

struct Search<'a> {
    instance: &'a Instance,
    deadlines: Vec<u64>,
    /// Packets with equal class are interchangeable (same release and deadline).
    class: Vec<usize>,
    ball_pruning: bool,
    memo: HashMap<Vec<u16>, u64>,
    path: Vec<Vec<Call>>,
    nodes: u64,
    budget: u64,
}

impl<'a> Search<'a> {
    fn new(
        instance: &'a Instance,
        deadlines: Vec<u64>,
        ball_pruning: bool,
        nodes: u64,
        budget: u64,
    ) -> Self {
        let m = instance.packet_count();
        let class = (0..m)
            .map(|j| {
                (0..=j)
                    .find(|&i| {
                        instance.release(i) == instance.release(j) && deadlines[i] == deadlines[j]
                    })
                    .unwrap()
            })
            .collect();
        Search {
            instance,
            deadlines,
            class,
            ball_pruning,
            memo: HashMap::new(),
            path: Vec::new(),
            nodes,
            budget,
        }
    }

    fn net(&self) -> &Network {
        &self.instance.network
    }

    fn key(&self, positions: &[NodeId]) -> Vec<u16> {
        let mut key: Vec<(usize, u16)> = positions
            .iter()
            .enumerate()
            .map(|(j, &x)| (self.class[j], x as u16))
            .collect();
        key.sort_unstable();
        key.into_iter().map(|(_, x)| x).collect()
    }

    /// Admissible feasibility test for `(round, positions)`.
    fn bound_ok(&self, round: u64, positions: &[NodeId]) -> bool {
        let net = self.net();
        let sink = net.sink();
        let mut pending: Vec<(u64, u64, u32)> = Vec::with_capacity(positions.len());
        for (j, &x) in positions.iter().enumerate() {
            if x == sink {
                continue;
            }
            let start = round.max(self.instance.release(j));
            let d = net.dist_to_sink(x);
            let earliest = start + d as u64;
            if earliest > self.deadlines[j] {
                return false;
            }
            pending.push((earliest, self.deadlines[j], d));
        }
        // distinct completion rounds at the sink, earliest deadline first
        pending.sort_unstable();
        let mut open: Vec<u64> = Vec::new();
        let mut next = 0usize;
        let mut clock = 0u64;
        while next < pending.len() || !open.is_empty() {
            if open.is_empty() {
                clock = clock.max(pending[next].0);
            }
            while next < pending.len() && pending[next].0 <= clock {
                open.push(pending[next].1);
                next += 1;
            }
            let (i, &deadline) = open
                .iter()
                .enumerate()
                .min_by_key(|&(_, d)| *d)
                .expect("nonempty");
            if clock > deadline {
                return false;
            }
            open.swap_remove(i);
            clock += 1;
        }
        if self.ball_pruning && !self.ball_bound_ok(round, positions) {
            return false;
        }
        true
    }

    fn ball_bound_ok(&self, round: u64, positions: &[NodeId]) -> bool {
        let net = self.net();
        let sink = net.sink();
        let gamma0 = net.gamma0() as u64;
        let live: Vec<(u64, u64, u64)> = positions
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != sink)
            .map(|(j, &x)| {
                let d = net.dist_to_sink(x) as u64;
                let hops = d.min(gamma0);
                let entry = round.max(self.instance.release(j)) + d - hops;
                (entry, hops, self.deadlines[j])
            })
            .collect();
        let k = live.len();
        (1u32..(1 << k)).all(|mask| {
            let members = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| live[i]);
            let (mut entry, mut hops, mut deadline) = (u64::MAX, 0, 0);
            for (e, h, d) in members {
                entry = entry.min(e);
                hops += h;
                deadline = deadline.max(d);
            }
            entry + hops <= deadline
        })
    }

    fn children(&self, round: u64, positions: &[NodeId]) -> Vec<Vec<Call>> {
        let net = self.net();
        let sink = net.sink();
        let m = positions.len();
        let mut movable: Vec<Vec<Call>> = Vec::with_capacity(m);
        for j in 0..m {
            let at = positions[j];
            let active = at != sink && self.instance.release(j) <= round;
            // of interchangeable packets sharing a node only the first may move
            let shadowed = (0..j).any(|i| positions[i] == at && self.class[i] == self.class[j]);
            if active && !shadowed {
                movable.push(
                    net.neighbors(at)
                        .iter()
                        .map(|&v| Call::new(j, at, v))
                        .collect(),
                );
            }
        }
        let mut sets = all_compatible_sets(net, &movable);
        let score = |set: &Vec<Call>| {
            let moved: i64 = set
                .iter()
                .map(|c| net.dist_to_sink(c.to) as i64 - net.dist_to_sink(c.from) as i64)
                .sum();
            (moved, std::cmp::Reverse(set.len()))
        };
        for s in &mut sets {
            s.sort();
        }
        sets.sort_by(|a, b| score(a).cmp(&score(b)).then_with(|| a.cmp(b)));
        sets
    }

    fn feasible(&mut self, round: u64, positions: &mut Vec<NodeId>) -> Result<bool, Exhausted> {
        let sink = self.net().sink();
        if positions.iter().all(|&x| x == sink) {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Exhausted);
        }
        if !self.bound_ok(round, positions) {
            return Ok(false);
        }
        let key = self.key(positions);
        if self.memo.get(&key).is_some_and(|&failed| failed <= round) {
            return Ok(false);
        }
        for set in self.children(round, positions) {
            for c in &set {
                positions[c.packet] = c.to;
            }
            self.path.push(set);
            if self.feasible(round + 1, positions)? {
                return Ok(true);
            }
            let set = self.path.pop().expect("pushed above");
            for c in &set {
                positions[c.packet] = c.from;
            }
        }
        let entry = self.memo.entry(key).or_insert(round);
        *entry = (*entry).min(round);
        Ok(false)
    }
}

fn deadlines(instance: &Instance, objective: Objective, value: u64) -> Vec<u64> {
    instance
        .packets
        .iter()
        .map(|p| match objective {
            Objective::MaxCompletion => value,
            Objective::MaxFlow => p.release + value,
        })
        .collect()
}

fn objective_value(instance: &Instance, schedule: &Schedule, objective: Objective) -> u64 {
    let metrics = validate_schedule(instance, schedule).expect("greedy schedules are feasible");
    let v = match objective {
        Objective::MaxCompletion => metrics.max_completion,
        Objective::MaxFlow => metrics.max_flow,
    };
    debug_assert!(v.is_integer());
    v.to_integer() as u64
}

/// Optimal unit-speed schedule for `objective`, or `Unknown` when the node
/// budget runs out first.
pub fn solve_exact(
    instance: &Instance,
    objective: Objective,
    config: &OracleConfig,
) -> Result<OracleOutcome, OracleError> {
    let m = instance.packet_count();
    let n = instance.network.node_count();
    if m > config.max_packets || n > config.max_nodes || n > u16::MAX as usize {
        return Err(OracleError::TooLarge {
            packets: m,
            nodes: n,
            max_packets: config.max_packets,
            max_nodes: config.max_nodes,
        });
    }

    let (upper, incumbent) = [fifo(instance)?, ball_entry_greedy(instance)?]
        .into_iter()
        .map(|run| {
            (
                objective_value(instance, &run.schedule, objective),
                run.schedule,
            )
        })
        .min_by_key(|(v, _)| *v)
        .expect("two candidates");

    let initial = SearchState::initial(instance);
    let mut nodes = 0u64;
    let mut value = 0u64;
    while value < upper {
        let probe = Search::new(
            instance,
            deadlines(instance, objective, value),
            config.ball_pruning,
            0,
            0,
        );
        if probe.bound_ok(0, &initial.positions)
            && instance
                .packets
                .iter()
                .zip(&probe.deadlines)
                .all(|(p, &d)| p.release <= d)
        {
            break;
        }
        value += 1;
    }

    while value < upper {
        let mut search = Search::new(
            instance,
            deadlines(instance, objective, value),
            config.ball_pruning,
            nodes,
            config.node_budget,
        );
        let mut positions = initial.positions.clone();
        let result = search.feasible(0, &mut positions);
        nodes = search.nodes;
        match result {
            Err(Exhausted) => {
                return Ok(OracleOutcome::Unknown {
                    lower: value,
                    upper,
                    nodes,
                })
            }
            Ok(true) => {
                return Ok(OracleOutcome::Optimal {
                    value,
                    schedule: Schedule::unit(search.path),
                    nodes,
                });
            }
            Ok(false) => value += 1,
        }
    }
    Ok(OracleOutcome::Optimal {
        value: upper,
        schedule: incumbent,
        nodes,
    })
}
