//! Cross-checks of the exact solver against a plain layered breadth-first
//! search, and of compatible call sets against induced matchings.

use std::collections::HashSet;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wgp_core::format::read_instance;
use wgp_core::generators::{gen_ibm_reduction, random_corpus, CorpusSpec};
use wgp_core::matching::{is_induced_matching, max_induced_matching, BipartiteGraph};
use wgp_core::oracle::{
    enumerate_call_sets, maximal_compatible_sets, solve_exact, Objective, OracleConfig,
    OracleOutcome, SearchState,
};
use wgp_core::schedulers::{ball_entry_greedy, fifo};
use wgp_core::{compatible, validate_schedule, Call, Instance, Time};

/// Every pairwise-compatible call set in a state, by direct enumeration.
fn brute_sets(inst: &Instance, round: u64, pos: &[usize]) -> Vec<Vec<Call>> {
    let net = &inst.network;
    let mut out = vec![vec![]];
    for (j, &at) in pos.iter().enumerate() {
        if at == net.sink() || inst.release(j) > round {
            continue;
        }
        let mut next = out.clone();
        for set in &out {
            for &v in net.neighbors(at) {
                let c = Call::new(j, at, v);
                if set.iter().all(|x| compatible(x, &c, net)) {
                    let mut s = set.clone();
                    s.push(c);
                    next.push(s);
                }
            }
        }
        out = next;
    }
    out
}

/// Can every packet meet its deadline? Layered reachability over positions.
fn bfs_feasible(inst: &Instance, deadlines: &[u64], maximal_only: bool) -> bool {
    let sink = inst.network.sink();
    if inst
        .packets
        .iter()
        .zip(deadlines)
        .any(|(p, &d)| p.origin == sink && p.release > d)
    {
        return false;
    }
    let horizon = deadlines.iter().copied().max().unwrap_or(0);
    let mut layer: HashSet<Vec<usize>> = HashSet::new();
    layer.insert(inst.packets.iter().map(|p| p.origin).collect());
    for t in 0..=horizon {
        layer.retain(|pos| pos.iter().zip(deadlines).all(|(&x, &d)| x == sink || t < d));
        if layer.iter().any(|pos| pos.iter().all(|&x| x == sink)) {
            return true;
        }
        let mut next = HashSet::new();
        for pos in &layer {
            let sets = if maximal_only {
                let state = SearchState {
                    round: t,
                    positions: pos.clone(),
                };
                enumerate_call_sets(&state, inst)
            } else {
                brute_sets(inst, t, pos)
            };
            for set in sets {
                let mut p = pos.clone();
                for c in &set {
                    p[c.packet] = c.to;
                }
                next.insert(p);
            }
        }
        layer = next;
    }
    false
}

fn bfs_optimum(inst: &Instance, objective: Objective, maximal_only: bool) -> u64 {
    (0..)
        .find(|&v| {
            let deadlines: Vec<u64> = inst
                .packets
                .iter()
                .map(|p| match objective {
                    Objective::MaxCompletion => v,
                    Objective::MaxFlow => p.release + v,
                })
                .collect();
            bfs_feasible(inst, &deadlines, maximal_only)
        })
        .unwrap()
}

fn optimal(
    inst: &Instance,
    objective: Objective,
    config: &OracleConfig,
) -> (u64, wgp_core::Schedule) {
    match solve_exact(inst, objective, config).unwrap() {
        OracleOutcome::Optimal {
            value, schedule, ..
        } => (value, schedule),
        other => panic!("budget exhausted: {other:?}"),
    }
}

fn int(v: u64) -> Time {
    Ratio::from_integer(v as i64)
}

#[test]
fn solver_matches_breadth_first_search() {
    let spec = CorpusSpec {
        max_nodes: 7,
        max_packets: 4,
        max_release: 4,
        ..CorpusSpec::default()
    };
    let corpus = random_corpus(11, 200, &spec).unwrap();
    for (i, inst) in corpus.iter().enumerate() {
        for objective in [Objective::MaxCompletion, Objective::MaxFlow] {
            let expect = bfs_optimum(inst, objective, false);
            for ball_pruning in [false, true] {
                let config = OracleConfig {
                    ball_pruning,
                    ..OracleConfig::default()
                };
                let (value, schedule) = optimal(inst, objective, &config);
                assert_eq!(
                    value, expect,
                    "instance {i} {objective:?} ball={ball_pruning}"
                );
                let m = validate_schedule(inst, &schedule).unwrap();
                let achieved = match objective {
                    Objective::MaxCompletion => m.max_completion,
                    Objective::MaxFlow => m.max_flow,
                };
                assert_eq!(achieved, int(value), "instance {i}");
            }
        }
    }
}

#[test]
fn maximal_sets_alone_miss_the_optimum() {
    let inst = read_instance(
        r#"{"nodes":8,"edges":[[0,1],[1,2],[2,3],[3,4],[4,5],[5,6],[6,7]],"sink":0,"d_I":1,"packets":[{"origin":4,"release":2},{"origin":5,"release":3}]}"#,
    )
    .unwrap()
    .instance;
    assert_eq!(bfs_optimum(&inst, Objective::MaxCompletion, false), 9);
    assert_eq!(bfs_optimum(&inst, Objective::MaxCompletion, true), 10);
    assert_eq!(
        optimal(&inst, Objective::MaxCompletion, &OracleConfig::default()).0,
        9
    );
}

#[test]
fn oracle_dominates_greedy_and_relates_objectives() {
    let corpus = random_corpus(5, 80, &CorpusSpec::default()).unwrap();
    let config = OracleConfig::default();
    for inst in &corpus {
        let (c_opt, _) = optimal(inst, Objective::MaxCompletion, &config);
        let (f_opt, _) = optimal(inst, Objective::MaxFlow, &config);
        for run in [fifo(inst).unwrap(), ball_entry_greedy(inst).unwrap()] {
            let m = validate_schedule(inst, &run.schedule).unwrap();
            assert!(int(c_opt) <= m.max_completion);
            assert!(int(f_opt) <= m.max_flow);
        }
        assert!(f_opt + inst.max_release() >= c_opt);
    }
}

fn random_bipartite(rng: &mut ChaCha8Rng, max_side: usize) -> BipartiteGraph {
    let left = rng.random_range(1..=max_side);
    let right = rng.random_range(1..=max_side);
    let p = rng.random_range(0.15..0.6);
    let mut edges = Vec::new();
    for u in 0..left {
        for v in 0..right {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 0));
    }
    BipartiteGraph::new(left, right, edges).unwrap()
}

/// Calls along every graph edge, left to right, in the four-layer network.
fn crossing_calls(graph: &BipartiteGraph) -> (Instance, Vec<Call>) {
    let red = gen_ibm_reduction(graph, 1, 1).unwrap();
    let calls = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| Call::new(i, red.left_node(u), red.right_node(v)))
        .collect();
    (red.instance, calls)
}

#[test]
fn largest_call_set_is_maximum_induced_matching() {
    let mut rng = ChaCha8Rng::seed_from_u64(314);
    for _ in 0..60 {
        let graph = random_bipartite(&mut rng, 10);
        let (inst, calls) = crossing_calls(&graph);
        let best = maximal_compatible_sets(&inst.network, &calls)
            .iter()
            .map(Vec::len)
            .max()
            .unwrap();
        assert_eq!(best, max_induced_matching(&graph).len());
    }
}

#[test]
fn compatible_sets_are_induced_matchings() {
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    let mut checked = 0;
    while checked < 40 {
        let graph = random_bipartite(&mut rng, 5);
        if graph.edges().len() > 12 {
            continue;
        }
        checked += 1;
        let (inst, calls) = crossing_calls(&graph);
        let e = graph.edges();
        for mask in 0u32..(1 << e.len()) {
            let chosen: Vec<usize> = (0..e.len()).filter(|i| mask & (1 << i) != 0).collect();
            let pairwise = chosen.iter().enumerate().all(|(a, &i)| {
                chosen[a + 1..]
                    .iter()
                    .all(|&k| compatible(&calls[i], &calls[k], &inst.network))
            });
            let edges: Vec<_> = chosen.iter().map(|&i| e[i]).collect();
            assert_eq!(pairwise, is_induced_matching(&graph, &edges), "{edges:?}");
        }
    }
}
