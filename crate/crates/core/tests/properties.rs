use num_rational::Ratio;
use proptest::prelude::*;
use proptest::sample::Index;
use wgp_core::bounds::{lower_bound, upper_bound, BlockingForest};
use wgp_core::format::{read_instance, read_schedule, write_instance, write_schedule};
use wgp_core::schedulers::{
    ball_entry_greedy, fifo, priority_greedy, shortest_path_tree, sigma_fifo, Priority,
};
use wgp_core::{compatible, validate_schedule, Call, Instance, Network, Packet, Schedule, Time};

#[derive(Debug, Clone)]
struct Raw {
    nodes: usize,
    edges: Vec<(usize, usize)>,
    sink: usize,
    radius: u32,
    packets: Vec<(usize, u64)>,
}

impl Raw {
    fn network(&self, radius: u32) -> Network {
        Network::new(self.nodes, self.edges.iter().copied(), self.sink, radius).unwrap()
    }

    fn instance(&self) -> Instance {
        let packets = self
            .packets
            .iter()
            .map(|&(origin, release)| Packet { origin, release })
            .collect();
        Instance::new(self.network(self.radius), packets).unwrap()
    }
}

/// Connected graph: a random spanning tree plus a few extra edges.
fn arb_raw() -> impl Strategy<Value = Raw> {
    (2usize..=8).prop_flat_map(|n| {
        (
            proptest::collection::vec(any::<Index>(), n - 1),
            proptest::collection::vec((0..n, 0..n), 0..n),
            0..n,
            1u32..=4,
            proptest::collection::vec((0..n, 0u64..6), 1..=4),
        )
            .prop_map(move |(parents, extra, sink, radius, packets)| {
                let mut edges: Vec<(usize, usize)> = parents
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (p.index(i + 1), i + 1))
                    .collect();
                for (a, b) in extra {
                    let e = (a.min(b), a.max(b));
                    if a != b && !edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == e) {
                        edges.push(e);
                    }
                }
                Raw {
                    nodes: n,
                    edges,
                    sink,
                    radius,
                    packets,
                }
            })
    })
}

fn arb_with_order() -> impl Strategy<Value = (Raw, Vec<usize>)> {
    arb_raw().prop_flat_map(|raw| {
        let m = raw.packets.len();
        (Just(raw), Just((0..m).collect::<Vec<_>>()).prop_shuffle())
    })
}

fn directed_edges(net: &Network) -> Vec<(usize, usize)> {
    net.edges()
        .iter()
        .flat_map(|&(a, b)| [(a, b), (b, a)])
        .collect()
}

fn int(v: u64) -> Time {
    Ratio::from_integer(v as i64)
}

/// Straightforward replay returning completion times, or `None` if any rule
/// is broken.
fn reference_replay(inst: &Instance, s: &Schedule) -> Option<Vec<Time>> {
    let net = &inst.network;
    let sink = net.sink();
    let m = inst.packet_count();
    let mut pos: Vec<usize> = inst.packets.iter().map(|p| p.origin).collect();
    let mut done: Vec<Option<Time>> = inst
        .packets
        .iter()
        .map(|p| (p.origin == sink).then(|| int(p.release)))
        .collect();
    if s.sigma == 0 {
        return None;
    }
    for (t, calls) in s.rounds.iter().enumerate() {
        for (i, a) in calls.iter().enumerate() {
            if a.packet >= m
                || done[a.packet].is_some()
                || pos[a.packet] != a.from
                || net.dist(a.from, a.to) != 1
                || (t as u64) < inst.release(a.packet) * s.sigma as u64
            {
                return None;
            }
            for b in &calls[i + 1..] {
                if a.packet == b.packet
                    || net.dist(b.from, a.to) <= net.radius()
                    || net.dist(a.from, b.to) <= net.radius()
                {
                    return None;
                }
            }
        }
        for c in calls {
            pos[c.packet] = c.to;
            if c.to == sink {
                done[c.packet] = Some(Ratio::new(t as i64 + 1, s.sigma as i64));
            }
        }
    }
    done.into_iter().collect()
}

#[derive(Debug, Clone)]
enum Mutation {
    Drop(Index, Index),
    Shift(Index, Index, bool),
    Retarget(Index, Index, Index),
    Duplicate(Index, Index),
    SwapRounds(Index, Index),
}

fn arb_mutation() -> impl Strategy<Value = Mutation> {
    prop_oneof![
        (any::<Index>(), any::<Index>()).prop_map(|(a, b)| Mutation::Drop(a, b)),
        (any::<Index>(), any::<Index>(), any::<bool>())
            .prop_map(|(a, b, c)| Mutation::Shift(a, b, c)),
        (any::<Index>(), any::<Index>(), any::<Index>())
            .prop_map(|(a, b, c)| Mutation::Retarget(a, b, c)),
        (any::<Index>(), any::<Index>()).prop_map(|(a, b)| Mutation::Duplicate(a, b)),
        (any::<Index>(), any::<Index>()).prop_map(|(a, b)| Mutation::SwapRounds(a, b)),
    ]
}

fn mutate(s: &mut Schedule, n: usize, mutation: &Mutation) {
    let nonempty: Vec<usize> = (0..s.rounds.len())
        .filter(|&t| !s.rounds[t].is_empty())
        .collect();
    if nonempty.is_empty() {
        return;
    }
    match mutation {
        Mutation::Drop(r, c) => {
            let t = nonempty[r.index(nonempty.len())];
            let i = c.index(s.rounds[t].len());
            s.rounds[t].remove(i);
        }
        Mutation::Shift(r, c, later) => {
            let t = nonempty[r.index(nonempty.len())];
            let i = c.index(s.rounds[t].len());
            let call = s.rounds[t].remove(i);
            let to = if *later { t + 1 } else { t.saturating_sub(1) };
            if to == s.rounds.len() {
                s.rounds.push(vec![]);
            }
            s.rounds[to].push(call);
        }
        Mutation::Retarget(r, c, v) => {
            let t = nonempty[r.index(nonempty.len())];
            let i = c.index(s.rounds[t].len());
            s.rounds[t][i].to = v.index(n);
        }
        Mutation::Duplicate(r, c) => {
            let t = nonempty[r.index(nonempty.len())];
            let i = c.index(s.rounds[t].len());
            let call = s.rounds[t][i];
            s.rounds[t].push(call);
        }
        Mutation::SwapRounds(a, b) => {
            let (x, y) = (a.index(s.rounds.len()), b.index(s.rounds.len()));
            s.rounds.swap(x, y);
        }
    }
}

proptest! {
    #[test]
    fn compatibility_is_symmetric_and_shrinks_with_radius(
        raw in arb_raw(),
        picks in proptest::collection::vec((any::<Index>(), any::<Index>()), 8),
    ) {
        let wide = raw.network(raw.radius + 1);
        let narrow = raw.network(raw.radius);
        let dir = directed_edges(&narrow);
        for w in picks.chunks(2) {
            let (a, b) = (dir[w[0].0.index(dir.len())], dir[w[1].1.index(dir.len())]);
            let (ca, cb) = (Call::new(0, a.0, a.1), Call::new(1, b.0, b.1));
            prop_assert_eq!(compatible(&ca, &cb, &narrow), compatible(&cb, &ca, &narrow));
            if compatible(&ca, &cb, &wide) {
                prop_assert!(compatible(&ca, &cb, &narrow));
            }
        }
    }

    #[test]
    fn touching_calls_are_incompatible(raw in arb_raw(), pick in any::<Index>()) {
        let net = raw.network(raw.radius);
        let dir = directed_edges(&net);
        let (u, v) = dir[pick.index(dir.len())];
        let call = Call::new(0, u, v);
        for &w in net.neighbors(u) {
            prop_assert!(!compatible(&call, &Call::new(1, u, w), &net));
        }
        for &w in net.neighbors(v) {
            prop_assert!(!compatible(&call, &Call::new(1, w, v), &net));
            prop_assert!(!compatible(&call, &Call::new(1, v, w), &net));
        }
    }

    #[test]
    fn greedy_runs_are_valid_shortest_and_deterministic((raw, order) in arb_with_order()) {
        let inst = raw.instance();
        let net = &inst.network;
        let priority = Priority::from_order(order).unwrap();
        let run = priority_greedy(&inst, &priority).unwrap();
        prop_assert_eq!(&run, &priority_greedy(&inst, &priority).unwrap());
        let metrics = validate_schedule(&inst, &run.schedule).unwrap();

        let mut hops = vec![0u32; inst.packet_count()];
        for c in run.schedule.rounds.iter().flatten() {
            prop_assert_eq!(net.dist_to_sink(c.to) + 1, net.dist_to_sink(c.from));
            hops[c.packet] += 1;
        }
        for (j, &h) in hops.iter().enumerate() {
            prop_assert_eq!(h, inst.sink_distance(j));
            let floor = int(inst.release(j) + inst.sink_distance(j) as u64);
            prop_assert!(metrics.completion[j] >= floor);
        }
    }

    #[test]
    fn greedy_only_idles_when_blocked((raw, order) in arb_with_order()) {
        let inst = raw.instance();
        let net = &inst.network;
        let tree = shortest_path_tree(net);
        let priority = Priority::from_order(order).unwrap();
        let run = priority_greedy(&inst, &priority).unwrap();
        let mut pos: Vec<usize> = inst.packets.iter().map(|p| p.origin).collect();
        for (t, calls) in run.schedule.rounds.iter().enumerate() {
            for (j, &at) in pos.iter().enumerate() {
                if at == net.sink() || inst.release(j) > t as u64 {
                    continue;
                }
                let own = Call::new(j, at, tree.parent(at).unwrap());
                if calls.contains(&own) {
                    // compatible with every higher-priority call in the round
                    for c in calls.iter().filter(|c| priority.outranks(c.packet, j)) {
                        prop_assert!(compatible(c, &own, net));
                    }
                } else {
                    prop_assert!(calls
                        .iter()
                        .any(|c| priority.outranks(c.packet, j) && !compatible(c, &own, net)));
                }
            }
            for c in calls {
                pos[c.packet] = c.to;
            }
        }
    }

    #[test]
    fn blocking_forest_bounds_hold((raw, order) in arb_with_order()) {
        let inst = raw.instance();
        let runs = [
            fifo(&inst).unwrap(),
            ball_entry_greedy(&inst).unwrap(),
            priority_greedy(&inst, &Priority::from_order(order).unwrap()).unwrap(),
        ];
        for run in &runs {
            let metrics = validate_schedule(&inst, &run.schedule).unwrap();
            let forest = BlockingForest::from_run(&inst, run);
            for j in 0..inst.packet_count() {
                if let Some(k) = forest.parent(j) {
                    prop_assert!(run.priority.outranks(k, j));
                }
                prop_assert!(metrics.completion[j] <= upper_bound(&inst, &forest, j));
            }
            for tree in forest.trees() {
                let worst = tree.iter().map(|&j| metrics.completion[j]).max().unwrap();
                prop_assert!(int(lower_bound(&inst, &tree).unwrap()) <= worst);
            }
        }
    }

    #[test]
    fn sped_up_fifo_is_valid(raw in arb_raw(), sigma in 1u32..=6) {
        let inst = raw.instance();
        let run = sigma_fifo(&inst, sigma).unwrap();
        prop_assert_eq!(run.schedule.sigma, sigma);
        let metrics = validate_schedule(&inst, &run.schedule).unwrap();
        for j in 0..inst.packet_count() {
            let floor = int(inst.release(j))
                + Ratio::new(inst.sink_distance(j) as i64, sigma as i64);
            prop_assert!(metrics.completion[j] >= floor);
        }
    }

    #[test]
    fn validator_agrees_with_reference_replay(
        raw in arb_raw(),
        mutations in proptest::collection::vec(arb_mutation(), 1..4),
    ) {
        let inst = raw.instance();
        let mut schedule = fifo(&inst).unwrap().schedule;
        for m in &mutations {
            mutate(&mut schedule, raw.nodes, m);
        }
        let got = validate_schedule(&inst, &schedule).ok().map(|m| m.completion);
        prop_assert_eq!(got, reference_replay(&inst, &schedule));
    }

    #[test]
    fn files_round_trip(raw in arb_raw()) {
        let inst = raw.instance();
        let doc = read_instance(&write_instance(&inst, Some("x"))).unwrap();
        prop_assert_eq!(&doc.instance, &inst);
        prop_assert_eq!(doc.comment.as_deref(), Some("x"));
        let schedule = sigma_fifo(&inst, 3).unwrap().schedule;
        prop_assert_eq!(read_schedule(&write_schedule(&schedule)).unwrap(), schedule);
    }
}
