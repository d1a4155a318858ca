use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wgp_core::format::{write_instance, write_schedule};
use wgp_core::generators::{
    gen_ibm_reduction, gen_standard, gen_trap, ibm_matching_schedule, random_corpus,
    trap_adversary_schedule, CorpusSpec, OriginPolicy, ReleasePolicy, StandardParams, Topology,
};
use wgp_core::matching::BipartiteGraph;
use wgp_core::report::ratio_display;
use wgp_core::{Instance, Schedule};

use crate::error::CliError;
use crate::io::{emit, note, save};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TopologyArg {
    Line,
    Star,
    Grid,
    Random,
    Trap,
    Ibm,
    Corpus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReleasesArg {
    Zero,
    Poisson,
}

#[derive(Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub topology: TopologyArg,
    /// Node count (line, random); largest node count (corpus).
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub leaves: Option<usize>,
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub height: Option<usize>,
    /// Edge probability (random graphs, extra edges of the four-layer network).
    #[arg(long)]
    pub p: Option<f64>,
    /// Packet count; ignored with `--origins per-node`. Largest count for corpus.
    #[arg(long, default_value_t = 1)]
    pub packets: usize,
    /// per-node, farthest, uniform, or a node id.
    #[arg(long, default_value = "farthest")]
    pub origins: String,
    #[arg(long, value_enum, default_value_t = ReleasesArg::Zero)]
    pub releases: ReleasesArg,
    /// Mean gap between consecutive releases for `--releases poisson`.
    #[arg(long, default_value_t = 2.0)]
    pub mean_gap: f64,
    #[arg(long = "d-i", default_value_t = 1)]
    pub d_i: u32,
    /// Required whenever the output depends on random choices.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Packet groups (trap, ibm).
    #[arg(long, default_value_t = 1)]
    pub phases: usize,
    /// Planted induced matching size (ibm).
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long)]
    pub u_size: Option<usize>,
    #[arg(long)]
    pub v_size: Option<usize>,
    /// Explicit bipartite edges `u-v,u-v,...` (ibm); the planted matching is
    /// then the first `k` listed edges.
    #[arg(long)]
    pub edges: Option<String>,
    /// Instance count (corpus).
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    /// Constructed schedule output (trap, ibm).
    #[arg(long)]
    pub schedule_out: Option<PathBuf>,
    /// Output file, or directory for corpus; standard output if absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn need<T: Copy>(value: Option<T>, flag: &str, topology: &str) -> Result<T, CliError> {
    value.ok_or_else(|| usage(format!("--{flag} is required for {topology}")))
}

fn need_seed(args: &GenerateArgs, why: &str) -> Result<u64, CliError> {
    args.seed
        .ok_or_else(|| usage(format!("--seed is required for {why}")))
}

fn origin_policy(text: &str) -> Result<OriginPolicy, CliError> {
    match text {
        "per-node" => Ok(OriginPolicy::PerNode),
        "farthest" => Ok(OriginPolicy::Farthest),
        "uniform" => Ok(OriginPolicy::Uniform),
        other => other
            .parse()
            .map(OriginPolicy::Fixed)
            .map_err(|_| usage(format!("unknown origin policy {other:?}"))),
    }
}

fn parse_edges(text: &str) -> Result<Vec<(usize, usize)>, CliError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (u, v) = pair
                .split_once('-')
                .ok_or_else(|| usage(format!("edge {pair:?} is not of the form u-v")))?;
            let u = u
                .trim()
                .parse()
                .map_err(|_| usage(format!("bad edge {pair:?}")))?;
            let v = v
                .trim()
                .parse()
                .map_err(|_| usage(format!("bad edge {pair:?}")))?;
            Ok((u, v))
        })
        .collect()
}

/// Graph, planted matching, and a description for the file comment.
type Planted = (BipartiteGraph, Vec<(usize, usize)>, String);

/// Bipartite graph with the planted matching `(i, i)` for `i < k`, plus
/// optional random edges that leave the matching induced.
fn planted_graph(args: &GenerateArgs) -> Result<Planted, CliError> {
    let k = args.k;
    let left = args.u_size.unwrap_or(k);
    let right = args.v_size.unwrap_or(k);
    if let Some(text) = &args.edges {
        let edges = parse_edges(text)?;
        if edges.len() < k {
            return Err(usage(format!(
                "--edges lists {} edges, fewer than k = {k}",
                edges.len()
            )));
        }
        let matching = edges[..k].to_vec();
        let graph =
            BipartiteGraph::new(left, right, edges.clone()).map_err(|e| usage(e.to_string()))?;
        return Ok((graph, matching, format!("edges={text}")));
    }
    if left < k || right < k {
        return Err(usage("--u-size and --v-size must be at least k"));
    }
    let mut edges: Vec<(usize, usize)> = (0..k).map(|i| (i, i)).collect();
    let mut desc = String::from("planted");
    if let Some(p) = args.p {
        if !(0.0..=1.0).contains(&p) {
            return Err(usage("--p must lie in [0, 1]"));
        }
        let seed = need_seed(args, "random extra edges")?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for u in 0..left {
            for v in 0..right {
                if (u >= k || v >= k) && rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        desc = format!("planted p={p} seed={seed}");
    }
    let matching = edges[..k].to_vec();
    let graph = BipartiteGraph::new(left, right, edges).map_err(|e| usage(e.to_string()))?;
    Ok((graph, matching, desc))
}

fn standard(args: &GenerateArgs, name: &str) -> Result<(Instance, String), CliError> {
    let topology = match args.topology {
        TopologyArg::Line => Topology::Line {
            nodes: need(args.nodes, "nodes", name)?,
        },
        TopologyArg::Star => Topology::Star {
            leaves: need(args.leaves, "leaves", name)?,
        },
        TopologyArg::Grid => Topology::Grid {
            width: need(args.width, "width", name)?,
            height: need(args.height, "height", name)?,
        },
        TopologyArg::Random => Topology::Random {
            nodes: need(args.nodes, "nodes", name)?,
            edge_prob: need(args.p, "p", name)?,
        },
        _ => unreachable!("not a standard topology"),
    };
    let origins = origin_policy(&args.origins)?;
    let releases = match args.releases {
        ReleasesArg::Zero => ReleasePolicy::Zero,
        ReleasesArg::Poisson => ReleasePolicy::Spaced {
            mean_gap: args.mean_gap,
        },
    };
    let random = matches!(topology, Topology::Random { .. })
        || origins == OriginPolicy::Uniform
        || matches!(releases, ReleasePolicy::Spaced { .. });
    let seed = if random {
        need_seed(
            args,
            "random topologies, uniform origins and poisson releases",
        )?
    } else {
        args.seed.unwrap_or(0)
    };
    let params = StandardParams {
        topology,
        radius: args.d_i,
        packets: args.packets,
        origins,
        releases,
    };
    let instance = gen_standard(&params, seed)?;
    let mut desc = format!(
        "wgp generate --topology {name} {} d_I={} packets={} origins={} releases={}",
        match topology {
            Topology::Line { nodes } => format!("nodes={nodes}"),
            Topology::Star { leaves } => format!("leaves={leaves}"),
            Topology::Grid { width, height } => format!("width={width} height={height}"),
            Topology::Random { nodes, edge_prob } => format!("nodes={nodes} p={edge_prob}"),
        },
        args.d_i,
        args.packets,
        args.origins,
        match releases {
            ReleasePolicy::Zero => "zero".to_string(),
            ReleasePolicy::Spaced { mean_gap } => format!("poisson mean_gap={mean_gap}"),
        }
    );
    if random {
        desc.push_str(&format!(" seed={seed}"));
    }
    Ok((instance, desc))
}

fn summary(instance: &Instance) -> String {
    let net = &instance.network;
    format!(
        "nodes {} packets {} d_I {} gamma/gamma0 {}",
        net.node_count(),
        instance.packet_count(),
        net.radius(),
        ratio_display(&net.blocking_factor())
    )
}

fn corpus(args: &GenerateArgs) -> Result<(), CliError> {
    let dir = args
        .output
        .as_ref()
        .ok_or_else(|| usage("corpus needs -o DIRECTORY"))?;
    let seed = need_seed(args, "corpus")?;
    let spec = CorpusSpec {
        max_nodes: args.nodes.unwrap_or(CorpusSpec::default().max_nodes),
        max_packets: args.packets.max(1),
        ..CorpusSpec::default()
    };
    let instances = random_corpus(seed, args.count, &spec)?;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let width = args.count.saturating_sub(1).to_string().len().max(3);
    for (i, inst) in instances.iter().enumerate() {
        let comment = format!(
            "wgp generate --topology corpus seed={seed} nodes<={} packets<={} index={i}",
            spec.max_nodes, spec.max_packets
        );
        let path = dir.join(format!("inst_{i:0width$}.json"));
        save(&path, &write_instance(inst, Some(&comment)))?;
    }
    println!("wrote {} instances to {}", instances.len(), dir.display());
    Ok(())
}

pub fn run(args: &GenerateArgs) -> Result<(), CliError> {
    if args.topology != TopologyArg::Trap
        && args.topology != TopologyArg::Ibm
        && args.schedule_out.is_some()
    {
        return Err(usage("--schedule-out applies only to trap and ibm"));
    }
    if args.topology == TopologyArg::Corpus {
        return corpus(args);
    }
    let (instance, comment, schedule): (Instance, String, Option<Schedule>) = match args.topology {
        TopologyArg::Trap => {
            let instance = gen_trap(args.phases)?;
            let schedule = match args.schedule_out {
                Some(_) => Some(trap_adversary_schedule(&instance)?),
                None => None,
            };
            let comment = format!("wgp generate --topology trap phases={}", args.phases);
            (instance, comment, schedule)
        }
        TopologyArg::Ibm => {
            let (graph, matching, desc) = planted_graph(args)?;
            let red = gen_ibm_reduction(&graph, args.k, args.phases)?;
            let schedule = match args.schedule_out {
                Some(_) => Some(ibm_matching_schedule(&red, &matching)?),
                None => None,
            };
            let comment = format!(
                "wgp generate --topology ibm k={} phases={} u={} v={} {desc}",
                args.k,
                args.phases,
                graph.left(),
                graph.right()
            );
            (red.instance, comment, schedule)
        }
        _ => {
            let name = args
                .topology
                .to_possible_value()
                .expect("named")
                .get_name()
                .to_string();
            let (instance, comment) = standard(args, &name)?;
            (instance, comment, None)
        }
    };
    emit(
        args.output.as_deref(),
        &write_instance(&instance, Some(&comment)),
    )?;
    if let (Some(path), Some(schedule)) = (&args.schedule_out, &schedule) {
        save(path, &write_schedule(schedule))?;
    }
    note(args.output.is_none(), &summary(&instance));
    Ok(())
}
