use wgp_core::bounds::{best_tree_lower_bound, bounds_table};
use wgp_core::format::write_schedule;
use wgp_core::oracle::{solve_exact, Objective, OracleConfig, OracleOutcome, DEFAULT_NODE_BUDGET};
use wgp_core::report::{ratio_display, ratio_text};
use wgp_core::schedulers::{ball_entry_greedy, fifo, sigma_fifo, GreedyRun};
use wgp_core::{validate_schedule, Instance, ScheduleMetrics};

use crate::error::CliError;
use crate::io::{emit, load_instance, load_schedule, note, save};
use crate::{Algo, BoundsArgs, ExactArgs, ObjectiveArg, OracleArgs, RunArgs, ValidateArgs};

pub const BUDGET_ENV: &str = "WGP_NODE_BUDGET";

/// Smallest integer speed at least `gamma/gamma0 + 1`.
pub fn default_sigma(instance: &Instance) -> u32 {
    instance.network.blocking_factor().ceil().to_integer() as u32 + 1
}

/// Runs `algo`, returning the run and the speed it was read at.
pub fn greedy(
    instance: &Instance,
    algo: Algo,
    sigma: Option<u32>,
) -> Result<(GreedyRun, u32), CliError> {
    match (algo, sigma) {
        (Algo::SigmaFifo, s) => {
            let s = s.unwrap_or_else(|| default_sigma(instance));
            Ok((sigma_fifo(instance, s)?, s))
        }
        (_, Some(s)) if s != 1 => Err(CliError::Usage(format!(
            "--sigma applies only to sigma-fifo (got {s} with {})",
            algo.name()
        ))),
        (Algo::Fifo, _) => Ok((fifo(instance)?, 1)),
        (Algo::PgR, _) => Ok((ball_entry_greedy(instance)?, 1)),
    }
}

pub fn objective(arg: ObjectiveArg) -> Objective {
    match arg {
        ObjectiveArg::Completion => Objective::MaxCompletion,
        ObjectiveArg::Flow => Objective::MaxFlow,
    }
}

pub fn oracle_config(args: &OracleArgs) -> Result<OracleConfig, CliError> {
    let node_budget = match args.budget {
        Some(b) => b,
        None => match std::env::var(BUDGET_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{BUDGET_ENV} is not a node count: {v:?}")))?,
            Err(_) => DEFAULT_NODE_BUDGET,
        },
    };
    Ok(OracleConfig {
        node_budget,
        max_packets: args.max_packets,
        max_nodes: args.max_nodes,
        ball_pruning: !args.no_ball_pruning,
    })
}

fn print_metrics(metrics: &ScheduleMetrics) {
    println!("max_completion {}", ratio_display(&metrics.max_completion));
    println!("max_flow {}", ratio_display(&metrics.max_flow));
    println!("rounds {}", metrics.round_count);
}

pub fn run(args: &RunArgs) -> Result<(), CliError> {
    let instance = load_instance(&args.instance)?.instance;
    let (run, sigma) = greedy(&instance, args.algo, args.sigma)?;
    let metrics = validate_schedule(&instance, &run.schedule)?;
    println!("algo {}", args.algo.name());
    println!("sigma {sigma}");
    print_metrics(&metrics);
    if args.verbose {
        let order: Vec<String> = run.priority.order().iter().map(|j| j.to_string()).collect();
        println!("priority {}", order.join(" "));
        println!("packet\torigin\trelease\tcompletion\tflow");
        for (j, p) in instance.packets.iter().enumerate() {
            println!(
                "{j}\t{}\t{}\t{}\t{}",
                p.origin,
                p.release,
                ratio_display(&metrics.completion[j]),
                ratio_display(&metrics.flow[j])
            );
        }
    }
    if let Some(path) = &args.output {
        save(path, &write_schedule(&run.schedule))?;
    }
    Ok(())
}

pub fn exact(args: &ExactArgs) -> Result<(), CliError> {
    let instance = load_instance(&args.instance)?.instance;
    let config = oracle_config(&args.oracle)?;
    match solve_exact(&instance, objective(args.objective), &config)? {
        OracleOutcome::Optimal {
            value,
            schedule,
            nodes,
        } => {
            println!("optimum {value}");
            println!("search_nodes {nodes}");
            if let Some(path) = &args.output {
                save(path, &write_schedule(&schedule))?;
            }
            Ok(())
        }
        OracleOutcome::Unknown {
            lower,
            upper,
            nodes,
        } => {
            println!("unknown");
            println!("search_nodes {nodes}");
            Err(CliError::Unknown(format!(
                "node budget exhausted; optimum lies in {lower}..={upper}"
            )))
        }
    }
}

pub fn validate(args: &ValidateArgs) -> Result<(), CliError> {
    let instance = load_instance(&args.instance)?.instance;
    let schedule = load_schedule(&args.schedule)?;
    let metrics = validate_schedule(&instance, &schedule)?;
    println!("valid");
    println!("sigma {}", schedule.sigma);
    print_metrics(&metrics);
    println!("calls {}", schedule.call_count());
    Ok(())
}

pub fn bounds(args: &BoundsArgs) -> Result<(), CliError> {
    let instance = load_instance(&args.instance)?.instance;
    let (run, sigma) = greedy(&instance, args.algo, args.sigma)?;
    // Bounds are stated in the rounds the greedy actually ran in.
    let units = instance.with_scaled_releases(sigma as u64);
    let (forest, rows) = bounds_table(&units, &run)?;
    let mut csv = String::from("packet,root,parent,completion,upper_bound,slack\n");
    for row in &rows {
        let parent = forest
            .parent(row.packet)
            .map_or_else(|| "-".to_string(), |k| k.to_string());
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.packet,
            forest.root(row.packet),
            parent,
            ratio_text(&row.completion),
            ratio_text(&row.upper),
            ratio_text(&row.slack)
        ));
    }
    emit(args.output.as_deref(), &csv)?;
    let on_stdout = args.output.is_none();
    if sigma != 1 {
        note(on_stdout, &format!("units: rounds at speed {sigma}"));
    }
    if let Some(lb) = best_tree_lower_bound(&units, &forest) {
        note(on_stdout, &format!("best_tree_lower_bound {lb}"));
    }
    Ok(())
}
