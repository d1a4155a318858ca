use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use rayon::prelude::*;
use wgp_core::oracle::{solve_exact, OracleError, OracleOutcome};
use wgp_core::report::ratio_text;
use wgp_core::{validate_schedule, Time};

use crate::commands::{greedy, objective, oracle_config};
use crate::error::CliError;
use crate::io::{emit, load_instance, note};
use crate::{Algo, ObjectiveArg, OracleArgs};

#[derive(Args)]
pub struct CompareArgs {
    /// Directory of instance files (`*.json`).
    pub dir: PathBuf,
    /// Comma-separated algorithms: fifo, pg-r, sigma-fifo.
    #[arg(long, value_delimiter = ',', default_value = "fifo,pg-r,sigma-fifo")]
    pub algos: Vec<String>,
    /// Speed for sigma-fifo; per-instance default when absent.
    #[arg(long)]
    pub sigma: Option<u32>,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Completion)]
    pub objective: ObjectiveArg,
    #[command(flatten)]
    pub oracle: OracleArgs,
    /// CSV output file.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

enum OracleCell {
    Value(u64),
    Unknown,
    TooLarge,
}

struct Outcome {
    rows: Vec<String>,
    oracle: OracleCell,
}

fn parse_algo(name: &str) -> Result<Algo, CliError> {
    match name.trim() {
        "fifo" => Ok(Algo::Fifo),
        "pg-r" => Ok(Algo::PgR),
        "sigma-fifo" => Ok(Algo::SigmaFifo),
        other => Err(CliError::Usage(format!("unknown algorithm {other:?}"))),
    }
}

fn instance_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        if path.extension().is_some_and(|x| x == "json") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn one(path: &Path, algos: &[Algo], args: &CompareArgs) -> Result<Outcome, CliError> {
    let instance = load_instance(path)?.instance;
    let config = oracle_config(&args.oracle)?;
    let obj = objective(args.objective);
    let oracle = match solve_exact(&instance, obj, &config) {
        Ok(OracleOutcome::Optimal { value, .. }) => OracleCell::Value(value),
        Ok(OracleOutcome::Unknown { .. }) => OracleCell::Unknown,
        Err(OracleError::TooLarge { .. }) => OracleCell::TooLarge,
        Err(e) => return Err(e.into()),
    };
    let name = path
        .file_name()
        .map_or_else(String::new, |n| n.to_string_lossy().into_owned());
    let mut rows = Vec::new();
    for &algo in algos {
        let sigma = if algo == Algo::SigmaFifo {
            args.sigma
        } else {
            None
        };
        let (run, sigma) = greedy(&instance, algo, sigma)?;
        let metrics = validate_schedule(&instance, &run.schedule)?;
        let achieved = match args.objective {
            ObjectiveArg::Completion => metrics.max_completion,
            ObjectiveArg::Flow => metrics.max_flow,
        };
        let (oracle_text, ratio) = match oracle {
            OracleCell::Value(v) => {
                let ratio = if v == 0 {
                    "-".to_string()
                } else {
                    ratio_text(&(achieved / Time::from_integer(v as i64)))
                };
                (v.to_string(), ratio)
            }
            OracleCell::Unknown => ("unknown".into(), "unknown".into()),
            OracleCell::TooLarge => ("too_large".into(), "too_large".into()),
        };
        rows.push(format!(
            "{name},{},{sigma},{},{},{oracle_text},{ratio}",
            algo.name(),
            ratio_text(&metrics.max_completion),
            ratio_text(&metrics.max_flow)
        ));
    }
    Ok(Outcome { rows, oracle })
}

pub fn run(args: &CompareArgs) -> Result<(), CliError> {
    let algos = args
        .algos
        .iter()
        .map(|a| parse_algo(a))
        .collect::<Result<Vec<_>, _>>()?;
    let files = instance_files(&args.dir)?;
    let outcomes: Vec<Result<Outcome, CliError>> =
        files.par_iter().map(|p| one(p, &algos, args)).collect();
    let mut csv = String::from("instance,algo,sigma,max_completion,max_flow,oracle_value,ratio\n");
    let (mut unknown, mut too_large) = (0, 0);
    for outcome in outcomes {
        let outcome = outcome?;
        match outcome.oracle {
            OracleCell::Unknown => unknown += 1,
            OracleCell::TooLarge => too_large += 1,
            OracleCell::Value(_) => {}
        }
        for row in outcome.rows {
            csv.push_str(&row);
            csv.push('\n');
        }
    }
    emit(args.output.as_deref(), &csv)?;
    note(
        args.output.is_none(),
        &format!(
            "instances {} oracle_unknown {unknown} too_large {too_large}",
            files.len()
        ),
    );
    if unknown > 0 {
        return Err(CliError::Unknown(format!(
            "{unknown} oracle results unknown"
        )));
    }
    if too_large > 0 {
        return Err(CliError::TooLarge(format!(
            "{too_large} instances too large for the oracle"
        )));
    }
    Ok(())
}
