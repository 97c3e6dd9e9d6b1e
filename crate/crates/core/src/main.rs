use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ltppm::cli::experiments::{read_points, run_experiments, verify_summary, write_points};
use ltppm::cli::plan::{parse_plan, ExperimentPlan};
use ltppm::metrics::{igd_with, spacing, IgdDistance};
use ltppm::problems::ReferenceFront;
use ltppm::{LsmopId, Strategy};

#[derive(Parser)]
#[command(name = "ltppm", version, about = "Large-scale multi-objective optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every cell of a plan (plus the baseline when the plan enables it).
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Output directory, overriding the plan's `output`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run only the uniform random baseline over a plan.
    Baseline {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SP and IGD of a front file against a reference file.
    Metrics {
        #[arg(long)]
        front: PathBuf,
        #[arg(long)]
        reference: PathBuf,
        /// Use squared distances inside IGD.
        #[arg(long)]
        igd_squared: bool,
    },
    /// Write a problem's reference front as a point file.
    Reference {
        #[arg(long)]
        problem: LsmopId,
        #[arg(long, default_value_t = 3)]
        objectives: usize,
        #[arg(long, default_value_t = 1000)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a run directory's summary against its trace files.
    Verify {
        #[arg(long)]
        dir: PathBuf,
    },
}

fn load_plan(config: &PathBuf, out: Option<PathBuf>) -> ltppm::Result<ExperimentPlan> {
    let text = fs::read_to_string(config)?;
    let mut plan = parse_plan(&text).map_err(|e| match e {
        ltppm::Error::Parse { line, key, message } => ltppm::Error::Schema {
            path: config.display().to_string(),
            message: format!("line {line}: key `{key}`: {message}"),
        },
        other => other,
    })?;
    plan.apply_seed_env()?;
    if let Some(dir) = out {
        plan.output = dir;
    }
    Ok(plan)
}

fn experiments(plan: &ExperimentPlan, strategies: &[Strategy], jobs: usize) -> ltppm::Result<bool> {
    let report = run_experiments(plan, strategies, jobs)?;
    for row in &report.summary {
        println!(
            "{} {} d{}: runs {} failed {} median IGD {} median SP {}",
            row.algorithm,
            row.problem,
            row.dimension,
            row.runs,
            row.failed,
            row.median_igd.map_or("-".into(), |v| format!("{v:.4e}")),
            row.median_sp.map_or("-".into(), |v| format!("{v:.4e}")),
        );
    }
    let failed = report.failures();
    if failed > 0 {
        eprintln!("{failed} of {} cells failed; see summary.csv", report.cells.len());
    }
    Ok(failed == 0)
}

fn execute(cli: Cli) -> ltppm::Result<bool> {
    match cli.command {
        Command::Run { config, jobs, out } => {
            let plan = load_plan(&config, out)?;
            let strategies: &[Strategy] = if plan.baseline {
                &[Strategy::TrendPrediction, Strategy::UniformRandom]
            } else {
                &[Strategy::TrendPrediction]
            };
            experiments(&plan, strategies, jobs)
        }
        Command::Baseline { config, jobs, out } => {
            let plan = load_plan(&config, out)?;
            experiments(&plan, &[Strategy::UniformRandom], jobs)
        }
        Command::Metrics {
            front,
            reference,
            igd_squared,
        } => {
            let front = read_points(&front)?;
            let reference = read_points(&reference)?;
            let kind = if igd_squared {
                IgdDistance::Squared
            } else {
                IgdDistance::Euclidean
            };
            let igd: f64 = igd_with(&reference, &front, kind)?;
            let sp = spacing::<f64, _>(&front).ok();
            println!("front_size,reference_size,sp,igd");
            println!(
                "{},{},{},{}",
                front.len(),
                reference.len(),
                sp.map(ltppm::trace::format_real).unwrap_or_default(),
                ltppm::trace::format_real(igd)
            );
            Ok(true)
        }
        Command::Reference {
            problem,
            objectives,
            points,
            out,
        } => {
            let front = ReferenceFront::<f64>::for_shape(problem.shape(), objectives, points)?;
            write_points(&out, front.points())?;
            Ok(true)
        }
        Command::Verify { dir } => {
            let problems = verify_summary(&dir)?;
            for p in &problems {
                eprintln!("{p}");
            }
            if problems.is_empty() {
                println!("summary matches traces");
            }
            Ok(problems.is_empty())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
