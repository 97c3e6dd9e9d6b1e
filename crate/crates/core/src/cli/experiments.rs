//! Runs plan cells in parallel and writes traces, fronts, the summary table
//! and the timing table.
//!
//! Output layout of a run directory:
//!
//! * `trace_{alg}_{problem}_d{d}_s{seed}.csv`, one per cell, trace schema.
//! * `front_{alg}_{problem}_d{d}_s{seed}.csv`, final objective vectors, one
//!   per line, no header.
//! * `summary.csv`, one row per (algorithm, problem, dimension).
//! * `timing.csv`, one row per (algorithm, dimension).

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::cli::plan::ExperimentPlan;
use crate::error::{Error, Result};
use crate::optimizer::{run_strategy, RunOutcome, Strategy, TraceOptions};
use crate::problems::{LsmopId, LsmopInstance};
use crate::trace::{format_real, RunTrace};

pub const SUMMARY_FILE: &str = "summary.csv";
pub const TIMING_FILE: &str = "timing.csv";

pub const SUMMARY_HEADER: [&str; 11] = [
    "algorithm",
    "problem",
    "dimension",
    "runs",
    "failed",
    "mean_sp",
    "median_sp",
    "mean_igd",
    "median_igd",
    "mean_elapsed_ms",
    "error",
];

pub const TIMING_HEADER: [&str; 5] = ["algorithm", "dimension", "runs", "mean_elapsed_ms", "mean_io_ms"];

/// One (algorithm, problem, dimension, seed) combination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub strategy: Strategy,
    pub problem: LsmopId,
    pub dimension: usize,
    pub seed: u64,
}

impl Cell {
    pub fn stem(&self) -> String {
        format!("{}_{}_d{}_s{}", self.strategy.name(), self.problem, self.dimension, self.seed)
    }

    pub fn trace_file(&self) -> String {
        format!("trace_{}.csv", self.stem())
    }

    pub fn front_file(&self) -> String {
        format!("front_{}.csv", self.stem())
    }
}

/// Final figures of a finished cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CellOutcome {
    pub sp: Option<f64>,
    pub igd: Option<f64>,
    pub evaluations: u64,
    pub iterations: u64,
    pub elapsed_ms: f64,
    pub io_ms: f64,
}

#[derive(Clone, Debug)]
pub struct CellResult {
    pub cell: Cell,
    /// Error message on failure.
    pub outcome: std::result::Result<CellOutcome, String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub algorithm: String,
    pub problem: String,
    pub dimension: usize,
    pub runs: usize,
    pub failed: usize,
    pub mean_sp: Option<f64>,
    pub median_sp: Option<f64>,
    pub mean_igd: Option<f64>,
    pub median_igd: Option<f64>,
    pub mean_elapsed_ms: Option<f64>,
    /// `seed N: message` entries joined by `; `, empty when every run passed.
    pub error: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimingRow {
    pub algorithm: String,
    pub dimension: usize,
    pub runs: usize,
    pub mean_elapsed_ms: f64,
    pub mean_io_ms: f64,
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub cells: Vec<CellResult>,
    pub summary: Vec<SummaryRow>,
    pub timing: Vec<TimingRow>,
}

impl ExperimentReport {
    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| c.outcome.is_err()).count()
    }
}

/// Every cell of `plan` for each of `strategies`, in a fixed order.
pub fn plan_cells(plan: &ExperimentPlan, strategies: &[Strategy]) -> Vec<Cell> {
    let mut cells = Vec::with_capacity(strategies.len() * plan.cell_count());
    for &strategy in strategies {
        for &problem in &plan.problems {
            for &dimension in &plan.dimensions {
                for &seed in &plan.seeds {
                    cells.push(Cell {
                        strategy,
                        problem,
                        dimension,
                        seed,
                    });
                }
            }
        }
    }
    cells
}

/// Runs one cell in memory.
pub fn run_cell(plan: &ExperimentPlan, cell: &Cell) -> Result<RunOutcome<f64>> {
    let problem = LsmopInstance::<f64>::new(cell.problem, plan.objectives, cell.dimension)?;
    let options = TraceOptions {
        reference: Some(problem.reference_front(plan.reference_points)?),
        igd_distance: plan.igd_distance,
        record_timing: plan.timing,
    };
    let config = crate::optimizer::OptimizerConfig {
        seed: cell.seed,
        ..plan.optimizer
    };
    run_strategy(&problem, config, cell.strategy, &options)
}

/// The uniform random baseline on one (problem, dimension, seed) cell.
pub fn run_baseline(plan: &ExperimentPlan, problem: LsmopId, dimension: usize, seed: u64) -> Result<RunTrace> {
    let cell = Cell {
        strategy: Strategy::UniformRandom,
        problem,
        dimension,
        seed,
    };
    Ok(run_cell(plan, &cell)?.trace)
}

fn execute_cell(plan: &ExperimentPlan, cell: &Cell, dir: &Path) -> Result<CellOutcome> {
    let outcome = run_cell(plan, cell)?;
    let io_start = Instant::now();
    let mut w = BufWriter::new(File::create(dir.join(cell.trace_file()))?);
    outcome.trace.write_csv(&mut w)?;
    w.flush()?;
    write_points(dir.join(cell.front_file()), &outcome.final_front())?;
    let io_ms = io_start.elapsed().as_secs_f64() * 1e3;
    let last = outcome.trace.last().ok_or(Error::Empty("trace"))?;
    Ok(CellOutcome {
        sp: last.sp,
        igd: last.igd,
        evaluations: last.evals,
        iterations: last.iter,
        elapsed_ms: last.elapsed_ms,
        io_ms,
    })
}

/// Runs every cell of `plan` for `strategies` with at most `jobs` worker
/// threads, then writes `summary.csv` and `timing.csv` into `plan.output`.
/// Cell failures are recorded, not raised; check
/// [`ExperimentReport::failures`].
pub fn run_experiments(plan: &ExperimentPlan, strategies: &[Strategy], jobs: usize) -> Result<ExperimentReport> {
    let dir = plan.output.clone();
    fs::create_dir_all(&dir)?;
    let cells = plan_cells(plan, strategies);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let results: Vec<CellResult> = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| CellResult {
                cell: *cell,
                outcome: execute_cell(plan, cell, &dir).map_err(|e| e.to_string()),
            })
            .collect()
    });
    let summary = summarize(&results);
    let timing = timing_table(&results);
    write_summary(dir.join(SUMMARY_FILE), &summary)?;
    write_timing(dir.join(TIMING_FILE), &timing)?;
    Ok(ExperimentReport {
        cells: results,
        summary,
        timing,
    })
}

fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Median with the two middle values averaged for even counts.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

/// Groups cell results by (algorithm, problem, dimension), keeping the order
/// of first appearance.
pub fn summarize(results: &[CellResult]) -> Vec<SummaryRow> {
    let mut groups: Vec<((Strategy, LsmopId, usize), Vec<&CellResult>)> = Vec::new();
    for r in results {
        let key = (r.cell.strategy, r.cell.problem, r.cell.dimension);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(r),
            None => groups.push((key, vec![r])),
        }
    }
    groups
        .into_iter()
        .map(|((strategy, problem, dimension), members)| {
            let ok: Vec<&CellOutcome> = members.iter().filter_map(|m| m.outcome.as_ref().ok()).collect();
            let sp: Vec<f64> = ok.iter().filter_map(|o| o.sp).collect();
            let igd: Vec<f64> = ok.iter().filter_map(|o| o.igd).collect();
            let elapsed: Vec<f64> = ok.iter().map(|o| o.elapsed_ms).collect();
            let error = members
                .iter()
                .filter_map(|m| m.outcome.as_ref().err().map(|e| format!("seed {}: {e}", m.cell.seed)))
                .collect::<Vec<_>>()
                .join("; ");
            SummaryRow {
                algorithm: strategy.name().to_string(),
                problem: problem.to_string(),
                dimension,
                runs: members.len(),
                failed: members.len() - ok.len(),
                mean_sp: mean(&sp),
                median_sp: median(&sp),
                mean_igd: mean(&igd),
                median_igd: median(&igd),
                mean_elapsed_ms: mean(&elapsed),
                error,
            }
        })
        .collect()
}

/// Mean elapsed and I/O time per (algorithm, dimension) over successful cells.
pub fn timing_table(results: &[CellResult]) -> Vec<TimingRow> {
    let mut groups: Vec<((Strategy, usize), Vec<&CellOutcome>)> = Vec::new();
    for r in results {
        let Ok(o) = &r.outcome else { continue };
        let key = (r.cell.strategy, r.cell.dimension);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(o),
            None => groups.push((key, vec![o])),
        }
    }
    groups
        .into_iter()
        .map(|((strategy, dimension), members)| {
            let elapsed: Vec<f64> = members.iter().map(|o| o.elapsed_ms).collect();
            let io: Vec<f64> = members.iter().map(|o| o.io_ms).collect();
            TimingRow {
                algorithm: strategy.name().to_string(),
                dimension,
                runs: members.len(),
                mean_elapsed_ms: mean(&elapsed).unwrap_or(0.0),
                mean_io_ms: mean(&io).unwrap_or(0.0),
            }
        })
        .collect()
}

fn opt_real(x: Option<f64>) -> String {
    x.map(format_real).unwrap_or_default()
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

pub fn write_summary(path: impl AsRef<Path>, rows: &[SummaryRow]) -> Result<()> {
    let mut out = csv_writer(BufWriter::new(File::create(path)?));
    out.write_record(SUMMARY_HEADER)?;
    for r in rows {
        out.write_record([
            r.algorithm.clone(),
            r.problem.clone(),
            r.dimension.to_string(),
            r.runs.to_string(),
            r.failed.to_string(),
            opt_real(r.mean_sp),
            opt_real(r.median_sp),
            opt_real(r.mean_igd),
            opt_real(r.median_igd),
            opt_real(r.mean_elapsed_ms),
            r.error.clone(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

fn schema(path: &Path, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.display().to_string(),
        message: message.into(),
    }
}

fn check_header(path: &Path, found: &csv::StringRecord, expected: &[&str]) -> Result<()> {
    if found.iter().ne(expected.iter().copied()) {
        return Err(schema(path, format!("expected header `{}`", expected.join(","))));
    }
    Ok(())
}

pub fn read_summary(path: impl AsRef<Path>) -> Result<Vec<SummaryRow>> {
    let path = path.as_ref();
    let mut rdr = csv::Reader::from_path(path)?;
    check_header(path, rdr.headers()?, &SUMMARY_HEADER)?;
    let mut rows = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let bad = |col: &str| schema(path, format!("row {}: malformed column `{col}`", n + 1));
        let get = |i: usize| rec.get(i).unwrap_or("");
        let count = |i: usize| get(i).parse::<usize>().map_err(|_| bad(SUMMARY_HEADER[i]));
        let real = |i: usize| -> Result<Option<f64>> {
            let s = get(i);
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| bad(SUMMARY_HEADER[i]))
            }
        };
        rows.push(SummaryRow {
            algorithm: get(0).to_string(),
            problem: get(1).to_string(),
            dimension: count(2)?,
            runs: count(3)?,
            failed: count(4)?,
            mean_sp: real(5)?,
            median_sp: real(6)?,
            mean_igd: real(7)?,
            median_igd: real(8)?,
            mean_elapsed_ms: real(9)?,
            error: get(10).to_string(),
        });
    }
    Ok(rows)
}

pub fn write_timing(path: impl AsRef<Path>, rows: &[TimingRow]) -> Result<()> {
    let mut out = csv_writer(BufWriter::new(File::create(path)?));
    out.write_record(TIMING_HEADER)?;
    for r in rows {
        out.write_record([
            r.algorithm.clone(),
            r.dimension.to_string(),
            r.runs.to_string(),
            format_real(r.mean_elapsed_ms),
            format_real(r.mean_io_ms),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Writes points as headerless comma-separated rows.
pub fn write_points<P: AsRef<[f64]>>(path: impl AsRef<Path>, points: &[P]) -> Result<()> {
    let mut out = csv_writer(BufWriter::new(File::create(path)?));
    for p in points {
        out.write_record(p.as_ref().iter().map(|&v| format_real(v)))?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_points_from<R: Read>(r: R, origin: &str) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(r);
    let mut points: Vec<Vec<f64>> = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row: Vec<f64> = rec
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Schema {
                path: origin.to_string(),
                message: format!("row {}: not a list of numbers", n + 1),
            })?;
        if let Some(first) = points.first() {
            if first.len() != row.len() {
                return Err(Error::Schema {
                    path: origin.to_string(),
                    message: format!("row {}: {} columns, expected {}", n + 1, row.len(), first.len()),
                });
            }
        }
        points.push(row);
    }
    Ok(points)
}

/// Reads a headerless point file.
pub fn read_points(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    let path = path.as_ref();
    read_points_from(BufReader::new(File::open(path)?), &path.display().to_string())
}

/// Trace files in `dir` belonging to one summary group, sorted by name.
fn group_traces(dir: &Path, row: &SummaryRow) -> Result<Vec<PathBuf>> {
    let prefix = format!("trace_{}_{}_d{}_s", row.algorithm, row.problem, row.dimension);
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with(&prefix) && n.ends_with(".csv"))
        })
        .collect();
    files.sort();
    Ok(files)
}

fn close(a: Option<f64>, b: Option<f64>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => x == y || (x - y).abs() <= 1e-12 * x.abs().max(y.abs()),
        _ => false,
    }
}

/// Recomputes every summary row of `dir` from its trace files and returns a
/// description of each disagreement. Empty means the summary is consistent.
pub fn verify_summary(dir: impl AsRef<Path>) -> Result<Vec<String>> {
    let dir = dir.as_ref();
    let rows = read_summary(dir.join(SUMMARY_FILE))?;
    let mut problems = Vec::new();
    for row in &rows {
        let label = format!("{} {} d{}", row.algorithm, row.problem, row.dimension);
        let mut sp = Vec::new();
        let mut igd = Vec::new();
        let mut elapsed = Vec::new();
        let files = group_traces(dir, row)?;
        for f in &files {
            let trace = RunTrace::read_csv(BufReader::new(File::open(f)?), &f.display().to_string())?;
            let last = trace
                .last()
                .ok_or_else(|| schema(f, "trace has no rows"))?;
            sp.extend(last.sp);
            igd.extend(last.igd);
            elapsed.push(last.elapsed_ms);
        }
        let successful = row.runs - row.failed;
        if files.len() != successful {
            problems.push(format!(
                "{label}: {} trace files for {successful} successful runs",
                files.len()
            ));
        }
        let checks = [
            ("mean_sp", row.mean_sp, mean(&sp)),
            ("median_sp", row.median_sp, median(&sp)),
            ("mean_igd", row.mean_igd, mean(&igd)),
            ("median_igd", row.median_igd, median(&igd)),
            ("mean_elapsed_ms", row.mean_elapsed_ms, mean(&elapsed)),
        ];
        for (name, stored, recomputed) in checks {
            if !close(stored, recomputed) {
                problems.push(format!("{label}: {name} is {stored:?}, traces give {recomputed:?}"));
            }
        }
    }
    Ok(problems)
}
