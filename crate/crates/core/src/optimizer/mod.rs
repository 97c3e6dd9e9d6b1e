//! The generate–filter main loop.
//!
//! ```text
//! archive <- non-dominated subset of P random particles
//! while evaluations remain:
//!     offspring <- P children drawn by the trend prediction model (bandwidth h)
//!     archive   <- non-dominated subset of archive ∪ offspring
//!     archive   <- repeatedly drop the densest member until |archive| <= N
//!     h         <- h0 * r^k after k completed iterations
//! ```
//!
//! The last generation may be cut short by the budget; its evaluated
//! offspring still go through filtering.

mod archive;

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

pub use archive::{non_dominated_indices, truncate, update_archive, Archive};

use crate::error::{Error, Result};
use crate::metrics::{IgdDistance, MetricReport};
use crate::model::{evaluate_counted, Bounds, EvaluationBudget, ObjectiveVector, Particle, Problem, RandomStream};
use crate::problems::ReferenceFront;
use crate::sampling::KdeSpace;
use crate::scalar::Scalar;
use crate::tpm::{tpm_generate, StepMode, TpmConfig, DEFAULT_STEP_SCALE};
use crate::trace::{RunTrace, TraceRow};

/// Archive capacity used in the published experiments.
pub const DEFAULT_CAPACITY: usize = 300;
pub const DEFAULT_MAX_EVALUATIONS: u64 = 100_000;
pub const DEFAULT_ATTENUATION: f64 = 0.9;
pub const DEFAULT_INITIAL_BANDWIDTH: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerConfig<T> {
    /// Archive capacity `N`.
    pub capacity: usize,
    /// Offspring per generation `P`, also the initial population size.
    pub offspring: usize,
    /// Evaluation limit `e`.
    pub max_evaluations: u64,
    /// Bandwidth attenuation `r`, applied once per iteration.
    pub attenuation: T,
    /// Initial bandwidth `h0`.
    pub initial_bandwidth: T,
    pub seed: u64,
    pub step_mode: StepMode,
    pub step_scale: T,
    pub kde_space: KdeSpace,
}

impl<T: Scalar> Default for OptimizerConfig<T> {
    fn default() -> Self {
        Self {
            capacity: DEFAULT_CAPACITY,
            offspring: DEFAULT_CAPACITY,
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
            attenuation: T::of(DEFAULT_ATTENUATION),
            initial_bandwidth: T::of(DEFAULT_INITIAL_BANDWIDTH),
            seed: 0,
            step_mode: StepMode::default(),
            step_scale: T::of(DEFAULT_STEP_SCALE),
            kde_space: KdeSpace::default(),
        }
    }
}

impl<T: Scalar> OptimizerConfig<T> {
    /// Capacity `n` with `P = n` and every other field at its default.
    pub fn with_capacity(n: usize) -> Self {
        Self {
            capacity: n,
            offspring: n,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.capacity < 1 {
            return Err(Error::config("N must be at least 1"));
        }
        if self.offspring < 1 {
            return Err(Error::config("P must be at least 1"));
        }
        if self.max_evaluations < self.offspring as u64 {
            return Err(Error::config(format!(
                "e = {} must be at least P = {}",
                self.max_evaluations, self.offspring
            )));
        }
        if !(self.attenuation > T::zero() && self.attenuation < T::one()) {
            return Err(Error::config(format!("r must be in (0, 1), got {}", self.attenuation)));
        }
        if !(self.initial_bandwidth > T::zero()) || !self.initial_bandwidth.is_finite() {
            return Err(Error::config(format!(
                "h0 must be positive, got {}",
                self.initial_bandwidth
            )));
        }
        if !(self.step_scale > T::zero()) || !self.step_scale.is_finite() {
            return Err(Error::config(format!(
                "step_scale must be positive, got {}",
                self.step_scale
            )));
        }
        Ok(())
    }

    /// Bandwidth after `k` completed iterations, `h0 * r^k`.
    pub fn bandwidth_at(&self, k: u64) -> T {
        let k = i32::try_from(k).unwrap_or(i32::MAX);
        self.initial_bandwidth * self.attenuation.powi(k)
    }
}

/// `count` particles drawn uniformly from the box with uniform random unit
/// headings, evaluated, then reduced to their non-dominated subset.
pub fn initialize<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    count: usize,
    capacity: usize,
    rng: &mut RandomStream,
    budget: &mut EvaluationBudget,
) -> Result<Archive<T>> {
    if budget.remaining() < count as u64 {
        return Err(Error::config(format!(
            "initial population of {count} exceeds the {} remaining evaluations",
            budget.remaining()
        )));
    }
    let bounds = problem.bounds();
    let mut particles = Vec::with_capacity(count);
    for _ in 0..count {
        let x = bounds.sample_uniform(rng);
        let v = rng.unit_vector(problem.num_variables());
        let f = evaluate_counted(problem, &x, budget)?;
        particles.push(Particle::new(x, f, v)?);
    }
    Ok(update_archive(Archive::new(capacity), particles))
}

/// How offspring are produced each generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Importance-sampled parents moved by the trend prediction model.
    TrendPrediction,
    /// Uniform samples from the box, same filtering and budget.
    UniformRandom,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::TrendPrediction => "ltppm",
            Strategy::UniformRandom => "baseline",
        }
    }
}

/// What happened in one iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct StepReport<T> {
    pub iteration: u64,
    /// Offspring evaluated this iteration.
    pub offspring: usize,
    /// Members dropped by non-dominated filtering (old members and offspring).
    pub dominated: usize,
    /// Members dropped by density truncation.
    pub truncated: usize,
    /// Bandwidth used during the iteration.
    pub bandwidth_used: T,
    /// Bandwidth after decay.
    pub bandwidth: T,
    pub evaluations: u64,
    pub elapsed: Duration,
    /// Wall time spent inside objective evaluations.
    pub evaluation_time: Duration,
}

struct TimedProblem<'a, P: ?Sized> {
    inner: &'a P,
    nanos: AtomicU64,
}

impl<'a, T: Scalar, P: Problem<T> + ?Sized> Problem<T> for TimedProblem<'a, P> {
    fn num_variables(&self) -> usize {
        self.inner.num_variables()
    }

    fn num_objectives(&self) -> usize {
        self.inner.num_objectives()
    }

    fn bounds(&self) -> &Bounds<T> {
        self.inner.bounds()
    }

    fn evaluate(&self, x: &[T]) -> Result<ObjectiveVector<T>> {
        let start = Instant::now();
        let out = self.inner.evaluate(x);
        self.nanos
            .fetch_add(start.elapsed().as_nanos() as u64, Ordering::Relaxed);
        out
    }
}

/// Stepwise driver of one run.
pub struct Optimizer<'a, T: Scalar, P: Problem<T> + ?Sized> {
    problem: &'a P,
    config: OptimizerConfig<T>,
    strategy: Strategy,
    rng: RandomStream,
    budget: EvaluationBudget,
    archive: Archive<T>,
    iteration: u64,
    bandwidth: T,
    init_elapsed: Duration,
}

impl<'a, T: Scalar, P: Problem<T> + ?Sized> Optimizer<'a, T, P> {
    /// Validates `config` and builds the initial archive.
    pub fn new(problem: &'a P, config: OptimizerConfig<T>, strategy: Strategy) -> Result<Self> {
        config.validate()?;
        let start = Instant::now();
        let mut rng = RandomStream::new(config.seed);
        let mut budget = EvaluationBudget::new(config.max_evaluations);
        let archive = initialize(problem, config.offspring, config.capacity, &mut rng, &mut budget)?;
        let archive = truncate(archive, config.capacity, config.initial_bandwidth, config.kde_space)?;
        Ok(Self {
            problem,
            config,
            strategy,
            rng,
            budget,
            archive,
            iteration: 0,
            bandwidth: config.initial_bandwidth,
            init_elapsed: start.elapsed(),
        })
    }

    pub fn config(&self) -> &OptimizerConfig<T> {
        &self.config
    }

    pub fn archive(&self) -> &Archive<T> {
        &self.archive
    }

    pub fn into_archive(self) -> Archive<T> {
        self.archive
    }

    pub fn bandwidth(&self) -> T {
        self.bandwidth
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn budget(&self) -> &EvaluationBudget {
        &self.budget
    }

    /// Wall time of initialization.
    pub fn init_elapsed(&self) -> Duration {
        self.init_elapsed
    }

    pub fn is_finished(&self) -> bool {
        self.budget.is_exhausted()
    }

    /// Runs one generate–filter iteration; `None` once the budget is spent.
    pub fn step(&mut self) -> Result<Option<StepReport<T>>> {
        if self.is_finished() {
            return Ok(None);
        }
        let start = Instant::now();
        let timed = TimedProblem {
            inner: self.problem,
            nanos: AtomicU64::new(0),
        };
        let h = self.bandwidth;
        let offspring = match self.strategy {
            Strategy::TrendPrediction => {
                let tpm = TpmConfig {
                    bandwidth: h,
                    step_mode: self.config.step_mode,
                    offspring: self.config.offspring,
                    step_scale: self.config.step_scale,
                    kde_space: self.config.kde_space,
                };
                tpm_generate(self.archive.particles(), &timed, &tpm, &mut self.rng, &mut self.budget)?.offspring
            }
            Strategy::UniformRandom => self.uniform_offspring(&timed)?,
        };
        let produced = offspring.len();
        let before = self.archive.len() + produced;
        let archive = std::mem::replace(&mut self.archive, Archive::new(self.config.capacity));
        let filtered = update_archive(archive, offspring);
        let after_filter = filtered.len();
        self.archive = truncate(filtered, self.config.capacity, h, self.config.kde_space)?;
        self.iteration += 1;
        self.bandwidth = self.config.bandwidth_at(self.iteration);
        Ok(Some(StepReport {
            iteration: self.iteration,
            offspring: produced,
            dominated: before - after_filter,
            truncated: after_filter - self.archive.len(),
            bandwidth_used: h,
            bandwidth: self.bandwidth,
            evaluations: self.budget.used(),
            elapsed: start.elapsed(),
            evaluation_time: Duration::from_nanos(timed.nanos.load(Ordering::Relaxed)),
        }))
    }

    fn uniform_offspring(&mut self, problem: &TimedProblem<'_, P>) -> Result<Vec<Particle<T>>> {
        let d = problem.num_variables();
        let mut heading = vec![T::zero(); d];
        heading[0] = T::one();
        let mut out = Vec::with_capacity(self.config.offspring);
        for _ in 0..self.config.offspring {
            if self.budget.is_exhausted() {
                break;
            }
            let x = problem.bounds().sample_uniform(&mut self.rng);
            let f = evaluate_counted(problem, &x, &mut self.budget)?;
            out.push(Particle::new(x, f, heading.clone())?);
        }
        Ok(out)
    }
}

/// Trace bookkeeping for [`run`].
#[derive(Clone, Debug)]
pub struct TraceOptions<T> {
    /// Front used to compute IGD each iteration; SP is always recorded.
    pub reference: Option<ReferenceFront<T>>,
    pub igd_distance: IgdDistance,
    /// When false, `elapsed_ms` is written as 0 so traces are byte-reproducible.
    pub record_timing: bool,
}

impl<T> Default for TraceOptions<T> {
    fn default() -> Self {
        Self {
            reference: None,
            igd_distance: IgdDistance::Euclidean,
            record_timing: true,
        }
    }
}

/// Result of a complete run.
#[derive(Clone, Debug)]
pub struct RunOutcome<T> {
    pub archive: Archive<T>,
    pub trace: RunTrace,
    /// Per-iteration wall time outside objective evaluations, in ms.
    pub overhead_ms: Vec<f64>,
}

impl<T: Scalar> RunOutcome<T> {
    pub fn final_front(&self) -> Vec<ObjectiveVector<T>> {
        self.archive.particles().iter().map(|p| p.objectives().clone()).collect()
    }
}

fn trace_row<T: Scalar>(
    iter: u64,
    evals: u64,
    h: T,
    archive: &Archive<T>,
    elapsed: Duration,
    options: &TraceOptions<T>,
) -> Result<TraceRow> {
    let front = archive.objectives();
    let (sp, igd) = match &options.reference {
        Some(reference) => {
            let report = MetricReport::compute(reference, &front, options.igd_distance)?;
            (report.sp, Some(report.igd))
        }
        None => (crate::metrics::spacing(&front).ok(), None),
    };
    Ok(TraceRow {
        iter,
        evals,
        h: h.as_f64(),
        archive_size: archive.len(),
        sp: sp.map(Scalar::as_f64),
        igd: igd.map(Scalar::as_f64),
        elapsed_ms: if options.record_timing {
            elapsed.as_secs_f64() * 1e3
        } else {
            0.0
        },
    })
}

/// Runs `strategy` to budget exhaustion, tracing every iteration.
pub fn run_strategy<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    config: OptimizerConfig<T>,
    strategy: Strategy,
    options: &TraceOptions<T>,
) -> Result<RunOutcome<T>> {
    let mut opt = Optimizer::new(problem, config, strategy)?;
    let mut elapsed = opt.init_elapsed();
    let mut trace = RunTrace::default();
    let mut overhead_ms = Vec::new();
    trace.rows.push(trace_row(0, opt.budget().used(), opt.bandwidth(), opt.archive(), elapsed, options)?);
    while let Some(report) = opt.step()? {
        elapsed += report.elapsed;
        overhead_ms.push(report.elapsed.saturating_sub(report.evaluation_time).as_secs_f64() * 1e3);
        trace.rows.push(trace_row(
            report.iteration,
            report.evaluations,
            report.bandwidth,
            opt.archive(),
            elapsed,
            options,
        )?);
    }
    Ok(RunOutcome {
        archive: opt.into_archive(),
        trace,
        overhead_ms,
    })
}

/// Runs the trend-prediction optimizer.
pub fn run<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    config: OptimizerConfig<T>,
    options: &TraceOptions<T>,
) -> Result<RunOutcome<T>> {
    run_strategy(problem, config, Strategy::TrendPrediction, options)
}

/// Budget-matched uniform random search with the same filtering.
pub fn run_baseline<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    config: OptimizerConfig<T>,
    options: &TraceOptions<T>,
) -> Result<RunOutcome<T>> {
    run_strategy(problem, config, Strategy::UniformRandom, options)
}
