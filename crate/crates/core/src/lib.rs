//! Large-scale multi-objective optimization with a trend prediction model.
//!
//! Parents are drawn from a Pareto archive by importance sampling on kernel
//! density sparseness; each child moves one random step along a heading
//! sampled around its parent's heading. Archive updates keep the
//! non-dominated union and drop the densest members down to capacity.
//!
//! The crate also ships the LSMOP1–LSMOP9 benchmark problems, the SP and IGD
//! indicators, and an experiment driver (`cli`) behind the `ltppm` binary.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`.

pub mod cli;
pub mod error;
pub mod metrics;
pub mod model;
pub mod optimizer;
pub mod problems;
pub mod sampling;
pub mod scalar;
pub mod tpm;
pub mod trace;

pub use error::{Error, Result};
pub use model::{
    clamp_to_bounds, dominates, evaluate_counted, Bounds, DecisionVector, EvaluationBudget, ObjectiveVector,
    Particle, Problem, RandomStream,
};
pub use optimizer::{run, run_baseline, Archive, Optimizer, OptimizerConfig, RunOutcome, Strategy, TraceOptions};
pub use problems::{make_lsmop, LsmopId, LsmopInstance, ReferenceFront};
pub use scalar::Scalar;
pub use trace::{RunTrace, TraceRow};

pub type DecisionVector64 = DecisionVector<f64>;
pub type ObjectiveVector64 = ObjectiveVector<f64>;
pub type Particle64 = Particle<f64>;
pub type Archive64 = Archive<f64>;
pub type Lsmop64 = LsmopInstance<f64>;
pub type Lsmop32 = LsmopInstance<f32>;
pub type ReferenceFront64 = ReferenceFront<f64>;
pub type OptimizerConfig64 = OptimizerConfig<f64>;
pub type RunOutcome64 = RunOutcome<f64>;
