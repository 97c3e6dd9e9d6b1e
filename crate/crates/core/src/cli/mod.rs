//! Experiment driver behind the `ltppm` binary.

pub mod experiments;
pub mod plan;
