//! Foundational types: decision and objective vectors, particles, Pareto
//! dominance, box bounds, evaluation budgeting and the seeded random stream.

use std::ops::Deref;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::{norm, Scalar};

/// Tolerance on the Euclidean norm of a particle direction in `f64`. Types
/// with a coarser epsilon use `1000 * epsilon` instead.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-9;

pub(crate) fn unit_tolerance<T: Scalar>() -> f64 {
    UNIT_NORM_TOLERANCE.max(1e3 * T::epsilon().as_f64())
}

macro_rules! real_vector {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Default)]
        pub struct $name<T>(Vec<T>);

        impl<T> $name<T> {
            pub fn new(values: Vec<T>) -> Self {
                Self(values)
            }

            pub fn as_slice(&self) -> &[T] {
                &self.0
            }

            pub fn as_mut_slice(&mut self) -> &mut [T] {
                &mut self.0
            }

            pub fn into_inner(self) -> Vec<T> {
                self.0
            }
        }

        impl<T> Deref for $name<T> {
            type Target = [T];

            fn deref(&self) -> &[T] {
                &self.0
            }
        }

        impl<T> From<Vec<T>> for $name<T> {
            fn from(values: Vec<T>) -> Self {
                Self(values)
            }
        }

        impl<T> FromIterator<T> for $name<T> {
            fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
                Self(iter.into_iter().collect())
            }
        }
    };
}

real_vector!(
    /// A point of the decision space, length `d`.
    DecisionVector
);
real_vector!(
    /// Objective values of one solution, length `m`, all minimized.
    ObjectiveVector
);

/// Closed per-dimension interval bounds of the decision space.
#[derive(Clone, Debug, PartialEq)]
pub struct Bounds<T> {
    lower: Vec<T>,
    upper: Vec<T>,
}

impl<T: Scalar> Bounds<T> {
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                actual: upper.len(),
            });
        }
        for (i, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(Error::config(format!(
                    "bound {i} is not a finite interval: [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    pub fn width(&self, i: usize) -> T {
        self.upper[i] - self.lower[i]
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| lo <= v && v <= hi)
    }

    /// Projects `x` in place onto the box.
    pub fn clamp_in_place(&self, x: &mut [T]) {
        debug_assert_eq!(x.len(), self.dim());
        for (v, (&lo, &hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            if *v < lo {
                *v = lo;
            } else if *v > hi {
                *v = hi;
            }
        }
    }

    /// Draws a point uniformly from the box.
    pub fn sample_uniform(&self, rng: &mut RandomStream) -> DecisionVector<T> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| lo + (hi - lo) * T::of(rng.uniform()))
            .collect()
    }
}

/// Componentwise projection of `x` onto `bounds`. Components already inside
/// are returned unchanged.
pub fn clamp_to_bounds<T: Scalar>(x: &DecisionVector<T>, bounds: &Bounds<T>) -> DecisionVector<T> {
    let mut out = x.clone();
    bounds.clamp_in_place(out.as_mut_slice());
    out
}

/// Pareto dominance for minimization: `a` is no worse everywhere and strictly
/// better somewhere.
pub fn dominates<T: Scalar>(a: &ObjectiveVector<T>, b: &ObjectiveVector<T>) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(dominates_slice(a, b))
}

#[inline]
pub(crate) fn dominates_slice<T: Scalar>(a: &[T], b: &[T]) -> bool {
    let mut strictly = false;
    for (&x, &y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// A solution together with its cached objectives and its unit heading in
/// decision space.
#[derive(Clone, Debug, PartialEq)]
pub struct Particle<T> {
    solution: DecisionVector<T>,
    objectives: ObjectiveVector<T>,
    direction: Vec<T>,
}

impl<T: Scalar> Particle<T> {
    pub fn new(
        solution: DecisionVector<T>,
        objectives: ObjectiveVector<T>,
        direction: Vec<T>,
    ) -> Result<Self> {
        if direction.len() != solution.len() {
            return Err(Error::DimensionMismatch {
                expected: solution.len(),
                actual: direction.len(),
            });
        }
        check_unit(&direction)?;
        Ok(Self {
            solution,
            objectives,
            direction,
        })
    }

    pub fn solution(&self) -> &DecisionVector<T> {
        &self.solution
    }

    pub fn objectives(&self) -> &ObjectiveVector<T> {
        &self.objectives
    }

    pub fn direction(&self) -> &[T] {
        &self.direction
    }
}

pub(crate) fn check_unit<T: Scalar>(v: &[T]) -> Result<()> {
    let n = norm(v).as_f64();
    if n == 0.0 {
        return Err(Error::InvalidDirection("zero vector".into()));
    }
    if !n.is_finite() || (n - 1.0).abs() > unit_tolerance::<T>() {
        return Err(Error::InvalidDirection(format!("norm {n} is not 1")));
    }
    Ok(())
}

/// A minimization problem over a box-bounded decision space.
pub trait Problem<T: Scalar>: Sync {
    fn num_variables(&self) -> usize;

    fn num_objectives(&self) -> usize;

    fn bounds(&self) -> &Bounds<T>;

    fn evaluate(&self, x: &[T]) -> Result<ObjectiveVector<T>>;
}

impl<T: Scalar, P: Problem<T> + ?Sized> Problem<T> for &P {
    fn num_variables(&self) -> usize {
        (**self).num_variables()
    }

    fn num_objectives(&self) -> usize {
        (**self).num_objectives()
    }

    fn bounds(&self) -> &Bounds<T> {
        (**self).bounds()
    }

    fn evaluate(&self, x: &[T]) -> Result<ObjectiveVector<T>> {
        (**self).evaluate(x)
    }
}

/// Counts objective-function evaluations against a fixed limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvaluationBudget {
    used: u64,
    limit: u64,
}

impl EvaluationBudget {
    pub fn new(limit: u64) -> Self {
        Self { used: 0, limit }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn remaining(&self) -> u64 {
        self.limit - self.used
    }

    pub fn is_exhausted(&self) -> bool {
        self.used >= self.limit
    }

    fn consume(&mut self) -> Result<()> {
        if self.is_exhausted() {
            return Err(Error::BudgetExhausted { limit: self.limit });
        }
        self.used += 1;
        Ok(())
    }
}

/// Evaluates `x` and charges one evaluation to `budget`.
///
/// Fails with [`Error::BudgetExhausted`] without evaluating when no
/// evaluations remain.
pub fn evaluate_counted<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    x: &DecisionVector<T>,
    budget: &mut EvaluationBudget,
) -> Result<ObjectiveVector<T>> {
    if x.len() != problem.num_variables() {
        return Err(Error::DimensionMismatch {
            expected: problem.num_variables(),
            actual: x.len(),
        });
    }
    budget.consume()?;
    problem.evaluate(x)
}

/// Seeded pseudo-random stream.
///
/// The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
/// `seed_from_u64`, which produces the same sequence on every platform.
/// Independent worker streams share the root seed and select a distinct
/// ChaCha stream id: the root uses stream 0 and worker `k` uses stream `k + 1`.
#[derive(Clone, Debug)]
pub struct RandomStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    /// The private stream of worker `index` under the documented splitting rule.
    pub fn worker(seed: u64, index: u64) -> Self {
        Self::with_stream(seed, index + 1)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Normal draw with the given mean and variance.
    pub fn normal(&mut self, mean: f64, variance: f64) -> f64 {
        mean + variance.sqrt() * self.standard_normal()
    }

    /// Uniform point on the unit sphere of `R^dim` (normalized Gaussian).
    pub fn unit_vector<T: Scalar>(&mut self, dim: usize) -> Vec<T> {
        assert!(dim > 0, "unit vector needs at least one dimension");
        loop {
            let raw: Vec<f64> = (0..dim).map(|_| self.standard_normal()).collect();
            let n = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 0.0 && n.is_finite() {
                return raw.into_iter().map(|x| T::of(x / n)).collect();
            }
        }
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
