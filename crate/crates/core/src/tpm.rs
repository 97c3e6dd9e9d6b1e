//! Trend prediction model: offspring headings drawn around the parent's
//! heading, and offspring positions one random step along that heading.
//!
//! A heading `u` at angle `theta` from `v` is built in a frame where `v` is
//! the first axis, `cos(theta) e1 + sin(theta) (0, w)` with `w` uniform on the
//! unit sphere of the remaining `d - 1` axes, then mapped back. The frame
//! change is the Householder reflection that swaps `v` and `e1`, applied
//! implicitly in O(d).

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{check_unit, evaluate_counted, DecisionVector, EvaluationBudget, Particle, Problem, RandomStream};
use crate::sampling::{ImportanceDistribution, KdeSpace};
use crate::scalar::{dot, norm, Scalar};

/// Orthogonal reflection `H = I - 2 w w^T / (w^T w)` with `w = v - e1`, so
/// that `H v = e1` and `H e1 = v`. `H` is symmetric and its own inverse.
#[derive(Clone, Debug)]
pub struct Householder<T> {
    w: Vec<T>,
    /// `2 / (w^T w)`, zero when `v == e1` (identity).
    beta: T,
}

impl<T: Scalar> Householder<T> {
    pub fn dim(&self) -> usize {
        self.w.len()
    }

    pub fn is_identity(&self) -> bool {
        self.beta == T::zero()
    }

    /// Applies `H` in place.
    pub fn apply(&self, y: &mut [T]) {
        debug_assert_eq!(y.len(), self.w.len());
        if self.is_identity() {
            return;
        }
        let coef = self.beta * dot(&self.w, y);
        for (yi, &wi) in y.iter_mut().zip(&self.w) {
            *yi = *yi - coef * wi;
        }
    }

    /// Applies `H^{-1}`, which is `H` itself.
    pub fn apply_inverse(&self, y: &mut [T]) {
        self.apply(y)
    }

    /// Dense matrix form, for inspection and tests.
    pub fn to_matrix(&self) -> Vec<Vec<T>> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let id = if i == j { T::one() } else { T::zero() };
                        id - self.beta * self.w[i] * self.w[j]
                    })
                    .collect()
            })
            .collect()
    }
}

/// Orthogonal transform taking the unit vector `v` to the first basis vector.
pub fn rotation_to_axis<T: Scalar>(v: &[T]) -> Result<Householder<T>> {
    if v.is_empty() {
        return Err(Error::InvalidDirection("empty vector".into()));
    }
    check_unit(v)?;
    let tail: T = v[1..].iter().fold(T::zero(), |acc, &x| acc + x * x);
    // w_1 = v_1 - 1, rewritten for v_1 > 0 to avoid cancellation:
    // v_1 - 1 = -(|v|^2 - v_1^2) / (v_1 + 1).
    let w1 = if v[0] > T::zero() {
        -tail / (v[0] + T::one())
    } else {
        v[0] - T::one()
    };
    let wtw = w1 * w1 + tail;
    let mut w = v.to_vec();
    w[0] = w1;
    let beta = if wtw > T::zero() {
        T::of(2.0) / wtw
    } else {
        T::zero()
    };
    Ok(Householder { w, beta })
}

/// Random unit vector at angle `|theta|` (reduced through its cosine) from
/// the unit vector `v`, uniform among all such vectors.
///
/// For `d = 1` the only candidates are `v` and `-v`; the result is
/// `sign(cos theta) v`.
pub fn randpick<T: Scalar>(v: &[T], theta: T, rng: &mut RandomStream) -> Result<Vec<T>> {
    let rot = rotation_to_axis(v)?;
    Ok(randpick_with(&rot, v, theta, rng))
}

fn randpick_with<T: Scalar>(rot: &Householder<T>, v: &[T], theta: T, rng: &mut RandomStream) -> Vec<T> {
    let d = v.len();
    if theta == T::zero() {
        return v.to_vec();
    }
    if d == 1 {
        return if theta.cos() < T::zero() {
            vec![-v[0]]
        } else {
            v.to_vec()
        };
    }
    let (s, c) = theta.sin_cos();
    let w: Vec<T> = rng.unit_vector(d - 1);
    let mut u = Vec::with_capacity(d);
    u.push(c);
    u.extend(w.into_iter().map(|x| s * x));
    rot.apply_inverse(&mut u);
    let n = norm(&u);
    for x in &mut u {
        *x = *x / n;
    }
    u
}

/// How the sampled step length `lambda ~ Normal(0, h)` is turned into a move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StepMode {
    /// `|lambda|`, so offspring always move forward along the sampled heading.
    #[default]
    Continuous,
    /// `ceil(lambda)`, an integer step that is 0 for `lambda in (-1, 0]`.
    Ceiling,
}

impl StepMode {
    pub fn apply<T: Scalar>(self, lambda: T) -> T {
        match self {
            StepMode::Continuous => lambda.abs(),
            StepMode::Ceiling => lambda.ceil(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StepMode::Continuous => "continuous",
            StepMode::Ceiling => "ceiling",
        }
    }
}

impl FromStr for StepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "continuous" => Ok(StepMode::Continuous),
            "ceiling" => Ok(StepMode::Ceiling),
            other => Err(Error::config(format!(
                "step_mode must be `continuous` or `ceiling`, got `{other}`"
            ))),
        }
    }
}

/// Default step scale as a fraction of each variable's bound width.
pub const DEFAULT_STEP_SCALE: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TpmConfig<T> {
    /// Bandwidth `h`: angles are `Normal(0, 1/h)`, steps `Normal(0, h)`.
    pub bandwidth: T,
    pub step_mode: StepMode,
    /// Offspring generated per call.
    pub offspring: usize,
    /// Step multiplier relative to each variable's bound width.
    pub step_scale: T,
    pub kde_space: KdeSpace,
}

impl<T: Scalar> TpmConfig<T> {
    pub fn new(bandwidth: T, offspring: usize) -> Self {
        Self {
            bandwidth,
            step_mode: StepMode::default(),
            offspring,
            step_scale: T::of(DEFAULT_STEP_SCALE),
            kde_space: KdeSpace::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth > T::zero()) || !self.bandwidth.is_finite() {
            return Err(Error::config(format!("bandwidth must be positive, got {}", self.bandwidth)));
        }
        if !(self.step_scale > T::zero()) || !self.step_scale.is_finite() {
            return Err(Error::config(format!("step_scale must be positive, got {}", self.step_scale)));
        }
        Ok(())
    }
}

/// Offspring of one generation.
#[derive(Clone, Debug)]
pub struct Generation<T> {
    pub offspring: Vec<Particle<T>>,
    /// Archive index of each offspring's parent.
    pub parents: Vec<usize>,
    /// Angle drawn for each offspring.
    pub angles: Vec<T>,
    /// True when the budget ran out before all offspring were evaluated.
    pub exhausted: bool,
}

/// Generates up to `config.offspring` children of `archive` members.
///
/// Per child: pick a parent by importance sampling, draw
/// `theta ~ Normal(0, 1/h)`, take `u = randpick(parent heading, theta)`, draw
/// `lambda ~ Normal(0, h)` and move to
/// `clamp(x + step(lambda) * step_scale * width_j * u_j)`. The child inherits
/// `u` as its heading. Stops early, flagging `exhausted`, when the budget
/// runs out.
pub fn tpm_generate<T: Scalar, P: Problem<T> + ?Sized>(
    archive: &[Particle<T>],
    problem: &P,
    config: &TpmConfig<T>,
    rng: &mut RandomStream,
    budget: &mut EvaluationBudget,
) -> Result<Generation<T>> {
    config.validate()?;
    let mut out = Generation {
        offspring: Vec::with_capacity(config.offspring),
        parents: Vec::with_capacity(config.offspring),
        angles: Vec::with_capacity(config.offspring),
        exhausted: budget.is_exhausted(),
    };
    if config.offspring == 0 || out.exhausted {
        return Ok(out);
    }
    if archive.is_empty() {
        return Err(Error::Empty("archive"));
    }
    let bounds = problem.bounds();
    let scale: Vec<T> = (0..bounds.dim())
        .map(|j| config.step_scale * bounds.width(j))
        .collect();
    let dist = ImportanceDistribution::from_archive(archive, config.bandwidth, config.kde_space)?;
    let h = config.bandwidth.as_f64();
    for _ in 0..config.offspring {
        if budget.is_exhausted() {
            out.exhausted = true;
            break;
        }
        let index = dist.sample_index(rng);
        let parent = &archive[index];
        let theta = T::of(rng.normal(0.0, 1.0 / h));
        let rot = rotation_to_axis(parent.direction())?;
        let u = randpick_with(&rot, parent.direction(), theta, rng);
        let lambda = config.step_mode.apply(T::of(rng.normal(0.0, h)));
        let mut x: Vec<T> = parent
            .solution()
            .iter()
            .zip(&u)
            .zip(&scale)
            .map(|((&xj, &uj), &sj)| xj + lambda * sj * uj)
            .collect();
        bounds.clamp_in_place(&mut x);
        let x = DecisionVector::new(x);
        let f = evaluate_counted(problem, &x, budget)?;
        out.offspring.push(Particle::new(x, f, u)?);
        out.parents.push(index);
        out.angles.push(theta);
    }
    out.exhausted = out.exhausted || budget.is_exhausted();
    Ok(out)
}
