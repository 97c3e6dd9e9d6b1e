//! The scalable LSMOP1–LSMOP9 benchmark problems.
//!
//! Decision vector layout: the first `m - 1` variables are position variables
//! in `[0, 1]`; the remaining `d - m + 1` distance variables live in `[0, 10]`.
//! Distance variables are first passed through a variable linkage
//!
//! ```text
//! linear:    z_i = (1 + i / d) * x_i - 10 * x_1
//! nonlinear: z_i = (1 + cos(pi / 2 * i / d)) * x_i - 10 * x_1
//! ```
//!
//! (1-based `i`), then split into one contiguous segment per objective. Each
//! segment is cut into `nk` subgroups of equal size; segment sizes follow a
//! logistic-map chaos sequence. Objective `j` applies the odd or even
//! landscape (by 1-based parity of `j`) to every subgroup of its segment and
//! averages over the segment length to get `g_j`. See `PROBLEMS.md` at the
//! repository root for every pinned constant.

mod front;
pub mod landscape;

use std::fmt;
use std::str::FromStr;

pub use front::{simplex_lattice, ReferenceFront};
pub use landscape::Landscape;

use crate::error::{Error, Result};
use crate::model::{Bounds, ObjectiveVector, Problem};
use crate::scalar::Scalar;

/// Number of subgroups each objective's distance segment is split into.
pub const SUBGROUPS: usize = 5;

/// Upper bound of every distance variable.
pub const DISTANCE_UPPER: f64 = 10.0;

/// Smallest decision dimension accepted by [`LsmopInstance::new`].
pub const MIN_VARIABLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Linkage {
    Linear,
    Nonlinear,
}

/// Geometry of the Pareto-optimal front.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrontShape {
    /// `sum f_i = 1`
    Linear,
    /// `sum f_i^2 = 1`
    Convex,
    /// Disconnected regions of a DTLZ7-like surface.
    Disconnected,
}

/// Problem identifier `lsmop1`..`lsmop9`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LsmopId(u8);

impl LsmopId {
    pub fn new(id: u8) -> Result<Self> {
        if (1..=9).contains(&id) {
            Ok(Self(id))
        } else {
            Err(Error::config(format!("LSMOP id must be in 1..=9, got {id}")))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = LsmopId> {
        (1..=9).map(LsmopId)
    }

    /// (odd-objective landscape, even-objective landscape)
    pub fn landscapes(self) -> (Landscape, Landscape) {
        use Landscape::*;
        match self.0 {
            1 => (Sphere, Sphere),
            2 => (Griewank, Schwefel),
            3 => (Rastrigin, Rosenbrock),
            4 => (Ackley, Griewank),
            5 => (Sphere, Sphere),
            6 => (Rosenbrock, Schwefel),
            7 => (Ackley, Rosenbrock),
            8 => (Griewank, Sphere),
            9 => (Sphere, Ackley),
            _ => unreachable!("validated id"),
        }
    }

    pub fn linkage(self) -> Linkage {
        if self.0 <= 4 {
            Linkage::Linear
        } else {
            Linkage::Nonlinear
        }
    }

    pub fn shape(self) -> FrontShape {
        match self.0 {
            1..=4 => FrontShape::Linear,
            5..=8 => FrontShape::Convex,
            _ => FrontShape::Disconnected,
        }
    }
}

impl fmt::Display for LsmopId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lsmop{}", self.0)
    }
}

impl FromStr for LsmopId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let digits = lower
            .strip_prefix("lsmop")
            .ok_or_else(|| Error::config(format!("unknown problem `{s}`")))?;
        let id: u8 = digits
            .parse()
            .map_err(|_| Error::config(format!("unknown problem `{s}`")))?;
        LsmopId::new(id)
    }
}

/// A fully parameterized LSMOP problem.
#[derive(Clone, Debug)]
pub struct LsmopInstance<T> {
    id: LsmopId,
    objectives: usize,
    variables: usize,
    bounds: Bounds<T>,
    /// Per objective, the sizes of its `SUBGROUPS` consecutive subgroups.
    subgroups: Vec<Vec<usize>>,
    /// Per objective, the offset of its segment inside the distance variables.
    offsets: Vec<usize>,
    /// Linkage factor for each distance variable.
    linkage_factor: Vec<T>,
}

/// Builds LSMOP `id` with `m` objectives and `d` decision variables.
pub fn make_lsmop<T: Scalar>(id: u8, m: usize, d: usize) -> Result<LsmopInstance<T>> {
    LsmopInstance::new(LsmopId::new(id)?, m, d)
}

/// Chaos-based segment sizes: `c_1 = 3.8 * 0.1 * 0.9`, `c_{k+1} = 3.8 c_k (1 - c_k)`,
/// `size_k = floor(c_k / sum(c) * (d - m + 1) / nk)`.
fn chaos_subgroup_sizes(m: usize, distance_vars: usize) -> Vec<usize> {
    let mut c = Vec::with_capacity(m);
    c.push(3.8 * 0.1 * (1.0 - 0.1));
    for k in 1..m {
        let prev: f64 = c[k - 1];
        c.push(3.8 * prev * (1.0 - prev));
    }
    let total: f64 = c.iter().sum();
    c.iter()
        .map(|ck| (ck / total * distance_vars as f64 / SUBGROUPS as f64).floor() as usize)
        .collect()
}

impl<T: Scalar> LsmopInstance<T> {
    pub fn new(id: LsmopId, m: usize, d: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::config(format!("need at least 2 objectives, got {m}")));
        }
        if d <= m {
            return Err(Error::config(format!(
                "decision dimension {d} must exceed the objective count {m}"
            )));
        }
        if d < MIN_VARIABLES {
            return Err(Error::config(format!(
                "LSMOP needs at least {MIN_VARIABLES} decision variables, got {d}"
            )));
        }
        let distance_vars = d - m + 1;
        let sizes = chaos_subgroup_sizes(m, distance_vars);
        if let Some(k) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::config(format!(
                "objective {} gets an empty subgroup with d = {d}, m = {m}",
                k + 1
            )));
        }
        let mut subgroups: Vec<Vec<usize>> = sizes.iter().map(|&s| vec![s; SUBGROUPS]).collect();
        // Floor rounding leaves a few distance variables over; the last
        // subgroup of the last objective absorbs them so the subgroups
        // partition every distance variable.
        let used: usize = sizes.iter().sum::<usize>() * SUBGROUPS;
        subgroups[m - 1][SUBGROUPS - 1] += distance_vars - used;

        let mut offsets = Vec::with_capacity(m);
        let mut acc = 0;
        for g in &subgroups {
            offsets.push(acc);
            acc += g.iter().sum::<usize>();
        }
        debug_assert_eq!(acc, distance_vars);

        let mut lower = vec![T::zero(); d];
        let mut upper = vec![T::of(DISTANCE_UPPER); d];
        for i in 0..m - 1 {
            lower[i] = T::zero();
            upper[i] = T::one();
        }
        let bounds = Bounds::new(lower, upper)?;

        let half_pi = T::FRAC_PI_2();
        let dn = T::of_usize(d);
        let linkage_factor = (m..=d)
            .map(|i| {
                let ratio = T::of_usize(i) / dn;
                match id.linkage() {
                    Linkage::Linear => T::one() + ratio,
                    Linkage::Nonlinear => T::one() + (half_pi * ratio).cos(),
                }
            })
            .collect();

        Ok(Self {
            id,
            objectives: m,
            variables: d,
            bounds,
            subgroups,
            offsets,
            linkage_factor,
        })
    }

    pub fn id(&self) -> LsmopId {
        self.id
    }

    pub fn name(&self) -> String {
        self.id.to_string()
    }

    pub fn position_variables(&self) -> usize {
        self.objectives - 1
    }

    pub fn distance_variables(&self) -> usize {
        self.variables - self.objectives + 1
    }

    pub fn subgroups(&self) -> &[Vec<usize>] {
        &self.subgroups
    }

    pub fn linkage(&self) -> Linkage {
        self.id.linkage()
    }

    pub fn shape(&self) -> FrontShape {
        self.id.shape()
    }

    /// Distance-variable values that zero every linked variable for the given
    /// position variables, i.e. `x_i = 10 x_1 / factor_i`. Landscapes with a
    /// minimum at the origin reach `g = 0` there.
    pub fn optimal_distance_variables(&self, position: &[T]) -> Vec<T> {
        let shift = T::of(DISTANCE_UPPER) * position[0];
        self.linkage_factor.iter().map(|&f| shift / f).collect()
    }

    /// Linked distance variables `z`.
    pub fn linked(&self, x: &[T]) -> Vec<T> {
        let m = self.objectives;
        let shift = T::of(DISTANCE_UPPER) * x[0];
        x[m - 1..]
            .iter()
            .zip(&self.linkage_factor)
            .map(|(&xi, &f)| f * xi - shift)
            .collect()
    }

    /// Normalized distance function value `g_j` for every objective.
    pub fn distance_terms(&self, x: &[T]) -> Vec<T> {
        let z = self.linked(x);
        let (odd, even) = self.id.landscapes();
        self.subgroups
            .iter()
            .zip(&self.offsets)
            .enumerate()
            .map(|(j, (groups, &offset))| {
                // 1-based parity: objective 1 is odd.
                let landscape = if j % 2 == 0 { odd } else { even };
                let mut start = offset;
                let mut sum = T::zero();
                for &len in groups {
                    sum = sum + landscape.eval(&z[start..start + len]);
                    start += len;
                }
                sum / T::of_usize(start - offset)
            })
            .collect()
    }

    /// Reference front with about `k` points on the analytic Pareto front.
    pub fn reference_front(&self, k: usize) -> Result<ReferenceFront<T>> {
        ReferenceFront::for_shape(self.shape(), self.objectives, k)
    }
}

impl<T: Scalar> Problem<T> for LsmopInstance<T> {
    fn num_variables(&self) -> usize {
        self.variables
    }

    fn num_objectives(&self) -> usize {
        self.objectives
    }

    fn bounds(&self) -> &Bounds<T> {
        &self.bounds
    }

    fn evaluate(&self, x: &[T]) -> Result<ObjectiveVector<T>> {
        if x.len() != self.variables {
            return Err(Error::DimensionMismatch {
                expected: self.variables,
                actual: x.len(),
            });
        }
        let m = self.objectives;
        let g = self.distance_terms(x);
        let pos = &x[..m - 1];
        let mut f = vec![T::zero(); m];
        match self.shape() {
            FrontShape::Linear => {
                // f_j = (1 + g_j) * x_1 ... x_{m-j} * (1 - x_{m-j+1})
                for (j, fj) in f.iter_mut().enumerate() {
                    let keep = m - 1 - j;
                    let mut h = pos[..keep].iter().fold(T::one(), |acc, &p| acc * p);
                    if j > 0 {
                        h = h * (T::one() - pos[keep]);
                    }
                    *fj = (T::one() + g[j]) * h;
                }
            }
            FrontShape::Convex => {
                let half_pi = T::FRAC_PI_2();
                for (j, fj) in f.iter_mut().enumerate() {
                    let keep = m - 1 - j;
                    let mut h = pos[..keep]
                        .iter()
                        .fold(T::one(), |acc, &p| acc * (half_pi * p).cos());
                    if j > 0 {
                        h = h * (half_pi * pos[keep]).sin();
                    }
                    let next = if j + 1 < m { g[j + 1] } else { T::zero() };
                    *fj = (T::one() + g[j] + next) * h;
                }
            }
            FrontShape::Disconnected => {
                let gsum = T::one() + g.iter().fold(T::zero(), |acc, &v| acc + v);
                let three_pi = T::of(3.0) * T::PI();
                let mut tail = T::zero();
                for j in 0..m - 1 {
                    f[j] = pos[j];
                    tail = tail + pos[j] / (T::one() + gsum) * (T::one() + (three_pi * pos[j]).sin());
                }
                f[m - 1] = (T::one() + gsum) * (T::of_usize(m) - tail);
            }
        }
        Ok(ObjectiveVector::new(f))
    }
}
