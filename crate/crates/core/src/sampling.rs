//! Kernel density estimation over the archive and importance sampling of
//! parents proportional to sparseness (reciprocal density).
//!
//! Points are min–max normalized per coordinate over the current archive
//! before distances are taken. A coordinate on which all members agree is
//! normalized to 0 for every member. The kernel is the standard Gaussian
//! density applied to the scalar distance `|z_k - z_i| / h`.

use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;

use crate::error::{Error, Result};
use crate::model::{DecisionVector, Particle, RandomStream};
use crate::scalar::{squared_distance, Scalar};

/// Densities below this value are raised to it before taking reciprocals.
pub const DENSITY_FLOOR: f64 = 1e-12;

/// Space in which particle-to-particle distances are measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum KdeSpace {
    #[default]
    Objective,
    Decision,
}

impl FromStr for KdeSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "objective" => Ok(KdeSpace::Objective),
            "decision" => Ok(KdeSpace::Decision),
            other => Err(Error::config(format!(
                "kde_space must be `objective` or `decision`, got `{other}`"
            ))),
        }
    }
}

impl KdeSpace {
    pub fn as_str(self) -> &'static str {
        match self {
            KdeSpace::Objective => "objective",
            KdeSpace::Decision => "decision",
        }
    }
}

/// Standard normal density.
#[inline]
pub fn gaussian_kernel<T: Scalar>(t: T) -> T {
    (-(t * t) / T::of(2.0)).exp() / (T::of(2.0) * T::PI()).sqrt()
}

/// Per-coordinate min–max normalization onto `[0, 1]`.
pub fn normalize_points<T: Scalar>(points: &[&[T]]) -> Vec<Vec<T>> {
    let Some(first) = points.first() else {
        return Vec::new();
    };
    let dim = first.len();
    let mut lo = first.to_vec();
    let mut hi = first.to_vec();
    for p in &points[1..] {
        for j in 0..dim {
            lo[j] = lo[j].min(p[j]);
            hi[j] = hi[j].max(p[j]);
        }
    }
    points
        .iter()
        .map(|p| {
            (0..dim)
                .map(|j| {
                    let span = hi[j] - lo[j];
                    if span > T::zero() {
                        (p[j] - lo[j]) / span
                    } else {
                        T::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub(crate) fn space_coordinates<T: Scalar>(archive: &[Particle<T>], space: KdeSpace) -> Vec<&[T]> {
    archive
        .iter()
        .map(|p| match space {
            KdeSpace::Objective => p.objectives().as_slice(),
            KdeSpace::Decision => p.solution().as_slice(),
        })
        .collect()
}

/// Gaussian KDE of every point at itself, over already normalized points:
/// `density_k = 1 / (n h) * sum_i kernel(|z_k - z_i| / h)`.
pub fn density_of_normalized<T: Scalar>(points: &[Vec<T>], h: T) -> Vec<T> {
    let n = points.len();
    let mut sums = vec![T::zero(); n];
    let k0 = gaussian_kernel(T::zero());
    for k in 0..n {
        sums[k] = sums[k] + k0;
        for i in k + 1..n {
            let t = squared_distance(&points[k], &points[i]).sqrt() / h;
            let kv = gaussian_kernel(t);
            sums[k] = sums[k] + kv;
            sums[i] = sums[i] + kv;
        }
    }
    let scale = T::one() / (T::of_usize(n) * h);
    sums.into_iter().map(|s| s * scale).collect()
}

fn check_bandwidth<T: Scalar>(h: T) -> Result<()> {
    if h > T::zero() && h.is_finite() {
        Ok(())
    } else {
        Err(Error::config(format!("bandwidth must be positive, got {h}")))
    }
}

/// KDE density of each archive member, in archive order.
pub fn density<T: Scalar>(archive: &[Particle<T>], h: T, space: KdeSpace) -> Result<Vec<T>> {
    check_bandwidth(h)?;
    if archive.is_empty() {
        return Err(Error::Empty("archive"));
    }
    let coords = space_coordinates(archive, space);
    Ok(density_of_normalized(&normalize_points(&coords), h))
}

/// Elementwise reciprocal, with densities floored at [`DENSITY_FLOOR`].
pub fn sparseness<T: Scalar>(densities: &[T]) -> Vec<T> {
    let floor = T::of(DENSITY_FLOOR);
    densities
        .iter()
        .map(|&d| T::one() / if d < floor { floor } else { d })
        .collect()
}

/// Probability of selecting each archive member as a parent.
#[derive(Clone, Debug)]
pub struct ImportanceDistribution<T> {
    weights: Vec<T>,
    bandwidth: Option<T>,
    sampler: WeightedIndex<f64>,
}

/// Normalizes sparseness values into selection probabilities.
pub fn importance_distribution<T: Scalar>(sparseness: &[T]) -> Result<ImportanceDistribution<T>> {
    if sparseness.is_empty() {
        return Err(Error::Empty("sparseness values"));
    }
    let total = sparseness.iter().fold(T::zero(), |acc, &s| acc + s);
    if !(total > T::zero()) || !total.is_finite() {
        return Err(Error::config("sparseness values must be positive and finite"));
    }
    let weights: Vec<T> = sparseness.iter().map(|&s| s / total).collect();
    let sampler = WeightedIndex::new(weights.iter().map(|w| w.as_f64()))
        .map_err(|e| Error::config(format!("invalid importance weights: {e}")))?;
    Ok(ImportanceDistribution {
        weights,
        bandwidth: None,
        sampler,
    })
}

impl<T: Scalar> ImportanceDistribution<T> {
    /// Density, sparseness and normalization over `archive` in one pass.
    pub fn from_archive(archive: &[Particle<T>], h: T, space: KdeSpace) -> Result<Self> {
        let dens = density(archive, h, space)?;
        let mut dist = importance_distribution(&sparseness(&dens))?;
        dist.bandwidth = Some(h);
        Ok(dist)
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn bandwidth(&self) -> Option<T> {
        self.bandwidth
    }

    /// Draws one archive index.
    pub fn sample_index(&self, rng: &mut RandomStream) -> usize {
        self.sampler.sample(rng)
    }
}

/// A sampled parent: its archive index, solution and heading.
#[derive(Clone, Copy, Debug)]
pub struct Selection<'a, T> {
    pub index: usize,
    pub solution: &'a DecisionVector<T>,
    pub direction: &'a [T],
}

/// Draws one parent from `archive` according to its importance distribution.
///
/// Callers drawing many parents from an unchanged archive should build the
/// [`ImportanceDistribution`] once and call
/// [`ImportanceDistribution::sample_index`] instead.
pub fn isample<'a, T: Scalar>(
    archive: &'a [Particle<T>],
    h: T,
    space: KdeSpace,
    rng: &mut RandomStream,
) -> Result<Selection<'a, T>> {
    let dist = ImportanceDistribution::from_archive(archive, h, space)?;
    let index = dist.sample_index(rng);
    let p = &archive[index];
    Ok(Selection {
        index,
        solution: p.solution(),
        direction: p.direction(),
    })
}
