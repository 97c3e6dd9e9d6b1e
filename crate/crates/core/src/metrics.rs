//! Front quality indicators: Schott's spacing and inverted generational
//! distance.

use crate::error::{Error, Result};
use crate::model::ObjectiveVector;
use crate::problems::ReferenceFront;
use crate::scalar::{distance, squared_distance, Scalar};

/// Distance used inside IGD.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IgdDistance {
    /// Euclidean distance (the usual IGD).
    #[default]
    Euclidean,
    /// Squared Euclidean distance.
    Squared,
}

/// Schott's spacing of a front: the sample standard deviation of each
/// point's distance to its nearest neighbour in the same set.
pub fn spacing<T: Scalar, P: AsRef<[T]>>(front: &[P]) -> Result<T> {
    let n = front.len();
    if n < 2 {
        return Err(Error::UndefinedMetric("spacing needs at least two points"));
    }
    let nearest: Vec<T> = (0..n)
        .map(|i| {
            let a = front[i].as_ref();
            (0..n)
                .filter(|&j| j != i)
                .map(|j| squared_distance(a, front[j].as_ref()))
                .fold(T::infinity(), T::min)
                .sqrt()
        })
        .collect();
    let mean = nearest.iter().fold(T::zero(), |acc, &e| acc + e) / T::of_usize(n);
    let var = nearest
        .iter()
        .fold(T::zero(), |acc, &e| acc + (e - mean) * (e - mean))
        / T::of_usize(n - 1);
    Ok(var.sqrt())
}

/// Mean over reference points of the distance to the closest front point.
pub fn igd<T: Scalar, R: AsRef<[T]>, P: AsRef<[T]>>(reference: &[R], front: &[P]) -> Result<T> {
    igd_with(reference, front, IgdDistance::Euclidean)
}

pub fn igd_with<T: Scalar, R: AsRef<[T]>, P: AsRef<[T]>>(
    reference: &[R],
    front: &[P],
    kind: IgdDistance,
) -> Result<T> {
    if reference.is_empty() {
        return Err(Error::UndefinedMetric("IGD needs a non-empty reference set"));
    }
    if front.is_empty() {
        return Err(Error::UndefinedMetric("IGD needs a non-empty front"));
    }
    let total = reference.iter().fold(T::zero(), |acc, r| {
        let r = r.as_ref();
        let best = front
            .iter()
            .map(|p| match kind {
                IgdDistance::Euclidean => distance(r, p.as_ref()),
                IgdDistance::Squared => squared_distance(r, p.as_ref()),
            })
            .fold(T::infinity(), T::min);
        acc + best
    });
    Ok(total / T::of_usize(reference.len()))
}

/// Both indicators for one front.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricReport<T> {
    /// `None` when the front has fewer than two points.
    pub sp: Option<T>,
    pub igd: T,
    pub front_size: usize,
    pub reference_size: usize,
}

impl<T: Scalar> MetricReport<T> {
    pub fn compute<P: AsRef<[T]>>(reference: &ReferenceFront<T>, front: &[P], kind: IgdDistance) -> Result<Self> {
        Ok(Self {
            sp: spacing(front).ok(),
            igd: igd_with(reference.points(), front, kind)?,
            front_size: front.len(),
            reference_size: reference.len(),
        })
    }
}

impl<T> AsRef<[T]> for ObjectiveVector<T> {
    fn as_ref(&self) -> &[T] {
        self.as_slice()
    }
}
