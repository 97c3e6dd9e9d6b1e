use crate::error::{Error, Result};
use crate::model::ObjectiveVector;
use crate::problems::FrontShape;
use crate::scalar::Scalar;

/// Ends of the two position intervals that survive on the disconnected front.
const DISCONNECTED_INTERVALS: [f64; 4] = [0.0, 0.251412, 0.631627, 0.859401];

/// Deterministic sample of a true Pareto front.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceFront<T> {
    points: Vec<ObjectiveVector<T>>,
    requested: usize,
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All points of `{ w / divisions : w in N^m, sum w = divisions }` in
/// lexicographically descending order of the weight vector.
pub fn simplex_lattice(m: usize, divisions: usize) -> Vec<Vec<f64>> {
    fn rec(m: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == m - 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for w in (0..=left).rev() {
            prefix.push(w);
            rec(m, left - w, prefix, out);
            prefix.pop();
        }
    }
    let mut raw = Vec::new();
    rec(m, divisions, &mut Vec::with_capacity(m), &mut raw);
    raw.into_iter()
        .map(|w| w.into_iter().map(|c| c as f64 / divisions as f64).collect())
        .collect()
}

/// Largest lattice resolution whose point count does not exceed `k`.
fn lattice_divisions(m: usize, k: usize) -> usize {
    let mut h = 1;
    while binomial(h + 1 + m - 1, m - 1) <= k {
        h += 1;
    }
    h
}

impl<T: Scalar> ReferenceFront<T> {
    pub fn from_points(points: Vec<ObjectiveVector<T>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("reference front"));
        }
        let requested = points.len();
        Ok(Self { points, requested })
    }

    pub fn for_shape(shape: FrontShape, m: usize, k: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::config("reference front needs at least 2 objectives"));
        }
        if k < m {
            return Err(Error::config(format!(
                "reference front needs at least {m} points, got {k}"
            )));
        }
        let points: Vec<Vec<f64>> = match shape {
            FrontShape::Linear => simplex_lattice(m, lattice_divisions(m, k)),
            FrontShape::Convex => simplex_lattice(m, lattice_divisions(m, k))
                .into_iter()
                .map(|p| {
                    let n = p.iter().map(|v| v * v).sum::<f64>().sqrt();
                    p.into_iter().map(|v| v / n).collect()
                })
                .collect(),
            FrontShape::Disconnected => disconnected_front(m, k),
        };
        Ok(Self {
            points: points
                .into_iter()
                .map(|p| p.into_iter().map(T::of).collect())
                .collect(),
            requested: k,
        })
    }

    pub fn points(&self) -> &[ObjectiveVector<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The cardinality parameter the front was generated for.
    pub fn requested(&self) -> usize {
        self.requested
    }
}

/// Largest grid of at most `k` points (at least 2 per axis) over the `m - 1`
/// position coordinates, squeezed into the two non-dominated intervals, with
/// the last objective at `g = 0`:
/// `f_m = 2 (m - sum_j f_j / 2 (1 + sin(3 pi f_j)))`.
fn disconnected_front(m: usize, k: usize) -> Vec<Vec<f64>> {
    let [a0, a1, b0, b1] = DISCONNECTED_INTERVALS;
    let split = (a1 - a0) / (b1 - b0 + a1 - a0);
    let mut per_axis = ((k as f64).powf(1.0 / (m - 1) as f64) + 1e-9).floor() as usize;
    while per_axis > 2 && per_axis.pow((m - 1) as u32) > k {
        per_axis -= 1;
    }
    let per_axis = per_axis.max(2);
    let axis: Vec<f64> = (0..per_axis)
        .map(|i| {
            let t = i as f64 / (per_axis - 1) as f64;
            if t <= split {
                t * (a1 - a0) / split + a0
            } else {
                (t - split) * (b1 - b0) / (1.0 - split) + b0
            }
        })
        .collect();
    let total = per_axis.pow((m - 1) as u32);
    (0..total)
        .map(|mut idx| {
            let mut p = Vec::with_capacity(m);
            for _ in 0..m - 1 {
                p.push(axis[idx % per_axis]);
                idx /= per_axis;
            }
            let tail: f64 = p
                .iter()
                .map(|&v| v / 2.0 * (1.0 + (3.0 * std::f64::consts::PI * v).sin()))
                .sum();
            p.push(2.0 * (m as f64 - tail));
            p
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_sizes() {
        assert_eq!(simplex_lattice(3, 1).len(), 3);
        assert_eq!(simplex_lattice(3, 12).len(), 91);
        assert_eq!(lattice_divisions(3, 3), 1);
        assert_eq!(lattice_divisions(3, 91), 12);
        assert_eq!(lattice_divisions(3, 100), 12);
        assert_eq!(lattice_divisions(3, 1000), 43);
    }

    #[test]
    fn extreme_points_when_k_equals_m() {
        let f = ReferenceFront::<f64>::for_shape(FrontShape::Linear, 3, 3).unwrap();
        let pts: Vec<&[f64]> = f.points().iter().map(|p| p.as_slice()).collect();
        assert_eq!(pts, vec![&[1.0, 0.0, 0.0][..], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
    }

    #[test]
    fn too_few_points_is_an_error() {
        assert!(ReferenceFront::<f64>::for_shape(FrontShape::Convex, 3, 2).is_err());
    }

    #[test]
    fn disconnected_front_is_in_the_surviving_intervals() {
        let f = ReferenceFront::<f64>::for_shape(FrontShape::Disconnected, 3, 400).unwrap();
        assert_eq!(f.len(), 400);
        for p in f.points() {
            for &v in &p[..2] {
                assert!((0.0..=0.251412 + 1e-12).contains(&v) || (0.631627 - 1e-12..=0.859401).contains(&v));
            }
            assert!(p[2] > 2.0 && p[2] <= 6.0);
        }
    }
}
