use crate::error::{Error, Result};
use crate::model::{dominates_slice, Particle};
use crate::sampling::{gaussian_kernel, space_coordinates, KdeSpace};
use crate::scalar::{squared_distance, Scalar};

/// Bounded set of mutually non-dominated particles, in insertion order.
#[derive(Clone, Debug, PartialEq)]
pub struct Archive<T> {
    particles: Vec<Particle<T>>,
    capacity: usize,
}

impl<T: Scalar> Archive<T> {
    pub fn new(capacity: usize) -> Self {
        Self {
            particles: Vec::new(),
            capacity,
        }
    }

    /// Wraps particles without filtering them.
    pub fn from_particles(particles: Vec<Particle<T>>, capacity: usize) -> Self {
        Self { particles, capacity }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn particles(&self) -> &[Particle<T>] {
        &self.particles
    }

    pub fn into_particles(self) -> Vec<Particle<T>> {
        self.particles
    }

    pub fn objectives(&self) -> Vec<&[T]> {
        self.particles.iter().map(|p| p.objectives().as_slice()).collect()
    }

    /// True when no member dominates another.
    pub fn is_mutually_non_dominated(&self) -> bool {
        let f = self.objectives();
        f.iter()
            .enumerate()
            .all(|(i, a)| f.iter().enumerate().all(|(j, b)| i == j || !dominates_slice(b, a)))
    }
}

/// Indices of the non-dominated members of `points`, ascending.
pub fn non_dominated_indices<T: Scalar>(points: &[&[T]]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            !points
                .iter()
                .enumerate()
                .any(|(j, q)| j != i && dominates_slice(q, points[i]))
        })
        .collect()
}

/// Non-dominated subset of `archive ∪ offspring`, archive members first, each
/// group in its original order.
pub fn update_archive<T: Scalar>(archive: Archive<T>, offspring: Vec<Particle<T>>) -> Archive<T> {
    let capacity = archive.capacity;
    let mut union = archive.particles;
    union.extend(offspring);
    let keep = {
        let f: Vec<&[T]> = union.iter().map(|p| p.objectives().as_slice()).collect();
        non_dominated_indices(&f)
    };
    let mut keep = keep.into_iter().peekable();
    let particles = union
        .into_iter()
        .enumerate()
        .filter_map(|(i, p)| {
            if keep.peek() == Some(&i) {
                keep.next();
                Some(p)
            } else {
                None
            }
        })
        .collect();
    Archive { particles, capacity }
}

struct Normalizer<T> {
    lo: Vec<T>,
    hi: Vec<T>,
}

impl<T: Scalar> Normalizer<T> {
    fn over(coords: &[&[T]], alive: &[bool]) -> Self {
        let dim = coords[0].len();
        let mut lo = vec![T::infinity(); dim];
        let mut hi = vec![T::neg_infinity(); dim];
        for (c, _) in coords.iter().zip(alive).filter(|(_, &a)| a) {
            for j in 0..dim {
                lo[j] = lo[j].min(c[j]);
                hi[j] = hi[j].max(c[j]);
            }
        }
        Self { lo, hi }
    }

    fn apply(&self, c: &[T]) -> Vec<T> {
        c.iter()
            .enumerate()
            .map(|(j, &v)| {
                let span = self.hi[j] - self.lo[j];
                if span > T::zero() {
                    (v - self.lo[j]) / span
                } else {
                    T::zero()
                }
            })
            .collect()
    }

    fn same_as(&self, other: &Self) -> bool {
        self.lo == other.lo && self.hi == other.hi
    }
}

/// Removes the member of highest KDE density, one at a time, until at most
/// `capacity` remain. Densities are those of the current members after every
/// removal; ties go to the lowest index. Survivors keep their order.
///
/// Removing a member that does not hold an extreme coordinate leaves the
/// normalization unchanged, so its kernel terms are subtracted from the
/// running sums in O(n); otherwise all sums are recomputed.
pub fn truncate<T: Scalar>(archive: Archive<T>, capacity: usize, h: T, space: KdeSpace) -> Result<Archive<T>> {
    if !(h > T::zero()) || !h.is_finite() {
        return Err(Error::config(format!("bandwidth must be positive, got {h}")));
    }
    let n = archive.len();
    if n <= capacity {
        return Ok(Archive {
            particles: archive.particles,
            capacity,
        });
    }
    let removed_mask = {
        let coords = space_coordinates(&archive.particles, space);
        let mut alive = vec![true; n];
        let mut norm = Normalizer::over(&coords, &alive);
        let mut pts: Vec<Vec<T>> = coords.iter().map(|c| norm.apply(c)).collect();
        let mut sums = kernel_sums(&pts, &alive, h);
        let mut count = n;
        while count > capacity {
            let victim = densest(&sums, &alive);
            alive[victim] = false;
            count -= 1;
            if count == 0 {
                break;
            }
            let next = Normalizer::over(&coords, &alive);
            if next.same_as(&norm) {
                for k in (0..n).filter(|&k| alive[k]) {
                    let t = squared_distance(&pts[k], &pts[victim]).sqrt() / h;
                    sums[k] = sums[k] - gaussian_kernel(t);
                }
            } else {
                norm = next;
                pts = coords.iter().map(|c| norm.apply(c)).collect();
                sums = kernel_sums(&pts, &alive, h);
            }
        }
        alive
    };
    let particles = archive
        .particles
        .into_iter()
        .zip(removed_mask)
        .filter_map(|(p, keep)| keep.then_some(p))
        .collect();
    Ok(Archive { particles, capacity })
}

fn kernel_sums<T: Scalar>(pts: &[Vec<T>], alive: &[bool], h: T) -> Vec<T> {
    let n = pts.len();
    let mut sums = vec![T::zero(); n];
    let k0 = gaussian_kernel(T::zero());
    for k in (0..n).filter(|&k| alive[k]) {
        sums[k] = sums[k] + k0;
        for i in (k + 1..n).filter(|&i| alive[i]) {
            let kv = gaussian_kernel(squared_distance(&pts[k], &pts[i]).sqrt() / h);
            sums[k] = sums[k] + kv;
            sums[i] = sums[i] + kv;
        }
    }
    sums
}

fn densest<T: Scalar>(sums: &[T], alive: &[bool]) -> usize {
    let mut best: Option<usize> = None;
    for k in (0..sums.len()).filter(|&k| alive[k]) {
        match best {
            Some(b) if sums[k] <= sums[b] => {}
            _ => best = Some(k),
        }
    }
    best.expect("at least one live member")
}
