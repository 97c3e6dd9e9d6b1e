//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Upper 1% point of the chi-square distribution, 4 degrees of freedom.
pub const CHI2_4DF_001: f64 = 13.276_704_135_987_622;
/// Upper 1% point of the chi-square distribution, 1 degree of freedom.
pub const CHI2_1DF_001: f64 = 6.634_896_601_021_214;
/// Asymptotic Kolmogorov–Smirnov coefficient at significance 0.01.
pub const KS_COEFF_001: f64 = 1.6276;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn brute_dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for i in 0..a.len() {
        if a[i] > b[i] {
            return false;
        }
        if a[i] < b[i] {
            strict = true;
        }
    }
    strict
}

/// Indices of points no other point dominates, by an all-pairs scan.
pub fn brute_non_dominated(points: &[Vec<f64>]) -> Vec<usize> {
    let mut out = Vec::new();
    'outer: for i in 0..points.len() {
        for j in 0..points.len() {
            if i != j && brute_dominates(&points[j], &points[i]) {
                continue 'outer;
            }
        }
        out.push(i);
    }
    out
}

/// Rotation built as in the randpick construction: Gram–Schmidt on
/// `[v, b_1, .., b_{n-1}]` where `b_i = e_i` except `b_t = e_n` for the first
/// nonzero index `t` of `v`. Rows of the result are the orthonormal vectors,
/// so `R v = e_1`.
pub fn gram_schmidt_rotation(v: &[f64]) -> Vec<Vec<f64>> {
    let n = v.len();
    let t = v.iter().position(|&x| x != 0.0).expect("nonzero vector");
    let mut columns = vec![v.to_vec()];
    for i in 0..n - 1 {
        let mut b = vec![0.0; n];
        if i == t {
            b[n - 1] = 1.0;
        } else {
            b[i] = 1.0;
        }
        columns.push(b);
    }
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(n);
    for c in columns {
        let mut w = c.clone();
        // classical Gram-Schmidt, applied twice
        for _ in 0..2 {
            for e in &q {
                let p = dot(&w, e);
                for k in 0..n {
                    w[k] -= p * e[k];
                }
            }
        }
        let l = norm(&w);
        q.push(w.into_iter().map(|x| x / l).collect());
    }
    q
}

pub fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect())
        .collect()
}

pub fn transpose(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn matvec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter().map(|r| dot(r, x)).collect()
}

/// Gaussian KDE with per-coordinate min–max scaling, evaluated directly.
pub fn kde_density(points: &[Vec<f64>], h: f64) -> Vec<f64> {
    let n = points.len();
    let m = points[0].len();
    let mut scaled = points.to_vec();
    for j in 0..m {
        let lo = points.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(|p| p[j]).fold(f64::NEG_INFINITY, f64::max);
        for p in scaled.iter_mut() {
            p[j] = if hi > lo { (p[j] - lo) / (hi - lo) } else { 0.0 };
        }
    }
    (0..n)
        .map(|k| {
            let s: f64 = (0..n)
                .map(|i| {
                    let t = dist(&scaled[k], &scaled[i]) / h;
                    (-t * t / 2.0).exp() / (2.0 * PI).sqrt()
                })
                .sum();
            s / (n as f64 * h)
        })
        .collect()
}

pub fn importance_weights(points: &[Vec<f64>], h: f64) -> Vec<f64> {
    let sp: Vec<f64> = kde_density(points, h).iter().map(|d| 1.0 / d.max(1e-12)).collect();
    let total: f64 = sp.iter().sum();
    sp.iter().map(|s| s / total).collect()
}

pub fn brute_spacing(front: &[Vec<f64>]) -> f64 {
    let n = front.len();
    let mut e = vec![f64::INFINITY; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                e[i] = e[i].min(dist(&front[i], &front[j]));
            }
        }
    }
    let mean = e.iter().sum::<f64>() / n as f64;
    (e.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n as f64 - 1.0)).sqrt()
}

pub fn brute_igd(reference: &[Vec<f64>], front: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for r in reference {
        let mut best = f64::INFINITY;
        for p in front {
            best = best.min(dist(r, p));
        }
        total += best;
    }
    total / reference.len() as f64
}

/// Chi-square statistic of observed counts against expected probabilities.
pub fn chi_square(counts: &[u64], probs: &[f64]) -> f64 {
    let total: u64 = counts.iter().sum();
    counts
        .iter()
        .zip(probs)
        .map(|(&c, &p)| {
            let e = p * total as f64;
            (c as f64 - e) * (c as f64 - e) / e
        })
        .sum()
}

/// One-sample KS statistic against the uniform distribution on `[0, 1)`.
pub fn ks_uniform(mut samples: Vec<f64>) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let lo = x - i as f64 / n;
            let hi = (i + 1) as f64 / n - x;
            lo.max(hi)
        })
        .fold(0.0, f64::max)
}

pub mod lsmop {
    //! Straight-line evaluation of the LSMOP problems.

    use std::f64::consts::PI;

    fn sphere(z: &[f64]) -> f64 {
        z.iter().map(|x| x * x).sum()
    }

    fn schwefel(z: &[f64]) -> f64 {
        z.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    fn rosenbrock(z: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..z.len().saturating_sub(1) {
            s += 100.0 * (z[i] * z[i] - z[i + 1]).powi(2) + (z[i] - 1.0).powi(2);
        }
        s
    }

    fn rastrigin(z: &[f64]) -> f64 {
        z.iter().map(|x| x * x - 10.0 * (2.0 * PI * x).cos() + 10.0).sum::<f64>().max(0.0)
    }

    fn griewank(z: &[f64]) -> f64 {
        let s: f64 = z.iter().map(|x| x * x).sum::<f64>() / 4000.0;
        let p: f64 = z
            .iter()
            .enumerate()
            .map(|(i, x)| (x / ((i + 1) as f64).sqrt()).cos())
            .product();
        (s - p + 1.0).max(0.0)
    }

    fn ackley(z: &[f64]) -> f64 {
        let n = z.len() as f64;
        let a = -20.0 * (-0.2 * (z.iter().map(|x| x * x).sum::<f64>() / n).sqrt()).exp();
        let b = -(z.iter().map(|x| (2.0 * PI * x).cos()).sum::<f64>() / n).exp();
        (a + b + 20.0 + std::f64::consts::E).max(0.0)
    }

    fn landscapes(id: u8) -> (fn(&[f64]) -> f64, fn(&[f64]) -> f64) {
        match id {
            1 | 5 => (sphere, sphere),
            2 => (griewank, schwefel),
            3 => (rastrigin, rosenbrock),
            4 => (ackley, griewank),
            6 => (rosenbrock, schwefel),
            7 => (ackley, rosenbrock),
            8 => (griewank, sphere),
            9 => (sphere, ackley),
            _ => unreachable!(),
        }
    }

    /// Per-objective subgroup sizes, remainder on the last subgroup.
    pub fn subgroup_sizes(m: usize, d: usize) -> Vec<Vec<usize>> {
        let nk = 5usize;
        let mut c = vec![3.8 * 0.1 * 0.9];
        for _ in 1..m {
            let p = *c.last().unwrap();
            c.push(3.8 * p * (1.0 - p));
        }
        let s: f64 = c.iter().sum();
        let dv = d - m + 1;
        let mut out: Vec<Vec<usize>> = c
            .iter()
            .map(|ci| vec![(ci / s * dv as f64 / nk as f64).floor() as usize; nk])
            .collect();
        let used: usize = out.iter().flatten().sum();
        out[m - 1][nk - 1] += dv - used;
        out
    }

    pub fn evaluate(id: u8, m: usize, x: &[f64]) -> Vec<f64> {
        let d = x.len();
        let linear = id <= 4;
        // 1-based variable index i runs over m..=d
        let mut z = Vec::with_capacity(d - m + 1);
        for i in m..=d {
            let ratio = i as f64 / d as f64;
            let factor = if linear { 1.0 + ratio } else { 1.0 + (0.5 * PI * ratio).cos() };
            z.push(factor * x[i - 1] - 10.0 * x[0]);
        }
        let (odd, even) = landscapes(id);
        let sizes = subgroup_sizes(m, d);
        let mut g = Vec::with_capacity(m);
        let mut start = 0;
        for (j, groups) in sizes.iter().enumerate() {
            let f = if j % 2 == 0 { odd } else { even };
            let mut sum = 0.0;
            let mut count = 0;
            for &len in groups {
                sum += f(&z[start..start + len]);
                start += len;
                count += len;
            }
            g.push(sum / count as f64);
        }
        let mut out = vec![0.0; m];
        if id <= 4 {
            for j in 0..m {
                let mut v = 1.0 + g[j];
                for p in x.iter().take(m - 1 - j) {
                    v *= p;
                }
                if j > 0 {
                    v *= 1.0 - x[m - 1 - j];
                }
                out[j] = v;
            }
        } else if id <= 8 {
            for j in 0..m {
                let gn = if j + 1 < m { g[j + 1] } else { 0.0 };
                let mut v = 1.0 + g[j] + gn;
                for p in x.iter().take(m - 1 - j) {
                    v *= (0.5 * PI * p).cos();
                }
                if j > 0 {
                    v *= (0.5 * PI * x[m - 1 - j]).sin();
                }
                out[j] = v;
            }
        } else {
            let big = 1.0 + g.iter().sum::<f64>();
            let mut s = 0.0;
            for j in 0..m - 1 {
                out[j] = x[j];
                s += x[j] / (1.0 + big) * (1.0 + (3.0 * PI * x[j]).sin());
            }
            out[m - 1] = (1.0 + big) * (m as f64 - s);
        }
        out
    }
}
