//! Independent reference algorithms used by the test suites to cross-check
//! the main implementations. Everything here is deliberately written from
//! first principles (closed forms, quadrature, exhaustive enumeration,
//! textbook iterations) and shares no code path with the modules it checks.

use nalgebra::DMatrix;

use crate::linalg::CMat;

/// Gauss–Legendre nodes and weights on [0,1].
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // initial guess, then Newton on P_n
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes[i] = 0.5 * (1.0 - x);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Closed-form eigenvalues (ascending) of a 2×2 Hermitian matrix.
pub fn eigen_2x2_closed_form(m: &CMat) -> (f64, f64) {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let mid = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    (mid - r, mid + r)
}

/// Cyclic Jacobi eigensolver for real symmetric matrices. Returns ascending
/// eigenvalues.
pub fn jacobi_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut a = m.clone();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[(i, j)] * a[(i, j)];
            }
        }
        if off.sqrt() < 1e-14 * (1.0 + a.norm()) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[(p, q)].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut vals: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    vals
}

/// Exact Kantorovich optimal-transport cost between two finite distributions
/// under an arbitrary cost matrix, by exhaustive enumeration of the bases of
/// the transportation polytope. Exponential but exact; intended for d ≤ 4.
pub fn transportation_lp(p: &[f64], q: &[f64], cost: &DMatrix<f64>) -> f64 {
    let d = p.len();
    assert_eq!(q.len(), d);
    let nvars = d * d;
    let nrows = 2 * d - 1; // drop the redundant final column constraint
    let mut a = DMatrix::<f64>::zeros(nrows, nvars);
    let mut b = DMatrix::<f64>::zeros(nrows, 1);
    for i in 0..d {
        for j in 0..d {
            a[(i, i * d + j)] = 1.0;
        }
        b[(i, 0)] = p[i];
    }
    for j in 0..d - 1 {
        for i in 0..d {
            a[(d + j, i * d + j)] = 1.0;
        }
        b[(d + j, 0)] = q[j];
    }
    let mut best = f64::INFINITY;
    let mut subset: Vec<usize> = (0..nrows).collect();
    loop {
        // solve the square system restricted to this basis
        let mut ab = DMatrix::<f64>::zeros(nrows, nrows);
        for (col, &v) in subset.iter().enumerate() {
            for r in 0..nrows {
                ab[(r, col)] = a[(r, v)];
            }
        }
        if let Some(x) = ab.lu().solve(&b) {
            if x.iter().all(|&v| v >= -1e-10) {
                let mut c = 0.0;
                for (col, &v) in subset.iter().enumerate() {
                    c += cost[(v / d, v % d)] * x[(col, 0)];
                }
                best = best.min(c);
            }
        }
        // next combination
        let mut i = nrows;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if subset[i] != i + nvars - nrows {
                subset[i] += 1;
                for k in i + 1..nrows {
                    subset[k] = subset[k - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Total variation by LP under the Hamming cost.
pub fn lp_total_variation(p: &[f64], q: &[f64]) -> f64 {
    let d = p.len();
    let cost = DMatrix::<f64>::from_fn(d, d, |i, j| if i == j { 0.0 } else { 1.0 });
    transportation_lp(p, q, &cost)
}

/// Classical binary relative entropy x log(x/y) + (1−x) log((1−x)/(1−y)).
/// Both logarithms are taken through log1p of the exact difference x − y, so
/// the quadratic cancellation near x = y happens at full precision.
pub fn binary_relative_entropy(x: f64, y: f64) -> f64 {
    let t1 = if x <= 0.0 {
        0.0
    } else {
        x * ((x - y) / y).ln_1p()
    };
    let t2 = if x >= 1.0 {
        0.0
    } else {
        (1.0 - x) * ((y - x) / (1.0 - y)).ln_1p()
    };
    t1 + t2
}

/// Classical Kullback–Leibler divergence of finite distributions.
pub fn classical_kl(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(&a, &b)| if a <= 0.0 { 0.0 } else { a * (a / b).ln() })
        .sum()
}

/// Entropy production of the classical master equation ṗ = q̃ − p with
/// invariant distribution q̃ (the commutative reduction of the generalized
/// depolarizing dynamics): −dD(p‖q̃)/dt = Σ (p_k − q̃_k) log(p_k/q̃_k).
pub fn classical_depolarizing_entropy_production(p: &[f64], stat: &[f64]) -> f64 {
    p.iter()
        .zip(stat)
        .map(|(&a, &b)| (a - b) * (a / b).ln())
        .sum()
}

/// Edge data for the commutative chain induced by a diagonal detailed-balance
/// generator: weight w_kl(p) on each unordered pair {k,l}.
pub struct ChainMetric {
    pub dim: usize,
    /// (k, l, c, omega) per ordered pair term with k ≠ l
    pub edges: Vec<(usize, usize, f64, f64)>,
}

impl ChainMetric {
    fn edge_weight(&self, p: &[f64]) -> DMatrix<f64> {
        let d = self.dim;
        let mut w = DMatrix::<f64>::zeros(d, d);
        for &(k, l, c, omega) in &self.edges {
            // the scalar tilted mean along (k,l): f_ω(p_k/p_l)·p_l
            let m = crate::linalg::f_omega(omega, p[k] / p[l]) * p[l];
            w[(k, l)] += d as f64 * c * m;
        }
        // symmetrize accumulated ordered contributions
        let mut sym = DMatrix::<f64>::zeros(d, d);
        for k in 0..d {
            for l in 0..d {
                if k != l {
                    sym[(k, l)] = w[(k, l)] + w[(l, k)];
                }
            }
        }
        sym
    }

    /// Squared metric speed ‖τ‖²_p = τᵀ L(p)⁺ τ with the weighted graph
    /// Laplacian L(p); τ must sum to zero.
    pub fn speed_squared(&self, p: &[f64], tau: &[f64]) -> f64 {
        let d = self.dim;
        let w = self.edge_weight(p);
        let mut lap = DMatrix::<f64>::zeros(d, d);
        for k in 0..d {
            for l in 0..d {
                if k != l {
                    lap[(k, l)] = -w[(k, l)];
                    lap[(k, k)] += w[(k, l)];
                }
            }
        }
        // solve on the sum-zero subspace via pseudo-inverse with a rank-1
        // shift along the all-ones kernel
        let ones = DMatrix::<f64>::from_element(d, d, 1.0 / d as f64);
        let shifted = &lap + &ones;
        let t = DMatrix::<f64>::from_fn(d, 1, |i, _| tau[i]);
        let u = shifted.lu().solve(&t).expect("chain Laplacian solve failed");
        (t.transpose() * u)[(0, 0)]
    }

    /// Discrete geodesic action between distributions `p0` and `p1` with K
    /// segments, minimized by projected gradient descent over the interior
    /// points. Returns the square root of the optimal action.
    pub fn w2_discrete(&self, p0: &[f64], p1: &[f64], k: usize) -> f64 {
        let d = self.dim;
        let nint = k - 1;
        let mut pts = vec![vec![0.0; d]; nint];
        for (i, pt) in pts.iter_mut().enumerate() {
            let t = (i + 1) as f64 / k as f64;
            for x in 0..d {
                (*pt)[x] = ((1.0 - t) * p0[x] + t * p1[x]).max(1e-7);
            }
            let s: f64 = pt.iter().sum();
            for x in pt.iter_mut() {
                *x /= s;
            }
        }
        let action = |pts: &Vec<Vec<f64>>| -> f64 {
            let mut acc = 0.0;
            for seg in 0..k {
                let a: &[f64] = if seg == 0 { p0 } else { &pts[seg - 1] };
                let b: &[f64] = if seg == k - 1 { p1 } else { &pts[seg] };
                let mid: Vec<f64> = (0..d).map(|x| 0.5 * (a[x] + b[x])).collect();
                let tau: Vec<f64> = (0..d).map(|x| b[x] - a[x]).collect();
                acc += k as f64 * self.speed_squared(&mid, &tau);
            }
            acc
        };
        let mut current = action(&pts);
        let mut step = 0.1;
        for _ in 0..4000 {
            // numerical gradient projected onto the simplex tangent
            let mut grad = vec![vec![0.0; d]; nint];
            let h = 1e-6;
            for i in 0..nint {
                for x in 0..d {
                    let mut plus = pts.clone();
                    plus[i][x] += h;
                    let mut minus = pts.clone();
                    minus[i][x] = (minus[i][x] - h).max(1e-9);
                    grad[i][x] = (action(&plus) - action(&minus)) / (2.0 * h);
                }
                let mean: f64 = grad[i].iter().sum::<f64>() / d as f64;
                for x in 0..d {
                    grad[i][x] -= mean;
                }
            }
            let mut improved = false;
            for _ in 0..30 {
                let mut trial = pts.clone();
                for i in 0..nint {
                    for x in 0..d {
                        trial[i][x] = (trial[i][x] - step * grad[i][x]).max(1e-9);
                    }
                    let s: f64 = trial[i].iter().sum();
                    for x in trial[i].iter_mut() {
                        *x /= s;
                    }
                }
                let val = action(&trial);
                if val < current - 1e-14 {
                    pts = trial;
                    current = val;
                    improved = true;
                    step *= 1.2;
                    break;
                }
                step *= 0.5;
            }
            if !improved && step < 1e-12 {
                break;
            }
        }
        current.sqrt()
    }
}

/// Exact error probability of the sample-mean estimator when each of `n`
/// copies yields outcome `values[i]` with probability `probs[i]`:
/// P(|mean − θ| > ε) by multinomial enumeration.
pub fn exact_error_probability(
    values: &[f64],
    probs: &[f64],
    n: usize,
    theta: f64,
    eps: f64,
) -> f64 {
    let m = values.len();
    let mut total = 0.0;
    let mut counts = vec![0usize; m];
    fn rec(
        i: usize,
        left: usize,
        counts: &mut [usize],
        values: &[f64],
        probs: &[f64],
        n: usize,
        theta: f64,
        eps: f64,
        total: &mut f64,
    ) {
        let m = values.len();
        if i == m - 1 {
            counts[i] = left;
            let mean: f64 = counts
                .iter()
                .zip(values)
                .map(|(&k, &v)| k as f64 * v)
                .sum::<f64>()
                / n as f64;
            if (mean - theta).abs() > eps {
                let mut logp = ln_factorial(n);
                for (&k, &q) in counts.iter().zip(probs) {
                    logp -= ln_factorial(k);
                    logp += if k == 0 {
                        0.0
                    } else {
                        k as f64 * q.max(1e-300).ln()
                    };
                }
                *total += logp.exp();
            }
            return;
        }
        for k in 0..=left {
            counts[i] = k;
            rec(i + 1, left - k, counts, values, probs, n, theta, eps, total);
        }
    }
    rec(0, n, &mut counts, values, probs, n, theta, eps, &mut total);
    total
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (nodes, weights) = gauss_legendre_unit(8);
        // ∫₀¹ x^k dx = 1/(k+1) exactly up to degree 15
        for k in 0..=15 {
            let got: f64 = nodes
                .iter()
                .zip(&weights)
                .map(|(&x, &w)| w * x.powi(k))
                .sum();
            assert!((got - 1.0 / (k as f64 + 1.0)).abs() < 1e-13, "degree {k}");
        }
    }

    #[test]
    fn jacobi_matches_known_spectrum() {
        let m = DMatrix::<f64>::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0]);
        let vals = jacobi_eigenvalues(&m);
        let sqrt2 = 2.0f64.sqrt();
        let expected = [2.0 - sqrt2, 2.0, 2.0 + sqrt2];
        for (a, b) in vals.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn lp_hamming_equals_total_variation() {
        let p = [0.5f64, 0.3, 0.2];
        let q = [0.2, 0.2, 0.6];
        let tv: f64 = p
            .iter()
            .zip(&q)
            .map(|(&a, &b)| (a - b).abs())
            .sum::<f64>()
            / 2.0;
        assert!((lp_total_variation(&p, &q) - tv).abs() < 1e-10);
    }

    #[test]
    fn exact_error_probability_binomial_case() {
        // two outcomes 1, 0 with probs θ, 1−θ: P(|mean−θ|>ε) from binomial sums
        let theta: f64 = 0.3;
        let n = 8;
        let eps = 0.5;
        let got = exact_error_probability(&[1.0, 0.0], &[theta, 1.0 - theta], n, theta, eps);
        let mut expected = 0.0;
        for k in 0..=n {
            let mean = k as f64 / n as f64;
            if (mean - theta).abs() > eps {
                let binom = (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp();
                expected += binom * theta.powi(k as i32) * (1.0 - theta).powi((n - k) as i32);
            }
        }
        assert!((got - expected).abs() < 1e-12);
    }
}
