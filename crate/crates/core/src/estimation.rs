//! Finite-blocklength single-parameter estimation: symmetric logarithmic
//! derivatives, the unbiased projective estimator built from them, the two
//! concentration-based error-probability bounds, and a Monte Carlo harness
//! that validates both.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generator::DBGenerator;
use crate::linalg::{c, commutator, cr, trace_re, CMat, DensityMatrix, HermitianOperator};
use crate::parallel::par_map_range;
use crate::rng::rng_for_item;

/// Fisher-information floor below which a family is rejected as
/// uninformative at the queried parameter.
pub const FISHER_TOL: f64 = 1e-10;

type StateFn = Box<dyn Fn(f64) -> Result<DensityMatrix> + Send + Sync>;
type DerivFn = Box<dyn Fn(f64) -> Result<CMat> + Send + Sync>;

/// One-parameter family of full-rank states with an analytic or
/// finite-difference derivative.
pub struct ParametricFamily {
    pub name: String,
    state_fn: StateFn,
    deriv_fn: Option<DerivFn>,
    /// central-difference step for the fallback derivative
    pub h_theta: f64,
}

impl ParametricFamily {
    pub fn new(name: impl Into<String>, state_fn: StateFn, deriv_fn: Option<DerivFn>) -> Self {
        ParametricFamily {
            name: name.into(),
            state_fn,
            deriv_fn,
            h_theta: 1e-5,
        }
    }

    /// Classical two-outcome family diag(θ, 1−θ).
    pub fn diag() -> Self {
        ParametricFamily::new(
            "diag",
            Box::new(|theta: f64| {
                if !(0.0..=1.0).contains(&theta) {
                    return Err(Error::InvalidInput(format!(
                        "theta = {theta} outside [0,1]"
                    )));
                }
                DensityMatrix::from_diagonal(&[theta, 1.0 - theta])
            }),
            Some(Box::new(|_| {
                let mut m = CMat::zeros(2, 2);
                m[(0, 0)] = cr(1.0);
                m[(1, 1)] = cr(-1.0);
                Ok(m)
            })),
        )
    }

    /// Unitary family e^{−iθZ/2} ρ₀ e^{iθZ/2} around a fixed full-rank qubit.
    pub fn rotation(rho0: DensityMatrix) -> Result<Self> {
        if rho0.dim() != 2 {
            return Err(Error::InvalidInput("rotation family is qubit-only".into()));
        }
        rho0.require_full_rank()?;
        let z = HermitianOperator::from_real_diagonal(&[1.0, -1.0])
            .matrix()
            .clone();
        let z2 = z.clone();
        let rho_a = rho0.clone();
        let rho_b = rho0;
        Ok(ParametricFamily::new(
            "rotation",
            Box::new(move |theta: f64| {
                let u = CMat::from_fn(2, 2, |i, j| {
                    if i != j {
                        c(0.0, 0.0)
                    } else {
                        let phase = -0.5 * theta * z[(i, i)].re;
                        c(phase.cos(), phase.sin())
                    }
                });
                DensityMatrix::new(&u * rho_a.matrix() * u.adjoint())
            }),
            Some(Box::new(move |theta: f64| {
                let u = CMat::from_fn(2, 2, |i, j| {
                    if i != j {
                        c(0.0, 0.0)
                    } else {
                        let phase = -0.5 * theta * z2[(i, i)].re;
                        c(phase.cos(), phase.sin())
                    }
                });
                let rho_t = &u * rho_b.matrix() * u.adjoint();
                Ok(commutator(&z2, &rho_t) * c(0.0, -0.5))
            })),
        ))
    }

    /// Gibbs family e^{−θH}/Tr(e^{−θH}) for a fixed Hamiltonian.
    pub fn gibbs(h: HermitianOperator) -> Self {
        let h1 = h.clone();
        let h2 = h;
        ParametricFamily::new(
            "gibbs",
            Box::new(move |theta: f64| {
                let w = h1.apply_fn(|x| (-theta * x).exp())?;
                let tr = w.trace();
                DensityMatrix::new(w.matrix().scale(1.0 / tr))
            }),
            Some(Box::new(move |theta: f64| {
                let w = h2.apply_fn(|x| (-theta * x).exp())?;
                let tr = w.trace();
                let rho = w.matrix().scale(1.0 / tr);
                let mean = trace_re(&(h2.matrix() * &rho));
                // H commutes with ρ_θ, so the derivative is (⟨H⟩ − H)ρ
                Ok((CMat::identity(rho.nrows(), rho.nrows()).scale(mean) - h2.matrix()) * rho)
            })),
        )
    }

    pub fn state(&self, theta: f64) -> Result<DensityMatrix> {
        (self.state_fn)(theta)
    }

    /// Analytic derivative when available, otherwise Richardson-extrapolated
    /// central differences with step `h_theta`.
    pub fn derivative(&self, theta: f64) -> Result<CMat> {
        if let Some(df) = &self.deriv_fn {
            return df(theta);
        }
        let h = self.h_theta;
        let f = |t: f64| -> Result<CMat> { Ok(self.state(t)?.matrix().clone()) };
        let d1 = (f(theta + h)? - f(theta - h)?).scale(1.0 / (2.0 * h));
        let d2 = (f(theta + 2.0 * h)? - f(theta - 2.0 * h)?).scale(1.0 / (4.0 * h));
        let deriv = d1.scale(4.0 / 3.0) - d2.scale(1.0 / 3.0);
        let tr = crate::linalg::trace(&deriv).norm();
        if tr > 1e-8 {
            return Err(Error::Consistency(format!(
                "finite-difference derivative has trace {tr:.3e}"
            )));
        }
        Ok(deriv)
    }
}

/// Symmetric logarithmic derivative: the Hermitian L solving
/// ρ̇ = ½(ρL + Lρ); in ρ's eigenbasis L_{kl} = 2 ρ̇_{kl}/(p_k + p_l).
pub fn sld(family: &ParametricFamily, theta: f64) -> Result<HermitianOperator> {
    let rho = family.state(theta)?;
    rho.require_full_rank()?;
    let drho = family.derivative(theta)?;
    let (p, u) = rho.op().eigen();
    let d = rho.dim();
    let mut l = u.adjoint() * &drho * u;
    for k in 0..d {
        for m in 0..d {
            l[(k, m)] *= cr(2.0 / (p[k] + p[m]));
        }
    }
    let l = u * l * u.adjoint();
    Ok(HermitianOperator::from_symmetrized(&l))
}

/// SLD Fisher information J_θ = Tr(ρ_θ L_θ²).
pub fn sld_fisher(family: &ParametricFamily, theta: f64) -> Result<f64> {
    let rho = family.state(theta)?;
    let l = sld(family, theta)?;
    Ok(trace_re(&(rho.matrix() * l.matrix() * l.matrix())).max(0.0))
}

/// Locally unbiased single-site estimator observable f = L_θ/J_θ + θ·I.
pub fn estimator_observable(family: &ParametricFamily, theta: f64) -> Result<HermitianOperator> {
    let j = sld_fisher(family, theta)?;
    if j <= FISHER_TOL {
        return Err(Error::UninformativeFamily(j));
    }
    let l = sld(family, theta)?;
    let d = l.dim();
    let f = l.matrix().scale(1.0 / j) + CMat::identity(d, d).scale(theta);
    Ok(HermitianOperator::from_symmetrized(&f))
}

/// n-site average f_n = (1/n) Σ_k I ⊗ … ⊗ f ⊗ … ⊗ I.
pub fn site_average(f: &HermitianOperator, n: usize) -> Result<HermitianOperator> {
    if n == 0 {
        return Err(Error::InvalidInput("need n ≥ 1".into()));
    }
    let d = f.dim();
    let total = d
        .checked_pow(n as u32)
        .filter(|&t| t <= 4096)
        .ok_or_else(|| Error::ResourceLimit(format!("site average at {d}^{n} is too large")))?;
    let mut acc = CMat::zeros(total, total);
    for site in 0..n {
        let left = d.pow(site as u32);
        let right = total / (left * d);
        let il = CMat::identity(left, left);
        let ir = CMat::identity(right, right);
        acc += il.kronecker(f.matrix()).kronecker(&ir);
    }
    Ok(HermitianOperator::from_symmetrized(
        &acc.scale(1.0 / n as f64),
    ))
}

/// Error-probability bound for a dissipative preparation: with λ_θ the gap of
/// the preparing generator (invariant state ρ_θ),
/// 2 exp(−n ε² λ_θ/(8 d (11 + log(d⁴‖ρ_θ⁻¹‖_∞))·max(‖g_R‖²_Lip, ‖g_I‖²_Lip))).
pub fn error_bound_dissipative(
    gen_theta: &DBGenerator,
    f: &HermitianOperator,
    n: usize,
    eps: f64,
) -> Result<f64> {
    if eps < 0.0 {
        return Err(Error::InvalidInput("eps must be ≥ 0".into()));
    }
    let b = crate::inequalities::product_concentration_bound(gen_theta, f, n, eps)?;
    Ok((2.0 * b).min(2.0)
        .max(2.0 * b)) // two-sided union of the upper and lower tails
}

/// Dimension-free variant for the depolarizing preparation:
/// 2 exp(−n ε²/(16(11 + log(d⁴‖ρ_θ⁻¹‖_∞))·max(‖φ_R‖², ‖φ_I‖²))) with Hamming
/// Lipschitz constants of the eigenvalue functions. Tightens the dissipative
/// bound by removing the dimension factor.
pub fn error_bound_depolarizing(
    rho_theta: &DensityMatrix,
    f: &HermitianOperator,
    n: usize,
    eps: f64,
) -> Result<f64> {
    if eps < 0.0 {
        return Err(Error::InvalidInput("eps must be ≥ 0".into()));
    }
    rho_theta.require_full_rank()?;
    let d = rho_theta.dim() as f64;
    let s = 1.0 / rho_theta.min_eigenvalue();
    let mean = trace_re(&(rho_theta.matrix() * f.matrix()));
    let dim = f.dim();
    let fc = f.matrix() - CMat::identity(dim, dim).scale(mean);
    let si = rho_theta.power(-0.5)?;
    let sp = rho_theta.power(0.5)?;
    let g = si * fc * sp;
    let spread = |h: &CMat| -> f64 {
        let op = HermitianOperator::from_symmetrized(h);
        let v = op.eigenvalues();
        v.last().unwrap() - v[0]
    };
    let phi_r = spread(&crate::linalg::hermitian_part(&g));
    let phi_i = spread(&crate::linalg::antihermitian_part(&g));
    let m = (phi_r * phi_r).max(phi_i * phi_i);
    if m < 1e-24 {
        return Err(Error::DegenerateObservable(
            "estimator observable is scalar".into(),
        ));
    }
    let log_term = 11.0 + (d.powi(4) * s).ln();
    Ok(2.0 * (-(n as f64) * eps * eps / (16.0 * log_term * m)).exp())
}

/// Monte Carlo estimate of P(|θ̂_n − θ| > ε) for the projective estimator:
/// each of the n copies is measured in the eigenbasis of f (Born
/// probabilities Tr(ρ_θ P_λ)), outcomes are averaged, and failures counted.
/// Deterministic for a fixed seed regardless of thread count. Returns the
/// frequency and its binomial standard error.
pub fn monte_carlo_error_probability(
    family: &ParametricFamily,
    theta: f64,
    n: usize,
    eps: f64,
    trials: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if trials == 0 || n == 0 {
        return Err(Error::InvalidInput("need trials ≥ 1 and n ≥ 1".into()));
    }
    let rho = family.state(theta)?;
    let f = estimator_observable(family, theta)?;
    let (values, probs) = outcome_distribution(&rho, &f);
    let chunk = 1024usize;
    let chunks = trials.div_ceil(chunk);
    let failures: u64 = par_map_range(chunks, |ci| {
        let lo = ci * chunk;
        let hi = ((ci + 1) * chunk).min(trials);
        let mut fails = 0u64;
        for trial in lo..hi {
            let mut rng = rng_for_item(seed, trial as u64);
            let mut sum = 0.0;
            for _ in 0..n {
                let u: f64 = rand::Rng::gen(&mut rng);
                let mut acc = 0.0;
                let mut value = values[values.len() - 1];
                for (v, p) in values.iter().zip(&probs) {
                    acc += p;
                    if u < acc {
                        value = *v;
                        break;
                    }
                }
                sum += value;
            }
            if (sum / n as f64 - theta).abs() > eps {
                fails += 1;
            }
        }
        fails
    })
    .into_iter()
    .sum();
    let p = failures as f64 / trials as f64;
    let se = (p * (1.0 - p) / trials as f64).sqrt();
    Ok((p, se))
}

/// Spectral measure of f under ρ: merged eigenvalues with Born weights.
pub fn outcome_distribution(rho: &DensityMatrix, f: &HermitianOperator) -> (Vec<f64>, Vec<f64>) {
    let spec = f.spectral();
    let values = spec.eigenvalues.clone();
    let probs: Vec<f64> = spec
        .projectors
        .iter()
        .map(|p| trace_re(&(rho.matrix() * p)).max(0.0))
        .collect();
    let total: f64 = probs.iter().sum();
    (values, probs.iter().map(|p| p / total).collect())
}

/// Full report for one estimation run, serializable for the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct EstimationBoundReport {
    pub family: String,
    pub theta: f64,
    pub n: usize,
    pub eps: f64,
    pub trials: usize,
    pub seed: u64,
    pub sld_fisher: f64,
    pub bound_dissipative: f64,
    pub bound_depolarizing: f64,
    pub empirical: f64,
    pub standard_error: f64,
}

/// Runs the full benchmark: bounds plus Monte Carlo, with a depolarizing
/// preparation generator unless one is supplied.
pub fn estimation_report(
    family: &ParametricFamily,
    theta: f64,
    n: usize,
    eps: f64,
    trials: usize,
    seed: u64,
    preparation: Option<&DBGenerator>,
) -> Result<EstimationBoundReport> {
    let rho = family.state(theta)?;
    let f = estimator_observable(family, theta)?;
    let dep;
    let gen = match preparation {
        Some(g) => g,
        None => {
            dep = crate::generator::depolarizing_generator(&rho)?;
            &dep
        }
    };
    let bound_dissipative = error_bound_dissipative(gen, &f, n, eps)?;
    let bound_depolarizing = error_bound_depolarizing(&rho, &f, n, eps)?;
    let (empirical, standard_error) =
        monte_carlo_error_probability(family, theta, n, eps, trials, seed)?;
    Ok(EstimationBoundReport {
        family: family.name.clone(),
        theta,
        n,
        eps,
        trials,
        seed,
        sld_fisher: sld_fisher(family, theta)?,
        bound_dissipative,
        bound_depolarizing,
        empirical,
        standard_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hs_norm;
    use crate::rng::{random_density, rng_from};

    fn constant_family() -> ParametricFamily {
        ParametricFamily::new(
            "constant",
            Box::new(|_| DensityMatrix::from_diagonal(&[0.7, 0.3])),
            None,
        )
    }

    #[test]
    fn sld_constant_family_is_zero() {
        let fam = constant_family();
        let l = sld(&fam, 0.4).unwrap();
        assert!(l.norm_inf() < 1e-7);
        assert!(sld_fisher(&fam, 0.4).unwrap() < 1e-10);
    }

    #[test]
    fn sld_diag_family_matches_classical_score() {
        let fam = ParametricFamily::diag();
        let theta = 0.3;
        let l = sld(&fam, theta).unwrap();
        assert!((l.matrix()[(0, 0)].re - 1.0 / theta).abs() < 1e-9);
        assert!((l.matrix()[(1, 1)].re + 1.0 / (1.0 - theta)).abs() < 1e-9);
        let j = sld_fisher(&fam, theta).unwrap();
        assert!((j - 1.0 / (theta * (1.0 - theta))).abs() < 1e-9);
    }

    #[test]
    fn sld_residual_rotation_family() {
        let mut rng = rng_from(3);
        let rho0 = random_density(2, &mut rng);
        let fam = ParametricFamily::rotation(rho0).unwrap();
        for &theta in &[0.0, 0.4, 1.1] {
            let rho = fam.state(theta).unwrap();
            let l = sld(&fam, theta).unwrap();
            let recon = (rho.matrix() * l.matrix() + l.matrix() * rho.matrix()).scale(0.5);
            let drho = fam.derivative(theta).unwrap();
            assert!(hs_norm(&(recon - drho)) < 1e-8);
        }
    }

    #[test]
    fn sld_fisher_invariant_under_fixed_conjugation() {
        let mut rng = rng_from(5);
        let u = crate::rng::haar_unitary(2, &mut rng);
        let fam = ParametricFamily::diag();
        let u2 = u.clone();
        let conj = ParametricFamily::new(
            "conjugated",
            Box::new(move |theta| {
                let base = DensityMatrix::from_diagonal(&[theta, 1.0 - theta])?;
                DensityMatrix::new(&u * base.matrix() * u.adjoint())
            }),
            Some(Box::new(move |_| {
                let mut m = CMat::zeros(2, 2);
                m[(0, 0)] = cr(1.0);
                m[(1, 1)] = cr(-1.0);
                Ok(&u2 * m * u2.adjoint())
            })),
        );
        let a = sld_fisher(&fam, 0.3).unwrap();
        let b = sld_fisher(&conj, 0.3).unwrap();
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn gibbs_family_derivative_consistency() {
        // analytic derivative against the finite-difference fallback
        let h = HermitianOperator::from_symmetrized(&CMat::from_row_slice(
            2,
            2,
            &[cr(1.0), cr(0.4), cr(0.4), cr(-1.0)],
        ));
        let fam = ParametricFamily::gibbs(h.clone());
        let fd_fam = ParametricFamily::new(
            "gibbs-fd",
            Box::new(move |theta| {
                let w = h.apply_fn(|x| (-theta * x).exp())?;
                let tr = w.trace();
                DensityMatrix::new(w.matrix().scale(1.0 / tr))
            }),
            None,
        );
        let a = fam.derivative(0.7).unwrap();
        let b = fd_fam.derivative(0.7).unwrap();
        assert!(hs_norm(&(a - b)) < 1e-8);
    }

    #[test]
    fn estimator_unbiased() {
        let fam = ParametricFamily::diag();
        let theta = 0.3;
        let rho = fam.state(theta).unwrap();
        let f = estimator_observable(&fam, theta).unwrap();
        assert!((trace_re(&(rho.matrix() * f.matrix())) - theta).abs() < 1e-8);
        // the diag-family estimator reduces to the outcome indicator
        assert!((f.matrix()[(0, 0)].re - 1.0).abs() < 1e-9);
        assert!(f.matrix()[(1, 1)].re.abs() < 1e-9);
        // multi-site unbiasedness
        for n in 1..=3usize {
            let fns = site_average(&f, n).unwrap();
            let mut rn = rho.matrix().clone();
            for _ in 1..n {
                rn = rn.kronecker(rho.matrix());
            }
            assert!((trace_re(&(rn * fns.matrix())) - theta).abs() < 1e-8, "n={n}");
        }
    }

    #[test]
    fn estimator_variance_is_inverse_fisher() {
        let mut rng = rng_from(7);
        let rho0 = random_density(2, &mut rng);
        let fam = ParametricFamily::rotation(rho0).unwrap();
        let theta = 0.5;
        let j = sld_fisher(&fam, theta).unwrap();
        let rho = fam.state(theta).unwrap();
        let f = estimator_observable(&fam, theta).unwrap();
        for n in 2..=3usize {
            let fns = site_average(&f, n).unwrap();
            let mut rn = rho.matrix().clone();
            for _ in 1..n {
                rn = rn.kronecker(rho.matrix());
            }
            let second = trace_re(&(&rn * fns.matrix() * fns.matrix()));
            let var = second - theta * theta;
            assert!(
                (var - 1.0 / (n as f64 * j)).abs() < 1e-8,
                "n={n}: {var} vs {}",
                1.0 / (n as f64 * j)
            );
        }
    }

    #[test]
    fn uninformative_family_rejected() {
        let fam = constant_family();
        assert!(matches!(
            estimator_observable(&fam, 0.5),
            Err(Error::UninformativeFamily(_))
        ));
    }

    #[test]
    fn bounds_shape() {
        let fam = ParametricFamily::diag();
        let theta = 0.3;
        let rho = fam.state(theta).unwrap();
        let f = estimator_observable(&fam, theta).unwrap();
        let gen = crate::generator::depolarizing_generator(&rho).unwrap();
        // vacuous at eps = 0
        assert!((error_bound_dissipative(&gen, &f, 4, 0.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((error_bound_depolarizing(&rho, &f, 4, 0.0).unwrap() - 2.0).abs() < 1e-12);
        // log-bound linear in n, quadratic in eps
        let b = |n: usize, e: f64| error_bound_depolarizing(&rho, &f, n, e).unwrap();
        let l1 = (b(1, 0.5) / 2.0).ln();
        let l2 = (b(2, 0.5) / 2.0).ln();
        let l4 = (b(1, 1.0) / 2.0).ln();
        assert!((l2 - 2.0 * l1).abs() < 1e-12);
        assert!((l4 - 4.0 * l1).abs() < 1e-12);
        // monotone decreasing in n and eps
        assert!(b(8, 0.5) <= b(4, 0.5));
        assert!(b(4, 0.8) <= b(4, 0.5));
    }

    #[test]
    fn monte_carlo_examples() {
        let fam = ParametricFamily::diag();
        // huge eps: no failures
        let (p, _) = monte_carlo_error_probability(&fam, 0.3, 4, 10.0, 2000, 1).unwrap();
        assert_eq!(p, 0.0);
        // n = 4 exact enumeration within 3 standard errors
        let theta = 0.3;
        let n = 4;
        let eps = 0.3;
        let trials = 40_000;
        let (p, se) = monte_carlo_error_probability(&fam, theta, n, eps, trials, 7).unwrap();
        let rho = fam.state(theta).unwrap();
        let f = estimator_observable(&fam, theta).unwrap();
        let (values, probs) = outcome_distribution(&rho, &f);
        let exact = crate::reference::exact_error_probability(&values, &probs, n, theta, eps);
        assert!(
            (p - exact).abs() <= 3.0 * se.max(1e-6),
            "mc {p} vs exact {exact} (se {se})"
        );
    }

    #[test]
    fn monte_carlo_deterministic_for_seed() {
        let fam = ParametricFamily::diag();
        let a = monte_carlo_error_probability(&fam, 0.3, 8, 0.5, 5000, 42).unwrap();
        let b = monte_carlo_error_probability(&fam, 0.3, 8, 0.5, 5000, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn per_site_measurement_matches_global_average_at_n2() {
        // the per-site measurement and the spectral measure of the averaged
        // observable induce the same estimate distribution
        let mut rng = rng_from(11);
        let rho0 = random_density(2, &mut rng);
        let fam = ParametricFamily::rotation(rho0).unwrap();
        let theta = 0.4;
        let rho = fam.state(theta).unwrap();
        let f = estimator_observable(&fam, theta).unwrap();
        let (values, probs) = outcome_distribution(&rho, &f);
        // per-site: outcomes (v_i + v_j)/2 with probability p_i p_j
        let mut per_site: Vec<(f64, f64)> = Vec::new();
        for (i, &vi) in values.iter().enumerate() {
            for (j, &vj) in values.iter().enumerate() {
                per_site.push((0.5 * (vi + vj), probs[i] * probs[j]));
            }
        }
        // global: spectral measure of f₂ under ρ⊗ρ
        let f2 = site_average(&f, 2).unwrap();
        let rho2 = DensityMatrix::new(rho.matrix().kronecker(rho.matrix())).unwrap();
        let (v2, p2) = outcome_distribution(&rho2, &f2);
        // compare the induced distributions by accumulating on value buckets
        let weight_at = |pts: &[(f64, f64)], v: f64| -> f64 {
            pts.iter()
                .filter(|(x, _)| (x - v).abs() < 1e-8)
                .map(|(_, p)| p)
                .sum()
        };
        for (v, p) in v2.iter().zip(&p2) {
            let w = weight_at(&per_site, *v);
            assert!((w - p).abs() < 1e-8, "value {v}: {w} vs {p}");
        }
    }

    #[test]
    fn empirical_error_below_bounds_benchmark() {
        let fam = ParametricFamily::diag();
        let theta = 0.3;
        let n = 8;
        let eps = 0.5;
        let report = estimation_report(&fam, theta, n, eps, 20_000, 3, None).unwrap();
        assert!(report.empirical <= report.bound_depolarizing + 3.0 * report.standard_error);
        assert!(report.empirical <= report.bound_dissipative + 3.0 * report.standard_error);
    }
}
