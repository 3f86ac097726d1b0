//! The functional/transport inequality chain and the concentration bounds it
//! implies, each evaluated with explicit constants: modified log-Sobolev,
//! transportation cost of orders 2 and 1, Poincaré, exponential and Gaussian
//! concentration, the dimension-free depolarizing bound, the product-state
//! bound, and the trace-distance (Pinsker) and mixing checks.

use nalgebra::DMatrix;

use crate::entropy::{fisher_information, relative_entropy};
use crate::error::{Error, Result};
use crate::generator::DBGenerator;
use crate::linalg::{
    f_omega, hermitian_part, hs_norm, spectral_norm, trace_norm, trace_re, CMat, DensityMatrix,
    HermitianOperator,
};
use crate::parallel::par_map_range;
use crate::rng::{ginibre, random_density, rng_for_item};
use crate::wasserstein::{
    lipschitz_constant, w1, w2_upper, LipschitzVariant, W1Options, W2Options,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InequalityName {
    Mlsi,
    Tc2,
    Tc1,
    Poincare,
    Pinsker,
    ExpConcentration,
    GaussConcentration,
}

impl InequalityName {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Mlsi => "MLSI",
            Self::Tc2 => "TC2",
            Self::Tc1 => "TC1",
            Self::Poincare => "PI",
            Self::Pinsker => "Pinsker",
            Self::ExpConcentration => "ExpConc",
            Self::GaussConcentration => "GaussConc",
        }
    }
}

/// Aggregated margin report for one inequality over a sample sweep. Margins
/// are oriented so that nonnegative means the inequality holds.
#[derive(Debug, Clone)]
pub struct InequalityReport {
    pub name: InequalityName,
    pub constant: f64,
    pub samples: usize,
    pub worst_margin: f64,
    /// State achieving the worst margin, reproducible through the public
    /// operations.
    pub witness: Option<DensityMatrix>,
}

// ---------------------------------------------------------------------------
// MLSI
// ---------------------------------------------------------------------------

/// Margin I_σ(ρ) − 2α·D(ρ‖σ) of the modified log-Sobolev inequality.
pub fn mlsi_margin(gen: &DBGenerator, rho: &DensityMatrix, alpha: f64) -> Result<f64> {
    let fisher = fisher_information(gen, rho)?;
    let d = relative_entropy(rho, gen.sigma())?.value;
    Ok(fisher - 2.0 * alpha * d)
}

/// Sampled upper estimate of the optimal MLSI constant:
/// inf over samples of I_σ(ρ)/(2 D(ρ‖σ)).
pub fn mlsi_estimate(gen: &DBGenerator, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    let d = gen.dim();
    let ratios = par_map_range(samples, |i| -> Result<f64> {
        let mut rng = rng_for_item(seed, i as u64);
        let rho = random_density(d, &mut rng);
        let div = relative_entropy(&rho, gen.sigma())?.value;
        if div < 1e-12 {
            return Ok(f64::INFINITY);
        }
        let fisher = fisher_information(gen, &rho)?;
        Ok(fisher / (2.0 * div))
    });
    let mut inf = f64::INFINITY;
    for r in ratios {
        inf = inf.min(r?);
    }
    Ok(inf)
}

// ---------------------------------------------------------------------------
// Transportation cost
// ---------------------------------------------------------------------------

/// TC₂ margin √(2 c₂ D(ρ‖σ)) − W₂(ρ,σ), evaluated with the certified upper
/// bound for the order-2 distance (a nonnegative margin certifies the
/// inequality for the true distance as well).
pub fn tc2_check(gen: &DBGenerator, rho: &DensityMatrix, c2: f64) -> Result<f64> {
    let d = relative_entropy(rho, gen.sigma())?.value;
    let w2 = w2_upper(gen, rho, gen.sigma(), &W2Options::default())?;
    Ok((2.0 * c2 * d).sqrt() - w2.value)
}

/// TC₁ margin √(2 c₁ D(ρ‖σ)) − W₁(ρ,σ) with the ascent value for the
/// order-1 distance (a lower bound, so the check is necessary but not
/// sufficient; the certificate-normalized value is what is compared).
pub fn tc1_check(gen: &DBGenerator, rho: &DensityMatrix, c1: f64) -> Result<f64> {
    let d = relative_entropy(rho, gen.sigma())?.value;
    let w1r = w1(
        gen,
        rho,
        gen.sigma(),
        LipschitzVariant::Lip,
        &W1Options::default(),
    )?;
    Ok((2.0 * c1 * d).sqrt() - w1r.value)
}

// ---------------------------------------------------------------------------
// κ distortion constant
// ---------------------------------------------------------------------------

/// Bracket for κ = sup_j ‖[σ]_{ω_j} ∘ [σ]_{−ω_j}⁻¹‖_{∞→∞}. Per term the
/// composite is a Schur multiplier with entries
/// f_{ω}(σ_k/σ_l)/f_{−ω}(σ_k/σ_l) in σ's eigenbasis; the lower bound comes
/// from sampled test operators plus alternating ascent, the upper bound from
/// a row–column factorization of the multiplier matrix with diagonal
/// balancing.
pub fn kappa(gen: &DBGenerator) -> Result<[f64; 2]> {
    let sigma = gen.sigma();
    sigma.require_full_rank()?;
    let evals = sigma.op().eigenvalues().to_vec();
    let d = gen.dim();
    let mut lower = 1.0f64;
    let mut upper = 1.0f64;
    for (j, t) in gen.terms().iter().enumerate() {
        let mut m = DMatrix::<f64>::zeros(d, d);
        let mut is_identity = true;
        for k in 0..d {
            for l in 0..d {
                let tkl = evals[k] / evals[l];
                let v = f_omega(t.omega, tkl) / f_omega(-t.omega, tkl);
                m[(k, l)] = v;
                if (v - 1.0).abs() > 1e-13 {
                    is_identity = false;
                }
            }
        }
        if is_identity {
            // multiplier acts as the identity; norm exactly 1
            continue;
        }
        let lo = schur_norm_lower(&m, j as u64);
        let hi = schur_norm_upper(&m).max(lo);
        lower = lower.max(lo);
        upper = upper.max(hi);
    }
    Ok([lower, upper])
}

fn schur_apply(m: &DMatrix<f64>, a: &CMat) -> CMat {
    let d = m.nrows();
    CMat::from_fn(d, d, |i, j| a[(i, j)] * crate::linalg::cr(m[(i, j)]))
}

fn polar_unitary(h: &CMat) -> CMat {
    let svd = h.clone().svd(true, true);
    let u = svd.u.expect("svd with u");
    let vt = svd.v_t.expect("svd with v_t");
    u * vt
}

fn schur_norm_lower(m: &DMatrix<f64>, seed: u64) -> f64 {
    let d = m.nrows();
    let mut best = 0.0f64;
    let mut best_a = CMat::identity(d, d);
    // sampled test operators
    for s in 0..64u64 {
        let mut rng = rng_for_item(0x5eed ^ seed, s);
        let a = ginibre(d, &mut rng);
        let n = spectral_norm(&a);
        if n < 1e-14 {
            continue;
        }
        let a = a.scale(1.0 / n);
        let v = spectral_norm(&schur_apply(m, &a));
        if v > best {
            best = v;
            best_a = a;
        }
    }
    // alternating ascent: linearize at the top singular pair, maximize the
    // linear functional over the unit ball (polar factor), repeat
    let mut a = best_a;
    for _ in 0..40 {
        let b = schur_apply(m, &a);
        let (_, u, v) = crate::linalg::top_singular_pair(&b);
        let g = &u * v.adjoint();
        let h = schur_apply(m, &g); // multiplier is real, self-adjoint action
        let a_next = polar_unitary(&h);
        let val = spectral_norm(&schur_apply(m, &a_next));
        if val > best {
            best = val;
            a = a_next;
        } else {
            break;
        }
    }
    best
}

fn schur_norm_upper(m: &DMatrix<f64>) -> f64 {
    let d = m.nrows();
    // factorization M = (U√Σ D)(V√Σ D^{-1})† from the SVD, with diagonal
    // balancing refined by coordinate descent
    let mc = CMat::from_fn(d, d, |i, j| crate::linalg::cr(m[(i, j)]));
    let svd = mc.svd(true, true);
    let u = svd.u.expect("svd u");
    let vt = svd.v_t.expect("svd v_t");
    let singulars = svd.singular_values;
    let mut dscale = vec![1.0f64; d];
    let bound = |dscale: &[f64]| -> f64 {
        let mut max_r = 0.0f64;
        let mut max_c = 0.0f64;
        for k in 0..d {
            let mut r = 0.0;
            let mut c = 0.0;
            for s in 0..d {
                let w = singulars[s];
                r += w * u[(k, s)].norm_sqr() * dscale[s] * dscale[s];
                c += w * vt[(s, k)].norm_sqr() / (dscale[s] * dscale[s]);
            }
            max_r = max_r.max(r);
            max_c = max_c.max(c);
        }
        (max_r * max_c).sqrt()
    };
    let mut best = bound(&dscale);
    for _ in 0..60 {
        let mut improved = false;
        for s in 0..d {
            for &factor in &[1.25f64, 0.8] {
                let old = dscale[s];
                dscale[s] = old * factor;
                let b = bound(&dscale);
                if b < best - 1e-15 {
                    best = b;
                    improved = true;
                } else {
                    dscale[s] = old;
                }
            }
        }
        if !improved {
            break;
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Poincaré
// ---------------------------------------------------------------------------

/// Margin E_{1/2,2}(f,f) − λ‖f‖²_{1/2,σ} for a σ-centered observable.
pub fn poincare_margin(gen: &DBGenerator, f: &CMat, lambda: f64) -> Result<f64> {
    let sigma = gen.sigma();
    let centered = trace_re(&(sigma.matrix() * f));
    if centered.abs() > 1e-8 * hs_norm(f).max(1.0) {
        return Err(Error::InvalidInput(format!(
            "observable must satisfy Tr(σf) = 0, got {centered:.3e}"
        )));
    }
    let energy = crate::entropy::dirichlet_form(gen, f, f, 0.5)?.re;
    let norm_sq = crate::linalg::inner_s_sigma(sigma, f, f, 0.5)?.re;
    Ok(energy - lambda * norm_sq)
}

// ---------------------------------------------------------------------------
// Tails and concentration bounds
// ---------------------------------------------------------------------------

/// Tr(σ·1_{[r,∞)}(f − Tr(σf)·I)).
pub fn tail_probability(sigma: &DensityMatrix, f: &HermitianOperator, r: f64) -> f64 {
    let mean = trace_re(&(sigma.matrix() * f.matrix()));
    let d = f.dim();
    let centered = HermitianOperator::from_symmetrized(
        &(f.matrix() - CMat::identity(d, d).scale(mean)),
    );
    let proj = centered.spectral_indicator(r, f64::INFINITY);
    trace_re(&(sigma.matrix() * proj.matrix())).clamp(0.0, 1.0)
}

fn centered(sigma: &DensityMatrix, f: &HermitianOperator) -> HermitianOperator {
    let mean = trace_re(&(sigma.matrix() * f.matrix()));
    let d = f.dim();
    HermitianOperator::from_symmetrized(&(f.matrix() - CMat::identity(d, d).scale(mean)))
}

/// Exponential-concentration tail bound from the Poincaré inequality with
/// λ the spectral gap: 3·exp(−r√λ/(‖f‖_Lip·C_{f,λ})) with
/// C = (e^{2√λ‖f‖_∞/‖f‖_Lip} − 1)/(√(2λ)‖f‖_∞/‖f‖_Lip) > 1.
pub fn exp_concentration_bound(gen: &DBGenerator, f: &HermitianOperator, r: f64) -> Result<f64> {
    let lambda = gen.spectral_gap()?.spectral_gap;
    let fc = centered(gen.sigma(), f);
    let lip = lipschitz_constant(gen, &fc, LipschitzVariant::Lip)?;
    if lip < 1e-12 {
        return Err(Error::DegenerateObservable(
            "observable is a multiple of the identity".into(),
        ));
    }
    let x = lambda.sqrt() * fc.norm_inf() / lip;
    let c = ((2.0 * x).exp_m1()) / (2.0f64.sqrt() * x);
    Ok(3.0 * (-r * lambda.sqrt() / (lip * c)).exp())
}

/// The constant C_{f,λ} of the exponential bound (always > 1).
pub fn exp_concentration_constant(gen: &DBGenerator, f: &HermitianOperator) -> Result<f64> {
    let lambda = gen.spectral_gap()?.spectral_gap;
    let fc = centered(gen.sigma(), f);
    let lip = lipschitz_constant(gen, &fc, LipschitzVariant::Lip)?;
    if lip < 1e-12 {
        return Err(Error::DegenerateObservable(
            "observable is a multiple of the identity".into(),
        ));
    }
    let x = lambda.sqrt() * fc.norm_inf() / lip;
    Ok(((2.0 * x).exp_m1()) / (2.0f64.sqrt() * x))
}

/// Real/imaginary Lipschitz data of g = σ^{−1/2} f σ^{1/2} (the modular
/// square-root tilt of f), shared by the Gaussian bounds.
fn tilted_parts(
    gen: &DBGenerator,
    f: &HermitianOperator,
) -> Result<(HermitianOperator, HermitianOperator)> {
    let sigma = gen.sigma();
    let fc = centered(sigma, f);
    let si = sigma.power(-0.5)?;
    let sp = sigma.power(0.5)?;
    let g = si * fc.matrix() * sp;
    let g_r = HermitianOperator::from_symmetrized(&hermitian_part(&g));
    let g_i = HermitianOperator::from_symmetrized(&crate::linalg::antihermitian_part(&g));
    Ok((g_r, g_i))
}

/// Gaussian-concentration tail bound from TC₁ with constant c₁:
/// exp(−r²/(8·max(‖g_R‖²_Lip, ‖g_I‖²_Lip)·c₁)), g = σ^{−1/2} f σ^{1/2}.
pub fn gauss_concentration_bound(
    gen: &DBGenerator,
    f: &HermitianOperator,
    r: f64,
    c1: f64,
) -> Result<f64> {
    if c1 <= 0.0 {
        return Err(Error::InvalidInput("c1 must be positive".into()));
    }
    let (g_r, g_i) = tilted_parts(gen, f)?;
    let lr = lipschitz_constant(gen, &g_r, LipschitzVariant::Lip)?;
    let li = lipschitz_constant(gen, &g_i, LipschitzVariant::Lip)?;
    let m = (lr * lr).max(li * li);
    if m < 1e-24 {
        return Err(Error::DegenerateObservable(
            "both tilted parts have zero Lipschitz constant".into(),
        ));
    }
    Ok((-r * r / (8.0 * m * c1)).exp())
}

/// Dimension-free Gaussian bound for the generalized depolarizing semigroup:
/// exp(−r²·α₁(σ)/(16·max(‖φ_R‖², ‖φ_I‖²))) where φ_R, φ_I are the eigenvalue
/// functions of the real and imaginary parts of σ^{−1/2} f σ^{1/2} and the
/// norm is the Hamming Lipschitz constant (eigenvalue spread).
pub fn depolarizing_gauss_bound(sigma: &DensityMatrix, f: &HermitianOperator, r: f64) -> Result<f64> {
    sigma.require_full_rank()?;
    let alpha = crate::generator::mlsi_constant_depolarizing(sigma)?;
    let mean = trace_re(&(sigma.matrix() * f.matrix()));
    let d = f.dim();
    let fc = f.matrix() - CMat::identity(d, d).scale(mean);
    let si = sigma.power(-0.5)?;
    let sp = sigma.power(0.5)?;
    let g = si * fc * sp;
    let spread = |h: &CMat| -> f64 {
        let op = HermitianOperator::from_symmetrized(h);
        let v = op.eigenvalues();
        v.last().unwrap() - v[0]
    };
    let phi_r = spread(&hermitian_part(&g));
    let phi_i = spread(&crate::linalg::antihermitian_part(&g));
    let m = (phi_r * phi_r).max(phi_i * phi_i);
    if m < 1e-24 {
        return Err(Error::DegenerateObservable(
            "both tilted parts are scalar".into(),
        ));
    }
    Ok((-r * r * alpha / (16.0 * m)).exp())
}

/// Product-state Gaussian bound for n identical sites with single-site
/// observable average f_n = (1/n) Σ_k f^(k):
/// exp(−λ n r²/(8 d (11 + log(d⁴‖σ⁻¹‖_∞))·max(‖g_R‖²_Lip, ‖g_I‖²_Lip))),
/// all quantities of the single site.
pub fn product_concentration_bound(
    site_gen: &DBGenerator,
    f: &HermitianOperator,
    n: usize,
    r: f64,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("need n ≥ 1 sites".into()));
    }
    let lambda = site_gen.spectral_gap()?.spectral_gap;
    let d = site_gen.dim() as f64;
    let s = 1.0 / site_gen.sigma().min_eigenvalue();
    let (g_r, g_i) = tilted_parts(site_gen, f)?;
    let lr = lipschitz_constant(site_gen, &g_r, LipschitzVariant::Lip)?;
    let li = lipschitz_constant(site_gen, &g_i, LipschitzVariant::Lip)?;
    let m = (lr * lr).max(li * li);
    if m < 1e-24 {
        return Err(Error::DegenerateObservable(
            "both tilted parts have zero Lipschitz constant".into(),
        ));
    }
    let log_term = 11.0 + (d.powi(4) * s).ln();
    Ok((-lambda * (n as f64) * r * r / (8.0 * d * log_term * m)).exp())
}

// ---------------------------------------------------------------------------
// Pinsker and mixing
// ---------------------------------------------------------------------------

/// Pinsker margin √(2 D(ρ‖σ)) − ‖ρ−σ‖₁ (Schatten-1 norm).
pub fn pinsker_check(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let d = relative_entropy(rho, sigma)?.value;
    let tn = trace_norm(&(rho.matrix() - sigma.matrix()));
    Ok((2.0 * d).sqrt() - tn)
}

/// Mixing margins e^{−α₁ t}·√(2 D(ρ‖σ)) − ‖ρ_t − σ‖₁ on a time grid;
/// combines the entropy decay of the semigroup with the Pinsker bound.
pub fn mixing_check(
    gen: &DBGenerator,
    rho: &DensityMatrix,
    t_grid: &[f64],
    alpha: f64,
) -> Result<Vec<f64>> {
    let d0 = relative_entropy(rho, gen.sigma())?.value;
    let mut out = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let rho_t = gen.evolve(rho, t)?;
        let tn = trace_norm(&(rho_t.matrix() - gen.sigma().matrix()));
        out.push((-alpha * t).exp() * (2.0 * d0).sqrt() - tn);
    }
    Ok(out)
}
