//! Divergences, Dirichlet forms, entropy production, and the de Bruijn
//! identity relating them.

use crate::error::{Error, Result};
use crate::generator::DBGenerator;
use crate::linalg::{
    gamma_map, inner_s_sigma, trace_re, CMat, DensityMatrix, Direction, HermitianOperator, C64,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivergenceKind {
    Umegaki,
    Maximal,
    Ent1,
}

#[derive(Debug, Clone, Copy)]
pub struct DivergenceValue {
    pub value: f64,
    pub kind: DivergenceKind,
}

fn clamp_nonneg(value: f64, kind: DivergenceKind) -> Result<DivergenceValue> {
    if value < -1e-9 {
        return Err(Error::Consistency(format!(
            "divergence came out negative: {value:.3e}"
        )));
    }
    Ok(DivergenceValue {
        value: value.max(0.0),
        kind,
    })
}

/// Umegaki relative entropy Tr ρ(log ρ − log σ). Both states are required to
/// be full rank, which subsumes the support condition.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DivergenceValue> {
    if rho.dim() != sigma.dim() {
        return Err(Error::InvalidInput("state dimension mismatch".into()));
    }
    if !sigma.is_full_rank() {
        return Err(Error::Support(format!(
            "support of the second argument cannot be certified: min eigenvalue {:.3e}",
            sigma.min_eigenvalue()
        )));
    }
    rho.require_full_rank()?;
    let log_rho = rho.log()?;
    let log_sigma = sigma.log()?;
    let value = trace_re(&(rho.matrix() * (log_rho - log_sigma)));
    clamp_nonneg(value, DivergenceKind::Umegaki)
}

/// Maximal divergence Tr[σ X log X] with X = Γ_σ⁻¹(ρ); dominates the Umegaki
/// relative entropy.
pub fn maximal_divergence(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DivergenceValue> {
    rho.require_full_rank()?;
    sigma.require_full_rank()?;
    let x = gamma_map(sigma, rho.matrix(), Direction::Inverse)?;
    let xop = HermitianOperator::from_symmetrized(&x);
    let xlogx = xop.apply_fn(|t| if t <= 0.0 { 0.0 } else { t * t.ln() })?;
    let value = trace_re(&(sigma.matrix() * xlogx.matrix()));
    clamp_nonneg(value, DivergenceKind::Maximal)
}

/// The 1-entropy functional
///   Ent_{1,σ}(f) = Tr(Γ_σ(f)(log Γ_σ(f) − log σ)) − Tr Γ_σ(f) · log Tr Γ_σ(f),
/// defined for f with Γ_σ(f) positive. Satisfies
/// Ent_{1,σ}(Γ_σ⁻¹(ρ)) = D(ρ‖σ) for unit-trace ρ.
pub fn ent_1(sigma: &DensityMatrix, f: &CMat) -> Result<f64> {
    sigma.require_full_rank()?;
    let gf = gamma_map(sigma, f, Direction::Forward)?;
    let gf_op = HermitianOperator::from_symmetrized(&gf);
    let min_eig = gf_op.min_eigenvalue();
    if min_eig <= 0.0 {
        return Err(Error::Domain(format!(
            "Γ_σ(f) is not positive: min eigenvalue {min_eig:.3e}"
        )));
    }
    let log_gf = gf_op.apply_fn(f64::ln)?;
    let log_sigma = sigma.log()?;
    let tr_gf = gf_op.trace();
    let value = trace_re(&(gf_op.matrix() * (log_gf.matrix() - log_sigma)))
        - tr_gf * tr_gf.ln();
    Ok(value)
}

/// 2-Dirichlet form E_{s,2}(f,g) = −⟨f, L(g)⟩_{s,σ}.
pub fn dirichlet_form(gen: &DBGenerator, f: &CMat, g: &CMat, s: f64) -> Result<C64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidInput(format!("s = {s} must lie in [0,1]")));
    }
    let lg = gen.apply(g)?;
    Ok(-inner_s_sigma(gen.sigma(), f, &lg, s)?)
}

/// The same form assembled from the derivations:
///   Σ_j c_j e^{(1/2−s)ω_j} ⟨∂_j f, ∂_j g⟩_{s,σ}.
/// Kept as a second, independently coded route.
pub fn dirichlet_form_derivations(gen: &DBGenerator, f: &CMat, g: &CMat, s: f64) -> Result<C64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidInput(format!("s = {s} must lie in [0,1]")));
    }
    let mut acc = C64::new(0.0, 0.0);
    for (j, t) in gen.terms().iter().enumerate() {
        let df = gen.derivation(j, f)?;
        let dg = gen.derivation(j, g)?;
        let w = t.c * ((0.5 - s) * t.omega).exp();
        acc += inner_s_sigma(gen.sigma(), &df, &dg, s)? * crate::linalg::cr(w);
    }
    Ok(acc)
}

/// 1-Dirichlet form E₁(f,f) = −½ Tr(Γ_σ(L f)(log Γ_σ(f) − log σ)),
/// defined for Γ_σ(f) positive.
pub fn dirichlet_form_1(gen: &DBGenerator, f: &CMat) -> Result<f64> {
    let sigma = gen.sigma();
    let gf = gamma_map(sigma, f, Direction::Forward)?;
    let gf_op = HermitianOperator::from_symmetrized(&gf);
    if gf_op.min_eigenvalue() <= 0.0 {
        return Err(Error::Domain(format!(
            "Γ_σ(f) is not positive: min eigenvalue {:.3e}",
            gf_op.min_eigenvalue()
        )));
    }
    let log_gf = gf_op.apply_fn(f64::ln)?;
    let log_sigma = sigma.log()?;
    let glf = gamma_map(sigma, &gen.apply(f)?, Direction::Forward)?;
    Ok(-0.5 * trace_re(&(glf * (log_gf.matrix() - log_sigma))))
}

/// Entropy production (quantum Fisher information of ρ relative to the
/// semigroup): I_σ(ρ) = −Tr(L_*(ρ)(log ρ − log σ)); equals the negative time
/// derivative of t ↦ D(ρ_t‖σ) at t = 0.
pub fn fisher_information(gen: &DBGenerator, rho: &DensityMatrix) -> Result<f64> {
    rho.require_full_rank()?;
    let lrho = gen.apply_adjoint(rho.matrix())?;
    let log_rho = rho.log()?;
    let log_sigma = gen.sigma().log()?;
    let value = -trace_re(&(lrho * (log_rho - log_sigma)));
    if value < -1e-8 {
        return Err(Error::Consistency(format!(
            "entropy production came out negative: {value:.3e}"
        )));
    }
    Ok(value.max(0.0))
}

/// |d/dt D(ρ_t‖σ) + I_σ(ρ_t)| with a central difference of step h; the
/// residual decays quadratically in h.
pub fn de_bruijn_residual(gen: &DBGenerator, rho: &DensityMatrix, t: f64, h: f64) -> Result<f64> {
    if t < 0.0 || h <= 0.0 {
        return Err(Error::InvalidInput("need t ≥ 0 and h > 0".into()));
    }
    let sigma = gen.sigma();
    let rho_t = gen.evolve(rho, t)?;
    let fisher = fisher_information(gen, &rho_t)?;
    let d_plus = relative_entropy(&gen.evolve(rho, t + h)?, sigma)?.value;
    let t_minus = (t - h).max(0.0);
    let d_minus = relative_entropy(&gen.evolve(rho, t_minus)?, sigma)?.value;
    let deriv = (d_plus - d_minus) / (t + h - t_minus);
    Ok((deriv + fisher).abs())
}

/// Default de Bruijn finite-difference step at time t.
pub fn default_de_bruijn_step(t: f64) -> f64 {
    1e-4 * t.abs().max(1.0)
}
