//! Spectral calculus for Hermitian matrices and the modular-theoretic
//! superoperators used throughout the crate.
//!
//! Superoperators are realized as `d²×d²` matrices acting on column-stacked
//! vectorizations: `vec(X f Y) = (Yᵀ ⊗ X) vec(f)`. All types are immutable
//! after construction; spectral data is cached behind `OnceLock`.

use std::sync::OnceLock;

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Full-rank floor: states with a smaller minimum eigenvalue are rejected by
/// operations that need an inverse or a logarithm.
pub const EPS_RANK: f64 = 1e-9;

/// Entrywise absolute tolerance for Hermiticity validation.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Relative threshold below which adjacent eigenvalues are merged into one
/// spectral projector. Keeps eigenbasis multiplier maps away from spurious
/// near-degenerate ratios.
pub const EIGEN_MERGE_REL: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Hilbert–Schmidt inner product ⟨A,B⟩ = Tr(A†B).
pub fn hs_inner(a: &CMat, b: &CMat) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x.conj() * y;
    }
    acc
}

pub fn hs_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

pub fn trace(a: &CMat) -> C64 {
    let mut t = C64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        t += a[(i, i)];
    }
    t
}

pub fn trace_re(a: &CMat) -> f64 {
    trace(a).re
}

/// (A + A†)/2.
pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()).scale(0.5)
}

/// (A − A†)/(2i).
pub fn antihermitian_part(a: &CMat) -> CMat {
    (a - a.adjoint()) * C64::new(0.0, -0.5)
}

pub fn is_hermitian(a: &CMat, tol: f64) -> bool {
    if a.nrows() != a.ncols() {
        return false;
    }
    for i in 0..a.nrows() {
        for j in i..a.ncols() {
            if (a[(i, j)] - a[(j, i)].conj()).norm() > tol {
                return false;
            }
        }
    }
    true
}

/// Eigenvalues (ascending) and a unitary whose columns are the matching
/// eigenvectors, for a Hermitian input. The input is symmetrized first to
/// wash out floating-point asymmetry.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let h = hermitian_part(m);
    let eig = h.symmetric_eigen();
    let d = m.nrows();
    let mut idx: Vec<usize> = (0..d).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let vals: Vec<f64> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(d, d);
    for (col, &i) in idx.iter().enumerate() {
        vecs.set_column(col, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Spectral norm. Hermitian inputs reduce to max |eigenvalue|; general inputs
/// go through the top singular value of A†A.
pub fn spectral_norm(a: &CMat) -> f64 {
    if is_hermitian(a, 1e-13) {
        let (vals, _) = hermitian_eigen(a);
        vals.iter().fold(0.0, |m, &v| m.max(v.abs()))
    } else {
        let (vals, _) = hermitian_eigen(&(a.adjoint() * a));
        vals.last().map(|&v| v.max(0.0).sqrt()).unwrap_or(0.0)
    }
}

/// Schatten-1 norm (sum of singular values).
pub fn trace_norm(a: &CMat) -> f64 {
    if is_hermitian(a, 1e-13) {
        let (vals, _) = hermitian_eigen(a);
        vals.iter().map(|v| v.abs()).sum()
    } else {
        let (vals, _) = hermitian_eigen(&(a.adjoint() * a));
        vals.iter().map(|v| v.max(0.0).sqrt()).sum()
    }
}

/// Top singular triple (σ, u, v) with A v = σ u.
pub fn top_singular_pair(a: &CMat) -> (f64, CVec, CVec) {
    let (vals, vecs) = hermitian_eigen(&(a.adjoint() * a));
    let last = vals.len() - 1;
    let v: CVec = vecs.column(last).into();
    let av = a * &v;
    let s = vals[last].max(0.0).sqrt();
    let u = if s > 1e-300 { av.scale(1.0 / s) } else { av };
    (s, u, v)
}

// ---------------------------------------------------------------------------
// Spectral decomposition
// ---------------------------------------------------------------------------

/// Eigenvalues (ascending, near-degenerate values merged) with the matching
/// orthogonal projectors.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub projectors: Vec<CMat>,
}

impl SpectralDecomposition {
    fn from_eigen(vals: &[f64], vecs: &CMat) -> Self {
        let d = vals.len();
        let scale = vals.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let tol = EIGEN_MERGE_REL * scale;
        let mut eigenvalues = Vec::new();
        let mut projectors = Vec::new();
        let mut start = 0;
        while start < d {
            let mut end = start + 1;
            while end < d && vals[end] - vals[end - 1] <= tol {
                end += 1;
            }
            let mut proj = CMat::zeros(d, d);
            let mut mean = 0.0;
            for k in start..end {
                let col = vecs.column(k);
                proj += &col * col.adjoint();
                mean += vals[k];
            }
            eigenvalues.push(mean / (end - start) as f64);
            projectors.push(proj);
            start = end;
        }
        SpectralDecomposition {
            eigenvalues,
            projectors,
        }
    }

    pub fn reconstruct(&self) -> CMat {
        let d = self.projectors[0].nrows();
        let mut acc = CMat::zeros(d, d);
        for (v, p) in self.eigenvalues.iter().zip(&self.projectors) {
            acc += p.scale(*v);
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// HermitianOperator
// ---------------------------------------------------------------------------

/// A validated d×d self-adjoint matrix with lazily cached spectral data.
#[derive(Debug)]
pub struct HermitianOperator {
    dim: usize,
    mat: CMat,
    eigen: OnceLock<(Vec<f64>, CMat)>,
    spectral: OnceLock<SpectralDecomposition>,
}

impl Clone for HermitianOperator {
    fn clone(&self) -> Self {
        let out = HermitianOperator {
            dim: self.dim,
            mat: self.mat.clone(),
            eigen: OnceLock::new(),
            spectral: OnceLock::new(),
        };
        if let Some(e) = self.eigen.get() {
            let _ = out.eigen.set(e.clone());
        }
        if let Some(s) = self.spectral.get() {
            let _ = out.spectral.set(s.clone());
        }
        out
    }
}

impl HermitianOperator {
    pub fn new(mat: CMat) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::InvalidInput(format!(
                "expected a nonempty square matrix, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        if !is_hermitian(&mat, HERMITICITY_TOL) {
            return Err(Error::InvalidInput(
                "matrix is not Hermitian within 1e-12".into(),
            ));
        }
        Ok(HermitianOperator {
            dim: mat.nrows(),
            mat,
            eigen: OnceLock::new(),
            spectral: OnceLock::new(),
        })
    }

    /// Builds from (A + A†)/2 without a Hermiticity check.
    pub fn from_symmetrized(mat: &CMat) -> Self {
        let h = hermitian_part(mat);
        HermitianOperator {
            dim: h.nrows(),
            mat: h,
            eigen: OnceLock::new(),
            spectral: OnceLock::new(),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        let mut m = CMat::zeros(d, d);
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = cr(v);
        }
        HermitianOperator {
            dim: d,
            mat: m,
            eigen: OnceLock::new(),
            spectral: OnceLock::new(),
        }
    }

    pub fn identity(d: usize) -> Self {
        HermitianOperator {
            dim: d,
            mat: CMat::identity(d, d),
            eigen: OnceLock::new(),
            spectral: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    /// Raw eigenpairs: ascending eigenvalues and a unitary of eigenvectors.
    pub fn eigen(&self) -> &(Vec<f64>, CMat) {
        self.eigen.get_or_init(|| hermitian_eigen(&self.mat))
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen().0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues().last().unwrap()
    }

    /// Merged spectral decomposition (projector form).
    pub fn spectral(&self) -> &SpectralDecomposition {
        self.spectral.get_or_init(|| {
            let (vals, vecs) = self.eigen();
            SpectralDecomposition::from_eigen(vals, vecs)
        })
    }

    pub fn norm_inf(&self) -> f64 {
        self.eigenvalues().iter().fold(0.0, |m, &v| m.max(v.abs()))
    }

    pub fn trace(&self) -> f64 {
        trace_re(&self.mat)
    }

    /// Functional calculus: Σ φ(λ) P_λ. Fails if φ is undefined (non-finite)
    /// at any eigenvalue.
    pub fn apply_fn(&self, phi: impl Fn(f64) -> f64) -> Result<HermitianOperator> {
        let (vals, vecs) = self.eigen();
        let mut phis = Vec::with_capacity(vals.len());
        for &v in vals {
            let y = phi(v);
            if !y.is_finite() {
                return Err(Error::Domain(format!(
                    "scalar function undefined at eigenvalue {v:.6e}"
                )));
            }
            phis.push(y);
        }
        let mut diag = CMat::zeros(self.dim, self.dim);
        for (i, &y) in phis.iter().enumerate() {
            diag[(i, i)] = cr(y);
        }
        let m = vecs * diag * vecs.adjoint();
        Ok(HermitianOperator::from_symmetrized(&m))
    }

    /// Spectral projection 1_{[lo,hi]}(f), endpoints inclusive within a small
    /// absolute slack.
    pub fn spectral_indicator(&self, lo: f64, hi: f64) -> HermitianOperator {
        let slack = 1e-12 * self.norm_inf().max(1.0);
        let spec = self.spectral();
        let mut proj = CMat::zeros(self.dim, self.dim);
        for (v, p) in spec.eigenvalues.iter().zip(&spec.projectors) {
            if *v >= lo - slack && *v <= hi + slack {
                proj += p;
            }
        }
        HermitianOperator {
            dim: self.dim,
            mat: proj,
            eigen: OnceLock::new(),
            spectral: OnceLock::new(),
        }
    }
}

// ---------------------------------------------------------------------------
// DensityMatrix
// ---------------------------------------------------------------------------

/// Positive unit-trace Hermitian operator carrying its minimum-eigenvalue
/// witness. Full-rank refinements are enforced by `require_full_rank`.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    op: HermitianOperator,
    min_eigenvalue: f64,
}

impl DensityMatrix {
    pub fn new(mat: CMat) -> Result<Self> {
        Self::with_tolerance(mat, 1e-12)
    }

    /// Validates positivity and unit trace within `tol`, renormalizing the
    /// trace exactly. Evolved states use a looser tolerance. The spectral
    /// data of the symmetrized input is computed once and rescaled.
    pub fn with_tolerance(mat: CMat, tol: f64) -> Result<Self> {
        let h = hermitian_part(&mat);
        if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        let (vals, vecs) = hermitian_eigen(&h);
        let tr: f64 = vals.iter().sum();
        if (tr - 1.0).abs() > tol {
            return Err(Error::InvalidInput(format!(
                "trace {tr:.12} is not 1 within {tol:.1e}"
            )));
        }
        if vals[0] < -tol {
            return Err(Error::InvalidInput(format!(
                "negative eigenvalue {:.3e} beyond tolerance {tol:.1e}",
                vals[0]
            )));
        }
        let m = h.scale(1.0 / tr);
        let scaled: Vec<f64> = vals.iter().map(|v| v / tr).collect();
        let min_eigenvalue = scaled[0];
        let op = HermitianOperator {
            dim: m.nrows(),
            mat: m,
            eigen: OnceLock::new(),
            spectral: OnceLock::new(),
        };
        let _ = op.eigen.set((scaled, vecs));
        Ok(DensityMatrix {
            op,
            min_eigenvalue,
        })
    }

    pub fn from_evolved(mat: CMat) -> Result<Self> {
        Self::with_tolerance(mat, 1e-9)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        let m = CMat::identity(d, d).scale(1.0 / d as f64);
        let op = HermitianOperator::from_symmetrized(&m);
        DensityMatrix {
            op,
            min_eigenvalue: 1.0 / d as f64,
        }
    }

    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        if probs.iter().any(|&p| p < -1e-12) {
            return Err(Error::InvalidInput("negative probability".into()));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "probabilities sum to {s}, expected 1"
            )));
        }
        let scaled: Vec<f64> = probs.iter().map(|&p| p / s).collect();
        let op = HermitianOperator::from_real_diagonal(&scaled);
        let min_eigenvalue = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(DensityMatrix {
            op,
            min_eigenvalue,
        })
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &CMat {
        self.op.matrix()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn is_full_rank(&self) -> bool {
        self.min_eigenvalue >= EPS_RANK
    }

    pub fn require_full_rank(&self) -> Result<()> {
        if self.is_full_rank() {
            Ok(())
        } else {
            Err(Error::SingularState {
                min_eig: self.min_eigenvalue,
                floor: EPS_RANK,
            })
        }
    }

    /// Mixes with the maximally mixed state just enough to lift the minimum
    /// eigenvalue to `eps`. States already above the floor are returned as-is.
    pub fn project_full_rank(&self, eps: f64) -> DensityMatrix {
        let d = self.dim() as f64;
        if self.min_eigenvalue >= eps || eps >= 1.0 / d {
            return self.clone();
        }
        let w = (eps - self.min_eigenvalue) / (1.0 / d - self.min_eigenvalue);
        let m = self.matrix().scale(1.0 - w) + CMat::identity(self.dim(), self.dim()).scale(w / d);
        DensityMatrix::with_tolerance(m, 1e-9).expect("mixing preserves state validity")
    }

    /// σ^s through the spectral calculus. Negative powers require full rank.
    pub fn power(&self, s: f64) -> Result<CMat> {
        if s < 0.0 || s.fract() != 0.0 {
            if s < 0.0 {
                self.require_full_rank()?;
            }
            let op = self.op.apply_fn(|x| x.max(0.0).powf(s))?;
            Ok(op.into_matrix())
        } else {
            let op = self.op.apply_fn(|x| x.powf(s))?;
            Ok(op.into_matrix())
        }
    }

    /// log σ; requires full rank.
    pub fn log(&self) -> Result<CMat> {
        self.require_full_rank()?;
        let op = self.op.apply_fn(|x| x.ln())?;
        Ok(op.into_matrix())
    }
}

// ---------------------------------------------------------------------------
// Vectorization and superoperators
// ---------------------------------------------------------------------------

/// Column-stacking vectorization: vec(A)[i + d·j] = A[i,j].
pub fn vectorize(a: &CMat) -> CVec {
    let d = a.nrows();
    CVec::from_iterator(d * d, a.iter().cloned())
}

pub fn unvectorize(v: &CVec, d: usize) -> CMat {
    CMat::from_iterator(d, d, v.iter().cloned())
}

/// A linear map on operators realized as a d²×d² matrix over column-stacked
/// vectorizations.
#[derive(Debug, Clone)]
pub struct Superoperator {
    dim: usize,
    mat: CMat,
}

impl Superoperator {
    pub fn from_matrix(dim: usize, mat: CMat) -> Result<Self> {
        if mat.nrows() != dim * dim || mat.ncols() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "superoperator matrix must be {0}x{0} for dim {1}",
                dim * dim,
                dim
            )));
        }
        Ok(Superoperator { dim, mat })
    }

    /// Realizes Φ by applying it to the matrix-unit basis.
    pub fn from_map(dim: usize, phi: impl Fn(&CMat) -> CMat) -> Self {
        let d2 = dim * dim;
        let mut mat = CMat::zeros(d2, d2);
        for j in 0..dim {
            for i in 0..dim {
                let mut e = CMat::zeros(dim, dim);
                e[(i, j)] = cr(1.0);
                let col = vectorize(&phi(&e));
                mat.set_column(i + dim * j, &col);
            }
        }
        Superoperator { dim, mat }
    }

    pub fn identity(dim: usize) -> Self {
        Superoperator {
            dim,
            mat: CMat::identity(dim * dim, dim * dim),
        }
    }

    /// f ↦ X f Y as Yᵀ ⊗ X.
    pub fn sandwich(x: &CMat, y: &CMat) -> Self {
        let dim = x.nrows();
        Superoperator {
            dim,
            mat: y.transpose().kronecker(x),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn apply(&self, a: &CMat) -> CMat {
        unvectorize(&(&self.mat * vectorize(a)), self.dim)
    }

    /// Hilbert–Schmidt adjoint.
    pub fn adjoint(&self) -> Superoperator {
        Superoperator {
            dim: self.dim,
            mat: self.mat.adjoint(),
        }
    }

    pub fn compose(&self, other: &Superoperator) -> Superoperator {
        Superoperator {
            dim: self.dim,
            mat: &self.mat * &other.mat,
        }
    }

    /// Max deviation from `phi` on the matrix-unit basis; used by the
    /// representation-consistency invariant.
    pub fn residual_against(&self, phi: impl Fn(&CMat) -> CMat) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for j in 0..d {
            for i in 0..d {
                let mut e = CMat::zeros(d, d);
                e[(i, j)] = cr(1.0);
                let diff = self.apply(&e) - phi(&e);
                worst = worst.max(diff.iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
        }
        worst
    }
}

// ---------------------------------------------------------------------------
// Modular-theoretic maps
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// ρ^s f σ^{−s}, the s-power of the relative modular operator applied to f.
pub fn relative_modular_apply(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    f: &CMat,
    s: f64,
) -> Result<CMat> {
    rho.require_full_rank()?;
    sigma.require_full_rank()?;
    let rs = rho.power(s)?;
    let ss = sigma.power(-s)?;
    Ok(rs * f * ss)
}

/// Dense realization of f ↦ ρ^s f σ^{−s}.
pub fn relative_modular_superoperator(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    s: f64,
) -> Result<Superoperator> {
    rho.require_full_rank()?;
    sigma.require_full_rank()?;
    let rs = rho.power(s)?;
    let ss = sigma.power(-s)?;
    Ok(Superoperator::sandwich(&rs, &ss))
}

/// Γ_σ(f) = σ^{1/2} f σ^{1/2} and its inverse.
pub fn gamma_map(sigma: &DensityMatrix, f: &CMat, dir: Direction) -> Result<CMat> {
    sigma.require_full_rank()?;
    let s = match dir {
        Direction::Forward => sigma.power(0.5)?,
        Direction::Inverse => sigma.power(-0.5)?,
    };
    Ok(&s * f * &s)
}

/// The entrywise multiplier t ↦ e^{ω/2}(t − e^{−ω})/(log t + ω), with a
/// three-term Taylor expansion replacing the removable singularity at
/// t = e^{−ω} when |log t + ω| < 1e-6.
pub fn f_omega(omega: f64, t: f64) -> f64 {
    let u = t.ln() + omega;
    if u.abs() < 1e-6 {
        (-omega / 2.0).exp() * (1.0 + u / 2.0 + u * u / 6.0)
    } else {
        (omega / 2.0).exp() * (t - (-omega).exp()) / u
    }
}

/// The tilted multiplier [ρ]_ω: in ρ's eigenbasis the (k,l) entry of A is
/// scaled by f_ω(p_k/p_l)·p_l (forward) or divided by it (inverse).
pub fn tilted_multiplier(
    rho: &DensityMatrix,
    omega: f64,
    a: &CMat,
    dir: Direction,
) -> Result<CMat> {
    rho.require_full_rank()?;
    let (p, u) = rho.op().eigen();
    let d = rho.dim();
    let mut ap = u.adjoint() * a * u;
    for k in 0..d {
        for l in 0..d {
            let m = f_omega(omega, p[k] / p[l]) * p[l];
            ap[(k, l)] = match dir {
                Direction::Forward => ap[(k, l)] * cr(m),
                Direction::Inverse => ap[(k, l)] / cr(m),
            };
        }
    }
    Ok(u * ap * u.adjoint())
}

/// The trace-preserving map Ξ_σ: entry (k,l) in σ's eigenbasis is scaled by
/// √(σ_k σ_l)(log σ_k − log σ_l)/(σ_k − σ_l); diagonal entries are fixed.
pub fn xi_sigma(sigma: &DensityMatrix, a: &CMat) -> Result<CMat> {
    sigma.require_full_rank()?;
    let (s, u) = sigma.op().eigen();
    let d = sigma.dim();
    let mut ap = u.adjoint() * a * u;
    for k in 0..d {
        for l in 0..d {
            // multiplier = e^{x/2}·x/(e^x − 1) with x = log(σ_k/σ_l)
            let x = (s[k] / s[l]).ln();
            let m = if x.abs() < 1e-6 {
                1.0 - x * x / 24.0
            } else {
                (x / 2.0).exp() * x / (x.exp() - 1.0)
            };
            ap[(k, l)] *= cr(m);
        }
    }
    Ok(u * ap * u.adjoint())
}

/// Weighted inner product ⟨f,g⟩_{s,σ} = Tr(σ^s f† σ^{1−s} g).
pub fn inner_s_sigma(sigma: &DensityMatrix, f: &CMat, g: &CMat, s: f64) -> Result<C64> {
    let ss = sigma.power(s)?;
    let s1 = sigma.power(1.0 - s)?;
    Ok(trace(&(ss * f.adjoint() * s1 * g)))
}

// ---------------------------------------------------------------------------
// Matrix exponential (scaling and squaring, Padé-13)
// ---------------------------------------------------------------------------

fn one_norm(a: &CMat) -> f64 {
    let mut best = 0.0f64;
    for j in 0..a.ncols() {
        let s: f64 = a.column(j).iter().map(|z| z.norm()).sum();
        best = best.max(s);
    }
    best
}

/// exp(A) for a general square complex matrix.
pub fn expm(a: &CMat) -> CMat {
    const THETA_13: f64 = 5.371_920_351_148_152;
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let n = a.nrows();
    let norm = one_norm(a);
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let m = a.scale(0.5f64.powi(s));
    let ident = CMat::identity(n, n);
    let m2 = &m * &m;
    let m4 = &m2 * &m2;
    let m6 = &m4 * &m2;
    let u_inner = &m6 * (m6.scale(B[13]) + m4.scale(B[11]) + m2.scale(B[9]))
        + m6.scale(B[7])
        + m4.scale(B[5])
        + m2.scale(B[3])
        + ident.scale(B[1]);
    let u = &m * u_inner;
    let v = &m6 * (m6.scale(B[12]) + m4.scale(B[10]) + m2.scale(B[8]))
        + m6.scale(B[6])
        + m4.scale(B[4])
        + m2.scale(B[2])
        + ident.scale(B[0]);
    let lhs = &v - &u;
    let rhs = &v + &u;
    let mut r = lhs
        .lu()
        .solve(&rhs)
        .expect("Padé denominator is singular; matrix exponential failed");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

// ---------------------------------------------------------------------------
// Traceless Hermitian basis
// ---------------------------------------------------------------------------

/// Orthonormal (Hilbert–Schmidt) basis of the traceless Hermitian operators:
/// symmetric and antisymmetric off-diagonal pairs plus diagonal generators.
pub fn hermitian_basis(d: usize) -> Vec<CMat> {
    let mut basis = Vec::with_capacity(d * d - 1);
    let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
    for k in 0..d {
        for l in (k + 1)..d {
            let mut x = CMat::zeros(d, d);
            x[(k, l)] = cr(inv_sqrt2);
            x[(l, k)] = cr(inv_sqrt2);
            basis.push(x);
            let mut y = CMat::zeros(d, d);
            y[(k, l)] = c(0.0, inv_sqrt2);
            y[(l, k)] = c(0.0, -inv_sqrt2);
            basis.push(y);
        }
    }
    for m in 1..d {
        let norm = 1.0 / ((m * (m + 1)) as f64).sqrt();
        let mut h = CMat::zeros(d, d);
        for i in 0..m {
            h[(i, i)] = cr(norm);
        }
        h[(m, m)] = cr(-(m as f64) * norm);
        basis.push(h);
    }
    basis
}

/// Coefficients of a Hermitian matrix in `hermitian_basis(d)` plus the
/// identity component (returned separately).
pub fn basis_coefficients(a: &CMat, basis: &[CMat]) -> Vec<f64> {
    basis.iter().map(|b| hs_inner(b, a).re).collect()
}

pub fn from_basis_coefficients(coeffs: &[f64], basis: &[CMat], d: usize) -> CMat {
    let mut m = CMat::zeros(d, d);
    for (x, b) in coeffs.iter().zip(basis) {
        m += b.scale(*x);
    }
    m
}
