//! Deterministic sampling helpers. Every parallel sweep derives one stream
//! per work item from a base seed and the item index, so results do not
//! depend on the thread count.

use nalgebra::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{cr, CMat, DensityMatrix, C64};

/// SplitMix64 finalizer; mixes a seed with a stream index.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9e3779b97f4a7c15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rng_for_item(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(seed, index))
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// d×d matrix of independent standard complex Gaussians.
pub fn ginibre(d: usize, rng: &mut ChaCha8Rng) -> CMat {
    CMat::from_fn(d, d, |_, _| {
        Complex::new(standard_normal(rng), standard_normal(rng))
    })
}

/// Random Hermitian matrix (GUE-like normalization, entries O(1)).
pub fn random_hermitian(d: usize, rng: &mut ChaCha8Rng) -> CMat {
    let g = ginibre(d, rng);
    (&g + g.adjoint()).scale(0.5)
}

pub fn random_traceless_hermitian(d: usize, rng: &mut ChaCha8Rng) -> CMat {
    let mut h = random_hermitian(d, rng);
    let t = crate::linalg::trace(&h) / cr(d as f64);
    for i in 0..d {
        h[(i, i)] -= t;
    }
    h
}

/// Hilbert–Schmidt-uniform density matrix mixed with I/d at weight 1e-3,
/// which keeps samples comfortably above the full-rank floor.
pub fn random_density(d: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let g = ginibre(d, rng);
    let gg = &g * g.adjoint();
    let tr = crate::linalg::trace_re(&gg);
    let w = 1e-3;
    let m = gg.scale((1.0 - w) / tr) + CMat::identity(d, d).scale(w / d as f64);
    DensityMatrix::new(m).expect("Ginibre construction yields a valid state")
}

/// Haar-random unitary via QR of a Ginibre matrix with phase correction.
pub fn haar_unitary(d: usize, rng: &mut ChaCha8Rng) -> CMat {
    let g = ginibre(d, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let z = r[(j, j)];
        let phase = if z.norm() > 0.0 {
            z / cr(z.norm())
        } else {
            cr(1.0)
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Full-rank probability vector with all entries at least `floor` and
/// pairwise eigenvalue separation at least `gap`.
pub fn random_probabilities(
    d: usize,
    floor: f64,
    gap: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    loop {
        let mut p: Vec<f64> = (0..d).map(|_| -(rng.gen::<f64>().max(1e-16)).ln()).collect();
        let s: f64 = p.iter().sum();
        for x in &mut p {
            *x /= s;
        }
        let mut sorted = p.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let min_ok = sorted[0] >= floor;
        let gap_ok = sorted.windows(2).all(|w| w[1] - w[0] >= gap);
        if min_ok && gap_ok {
            return p;
        }
    }
}

/// Random full-rank state with a non-degenerate spectrum, expressed in a
/// Haar-random eigenbasis.
pub fn random_nondegenerate_density(d: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let p = random_probabilities(d, 0.05 / d as f64, 0.02 / d as f64, rng);
    let u = haar_unitary(d, rng);
    let mut diag = CMat::zeros(d, d);
    for (i, &x) in p.iter().enumerate() {
        diag[(i, i)] = cr(x);
    }
    let m = &u * diag * u.adjoint();
    DensityMatrix::new(m).expect("construction preserves state validity")
}

pub fn log_uniform(lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> f64 {
    (lo.ln() + rng.gen::<f64>() * (hi.ln() - lo.ln())).exp()
}

/// C64 with unit modulus and uniform phase.
pub fn random_phase(rng: &mut ChaCha8Rng) -> C64 {
    let theta = rng.gen::<f64>() * std::f64::consts::TAU;
    Complex::new(theta.cos(), theta.sin())
}
