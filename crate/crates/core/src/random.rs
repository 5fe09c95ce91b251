//! Reproducible random operators.
//!
//! Every draw is keyed by `(seed, stream...)` through [`derive_seed`], so
//! trial k of a batch reproduces regardless of execution order.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::curvature::CurvOp;
use crate::decomposition::wedge;
use crate::error::Result;
use crate::extremal::SpectrumPoint;
use crate::lie::Lambda2Frame;
use crate::tensor::SymTensor2;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a base seed with a path of stream counters.
pub fn derive_seed(seed: u64, stream: &[u64]) -> u64 {
    stream
        .iter()
        .fold(splitmix64(seed), |acc, &s| splitmix64(acc ^ splitmix64(s)))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Gaussian coordinates of length `len`, e.g. an element of Λ²ℝⁿ in the frame basis.
pub fn random_vector<R: Rng>(len: usize, rng: &mut R) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn random_symmetric<R: Rng>(n: usize, rng: &mut R) -> SymTensor2 {
    SymTensor2::symmetrized(gaussian_matrix(n, n, rng))
}

pub fn random_traceless<R: Rng>(n: usize, rng: &mut R) -> SymTensor2 {
    random_symmetric(n, rng).traceless()
}

/// G Gᵀ / n with Gaussian G.
pub fn random_psd<R: Rng>(n: usize, rng: &mut R) -> SymTensor2 {
    let g = gaussian_matrix(n, n, rng);
    SymTensor2::symmetrized(&g * g.transpose() / n as f64)
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian with sign fix).
pub fn random_orthogonal<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let qr = gaussian_matrix(n, n, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// A random symmetric N×N matrix projected onto the Bianchi-clean subspace.
pub fn random_curv_with<R: Rng>(n: usize, rng: &mut R) -> Result<CurvOp> {
    let frame = Lambda2Frame::shared(n)?;
    let dim = frame.dim();
    let raw = CurvOp::from_matrix_unchecked(Arc::clone(&frame), gaussian_matrix(dim, dim, rng));
    let projected = raw.to_riemann().bianchi_project()?;
    CurvOp::from_tensor(&projected)
}

pub fn random_curv(n: usize, seed: u64) -> Result<CurvOp> {
    random_curv_with(n, &mut rng(seed))
}

/// Σ_k c_k (A_k ∧ A_k) with c_k ≥ 0 and A_k positive semidefinite.
pub fn random_nonneg_curv_with<R: Rng>(n: usize, rng: &mut R) -> Result<CurvOp> {
    let frame = Lambda2Frame::shared(n)?;
    let mut acc = CurvOp::zeros(frame);
    for _ in 0..n {
        let a = random_psd(n, rng);
        let c: f64 = rng.random();
        acc = &acc + &(&wedge(&a, &a)? * c);
    }
    Ok(acc)
}

pub fn random_nonneg_curv(n: usize, seed: u64) -> Result<CurvOp> {
    random_nonneg_curv_with(n, &mut rng(seed))
}

/// a·I + b·(T₀ ∧ id) with a > 0 and traceless T₀: Weyl-free with S > 0.
pub fn random_lcf_with<R: Rng>(n: usize, rng: &mut R) -> Result<CurvOp> {
    let frame = Lambda2Frame::shared(n)?;
    let a = 0.05 + rng.random::<f64>();
    let b: f64 = rng.sample(StandardNormal);
    let t0 = random_traceless(n, rng);
    let id = SymTensor2::identity(n);
    Ok(&(&CurvOp::identity(frame) * a) + &(&wedge(&t0, &id)? * b))
}

pub fn random_lcf(n: usize, seed: u64) -> Result<CurvOp> {
    random_lcf_with(n, &mut rng(seed))
}

/// A traceless spectrum with a log-uniform scale in [10⁻², 10²] and a scalar
/// curvature S uniform in [-s_max, s_max]: a sample for the quartic f(S, λ).
pub fn random_spectrum_sample<R: Rng>(n: usize, s_max: f64, rng: &mut R) -> (SpectrumPoint, f64) {
    let mut lam = random_vector(n, rng);
    let mean = lam.iter().sum::<f64>() / n as f64;
    let norm = lam.iter().map(|x| (x - mean).powi(2)).sum::<f64>().sqrt();
    let scale = 10f64.powf(rng.random_range(-2.0..=2.0));
    lam.iter_mut().for_each(|x| *x = (*x - mean) / norm * scale);
    let s = rng.random_range(-s_max..=s_max);
    (SpectrumPoint::new(lam), s)
}
