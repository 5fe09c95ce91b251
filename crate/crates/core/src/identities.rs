//! Pointwise quadratic curvature identities, evaluated on both sides.
//!
//! Left-hand sides are full n⁴ tensor contractions of unpacked components;
//! right-hand sides are built from S, σ², σ̃², tr(Ric₀³), tri(R_W) and the
//! Weyl–Ricci coupling W_{ijkl}(Ric₀)_{ik}(Ric₀)_{jl}. The two routes share
//! only the decomposition.

use std::collections::BTreeMap;

use nalgebra::SymmetricEigen;

use crate::curvature::CurvOp;
use crate::decomposition::{decompose, settle_weyl_in_dim3, Decomposition};
use crate::error::{Error, Result};
use crate::tensor::{RiemannTensor, SymTensor2};

/// |R_W| allowed by [`lcf_gap`], relative to 1 + |R|.
pub const LCF_TOL: f64 = 1e-9;

/// Both sides of one identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub lhs: f64,
    pub rhs: f64,
    pub abs: f64,
    /// abs / (1 + max(|lhs|, |rhs|)).
    pub rel: f64,
}

impl Residual {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        let abs = (lhs - rhs).abs();
        Self {
            lhs,
            rhs,
            abs,
            rel: abs / (1.0 + lhs.abs().max(rhs.abs())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResiduals {
    pub entries: BTreeMap<&'static str, Residual>,
    /// |R|³(1 + |S|).
    pub scale: f64,
}

impl IdentityResiduals {
    fn new(r: &CurvOp, scalar: f64) -> Self {
        Self {
            entries: BTreeMap::new(),
            scale: r.norm().powi(3) * (1.0 + scalar.abs()),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Residual> {
        self.entries.get(name)
    }

    pub fn max_rel(&self) -> f64 {
        self.entries.values().fold(0.0, |m, r| m.max(r.rel))
    }
}

/// W_{ijkl}(A)_{ik}(A)_{jl}; in an eigenbasis of A this is Σ W_{ijij} aᵢaⱼ.
pub fn weyl_ricci_coupling(w: &CurvOp, a: &SymTensor2) -> f64 {
    let n = w.n();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let aik = a.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for l in 0..n {
                    s += w.component(i, j, k, l) * aik * a.get(j, l);
                }
            }
        }
    }
    s
}

fn split(r: &CurvOp) -> Result<Decomposition> {
    let mut d = decompose(r)?;
    settle_weyl_in_dim3(&mut d, r)?;
    Ok(d)
}

/// The three contractions (part)_{ijkl} Q(R)_{ijkl} against their closed forms.
pub fn huisken_residuals(r: &CurvOp) -> Result<IdentityResiduals> {
    let d = split(r)?;
    let nf = r.n() as f64;
    let q = r.q_operator().to_riemann();
    let s = d.scalar;
    let cube = d.lambda_cube_sum();
    let coupling = weyl_ricci_coupling(&d.weyl, &d.traceless_ricci);

    let mut out = IdentityResiduals::new(r, s);

    let lhs = d.trace_part.to_riemann().contract(&q)?;
    let rhs = 2.0 / (nf * (nf - 1.0)) * s * d.sigma2;
    out.entries.insert("q_trace", Residual::new(lhs, rhs));

    let lhs = d.ricci_part.to_riemann().contract(&q)?;
    let rhs = 4.0 / (nf * (nf - 1.0)) * s * d.sigma_tilde2 - 8.0 / ((nf - 2.0) * (nf - 2.0)) * cube
        + 4.0 / (nf - 2.0) * coupling;
    out.entries.insert("q_ricci", Residual::new(lhs, rhs));

    let lhs = d.weyl.to_riemann().contract(&q)?;
    let rhs = 2.0 * d.weyl.tri_self() + 2.0 / (nf - 2.0) * coupling;
    out.entries.insert("q_weyl", Residual::new(lhs, rhs));

    Ok(out)
}

/// |Σ (part)_{ijkl} Q_{ijkl} - 2 tri(R)| over the three parts, since R_{ijkl}Q_{ijkl} = 4⟨R, Q⟩ = 2 tri(R).
pub fn sum_consistency(r: &CurvOp) -> Result<f64> {
    let h = huisken_residuals(r)?;
    let total: f64 = h.entries.values().map(|e| e.lhs).sum();
    Ok((total - 2.0 * r.tri_self()).abs())
}

/// 2 tri(R) S - σ²|R_{ijkl}|² against its expansion through the splitting.
pub fn main_identity_residual(r: &CurvOp) -> Result<IdentityResiduals> {
    let d = split(r)?;
    let nf = r.n() as f64;
    let s = d.scalar;
    let st2 = d.sigma_tilde2;

    let lhs = 2.0 * r.tri_self() * s - d.sigma2 * r.to_riemann().norm_sq();
    let rhs = -4.0 * d.weyl.norm_sq() * d.sigma2 + 2.0 * s * d.weyl.tri_self()
        - 4.0 * s * s * st2 / (nf * (nf - 1.0) * (nf - 2.0))
        - 4.0 * st2 * st2 / (nf - 2.0)
        - 8.0 * s * d.lambda_cube_sum() / ((nf - 2.0) * (nf - 2.0))
        + 6.0 * s * weyl_ricci_coupling(&d.weyl, &d.traceless_ricci) / (nf - 2.0);

    let mut out = IdentityResiduals::new(r, s);
    out.entries
        .insert("scalar_expansion", Residual::new(lhs, rhs));
    Ok(out)
}

/// -4/(n-2)·(S²σ̃²/(n(n-1)) + σ̃⁴ + 2SΣλ³/(n-2)).
pub fn lcf_closed_form(d: &Decomposition) -> f64 {
    let nf = d.n() as f64;
    let (s, st2) = (d.scalar, d.sigma_tilde2);
    -4.0 / (nf - 2.0)
        * (s * s * st2 / (nf * (nf - 1.0)) + st2 * st2 + 2.0 * s * d.lambda_cube_sum() / (nf - 2.0))
}

/// 2 tri(R) S - σ²|R_{ijkl}|² for a Weyl-free operator.
pub fn lcf_gap(r: &CurvOp) -> Result<f64> {
    let d = decompose(r)?;
    let w = d.weyl.norm();
    if w > LCF_TOL * (1.0 + r.norm()) {
        return Err(Error::Precondition(format!(
            "operator is not locally conformally flat (|R_W| = {w:.3e})"
        )));
    }
    Ok(2.0 * r.tri_self() * d.scalar - d.sigma2 * r.to_riemann().norm_sq())
}

/// Hamilton's pinching quantity in the Ricci eigenvalues.
pub fn hamilton_p(mu: f64, nu: f64, lam: f64) -> f64 {
    0.5 * ((mu + nu - lam).powi(2) * (mu - nu).powi(2)
        + (lam + nu - mu).powi(2) * (lam - nu).powi(2)
        + (lam + mu - nu).powi(2) * (lam - mu).powi(2))
}

fn require_three(n: usize) -> Result<()> {
    if n != 3 {
        return Err(Error::UnsupportedDimension {
            n,
            requirement: "n = 3",
        });
    }
    Ok(())
}

/// The unique three-dimensional curvature tensor with the given Ricci tensor.
pub fn reconstruct_3d(ric: &SymTensor2) -> Result<RiemannTensor> {
    require_three(ric.n())?;
    let s = ric.trace();
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    Ok(RiemannTensor::from_fn(3, |i, j, k, l| {
        d(i, k) * ric.get(j, l) + d(j, l) * ric.get(i, k)
            - d(i, l) * ric.get(j, k)
            - d(j, k) * ric.get(i, l)
            - 0.5 * s * (d(i, k) * d(j, l) - d(i, l) * d(j, k))
    }))
}

/// (S·C - σ⁴, P) with C = R_{ijkl}Ric_{jl}Ric_{ik} on the reconstructed tensor.
fn dim3_reaction_terms(ric: &SymTensor2) -> Result<(f64, f64)> {
    let t = reconstruct_3d(ric)?;
    let s = ric.trace();
    let sigma2 = ric.norm_sq();
    let mut c = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    c += t.get(i, j, k, l) * ric.get(j, l) * ric.get(i, k);
                }
            }
        }
    }
    let ev = SymmetricEigen::new(ric.matrix().clone()).eigenvalues;
    Ok((s * c - sigma2 * sigma2, hamilton_p(ev[0], ev[1], ev[2])))
}

/// |4(S·C - σ⁴) + P(μ, ν, λ)|.
///
/// The two reaction terms actually satisfy S·C - σ⁴ = -P, so this quantity
/// equals 3P and vanishes only on the round and cylindrical patterns; see
/// [`dim3_reaction_residual`] for the normalization that holds identically.
pub fn dim3_equivalence_residual(ric: &SymTensor2) -> Result<f64> {
    let (sc, p) = dim3_reaction_terms(ric)?;
    Ok((4.0 * sc + p).abs())
}

/// |S·C - σ⁴ + P|, identically zero in dimension three.
pub fn dim3_reaction_residual(ric: &SymTensor2) -> Result<f64> {
    let (sc, p) = dim3_reaction_terms(ric)?;
    Ok((sc + p).abs())
}
