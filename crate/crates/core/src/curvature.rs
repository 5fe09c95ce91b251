//! Curvature operators on Λ²ℝⁿ and their quadratic algebra.
//!
//! A [`CurvOp`] stores the symmetric N×N matrix M with
//! M_{(ij),(kl)} = R_{ijkl} for i < j, k < l, which is the matrix of the
//! operator R(e_i∧e_j) = ½ Σ R_{ijkl} e_k∧e_l in the orthonormal basis.
//! The operator inner product is the Frobenius product of these matrices,
//! so Σ R_{ijkl}² = 4⟨R, R⟩.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::lie::Lambda2Frame;
use crate::tensor::{RiemannTensor, SymTensor2, STRUCTURE_TOL};

/// Tolerance on |OᵀO - 1| accepted by [`CurvOp::conjugate`].
pub const ROTATION_TOL: f64 = 1e-10;

/// Symmetric operator on Λ²ℝⁿ.
///
/// Bianchi-cleanliness is not enforced at construction: products such as
/// `A # B` of arbitrary symmetric operators leave S_B(Λ²). Use
/// [`CurvOp::bianchi_residual`] to check it.
#[derive(Debug, Clone)]
pub struct CurvOp {
    frame: Arc<Lambda2Frame>,
    m: DMatrix<f64>,
}

impl PartialEq for CurvOp {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.m == other.m
    }
}

impl CurvOp {
    /// Wraps a symmetric N×N matrix.
    pub fn from_matrix(frame: Arc<Lambda2Frame>, m: DMatrix<f64>) -> Result<Self> {
        let dim = frame.dim();
        if m.shape() != (dim, dim) {
            return Err(Error::Shape {
                expected: format!("{dim}×{dim} operator on Λ²ℝ^{}", frame.n()),
                found: format!("{}×{}", m.nrows(), m.ncols()),
            });
        }
        let defect = (&m - m.transpose()).amax();
        if defect > STRUCTURE_TOL * (1.0 + m.amax()) {
            return Err(Error::NotSymmetric { defect });
        }
        Ok(Self::from_matrix_unchecked(frame, m))
    }

    pub(crate) fn from_matrix_unchecked(frame: Arc<Lambda2Frame>, m: DMatrix<f64>) -> Self {
        let t = m.transpose();
        Self {
            frame,
            m: (m + t) * 0.5,
        }
    }

    pub fn identity(frame: Arc<Lambda2Frame>) -> Self {
        let dim = frame.dim();
        Self {
            frame,
            m: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(frame: Arc<Lambda2Frame>) -> Self {
        let dim = frame.dim();
        Self {
            frame,
            m: DMatrix::zeros(dim, dim),
        }
    }

    /// Packs a tensor with the pair symmetries into an operator.
    pub fn from_tensor(t: &RiemannTensor) -> Result<Self> {
        t.check_pair_symmetries(STRUCTURE_TOL)?;
        let frame = Lambda2Frame::shared(t.n())?;
        let pairs = frame.pairs();
        let dim = pairs.len();
        let m = DMatrix::from_fn(dim, dim, |a, b| {
            let (i, j) = pairs[a];
            let (k, l) = pairs[b];
            t.get(i, j, k, l)
        });
        Ok(Self::from_matrix_unchecked(frame, m))
    }

    /// Unpacks all n⁴ components by the sign rules.
    pub fn to_riemann(&self) -> RiemannTensor {
        RiemannTensor::from_fn(self.n(), |i, j, k, l| self.component(i, j, k, l))
    }

    /// R_{ijkl}.
    #[inline]
    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        match (self.frame.slot(i, j), self.frame.slot(k, l)) {
            (Some((a, s)), Some((b, t))) => s * t * self.m[(a, b)],
            _ => 0.0,
        }
    }

    pub fn frame(&self) -> &Arc<Lambda2Frame> {
        &self.frame
    }

    pub fn n(&self) -> usize {
        self.frame.n()
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    fn check_frame(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::FrameMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }

    /// Frobenius inner product Σ_{αβ} A_{αβ} B_{αβ}.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_frame(other)?;
        Ok(self.m.dot(&other.m))
    }

    pub fn norm_sq(&self) -> f64 {
        self.m.norm_squared()
    }

    pub fn norm(&self) -> f64 {
        self.m.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.m.amax()
    }

    /// Largest first-Bianchi violation of the unpacked tensor.
    pub fn bianchi_residual(&self) -> f64 {
        self.to_riemann().bianchi_defect()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.m.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Ric_{ik} = Σ_j R_{ijkj}.
    pub fn ricci(&self) -> SymTensor2 {
        let n = self.n();
        let m = DMatrix::from_fn(n, n, |i, k| {
            (0..n).map(|j| self.component(i, j, k, j)).sum()
        });
        SymTensor2::symmetrized(m)
    }

    /// Scalar curvature S = tr Ric = 2 tr M.
    pub fn scalar(&self) -> f64 {
        self.ricci().trace()
    }

    /// The `#` product (A#B)_{αβ} = ½ c_{αγη} c_{βδθ} A_{γδ} B_{ηθ}.
    pub fn sharp(&self, other: &Self) -> Result<Self> {
        self.check_frame(other)?;
        let dim = self.dim();
        let f = &self.frame;
        let (a, b) = (&self.m, &other.m);
        let mut out = DMatrix::zeros(dim, dim);
        for alpha in 0..dim {
            let left = f.brackets_of(alpha);
            for beta in alpha..dim {
                let right = f.brackets_of(beta);
                let mut acc = 0.0;
                for &(g, eta, c1) in left {
                    for &(d, theta, c2) in right {
                        acc += c1 * c2 * a[(g, d)] * b[(eta, theta)];
                    }
                }
                out[(alpha, beta)] = 0.5 * acc;
                out[(beta, alpha)] = 0.5 * acc;
            }
        }
        Ok(Self {
            frame: Arc::clone(&self.frame),
            m: out,
        })
    }

    /// B(A, B) = AB + BA + 2 A#B.
    pub fn b_product(&self, other: &Self) -> Result<Self> {
        let sharp = self.sharp(other)?;
        let ab = &self.m * &other.m;
        let m = &ab + ab.transpose() + sharp.m * 2.0;
        Ok(Self::from_matrix_unchecked(Arc::clone(&self.frame), m))
    }

    /// Q(R) = R² + R#R.
    pub fn q_operator(&self) -> Self {
        let sharp = self.sharp(self).expect("same frame");
        let m = &self.m * &self.m + sharp.m;
        Self::from_matrix_unchecked(Arc::clone(&self.frame), m)
    }

    /// tri(R) = tri(R, R, R) = ⟨2(R² + R#), R⟩.
    pub fn tri_self(&self) -> f64 {
        tri(self, self, self).expect("same frame")
    }

    /// Ric(R, R) = Σ Ric_{ip} R_{ijkl} R_{pjkl}.
    pub fn ricci_quadratic(&self) -> f64 {
        let n = self.n();
        let t = self.to_riemann();
        let ric = self.ricci();
        let mut total = 0.0;
        for i in 0..n {
            for p in 0..n {
                let r = ric.get(i, p);
                if r == 0.0 {
                    continue;
                }
                let mut s = 0.0;
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            s += t.get(i, j, k, l) * t.get(p, j, k, l);
                        }
                    }
                }
                total += r * s;
            }
        }
        total
    }

    /// -2 tri(R) + Ric(R, R); nonnegative whenever R ≥ 0.
    pub fn tachibana_gap(&self) -> f64 {
        -2.0 * self.tri_self() + self.ricci_quadratic()
    }

    /// R_{ijkl} ↦ O_{ia} O_{jb} O_{kc} O_{ld} R_{abcd}, computed as Λ²O · M · (Λ²O)ᵀ.
    pub fn conjugate(&self, o: &DMatrix<f64>) -> Result<Self> {
        let n = self.n();
        if o.shape() != (n, n) {
            return Err(Error::Shape {
                expected: format!("{n}×{n} orthogonal matrix"),
                found: format!("{}×{}", o.nrows(), o.ncols()),
            });
        }
        let defect = (o.transpose() * o - DMatrix::identity(n, n)).amax();
        if defect > ROTATION_TOL {
            return Err(Error::InvalidRotation { defect });
        }
        let pairs = self.frame.pairs();
        let dim = pairs.len();
        let lifted = DMatrix::from_fn(dim, dim, |x, y| {
            let (i, j) = pairs[x];
            let (a, b) = pairs[y];
            o[(i, a)] * o[(j, b)] - o[(i, b)] * o[(j, a)]
        });
        let m = &lifted * &self.m * lifted.transpose();
        Ok(Self::from_matrix_unchecked(Arc::clone(&self.frame), m))
    }
}

/// tri(A, B, C) = tr((AB + BA + 2 A#B) C), symmetric in all three slots.
pub fn tri(a: &CurvOp, b: &CurvOp, c: &CurvOp) -> Result<f64> {
    a.check_frame(c)?;
    let bp = a.b_product(b)?;
    // tr(X C) with both symmetric is the Frobenius product
    Ok(bp.m.dot(&c.m))
}

impl Add for &CurvOp {
    type Output = CurvOp;
    fn add(self, rhs: Self) -> CurvOp {
        assert_eq!(self.n(), rhs.n(), "adding operators from different frames");
        CurvOp {
            frame: Arc::clone(&self.frame),
            m: &self.m + &rhs.m,
        }
    }
}

impl Sub for &CurvOp {
    type Output = CurvOp;
    fn sub(self, rhs: Self) -> CurvOp {
        assert_eq!(
            self.n(),
            rhs.n(),
            "subtracting operators from different frames"
        );
        CurvOp {
            frame: Arc::clone(&self.frame),
            m: &self.m - &rhs.m,
        }
    }
}

impl Mul<f64> for &CurvOp {
    type Output = CurvOp;
    fn mul(self, rhs: f64) -> CurvOp {
        CurvOp {
            frame: Arc::clone(&self.frame),
            m: &self.m * rhs,
        }
    }
}

impl Neg for &CurvOp {
    type Output = CurvOp;
    fn neg(self) -> CurvOp {
        self * -1.0
    }
}
