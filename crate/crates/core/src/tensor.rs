//! Component tensors in an orthonormal frame.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Default relative tolerance for structural checks (symmetry, Bianchi).
pub const STRUCTURE_TOL: f64 = 1e-9;

/// Rank-4 covariant tensor R_{ijkl}, stored densely in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannTensor {
    n: usize,
    data: Vec<f64>,
}

impl RiemannTensor {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Self {
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let o = t.offset(i, j, k, l);
                        t.data[o] = f(i, j, k, l);
                    }
                }
            }
        }
        t
    }

    /// δ_ik δ_jl - δ_il δ_jk, the unit-sphere tensor.
    pub fn constant_curvature(n: usize, k: f64) -> Self {
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        Self::from_fn(n, |i, j, p, q| k * (d(i, p) * d(j, q) - d(i, q) * d(j, p)))
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[self.offset(i, j, k, l)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        let o = self.offset(i, j, k, l);
        self.data[o] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Σ R_{ijkl}² over all index values.
    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Full contraction Σ A_{ijkl} B_{ijkl}.
    pub fn contract(&self, other: &Self) -> Result<f64> {
        self.check_same_n(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    /// Largest violation of R_{ijkl} = -R_{jikl} = -R_{ijlk} = R_{klij}.
    pub fn pair_symmetry_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        worst = worst
                            .max((r + self.get(j, i, k, l)).abs())
                            .max((r + self.get(i, j, l, k)).abs())
                            .max((r - self.get(k, l, i, j)).abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest |R_{ijkl} + R_{iklj} + R_{iljk}|.
    pub fn bianchi_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let s = self.get(i, j, k, l) + self.get(i, k, l, j) + self.get(i, l, j, k);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    pub fn check_pair_symmetries(&self, rel_tol: f64) -> Result<()> {
        let defect = self.pair_symmetry_defect();
        if defect > rel_tol * (1.0 + self.max_abs()) {
            return Err(Error::MalformedTensor(format!(
                "pair symmetries violated by {defect:.3e}"
            )));
        }
        Ok(())
    }

    /// Orthogonal projection onto tensors satisfying the first Bianchi
    /// identity: T - b(T) with b(T)_{ijkl} = ⅓(T_{ijkl} + T_{iklj} + T_{iljk}).
    pub fn bianchi_project(&self) -> Result<Self> {
        self.check_pair_symmetries(STRUCTURE_TOL)?;
        let n = self.n;
        Ok(Self::from_fn(n, |i, j, k, l| {
            let b = (self.get(i, j, k, l) + self.get(i, k, l, j) + self.get(i, l, j, k)) / 3.0;
            self.get(i, j, k, l) - b
        }))
    }

    /// Ric_{ik} = Σ_j R_{ijkj}.
    pub fn ricci(&self) -> SymTensor2 {
        let n = self.n;
        let m = DMatrix::from_fn(n, n, |i, k| (0..n).map(|j| self.get(i, j, k, j)).sum());
        SymTensor2::symmetrized(m)
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Shape {
                expected: format!("rank-4 tensor with n={}", self.n),
                found: format!("n={}", other.n),
            });
        }
        Ok(())
    }
}

/// Symmetric n×n tensor (Ricci, Hessians, the metric).
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor2(DMatrix<f64>);

impl SymTensor2 {
    /// Wraps a square matrix, rejecting asymmetry beyond [`STRUCTURE_TOL`].
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Shape {
                expected: "square matrix".into(),
                found: format!("{}×{}", m.nrows(), m.ncols()),
            });
        }
        let defect = (&m - m.transpose()).amax();
        if defect > STRUCTURE_TOL * (1.0 + m.amax()) {
            return Err(Error::NotSymmetric { defect });
        }
        Ok(Self::symmetrized(m))
    }

    /// ½(M + Mᵀ) without checks.
    pub fn symmetrized(m: DMatrix<f64>) -> Self {
        let t = m.transpose();
        Self((m + t) * 0.5)
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self(DMatrix::from_diagonal(
            &nalgebra::DVector::from_column_slice(values),
        ))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// A - (tr A / n)·id.
    pub fn traceless(&self) -> Self {
        let n = self.n();
        let shift = self.trace() / n as f64;
        Self(&self.0 - DMatrix::identity(n, n) * shift)
    }

    /// |A|² = Σ A_ij².
    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    /// Matrix square A·A, symmetrized against roundoff.
    pub fn square(&self) -> Self {
        Self::symmetrized(&self.0 * &self.0)
    }

    /// Eigenvalues sorted ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.0.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// O A Oᵀ.
    pub fn conjugate(&self, o: &DMatrix<f64>) -> Self {
        Self::symmetrized(o * &self.0 * o.transpose())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }
}

impl Add for &SymTensor2 {
    type Output = SymTensor2;
    fn add(self, rhs: Self) -> SymTensor2 {
        SymTensor2(&self.0 + &rhs.0)
    }
}

impl Sub for &SymTensor2 {
    type Output = SymTensor2;
    fn sub(self, rhs: Self) -> SymTensor2 {
        SymTensor2(&self.0 - &rhs.0)
    }
}

impl Mul<f64> for &SymTensor2 {
    type Output = SymTensor2;
    fn mul(self, rhs: f64) -> SymTensor2 {
        SymTensor2(&self.0 * rhs)
    }
}

impl Neg for &SymTensor2 {
    type Output = SymTensor2;
    fn neg(self) -> SymTensor2 {
        SymTensor2(-&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_form() -> RiemannTensor {
        // ω_{ijkl} = sign of (i,j,k,l) as a permutation of (0,1,2,3)
        RiemannTensor::from_fn(4, |i, j, k, l| {
            let p = [i, j, k, l];
            let mut seen = [false; 4];
            for &x in &p {
                if seen[x] {
                    return 0.0;
                }
                seen[x] = true;
            }
            let mut sign = 1.0;
            for a in 0..4 {
                for b in (a + 1)..4 {
                    if p[a] > p[b] {
                        sign = -sign;
                    }
                }
            }
            sign
        })
    }

    #[test]
    fn four_form_projects_to_zero() {
        let w = four_form();
        assert_eq!(w.pair_symmetry_defect(), 0.0);
        let p = w.bianchi_project().unwrap();
        assert!(p.max_abs() < 1e-15);
    }

    #[test]
    fn curvature_tensor_is_fixed_by_projection() {
        let t = RiemannTensor::constant_curvature(4, 1.5);
        assert_eq!(t.bianchi_defect(), 0.0);
        assert_eq!(t.bianchi_project().unwrap(), t);
    }

    #[test]
    fn projection_rejects_broken_pair_symmetry() {
        let mut t = RiemannTensor::zeros(3);
        t.set(0, 1, 0, 1, 1.0);
        assert!(matches!(
            t.bianchi_project(),
            Err(Error::MalformedTensor(_))
        ));
    }

    #[test]
    fn sphere_ricci() {
        let t = RiemannTensor::constant_curvature(3, 1.0);
        let ric = t.ricci();
        assert_eq!(ric, &SymTensor2::identity(3) * 2.0);
        assert_eq!(ric.trace(), 6.0);
    }

    #[test]
    fn symtensor_rejects_asymmetry() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(
            SymTensor2::new(m),
            Err(Error::NotSymmetric { .. })
        ));
        let m = DMatrix::<f64>::zeros(2, 3);
        assert!(matches!(SymTensor2::new(m), Err(Error::Shape { .. })));
    }

    #[test]
    fn traceless_part() {
        let a = SymTensor2::diagonal(&[3.0, 0.0, 0.0]);
        let a0 = a.traceless();
        assert!(a0.trace().abs() < 1e-15);
        assert_eq!(a0.eigenvalues(), vec![-1.0, -1.0, 2.0]);
    }
}
