//! The Lie algebra Λ²ℝⁿ ≅ so(n).
//!
//! The basis vector e_i∧e_j (i < j) is identified with the antisymmetric
//! matrix Φ that has +1 at (i, j) and -1 at (j, i). Basis vectors are packed
//! lexicographically on (i, j), and every other module addresses Λ²
//! coordinates through [`Lambda2Frame`]. Indices are 0-based in code.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Orthonormal basis of Λ²ℝⁿ together with the structure constants
/// `c[α][β][γ] = ⟨[Φ_α, Φ_β], Φ_γ⟩`.
#[derive(Debug, Clone)]
pub struct Lambda2Frame {
    n: usize,
    pairs: Vec<(usize, usize)>,
    /// `slot[i * n + j]` is the packed index of the pair {i, j} with the
    /// orientation sign of (i, j) relative to the stored (min, max) order.
    slot: Vec<Option<(usize, f64)>>,
    c: Vec<f64>,
    /// Nonzero structure constants per first index: `(β, γ, c_{αβγ})`.
    brackets: Vec<Vec<(usize, usize, f64)>>,
}

impl Lambda2Frame {
    /// Builds the frame for Λ²ℝⁿ from matrix commutators of the basis.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension {
                n,
                reason: "Λ²ℝⁿ needs n ≥ 2",
            });
        }
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        let dim = pairs.len();

        let mut slot = vec![None; n * n];
        for (alpha, &(i, j)) in pairs.iter().enumerate() {
            slot[i * n + j] = Some((alpha, 1.0));
            slot[j * n + i] = Some((alpha, -1.0));
        }

        let basis: Vec<DMatrix<f64>> = pairs
            .iter()
            .map(|&(i, j)| elementary_rotation(n, i, j))
            .collect();

        let mut c = vec![0.0; dim * dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                let commutator = &basis[a] * &basis[b] - &basis[b] * &basis[a];
                for g in 0..dim {
                    c[(a * dim + b) * dim + g] = so_inner_unchecked(&commutator, &basis[g]);
                }
            }
        }

        let brackets = (0..dim)
            .map(|a| {
                let mut nz = Vec::new();
                for b in 0..dim {
                    for g in 0..dim {
                        let v = c[(a * dim + b) * dim + g];
                        if v != 0.0 {
                            nz.push((b, g, v));
                        }
                    }
                }
                nz
            })
            .collect();

        Ok(Self {
            n,
            pairs,
            slot,
            c,
            brackets,
        })
    }

    /// Process-wide cached frame for dimension `n`.
    pub fn shared(n: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Lambda2Frame>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(frame) = cache.lock().expect("frame cache poisoned").get(&n) {
            return Ok(Arc::clone(frame));
        }
        let frame = Arc::new(Self::new(n)?);
        let mut guard = cache.lock().expect("frame cache poisoned");
        Ok(Arc::clone(guard.entry(n).or_insert(frame)))
    }

    /// Ambient dimension n.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension N = n(n-1)/2 of Λ²ℝⁿ.
    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Packed index and orientation sign of e_i∧e_j; `None` when i = j.
    #[inline]
    pub fn slot(&self, i: usize, j: usize) -> Option<(usize, f64)> {
        self.slot[i * self.n + j]
    }

    #[inline]
    pub fn structure_constant(&self, a: usize, b: usize, g: usize) -> f64 {
        let dim = self.dim();
        self.c[(a * dim + b) * dim + g]
    }

    /// Nonzero `(β, γ, c_{αβγ})` for a fixed α.
    pub fn brackets_of(&self, alpha: usize) -> &[(usize, usize, f64)] {
        &self.brackets[alpha]
    }

    /// The basis matrix Φ_α.
    pub fn basis_matrix(&self, alpha: usize) -> DMatrix<f64> {
        let (i, j) = self.pairs[alpha];
        elementary_rotation(self.n, i, j)
    }

    /// Antisymmetric matrix Σ_α x_α Φ_α.
    pub fn to_matrix(&self, coords: &[f64]) -> Result<DMatrix<f64>> {
        self.check_len(coords.len())?;
        let mut m = DMatrix::zeros(self.n, self.n);
        for (&(i, j), &x) in self.pairs.iter().zip(coords) {
            m[(i, j)] = x;
            m[(j, i)] = -x;
        }
        Ok(m)
    }

    /// Coordinates ⟨A, Φ_α⟩ of a matrix in the basis (the antisymmetric part
    /// is what survives).
    pub fn from_matrix(&self, m: &DMatrix<f64>) -> Result<Vec<f64>> {
        if m.shape() != (self.n, self.n) {
            return Err(Error::Shape {
                expected: format!("{0}×{0}", self.n),
                found: format!("{}×{}", m.nrows(), m.ncols()),
            });
        }
        Ok(self
            .pairs
            .iter()
            .map(|&(i, j)| 0.5 * (m[(i, j)] - m[(j, i)]))
            .collect())
    }

    /// Lie bracket of two Λ² vectors through the structure constants.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        let mut out = vec![0.0; self.dim()];
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0.0 {
                continue;
            }
            for &(b, g, c) in &self.brackets[a] {
                out[g] += c * xa * y[b];
            }
        }
        Ok(out)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::Shape {
                expected: format!("vector of length {}", self.dim()),
                found: format!("length {len}"),
            });
        }
        Ok(())
    }
}

fn elementary_rotation(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m[(j, i)] = -1.0;
    m
}

fn so_inner_unchecked(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    // tr(AB) = Σ_ij A_ij B_ji
    let n = a.nrows();
    let mut tr = 0.0;
    for i in 0..n {
        for j in 0..n {
            tr += a[(i, j)] * b[(j, i)];
        }
    }
    -0.5 * tr
}

/// Metric ⟨A, B⟩ = -½ tr(AB) on so(n).
pub fn so_inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(Error::Shape {
            expected: format!(
                "two square matrices of equal size, left {}×{}",
                a.nrows(),
                a.ncols()
            ),
            found: format!("{}×{}", b.nrows(), b.ncols()),
        });
    }
    Ok(so_inner_unchecked(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_three_frame() {
        let f = Lambda2Frame::new(3).unwrap();
        assert_eq!(f.dim(), 3);
        assert_eq!(f.pairs(), &[(0, 1), (0, 2), (1, 2)]);
        // [Φ12, Φ13] = -Φ23
        assert_eq!(f.structure_constant(0, 1, 2), -1.0);
        assert_eq!(f.structure_constant(0, 1, 0), 0.0);
        assert_eq!(f.structure_constant(0, 1, 1), 0.0);
    }

    #[test]
    fn disjoint_pairs_commute() {
        let f = Lambda2Frame::new(4).unwrap();
        let a = f.slot(0, 1).unwrap().0;
        let b = f.slot(2, 3).unwrap().0;
        for g in 0..f.dim() {
            assert_eq!(f.structure_constant(a, b, g), 0.0);
        }
    }

    #[test]
    fn rejects_small_dimension() {
        assert!(matches!(
            Lambda2Frame::new(1),
            Err(Error::InvalidDimension { n: 1, .. })
        ));
        assert!(Lambda2Frame::new(0).is_err());
        assert_eq!(Lambda2Frame::new(2).unwrap().dim(), 1);
    }

    #[test]
    fn basis_is_orthonormal() {
        let f = Lambda2Frame::new(5).unwrap();
        for a in 0..f.dim() {
            for b in 0..f.dim() {
                let v = so_inner(&f.basis_matrix(a), &f.basis_matrix(b)).unwrap();
                assert_eq!(v, if a == b { 1.0 } else { 0.0 });
            }
        }
        let z = DMatrix::zeros(5, 5);
        assert_eq!(so_inner(&z, &f.basis_matrix(3)).unwrap(), 0.0);
    }

    #[test]
    fn so_inner_shape_error() {
        let a = DMatrix::<f64>::zeros(3, 3);
        let b = DMatrix::<f64>::zeros(4, 4);
        assert!(matches!(so_inner(&a, &b), Err(Error::Shape { .. })));
    }

    #[test]
    fn antisymmetry_exhaustive() {
        for n in 2..=6 {
            let f = Lambda2Frame::new(n).unwrap();
            let d = f.dim();
            for a in 0..d {
                for b in 0..d {
                    for g in 0..d {
                        let c = f.structure_constant(a, b, g);
                        assert_eq!(c, -f.structure_constant(b, a, g));
                        assert_eq!(c, -f.structure_constant(a, g, b));
                        assert_eq!(c, -f.structure_constant(g, b, a));
                        assert_eq!(c, f.structure_constant(b, g, a));
                        assert_eq!(c, f.structure_constant(g, a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_identity() {
        for n in 3..=5 {
            let f = Lambda2Frame::new(n).unwrap();
            let d = f.dim();
            for a in 0..d {
                for b in 0..d {
                    for g in 0..d {
                        for eta in 0..d {
                            let s: f64 = (0..d)
                                .map(|k| {
                                    f.structure_constant(a, b, k) * f.structure_constant(k, g, eta)
                                        + f.structure_constant(b, g, k)
                                            * f.structure_constant(k, a, eta)
                                        + f.structure_constant(g, a, k)
                                            * f.structure_constant(k, b, eta)
                                })
                                .sum();
                            assert_eq!(s, 0.0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bracket_matches_matrix_commutator() {
        let f = Lambda2Frame::new(5).unwrap();
        let x: Vec<f64> = (0..f.dim()).map(|k| (k as f64 * 0.37).sin()).collect();
        let y: Vec<f64> = (0..f.dim()).map(|k| (k as f64 * 1.13).cos()).collect();
        let via_c = f.bracket(&x, &y).unwrap();
        let (mx, my) = (f.to_matrix(&x).unwrap(), f.to_matrix(&y).unwrap());
        let via_m = f.from_matrix(&(&mx * &my - &my * &mx)).unwrap();
        for (u, v) in via_c.iter().zip(&via_m) {
            assert!((u - v).abs() < 1e-14);
        }
    }

    #[test]
    fn shared_frames_are_reused() {
        let a = Lambda2Frame::shared(4).unwrap();
        let b = Lambda2Frame::shared(4).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
