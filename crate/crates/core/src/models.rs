//! Pointwise data of the model shrinking solitons Ric + Hess f = ½g.
//!
//! All three models are homogeneous, so their curvature and the Hessian of
//! the potential are constant in an adapted orthonormal frame. The line
//! factor of the cylinder is the last coordinate.

use std::fmt;

use nalgebra::DMatrix;

use crate::curvature::CurvOp;
use crate::decomposition::decompose;
use crate::error::{Error, Result};
use crate::extremal::{classify_equality, EqualityCase, SpectrumPoint};
use crate::lie::Lambda2Frame;
use crate::tensor::SymTensor2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Gaussian,
    Sphere,
    Cylinder,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Gaussian => "gaussian",
            ModelKind::Sphere => "sphere",
            ModelKind::Cylinder => "cylinder",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ModelSoliton {
    pub kind: ModelKind,
    pub n: usize,
    pub ric: SymTensor2,
    pub hess_f: SymTensor2,
    pub scalar: f64,
    pub curvature: CurvOp,
    pub potential_note: &'static str,
}

impl ModelSoliton {
    fn assemble(
        kind: ModelKind,
        curvature: CurvOp,
        hess_f: SymTensor2,
        note: &'static str,
    ) -> Self {
        let ric = curvature.ricci();
        Self {
            kind,
            n: curvature.n(),
            scalar: ric.trace(),
            ric,
            hess_f,
            curvature,
            potential_note: note,
        }
    }

    /// The same model written in the frame rotated by `o`.
    pub fn conjugate(&self, o: &DMatrix<f64>) -> Result<Self> {
        let curvature = self.curvature.conjugate(o)?;
        Ok(Self {
            kind: self.kind,
            n: self.n,
            ric: self.ric.conjugate(o),
            hess_f: self.hess_f.conjugate(o),
            scalar: self.scalar,
            curvature,
            potential_note: self.potential_note,
        })
    }
}

fn require(n: usize, min: usize, what: &'static str) -> Result<()> {
    if n < min {
        return Err(Error::InvalidDimension { n, reason: what });
    }
    Ok(())
}

/// Flat ℝⁿ with f = |x|²/4.
pub fn gaussian(n: usize) -> Result<ModelSoliton> {
    require(n, 2, "the Gaussian soliton needs n ≥ 2")?;
    let frame = Lambda2Frame::shared(n)?;
    Ok(ModelSoliton::assemble(
        ModelKind::Gaussian,
        CurvOp::zeros(frame),
        &SymTensor2::identity(n) * 0.5,
        "f = |x|²/4",
    ))
}

/// Round sphere of radius² r², constant curvature 1/r², f constant.
/// Only r² = 2(n-1) solves the soliton equation.
pub fn round_sphere_with_radius_sq(n: usize, radius_sq: f64) -> Result<ModelSoliton> {
    require(n, 2, "the round sphere needs n ≥ 2")?;
    if radius_sq.is_nan() || radius_sq <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "radius² must be positive, got {radius_sq}"
        )));
    }
    let frame = Lambda2Frame::shared(n)?;
    Ok(ModelSoliton::assemble(
        ModelKind::Sphere,
        &CurvOp::identity(frame) * (1.0 / radius_sq),
        SymTensor2::zeros(n),
        "f constant",
    ))
}

pub fn round_sphere(n: usize) -> Result<ModelSoliton> {
    round_sphere_with_radius_sq(n, 2.0 * (n as f64 - 1.0))
}

/// Sⁿ⁻¹ × ℝ with spherical radius² 2(n-2) and f = t²/4 along the line.
pub fn round_cylinder(n: usize) -> Result<ModelSoliton> {
    require(n, 3, "the round cylinder needs n ≥ 3")?;
    let frame = Lambda2Frame::shared(n)?;
    let k = 1.0 / (2.0 * (n as f64 - 2.0));
    let line = n - 1;
    let diag: Vec<f64> = frame
        .pairs()
        .iter()
        .map(|&(_, j)| if j == line { 0.0 } else { k })
        .collect();
    let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
    let curvature = CurvOp::from_matrix(frame, m)?;
    let mut hess = vec![0.0; n];
    hess[line] = 0.5;
    Ok(ModelSoliton::assemble(
        ModelKind::Cylinder,
        curvature,
        SymTensor2::diagonal(&hess),
        "f = t²/4 + const along the line factor",
    ))
}

/// max |Ric + Hess f - ½ id|.
pub fn soliton_residual(m: &ModelSoliton) -> f64 {
    let half = &SymTensor2::identity(m.n) * 0.5;
    (&(&m.ric + &m.hess_f) - &half).max_abs()
}

/// |ratio(R) - ratio(R/τ)| with ratio = |Ric|²/S²; g ↦ τg scales frame components by 1/τ.
pub fn scaling_check(r: &CurvOp, tau: f64) -> Result<f64> {
    if tau.is_nan() || tau <= 0.0 || !tau.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "τ must be positive, got {tau}"
        )));
    }
    let ratio = |op: &CurvOp| -> Result<f64> {
        let ric = op.ricci();
        let s = ric.trace();
        if s == 0.0 || s.abs() <= f64::EPSILON * ric.max_abs() {
            return Err(Error::UndefinedRatio);
        }
        Ok(ric.norm_sq() / (s * s))
    };
    let before = ratio(r)?;
    let scaled = CurvOp::from_matrix_unchecked(r.frame().clone(), r.matrix() / tau);
    Ok((before - ratio(&scaled)?).abs())
}

/// Condition number Σ|R_{ijij}| / |S| of the scalar curvature as a sum.
///
/// Rounding in S (and hence in |Ric|²/S²) is amplified by this factor, so
/// scale-invariance residuals are measured relative to it.
pub fn scalar_condition(r: &CurvOp) -> f64 {
    let n = r.n();
    let mut abs_sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            abs_sum += r.component(i, j, i, j).abs();
        }
    }
    abs_sum / r.scalar().abs()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelClass {
    Flat,
    CaseI,
    CaseII { a: f64 },
    Neither,
}

/// Flat when |R| ≤ tol, otherwise the equality case of the traceless-Ricci spectrum.
pub fn classify_model(m: &ModelSoliton, tol: f64) -> Result<ModelClass> {
    if m.curvature.norm() <= tol {
        return Ok(ModelClass::Flat);
    }
    let d = decompose(&m.curvature)?;
    Ok(
        match classify_equality(&SpectrumPoint::new(d.lam.clone()), d.scalar, tol)? {
            EqualityCase::CaseI => ModelClass::CaseI,
            EqualityCase::CaseII { a } => ModelClass::CaseII { a },
            EqualityCase::Neither => ModelClass::Neither,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::CLASSIFY_TOL;
    use crate::random::{random_curv, random_orthogonal, rng};

    #[test]
    fn sphere_three() {
        let m = round_sphere(3).unwrap();
        assert_eq!(m.ric, &SymTensor2::identity(3) * 0.5);
        assert_eq!(m.scalar, 1.5);
        assert_eq!(soliton_residual(&m), 0.0);
    }

    #[test]
    fn cylinder_three() {
        let m = round_cylinder(3).unwrap();
        assert_eq!(m.ric, SymTensor2::diagonal(&[0.5, 0.5, 0.0]));
        assert_eq!(m.hess_f, SymTensor2::diagonal(&[0.0, 0.0, 0.5]));
        assert_eq!(m.scalar, 1.0);
        let want = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.5, 0.0, 0.0]));
        assert_eq!(m.curvature.matrix(), &want);
    }

    #[test]
    fn gaussian_five() {
        let m = gaussian(5).unwrap();
        assert_eq!(m.ric, SymTensor2::zeros(5));
        assert_eq!(m.hess_f, &SymTensor2::identity(5) * 0.5);
        assert_eq!(soliton_residual(&m), 0.0);
    }

    #[test]
    fn dimension_limits() {
        assert!(gaussian(1).is_err());
        assert!(round_sphere(1).is_err());
        assert!(round_cylinder(2).is_err());
        assert!(round_sphere(2).is_ok());
    }

    #[test]
    fn residuals_vanish_for_all_models() {
        for n in 3..=12 {
            for m in [gaussian(n), round_sphere(n), round_cylinder(n)] {
                let m = m.unwrap();
                assert!(soliton_residual(&m) <= 1e-15, "{} n={n}", m.kind);
                assert!(m.curvature.min_eigenvalue() >= 0.0);
                assert!(m.curvature.bianchi_residual() <= 1e-15);
                assert!((m.scalar - m.ric.trace()).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn perturbed_sphere_residual() {
        let m = round_sphere_with_radius_sq(3, 5.0).unwrap();
        assert!((soliton_residual(&m) - 0.1).abs() < 1e-15);
        assert!(round_sphere_with_radius_sq(3, 0.0).is_err());
    }

    #[test]
    fn scaling_examples() {
        let cyl = round_cylinder(3).unwrap().curvature;
        assert_eq!(scaling_check(&cyl, 1.0).unwrap(), 0.0);
        assert!(scaling_check(&cyl, 2.0).unwrap() <= 1e-15);
        let ric = cyl.ricci();
        assert_eq!(ric.norm_sq() / ric.trace().powi(2), 0.5);

        for seed in 0..10 {
            let r = random_curv(5, seed).unwrap();
            for tau in [0.1, 10.0] {
                let ric = r.ricci();
                let ratio = ric.norm_sq() / ric.trace().powi(2);
                assert!(scaling_check(&r, tau).unwrap() <= 1e-14 * ratio);
            }
        }
        let flat = gaussian(4).unwrap().curvature;
        assert!(matches!(
            scaling_check(&flat, 2.0),
            Err(Error::UndefinedRatio)
        ));
        assert!(scaling_check(&cyl, -1.0).is_err());
    }

    #[test]
    fn model_classes() {
        assert_eq!(
            classify_model(&gaussian(4).unwrap(), CLASSIFY_TOL).unwrap(),
            ModelClass::Flat
        );
        assert_eq!(
            classify_model(&round_sphere(4).unwrap(), CLASSIFY_TOL).unwrap(),
            ModelClass::CaseI
        );
        match classify_model(&round_cylinder(3).unwrap(), CLASSIFY_TOL).unwrap() {
            ModelClass::CaseII { a } => assert!((a - 1.0 / 6f64.sqrt()).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn classification_survives_rotation() {
        let mut g = rng(17);
        for n in 3..=7 {
            let o = random_orthogonal(n, &mut g);
            for m in [gaussian(n), round_sphere(n), round_cylinder(n)] {
                let m = m.unwrap();
                let rotated = m.conjugate(&o).unwrap();
                assert!(soliton_residual(&rotated) <= 1e-14);
                let (a, b) = (
                    classify_model(&m, CLASSIFY_TOL).unwrap(),
                    classify_model(&rotated, CLASSIFY_TOL).unwrap(),
                );
                match (a, b) {
                    (ModelClass::CaseII { a: x }, ModelClass::CaseII { a: y }) => {
                        assert!((x - y).abs() < 1e-12)
                    }
                    _ => assert_eq!(a, b),
                }
            }
        }
    }
}
