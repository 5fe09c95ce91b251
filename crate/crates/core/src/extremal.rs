//! Extremal problem behind the pinching inequality for Weyl-free operators.
//!
//! With traceless-Ricci eigenvalues λ (Σλ = 0) and scalar curvature S,
//!
//! ```text
//! f(S, λ) = S²Σλ²/(n(n-1)) + 2SΣλ³/(n-2) + (Σλ²)²
//! ```
//!
//! is a quadratic in S whose discriminant is nonpositive exactly when
//! g = Σλ³ obeys |g| ≤ (n-2)/√(n(n-1)) on {Σλ = 0, Σλ² = 1}. Critical points
//! of g on that set take at most two distinct values, one per sign ε_j, and
//! are indexed here by the number i of negative entries.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::random::{derive_seed, rng};

/// Tolerance for Σλ = 0 (and Σλ² = 1 where required), relative to 1 + Σ|λ|.
pub const CONSTRAINT_TOL: f64 = 1e-12;

/// Default tolerance of [`classify_equality`].
pub const CLASSIFY_TOL: f64 = 1e-8;

/// A vector of traceless-Ricci eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPoint(Vec<f64>);

impl SpectrumPoint {
    pub fn new(lam: Vec<f64>) -> Self {
        Self(lam)
    }

    pub fn lam(&self) -> &[f64] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn sum_sq(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Σλ = 0 to [`CONSTRAINT_TOL`].
    pub fn check_traceless(&self) -> Result<()> {
        let l1: f64 = self.0.iter().map(|x| x.abs()).sum();
        let s = self.sum();
        if s.abs() > CONSTRAINT_TOL * (1.0 + l1) {
            return Err(Error::Constraint(format!("Σλ = {s:.3e}, expected 0")));
        }
        Ok(())
    }

    fn check_dim(&self) -> Result<()> {
        if self.n() < 3 {
            return Err(Error::InvalidDimension {
                n: self.n(),
                reason: "the extremal problem needs n ≥ 3",
            });
        }
        Ok(())
    }
}

/// g(λ) = Σλᵢ³.
pub fn g_cubic(lam: &SpectrumPoint) -> f64 {
    lam.0.iter().map(|x| x * x * x).sum()
}

/// f(S, λ) = S²Σλ²/(n(n-1)) + 2SΣλ³/(n-2) + (Σλ²)².
pub fn f_quartic(s: f64, lam: &SpectrumPoint) -> Result<f64> {
    lam.check_dim()?;
    lam.check_traceless()?;
    let nf = lam.n() as f64;
    let st2 = lam.sum_sq();
    Ok(s * s * st2 / (nf * (nf - 1.0)) + 2.0 * s * g_cubic(lam) / (nf - 2.0) + st2 * st2)
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidDimension {
            n,
            reason: "the extremal problem needs n ≥ 3",
        });
    }
    Ok(())
}

/// (n-2)/√(n(n-1)), the sharp bound on |Σλ³| over {Σλ = 0, Σλ² = 1}.
pub fn sharp_bound(n: usize) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    Ok((nf - 2.0) / (nf * (nf - 1.0)).sqrt())
}

/// A critical configuration of g on {Σλ = 0, Σλ² = 1}.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPoint {
    /// Number of negative entries, 1 ≤ i ≤ n-1.
    pub negatives: usize,
    /// ε_j: +1 for the larger root, -1 for the smaller.
    pub pattern: Vec<i8>,
    /// Lagrange multiplier of the Σλ² = 1 constraint.
    pub mu: f64,
    pub lam: SpectrumPoint,
    pub g: f64,
}

impl CriticalPoint {
    fn build(n: usize, negatives: usize) -> Self {
        let (nf, i) = (n as f64, negatives as f64);
        let pos = (i / (nf * (nf - i))).sqrt();
        let neg = -((nf - i) / (nf * i)).sqrt();
        let mut lam = vec![pos; n - negatives];
        lam.extend(std::iter::repeat_n(neg, negatives));
        let mut pattern = vec![1i8; n - negatives];
        pattern.extend(std::iter::repeat_n(-1i8, negatives));
        Self {
            negatives,
            pattern,
            // the two roots of 3λ² - 2μλ - 3/n sum to 2μ/3
            mu: 1.5 * (pos + neg),
            lam: SpectrumPoint(lam),
            g: -(nf - 2.0 * i) / (nf * (nf - i) * i).sqrt(),
        }
    }

    /// λ ↦ -λ; the result is the critical point with n - i negatives up to order.
    pub fn mirrored(&self) -> Self {
        Self {
            negatives: self.lam.n() - self.negatives,
            pattern: self.pattern.iter().map(|e| -e).collect(),
            mu: -self.mu,
            lam: SpectrumPoint(self.lam.0.iter().map(|x| -x).collect()),
            g: -self.g,
        }
    }

    /// max_j |3λ_j² - 3/n - 2μλ_j|.
    pub fn lagrange_residual(&self) -> f64 {
        let nf = self.lam.n() as f64;
        self.lam
            .0
            .iter()
            .map(|&l| (3.0 * l * l - 3.0 / nf - 2.0 * self.mu * l).abs())
            .fold(0.0, f64::max)
    }
}

/// All critical configurations, one per count i = 1..n-1 of negative entries.
///
/// Mirroring i ↦ n - i is the λ ↦ -λ symmetry, so the list is closed under
/// [`CriticalPoint::mirrored`] up to permutation of entries.
pub fn enumerate_critical(n: usize) -> Result<Vec<CriticalPoint>> {
    check_n(n)?;
    Ok((1..n).map(|i| CriticalPoint::build(n, i)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub starts: usize,
    pub step: f64,
    /// Stop once the projected gradient norm drops to this.
    pub grad_tol: f64,
    pub max_iters: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            starts: 50,
            step: 0.2,
            grad_tol: 1e-10,
            max_iters: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StartResult {
    pub lam: SpectrumPoint,
    pub g: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeOutcome {
    pub best: SpectrumPoint,
    pub value: f64,
    pub starts: Vec<StartResult>,
}

/// Tangent projection of ∇g = 3λ² at a point of {Σλ = 0, Σλ² = 1}.
fn projected_gradient(x: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    let mut g: Vec<f64> = x.iter().map(|v| 3.0 * v * v).collect();
    let mean = g.iter().sum::<f64>() / n;
    g.iter_mut().for_each(|v| *v -= mean);
    let radial: f64 = g.iter().zip(x).map(|(a, b)| a * b).sum();
    g.iter_mut().zip(x).for_each(|(v, xi)| *v -= radial * xi);
    g
}

/// Re-centers and renormalizes onto the constraint set.
fn retract(x: &mut [f64]) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    x.iter_mut().for_each(|v| *v -= mean);
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
}

fn run_start(n: usize, seed: u64, direction: Direction, cfg: &OptimizerConfig) -> StartResult {
    let mut g = rng(seed);
    let mut x: Vec<f64> = (0..n).map(|_| g.sample(StandardNormal)).collect();
    retract(&mut x);
    let sign = match direction {
        Direction::Min => 1.0,
        Direction::Max => -1.0,
    };
    let mut iterations = 0;
    let mut grad_norm;
    loop {
        let grad = projected_gradient(&x);
        grad_norm = grad.iter().map(|v| v * v).sum::<f64>().sqrt();
        if grad_norm <= cfg.grad_tol || iterations >= cfg.max_iters {
            break;
        }
        x.iter_mut()
            .zip(&grad)
            .for_each(|(xi, gi)| *xi -= sign * cfg.step * gi);
        retract(&mut x);
        iterations += 1;
    }
    let lam = SpectrumPoint(x);
    StartResult {
        g: g_cubic(&lam),
        lam,
        grad_norm,
        iterations,
        converged: grad_norm <= cfg.grad_tol,
    }
}

/// Multi-start projected gradient descent (or ascent) of Σλ³ on
/// {Σλ = 0, Σλ² = 1}. Starts run in parallel with derived seeds; the best
/// start wins, ties broken by start index.
pub fn optimize_g_with(
    n: usize,
    seed: u64,
    direction: Direction,
    cfg: &OptimizerConfig,
) -> Result<OptimizeOutcome> {
    check_n(n)?;
    if cfg.starts == 0 {
        return Err(Error::InvalidParameter(
            "optimizer needs at least one start".into(),
        ));
    }
    let starts: Vec<StartResult> = (0..cfg.starts)
        .into_par_iter()
        .map(|k| run_start(n, derive_seed(seed, &[n as u64, k as u64]), direction, cfg))
        .collect();
    let better = |a: f64, b: f64| match direction {
        Direction::Min => a < b,
        Direction::Max => a > b,
    };
    let mut best = 0;
    for (k, s) in starts.iter().enumerate() {
        if better(s.g, starts[best].g) {
            best = k;
        }
    }
    Ok(OptimizeOutcome {
        best: starts[best].lam.clone(),
        value: starts[best].g,
        starts,
    })
}

pub fn optimize_g(n: usize, seed: u64, direction: Direction) -> Result<OptimizeOutcome> {
    optimize_g_with(n, seed, direction, &OptimizerConfig::default())
}

/// The equality spectrum n-1 copies of a/√(n(n-1)) and one -√((n-1)/n)·a,
/// together with S = √(n(n-1))·a.
pub fn equality_case_ii(n: usize, a: f64) -> Result<(SpectrumPoint, f64)> {
    check_n(n)?;
    if a.is_nan() || a <= 0.0 || !a.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "equality case (ii) needs a finite a > 0, got {a}"
        )));
    }
    let nf = n as f64;
    let s = (nf * (nf - 1.0)).sqrt() * a;
    if !s.is_finite() {
        return Err(Error::InvalidParameter(format!("S overflows for a = {a}")));
    }
    let mut lam = vec![a / (nf * (nf - 1.0)).sqrt(); n - 1];
    lam.push(-((nf - 1.0) / nf).sqrt() * a);
    Ok((SpectrumPoint(lam), s))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EqualityCase {
    /// λ = 0.
    CaseI,
    /// The one-negative-eigenvalue pattern, with its recovered scale a.
    CaseII {
        a: f64,
    },
    Neither,
}

/// Decides which equality case of f(S, λ) = 0 a spectrum realizes.
pub fn classify_equality(lam: &SpectrumPoint, s: f64, tol: f64) -> Result<EqualityCase> {
    lam.check_dim()?;
    lam.check_traceless()?;
    if s < 0.0 {
        return Err(Error::Constraint(format!("S = {s} must be nonnegative")));
    }
    if lam.max_abs() <= tol {
        return Ok(EqualityCase::CaseI);
    }
    let n = lam.n();
    let nf = n as f64;
    let mut sorted = lam.0.clone();
    sorted.sort_by(f64::total_cmp);

    let a = -sorted[0] * (nf / (nf - 1.0)).sqrt();
    if a <= tol {
        return Ok(EqualityCase::Neither);
    }
    let scale = a.max(1.0);
    let expected = a / (nf * (nf - 1.0)).sqrt();
    let rest_ok = sorted[1..]
        .iter()
        .all(|&x| (x - expected).abs() <= tol * scale);
    let s_ok = (s - (nf * (nf - 1.0)).sqrt() * a).abs() <= tol * scale * (nf * (nf - 1.0)).sqrt();
    Ok(if rest_ok && s_ok {
        EqualityCase::CaseII { a }
    } else {
        EqualityCase::Neither
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const R6: f64 = 2.449_489_742_783_178; // √6

    #[test]
    fn f_quartic_examples() {
        let lam = SpectrumPoint::new(vec![1.0 / R6, 1.0 / R6, -2.0 / R6]);
        assert!(f_quartic(R6, &lam).unwrap().abs() < 1e-15);
        assert_eq!(
            f_quartic(3.7, &SpectrumPoint::new(vec![0.0; 5])).unwrap(),
            0.0
        );
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let lam = SpectrumPoint::new(vec![h, -h, 0.0]);
        assert!((f_quartic(1.0, &lam).unwrap() - 7.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn f_quartic_rejects_trace() {
        let lam = SpectrumPoint::new(vec![1.0, 0.0, 0.0]);
        assert!(matches!(f_quartic(1.0, &lam), Err(Error::Constraint(_))));
        let lam = SpectrumPoint::new(vec![1.0, -1.0]);
        assert!(f_quartic(1.0, &lam).is_err());
    }

    #[test]
    fn g_cubic_examples() {
        let (lam, _) = equality_case_ii(3, 1.0).unwrap();
        assert!((g_cubic(&lam) + 1.0 / R6).abs() < 1e-15);
        assert_eq!(g_cubic(&SpectrumPoint::new(vec![0.0; 3])), 0.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(g_cubic(&SpectrumPoint::new(vec![h, -h, 0.0])), 0.0);
    }

    #[test]
    fn critical_values() {
        let g: Vec<f64> = enumerate_critical(4).unwrap().iter().map(|c| c.g).collect();
        let r3 = 3f64.sqrt();
        assert!((g[0] + 1.0 / r3).abs() < 1e-15);
        assert_eq!(g[1], 0.0);
        assert!((g[2] - 1.0 / r3).abs() < 1e-15);

        let g: Vec<f64> = enumerate_critical(3).unwrap().iter().map(|c| c.g).collect();
        assert!((g[0] + 1.0 / R6).abs() < 1e-15 && (g[1] - 1.0 / R6).abs() < 1e-15);
        assert!(enumerate_critical(2).is_err());
    }

    #[test]
    fn critical_points_satisfy_constraints_and_lagrange_system() {
        for n in 3..=12 {
            for c in enumerate_critical(n).unwrap() {
                assert!(c.lam.sum().abs() <= 1e-14);
                assert!((c.lam.sum_sq() - 1.0).abs() <= 1e-14);
                assert!((g_cubic(&c.lam) - c.g).abs() <= 1e-12);
                assert!(c.lagrange_residual() <= 1e-12);
                let m = c.mirrored();
                assert!(m.lagrange_residual() <= 1e-12);
                assert_eq!(m.negatives, n - c.negatives);
                let partner = CriticalPoint::build(n, n - c.negatives);
                assert!((partner.g - m.g).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn bound_values() {
        assert!((sharp_bound(3).unwrap() - 0.408_248_290_463_863).abs() < 1e-15);
        assert!((sharp_bound(4).unwrap() - 0.577_350_269_189_626).abs() < 1e-15);
        let mut prev = 0.0;
        for n in 3..200 {
            let b = sharp_bound(n).unwrap();
            assert!(b > prev && b < 1.0);
            prev = b;
        }
        for n in 3..=12 {
            let worst = enumerate_critical(n)
                .unwrap()
                .iter()
                .fold(0.0, |m: f64, c| m.max(c.g.abs()));
            assert!((worst - sharp_bound(n).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn optimizer_finds_the_bound() {
        let lo = optimize_g(3, 1, Direction::Min).unwrap();
        assert!((lo.value + 0.408_248).abs() < 1e-6);
        let lo = optimize_g(4, 1, Direction::Min).unwrap();
        assert!((lo.value + 0.577_350).abs() < 1e-6);
        for n in 3..=7 {
            let lo = optimize_g(n, 9, Direction::Min).unwrap();
            let hi = optimize_g(n, 9, Direction::Max).unwrap();
            assert!((lo.value + hi.value).abs() < 1e-9);
            assert_eq!(lo.starts.len(), 50);
        }
    }

    #[test]
    fn equality_case_ii_spectra() {
        let (lam, s) = equality_case_ii(3, 1.0).unwrap();
        assert!((s - R6).abs() < 1e-15);
        assert!((lam.lam()[2] + (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(f_quartic(s, &lam).unwrap().abs() < 1e-14);

        let (lam, s) = equality_case_ii(4, 1.0).unwrap();
        assert!((s - 12f64.sqrt()).abs() < 1e-15);
        assert!((lam.lam()[0] - 1.0 / 12f64.sqrt()).abs() < 1e-15);
        assert!(lam.sum().abs() < 1e-15);
        assert!(f_quartic(s, &lam).unwrap().abs() < 1e-14);

        assert!(equality_case_ii(4, 0.0).is_err());
        assert!(equality_case_ii(4, -1.0).is_err());
        assert!(equality_case_ii(4, f64::NAN).is_err());
        assert!(equality_case_ii(4, f64::MAX).is_err());
    }

    #[test]
    fn classification_examples() {
        let zero = SpectrumPoint::new(vec![0.0; 4]);
        assert_eq!(
            classify_equality(&zero, 7.0, CLASSIFY_TOL).unwrap(),
            EqualityCase::CaseI
        );

        let cyl = SpectrumPoint::new(vec![1.0 / 6.0, 1.0 / 6.0, -1.0 / 3.0]);
        match classify_equality(&cyl, 1.0, CLASSIFY_TOL).unwrap() {
            EqualityCase::CaseII { a } => assert!((a - 1.0 / R6).abs() < 1e-15),
            other => panic!("{other:?}"),
        }

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let w = SpectrumPoint::new(vec![h, -h, 0.0]);
        assert_eq!(
            classify_equality(&w, 1.0, CLASSIFY_TOL).unwrap(),
            EqualityCase::Neither
        );

        // right spectrum, wrong S
        assert_eq!(
            classify_equality(&cyl, 2.0, CLASSIFY_TOL).unwrap(),
            EqualityCase::Neither
        );
        assert!(classify_equality(&cyl, -1.0, CLASSIFY_TOL).is_err());
        let bad = SpectrumPoint::new(vec![1.0, 1.0, 1.0]);
        assert!(classify_equality(&bad, 1.0, CLASSIFY_TOL).is_err());
    }

    #[test]
    fn classification_is_permutation_invariant() {
        let (lam, s) = equality_case_ii(5, 2.0).unwrap();
        let mut v = lam.lam().to_vec();
        v.rotate_left(2);
        let r = classify_equality(&SpectrumPoint::new(v), s, CLASSIFY_TOL).unwrap();
        assert!(matches!(r, EqualityCase::CaseII { a } if (a - 2.0).abs() < 1e-14));
    }
}
