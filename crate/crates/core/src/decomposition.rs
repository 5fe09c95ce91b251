//! Irreducible O(n) splitting R = R_I + R_{Ric₀} + R_W.
//!
//! The wedge of symmetric 2-tensors acts on Λ² as
//! (A∧B)(x∧y) = ½(Ax∧By + Bx∧Ay), so id∧id is the identity of Λ²
//! and R_{Ric₀} = 2/(n-2)·Ric₀∧id carries exactly the traceless Ricci part.
//! The Weyl part is whatever remains after subtracting the other two.

use crate::curvature::CurvOp;
use crate::error::{Error, Result};
use crate::lie::Lambda2Frame;
use crate::tensor::{SymTensor2, STRUCTURE_TOL};

/// A ∧ B as an operator on Λ²: entries ½(A_ik B_jl + A_jl B_ik - A_il B_jk - A_jk B_il).
pub fn wedge(a: &SymTensor2, b: &SymTensor2) -> Result<CurvOp> {
    if a.n() != b.n() {
        return Err(Error::Shape {
            expected: format!("{0}×{0} symmetric tensor", a.n()),
            found: format!("{0}×{0}", b.n()),
        });
    }
    let frame = Lambda2Frame::shared(a.n())?;
    let pairs = frame.pairs();
    let dim = pairs.len();
    let m = nalgebra::DMatrix::from_fn(dim, dim, |x, y| {
        let (i, j) = pairs[x];
        let (k, l) = pairs[y];
        0.5 * (a.get(i, k) * b.get(j, l) + a.get(j, l) * b.get(i, k)
            - a.get(i, l) * b.get(j, k)
            - a.get(j, k) * b.get(i, l))
    });
    Ok(CurvOp::from_matrix_unchecked(frame, m))
}

/// Checks the wedge normalization against the inner products it has to
/// reproduce: id∧id = I, |id∧id|² = n(n-1)/2, |A∧id|² = (n-2)/4·|A|² for
/// traceless A, and ⟨λ̄ id∧id + A∧id, λ̄/(n-1) id∧id + 2/(n-2) A∧id⟩ = n λ̄²/2 + |A|²/2.
pub fn check_wedge_convention(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::UnsupportedDimension {
            n,
            requirement: "n ≥ 3",
        });
    }
    let frame = Lambda2Frame::shared(n)?;
    let id = SymTensor2::identity(n);
    let idid = wedge(&id, &id)?;
    let nf = n as f64;
    let tol = 1e-12;

    let fail = |what: &str, got: f64, want: f64| {
        Err(Error::Precondition(format!(
            "wedge convention self-test: {what} = {got}, expected {want}"
        )))
    };

    let defect = (idid.matrix() - CurvOp::identity(frame).matrix()).amax();
    if defect > tol {
        return fail("|id∧id - I|", defect, 0.0);
    }
    let want = nf * (nf - 1.0) / 2.0;
    if (idid.norm_sq() - want).abs() > tol * want {
        return fail("|id∧id|²", idid.norm_sq(), want);
    }

    // a fixed traceless diagonal probe
    let mut diag: Vec<f64> = (0..n).map(|k| (k as f64 + 1.0).sqrt()).collect();
    let mean = diag.iter().sum::<f64>() / nf;
    diag.iter_mut().for_each(|x| *x -= mean);
    let a = SymTensor2::diagonal(&diag);
    let sum_sq: f64 = diag.iter().map(|x| x * x).sum();
    let a_id = wedge(&a, &id)?;
    let want = (nf - 2.0) / 4.0 * sum_sq;
    if (a_id.norm_sq() - want).abs() > tol * (1.0 + want) {
        return fail("|A∧id|²", a_id.norm_sq(), want);
    }

    let lbar = 0.75;
    let left = &(&idid * lbar) + &a_id;
    let right = &(&idid * (lbar / (nf - 1.0))) + &(&a_id * (2.0 / (nf - 2.0)));
    let got = left.inner(&right)?;
    let want = nf / 2.0 * lbar * lbar + 0.5 * sum_sq;
    if (got - want).abs() > tol * (1.0 + want) {
        return fail("trace/traceless pairing", got, want);
    }
    Ok(())
}

/// The three irreducible parts of a curvature operator and the scalars built from them.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Scalar curvature S.
    pub scalar: f64,
    pub ricci: SymTensor2,
    pub traceless_ricci: SymTensor2,
    /// Eigenvalues of Ric₀, ascending.
    pub lam: Vec<f64>,
    /// σ² = |Ric|².
    pub sigma2: f64,
    /// σ̃² = |Ric₀|² = Σλᵢ².
    pub sigma_tilde2: f64,
    /// R_I = S/(n(n-1))·I.
    pub trace_part: CurvOp,
    /// R_{Ric₀} = 2/(n-2)·Ric₀∧id.
    pub ricci_part: CurvOp,
    /// R_W, the remainder.
    pub weyl: CurvOp,
}

impl Decomposition {
    pub fn n(&self) -> usize {
        self.ricci.n()
    }

    pub fn reconstruct(&self) -> CurvOp {
        &(&self.trace_part + &self.ricci_part) + &self.weyl
    }

    /// Largest absolute pairwise inner product between the three parts.
    pub fn orthogonality_defect(&self) -> f64 {
        let p = [&self.trace_part, &self.ricci_part, &self.weyl];
        let mut worst: f64 = 0.0;
        for a in 0..3 {
            for b in (a + 1)..3 {
                worst = worst.max(p[a].inner(p[b]).expect("same frame").abs());
            }
        }
        worst
    }

    /// S²/(2n(n-1)) + σ̃²/(n-2) + |R_W|², which must equal |R|².
    pub fn predicted_norm_sq(&self) -> f64 {
        let n = self.n() as f64;
        self.scalar * self.scalar / (2.0 * n * (n - 1.0))
            + self.sigma_tilde2 / (n - 2.0)
            + self.weyl.norm_sq()
    }

    /// Σλᵢ³ computed as tr(Ric₀³).
    pub fn lambda_cube_sum(&self) -> f64 {
        let a = self.traceless_ricci.matrix();
        (a * a * a).trace()
    }
}

/// Splits R into trace, traceless-Ricci and Weyl parts.
pub fn decompose(r: &CurvOp) -> Result<Decomposition> {
    let n = r.n();
    if n < 3 {
        return Err(Error::UnsupportedDimension {
            n,
            requirement: "n ≥ 3",
        });
    }
    let nf = n as f64;
    let ricci = r.ricci();
    let scalar = ricci.trace();
    let traceless_ricci = ricci.traceless();
    let id = SymTensor2::identity(n);

    let trace_part = &CurvOp::identity(r.frame().clone()) * (scalar / (nf * (nf - 1.0)));
    let ricci_part = &wedge(&traceless_ricci, &id)? * (2.0 / (nf - 2.0));
    let weyl = &(r - &trace_part) - &ricci_part;

    Ok(Decomposition {
        scalar,
        lam: traceless_ricci.eigenvalues(),
        sigma2: ricci.norm_sq(),
        sigma_tilde2: traceless_ricci.norm_sq(),
        ricci,
        traceless_ricci,
        trace_part,
        ricci_part,
        weyl,
    })
}

/// In dimension three the Weyl remainder vanishes identically. It is checked
/// against [`STRUCTURE_TOL`] and then set to exact zero so that roundoff in
/// the subtraction does not leak into the identities.
pub(crate) fn settle_weyl_in_dim3(d: &mut Decomposition, r: &CurvOp) -> Result<()> {
    if r.n() != 3 {
        return Ok(());
    }
    let w = d.weyl.norm();
    if w > STRUCTURE_TOL * (1.0 + r.norm()) {
        return Err(Error::Precondition(format!(
            "three-dimensional Weyl remainder |R_W| = {w:.3e} does not vanish"
        )));
    }
    d.weyl = CurvOp::zeros(r.frame().clone());
    Ok(())
}

/// Which irreducible subspace a product is asserted to lie in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Subspace {
    Trace,
    TracelessRicci,
    Weyl,
}

/// Norm of the component of `x` outside `target`.
fn outside(x: &CurvOp, target: Subspace) -> Result<f64> {
    let d = decompose(x)?;
    let (a, b) = match target {
        Subspace::Trace => (d.ricci_part.norm_sq(), d.weyl.norm_sq()),
        Subspace::TracelessRicci => (d.trace_part.norm_sq(), d.weyl.norm_sq()),
        Subspace::Weyl => (d.trace_part.norm_sq(), d.ricci_part.norm_sq()),
    };
    Ok((a + b).sqrt())
}

/// Absolute residuals of the algebraic lemma relating `#`, the wedge and the splitting.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpLemmaResiduals {
    /// |R + R#I - Ric(R)∧id|.
    pub sharp_identity: f64,
    /// |B(R_I, R_W)|.
    pub trace_weyl: f64,
    /// Part of B(R_I, R_I) outside ⟨I⟩.
    pub trace_trace: f64,
    /// Part of B(R_W, R_W) outside ⟨W⟩.
    pub weyl_weyl: f64,
    /// Part of B(R_I, R_{Ric₀}) outside ⟨Ric₀⟩.
    pub trace_ricci: f64,
    /// Part of B(R_{Ric₀}, R_W) outside ⟨Ric₀⟩.
    pub ricci_weyl: f64,
    pub ricci_square: f64,
    pub ricci_wedge_split: f64,
    /// |R| (operator norm), used to normalize.
    pub norm: f64,
}

impl SharpLemmaResiduals {
    /// `(name, absolute, relative)` with sharp_identity scaled by 1+|R| and the
    /// quadratic identities by 1+|R|².
    pub fn entries(&self) -> [(&'static str, f64, f64); 8] {
        let lin = 1.0 + self.norm;
        let quad = 1.0 + self.norm * self.norm;
        [
            (
                "sharp_identity",
                self.sharp_identity,
                self.sharp_identity / lin,
            ),
            (
                "closure_trace_weyl",
                self.trace_weyl,
                self.trace_weyl / quad,
            ),
            (
                "closure_trace_trace",
                self.trace_trace,
                self.trace_trace / quad,
            ),
            ("closure_weyl_weyl", self.weyl_weyl, self.weyl_weyl / quad),
            (
                "closure_trace_ricci",
                self.trace_ricci,
                self.trace_ricci / quad,
            ),
            (
                "closure_ricci_weyl",
                self.ricci_weyl,
                self.ricci_weyl / quad,
            ),
            ("ricci_square", self.ricci_square, self.ricci_square / quad),
            (
                "ricci_wedge_split",
                self.ricci_wedge_split,
                self.ricci_wedge_split / quad,
            ),
        ]
    }

    pub fn max_relative(&self) -> f64 {
        self.entries().iter().fold(0.0, |m, e| m.max(e.2))
    }
}

/// Evaluates every identity of the lemma on the decomposition of `r`.
/// In dimension three the Weyl part is taken to be zero.
pub fn sharp_lemma_residuals(r: &CurvOp) -> Result<SharpLemmaResiduals> {
    let n = r.n();
    let nf = n as f64;
    let mut d = decompose(r)?;
    settle_weyl_in_dim3(&mut d, r)?;
    let id = SymTensor2::identity(n);
    let big_i = CurvOp::identity(r.frame().clone());

    let sharp_identity = (&(r + &r.sharp(&big_i)?) - &wedge(&d.ricci, &id)?).norm();

    let (ri, r0, w) = (&d.trace_part, &d.ricci_part, &d.weyl);
    let trace_weyl = ri.b_product(w)?.norm();
    let trace_trace = outside(&ri.b_product(ri)?, Subspace::Trace)?;
    let weyl_weyl = outside(&w.b_product(w)?, Subspace::Weyl)?;
    let trace_ricci = outside(&ri.b_product(r0)?, Subspace::TracelessRicci)?;
    let ricci_weyl = outside(&r0.b_product(w)?, Subspace::TracelessRicci)?;

    let ric0 = &d.traceless_ricci;
    let st2 = d.sigma_tilde2;
    let ric0_sq_0 = ric0.square().traceless();
    let ric0_wedge = wedge(ric0, ric0)?;

    let half_b = &r0.b_product(r0)? * 0.5;
    let ricci_square_rhs = &(&(&ric0_wedge * (1.0 / (nf - 2.0)))
        - &(&wedge(&ric0_sq_0, &id)? * (2.0 / ((nf - 2.0) * (nf - 2.0)))))
        + &(&big_i * (st2 / (nf * (nf - 2.0))));
    let ricci_square = (&half_b - &ricci_square_rhs).norm();

    let split = decompose(&ric0_wedge)?;
    let trace_err = &split.trace_part - &(&big_i * (-st2 / (nf * (nf - 1.0))));
    let ricci_err = &split.ricci_part - &(&wedge(&ric0_sq_0, &id)? * (-2.0 / (nf - 2.0)));
    let ricci_wedge_split = (trace_err.norm_sq() + ricci_err.norm_sq()).sqrt();

    Ok(SharpLemmaResiduals {
        sharp_identity,
        trace_weyl,
        trace_trace,
        weyl_weyl,
        trace_ricci,
        ricci_weyl,
        ricci_square,
        ricci_wedge_split,
        norm: r.norm(),
    })
}
