//! The checks behind each suite.
//!
//! Every check yields a nonnegative relative residual per trial; a record
//! keeps the worst one. Deterministic checks (exhaustive enumerations, the
//! model solitons, the optimizer) run once per dimension; randomized checks
//! run once per trial with a seed derived from (seed, suite, dim, trial).

use std::collections::BTreeMap;
use std::sync::Arc;

use curvlab_core::curvature::tri;
use curvlab_core::decomposition::{check_wedge_convention, sharp_lemma_residuals};
use curvlab_core::extremal::{
    classify_equality, enumerate_critical, equality_case_ii, f_quartic, g_cubic, optimize_g_with,
    sharp_bound, Direction, EqualityCase, OptimizerConfig, SpectrumPoint, CLASSIFY_TOL,
};
use curvlab_core::identities::{
    dim3_reaction_residual, huisken_residuals, lcf_closed_form, lcf_gap, main_identity_residual,
    sum_consistency,
};
use curvlab_core::models::{
    classify_model, gaussian, round_cylinder, round_sphere, scalar_condition, scaling_check,
    soliton_residual, ModelClass, ModelSoliton,
};
use curvlab_core::random::{
    derive_seed, random_curv_with, random_lcf_with, random_nonneg_curv_with, random_orthogonal,
    random_spectrum_sample, random_symmetric, random_vector, rng,
};
use curvlab_core::{decompose, CurvOp, Lambda2Frame};
use rayon::prelude::*;

use crate::report::Record;
use crate::Suite;

type Out = Result<f64, String>;
type Check = (&'static str, Out);

const THRESHOLDS: &[(&str, f64)] = &[
    ("lie.antisymmetry", 0.0),
    ("lie.orthonormality", 0.0),
    ("lie.jacobi_exhaustive", 0.0),
    ("lie.jacobi", 1e-12),
    ("lie.bracket_consistency", 1e-12),
    ("lie.ad_invariance", 1e-12),
    ("curvature.norm_bridge", 1e-12),
    ("curvature.sharp_commutativity", 1e-12),
    ("curvature.tri_symmetry", 1e-10),
    ("curvature.q_pairing", 1e-10),
    ("curvature.conjugation_invariance", 1e-10),
    ("curvature.bianchi_projection", 1e-12),
    ("curvature.tachibana_nonneg", 1e-10),
    ("decomposition.wedge_convention", 0.0),
    ("decomposition.reconstruction", 1e-12),
    ("decomposition.orthogonality", 1e-12),
    ("decomposition.norm_identity", 1e-12),
    ("decomposition.sharp_identity", 1e-9),
    ("decomposition.closure_trace_weyl", 1e-9),
    ("decomposition.closure_trace_trace", 1e-9),
    ("decomposition.closure_weyl_weyl", 1e-9),
    ("decomposition.closure_trace_ricci", 1e-9),
    ("decomposition.closure_ricci_weyl", 1e-9),
    ("decomposition.ricci_square", 1e-9),
    ("decomposition.ricci_wedge_split", 1e-9),
    ("identities.q_trace", 1e-9),
    ("identities.q_ricci", 1e-9),
    ("identities.q_weyl", 1e-9),
    ("identities.scalar_expansion", 1e-9),
    ("identities.sum_consistency", 1e-9),
    ("identities.lcf_sign", 1e-12),
    ("identities.lcf_closed_form", 1e-9),
    ("identities.dim3_reaction", 1e-12),
    ("extremal.bound_min", 1e-6),
    ("extremal.bound_max", 1e-6),
    ("extremal.critical_match", 1e-6),
    ("extremal.lagrange", 1e-12),
    ("extremal.equality_case_ii", 1e-12),
    ("extremal.equality_witness", 0.0),
    ("extremal.f_nonnegativity", 1e-12),
    ("models.soliton_residual", 1e-15),
    ("models.classification", 0.0),
    ("models.cylinder_scale", 1e-12),
    ("models.cylinder_weyl", 1e-12),
    ("models.tachibana_models", 1e-12),
    ("models.equality_gap", 1e-12),
    ("models.scaling_models", 1e-14),
    ("models.scaling_random", 1e-14),
    ("models.rotation_stability", 1e-12),
];

/// Default threshold for every check, keyed by `<suite>.<check>`.
pub fn default_thresholds() -> BTreeMap<&'static str, f64> {
    THRESHOLDS.iter().copied().collect()
}

fn eval(f: impl FnOnce() -> curvlab_core::Result<f64>) -> Out {
    f().map_err(|e| e.to_string())
}

/// |a - b| / (1 + max(|a|, |b|)).
fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

fn frame(dim: usize) -> Arc<Lambda2Frame> {
    Lambda2Frame::shared(dim).expect("dimension validated by RunConfig")
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

#[derive(Default)]
struct Worst {
    value: f64,
    note: Option<String>,
}

impl Worst {
    fn absorb(&mut self, r: &Out) {
        match r {
            Ok(v) if v.is_nan() => {
                self.value = f64::INFINITY;
                self.note.get_or_insert_with(|| "residual is NaN".into());
            }
            Ok(v) => self.value = self.value.max(*v),
            Err(e) => {
                self.value = f64::INFINITY;
                self.note.get_or_insert_with(|| e.clone());
            }
        }
    }
}

fn record(
    suite: Suite,
    check: &'static str,
    dim: usize,
    trials: usize,
    worst: Worst,
    thresholds: &BTreeMap<&'static str, f64>,
) -> Record {
    let key = format!("{}.{}", suite.name(), check);
    let threshold = *thresholds
        .get(key.as_str())
        .unwrap_or_else(|| panic!("no threshold registered for {key}"));
    Record {
        suite,
        check,
        dim,
        trials,
        pass: worst.value.is_finite() && worst.value <= threshold,
        max_rel_residual: worst.value,
        threshold,
        note: worst.note,
    }
}

pub(crate) fn run_suite(
    suite: Suite,
    dim: usize,
    trials: usize,
    seed: u64,
    thresholds: &BTreeMap<&'static str, f64>,
) -> Vec<Record> {
    let stream = Suite::ALL.iter().position(|&s| s == suite).unwrap() as u64;
    let mut out = Vec::new();

    for (check, count, result) in
        fixed_checks(suite, dim, trials, derive_seed(seed, &[stream, dim as u64]))
    {
        let mut w = Worst::default();
        w.absorb(&result);
        out.push(record(suite, check, dim, count, w, thresholds));
    }

    let per_trial: Vec<Vec<Check>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            trial(
                suite,
                dim,
                derive_seed(seed, &[stream, dim as u64, t as u64]),
            )
        })
        .collect();
    if let Some(first) = per_trial.first() {
        for (k, &(check, _)) in first.iter().enumerate() {
            let mut w = Worst::default();
            for t in &per_trial {
                debug_assert_eq!(t[k].0, check);
                w.absorb(&t[k].1);
            }
            out.push(record(suite, check, dim, trials, w, thresholds));
        }
    }
    out
}

fn fixed_checks(
    suite: Suite,
    dim: usize,
    trials: usize,
    seed: u64,
) -> Vec<(&'static str, usize, Out)> {
    match suite {
        Suite::Lie => lie_fixed(dim),
        Suite::Curvature => vec![],
        Suite::Decomposition => vec![(
            "wedge_convention",
            1,
            eval(|| check_wedge_convention(dim).map(|_| 0.0)),
        )],
        Suite::Identities => vec![],
        Suite::Extremal => extremal_fixed(dim, trials, seed),
        Suite::Models => models_fixed(dim),
    }
}

fn trial(suite: Suite, dim: usize, seed: u64) -> Vec<Check> {
    match suite {
        Suite::Lie => lie_trial(dim, seed),
        Suite::Curvature => curvature_trial(dim, seed),
        Suite::Decomposition => decomposition_trial(dim, seed),
        Suite::Identities => identities_trial(dim, seed),
        Suite::Extremal => extremal_trial(dim, seed),
        Suite::Models => models_trial(dim, seed),
    }
}

// --- lie ---------------------------------------------------------------

/// [Φ_b, Φ_c] as a single signed basis element, if nonzero.
fn basis_bracket(f: &Lambda2Frame, b: usize, c: usize) -> Option<(usize, f64)> {
    f.brackets_of(b)
        .iter()
        .find(|&&(other, _, _)| other == c)
        .map(|&(_, g, coef)| (g, coef))
}

fn lie_fixed(dim: usize) -> Vec<(&'static str, usize, Out)> {
    let f = frame(dim);
    let d = f.dim();

    let mut anti: f64 = 0.0;
    for a in 0..d {
        for b in 0..d {
            for g in 0..d {
                let c = f.structure_constant(a, b, g);
                anti = anti
                    .max((c + f.structure_constant(b, a, g)).abs())
                    .max((c + f.structure_constant(a, g, b)).abs());
            }
        }
    }

    let mut ortho: f64 = 0.0;
    let basis: Vec<_> = (0..d).map(|a| f.basis_matrix(a)).collect();
    for a in 0..d {
        for b in 0..d {
            let want = if a == b { 1.0 } else { 0.0 };
            let got = curvlab_core::lie::so_inner(&basis[a], &basis[b]);
            ortho = ortho.max(got.map_or(f64::INFINITY, |v| (v - want).abs()));
        }
    }

    // [Φa,[Φb,Φc]] + [Φb,[Φc,Φa]] + [Φc,[Φa,Φb]] on every basis triple
    let mut jac: f64 = 0.0;
    let mut acc = vec![0.0; d];
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let mut touched = Vec::with_capacity(3);
                for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                    if let Some((inner, s1)) = basis_bracket(&f, y, z) {
                        if let Some((outer, s2)) = basis_bracket(&f, x, inner) {
                            acc[outer] += s1 * s2;
                            touched.push(outer);
                        }
                    }
                }
                for &t in &touched {
                    jac = jac.max(acc[t].abs());
                    acc[t] = 0.0;
                }
            }
        }
    }

    vec![
        ("antisymmetry", d * d * d, Ok(anti)),
        ("orthonormality", d * d, Ok(ortho)),
        ("jacobi_exhaustive", d * d * d, Ok(jac)),
    ]
}

fn lie_trial(dim: usize, seed: u64) -> Vec<Check> {
    let f = frame(dim);
    let mut g = rng(seed);
    let d = f.dim();
    let (x, y, z) = (
        random_vector(d, &mut g),
        random_vector(d, &mut g),
        random_vector(d, &mut g),
    );
    let xyz = norm(&x) * norm(&y) * norm(&z);
    vec![
        (
            "jacobi",
            eval(|| {
                let t1 = f.bracket(&x, &f.bracket(&y, &z)?)?;
                let t2 = f.bracket(&y, &f.bracket(&z, &x)?)?;
                let t3 = f.bracket(&z, &f.bracket(&x, &y)?)?;
                let worst = (0..d).fold(0.0f64, |m, k| m.max((t1[k] + t2[k] + t3[k]).abs()));
                Ok(worst / (1.0 + xyz))
            }),
        ),
        (
            "bracket_consistency",
            eval(|| {
                let (xm, ym) = (f.to_matrix(&x)?, f.to_matrix(&y)?);
                let via_matrices = f.from_matrix(&(&xm * &ym - &ym * &xm))?;
                Ok(max_diff(&f.bracket(&x, &y)?, &via_matrices) / (1.0 + norm(&x) * norm(&y)))
            }),
        ),
        (
            "ad_invariance",
            eval(|| {
                let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
                let lhs = dot(&f.bracket(&x, &y)?, &z);
                let rhs = -dot(&y, &f.bracket(&x, &z)?);
                Ok((lhs - rhs).abs() / (1.0 + xyz))
            }),
        ),
    ]
}

// --- curvature ---------------------------------------------------------

fn curvature_trial(dim: usize, seed: u64) -> Vec<Check> {
    let mut g = rng(seed);
    let ops: curvlab_core::Result<[CurvOp; 4]> = (|| {
        Ok([
            random_curv_with(dim, &mut g)?,
            random_curv_with(dim, &mut g)?,
            random_curv_with(dim, &mut g)?,
            random_nonneg_curv_with(dim, &mut g)?,
        ])
    })();
    let o = random_orthogonal(dim, &mut g);
    let raw = random_symmetric(dim * (dim - 1) / 2, &mut g);
    let [a, b, c, p] = match ops {
        Ok(ops) => ops,
        Err(e) => {
            let e = e.to_string();
            return [
                "norm_bridge",
                "sharp_commutativity",
                "tri_symmetry",
                "q_pairing",
                "conjugation_invariance",
                "bianchi_projection",
                "tachibana_nonneg",
            ]
            .into_iter()
            .map(|n| (n, Err(e.clone())))
            .collect();
        }
    };
    vec![
        (
            "norm_bridge",
            Ok(rel(a.to_riemann().norm_sq(), 4.0 * a.norm_sq())),
        ),
        (
            "sharp_commutativity",
            eval(|| {
                let d = (a.sharp(&b)?.matrix() - b.sharp(&a)?.matrix()).amax();
                Ok(d / (1.0 + a.norm() * b.norm()))
            }),
        ),
        (
            "tri_symmetry",
            eval(|| {
                let base = tri(&a, &b, &c)?;
                let mut worst: f64 = 0.0;
                for v in [
                    tri(&a, &c, &b)?,
                    tri(&b, &a, &c)?,
                    tri(&b, &c, &a)?,
                    tri(&c, &a, &b)?,
                    tri(&c, &b, &a)?,
                ] {
                    worst = worst.max((base - v).abs());
                }
                Ok(worst / (1.0 + a.norm() * b.norm() * c.norm()))
            }),
        ),
        (
            // tri(R,R,R) = ⟨2Q(R), R⟩
            "q_pairing",
            eval(|| {
                let pairing = 2.0 * a.q_operator().inner(&a)?;
                Ok((a.tri_self() - pairing).abs() / (1.0 + a.norm().powi(3)))
            }),
        ),
        (
            "conjugation_invariance",
            eval(|| {
                let q = a.conjugate(&o)?;
                let cube = 1.0 + a.norm().powi(3);
                Ok([
                    rel(a.norm_sq(), q.norm_sq()),
                    (a.tri_self() - q.tri_self()).abs() / cube,
                    (a.tachibana_gap() - q.tachibana_gap()).abs() / cube,
                    (a.min_eigenvalue() - q.min_eigenvalue()).abs() / (1.0 + a.norm()),
                    rel(a.scalar(), q.scalar()),
                ]
                .into_iter()
                .fold(0.0, f64::max))
            }),
        ),
        (
            "bianchi_projection",
            eval(|| {
                let t = CurvOp::from_matrix(frame(dim), raw.matrix().clone())?.to_riemann();
                let proj = t.bianchi_project()?;
                let twice = proj.bianchi_project()?;
                let worst = proj
                    .bianchi_defect()
                    .max(max_diff(proj.as_slice(), twice.as_slice()));
                Ok(worst / (1.0 + t.max_abs()))
            }),
        ),
        (
            "tachibana_nonneg",
            Ok((-p.tachibana_gap()).max(0.0) / (1.0 + p.norm().powi(3))),
        ),
    ]
}

// --- decomposition -----------------------------------------------------

const DECOMP_CHECKS: [&str; 11] = [
    "reconstruction",
    "orthogonality",
    "norm_identity",
    "sharp_identity",
    "closure_trace_weyl",
    "closure_trace_trace",
    "closure_weyl_weyl",
    "closure_trace_ricci",
    "closure_ricci_weyl",
    "ricci_square",
    "ricci_wedge_split",
];

fn decomposition_trial(dim: usize, seed: u64) -> Vec<Check> {
    let values = (|| -> curvlab_core::Result<Vec<f64>> {
        let r = random_curv_with(dim, &mut rng(seed))?;
        let d = decompose(&r)?;
        let quad = 1.0 + r.norm_sq();
        let mut v = vec![
            (&d.reconstruct() - &r).max_abs() / (1.0 + r.norm()),
            d.orthogonality_defect() / quad,
            rel(r.norm_sq(), d.predicted_norm_sq()),
        ];
        let lemma = sharp_lemma_residuals(&r)?;
        v.extend(lemma.entries().iter().map(|e| e.2));
        Ok(v)
    })();
    match values {
        Ok(v) => DECOMP_CHECKS
            .into_iter()
            .zip(v.into_iter().map(Ok))
            .collect(),
        Err(e) => DECOMP_CHECKS
            .into_iter()
            .map(|n| (n, Err(e.to_string())))
            .collect(),
    }
}

// --- identities --------------------------------------------------------

fn identities_trial(dim: usize, seed: u64) -> Vec<Check> {
    let mut g = rng(seed);
    let r = random_curv_with(dim, &mut g);
    let lcf = random_lcf_with(dim, &mut g);
    let ric3 = random_symmetric(3, &mut g);

    let hu = r
        .as_ref()
        .map_err(|e| e.to_string())
        .and_then(|r| huisken_residuals(r).map_err(|e| e.to_string()));
    let q_entry = |name: &'static str| -> Out {
        hu.as_ref()
            .map_err(Clone::clone)
            .map(|h| h.get(name).map_or(f64::INFINITY, |e| e.rel))
    };

    let mut out = vec![
        ("q_trace", q_entry("q_trace")),
        ("q_ricci", q_entry("q_ricci")),
        ("q_weyl", q_entry("q_weyl")),
        (
            "scalar_expansion",
            eval(|| Ok(main_identity_residual(r.as_ref().map_err(Clone::clone)?)?.max_rel())),
        ),
        (
            "sum_consistency",
            eval(|| {
                let r = r.as_ref().map_err(Clone::clone)?;
                Ok(sum_consistency(r)? / (1.0 + 2.0 * r.tri_self().abs()))
            }),
        ),
        (
            "lcf_sign",
            eval(|| {
                let l = lcf.as_ref().map_err(Clone::clone)?;
                let scale = (1.0 + l.norm_sq()).powi(2);
                Ok(lcf_gap(l)?.max(0.0) / scale)
            }),
        ),
        (
            "lcf_closed_form",
            eval(|| {
                let l = lcf.as_ref().map_err(Clone::clone)?;
                let closed = lcf_closed_form(&decompose(l)?);
                Ok((lcf_gap(l)? - closed).abs() / (1.0 + closed.abs()))
            }),
        ),
    ];
    if dim == 3 {
        out.push((
            "dim3_reaction",
            eval(|| {
                let s = ric3.trace();
                let scale = 1.0 + s.powi(4) + ric3.norm_sq().powi(2);
                Ok(dim3_reaction_residual(&ric3)? / scale)
            }),
        ));
    }
    out
}

// --- extremal ----------------------------------------------------------

fn extremal_fixed(dim: usize, starts: usize, seed: u64) -> Vec<(&'static str, usize, Out)> {
    let cfg = OptimizerConfig {
        starts,
        ..OptimizerConfig::default()
    };
    let critical = enumerate_critical(dim);
    let bound = sharp_bound(dim);
    let lo = optimize_g_with(dim, seed, Direction::Min, &cfg);
    let hi = optimize_g_with(dim, derive_seed(seed, &[1]), Direction::Max, &cfg);

    let bound_min = eval(|| Ok((lo.as_ref().map_err(Clone::clone)?.value + bound.clone()?).abs()));
    let bound_max = eval(|| Ok((hi.as_ref().map_err(Clone::clone)?.value - bound.clone()?).abs()));
    let critical_match = eval(|| {
        let values: Vec<f64> = critical
            .as_ref()
            .map_err(Clone::clone)?
            .iter()
            .map(|c| c.g)
            .collect();
        let mut worst: f64 = 0.0;
        for run in [&lo, &hi] {
            for s in &run.as_ref().map_err(Clone::clone)?.starts {
                let nearest = values
                    .iter()
                    .fold(f64::INFINITY, |m, v| m.min((v - s.g).abs()));
                worst = worst.max(nearest);
            }
        }
        Ok(worst)
    });
    let lagrange = eval(|| {
        let cps = critical.as_ref().map_err(Clone::clone)?;
        let mut worst: f64 = 0.0;
        for c in cps {
            worst = worst
                .max(c.lagrange_residual())
                .max(c.lam.sum().abs())
                .max((c.lam.sum_sq() - 1.0).abs())
                .max((g_cubic(&c.lam) - c.g).abs());
        }
        Ok(worst)
    });
    let scales = [1e-3, 1.0, 1e3];
    let equality = eval(|| {
        let mut worst: f64 = 0.0;
        for a in scales {
            let (lam, s) = equality_case_ii(dim, a)?;
            worst = worst.max(quartic_relative(s, &lam)?.abs());
            match classify_equality(&lam, s, CLASSIFY_TOL)? {
                EqualityCase::CaseII { a: found } => worst = worst.max((found - a).abs() / a),
                other => {
                    return Err(curvlab_core::Error::Constraint(format!(
                        "a = {a} classified as {other:?}"
                    )))
                }
            }
        }
        Ok(worst)
    });
    let witness = eval(|| {
        let mut lam = vec![0.0; dim];
        lam[0] = std::f64::consts::FRAC_1_SQRT_2;
        lam[1] = -std::f64::consts::FRAC_1_SQRT_2;
        Ok(
            match classify_equality(&SpectrumPoint::new(lam), 1.0, CLASSIFY_TOL)? {
                EqualityCase::Neither => 0.0,
                _ => 1.0,
            },
        )
    });

    vec![
        ("bound_min", starts, bound_min),
        ("bound_max", starts, bound_max),
        ("critical_match", 2 * starts, critical_match),
        ("lagrange", dim - 1, lagrange),
        ("equality_case_ii", scales.len(), equality),
        ("equality_witness", 1, witness),
    ]
}

/// f(S, λ) divided by the sum of the magnitudes of its three terms.
fn quartic_relative(s: f64, lam: &SpectrumPoint) -> curvlab_core::Result<f64> {
    let f = f_quartic(s, lam)?;
    let nf = lam.n() as f64;
    let st2 = lam.sum_sq();
    let terms =
        s * s * st2 / (nf * (nf - 1.0)) + 2.0 * (s * g_cubic(lam)).abs() / (nf - 2.0) + st2 * st2;
    Ok(if terms == 0.0 { f } else { f / terms })
}

fn extremal_trial(dim: usize, seed: u64) -> Vec<Check> {
    let (lam, s) = random_spectrum_sample(dim, 10.0, &mut rng(seed));
    vec![(
        "f_nonnegativity",
        eval(|| Ok((-quartic_relative(s, &lam)?).max(0.0))),
    )]
}

// --- models ------------------------------------------------------------

fn expected_class(m: &ModelSoliton) -> &'static str {
    match m.kind {
        curvlab_core::models::ModelKind::Gaussian => "Flat",
        curvlab_core::models::ModelKind::Sphere => "CaseI",
        curvlab_core::models::ModelKind::Cylinder => "CaseII",
    }
}

fn class_name(c: &ModelClass) -> &'static str {
    match c {
        ModelClass::Flat => "Flat",
        ModelClass::CaseI => "CaseI",
        ModelClass::CaseII { .. } => "CaseII",
        ModelClass::Neither => "Neither",
    }
}

fn all_models(dim: usize) -> curvlab_core::Result<[ModelSoliton; 3]> {
    Ok([gaussian(dim)?, round_sphere(dim)?, round_cylinder(dim)?])
}

fn models_fixed(dim: usize) -> Vec<(&'static str, usize, Out)> {
    let models = all_models(dim);
    let with = |f: &dyn Fn(&[ModelSoliton; 3]) -> curvlab_core::Result<f64>| -> Out {
        models
            .as_ref()
            .map_err(|e| e.to_string())
            .and_then(|m| f(m).map_err(|e| e.to_string()))
    };

    let residual = with(&|m| Ok(m.iter().map(soliton_residual).fold(0.0, f64::max)));
    let classification = with(&|m| {
        for model in m {
            let got = classify_model(model, CLASSIFY_TOL)?;
            if class_name(&got) != expected_class(model) {
                return Err(curvlab_core::Error::Constraint(format!(
                    "{} classified as {got:?}",
                    model.kind
                )));
            }
        }
        Ok(0.0)
    });
    let cylinder_scale = with(&|m| {
        let cyl = &m[2];
        let nf = dim as f64;
        let want = cyl.scalar / (nf * (nf - 1.0)).sqrt();
        match classify_model(cyl, CLASSIFY_TOL)? {
            ModelClass::CaseII { a } => Ok((a - want).abs() / want),
            other => Err(curvlab_core::Error::Constraint(format!(
                "cylinder classified as {other:?}"
            ))),
        }
    });
    let cylinder_weyl = with(&|m| Ok(decompose(&m[2].curvature)?.weyl.norm()));
    let tachibana = with(&|m| {
        let unit = CurvOp::identity(frame(dim));
        Ok(unit
            .tachibana_gap()
            .abs()
            .max(m[2].curvature.tachibana_gap().abs()))
    });
    let equality_gap = with(&|m| {
        let mut worst: f64 = 0.0;
        for model in &m[1..] {
            let r = &model.curvature;
            worst = worst.max(lcf_gap(r)?.abs() / (1.0 + r.norm_sq()).powi(2));
        }
        Ok(worst)
    });
    let scaling = with(&|m| {
        let mut worst: f64 = 0.0;
        for model in &m[1..] {
            let ric = &model.ric;
            let ratio = ric.norm_sq() / (ric.trace() * ric.trace());
            for tau in [0.1, 2.0, 10.0] {
                worst = worst.max(scaling_check(&model.curvature, tau)? / ratio);
            }
        }
        Ok(worst)
    });

    vec![
        ("soliton_residual", 3, residual),
        ("classification", 3, classification),
        ("cylinder_scale", 1, cylinder_scale),
        ("cylinder_weyl", 1, cylinder_weyl),
        ("tachibana_models", 2, tachibana),
        ("equality_gap", 2, equality_gap),
        ("scaling_models", 6, scaling),
    ]
}

fn models_trial(dim: usize, seed: u64) -> Vec<Check> {
    let mut g = rng(seed);
    let r = random_curv_with(dim, &mut g);
    let o = random_orthogonal(dim, &mut g);
    vec![
        (
            "scaling_random",
            eval(|| {
                let r = r.as_ref().map_err(Clone::clone)?;
                let ric = r.ricci();
                let ratio = ric.norm_sq() / (ric.trace() * ric.trace());
                let kappa = scalar_condition(r);
                let mut worst: f64 = 0.0;
                for tau in [0.1, 10.0] {
                    worst = worst.max(scaling_check(r, tau)? / (ratio * kappa));
                }
                Ok(worst)
            }),
        ),
        (
            "rotation_stability",
            eval(|| {
                let mut worst: f64 = 0.0;
                for m in all_models(dim)? {
                    let rotated = m.conjugate(&o)?;
                    worst = worst.max(soliton_residual(&rotated));
                    let (a, b) = (
                        classify_model(&m, CLASSIFY_TOL)?,
                        classify_model(&rotated, CLASSIFY_TOL)?,
                    );
                    match (a, b) {
                        (ModelClass::CaseII { a: x }, ModelClass::CaseII { a: y }) => {
                            worst = worst.max((x - y).abs() / x)
                        }
                        _ if a == b => {}
                        _ => {
                            return Err(curvlab_core::Error::Constraint(format!(
                                "{} changes class under rotation: {a:?} vs {b:?}",
                                m.kind
                            )))
                        }
                    }
                }
                Ok(worst)
            }),
        ),
    ]
}
