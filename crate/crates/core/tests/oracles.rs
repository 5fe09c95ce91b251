//! Independent reference computations checked against the library routes.

use curvlab_core::curvature::tri;
use curvlab_core::extremal::{enumerate_critical, g_cubic, SpectrumPoint};
use curvlab_core::random::{random_curv, random_symmetric, rng};
use curvlab_core::{CurvOp, Lambda2Frame};
use nalgebra::DMatrix;

/// (A#B)_{αβ} = ½ Σ c_{αγη} c_{βδθ} A_{γδ} B_{ηθ} by dense summation.
fn sharp_dense(a: &CurvOp, b: &CurvOp) -> DMatrix<f64> {
    let f = a.frame();
    let d = f.dim();
    DMatrix::from_fn(d, d, |al, be| {
        let mut s = 0.0;
        for g in 0..d {
            for eta in 0..d {
                let c1 = f.structure_constant(al, g, eta);
                if c1 == 0.0 {
                    continue;
                }
                for dl in 0..d {
                    for th in 0..d {
                        s += c1
                            * f.structure_constant(be, dl, th)
                            * a.matrix()[(g, dl)]
                            * b.matrix()[(eta, th)];
                    }
                }
            }
        }
        0.5 * s
    })
}

/// ⟨(A#B)φ, ψ⟩ = ½ Σ_{αβ} ⟨[Aω_α, Bω_β], φ⟩⟨[ω_α, ω_β], ψ⟩ with matrix commutators.
fn sharp_via_commutators(a: &CurvOp, b: &CurvOp) -> DMatrix<f64> {
    let f = a.frame();
    let d = f.dim();
    let col = |m: &DMatrix<f64>, k: usize| -> DMatrix<f64> {
        let v: Vec<f64> = (0..d).map(|r| m[(r, k)]).collect();
        f.to_matrix(&v).unwrap()
    };
    let basis: Vec<DMatrix<f64>> = (0..d).map(|k| f.basis_matrix(k)).collect();
    let inner = |x: &DMatrix<f64>, y: &DMatrix<f64>| -0.5 * (x * y).trace();
    let mut out = DMatrix::zeros(d, d);
    for al in 0..d {
        let aw = col(a.matrix(), al);
        for be in 0..d {
            let bw = col(b.matrix(), be);
            let left = &aw * &bw - &bw * &aw;
            let right = &basis[al] * &basis[be] - &basis[be] * &basis[al];
            for phi in 0..d {
                let lp = inner(&left, &basis[phi]);
                if lp == 0.0 {
                    continue;
                }
                for psi in 0..d {
                    out[(phi, psi)] += 0.5 * lp * inner(&right, &basis[psi]);
                }
            }
        }
    }
    out
}

#[test]
fn sparse_sharp_matches_dense_and_commutator_routes() {
    for n in 3..=5 {
        let a = random_curv(n, 1).unwrap();
        let b = random_curv(n, 2).unwrap();
        let fast = a.sharp(&b).unwrap();
        let dense = sharp_dense(&a, &b);
        let comm = sharp_via_commutators(&a, &b);
        let scale = 1.0 + a.norm() * b.norm();
        assert!((fast.matrix() - &dense).amax() <= 1e-12 * scale, "n={n}");
        assert!((fast.matrix() - &comm).amax() <= 1e-12 * scale, "n={n}");
    }
}

#[test]
fn tri_matches_trace_formula() {
    let n = 4;
    let (a, b, c) = (
        random_curv(n, 3).unwrap(),
        random_curv(n, 4).unwrap(),
        random_curv(n, 5).unwrap(),
    );
    let (am, bm, cm) = (a.matrix(), b.matrix(), c.matrix());
    let direct = ((am * bm + bm * am + sharp_dense(&a, &b) * 2.0) * cm).trace();
    let t = tri(&a, &b, &c).unwrap();
    assert!((t - direct).abs() <= 1e-12 * (1.0 + direct.abs()));
}

#[test]
fn ricci_quadratic_by_brute_force() {
    let r = random_curv(4, 6).unwrap();
    let t = r.to_riemann();
    let n = 4;
    let mut ric = [[0.0; 4]; 4];
    for (i, row) in ric.iter_mut().enumerate() {
        for (k, entry) in row.iter_mut().enumerate() {
            *entry = (0..n).map(|j| t.get(i, j, k, j)).sum();
        }
    }
    let mut total = 0.0;
    for (i, row) in ric.iter().enumerate() {
        for (p, rip) in row.iter().enumerate() {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        total += rip * t.get(i, j, k, l) * t.get(p, j, k, l);
                    }
                }
            }
        }
    }
    assert!((r.ricci_quadratic() - total).abs() <= 1e-12 * (1.0 + total.abs()));
}

#[test]
fn conjugation_matches_four_index_transform() {
    let n = 4;
    let r = random_curv(n, 7).unwrap();
    let o = curvlab_core::random::random_orthogonal(n, &mut rng(3));
    let t = r.to_riemann();
    let rotated = r.conjugate(&o).unwrap().to_riemann();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut s = 0.0;
                    for a in 0..n {
                        for b in 0..n {
                            for c in 0..n {
                                for d in 0..n {
                                    s += o[(i, a)]
                                        * o[(j, b)]
                                        * o[(k, c)]
                                        * o[(l, d)]
                                        * t.get(a, b, c, d);
                                }
                            }
                        }
                    }
                    assert!((rotated.get(i, j, k, l) - s).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn structure_constants_match_bracket_formula() {
    // [Φ_ij, Φ_kl] = δ_jk Φ_il - δ_ik Φ_jl - δ_jl Φ_ik + δ_il Φ_jk
    let f = Lambda2Frame::new(5).unwrap();
    let phi = |i: usize, j: usize| -> Vec<f64> {
        let mut v = vec![0.0; f.dim()];
        if let Some((a, s)) = f.slot(i, j) {
            v[a] = s;
        }
        v
    };
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    for (a, &(i, j)) in f.pairs().iter().enumerate() {
        for (b, &(k, l)) in f.pairs().iter().enumerate() {
            let mut want = vec![0.0; f.dim()];
            for (coef, v) in [
                (d(j, k), phi(i, l)),
                (-d(i, k), phi(j, l)),
                (-d(j, l), phi(i, k)),
                (d(i, l), phi(j, k)),
            ] {
                for (w, x) in want.iter_mut().zip(v) {
                    *w += coef * x;
                }
            }
            for (g, w) in want.iter().enumerate() {
                assert_eq!(f.structure_constant(a, b, g), *w, "({i}{j}),({k}{l})");
            }
        }
    }
}

#[test]
fn critical_points_are_stationary_by_finite_differences() {
    // the tangent component of a central-difference gradient of g vanishes
    for n in 3..=8 {
        for c in enumerate_critical(n).unwrap() {
            let x = c.lam.lam().to_vec();
            let h = 1e-6;
            let mut grad = vec![0.0; n];
            for k in 0..n {
                let mut up = x.clone();
                let mut dn = x.clone();
                up[k] += h;
                dn[k] -= h;
                grad[k] = (g_cubic(&SpectrumPoint::new(up)) - g_cubic(&SpectrumPoint::new(dn)))
                    / (2.0 * h);
            }
            let mean = grad.iter().sum::<f64>() / n as f64;
            grad.iter_mut().for_each(|v| *v -= mean);
            let radial: f64 = grad.iter().zip(&x).map(|(a, b)| a * b).sum();
            let tangent: f64 = grad
                .iter()
                .zip(&x)
                .map(|(gv, xv)| (gv - radial * xv).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(tangent < 1e-8, "n={n} i={} tangent={tangent}", c.negatives);
        }
    }
}

#[test]
fn ricci_of_reconstructed_tensor() {
    let mut g = rng(21);
    let ric = random_symmetric(3, &mut g);
    let t = curvlab_core::identities::reconstruct_3d(&ric).unwrap();
    let back = t.ricci();
    assert!((back.matrix() - ric.matrix()).amax() < 1e-13);
}
