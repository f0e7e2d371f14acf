use super::*;
use crate::special_fn::{theta_bar, EllipticModuli};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn moduli() -> EllipticModuli {
    EllipticModuli::new(c(0.0, 0.7), c(0.05, 0.11)).unwrap()
}

/// Extract the 2x2 matrix of `op` in the basis (e1, e2): op e_j = sum_i m[i][j] e_i.
fn matrix_in_basis(
    op: &DifferenceOperator,
    e1: &ZFn,
    e2: &ZFn,
    z_a: Complex64,
    z_b: Complex64,
) -> Mat2 {
    let solve = |f: &ZFn| -> [Complex64; 2] {
        // [e1(za) e2(za); e1(zb) e2(zb)] [m1; m2] = [op f(za); op f(zb)]
        let a = e1(z_a).unwrap();
        let b = e2(z_a).unwrap();
        let d = e1(z_b).unwrap();
        let e = e2(z_b).unwrap();
        let r1 = op.apply(f, z_a).unwrap();
        let r2 = op.apply(f, z_b).unwrap();
        let det = a * e - b * d;
        [(r1 * e - b * r2) / det, (a * r2 - r1 * d) / det]
    };
    let col1 = solve(e1);
    let col2 = solve(e2);
    [[col1[0], col2[0]], [col1[1], col2[1]]]
}

#[test]
fn spin_half_generators_reduce_to_sigma_matrices() {
    let md = moduli();
    let tau = md.tau;
    let e1: ZFn = zfn(move |z| theta_bar(4, z, tau));
    let e2: ZFn = zfn(move |z| theta_bar(3, z, tau));
    let scale = jacobi_theta(1, 2.0 * md.eta, tau).unwrap();
    let (z_a, z_b) = (c(0.13, 0.0), c(0.31, 0.05));
    for a in 0..4 {
        let op = make_generator(a, c(0.5, 0.0), &md, Variant::Standard).unwrap();
        let m = matrix_in_basis(&op, &e1, &e2, z_a, z_b);
        let s = sigma(a);
        for i in 0..2 {
            for j in 0..2 {
                let expect = scale * s[i][j];
                assert!(
                    (m[i][j] - expect).norm() < 1e-10 * scale.norm(),
                    "S^{} entry ({},{}): got {}, want {}",
                    a,
                    i,
                    j,
                    m[i][j],
                    expect
                );
            }
        }
    }
}

#[test]
fn standard_generator_matches_direct_formula() {
    let md = moduli();
    let ell = c(0.23, 0.1);
    let one: ZFn = zfn(|_| Ok(c(1.0, 0.0)));
    let z = c(0.17, 0.03);
    for a in 0..4 {
        let op = make_generator(a, ell, &md, Variant::Standard).unwrap();
        let got = op.apply(&one, z).unwrap();
        // Direct substitution into the defining two-term expression.
        let j = (a + 1) as u8;
        let phase = if a == 2 { c(0.0, 1.0) } else { c(1.0, 0.0) };
        let pref = phase * jacobi_theta(j, md.eta, md.tau).unwrap()
            / jacobi_theta(1, 2.0 * z, md.tau).unwrap();
        let expect = pref
            * (jacobi_theta(j, 2.0 * z - 2.0 * md.eta * ell, md.tau).unwrap()
                - jacobi_theta(j, -2.0 * z - 2.0 * md.eta * ell, md.tau).unwrap());
        assert!((got - expect).norm() < 1e-12 * expect.norm().max(1.0), "a = {}", a);
    }
}

#[test]
fn modified_equals_conjugated_standard() {
    let md = moduli();
    let ell = c(0.23, 0.1);
    let i_pi = c(0.0, std::f64::consts::PI);
    let eta = md.eta;
    let tau = md.tau;
    let f: ZFn = zfn(move |z| Ok(theta_bar(3, z, tau)? + 0.3 * theta_bar(4, z, tau)?));
    // g(x) = e^{-pi i x^2/eta} f(x)
    let fg: ZFn = {
        let f = f.clone();
        zfn(move |x| Ok((-i_pi * x * x / eta).exp() * f(x)?))
    };
    for a in 0..4 {
        let std_op = make_generator(a, ell, &md, Variant::Standard).unwrap();
        let mod_op = make_generator(a, ell, &md, Variant::Modified).unwrap();
        for &z in &[c(0.21, 0.0), c(0.37, 0.08)] {
            let direct = mod_op.apply(&f, z).unwrap();
            let conj = (i_pi * z * z / eta).exp() * std_op.apply(&fg, z).unwrap();
            assert!(
                (direct - conj).norm() < 1e-10 * direct.norm().max(1.0),
                "a = {} at z = {}",
                a,
                z
            );
        }
    }
}

#[test]
fn structure_constant_identities() {
    // Real eta, real-axis p test point: sign pattern J12 J23 J31 < 0.
    let md = EllipticModuli::new(c(0.0, 0.8), c(0.11, 0.0)).unwrap();
    let sc = structure_constants(&md).unwrap();
    let prod = sc.j12 * sc.j23 * sc.j31;
    assert!(prod.im.abs() < 1e-12 && prod.re < 0.0, "product {}", prod);

    // J_{12} = (J_2 - J_1)/J_3 at eta = 0.11i, tau = 0.7i.
    let md = EllipticModuli::new(c(0.0, 0.7), c(0.0, 0.11)).unwrap();
    let sc = structure_constants(&md).unwrap();
    let rhs = (sc.j2 - sc.j1) / sc.j3;
    assert!((sc.j12 - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    let rhs = (sc.j3 - sc.j2) / sc.j1;
    assert!((sc.j23 - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    let rhs = (sc.j1 - sc.j3) / sc.j2;
    assert!((sc.j31 - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));

    // Even in eta.
    let neg = structure_constants_at(-md.eta, md.tau).unwrap();
    assert!((sc.j12 - neg.j12).norm() < 1e-12 * sc.j12.norm());
    assert!((sc.j23 - neg.j23).norm() < 1e-12 * sc.j23.norm());
    assert!((sc.j31 - neg.j31).norm() < 1e-12 * sc.j31.norm());
}

#[test]
fn quadratic_relations_standard_and_half_shifted() {
    let md = moduli();
    let fns = test_function_family(&md);
    let pts = halton_circle_points(6);
    for variant in [Variant::Standard, Variant::HalfShifted] {
        let r = quadratic_relations_residual(c(0.23, 0.1), &md, variant, &fns[..4], &pts)
            .unwrap();
        assert!(r < 1e-9, "{:?} residual {}", variant, r);
    }
}

#[test]
fn quadratic_relations_double_variants() {
    // The tau/2- and 1/2-shifts of the double variants need moduli with
    // balanced imaginary parts to stay well conditioned in f64.
    let md = EllipticModuli::new(c(0.0, 0.3), c(0.16, 0.06)).unwrap();
    let fns = test_function_family(&md);
    let real_pts = halton_circle_points(4);
    // SecondDouble's natural sample ray is z = 2 eta s.
    let ray_pts: Vec<Complex64> = real_pts.iter().map(|s| 2.0 * md.eta * s.re).collect();
    for variant in [Variant::Modified, Variant::ModularPartner, Variant::SecondDouble] {
        let pts = if variant == Variant::SecondDouble { &ray_pts } else { &real_pts };
        let r = quadratic_relations_residual(c(0.23, 0.1), &md, variant, &fns[..3], pts)
            .unwrap();
        assert!(r < 1e-9, "{:?} residual {}", variant, r);
    }
}

#[test]
fn casimirs_on_spin_half_theta_basis() {
    let md = moduli();
    let tau = md.tau;
    let fns: Vec<ZFn> = vec![
        zfn(move |z| theta_bar(3, z, tau)),
        zfn(move |z| theta_bar(4, z, tau)),
    ];
    let pts = halton_circle_points(5);
    let r = casimir_check(c(0.5, 0.0), &md, Variant::Standard, &fns, &pts).unwrap();
    assert!(r < 1e-10, "residual {}", r);
}

#[test]
fn casimirs_at_generic_spin() {
    let md = moduli();
    let fns: Vec<ZFn> = vec![zfn(|z| {
        let y = crate::special_fn::cis2pi(z);
        Ok(y + 1.0 / y)
    })];
    let pts = halton_circle_points(5);
    let r = casimir_check(c(0.23, 0.1), &md, Variant::Standard, &fns, &pts).unwrap();
    assert!(r < 1e-9, "residual {}", r);
}

#[test]
fn casimirs_commute_with_generators() {
    let md = moduli();
    let ell = c(0.3, 0.05);
    let gens: Vec<DifferenceOperator> = (0..4)
        .map(|a| make_generator(a, ell, &md, Variant::Standard).unwrap())
        .collect();
    let sc = structure_constants(&md).unwrap();
    let j_alpha = [sc.j1, sc.j2, sc.j3];
    let tau = md.tau;
    let f: ZFn = zfn(move |z| theta_bar(3, z, tau));
    for &z in &halton_circle_points(4) {
        for a in 0..4 {
            let saf = gens[a].bind(f.clone());
            let mut k0_sa = c(0.0, 0.0);
            let mut sa_k0 = c(0.0, 0.0);
            let mut k2_sa = c(0.0, 0.0);
            let mut sa_k2 = c(0.0, 0.0);
            for b in 0..4 {
                // K0 S^a f picks up S^b S^b S^a f; S^a K0 f the reverse order.
                let sbsb_saf = gens[b].compose_apply(&gens[b], &saf, z).unwrap();
                let sbsbf = gens[b].bind(gens[b].bind(f.clone()));
                let sa_sbsbf = gens[a].apply(&sbsbf, z).unwrap();
                k0_sa += sbsb_saf;
                sa_k0 += sa_sbsbf;
                if b >= 1 {
                    k2_sa += j_alpha[b - 1] * sbsb_saf;
                    sa_k2 += j_alpha[b - 1] * sa_sbsbf;
                }
            }
            let scale = k0_sa.norm().max(sa_k0.norm()).max(1.0);
            assert!((k0_sa - sa_k0).norm() / scale < 1e-9, "K0 commutator a={}", a);
            let scale = k2_sa.norm().max(sa_k2.norm()).max(1.0);
            assert!((k2_sa - sa_k2).norm() / scale < 1e-9, "K2 commutator a={}", a);
        }
    }
}

#[test]
fn l_operator_factorization() {
    let md = moduli();
    let ell = c(0.23, 0.1);
    let u = c(0.4, 0.2);
    let g = md.eta * (2.0 * ell + 1.0);
    let (u1, u2) = (u / 2.0 + g / 2.0, u / 2.0 - g / 2.0);
    let l = l_operator(u, ell, &md, Variant::Standard).unwrap();
    let tau = md.tau;
    let f: ZFn = zfn(move |z| Ok(theta_bar(4, z, tau)? + 0.7 * theta_bar(3, z, tau)?));
    for &z in &halton_circle_points(4) {
        for i in 0..2 {
            for k in 0..2 {
                let direct = l.entry_apply(i, k, &f, z).unwrap();
                let fact = factorized_l_apply(i, k, u1, u2, &md, false, &f, z).unwrap();
                let scale = direct.norm().max(fact.norm()).max(1.0);
                assert!(
                    (direct - fact).norm() / scale < 1e-10,
                    "entry ({},{}) at z={}: {} vs {}",
                    i,
                    k,
                    z,
                    direct,
                    fact
                );
            }
        }
    }
}

#[test]
fn half_shifted_l_factorization_with_quarter_shifts() {
    let md = moduli();
    let ell = c(0.23, 0.1);
    let u = c(0.4, 0.2);
    let g = md.eta * (2.0 * ell + 1.0);
    let (u1, u2) = (u / 2.0 + g / 2.0, u / 2.0 - g / 2.0);
    let l = l_operator(u, ell, &md, Variant::HalfShifted).unwrap();
    let tau = md.tau;
    let f: ZFn = zfn(move |z| theta_bar(3, z, tau));
    for &z in &halton_circle_points(3) {
        for i in 0..2 {
            for k in 0..2 {
                let direct = l.entry_apply(i, k, &f, z).unwrap();
                let fact = factorized_l_apply(i, k, u1, u2, &md, true, &f, z).unwrap();
                let scale = direct.norm().max(fact.norm()).max(1.0);
                assert!((direct - fact).norm() / scale < 1e-10, "entry ({},{})", i, k);
            }
        }
    }
}

#[test]
fn l_operator_sign_flip_under_negation() {
    // Negating u and eta together flips the sign of L (Standard variant).
    let md = moduli();
    let md_neg = EllipticModuli::new(md.tau, -md.eta).unwrap();
    let ell = c(0.23, 0.1);
    let u = c(0.4, 0.2);
    let l = l_operator(u, ell, &md, Variant::Standard).unwrap();
    let l_neg = l_operator(-u, ell, &md_neg, Variant::Standard).unwrap();
    let tau = md.tau;
    let f: ZFn = zfn(move |z| theta_bar(4, z, tau));
    for &z in &halton_circle_points(3) {
        for i in 0..2 {
            for k in 0..2 {
                let a = l.entry_apply(i, k, &f, z).unwrap();
                let b = l_neg.entry_apply(i, k, &f, z).unwrap();
                let scale = a.norm().max(1.0);
                assert!((a + b).norm() / scale < 1e-10, "entry ({},{})", i, k);
            }
        }
    }
}

#[test]
fn spin_half_l_weights_match_baxter() {
    // On the theta basis at ell = 1/2, L is proportional to the Baxter
    // R-matrix: S^a = theta_1(2 eta) sigma_a turns sum w_a sigma_a (x) S^a
    // into theta_1(2 eta) R_baxter.
    let md = moduli();
    let u = c(0.29, 0.11);
    let l = l_operator(u, c(0.5, 0.0), &md, Variant::Standard).unwrap();
    let tau = md.tau;
    let e1: ZFn = zfn(move |z| theta_bar(4, z, tau));
    let e2: ZFn = zfn(move |z| theta_bar(3, z, tau));
    let r = baxter_r_matrix(u, md.eta, md.tau).unwrap();
    let scale = jacobi_theta(1, 2.0 * md.eta, md.tau).unwrap();
    // Compare the (i,k) 2x2 operator entry reduced in the theta basis with
    // the corresponding Baxter block.
    let (z_a, z_b) = (c(0.13, 0.0), c(0.31, 0.05));
    for i in 0..2 {
        for k in 0..2 {
            let op_mat = {
                let solve = |f: &ZFn| -> [Complex64; 2] {
                    let a = e1(z_a).unwrap();
                    let b = e2(z_a).unwrap();
                    let d = e1(z_b).unwrap();
                    let e = e2(z_b).unwrap();
                    let r1 = l.entry_apply(i, k, f, z_a).unwrap();
                    let r2 = l.entry_apply(i, k, f, z_b).unwrap();
                    let det = a * e - b * d;
                    [(r1 * e - b * r2) / det, (a * r2 - r1 * d) / det]
                };
                let c1 = solve(&e1);
                let c2 = solve(&e2);
                [[c1[0], c2[0]], [c1[1], c2[1]]]
            };
            for bi in 0..2 {
                for bj in 0..2 {
                    let expect = scale * r[2 * i + bi][2 * k + bj];
                    assert!(
                        (op_mat[bi][bj] - expect).norm() < 1e-9 * scale.norm().max(1.0),
                        "block ({},{}) entry ({},{})",
                        i,
                        k,
                        bi,
                        bj
                    );
                }
            }
        }
    }
}

#[test]
fn nm_product_identities() {
    let md = moduli();
    let tau = md.tau;
    let (a1, b1, a2, b2) = (c(0.21, 0.05), c(0.43, -0.1), c(0.11, 0.2), c(0.35, 0.07));
    let n = n_matrix(a1, b1, tau).unwrap();
    let m = m_matrix(a2, b2, tau).unwrap();
    let got = mat2_mul(&n, &m);
    let want = mn_product_nm(a1, b1, a2, b2, tau).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let scale = want[i][j].norm().max(1.0);
            assert!((got[i][j] - want[i][j]).norm() / scale < 1e-11, "NM entry ({},{})", i, j);
        }
    }
    // Entry (1,2) of NM is -2 theta_1(b1 - b2) theta_1(b1 + b2).
    let expect = -2.0
        * jacobi_theta(1, b1 - b2, tau).unwrap()
        * jacobi_theta(1, b1 + b2, tau).unwrap();
    assert!((got[0][1] - expect).norm() / expect.norm() < 1e-11);

    // N(a;b) M(a;b) = -2 theta_1(a-b) theta_1(a+b) Id.
    let n = n_matrix(a1, b1, tau).unwrap();
    let m = m_matrix(a1, b1, tau).unwrap();
    let got = mat2_mul(&n, &m);
    let diag = -2.0
        * jacobi_theta(1, a1 - b1, tau).unwrap()
        * jacobi_theta(1, a1 + b1, tau).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let want = if i == j { diag } else { c(0.0, 0.0) };
            assert!((got[i][j] - want).norm() < 1e-11 * diag.norm(), "NM1 entry ({},{})", i, j);
        }
    }
}

#[test]
fn nsm_product_identity() {
    let md = moduli();
    let tau = md.tau;
    let (a1, b1, a2, b2) = (c(0.18, -0.04), c(0.52, 0.12), c(0.07, 0.15), c(0.4, -0.02));
    let n = n_matrix(a1, b1, tau).unwrap();
    let m = m_matrix(a2, b2, tau).unwrap();
    let s3 = sigma(3);
    let got = mat2_mul(&mat2_mul(&n, &s3), &m);
    let want = mn_product_nsm(a1, b1, a2, b2, tau).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let scale = want[i][j].norm().max(1.0);
            assert!((got[i][j] - want[i][j]).norm() / scale < 1e-11, "NsM entry ({},{})", i, j);
        }
    }
    // Diagonal check at a1 = a2, b1 = b2 via the theta_4 duplication pattern.
    let n = n_matrix(a1, b1, tau).unwrap();
    let m = m_matrix(a1, b1, tau).unwrap();
    let got = mat2_mul(&mat2_mul(&n, &s3), &m);
    let want = mn_product_nsm(a1, b1, a1, b1, tau).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let scale = want[i][j].norm().max(1.0);
            assert!((got[i][j] - want[i][j]).norm() / scale < 1e-11);
        }
    }
}

#[test]
fn baxter_matrix_x_beta_invariance() {
    let md = moduli();
    let r = baxter_r_matrix(c(0.37, 0.11), md.eta, md.tau).unwrap();
    for beta in 1..4 {
        let conj = x_beta_conjugate(&r, beta);
        for i in 0..4 {
            for j in 0..4 {
                let scale = r[i][j].norm().max(1.0);
                assert!(
                    (conj[i][j] - r[i][j]).norm() / scale < 1e-12,
                    "X_{} conjugation entry ({},{})",
                    beta,
                    i,
                    j
                );
            }
        }
    }
}

#[test]
fn halton_points_avoid_theta1_zeros() {
    let pts = halton_circle_points(20);
    assert_eq!(pts.len(), 20);
    for z in pts {
        let frac2 = (2.0 * z.re).fract();
        assert!(frac2.min(1.0 - frac2) >= 1e-2);
    }
}
