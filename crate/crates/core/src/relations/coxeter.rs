//! The cubic Coxeter / star-triangle relations: the pointwise kernel
//! identity, the operator form on grids, and the functional (Boltzmann
//! weight) form with the crossing parameter.

use num_complex::Complex64;

use super::{rel_sup_residual, timed, CheckOutcome, DrawResult, SuiteConfig, Sampler};
use crate::error::{Error, Result};
use crate::operators::{
    grid_points, inv_gamma_pm2, s1_axis_matrix, s2_value, OperatorParams, Role, TorusGrid,
};
use crate::special_fn::{cis2pi, elliptic_gamma, gamma_prod, EllipticModuli};

/// Draw kernel parameters with every beta-integral factor inside radius 0.78
/// (the pole-separation margins that make plain unit-circle quadrature
/// spectrally accurate).
fn coxeter_draw(sampler: &mut Sampler, cfg: &SuiteConfig) -> Result<(EllipticModuli, Complex64, Complex64)> {
    for _ in 0..100 {
        let moduli = sampler.moduli(cfg.regime, (cfg.p_range.0, cfg.p_range.1.min(0.2)), (cfg.q_range.0, cfg.q_range.1.min(0.2)))?;
        let sqrt_pq = (moduli.p * moduli.kernel_q()?).sqrt();
        let t_a = sampler.complex_in_annulus(0.35, 0.7);
        let t_b = sampler.complex_in_annulus(0.35, 0.7);
        // D-factors: sqrt(pq) e^{2 pi i a} = sqrt(pq)/t_a, etc.
        let d_a = sqrt_pq.norm() / t_a.norm();
        let d_b = sqrt_pq.norm() / t_b.norm();
        let d_ab = sqrt_pq.norm() / (t_a.norm() * t_b.norm());
        if d_a <= 0.75 && d_b <= 0.75 && d_ab <= 0.75 {
            return Ok((moduli, t_a, t_b));
        }
    }
    Err(Error::SamplerExhausted(100))
}

/// W-kernel value kappa Gamma(t z1^{+-} y^{+-}) / (Gamma(t^2) Gamma(y^{+-2})),
/// the measure factor sitting with the integration variable.
fn w_kernel(
    t: Complex64,
    z1: Complex64,
    y: Complex64,
    moduli: &EllipticModuli,
) -> Result<Complex64> {
    let (p, q) = (moduli.p, moduli.kernel_q()?);
    let inv = inv_gamma_pm2(y, p, q)?;
    if inv.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let kappa = moduli.kappa()?;
    Ok(kappa
        * gamma_prod(&[t * z1 * y, t * z1 / y, t * y / z1, t / (z1 * y)], p, q)?
        * inv
        / elliptic_gamma(t * t, p, q)?)
}

/// D-multiplier Gamma(sqrt{pq} e^{2 pi i a} z1^{+-} z2^{+-}) written via the
/// kernel parameter t = e^{-2 pi i a}.
fn d_mult(t: Complex64, z1: Complex64, z2: Complex64, moduli: &EllipticModuli) -> Result<Complex64> {
    let (p, q) = (moduli.p, moduli.kernel_q()?);
    let c = (p * q).sqrt() / t;
    gamma_prod(&[c * z1 * z2, c * z1 / z2, c * z2 / z1, c / (z1 * z2)], p, q)
}

pub fn check_coxeter_cubic(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let tol = cfg.tol(1e-7);
    let n = cfg.grid_n;
    let draws = cfg.draw_count(10);
    let mut sampler = Sampler::new(cfg.seed, 0xC0CE);
    let ((results, control), runtime_ms) = timed(|| {
        let mut results = Vec::with_capacity(draws);
        for _ in 0..draws {
            let (moduli, t_a, t_b) = coxeter_draw(&mut sampler, cfg)?;
            // Pointwise kernel identity at sampled (z1, z2, x) triples:
            // int W_a(z1,y) D_{a+b}(y,z2) W_b(y,x) dy
            //   = D_b(z1,z2) W_{a+b}(z1,x) D_a(x,z2).
            let mut pairs = Vec::new();
            for _ in 0..20 {
                let z1 = sampler.circle_point();
                let z2 = sampler.circle_point();
                let x = sampler.circle_point();
                let mut lhs = Complex64::new(0.0, 0.0);
                for y in grid_points(n) {
                    let wa = w_kernel(t_a, z1, y, &moduli)?;
                    if wa.norm() == 0.0 {
                        continue;
                    }
                    // W_b(y, x) has its measure factor on x, not y.
                    let (p, q) = (moduli.p, moduli.kernel_q()?);
                    let wb = moduli.kappa()?
                        * gamma_prod(&[t_b * x * y, t_b * x / y, t_b * y / x, t_b / (x * y)], p, q)?
                        * inv_gamma_pm2(x, p, q)?
                        / elliptic_gamma(t_b * t_b, p, q)?;
                    lhs += wa * d_mult(t_a * t_b, y, z2, &moduli)? * wb;
                }
                lhs /= n as f64;
                let rhs = d_mult(t_b, z1, z2, &moduli)?
                    * w_kernel(t_a * t_b, z1, x, &moduli)?
                    * d_mult(t_a, x, z2, &moduli)?;
                pairs.push((lhs, rhs));
            }
            let kernel_res = rel_sup_residual(&pairs);

            // Operator form on a two-variable grid.
            let op_res = operator_form_residual(&moduli, t_a, t_b, n.min(64))?;
            results.push(DrawResult {
                residual: kernel_res.max(op_res),
                params: format!("|ta|={:.3},|tb|={:.3},|p|={:.3},|q|={:.3}", t_a.norm(), t_b.norm(), moduli.p.norm(), moduli.q.norm()),
            });
        }
        // Negative control: wrong middle argument (t_a instead of t_a t_b).
        let (moduli, t_a, t_b) = coxeter_draw(&mut sampler, cfg)?;
        let z1 = sampler.circle_point();
        let z2 = sampler.circle_point();
        let x = sampler.circle_point();
        let mut lhs = Complex64::new(0.0, 0.0);
        for y in grid_points(n) {
            let wa = w_kernel(t_a, z1, y, &moduli)?;
            if wa.norm() == 0.0 {
                continue;
            }
            let (p, q) = (moduli.p, moduli.kernel_q()?);
            let wb = moduli.kappa()?
                * gamma_prod(&[t_b * x * y, t_b * x / y, t_b * y / x, t_b / (x * y)], p, q)?
                * inv_gamma_pm2(x, p, q)?
                / elliptic_gamma(t_b * t_b, p, q)?;
            lhs += wa * d_mult(t_a, y, z2, &moduli)? * wb; // wrong: t_a, not t_a t_b
        }
        lhs /= n as f64;
        let rhs = d_mult(t_b, z1, z2, &moduli)?
            * w_kernel(t_a * t_b, z1, x, &moduli)?
            * d_mult(t_a, x, z2, &moduli)?;
        let control = (lhs - rhs).norm() / rhs.norm().max(1.0);
        Ok((results, control))
    })?;
    Ok(CheckOutcome {
        identity_id: "coxeter_cubic".into(),
        anchor: "Eq. (int1) / Eq. (121)".into(),
        seed: cfg.seed,
        tolerance: tol,
        n_used: n,
        draws: results,
        control_residual: control,
        control_floor: 1e-3,
        runtime_ms,
    })
}

/// Grid check of S1(a) S2(a+b) S1(b) f = S2(b) S1(a+b) S2(a) f.
fn operator_form_residual(
    moduli: &EllipticModuli,
    t_a: Complex64,
    t_b: Complex64,
    n: usize,
) -> Result<f64> {
    let f = TorusGrid::from_fn(2, n, |p| Ok((p[0] + 1.0 / p[0]) * (p[1] + 1.0 / p[1]) + 1.0))?;
    let s1 = |t: Complex64| OperatorParams::from_t(Role::S1, t, *moduli);
    let s2 = |t: Complex64| OperatorParams::from_t(Role::S2, t, *moduli);
    let s2_table = |params: &OperatorParams| -> Result<Vec<Complex64>> {
        let pts = grid_points(n);
        let mut d = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                d[i * n + j] = s2_value(params, pts[i], pts[j])?;
            }
        }
        Ok(d)
    };
    // LHS: S1(a) S2(a+b) S1(b), rightmost first; integrals act on axis 0.
    let mut lhs = f.apply_axis_matrix(0, &s1_axis_matrix(&s1(t_b)?, n)?)?;
    lhs = lhs.apply_pair_diag(0, 1, &s2_table(&s2(t_a * t_b)?)?)?;
    lhs = lhs.apply_axis_matrix(0, &s1_axis_matrix(&s1(t_a)?, n)?)?;
    // RHS: S2(b) S1(a+b) S2(a).
    let mut rhs = f.apply_pair_diag(0, 1, &s2_table(&s2(t_a)?)?)?;
    rhs = rhs.apply_axis_matrix(0, &s1_axis_matrix(&s1(t_a * t_b)?, n)?)?;
    rhs = rhs.apply_pair_diag(0, 1, &s2_table(&s2(t_b)?)?)?;
    Ok(lhs.sup_distance(&rhs) / rhs.sup_norm().max(1.0))
}

/// The functional star-triangle relation: the rho-weighted integral of three
/// Boltzmann weights against the chi-normalized product of three weights.
pub fn check_star_triangle_functional(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let tol = cfg.tol(1e-8);
    let n = cfg.grid_n;
    let draws = cfg.draw_count(10);
    let mut sampler = Sampler::new(cfg.seed, 0x57A7);
    let ((results, control), runtime_ms) = timed(|| {
        let run_draw = |sampler: &mut Sampler, break_crossing: bool| -> Result<(f64, String)> {
            let (moduli, t_a, t_b) = coxeter_draw(sampler, cfg)?;
            let (p, q) = (moduli.p, moduli.kernel_q()?);
            // Crossing parameter: e^{-4 pi i xi} = pq; weight argument
            // e^{2 pi i (c - xi)} realized through sqrt(pq)-prefactors.
            // Crossing branch e^{-2 pi i xi} = +sqrt(pq); the control breaks it.
            let mut root = (p * q).sqrt();
            if break_crossing {
                root *= cis2pi(Complex64::new(0.01, 0.0));
            }
            let ea = 1.0 / t_a; // e^{2 pi i a}
            let eb = 1.0 / t_b;
            let x = sampler.circle_point();
            let yv = sampler.circle_point();
            let w = sampler.circle_point();
            let dfac = |c: Complex64, a: Complex64, b: Complex64| -> Result<Complex64> {
                gamma_prod(&[c * a * b, c * a / b, c * b / a, c / (a * b)], p, q)
            };
            // LHS: int rho(u) D_{xi-a}(x,u) D_{a+b}(y,u) D_{xi-b}(w,u) du
            // with D_{xi-a} = Gamma(t_a X U), D_{a+b} = Gamma(root ea eb Y U).
            let mut lhs = Complex64::new(0.0, 0.0);
            for u in grid_points(n) {
                let inv = inv_gamma_pm2(u, p, q)?;
                if inv.norm() == 0.0 {
                    continue;
                }
                lhs += moduli.kappa()?
                    * inv
                    * dfac(t_a, x, u)?
                    * dfac(root * ea * eb, yv, u)?
                    * dfac(t_b, w, u)?;
            }
            lhs /= n as f64;
            // chi = Gamma(e^{-4 pi i a}, e^{-4 pi i b}, e^{4 pi i (a+b-xi)}).
            let chi = elliptic_gamma(t_a * t_a, p, q)?
                * elliptic_gamma(t_b * t_b, p, q)?
                * elliptic_gamma((ea * eb).powi(2) * root * root, p, q)?;
            let rhs = chi
                * dfac(root * eb, x, yv)?
                * dfac(t_a * t_b, x, w)?
                * dfac(root * ea, yv, w)?;
            let residual = (lhs - rhs).norm() / rhs.norm().max(1.0);
            Ok((
                residual,
                format!("|ta|={:.3},|tb|={:.3},|p|={:.3}", t_a.norm(), t_b.norm(), moduli.p.norm()),
            ))
        };
        let mut results = Vec::with_capacity(draws);
        for _ in 0..draws {
            let (residual, params) = run_draw(&mut sampler, false)?;
            results.push(DrawResult { residual, params });
        }
        let (control, _) = run_draw(&mut sampler, true)?;
        Ok((results, control))
    })?;
    Ok(CheckOutcome {
        identity_id: "star_triangle_functional".into(),
        anchor: "Eq. (astr) / Eq. (weight)".into(),
        seed: cfg.seed,
        tolerance: tol,
        n_used: n,
        draws: results,
        control_residual: control,
        control_floor: 1e-3,
        runtime_ms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_relation_passes() {
        let cfg = SuiteConfig { draws: Some(2), grid_n: 128, ..Default::default() };
        let out = check_coxeter_cubic(&cfg).unwrap();
        assert!(out.passed(), "max residual {}", out.max_residual());
        out.assert_control().unwrap();
    }

    #[test]
    fn functional_star_triangle_passes() {
        let cfg = SuiteConfig { draws: Some(3), grid_n: 128, ..Default::default() };
        let out = check_star_triangle_functional(&cfg).unwrap();
        assert!(out.passed(), "max residual {}", out.max_residual());
        out.assert_control().unwrap();
    }
}
