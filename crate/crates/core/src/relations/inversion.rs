//! The inversion relation: the double contour integral with the inner
//! deformed contour (enclosing the t^{-1} w^{+-1} poles) reconstructs the
//! input function.

use num_complex::Complex64;

use super::{timed, CheckOutcome, DrawResult, SuiteConfig, Sampler};
use crate::error::Result;
use crate::operators::{grid_points, s1_apply_corrected, s1_kernel_value, OperatorParams, Role, YFn};
use crate::contour::PoleList;

/// A random symmetric Laurent polynomial of degree <= 4.
fn symmetric_poly(sampler: &mut Sampler) -> (YFn, String) {
    let coeffs: Vec<Complex64> = (0..=4)
        .map(|_| Complex64::new(sampler.uniform(-1.0, 1.0), sampler.uniform(-1.0, 1.0)))
        .collect();
    let desc = format!("deg4 c0={:.2}{:+.2}i", coeffs[0].re, coeffs[0].im);
    let c = coeffs.clone();
    let f: YFn = std::sync::Arc::new(move |y: Complex64| {
        let mut acc = c[0];
        for (k, ck) in c.iter().enumerate().skip(1) {
            acc += *ck * (y.powi(k as i32) + y.powi(-(k as i32)));
        }
        Ok(acc)
    });
    (f, desc)
}

/// One inversion draw: |t|^2 in (max{|p|,|q|}, 1) for the standard regime or
/// |t| in (max{|p|,|q|}, |t|^2 < max) for the weaker one.
fn inversion_residual(
    sampler: &mut Sampler,
    cfg: &SuiteConfig,
    weaker: bool,
) -> Result<(f64, String)> {
    let moduli = sampler.moduli(cfg.regime, (cfg.p_range.0, cfg.p_range.1.min(0.3)), (cfg.q_range.0, cfg.q_range.1.min(0.3)))?;
    let kq = moduli.kernel_q()?;
    let maxbase = moduli.p.norm().max(kq.norm());
    let t_mag = if weaker {
        // max{|p|,|q|} < |t| but |t|^2 < max: extra poles enter the annulus.
        let lo = maxbase * 1.05;
        let hi = (maxbase.sqrt() * 0.97).max(lo * 1.01);
        sampler.uniform(lo, hi.min(lo * 1.4))
    } else {
        sampler.uniform((maxbase * 1.25).sqrt(), 0.805)
    };
    let t = Complex64::from_polar(t_mag, sampler.uniform(0.0, 2.0 * std::f64::consts::PI));
    let outer = OperatorParams::from_t(Role::S1, t, moduli)?;
    let inner = OperatorParams::from_t(Role::S1, 1.0 / t, moduli)?;
    outer.check_exceptional()?;
    inner.check_exceptional()?;

    let (f, desc) = symmetric_poly(sampler);
    let n = cfg.grid_n;
    // Inner pass: F(w) = [S1(-a) f](w) on the grid, contour corrected for the
    // t^{-1} w^{+-1} poles outside the circle.
    let pts = grid_points(n);
    let mut inner_vals = vec![Complex64::new(0.0, 0.0); n];
    for (i, &w) in pts.iter().enumerate() {
        if i == 0 || i == n / 2 {
            continue; // outer kernel vanishes at w = +-1
        }
        inner_vals[i] = s1_apply_corrected(&inner, &f, &PoleList::default(), w, n)?;
    }
    // Outer pass and reconstruction at sample points.
    let mut worst = 0.0f64;
    let mut scale = 1.0f64;
    for _ in 0..10 {
        let x = sampler.circle_point();
        let mut sum = Complex64::new(0.0, 0.0);
        for (j, &w) in pts.iter().enumerate() {
            let kv = s1_kernel_value(&outer, x, w)?;
            if kv.norm() == 0.0 {
                continue;
            }
            sum += kv * inner_vals[j];
        }
        let recon = sum / n as f64;
        let expect = f(x)?;
        scale = scale.max(expect.norm());
        worst = worst.max((recon - expect).norm());
    }
    Ok((worst / scale, format!("{} |t|={:.3} weaker={}", desc, t_mag, weaker)))
}

pub fn check_inversion(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let tol = cfg.tol(1e-7);
    let strong = cfg.draw_count(10);
    let weak = (strong / 2).max(1);
    let mut sampler = Sampler::new(cfg.seed, 0x19AE);
    let ((results, control), runtime_ms) = timed(|| {
        let mut results = Vec::with_capacity(strong + weak);
        for _ in 0..strong {
            let (residual, params) = inversion_residual(&mut sampler, cfg, false)?;
            results.push(DrawResult { residual, params });
        }
        for _ in 0..weak {
            let (residual, params) = inversion_residual(&mut sampler, cfg, true)?;
            results.push(DrawResult { residual, params });
        }
        // Negative control: drop the contour corrections on the inner pass.
        let moduli = sampler.moduli(cfg.regime, (0.05, 0.3), (0.05, 0.3))?;
        let kq = moduli.kernel_q()?;
        let maxbase = moduli.p.norm().max(kq.norm());
        let t = Complex64::from_polar(
            sampler.uniform((maxbase * 1.3).sqrt(), 0.8),
            sampler.uniform(0.0, 2.0 * std::f64::consts::PI),
        );
        let outer = OperatorParams::from_t(Role::S1, t, moduli)?;
        let inner = OperatorParams::from_t(Role::S1, 1.0 / t, moduli)?;
        let (f, _) = symmetric_poly(&mut sampler);
        let n = cfg.grid_n;
        let pts = grid_points(n);
        let mut inner_vals = vec![Complex64::new(0.0, 0.0); n];
        for (i, &w) in pts.iter().enumerate() {
            if i == 0 || i == n / 2 {
                continue;
            }
            // Plain quadrature: misses the residue corrections entirely.
            let mut sum = Complex64::new(0.0, 0.0);
            for &y in &pts {
                let kv = s1_kernel_value(&inner, w, y)?;
                if kv.norm() == 0.0 {
                    continue;
                }
                sum += kv * f(y)?;
            }
            inner_vals[i] = sum / n as f64;
        }
        let x = sampler.circle_point();
        let mut sum = Complex64::new(0.0, 0.0);
        for (j, &w) in pts.iter().enumerate() {
            let kv = s1_kernel_value(&outer, x, w)?;
            sum += kv * inner_vals[j];
        }
        let recon = sum / n as f64;
        let expect = f(x)?;
        let control = (recon - expect).norm() / expect.norm().max(1.0);
        Ok((results, control))
    })?;
    Ok(CheckOutcome {
        identity_id: "inversion".into(),
        anchor: "Eq. (inversion)".into(),
        seed: cfg.seed,
        tolerance: tol,
        n_used: cfg.grid_n,
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
    fn constant_function_is_reproduced() {
        let mut sampler = Sampler::new(7, 1);
        let moduli = sampler.moduli(crate::special_fn::Regime::QLess1, (0.15, 0.25), (0.15, 0.25)).unwrap();
        let t = Complex64::from_polar(0.707, 0.9);
        let outer = OperatorParams::from_t(Role::S1, t, moduli).unwrap();
        let inner = OperatorParams::from_t(Role::S1, 1.0 / t, moduli).unwrap();
        let f: YFn = std::sync::Arc::new(|_| Ok(Complex64::new(1.0, 0.0)));
        let n = 128;
        let pts = grid_points(n);
        let mut inner_vals = vec![Complex64::new(0.0, 0.0); n];
        for (i, &w) in pts.iter().enumerate() {
            if i == 0 || i == n / 2 {
                continue;
            }
            inner_vals[i] = s1_apply_corrected(&inner, &f, &PoleList::default(), w, n).unwrap();
        }
        let x = Complex64::from_polar(1.0, 0.63);
        let mut sum = Complex64::new(0.0, 0.0);
        for (j, &w) in pts.iter().enumerate() {
            let kv = s1_kernel_value(&outer, x, w).unwrap();
            sum += kv * inner_vals[j];
        }
        let recon = sum / n as f64;
        assert!((recon - 1.0).norm() < 1e-7, "got {}", recon);
    }

    #[test]
    fn quadratic_harmonic_reconstructed_at_spec_point() {
        // f = y^2 + y^{-2} at |t|^2 = 0.5, p = q = 0.2.
        let moduli = crate::special_fn::EllipticModuli::from_bases(
            Complex64::new(0.2, 0.0),
            Complex64::new(0.2, 0.0),
        )
        .unwrap();
        let t = Complex64::from_polar(0.5f64.sqrt(), 0.37);
        let outer = OperatorParams::from_t(Role::S1, t, moduli).unwrap();
        let inner = OperatorParams::from_t(Role::S1, 1.0 / t, moduli).unwrap();
        let f: YFn = std::sync::Arc::new(|y: Complex64| Ok(y.powi(2) + y.powi(-2)));
        let n = 128;
        let pts = grid_points(n);
        let mut inner_vals = vec![Complex64::new(0.0, 0.0); n];
        for (i, &w) in pts.iter().enumerate() {
            if i == 0 || i == n / 2 {
                continue;
            }
            inner_vals[i] = s1_apply_corrected(&inner, &f, &PoleList::default(), w, n).unwrap();
        }
        for phase in [0.41, 1.23, 2.6] {
            let x = Complex64::from_polar(1.0, phase);
            let mut sum = Complex64::new(0.0, 0.0);
            for (j, &w) in pts.iter().enumerate() {
                let kv = s1_kernel_value(&outer, x, w).unwrap();
                sum += kv * inner_vals[j];
            }
            let recon = sum / n as f64;
            let expect = f(x).unwrap();
            assert!(
                (recon - expect).norm() / expect.norm() < 1e-7,
                "phase {}: {} vs {}",
                phase,
                recon,
                expect
            );
        }
    }

    #[test]
    fn suite_passes() {
        let cfg = SuiteConfig { draws: Some(2), ..Default::default() };
        let out = check_inversion(&cfg).unwrap();
        assert!(out.passed(), "max residual {}", out.max_residual());
        out.assert_control().unwrap();
    }
}
