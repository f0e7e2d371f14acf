//! The elliptic beta integral: quadrature of the six-gamma-factor integrand
//! over the unit circle against the closed product side, under the balancing
//! condition (the product of the six parameters is pq).

use num_complex::Complex64;

use super::{timed, CheckOutcome, DrawResult, SuiteConfig, Sampler};
use crate::error::{Error, Result};
use crate::operators::{inv_gamma_pm2, grid_points};
use crate::special_fn::{elliptic_gamma, EllipticModuli};

/// One balanced draw: five free parameters inside the annulus, the sixth
/// fixed by balancing; pole-pinched draws rejected.
pub(crate) fn balanced_draw(
    sampler: &mut Sampler,
    moduli: &EllipticModuli,
) -> Result<[Complex64; 6]> {
    let pq = moduli.p * moduli.kernel_q()?;
    // Center the free magnitudes so the balancing remainder lands in range.
    let target = (pq.norm() / 0.4).powf(0.2);
    for _ in 0..100 {
        let mut g = [Complex64::new(0.0, 0.0); 6];
        for gk in g.iter_mut().take(5) {
            *gk = sampler.complex_in_annulus(0.75 * target, 1.25 * target.min(0.7));
        }
        let prod: Complex64 = g.iter().take(5).product();
        g[5] = pq / prod;
        let m6 = g[5].norm();
        if !(0.1..=0.78).contains(&m6) {
            continue;
        }
        if g.iter().take(5).any(|gk| gk.norm() > 0.78) {
            continue;
        }
        return Ok(g);
    }
    Err(Error::SamplerExhausted(100))
}

/// LHS quadrature of the beta integrand.
pub(crate) fn beta_lhs(
    g: &[Complex64; 6],
    moduli: &EllipticModuli,
    n: usize,
) -> Result<Complex64> {
    let (p, q) = (moduli.p, moduli.kernel_q()?);
    let kappa = moduli.kappa()?;
    let mut sum = Complex64::new(0.0, 0.0);
    for y in grid_points(n) {
        let inv = inv_gamma_pm2(y, p, q)?;
        if inv.norm() == 0.0 {
            continue;
        }
        let mut val = inv;
        for gk in g {
            val *= elliptic_gamma(gk * y, p, q)? * elliptic_gamma(gk / y, p, q)?;
        }
        sum += val;
    }
    Ok(kappa * sum / n as f64)
}

/// RHS closed form: the product of gammas over parameter pairs.
pub(crate) fn beta_rhs(g: &[Complex64; 6], moduli: &EllipticModuli) -> Result<Complex64> {
    let (p, q) = (moduli.p, moduli.kernel_q()?);
    let mut prod = Complex64::new(1.0, 0.0);
    for j in 0..6 {
        for k in (j + 1)..6 {
            prod *= elliptic_gamma(g[j] * g[k], p, q)?;
        }
    }
    Ok(prod)
}

pub fn check_beta_integral(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let tol = cfg.tol(1e-8);
    let n = cfg.grid_n;
    let draws = cfg.draw_count(25);
    let mut sampler = Sampler::new(cfg.seed, 0xBE7A);
    let ((results, control), runtime_ms) = timed(|| {
        let mut results = Vec::with_capacity(draws);
        for _ in 0..draws {
            let moduli = sampler.moduli(cfg.regime, cfg.p_range, cfg.q_range)?;
            let g = balanced_draw(&mut sampler, &moduli)?;
            let lhs = beta_lhs(&g, &moduli, n)?;
            let rhs = beta_rhs(&g, &moduli)?;
            let residual = (lhs - rhs).norm() / rhs.norm();
            results.push(DrawResult {
                residual,
                params: format!(
                    "|p|={:.3},|q|={:.3},|g|=[{:.2},{:.2},{:.2},{:.2},{:.2},{:.2}]",
                    moduli.p.norm(),
                    moduli.q.norm(),
                    g[0].norm(),
                    g[1].norm(),
                    g[2].norm(),
                    g[3].norm(),
                    g[4].norm(),
                    g[5].norm()
                ),
            });
        }
        // Negative control: push g6 off balance by 1e-2 additively.
        let moduli = sampler.moduli(cfg.regime, cfg.p_range, cfg.q_range)?;
        let mut g = balanced_draw(&mut sampler, &moduli)?;
        g[5] *= crate::special_fn::cis2pi(Complex64::new(0.01, 0.0));
        let lhs = beta_lhs(&g, &moduli, n)?;
        let rhs = beta_rhs(&g, &moduli)?;
        let control = (lhs - rhs).norm() / rhs.norm();
        Ok((results, control))
    })?;
    Ok(CheckOutcome {
        identity_id: "ell_beta".into(),
        anchor: "Eq. (ell_beta)".into(),
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
    use crate::special_fn::Regime;

    #[test]
    fn symmetric_draw_matches_product_side() {
        // All six parameters equal to (pq)^{1/6}.
        let moduli = EllipticModuli::from_bases(
            Complex64::new(0.3, 0.0),
            Complex64::new(0.3, 0.0),
        )
        .unwrap();
        let g0 = (moduli.p * moduli.q).powf(1.0 / 6.0);
        let g = [g0; 6];
        let lhs = beta_lhs(&g, &moduli, 128).unwrap();
        let rhs = beta_rhs(&g, &moduli).unwrap();
        assert!((lhs - rhs).norm() / rhs.norm() < 1e-8);
    }

    #[test]
    fn p_q_swap_preserves_product_side() {
        let m1 = EllipticModuli::from_bases(Complex64::new(0.25, 0.0), Complex64::new(0.35, 0.0)).unwrap();
        let m2 = EllipticModuli::from_bases(Complex64::new(0.35, 0.0), Complex64::new(0.25, 0.0)).unwrap();
        let g0 = (m1.p * m1.q).powf(1.0 / 6.0);
        let g = [g0; 6];
        let a = beta_rhs(&g, &m1).unwrap();
        let b = beta_rhs(&g, &m2).unwrap();
        assert!((a - b).norm() / a.norm() < 1e-12);
    }

    #[test]
    fn suite_runs_and_passes() {
        let cfg = SuiteConfig { draws: Some(4), ..Default::default() };
        let out = check_beta_integral(&cfg).unwrap();
        assert!(out.passed(), "max residual {}", out.max_residual());
        out.assert_control().unwrap();
    }

    #[test]
    fn suite_runs_in_q_greater_regime() {
        let cfg = SuiteConfig {
            draws: Some(3),
            regime: Regime::QGreater1,
            ..Default::default()
        };
        let out = check_beta_integral(&cfg).unwrap();
        assert!(out.passed(), "max residual {}", out.max_residual());
    }
}
