use num_complex::Complex64;

use super::gamma::elliptic_gamma;
use super::moduli::QuasiPeriods;
use super::theta::{jacobi_theta, qpochhammer_inf, theta_mult};
use super::cis2pi;
use crate::error::{Error, Result};

/// Third-order Bernoulli polynomial
/// B_{3,3}(u;w) = (u - S/2)((u - S/2)^2 - (w1^2+w2^2+w3^2)/4) / (w1 w2 w3),
/// S = w1 + w2 + w3. Symmetric in the quasi-periods.
pub fn bernoulli_b33(u: Complex64, omega: [Complex64; 3]) -> Result<Complex64> {
    let [w1, w2, w3] = omega;
    if w1.norm() == 0.0 || w2.norm() == 0.0 || w3.norm() == 0.0 {
        return Err(Error::domain("zero quasi-period in B_{3,3}"));
    }
    let shift = u - (w1 + w2 + w3) / 2.0;
    let sq = (w1 * w1 + w2 * w2 + w3 * w3) / 4.0;
    Ok(shift * (shift * shift - sq) / (w1 * w2 * w3))
}

/// Second-order Bernoulli polynomial
/// B_{2,2}(u;w1,w2) = u^2/(w1 w2) - u/w1 - u/w2 + w1/(6 w2) + w2/(6 w1) + 1/2.
pub fn bernoulli_b22(u: Complex64, w1: Complex64, w2: Complex64) -> Result<Complex64> {
    if w1.norm() == 0.0 || w2.norm() == 0.0 {
        return Err(Error::domain("zero quasi-period in B_{2,2}"));
    }
    Ok(u * u / (w1 * w2) - u / w1 - u / w2 + w1 / (6.0 * w2) + w2 / (6.0 * w1)
        + Complex64::new(0.5, 0.0))
}

/// Which representation of the modified elliptic gamma function to evaluate.
/// The two agree on the overlap of their domains; ModularForm stays defined
/// down to |q| = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaGVariant {
    ProductForm,
    ModularForm,
}

/// The modified elliptic gamma function G(u;w).
///
/// ProductForm:  G = Gamma(e^{2 pi i u/w2}; p, q) Gamma(r e^{-2 pi i u/w1}; q~, r)
/// ModularForm:  G = e^{-pi i/3 B_{3,3}(u;w)} Gamma(e^{-2 pi i u/w3}; r~, p~)
pub fn modified_gamma_g(u: Complex64, qp: &QuasiPeriods, variant: GammaGVariant) -> Result<Complex64> {
    let [w1, w2, w3] = qp.omega;
    match variant {
        GammaGVariant::ProductForm => {
            for (name, b) in [("p", qp.p), ("q", qp.q), ("r", qp.r), ("q~", qp.q_t)] {
                if b.norm() >= 1.0 {
                    return Err(Error::domain(format!(
                        "ProductForm needs |{}| < 1 (got {})",
                        name,
                        b.norm()
                    )));
                }
            }
            let g1 = elliptic_gamma(cis2pi(u / w2), qp.p, qp.q)?;
            let g2 = elliptic_gamma(qp.r * cis2pi(-u / w1), qp.q_t, qp.r)?;
            Ok(g1 * g2)
        }
        GammaGVariant::ModularForm => {
            for (name, b) in [("r~", qp.r_t), ("p~", qp.p_t)] {
                if b.norm() >= 1.0 {
                    return Err(Error::domain(format!(
                        "ModularForm needs |{}| < 1 (got {})",
                        name,
                        b.norm()
                    )));
                }
            }
            let i_pi = Complex64::new(0.0, std::f64::consts::PI);
            let pref = (-i_pi / 3.0 * bernoulli_b33(u, [w1, w2, w3])?).exp();
            Ok(pref * elliptic_gamma(cis2pi(-u / w3), qp.r_t, qp.p_t)?)
        }
    }
}

/// Relative residual of the modular transformation law
/// theta(e^{-2 pi i u/w1}; e^{-2 pi i w2/w1})
///   = e^{pi i B_{2,2}(u;w)} theta(e^{2 pi i u/w2}; e^{2 pi i w1/w2}).
pub fn theta_modular_residual(u: Complex64, w1: Complex64, w2: Complex64) -> Result<f64> {
    let lhs = theta_mult(cis2pi(-u / w1), cis2pi(-w2 / w1))?;
    let i_pi = Complex64::new(0.0, std::f64::consts::PI);
    let rhs = (i_pi * bernoulli_b22(u, w1, w2)?).exp() * theta_mult(cis2pi(u / w2), cis2pi(w1 / w2))?;
    Ok((lhs - rhs).norm() / rhs.norm())
}

/// Relative residual of the duplication formula
/// theta_1(2x|2 tau) = ((-p;p)_inf / (p;p)_inf) theta_1(x|tau) theta_2(x|tau).
pub fn theta_duplication_residual(x: Complex64, tau: Complex64) -> Result<f64> {
    let p = cis2pi(tau);
    let lhs = jacobi_theta(1, 2.0 * x, 2.0 * tau)?;
    let ratio = qpochhammer_inf(-p, p)? / qpochhammer_inf(p, p)?;
    let rhs = ratio * jacobi_theta(1, x, tau)? * jacobi_theta(2, x, tau)?;
    Ok((lhs - rhs).norm() / rhs.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Quasi-periods with every base variable inside the unit disk, so both
    /// G-representations are defined.
    fn sample_omegas() -> QuasiPeriods {
        let phi = std::f64::consts::PI / 5.0;
        let w1 = c(phi.cos(), phi.sin());
        QuasiPeriods::new([w1, c(1.0, 0.0), c(0.4, 0.9)]).unwrap()
    }

    #[test]
    fn b33_vanishes_at_half_period_sum() {
        let omega = [c(1.0, 0.2), c(0.5, 0.9), c(-0.3, 1.1)];
        let u = (omega[0] + omega[1] + omega[2]) / 2.0;
        assert!(bernoulli_b33(u, omega).unwrap().norm() < 1e-15);
    }

    #[test]
    fn b33_symmetric_under_permutations() {
        let omega = [c(1.0, 0.2), c(0.5, 0.9), c(-0.3, 1.1)];
        let u = c(0.37, -0.21);
        let a = bernoulli_b33(u, omega).unwrap();
        for perm in [[1usize, 0, 2], [2, 1, 0], [1, 2, 0]] {
            let w = [omega[perm[0]], omega[perm[1]], omega[perm[2]]];
            let b = bernoulli_b33(u, w).unwrap();
            assert!((a - b).norm() < 1e-14 * a.norm().max(1.0));
        }
    }

    #[test]
    fn b22_at_zero() {
        let w1 = c(1.0, 0.0);
        let w2 = c(0.6, 0.8);
        let v = bernoulli_b22(c(0.0, 0.0), w1, w2).unwrap();
        let expect = w1 / (6.0 * w2) + w2 / (6.0 * w1) + 0.5;
        assert!((v - expect).norm() < 1e-15);
    }

    #[test]
    fn g_normalization_at_half_sum() {
        let qp = sample_omegas();
        let u = qp.omega_sum() / 2.0;
        for variant in [GammaGVariant::ProductForm, GammaGVariant::ModularForm] {
            let v = modified_gamma_g(u, &qp, variant).unwrap();
            assert!(
                (v - c(1.0, 0.0)).norm() < 1e-10,
                "{:?} normalization off: {}",
                variant,
                v
            );
        }
    }

    #[test]
    fn g_reflection() {
        let qp = sample_omegas();
        let a = c(0.21, 0.17);
        let b = qp.omega_sum() - a;
        let v = modified_gamma_g(a, &qp, GammaGVariant::ProductForm).unwrap()
            * modified_gamma_g(b, &qp, GammaGVariant::ProductForm).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn g_product_and_modular_forms_agree() {
        // The modular representation is the oracle for the product form.
        let qp = sample_omegas();
        let u = c(0.3, 0.2);
        let a = modified_gamma_g(u, &qp, GammaGVariant::ProductForm).unwrap();
        let b = modified_gamma_g(u, &qp, GammaGVariant::ModularForm).unwrap();
        assert!((a - b).norm() / b.norm() < 1e-9, "{} vs {}", a, b);
    }

    #[test]
    fn g_shift_equations() {
        let qp = sample_omegas();
        let [w1, w2, w3] = qp.omega;
        let u = c(0.23, 0.11);
        let g = |x| modified_gamma_g(x, &qp, GammaGVariant::ProductForm).unwrap();
        let r1 = (g(u + w1) - theta_mult(cis2pi(u / w2), qp.p).unwrap() * g(u)).norm() / g(u + w1).norm();
        let r2 = (g(u + w2) - theta_mult(cis2pi(u / w1), qp.r).unwrap() * g(u)).norm() / g(u + w2).norm();
        let i_pi = Complex64::new(0.0, std::f64::consts::PI);
        let b22 = bernoulli_b22(u, w1, w2).unwrap();
        let r3 = (g(u + w3) - (-i_pi * b22).exp() * g(u)).norm() / g(u + w3).norm();
        assert!(r1 < 1e-9, "w1 shift residual {}", r1);
        assert!(r2 < 1e-9, "w2 shift residual {}", r2);
        assert!(r3 < 1e-9, "w3 shift residual {}", r3);
    }

    #[test]
    fn modular_law_residual_small() {
        // Orientation with both theta bases inside the unit disk.
        let w1 = c(0.6, 0.8);
        let w2 = c(1.0, 0.0);
        let r = theta_modular_residual(c(0.2, 0.1), w1, w2).unwrap();
        assert!(r < 1e-10, "residual {}", r);
        let u = (w1 + w2) / 2.0;
        let r = theta_modular_residual(u, w1, w2).unwrap();
        assert!(r < 1e-10, "half-sum residual {}", r);
    }

    #[test]
    fn duplication_residual_small() {
        let r = theta_duplication_residual(c(0.23, 0.07), c(0.15, 0.6)).unwrap();
        assert!(r < 1e-10, "residual {}", r);
    }
}
