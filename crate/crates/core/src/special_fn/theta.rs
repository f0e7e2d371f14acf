use num_complex::Complex64;

use super::EPS_TRUNC;
use crate::error::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// How close |q| may come to the unit circle before the q-product is refused.
const Q_BASE_GUARD: f64 = 1e-3;

/// (x;q)_inf = prod_{k>=0} (1 - q^k x), |q| < 1, as a log-space sum.
pub fn qpochhammer_inf(x: Complex64, q: Complex64) -> Result<Complex64> {
    if q.norm() > 1.0 - Q_BASE_GUARD {
        return Err(Error::domain(format!(
            "|q| = {} too close to 1 for the infinite q-product",
            q.norm()
        )));
    }
    if x.norm() == 0.0 {
        return Ok(ONE);
    }
    let mut log_sum = Complex64::new(0.0, 0.0);
    let mut qk = ONE;
    let xn = x.norm();
    loop {
        let w = qk * x;
        let f = ONE - w;
        if f.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        log_sum += f.ln();
        qk *= q;
        if qk.norm() * xn.max(1.0) < EPS_TRUNC {
            break;
        }
    }
    Ok(log_sum.exp())
}

/// theta(t;p) = (t;p)_inf (p t^{-1};p)_inf, the multiplicative theta function.
pub fn theta_mult(t: Complex64, p: Complex64) -> Result<Complex64> {
    if t.norm() == 0.0 {
        return Err(Error::domain("theta(t;p) undefined at t = 0"));
    }
    if p.norm() > 1.0 - Q_BASE_GUARD {
        return Err(Error::domain(format!("|p| = {} must be < 1", p.norm())));
    }
    let mut log_sum = Complex64::new(0.0, 0.0);
    let t_inv = ONE / t;
    let mut pk = ONE;
    let scale = t.norm().max(t_inv.norm()).max(1.0);
    loop {
        let f1 = ONE - pk * t;
        let f2 = ONE - pk * p * t_inv;
        if f1.norm() == 0.0 || f2.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        log_sum += f1.ln() + f2.ln();
        pk *= p;
        if pk.norm() * scale < EPS_TRUNC {
            break;
        }
    }
    Ok(log_sum.exp())
}

/// The four Jacobi theta functions theta_j(z|tau), j = 1..4, by their series.
///
/// Summation stops once three consecutive index rings contribute less than
/// 1e-18 of the running maximum term (oscillatory safety).
pub fn jacobi_theta(j: u8, z: Complex64, tau: Complex64) -> Result<Complex64> {
    if tau.im <= 0.0 {
        return Err(Error::domain(format!("Im(tau) = {} must be positive", tau.im)));
    }
    let i_pi = Complex64::new(0.0, std::f64::consts::PI);
    // term(n): exponent and prefactor per series definition.
    let term = |n: i64| -> Complex64 {
        let nf = n as f64;
        match j {
            1 => {
                let half = nf + 0.5;
                -(i_pi * half * half * tau + 2.0 * i_pi * half * (z + 0.5)).exp()
            }
            2 => {
                let half = nf + 0.5;
                (i_pi * half * half * tau + 2.0 * i_pi * half * z).exp()
            }
            3 => (i_pi * nf * nf * tau + 2.0 * i_pi * nf * z).exp(),
            4 => (i_pi * nf * nf * tau + 2.0 * i_pi * nf * (z + 0.5)).exp(),
            _ => unreachable!(),
        }
    };
    if !(1..=4).contains(&j) {
        return Err(Error::domain(format!("theta index {} not in 1..4", j)));
    }

    let mut sum = term(0);
    let mut max_mag = sum.norm();
    let mut quiet_rings = 0usize;
    for m in 1..10_000i64 {
        let a = term(m);
        let b = term(-m);
        sum += a + b;
        let ring = a.norm().max(b.norm());
        max_mag = max_mag.max(ring);
        if ring < 1e-18 * max_mag.max(sum.norm()).max(1e-300) {
            quiet_rings += 1;
            if quiet_rings >= 3 {
                return Ok(sum);
            }
        } else {
            quiet_rings = 0;
        }
    }
    Err(Error::domain("theta series did not terminate in 10000 rings"))
}

/// theta_a(z | tau/2), the half-modulus thetas entering the L-operator
/// factorization.
pub fn theta_bar(a: u8, z: Complex64, tau: Complex64) -> Result<Complex64> {
    jacobi_theta(a, z, tau / 2.0)
}
