use num_complex::Complex64;

use super::theta::{qpochhammer_inf, theta_mult};
use super::{cis2pi, EPS_TRUNC};
use crate::error::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Guard distance around poles of the elliptic gamma function. Evaluation
/// this close to t = p^{-j} q^{-k} raises PoleProximity instead of returning
/// a huge number, so downstream quadrature sees a clean failure.
pub const GAMMA_POLE_GUARD: f64 = 1e-10;

/// Gamma(t;p,q) = prod_{j,k>=0} (1 - t^{-1} p^{j+1} q^{k+1}) / (1 - t p^j q^k),
/// |p|, |q| < 1, as a sum of per-factor principal logs over the truncated
/// lattice |p|^j |q|^k >= 1e-18.
pub fn elliptic_gamma(t: Complex64, p: Complex64, q: Complex64) -> Result<Complex64> {
    if p.norm() >= 1.0 || q.norm() >= 1.0 {
        return Err(Error::domain(format!(
            "elliptic gamma needs |p|, |q| < 1 (got {}, {})",
            p.norm(),
            q.norm()
        )));
    }
    if t.norm() == 0.0 {
        return Err(Error::domain("elliptic gamma undefined at t = 0"));
    }
    let pq_over_t = p * q / t;
    let mut log_sum = Complex64::new(0.0, 0.0);
    let mut exact_zero = false;
    let mut pj = ONE;
    loop {
        let mut w_den = pj * t; // t p^j q^k
        let mut w_num = pj * pq_over_t; // p^{j+1} q^{k+1} / t
        let mut lat = pj.norm(); // |p|^j |q|^k
        loop {
            let f_den = ONE - w_den;
            if f_den.norm() < GAMMA_POLE_GUARD {
                return Err(Error::PoleProximity { arg: t, dist: f_den.norm() });
            }
            let f_num = ONE - w_num;
            if f_num.norm() == 0.0 {
                exact_zero = true;
            } else {
                log_sum += f_num.ln();
            }
            log_sum -= f_den.ln();
            w_den *= q;
            w_num *= q;
            lat *= q.norm();
            if lat < EPS_TRUNC {
                break;
            }
        }
        pj *= p;
        if pj.norm() < EPS_TRUNC {
            break;
        }
    }
    if exact_zero {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(log_sum.exp())
}

/// Additive wrapper: Gamma(z | tau, 2 eta) = Gamma(e^{2 pi i z}; p, q) with
/// p = e^{2 pi i tau}, q = e^{4 pi i eta}. No independent additive code path.
pub fn elliptic_gamma_add(z: Complex64, tau: Complex64, two_eta: Complex64) -> Result<Complex64> {
    elliptic_gamma(cis2pi(z), cis2pi(tau), cis2pi(two_eta))
}

/// Product Gamma(t_1;p,q) ... Gamma(t_k;p,q); the compact multi-argument
/// notation used by every kernel.
pub fn gamma_prod(ts: &[Complex64], p: Complex64, q: Complex64) -> Result<Complex64> {
    let mut acc = ONE;
    for &t in ts {
        acc *= elliptic_gamma(t, p, q)?;
    }
    Ok(acc)
}

/// Closed form of lim_{z -> t w q^k p^j} (1 - t w q^k p^j / z) Gamma(t w / z; p, q):
///
///   (-1)^{jk+j+k} q^{(j+1)k(k+1)/2} p^{(k+1)j(j+1)/2}
///   / [ (p;p)_inf (q;q)_inf theta(q,..,q^k;p) theta(p,..,p^j;q) ]
///
/// At (j,k) = (0,0) this is 1/((p;p)_inf (q;q)_inf).
pub fn gamma_residue_factor(j: u32, k: u32, p: Complex64, q: Complex64) -> Result<Complex64> {
    let jf = j as f64;
    let kf = k as f64;
    let sign = if (j * k + j + k) % 2 == 0 { 1.0 } else { -1.0 };
    let q_pow = q.powf((jf + 1.0) * kf * (kf + 1.0) / 2.0);
    let p_pow = p.powf((kf + 1.0) * jf * (jf + 1.0) / 2.0);
    let mut theta_q = ONE; // theta(q;p) ... theta(q^k;p)
    let mut qm = ONE;
    for _ in 0..k {
        qm *= q;
        theta_q *= theta_mult(qm, p)?;
    }
    let mut theta_p = ONE;
    let mut pm = ONE;
    for _ in 0..j {
        pm *= p;
        theta_p *= theta_mult(pm, q)?;
    }
    let den = qpochhammer_inf(p, p)? * qpochhammer_inf(q, q)? * theta_q * theta_p;
    Ok(sign * q_pow * p_pow / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Raw double product over a (j,k) <= 60 x 60 lattice -- the independent
    /// oracle for the log-space implementation.
    fn gamma_oracle(t: Complex64, p: Complex64, q: Complex64) -> Complex64 {
        let mut acc = c(1.0, 0.0);
        for j in 0..60 {
            for k in 0..60 {
                let pjqk = p.powi(j) * q.powi(k);
                let num = c(1.0, 0.0) - p * q * pjqk / t;
                let den = c(1.0, 0.0) - t * pjqk;
                acc *= num / den;
            }
        }
        acc
    }

    #[test]
    fn gamma_matches_raw_double_product() {
        let v = elliptic_gamma(c(0.5, 0.0), c(0.3, 0.0), c(0.25, 0.0)).unwrap();
        let o = gamma_oracle(c(0.5, 0.0), c(0.3, 0.0), c(0.25, 0.0));
        assert!((v - o).norm() / o.norm() < 1e-13);

        let t = c(0.4, 0.3);
        let p = c(0.21, 0.12);
        let q = c(-0.1, 0.23);
        let v = elliptic_gamma(t, p, q).unwrap();
        let o = gamma_oracle(t, p, q);
        assert!((v - o).norm() / o.norm() < 1e-12);
    }

    #[test]
    fn gamma_normalization_at_sqrt_pq() {
        let p = c(0.3, 0.1);
        let q = c(0.2, -0.05);
        let s = (p * q).sqrt();
        let v = elliptic_gamma(s, p, q).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn gamma_reflection() {
        let p = c(0.25, 0.05);
        let q = c(0.3, 0.0);
        let t = c(0.6, 0.2);
        let v = elliptic_gamma(t, p, q).unwrap() * elliptic_gamma(p * q / t, p, q).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn gamma_shift_equations() {
        let p = c(0.28, 0.07);
        let q = c(0.17, -0.1);
        let t = c(0.45, 0.33);
        let g = elliptic_gamma(t, p, q).unwrap();
        let gq = elliptic_gamma(q * t, p, q).unwrap();
        let gp = elliptic_gamma(p * t, p, q).unwrap();
        let r1 = (gq - theta_mult(t, p).unwrap() * g).norm() / gq.norm();
        let r2 = (gp - theta_mult(t, q).unwrap() * g).norm() / gp.norm();
        assert!(r1 < 1e-11, "q-shift residual {}", r1);
        assert!(r2 < 1e-11, "p-shift residual {}", r2);
    }

    #[test]
    fn gamma_p_q_symmetry() {
        let p = c(0.33, 0.12);
        let q = c(0.11, -0.21);
        let t = c(0.7, -0.1);
        let a = elliptic_gamma(t, p, q).unwrap();
        let b = elliptic_gamma(t, q, p).unwrap();
        assert!((a - b).norm() / a.norm() < 1e-12);
    }

    #[test]
    fn gamma_pole_guard_raises() {
        let p = c(0.3, 0.0);
        let q = c(0.25, 0.0);
        // t = q^{-1} (1 + 1e-12): within guard distance of the (0,1) pole.
        let t = 1.0 / q * c(1.0 + 1e-12, 0.0);
        match elliptic_gamma(t, p, q) {
            Err(Error::PoleProximity { .. }) => {}
            other => panic!("expected PoleProximity, got {:?}", other),
        }
    }

    #[test]
    fn gamma_divisor_magnitudes() {
        let p = c(0.3, 0.0);
        let q = c(0.25, 0.0);
        // Near the pole lattice (but outside the guard) |Gamma| blows up ...
        let t = 1.0 / (p * q) * c(1.0 + 1e-9, 0.0);
        let v = elliptic_gamma(t, p, q).unwrap();
        assert!(v.norm() > 1e8, "|Gamma| = {} near pole", v.norm());
        // ... and near the zero lattice t = p^{j+1} q^{k+1} it collapses.
        let t = p * q * c(1.0 + 1e-9, 0.0);
        let v = elliptic_gamma(t, p, q).unwrap();
        assert!(v.norm() < 1e-8, "|Gamma| = {} near zero", v.norm());
    }

    #[test]
    fn gamma_quasi_periodicity_ladder() {
        // Gamma(q^n t) = Gamma(t) prod_{m<n} theta(q^m t; p) for n <= 5.
        let p = c(0.2, 0.1);
        let q = c(0.15, -0.07);
        let t = c(0.5, 0.4);
        let base = elliptic_gamma(t, p, q).unwrap();
        let mut ladder = base;
        let mut qm_t = t;
        for n in 1..=5 {
            ladder *= theta_mult(qm_t, p).unwrap();
            qm_t *= q;
            let direct = elliptic_gamma(qm_t, p, q).unwrap();
            assert!(
                (direct - ladder).norm() / direct.norm() < 1e-10,
                "ladder step {} mismatch",
                n
            );
        }
    }

    #[test]
    fn residue_factor_base_case() {
        let p = c(0.3, 0.0);
        let q = c(0.2, 0.0);
        let v = gamma_residue_factor(0, 0, p, q).unwrap();
        let expect = 1.0 / (qpochhammer_inf(p, p).unwrap() * qpochhammer_inf(q, q).unwrap());
        assert!((v - expect).norm() / expect.norm() < 1e-13);
    }

    #[test]
    fn residue_factor_matches_numeric_limit() {
        // Take the limit along z -> t w q^k p^j with a 1e-6 offset.
        let p = c(0.3, 0.0);
        let q = c(0.2, 0.0);
        let tw = c(0.7, 0.2); // the product t*w is all that enters
        for (j, k) in [(0u32, 1u32), (1, 0), (1, 1)] {
            let target = tw * q.powi(k as i32) * p.powi(j as i32);
            let z = target * c(1.0 + 1e-6, 0.0);
            let numeric = (c(1.0, 0.0) - target / z) * elliptic_gamma(tw / z, p, q).unwrap();
            let closed = gamma_residue_factor(j, k, p, q).unwrap();
            let rel = (numeric - closed).norm() / closed.norm();
            assert!(rel < 1e-4, "(j,k)=({},{}) rel {}", j, k, rel);
        }
    }

    #[test]
    fn residue_factor_p_q_swap_symmetry() {
        let p = c(0.3, 0.05);
        let q = c(0.2, -0.04);
        let a = gamma_residue_factor(1, 0, p, q).unwrap();
        let b = gamma_residue_factor(0, 1, q, p).unwrap();
        assert!((a - b).norm() / a.norm() < 1e-13);
    }
}
