//! The finite-dimensional sector: the terminating residue-sum operator at
//! t = +-q^{-lq-1/2} p^{-lp-1/2} and the symmetric theta-function spaces it
//! annihilates.

use num_complex::Complex64;

use super::YFn;
use crate::error::{Error, Result};
use crate::special_fn::{theta_mult, EllipticModuli};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn is_half_integer_ge(l: f64, floor: f64) -> bool {
    let doubled = 2.0 * l;
    (doubled - doubled.round()).abs() < 1e-12 && l >= floor - 1e-12
}

/// The (2 lq + 2)(2 lp + 2)-term residue sum realizing the integral operator
/// at t = sign q^{-lq-1/2} p^{-lp-1/2}, applied to f at the point w.
///
/// At (lq, lp) = (-1/2, -1/2) this is the identity (sign +) or the parity
/// operator f(w) -> f(-w) (sign -).
pub fn b_discrete_apply(
    lq: f64,
    lp: f64,
    sign: i32,
    moduli: &EllipticModuli,
    f: &YFn,
    w: Complex64,
) -> Result<Complex64> {
    if !is_half_integer_ge(lq, -0.5) || !is_half_integer_ge(lp, -0.5) {
        return Err(Error::domain(format!(
            "spins ({}, {}) must be half-integers >= -1/2",
            lq, lp
        )));
    }
    let p = moduli.p;
    let q = moduli.q;
    if q.norm() >= 1.0 {
        return Err(Error::domain("terminating operator built on |q| < 1"));
    }
    let nq = (2.0 * lq + 1.0).round() as i64; // series length - 1 on the q side
    let np = (2.0 * lp + 1.0).round() as i64;
    let sgn = if sign >= 0 { 1.0 } else { -1.0 };
    let t = sgn * (-(lq + 0.5) * q.ln() - (lp + 0.5) * p.ln()).exp();
    let t2 = t * t;
    let tw = t * w;
    let tw2 = tw * tw;
    let w2 = w * w;

    // prefactor Gamma(w^{-2}) / Gamma(t^{-2} w^{-2})
    let pref = crate::special_fn::elliptic_gamma(1.0 / w2, p, q)?
        / crate::special_fn::elliptic_gamma(1.0 / (t2 * w2), p, q)?;

    let th_tw2_p = theta_mult(tw2, p)?;
    let th_tw2_q = theta_mult(tw2, q)?;
    if th_tw2_p.norm() == 0.0 || th_tw2_q.norm() == 0.0 {
        return Err(Error::domain("theta((tw)^2) vanishes at the sample point"));
    }

    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=nq {
        // A_k = theta((tw)^2 q^{2k};p)/theta((tw)^2;p)
        //       prod_{b<k} theta(t^2 q^b;p) theta((tw)^2 q^b;p)
        //              / ( theta(q^{b+1};p) theta(w^2 q^{b+1};p) )
        let mut a_k = theta_mult(tw2 * q.powi(2 * k as i32), p)? / th_tw2_p;
        let mut qb = ONE;
        for _b in 0..k {
            a_k *= theta_mult(t2 * qb, p)? * theta_mult(tw2 * qb, p)?
                / (theta_mult(q * qb, p)? * theta_mult(w2 * q * qb, p)?);
            qb *= q;
        }
        for j in 0..=np {
            let mut b_j = theta_mult(tw2 * p.powi(2 * j as i32), q)? / th_tw2_q;
            let mut pa = ONE;
            for _a in 0..j {
                b_j *= theta_mult(t2 * pa, q)? * theta_mult(tw2 * pa, q)?
                    / (theta_mult(p * pa, q)? * theta_mult(w2 * p * pa, q)?);
                pa *= p;
            }
            let jk = (j * k + j + k) as i32;
            let denom = t.powi(4 * jk)
                * w.powi(2 * (j + k) as i32)
                * p.powi((2 * j * k) as i32 + (j * j) as i32)
                * q.powi((2 * j * k) as i32 + (k * k) as i32);
            let arg = t * q.powi(k as i32) * p.powi(j as i32) * w;
            sum += a_k * b_j * f(arg)? / denom;
        }
    }
    Ok(pref * sum)
}

/// A_1-symmetric theta functions of order 4l with base b: candidates are
/// products of 2l factors theta(c z; b) theta(c / z; b) with c = +-sqrt(b),
/// each validated numerically against
///   f(1/z) = f(z)  and  f(b z) = (b z^2)^{-2l} f(z)
/// before being returned.
pub fn theta_plus_basis(l: f64, base: Complex64) -> Result<Vec<YFn>> {
    if !is_half_integer_ge(l, 0.0) {
        return Err(Error::domain(format!("order parameter {} must be a half-integer >= 0", l)));
    }
    let order = (2.0 * l).round() as usize; // number of quadratic factors
    let dim = order + 1;
    let root = base.sqrt();
    let mut basis: Vec<YFn> = Vec::with_capacity(dim);
    for m in 0..dim {
        let plus = order - m;
        let f: YFn = std::sync::Arc::new(move |z: Complex64| -> Result<Complex64> {
            let mut acc = ONE;
            for _ in 0..plus {
                acc *= theta_mult(root * z, base)? * theta_mult(root / z, base)?;
            }
            for _ in 0..m {
                acc *= theta_mult(-root * z, base)? * theta_mult(-root / z, base)?;
            }
            Ok(acc)
        });
        validate_theta_plus(&f, l, base)?;
        basis.push(f);
    }
    Ok(basis)
}

/// Numeric validation of the two defining properties of the order-4l space.
fn validate_theta_plus(f: &YFn, l: f64, base: Complex64) -> Result<()> {
    let samples = [
        Complex64::from_polar(1.0, 0.37),
        Complex64::from_polar(0.85, 2.11),
        Complex64::from_polar(1.21, -1.03),
    ];
    let expo = -(2.0 * l).round() as i32; // -2l is a nonpositive integer
    for z in samples {
        let fz = f(z)?;
        let scale = fz.norm().max(1e-30);
        let inv = f(1.0 / z)?;
        if (inv - fz).norm() / scale > 1e-10 {
            return Err(Error::BasisValidation(format!(
                "f(1/z) != f(z) at z = {} (defect {:.2e})",
                z,
                (inv - fz).norm() / scale
            )));
        }
        let shifted = f(base * z)?;
        let expect = (base * z * z).powi(expo) * fz;
        if (shifted - expect).norm() / expect.norm().max(1e-30) > 1e-10 {
            return Err(Error::BasisValidation(format!(
                "f(bz) != (b z^2)^{{-2l}} f(z) at z = {} (defect {:.2e})",
                z,
                (shifted - expect).norm() / expect.norm().max(1e-30)
            )));
        }
    }
    Ok(())
}

/// ||B f|| / ||f|| over the sample points for the zero-mode ansatz
/// f(z) = theta^+_{4 lq}(z; p) theta^+_{4 lp}(z; q). Returns None when
/// (lq, lp) = (-1/2, -1/2): that operator is the identity/parity and has no
/// zero modes.
pub fn zero_mode_residual(
    lq: f64,
    lp: f64,
    basis_p_index: usize,
    basis_q_index: usize,
    sign: i32,
    moduli: &EllipticModuli,
    points: &[Complex64],
) -> Result<Option<f64>> {
    if lq < -0.25 && lp < -0.25 {
        return Ok(None);
    }
    let fp: Option<Vec<YFn>> = if lq >= 0.0 { Some(theta_plus_basis(lq, moduli.p)?) } else { None };
    let fq: Option<Vec<YFn>> = if lp >= 0.0 { Some(theta_plus_basis(lp, moduli.q)?) } else { None };
    let fp_el = fp.map(|b| b[basis_p_index].clone());
    let fq_el = fq.map(|b| b[basis_q_index].clone());
    let f: YFn = std::sync::Arc::new(move |z: Complex64| -> Result<Complex64> {
        let mut acc = ONE;
        if let Some(g) = &fp_el {
            acc *= g(z)?;
        }
        if let Some(g) = &fq_el {
            acc *= g(z)?;
        }
        Ok(acc)
    });
    let mut f_sup = 0.0f64;
    let mut bf_sup = 0.0f64;
    for &w in points {
        f_sup = f_sup.max(f(w)?.norm());
        bf_sup = bf_sup.max(b_discrete_apply(lq, lp, sign, moduli, &f, w)?.norm());
    }
    Ok(Some(bf_sup / f_sup.max(1e-30)))
}
