//! The integral operators S1..S5, the Bailey pair M/D operators, factorized
//! and direct R-operators, the terminating residue-sum operator, and the
//! symmetric theta zero-mode spaces.

mod discrete;
mod grid;
mod rmatrix;

pub use discrete::{b_discrete_apply, theta_plus_basis, zero_mode_residual};
pub use grid::{grid_points, TorusGrid};
pub use rmatrix::{r_direct_eval, r_factorized_apply, REvaluator, RPairArgs};

use std::sync::Arc;

use num_complex::Complex64;

use crate::contour::{pole_scan, residue_corrected_integral, Annulus, AnnulusEvaluator, PoleList};
use crate::error::{Error, Result};
use crate::special_fn::{cis2pi, elliptic_gamma, EllipticModuli, Regime};

/// A function of one multiplicative torus variable y.
pub type YFn = Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>;

pub fn yfn(f: impl Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static) -> YFn {
    Arc::new(f)
}

/// Operator roles used in reports and parameter records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    S1,
    S2,
    S3,
    S4,
    S5,
    BaileyM,
    BaileyD,
    R12,
    R13,
    R23,
    Bdiscrete,
}

/// Kernel parameters of one integral operator: the multiplicative parameter
/// together with the regime-resolved gamma-function bases.
#[derive(Debug, Clone, Copy)]
pub struct OperatorParams {
    pub role: Role,
    /// Additive argument a; the kernel parameter is t = e^{-2 pi i a} in the
    /// |q| < 1 regime and t = e^{+2 pi i a} with base 1/q for |q| > 1.
    pub a: Complex64,
    pub half_shifted: bool,
    pub moduli: EllipticModuli,
}

impl OperatorParams {
    pub fn new(role: Role, a: Complex64, moduli: EllipticModuli) -> Self {
        OperatorParams { role, a, half_shifted: false, moduli }
    }

    pub fn with_half_shift(mut self) -> Self {
        self.half_shifted = true;
        self
    }

    /// Build from the multiplicative kernel parameter directly (principal
    /// logarithm fixes the additive argument).
    pub fn from_t(role: Role, t: Complex64, moduli: EllipticModuli) -> Result<Self> {
        let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        let a = match moduli.regime {
            Regime::QLess1 => -t.ln() / two_pi_i,
            Regime::QGreater1 => t.ln() / two_pi_i,
            Regime::QUnitCircle => return Err(Error::domain("no kernel parameter on |q| = 1")),
        };
        Ok(OperatorParams::new(role, a, moduli))
    }

    /// Gamma-function bases of the kernel: (p, q) or (p, 1/q).
    pub fn bases(&self) -> Result<(Complex64, Complex64)> {
        Ok((self.moduli.p, self.moduli.kernel_q()?))
    }

    /// The multiplicative kernel parameter t.
    pub fn t(&self) -> Result<Complex64> {
        match self.moduli.regime {
            Regime::QLess1 => Ok(cis2pi(-self.a)),
            Regime::QGreater1 => Ok(cis2pi(self.a)),
            Regime::QUnitCircle => Err(Error::domain("no kernel parameter on |q| = 1")),
        }
    }

    /// sigma sqrt(pq) e^{2 pi i a} (resp. sigma sqrt(p/q) e^{-2 pi i a} for
    /// |q| > 1), the S2-kernel argument prefactor; sigma = -1 when
    /// half-shifted.
    pub fn s2_prefactor(&self) -> Result<Complex64> {
        let sign = if self.half_shifted { -1.0 } else { 1.0 };
        match self.moduli.regime {
            Regime::QLess1 => Ok(sign * self.moduli.sqrt_pq() * cis2pi(self.a)),
            Regime::QGreater1 => {
                let root = cis2pi(self.moduli.tau / 2.0 - self.moduli.eta);
                Ok(sign * root * cis2pi(-self.a))
            }
            Regime::QUnitCircle => Err(Error::domain("no S2 kernel on |q| = 1")),
        }
    }

    /// Scan the S1-kernel pole lattice at output point y1.
    pub fn pole_scan(&self, y1: Complex64) -> Result<PoleList> {
        let (p, q) = self.bases()?;
        Ok(pole_scan(self.t()?, y1, p, q))
    }

    /// Reject t^2 within 1e-6 of the exceptional lattice p^{-j} q^{-k} or
    /// p^{j+1} q^{k+1}, where kappa / Gamma(t^2) degenerates.
    pub fn check_exceptional(&self) -> Result<()> {
        let (p, q) = self.bases()?;
        let t2 = self.t()?.powi(2);
        let mut pj = Complex64::new(1.0, 0.0);
        while pj.norm() >= 1e-8 {
            let mut lat = pj;
            while lat.norm() >= 1e-8 {
                let d_pole = (t2 * lat - 1.0).norm();
                let d_zero = (t2 - p * q * lat).norm() / t2.norm().max(1e-30);
                if d_pole < 1e-6 || d_zero < 1e-6 {
                    return Err(Error::ExceptionalParameter { t2, dist: d_pole.min(d_zero) });
                }
                lat *= q;
            }
            pj *= p;
        }
        Ok(())
    }
}

/// 1 / (Gamma(y^2) Gamma(y^{-2})): the measure factor of every S1-type
/// kernel. Exactly zero at the y = +-1 double points (a pole of the
/// denominator), which short-circuits evaluation of the transformed function
/// there.
pub fn inv_gamma_pm2(y: Complex64, p: Complex64, q: Complex64) -> Result<Complex64> {
    match (elliptic_gamma(y * y, p, q), elliptic_gamma(1.0 / (y * y), p, q)) {
        (Ok(a), Ok(b)) => Ok(1.0 / (a * b)),
        (Err(Error::PoleProximity { .. }), _) | (_, Err(Error::PoleProximity { .. })) => {
            Ok(Complex64::new(0.0, 0.0))
        }
        (Err(e), _) | (_, Err(e)) => Err(e),
    }
}

/// Gamma(c y1 y2) Gamma(c y1/y2) Gamma(c y2/y1) Gamma(c/(y1 y2)): the
/// four-fold +- product entering every kernel.
pub fn gamma_pm_pair(c: Complex64, y1: Complex64, y2: Complex64, p: Complex64, q: Complex64) -> Result<Complex64> {
    Ok(elliptic_gamma(c * y1 * y2, p, q)?
        * elliptic_gamma(c * y1 / y2, p, q)?
        * elliptic_gamma(c * y2 / y1, p, q)?
        * elliptic_gamma(c / (y1 * y2), p, q)?)
}

/// Pointwise S2 multiplier value Gamma(pref y1^{+-1} y2^{+-1}; kernel bases).
pub fn s2_value(params: &OperatorParams, y1: Complex64, y2: Complex64) -> Result<Complex64> {
    let (p, q) = params.bases()?;
    gamma_pm_pair(params.s2_prefactor()?, y1, y2, p, q)
}

/// The S2 multiplier as a two-variable evaluator (for composition with
/// direct-kernel integrals).
pub fn s2_evaluator(params: &OperatorParams) -> Result<AnnulusEvaluator> {
    let pr = params.s2_prefactor()?;
    let (p, q) = params.bases()?;
    // Poles appear once |pref| max(|y1 y2|, |y1/y2|, ..) reaches 1.
    let margin = 1.0 / pr.norm().sqrt();
    let band = Annulus::new(1.0 / margin.max(1.0 + 1e-9), margin.max(1.0 + 1e-9));
    Ok(AnnulusEvaluator::new(vec![band, band], vec![true, true], move |pts| {
        gamma_pm_pair(pr, pts[0], pts[1], p, q)
    }))
}

/// S1-kernel value kappa Gamma(t w^{+-1} y^{+-1}) / (Gamma(t^2) Gamma(y^{+-2}))
/// with w the output point and y the integration variable.
pub fn s1_kernel_value(
    params: &OperatorParams,
    w: Complex64,
    y: Complex64,
) -> Result<Complex64> {
    let (p, q) = params.bases()?;
    let t = params.t()?;
    let inv = inv_gamma_pm2(y, p, q)?;
    if inv.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let kappa = params.moduli.kappa()?;
    Ok(kappa * gamma_pm_pair(t, w, y, p, q)? * inv / elliptic_gamma(t * t, p, q)?)
}

/// The N x N grid matrix of S1 along one axis: out_i = (1/N) sum_j K[i,j] f_j.
/// Columns at y = +-1 vanish identically (kernel zero).
pub fn s1_axis_matrix(params: &OperatorParams, n: usize) -> Result<Vec<Complex64>> {
    params.check_exceptional()?;
    let pts = grid_points(n);
    let mut k = vec![Complex64::new(0.0, 0.0); n * n];
    use rayon::prelude::*;
    let rows: Vec<Result<Vec<Complex64>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![Complex64::new(0.0, 0.0); n];
            for j in 0..n {
                row[j] = s1_kernel_value(params, pts[i], pts[j])?;
            }
            Ok(row)
        })
        .collect();
    for (i, row) in rows.into_iter().enumerate() {
        k[i * n..(i + 1) * n].copy_from_slice(&row?);
    }
    Ok(k)
}

/// Output-annulus radius bound of S1: the transform is analytic for
/// |t w^{+-1}| < 1.
pub fn s1_output_annulus(params: &OperatorParams) -> Result<Annulus> {
    let tn = params.t()?.norm();
    Ok(Annulus::new(tn * (1.0 + 1e-9), (1.0 - 1e-9) / tn))
}

/// Evaluator-path application of S1 at an arbitrary output point w (fresh
/// quadrature, unit circle only).
pub fn s1_apply(params: &OperatorParams, f: &YFn, w: Complex64, n: usize) -> Result<Complex64> {
    params.check_exceptional()?;
    let mut sum = Complex64::new(0.0, 0.0);
    for y in grid_points(n) {
        let kv = s1_kernel_value(params, w, y)?;
        if kv.norm() == 0.0 {
            continue;
        }
        sum += kv * f(y)?;
    }
    Ok(sum / n as f64)
}

/// Analytically continued S1: unit circle plus residue corrections. The
/// kernel's own misplaced poles are picked up by the scan; `extra` carries
/// pole chains of f itself (e.g. gamma-function factors crossing the circle).
pub fn s1_apply_corrected(
    params: &OperatorParams,
    f: &YFn,
    extra: &PoleList,
    w: Complex64,
    n: usize,
) -> Result<Complex64> {
    params.check_exceptional()?;
    let mut poles = params.pole_scan(w)?;
    poles.entries.extend_from_slice(&extra.entries);
    let poles = PoleList::from_entries(poles.entries);
    let p2 = *params;
    let f2 = f.clone();
    let integrand = AnnulusEvaluator::univariate(Annulus::full(), true, move |y| {
        let kv = s1_kernel_value(&p2, w, y)?;
        if kv.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(kv * f2(y)?)
    });
    residue_corrected_integral(&integrand, n, &poles)
}

/// The elliptic Fourier transform M(t): identical to S1 up to the
/// parameterization t = e^{-2 pi i a}; exposed as the grid matrix route so
/// the identification M(t)_{wy} f(y) = [S1(a) f](w) is a genuine two-path
/// check.
pub fn bailey_m_matrix(t: Complex64, moduli: &EllipticModuli, n: usize) -> Result<Vec<Complex64>> {
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let a = -(t.ln()) / two_pi_i;
    let params = OperatorParams::new(Role::BaileyM, a, *moduli);
    s1_axis_matrix(&params, n)
}

/// Bailey D-function D(s; y, w) = Gamma(sqrt{pq} s^{-1} y^{+-1} w^{+-1}).
pub fn bailey_d(s: Complex64, y: Complex64, w: Complex64, moduli: &EllipticModuli) -> Result<Complex64> {
    let (p, q) = (moduli.p, moduli.kernel_q()?);
    gamma_pm_pair(moduli.sqrt_pq() / s, y, w, p, q)
}
