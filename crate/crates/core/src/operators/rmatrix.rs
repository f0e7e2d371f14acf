//! The R-operator: factorized composition S2 S1 S3 S2 on grids, the direct
//! double-integral kernel, and the off-circle evaluator path used by the RLL
//! checks.

use num_complex::Complex64;

use super::grid::{grid_points, TorusGrid};
use super::{gamma_pm_pair, inv_gamma_pm2, s1_axis_matrix, s1_kernel_value, s2_value, OperatorParams, Role};
use crate::error::{Error, Result};
use crate::special_fn::{cis2pi, elliptic_gamma, EllipticModuli, Regime};

/// Parameter pairs of one two-variable R-factor:
/// R(alpha | beta) = S2(a1 - b2) S1(a1 - b1) S3(a2 - b2) S2(a2 - b1).
#[derive(Debug, Clone, Copy)]
pub struct RPairArgs {
    pub alpha1: Complex64,
    pub alpha2: Complex64,
    pub beta1: Complex64,
    pub beta2: Complex64,
}

impl RPairArgs {
    pub fn outer_arg(&self) -> Complex64 {
        self.alpha1 - self.beta2
    }
    pub fn s1_arg(&self) -> Complex64 {
        self.alpha1 - self.beta1
    }
    pub fn s3_arg(&self) -> Complex64 {
        self.alpha2 - self.beta2
    }
    pub fn inner_arg(&self) -> Complex64 {
        self.alpha2 - self.beta1
    }

    /// All four argument differences, for domain checks.
    pub fn all_args(&self) -> [Complex64; 4] {
        [self.outer_arg(), self.s1_arg(), self.s3_arg(), self.inner_arg()]
    }
}

fn near_zero_arg(a: Complex64) -> bool {
    (cis2pi(a) - 1.0).norm() < 1e-12
}

/// S2-type multiplier table D[(i,j)] over the N x N circle grid.
fn s2_table(params: &OperatorParams, n: usize) -> Result<Vec<Complex64>> {
    let pts = grid_points(n);
    let mut d = vec![Complex64::new(0.0, 0.0); n * n];
    use rayon::prelude::*;
    let rows: Vec<Result<Vec<Complex64>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![Complex64::new(0.0, 0.0); n];
            for j in 0..n {
                row[j] = s2_value(params, pts[i], pts[j])?;
            }
            Ok(row)
        })
        .collect();
    for (i, row) in rows.into_iter().enumerate() {
        d[i * n..(i + 1) * n].copy_from_slice(&row?);
    }
    Ok(d)
}

/// Apply the factorized R(alpha|beta) to a grid on the axis pair
/// (axes.0, axes.1): innermost S2 first, then the S3 integral along axes.1,
/// the S1 integral along axes.0, and the outer S2. Zero arguments take the
/// exact identity branch S1(0) = S3(0) = Id.
pub fn r_factorized_apply(
    grid: &TorusGrid,
    axes: (usize, usize),
    args: &RPairArgs,
    moduli: &EllipticModuli,
    half_shifted: bool,
) -> Result<TorusGrid> {
    let n = grid.n;
    let mk = |role: Role, a: Complex64| {
        let p = OperatorParams::new(role, a, *moduli);
        if half_shifted && matches!(role, Role::S2) {
            p.with_half_shift()
        } else {
            p
        }
    };

    let mut out = grid.clone();
    // S2(0) is exactly the identity for both kernel signs (reflection pairs
    // multiply to pq), so zero arguments skip the table outright.
    if !near_zero_arg(args.inner_arg()) {
        let d = s2_table(&mk(Role::S2, args.inner_arg()), n)?;
        out = out.apply_pair_diag(axes.0, axes.1, &d)?;
    }
    if !near_zero_arg(args.s3_arg()) {
        let s3 = mk(Role::S3, args.s3_arg());
        let k = s1_axis_matrix(&s3, n)?;
        out = out.apply_axis_matrix(axes.1, &k)?;
    }
    if !near_zero_arg(args.s1_arg()) {
        let s1 = mk(Role::S1, args.s1_arg());
        let k = s1_axis_matrix(&s1, n)?;
        out = out.apply_axis_matrix(axes.0, &k)?;
    }
    if !near_zero_arg(args.outer_arg()) {
        let d = s2_table(&mk(Role::S2, args.outer_arg()), n)?;
        out = out.apply_pair_diag(axes.0, axes.1, &d)?;
    }
    Ok(out)
}

/// Direct evaluation of the R-operator kernel (the explicit double contour
/// integral) at arbitrary points, written out literally per regime as an
/// independent code path from the factorized composition. Evaluates the
/// permutation-free R: [R f](w1, w2).
pub fn r_direct_eval(
    f: &dyn Fn(Complex64, Complex64) -> Result<Complex64>,
    args: &RPairArgs,
    moduli: &EllipticModuli,
    half_shifted: bool,
    n: usize,
    w1: Complex64,
    w2: Complex64,
) -> Result<Complex64> {
    let (u1, u2, v1, v2) = (args.alpha1, args.alpha2, args.beta1, args.beta2);
    let sign = if half_shifted { -1.0 } else { 1.0 };
    let (p, kq, pref_c, t1, t2, c_in) = match moduli.regime {
        Regime::QLess1 => (
            moduli.p,
            moduli.q,
            sign * moduli.sqrt_pq() * cis2pi(u1 - v2),
            cis2pi(v1 - u1),
            cis2pi(v2 - u2),
            sign * moduli.sqrt_pq() * cis2pi(u2 - v1),
        ),
        Regime::QGreater1 => {
            let root = cis2pi(moduli.tau / 2.0 - moduli.eta);
            (
                moduli.p,
                1.0 / moduli.q,
                sign * root * cis2pi(v2 - u1),
                cis2pi(u1 - v1),
                cis2pi(u2 - v2),
                sign * root * cis2pi(v1 - u2),
            )
        }
        Regime::QUnitCircle => return Err(Error::domain("no direct R kernel on |q| = 1")),
    };
    let kappa = moduli.kappa()?;
    let g_t1 = elliptic_gamma(t1 * t1, p, kq)?;
    let g_t2 = elliptic_gamma(t2 * t2, p, kq)?;

    let pts = grid_points(n);
    let mut sum = Complex64::new(0.0, 0.0);
    for &x in pts.iter() {
        let invx = inv_gamma_pm2(x, p, kq)?;
        if invx.norm() == 0.0 {
            continue;
        }
        let k1 = gamma_pm_pair(t1, w1, x, p, kq)? * invx;
        for &y in pts.iter() {
            let invy = inv_gamma_pm2(y, p, kq)?;
            if invy.norm() == 0.0 {
                continue;
            }
            let k2 = gamma_pm_pair(t2, w2, y, p, kq)? * invy;
            let mid = gamma_pm_pair(c_in, x, y, p, kq)?;
            sum += k1 * k2 * mid * f(x, y)?;
        }
    }
    let pref = gamma_pm_pair(pref_c, w1, w2, p, kq)?;
    Ok(pref * kappa * kappa / (g_t1 * g_t2) * sum / (n as f64 * n as f64))
}

/// Reusable evaluator for [R h] at arbitrary (possibly off-circle) output
/// points: the inner S2-weighted grid of h is built once, each evaluation
/// costs two fresh kernel rows.
pub struct REvaluator {
    moduli: EllipticModuli,
    n: usize,
    args: RPairArgs,
    half_shifted: bool,
    inner: Vec<Complex64>,
}

impl REvaluator {
    /// Build from precomputed grid values h[i * n + j] = h(x_i, y_j).
    pub fn from_values(
        h_values: &[Complex64],
        args: RPairArgs,
        moduli: EllipticModuli,
        half_shifted: bool,
        n: usize,
    ) -> Result<Self> {
        if h_values.len() != n * n {
            return Err(Error::domain("h table size mismatch"));
        }
        let inner_params = {
            let p = OperatorParams::new(Role::S2, args.inner_arg(), moduli);
            if half_shifted {
                p.with_half_shift()
            } else {
                p
            }
        };
        let pts = grid_points(n);
        let mut inner = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            if i == 0 || i == n / 2 {
                continue;
            }
            for j in 0..n {
                if j == 0 || j == n / 2 {
                    continue;
                }
                inner[i * n + j] = s2_value(&inner_params, pts[i], pts[j])? * h_values[i * n + j];
            }
        }
        Ok(REvaluator { moduli, n, args, half_shifted, inner })
    }

    pub fn new(
        h: &dyn Fn(Complex64, Complex64) -> Result<Complex64>,
        args: RPairArgs,
        moduli: EllipticModuli,
        half_shifted: bool,
        n: usize,
    ) -> Result<Self> {
        let inner_params = {
            let p = OperatorParams::new(Role::S2, args.inner_arg(), moduli);
            if half_shifted {
                p.with_half_shift()
            } else {
                p
            }
        };
        let pts = grid_points(n);
        let mut inner = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            if i == 0 || i == n / 2 {
                continue; // S1-kernel rows vanish at x = +-1
            }
            for j in 0..n {
                if j == 0 || j == n / 2 {
                    continue;
                }
                inner[i * n + j] = s2_value(&inner_params, pts[i], pts[j])? * h(pts[i], pts[j])?;
            }
        }
        Ok(REvaluator { moduli, n, args, half_shifted, inner })
    }

    pub fn eval(&self, w1: Complex64, w2: Complex64) -> Result<Complex64> {
        let n = self.n;
        let pts = grid_points(n);
        let s1 = OperatorParams::new(Role::S1, self.args.s1_arg(), self.moduli);
        let s3 = OperatorParams::new(Role::S3, self.args.s3_arg(), self.moduli);
        let mut row1 = vec![Complex64::new(0.0, 0.0); n];
        let mut row2 = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            row1[i] = s1_kernel_value(&s1, w1, pts[i])?;
            row2[i] = s1_kernel_value(&s3, w2, pts[i])?;
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for i in 0..n {
            if row1[i].norm() == 0.0 {
                continue;
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += row2[j] * self.inner[i * n + j];
            }
            sum += row1[i] * acc;
        }
        let outer = {
            let p = OperatorParams::new(Role::S2, self.args.outer_arg(), self.moduli);
            if self.half_shifted {
                p.with_half_shift()
            } else {
                p
            }
        };
        Ok(s2_value(&outer, w1, w2)? * sum / (n as f64 * n as f64))
    }
}
