//! Quadrature over the unit circle, adaptive refinement, kernel pole
//! scanning, and residue-corrected integration over deformed contours.
//!
//! Deformed contours are always realized as "unit circle + explicit residue
//! corrections", never as geometric reparameterizations. Poles sitting close
//! to the circle are handled by subtracting their singular part from the
//! integrand before the trapezoid sum and adding the subtracted term's exact
//! contour integral back, so accuracy does not degrade near a pinch.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Radial band |y| in [inner, outer] in which an evaluator is guaranteed
/// analytic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annulus {
    pub inner: f64,
    pub outer: f64,
}

impl Annulus {
    pub fn new(inner: f64, outer: f64) -> Self {
        Annulus { inner, outer }
    }

    /// The whole punctured plane; for entire functions of y and 1/y-symmetric
    /// Laurent data.
    pub fn full() -> Self {
        Annulus { inner: 0.0, outer: f64::INFINITY }
    }

    pub fn contains(&self, y: Complex64) -> bool {
        let r = y.norm();
        r >= self.inner * (1.0 - 1e-12) && r <= self.outer * (1.0 + 1e-12)
    }

    pub fn contains_unit_circle(&self) -> bool {
        self.inner <= 1.0 && self.outer >= 1.0
    }

    pub fn intersect(&self, other: &Annulus) -> Annulus {
        Annulus {
            inner: self.inner.max(other.inner),
            outer: self.outer.min(other.outer),
        }
    }

    /// Shrink by the multiplicative factor |m| >= 1 (difference operators
    /// shifting y -> m y eat into the band from both sides).
    pub fn shrink(&self, m: f64) -> Annulus {
        let m = m.max(1.0 / m);
        Annulus { inner: self.inner * m, outer: self.outer / m }
    }
}

type EvalFn = dyn Fn(&[Complex64]) -> Result<Complex64> + Send + Sync;

/// A pointwise complex-valued function of one or more torus variables
/// carrying its annulus of guaranteed analyticity per variable and the
/// y <-> 1/y symmetry flags.
#[derive(Clone)]
pub struct AnnulusEvaluator {
    func: Arc<EvalFn>,
    annuli: Vec<Annulus>,
    symmetric: Vec<bool>,
}

impl AnnulusEvaluator {
    pub fn new(
        annuli: Vec<Annulus>,
        symmetric: Vec<bool>,
        func: impl Fn(&[Complex64]) -> Result<Complex64> + Send + Sync + 'static,
    ) -> Self {
        assert_eq!(annuli.len(), symmetric.len());
        AnnulusEvaluator { func: Arc::new(func), annuli, symmetric }
    }

    pub fn univariate(
        annulus: Annulus,
        symmetric: bool,
        f: impl Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    ) -> Self {
        AnnulusEvaluator::new(vec![annulus], vec![symmetric], move |pts| f(pts[0]))
    }

    pub fn arity(&self) -> usize {
        self.annuli.len()
    }

    pub fn annulus(&self, var: usize) -> Annulus {
        self.annuli[var]
    }

    pub fn symmetric(&self, var: usize) -> bool {
        self.symmetric[var]
    }

    pub fn eval(&self, pts: &[Complex64]) -> Result<Complex64> {
        debug_assert_eq!(pts.len(), self.arity());
        for (i, y) in pts.iter().enumerate() {
            debug_assert!(
                self.annuli[i].contains(*y),
                "evaluation at |y| = {} outside annulus [{}, {}] of variable {}",
                y.norm(),
                self.annuli[i].inner,
                self.annuli[i].outer,
                i
            );
        }
        (self.func)(pts)
    }

    /// Evaluation without the annulus assertion; residue extraction probes
    /// the meromorphic continuation right next to a pole.
    pub fn eval_unchecked(&self, pts: &[Complex64]) -> Result<Complex64> {
        (self.func)(pts)
    }

    /// Pointwise product; annuli intersect, symmetry flags AND together.
    pub fn product(&self, other: &AnnulusEvaluator) -> AnnulusEvaluator {
        assert_eq!(self.arity(), other.arity());
        let annuli: Vec<Annulus> = self
            .annuli
            .iter()
            .zip(&other.annuli)
            .map(|(a, b)| a.intersect(b))
            .collect();
        let symmetric: Vec<bool> = self
            .symmetric
            .iter()
            .zip(&other.symmetric)
            .map(|(a, b)| a & b)
            .collect();
        let f = self.func.clone();
        let g = other.func.clone();
        AnnulusEvaluator { func: Arc::new(move |pts: &[Complex64]| Ok(f(pts)? * g(pts)?)), annuli, symmetric }
    }
}

/// (1/N) sum_j f(e^{2 pi i j / N}): the trapezoid rule on the unit circle,
/// i.e. the contour integral of f(y) dy / (2 pi i y). Exact for symmetric
/// Laurent polynomials of degree < N/2.
pub fn circle_quadrature(f: &AnnulusEvaluator, n: usize) -> Result<Complex64> {
    if f.arity() != 1 {
        return Err(Error::domain("circle_quadrature needs a univariate evaluator"));
    }
    if n < 8 || !n.is_power_of_two() {
        return Err(Error::domain(format!("grid size {} must be a power of two >= 8", n)));
    }
    if !f.annulus(0).contains_unit_circle() {
        return Err(Error::domain("unit circle outside the evaluator's annulus"));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        sum += f.eval(&[Complex64::from_polar(1.0, theta)])?;
    }
    Ok(sum / n as f64)
}

/// Doubles N from 32 until |I_2N - I_N| <= tol * max(1, |I_2N|), cap 4096.
/// Returns the converged value and the N it was reached at.
pub fn adaptive_circle(f: &AnnulusEvaluator, tol: f64) -> Result<(Complex64, usize)> {
    let mut n = 32;
    let mut prev = circle_quadrature(f, n)?;
    while n < 4096 {
        n *= 2;
        let cur = circle_quadrature(f, n)?;
        let delta = (cur - prev).norm();
        if delta <= tol * cur.norm().max(1.0) {
            return Ok((cur, n));
        }
        prev = cur;
    }
    let half = circle_quadrature(f, n / 2)?;
    Err(Error::Convergence { n, last: prev, previous: half, delta: (prev - half).norm() })
}

/// Which side of the deformed contour a pole must end up on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleSide {
    /// Enclosed by the contour (the "in" sequences converging to 0).
    In,
    /// Excluded (the "out" reciprocals going to infinity).
    Out,
}

#[derive(Debug, Clone, Copy)]
pub struct PoleEntry {
    pub location: Complex64,
    pub order: u32,
    pub residue_available: bool,
    pub side: PoleSide,
}

/// Kernel poles sorted by modulus, deduplicated within 1e-12, with the
/// minimum distance to the unit circle flagged.
#[derive(Debug, Clone, Default)]
pub struct PoleList {
    pub entries: Vec<PoleEntry>,
}

impl PoleList {
    pub fn from_entries(mut entries: Vec<PoleEntry>) -> Self {
        entries.sort_by(|a, b| a.location.norm().total_cmp(&b.location.norm()));
        let mut dedup: Vec<PoleEntry> = Vec::with_capacity(entries.len());
        for e in entries {
            if dedup
                .iter()
                .all(|d| d.side != e.side || (d.location - e.location).norm() > 1e-12)
            {
                dedup.push(e);
            }
        }
        PoleList { entries: dedup }
    }

    /// Minimum radial distance of any pole to the unit circle.
    pub fn min_circle_distance(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| (e.location.norm() - 1.0).abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Half the smallest separation between an In pole and an Out pole: the
    /// best clearance any separating contour can achieve. Zero at a pinch.
    pub fn pinch_clearance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for a in self.entries.iter().filter(|e| e.side == PoleSide::In) {
            for b in self.entries.iter().filter(|e| e.side == PoleSide::Out) {
                best = best.min((a.location - b.location).norm() / 2.0);
            }
        }
        best
    }

    /// Minimum distance an admissible integration contour can keep from the
    /// scanned poles: radial standoff from the unit circle capped by the
    /// pinch clearance.
    pub fn min_contour_distance(&self) -> f64 {
        self.min_circle_distance().min(self.pinch_clearance())
    }

    /// Poles whose required side disagrees with their position relative to
    /// the unit circle; exactly these need residue corrections.
    pub fn misplaced(&self) -> Vec<PoleEntry> {
        self.entries
            .iter()
            .copied()
            .filter(|e| match e.side {
                PoleSide::In => e.location.norm() >= 1.0,
                PoleSide::Out => e.location.norm() <= 1.0,
            })
            .collect()
    }
}

/// Enumerates the S1-kernel pole lattice y = t y1^{+-1} p^j q^k ("in") and
/// its reciprocals ("out") down to lattice weight |p^j q^k| >= 1e-6.
pub fn pole_scan(
    t: Complex64,
    y1: Complex64,
    p: Complex64,
    q: Complex64,
) -> PoleList {
    let mut entries = Vec::new();
    let base_points = [t * y1, t / y1];
    let mut pj = Complex64::new(1.0, 0.0);
    while pj.norm() >= 1e-6 {
        let mut pjqk = pj;
        while pjqk.norm() >= 1e-6 {
            for b in base_points {
                let loc = b * pjqk;
                entries.push(PoleEntry { location: loc, order: 1, residue_available: true, side: PoleSide::In });
                entries.push(PoleEntry {
                    location: 1.0 / loc,
                    order: 1,
                    residue_available: true,
                    side: PoleSide::Out,
                });
            }
            pjqk *= q;
        }
        pj *= p;
    }
    PoleList::from_entries(entries)
}

/// Residue (c_{-1}) of f at a simple pole `c`, via an M-point trapezoid on a
/// circle of radius r around it. Also returns the |c_{-2}| estimate used to
/// reject non-simple poles.
pub fn numeric_residue(f: &AnnulusEvaluator, c: Complex64, r: f64) -> Result<(Complex64, f64)> {
    const M: usize = 32;
    let mut c1 = Complex64::new(0.0, 0.0);
    let mut c2 = Complex64::new(0.0, 0.0);
    for m in 0..M {
        let theta = 2.0 * std::f64::consts::PI * m as f64 / M as f64;
        let w = Complex64::from_polar(r, theta);
        let v = f.eval_unchecked(&[c + w])?;
        c1 += v * w;
        c2 += v * w * w;
    }
    Ok((c1 / M as f64, (c2 / M as f64).norm()))
}

/// How close to the unit circle a pole may sit before its singular part is
/// subtracted from the integrand prior to the trapezoid sum.
const NEAR_CONTOUR: f64 = 0.15;

/// Integral of f(y) dy / (2 pi i y) over the deformed contour C that encloses
/// every `In` pole of `corrections` and excludes every `Out` pole, realized
/// as the unit-circle trapezoid plus explicit residue corrections.
///
/// Every correction pole must be simple. Poles already on their correct side
/// of the unit circle and far from it cost nothing; the others get their
/// singular part handled exactly.
pub fn residue_corrected_integral(
    f: &AnnulusEvaluator,
    n: usize,
    corrections: &PoleList,
) -> Result<Complex64> {
    if f.arity() != 1 {
        return Err(Error::domain("residue_corrected_integral needs a univariate evaluator"));
    }
    // Select the poles whose singular part must be treated explicitly.
    let mut treated: Vec<PoleEntry> = Vec::new();
    for e in &corrections.entries {
        let r = e.location.norm();
        let misplaced = match e.side {
            PoleSide::In => r >= 1.0,
            PoleSide::Out => r <= 1.0,
        };
        if misplaced || (r - 1.0).abs() < NEAR_CONTOUR {
            if e.order != 1 {
                return Err(Error::Residue { location: e.location, c2: f64::NAN });
            }
            treated.push(*e);
        }
    }

    // Residues of h(y) = f(y)/y at the treated poles. The probe circle must
    // exclude every other enumerated pole (treated or not): near a pinch the
    // partner pole sits arbitrarily close.
    let mut residues: Vec<(PoleEntry, Complex64)> = Vec::with_capacity(treated.len());
    for e in &treated {
        let mut min_sep = f64::INFINITY;
        for other in &corrections.entries {
            let d = (e.location - other.location).norm();
            if d > 1e-13 {
                min_sep = min_sep.min(d);
            }
        }
        let r = (0.35 * min_sep)
            .min(1e-2 * e.location.norm().max(1.0))
            .min(2e-2)
            .max(1e-9);
        let (res_f, c2) = numeric_residue(f, e.location, r)?;
        if c2 > r * res_f.norm().max(1e-30) * 1e3 {
            return Err(Error::Residue { location: e.location, c2 });
        }
        // Cross-check at half the radius: any unaccounted singularity inside
        // the probe circle shows up as radius dependence.
        let (res_half, _) = numeric_residue(f, e.location, r / 2.0)?;
        if (res_f - res_half).norm() > 1e-8 * res_f.norm().max(1e-30) {
            return Err(Error::Residue { location: e.location, c2: (res_f - res_half).norm() });
        }
        residues.push((*e, res_f / e.location));
    }

    // Trapezoid of the smoothed integrand g(y) = f(y) - sum c_m y/(y - y_m).
    if n < 8 || !n.is_power_of_two() {
        return Err(Error::domain(format!("grid size {} must be a power of two >= 8", n)));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        let y = Complex64::from_polar(1.0, theta);
        let mut v = f.eval(&[y])?;
        for (e, c1) in &residues {
            v -= *c1 * y / (y - e.location);
        }
        sum += v;
    }
    let mut total = sum / n as f64;

    // Exact contour integrals of the subtracted singular parts:
    // for h_m = c_m/(y - y_m), its integral over C is c_m iff C encloses y_m.
    for (e, c1) in &residues {
        if e.side == PoleSide::In {
            total += *c1;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sym_laurent(coeffs: Vec<(i32, Complex64)>) -> AnnulusEvaluator {
        AnnulusEvaluator::univariate(Annulus::full(), true, move |y| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(k, a) in &coeffs {
                acc += a * (y.powi(k) + y.powi(-k)) / if k == 0 { 2.0 } else { 1.0 };
            }
            Ok(acc)
        })
    }

    #[test]
    fn constant_integrates_to_itself() {
        let f = sym_laurent(vec![(0, c(1.0, 0.0))]);
        assert_eq!(circle_quadrature(&f, 8).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn pure_harmonics_integrate_to_zero() {
        for k in 1..4 {
            let f = sym_laurent(vec![(k, c(1.0, 0.0))]);
            assert!(circle_quadrature(&f, 16).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        let f = sym_laurent(vec![(0, c(1.0, 0.0))]);
        assert!(circle_quadrature(&f, 24).is_err());
        assert!(circle_quadrature(&f, 4).is_err());
    }

    #[test]
    fn adaptive_constant_converges_immediately() {
        let f = sym_laurent(vec![(0, c(2.5, -1.0))]);
        let (v, n) = adaptive_circle(&f, 1e-12).unwrap();
        assert_eq!(n, 64); // first doubling already agrees
        assert!((v - c(2.5, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn adaptive_geometric_kernel_converges_by_256() {
        // f(y) = 1/((1-a y)(1-a/y)) with a = 0.8: analytic in (0.8, 1.25),
        // Fourier coefficients a^|k|/(1-a^2); integral = 1/(1-a^2).
        let a = 0.8;
        let f = AnnulusEvaluator::univariate(Annulus::new(0.81, 1.0 / 0.81), true, move |y| {
            Ok(1.0 / ((1.0 - a * y) * (1.0 - a / y)))
        });
        let (v, n) = adaptive_circle(&f, 1e-10).unwrap();
        assert!(n <= 256, "needed N = {}", n);
        assert!((v - c(1.0 / (1.0 - a * a), 0.0)).norm() < 1e-9);
    }

    #[test]
    fn adaptive_fails_on_pole_hugging_contour() {
        let a = 1.0 + 1e-3;
        let f = AnnulusEvaluator::univariate(Annulus::new(0.0, a), false, move |y| Ok(1.0 / (y - a)));
        match adaptive_circle(&f, 1e-10) {
            Err(Error::Convergence { .. }) => {}
            other => panic!("expected ConvergenceError, got {:?}", other.map(|v| v.0)),
        }
    }

    #[test]
    fn empty_corrections_reduce_to_plain_quadrature() {
        let f = sym_laurent(vec![(0, c(1.5, 0.0)), (2, c(0.25, 0.5))]);
        let plain = circle_quadrature(&f, 64).unwrap();
        let corrected = residue_corrected_integral(&f, 64, &PoleList::default()).unwrap();
        assert!((plain - corrected).norm() < 1e-15);
    }

    #[test]
    fn partial_fraction_oracle() {
        // f(y) = 1/(y-a), |a| > 1. Contour enclosing a: integral of
        // f dy/(2 pi i y) = Res_0 + Res_a = -1/a + 1/a = 0 (partial fractions).
        let a = c(1.3, 0.4);
        let f = AnnulusEvaluator::univariate(Annulus::full(), false, move |y| Ok(1.0 / (y - a)));
        let poles = PoleList::from_entries(vec![PoleEntry {
            location: a,
            order: 1,
            residue_available: true,
            side: PoleSide::In,
        }]);
        let v = residue_corrected_integral(&f, 128, &poles).unwrap();
        assert!(v.norm() < 1e-12, "got {}", v);
        // Without the correction the plain quadrature gives only Res_0 = -1/a.
        let plain = circle_quadrature(&f, 128).unwrap();
        assert!((plain + 1.0 / a).norm() < 1e-12);
    }

    #[test]
    fn near_contour_pole_is_subtracted_cleanly() {
        // Pole at 1 + 1e-4: hopeless for the raw trapezoid, exact after
        // singular-part subtraction.
        let a = c(1.0 + 1e-4, 0.0);
        let f = AnnulusEvaluator::univariate(Annulus::full(), false, move |y| Ok(1.0 / (y - a)));
        let poles = PoleList::from_entries(vec![PoleEntry {
            location: a,
            order: 1,
            residue_available: true,
            side: PoleSide::In,
        }]);
        let v = residue_corrected_integral(&f, 128, &poles).unwrap();
        assert!(v.norm() < 1e-10, "got {}", v);
    }

    #[test]
    fn double_pole_is_rejected() {
        let a = c(1.2, 0.0);
        let f = AnnulusEvaluator::univariate(Annulus::full(), false, move |y| {
            Ok(1.0 / ((y - a) * (y - a)))
        });
        let poles = PoleList::from_entries(vec![PoleEntry {
            location: a,
            order: 1,
            residue_available: true,
            side: PoleSide::In,
        }]);
        match residue_corrected_integral(&f, 64, &poles) {
            Err(Error::Residue { .. }) => {}
            other => panic!("expected ResidueError, got {:?}", other),
        }
    }

    #[test]
    fn pole_scan_classifies_inside_poles() {
        // |t y1^{+-1}| < |q|^{1/2} => every "in" pole strictly inside.
        let p = c(0.3, 0.0);
        let q = c(0.25, 0.0);
        let t = c(0.3, 0.1); // |t| = 0.316 < sqrt(0.25) = 0.5
        let y1 = c(0.8, 0.6); // unit modulus
        let list = pole_scan(t, y1, p, q);
        for e in &list.entries {
            match e.side {
                PoleSide::In => assert!(e.location.norm() < 1.0),
                PoleSide::Out => assert!(e.location.norm() > 1.0),
            }
        }
        assert!(list.min_contour_distance() > 0.0);
    }

    #[test]
    fn pole_scan_symmetric_pairs_for_real_t() {
        let p = c(0.2, 0.0);
        let q = c(0.2, 0.0);
        let list = pole_scan(c(0.4, 0.0), c(1.0, 0.0), p, q);
        // t real, y1 = 1: in-poles collapse pairwise (t y1 = t / y1).
        for e in &list.entries {
            assert!(e.location.im.abs() < 1e-14);
        }
    }

    #[test]
    fn pole_scan_flags_pinching_configuration() {
        // t^2 = q^{-1}: the in-pole t q and out-pole 1/(t q) coincide on
        // moduli with |t q| = |t|^{-1}... the scan reports distance ~ 0 when
        // |t q^k| hits 1.
        let q = c(0.25, 0.0);
        let t = c(2.0, 0.0); // t^2 = 4 = q^{-1}
        let list = pole_scan(t, c(1.0, 0.0), c(0.2, 0.0), q);
        assert!(list.min_contour_distance() < 1e-12);
    }
}
