//! The verification suites: one operation per identity, each returning a
//! residual report over seeded parameter draws. Every suite also runs a
//! deliberately broken draw that must fail, guarding against vacuous passes.

mod appendix;
mod bailey;
mod beta;
mod coxeter;
mod discrete;
mod intertwine;
mod inversion;
mod rll;
mod sklyanin_suite;
mod ybe;

pub use appendix::check_appendix_sweep;
pub use bailey::{check_bailey_lemma, check_bailey_str};
pub use beta::check_beta_integral;
pub use coxeter::{check_coxeter_cubic, check_star_triangle_functional};
pub use discrete::check_discrete_sector;
pub use intertwine::{check_intertwining, IntertwineAxis};
pub use inversion::check_inversion;
pub use rll::check_rll;
pub use sklyanin_suite::check_sklyanin_algebra;
pub use ybe::check_ybe;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::report::ResidualReport;
use crate::special_fn::{EllipticModuli, Regime};

/// Knobs shared by every suite: the seed, grid size, tolerance override, the
/// kernel-base regime, and the sampler's moduli magnitude ranges.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub grid_n: usize,
    pub tolerance: Option<f64>,
    pub regime: Regime,
    pub p_range: (f64, f64),
    pub q_range: (f64, f64),
    pub draws: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0xE11157,
            grid_n: 128,
            tolerance: None,
            regime: Regime::QLess1,
            p_range: (0.05, 0.5),
            q_range: (0.05, 0.5),
            draws: None,
        }
    }
}

impl SuiteConfig {
    pub fn tol(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }
    pub fn draw_count(&self, default: usize) -> usize {
        self.draws.unwrap_or(default)
    }
}

/// Result of one parameter draw inside a suite.
#[derive(Debug, Clone)]
pub struct DrawResult {
    pub residual: f64,
    pub params: String,
}

/// Full outcome of a suite: every draw, the negative control, and the
/// aggregation into a report record.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub identity_id: String,
    pub anchor: String,
    pub seed: u64,
    pub tolerance: f64,
    pub n_used: usize,
    pub draws: Vec<DrawResult>,
    /// Residual of the deliberately broken draw; must exceed its floor.
    pub control_residual: f64,
    pub control_floor: f64,
    pub runtime_ms: u64,
}

impl CheckOutcome {
    pub fn max_residual(&self) -> f64 {
        self.draws.iter().map(|d| d.residual).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_residual() <= self.tolerance && self.control_residual > self.control_floor
    }

    pub fn to_report(&self) -> ResidualReport {
        let params = self
            .draws
            .first()
            .map(|d| d.params.clone())
            .unwrap_or_default();
        ResidualReport::new(
            self.identity_id.clone(),
            self.anchor.clone(),
            self.seed,
            params,
            self.max_residual(),
            self.tolerance,
            self.n_used,
            self.runtime_ms,
        )
    }

    /// Ensure the negative control actually failed; a passing control means
    /// the suite is vacuous and is reported as an error, not a pass.
    pub fn assert_control(&self) -> Result<()> {
        if self.control_residual <= self.control_floor {
            return Err(Error::domain(format!(
                "{}: negative control residual {:.3e} did not exceed floor {:.3e}",
                self.identity_id, self.control_residual, self.control_floor
            )));
        }
        Ok(())
    }
}

pub(crate) struct Sampler {
    pub rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64, tag: u64) -> Self {
        use rand::SeedableRng;
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15)) }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// Modulus log-uniform in [lo, hi], phase uniform.
    pub fn complex_in_annulus(&mut self, lo: f64, hi: f64) -> Complex64 {
        let m = (self.uniform(lo.ln(), hi.ln())).exp();
        let phase = self.uniform(0.0, 2.0 * std::f64::consts::PI);
        Complex64::from_polar(m, phase)
    }

    /// A point on the unit circle, bounded away from +-1.
    pub fn circle_point(&mut self) -> Complex64 {
        loop {
            let phase = self.uniform(0.0, 2.0 * std::f64::consts::PI);
            let frac = (phase / std::f64::consts::PI).fract().abs();
            if frac.min(1.0 - frac) > 0.02 {
                return Complex64::from_polar(1.0, phase);
            }
        }
    }

    /// Moduli with magnitudes in the given ranges; |q| > 1 regimes draw the
    /// reciprocal base in-range. Phases are kept mild so theta conditioning
    /// stays uniform across draws.
    pub fn moduli(
        &mut self,
        regime: Regime,
        p_range: (f64, f64),
        q_range: (f64, f64),
    ) -> Result<EllipticModuli> {
        let pm = (self.uniform(p_range.0.ln(), p_range.1.ln())).exp();
        let qm = (self.uniform(q_range.0.ln(), q_range.1.ln())).exp();
        let pp = Complex64::from_polar(pm, self.uniform(-0.6, 0.6));
        let qq = Complex64::from_polar(qm, self.uniform(-0.6, 0.6));
        match regime {
            Regime::QLess1 => EllipticModuli::from_bases(pp, qq),
            Regime::QGreater1 => EllipticModuli::from_bases(pp, 1.0 / qq),
            Regime::QUnitCircle => Err(Error::domain("no operator suites on |q| = 1")),
        }
    }
}

/// Relative sup-norm residual: sup |lhs - rhs| / max(1, sup |rhs|).
pub(crate) fn rel_sup_residual(pairs: &[(Complex64, Complex64)]) -> f64 {
    let scale = pairs.iter().map(|(_, r)| r.norm()).fold(1.0f64, f64::max);
    pairs
        .iter()
        .map(|(l, r)| (l - r).norm())
        .fold(0.0f64, f64::max)
        / scale
}

pub(crate) fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, u64)> {
    let start = std::time::Instant::now();
    let v = f()?;
    Ok((v, start.elapsed().as_millis() as u64))
}
