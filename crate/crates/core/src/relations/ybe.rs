//! The Yang-Baxter equation on a three-variable grid, in the permutation-free
//! form R23(u|v) R12(u|w) R23(v|w) = R12(v|w) R23(u|w) R12(u|v). The exact
//! word-level gate must pass before any numeric verdict is reported.

use num_complex::Complex64;

use super::{timed, CheckOutcome, DrawResult, SuiteConfig, Sampler};
use crate::error::{Error, Result};
use crate::operators::{r_factorized_apply, RPairArgs, TorusGrid};
use crate::perm::ybe_word_gate;
use crate::special_fn::{cis2pi, EllipticModuli};

struct YbeDraw {
    moduli: EllipticModuli,
    u: (Complex64, Complex64),
    v: (Complex64, Complex64),
    w: (Complex64, Complex64),
}

fn pair_args(a: (Complex64, Complex64), b: (Complex64, Complex64)) -> RPairArgs {
    RPairArgs { alpha1: a.0, alpha2: a.1, beta1: b.0, beta2: b.1 }
}

/// Solve the joint margin system for three R-operators: every integral-factor
/// radius at most rho_int and every multiplier radius at most rho_s2 on the
/// grid (no off-circle shifts in the YBE composition).
fn ybe_draw(sampler: &mut Sampler, cfg: &SuiteConfig) -> Result<YbeDraw> {
    let rho_int = 0.5f64;
    let rho_s2 = 0.45f64;
    for _ in 0..500 {
        let moduli = sampler.moduli(cfg.regime, (0.05, cfg.p_range.1.min(0.11)), (0.05, cfg.q_range.1.min(0.11)))?;
        let root = (moduli.p * moduli.kernel_q()?).sqrt().norm();
        let beta = (1.0 / rho_int).ln() / (2.0 * std::f64::consts::PI);
        let gamma = (rho_s2 / root).ln() / (2.0 * std::f64::consts::PI);
        if gamma < 2.0 * beta + 0.02 {
            continue;
        }
        let h1 = beta + sampler.uniform(0.005, 0.02);
        let h2 = beta + sampler.uniform(0.005, 0.02);
        // |e^{-2 pi i (u_i - v_j)}| <= rho needs Im(u) < Im(v) < Im(w).
        let su = Complex64::new(sampler.uniform(-0.3, 0.3), -2.0 * (h1 + h2));
        let sv = Complex64::new(sampler.uniform(-0.3, 0.3), -2.0 * h2);
        let sw = Complex64::new(sampler.uniform(-0.3, 0.3), 0.0);
        let eta = moduli.eta;
        let mk_pair = |s: Complex64, g: Complex64| (s / 2.0 + g / 2.0, s / 2.0 - g / 2.0);
        let g1 = Complex64::new(sampler.uniform(-0.15, 0.15), 0.0);
        let g2 = Complex64::new(sampler.uniform(-0.15, 0.15), 0.0);
        let g3 = Complex64::new(sampler.uniform(-0.15, 0.15), 0.0);
        let _ = eta;
        let draw = YbeDraw {
            moduli,
            u: mk_pair(su, g1),
            v: mk_pair(sv, g2),
            w: mk_pair(sw, g3),
        };
        // Verify all twelve factor radii across the three parameter pairs.
        let pairs = [
            pair_args(draw.u, draw.v),
            pair_args(draw.u, draw.w),
            pair_args(draw.v, draw.w),
        ];
        let mut ok = true;
        for a in &pairs {
            if cis2pi(-a.s1_arg()).norm() > rho_int || cis2pi(-a.s3_arg()).norm() > rho_int {
                ok = false;
            }
            if root * cis2pi(a.outer_arg()).norm() > rho_s2
                || root * cis2pi(a.inner_arg()).norm() > rho_s2
            {
                ok = false;
            }
        }
        if ok {
            return Ok(draw);
        }
    }
    Err(Error::SamplerExhausted(500))
}

pub fn check_ybe(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    // Exact word-level gate first; a numeric pass without it is meaningless.
    if !ybe_word_gate()? {
        return Err(Error::domain("word-level Yang-Baxter gate failed"));
    }
    let tol = cfg.tol(1e-6);
    let n = if cfg.grid_n > 32 { 32 } else { cfg.grid_n };
    let draws = cfg.draw_count(3);
    let mut sampler = Sampler::new(cfg.seed, 0x9BE);
    let ((results, control), runtime_ms) = timed(|| {
        let run = |sampler: &mut Sampler, break_args: bool| -> Result<(f64, String)> {
            let draw = ybe_draw(sampler, cfg)?;
            let md = draw.moduli;
            let f = TorusGrid::from_fn(3, n, |c| {
                Ok((c[0] + 1.0 / c[0]) * (c[1] + 1.0 / c[1]) * (c[2] + 1.0 / c[2]))
            })?;
            // LHS: R23(u|v) R12(u|w) R23(v|w), rightmost first.
            let first_args = if break_args {
                pair_args(draw.u, draw.v) // deliberately wrong assignment
            } else {
                pair_args(draw.v, draw.w)
            };
            let mut lhs = r_factorized_apply(&f, (1, 2), &first_args, &md, false)?;
            lhs = r_factorized_apply(&lhs, (0, 1), &pair_args(draw.u, draw.w), &md, false)?;
            lhs = r_factorized_apply(&lhs, (1, 2), &pair_args(draw.u, draw.v), &md, false)?;
            // RHS: R12(v|w) R23(u|w) R12(u|v), rightmost first.
            let mut rhs = r_factorized_apply(&f, (0, 1), &pair_args(draw.u, draw.v), &md, false)?;
            rhs = r_factorized_apply(&rhs, (1, 2), &pair_args(draw.u, draw.w), &md, false)?;
            rhs = r_factorized_apply(&rhs, (0, 1), &pair_args(draw.v, draw.w), &md, false)?;
            let scale = lhs.sup_norm().max(rhs.sup_norm()).max(f.sup_norm());
            let residual = lhs.sup_distance(&rhs) / scale;
            Ok((
                residual,
                format!(
                    "|p|={:.3} |q|={:.3} Im(u)={:.3} Im(v)={:.3}",
                    md.p.norm(),
                    md.q.norm(),
                    (draw.u.0 + draw.u.1).im,
                    (draw.v.0 + draw.v.1).im
                ),
            ))
        };
        let mut results = Vec::with_capacity(draws);
        for _ in 0..draws {
            let (residual, params) = run(&mut sampler, false)?;
            results.push(DrawResult { residual, params });
        }
        let (control, _) = run(&mut sampler, true)?;
        Ok((results, control))
    })?;
    Ok(CheckOutcome {
        identity_id: "ybe".into(),
        anchor: "Eq. (RRR) / Eq. (YBEfull)".into(),
        seed: cfg.seed,
        tolerance: tol,
        n_used: n,
        draws: results,
        control_residual: control,
        control_floor: 1e-3,
        runtime_ms,
    })
}
