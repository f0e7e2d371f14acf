//! The Bailey machinery: the operator star-triangle relation
//! M(s) D(st) M(t) = D(t) M(st) D(s) and the pair-regeneration lemma.

use num_complex::Complex64;

use super::{timed, CheckOutcome, DrawResult, SuiteConfig, Sampler};
use crate::error::{Error, Result};
use crate::operators::{bailey_d, bailey_m_matrix, grid_points};
use crate::special_fn::EllipticModuli;

/// Parameters with |s|, |t| < 1 and |sqrt{pq} y^{+-1}| < |st| with margin.
fn bailey_draw(sampler: &mut Sampler, cfg: &SuiteConfig) -> Result<(EllipticModuli, Complex64, Complex64, Complex64)> {
    for _ in 0..100 {
        let moduli = sampler.moduli(
            cfg.regime,
            (cfg.p_range.0, cfg.p_range.1.min(0.15)),
            (cfg.q_range.0, cfg.q_range.1.min(0.15)),
        )?;
        let s = sampler.complex_in_annulus(0.4, 0.7);
        let t = sampler.complex_in_annulus(0.4, 0.7);
        let root = (moduli.p * moduli.kernel_q()?).sqrt();
        if root.norm() <= 0.8 * (s * t).norm() {
            let y = sampler.circle_point();
            return Ok((moduli, s, t, y));
        }
    }
    Err(Error::SamplerExhausted(100))
}

/// Apply the diagonal D(s; y, .) to grid values.
fn d_diag(
    s: Complex64,
    y: Complex64,
    moduli: &EllipticModuli,
    vals: &mut [Complex64],
    pts: &[Complex64],
) -> Result<()> {
    for (v, &w) in vals.iter_mut().zip(pts) {
        *v *= bailey_d(s, y, w, moduli)?;
    }
    Ok(())
}

fn apply_matrix(m: &[Complex64], vals: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            acc += m[i * n + j] * vals[j];
        }
        out[i] = acc / n as f64;
    }
    out
}

pub fn check_bailey_str(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let tol = cfg.tol(1e-7);
    let n = cfg.grid_n;
    let draws = cfg.draw_count(10);
    let mut sampler = Sampler::new(cfg.seed, 0xBA11);
    let ((results, control), runtime_ms) = timed(|| {
        let run = |sampler: &mut Sampler, break_arg: bool| -> Result<(f64, String)> {
            let (moduli, s, t, y) = bailey_draw(sampler, cfg)?;
            let pts = grid_points(n);
            let f: Vec<Complex64> = pts.iter().map(|&z| z + 1.0 / z + 0.5).collect();
            let m_s = bailey_m_matrix(s, &moduli, n)?;
            let m_t = bailey_m_matrix(t, &moduli, n)?;
            let st = if break_arg { s * t * 1.03 } else { s * t };
            let m_st = bailey_m_matrix(st, &moduli, n)?;
            // LHS: M(s) D(st) M(t) f
            let mut lhs = apply_matrix(&m_t, &f, n);
            d_diag(st, y, &moduli, &mut lhs, &pts)?;
            let lhs = apply_matrix(&m_s, &lhs, n);
            // RHS: D(t) M(st) D(s) f
            let mut rhs = f.clone();
            d_diag(s, y, &moduli, &mut rhs, &pts)?;
            let mut rhs = apply_matrix(&m_st, &rhs, n);
            d_diag(t, y, &moduli, &mut rhs, &pts)?;
            let scale = rhs.iter().map(|v| v.norm()).fold(1.0f64, f64::max);
            let worst = lhs
                .iter()
                .zip(&rhs)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max)
                / scale;
            Ok((worst, format!("|s|={:.3},|t|={:.3},|p|={:.3},|q|={:.3}", s.norm(), t.norm(), moduli.p.norm(), moduli.q.norm())))
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
        identity_id: "bailey_str".into(),
        anchor: "Eq. (STR)".into(),
        seed: cfg.seed,
        tolerance: tol,
        n_used: n,
        draws: results,
        control_residual: control,
        control_floor: 1e-3,
        runtime_ms,
    })
}

/// Pair regeneration: given beta = M(t) alpha, the primed pair
/// alpha' = D(s) alpha, beta' = D(t^{-1}) M(s) D(st) beta satisfies
/// beta' = M(st) alpha'.
pub fn check_bailey_lemma(cfg: &SuiteConfig) -> Result<CheckOutcome> {
    let tol = cfg.tol(1e-7);
    let n = cfg.grid_n;
    let draws = cfg.draw_count(5);
    let mut sampler = Sampler::new(cfg.seed, 0xB1E5);
    let ((results, control), runtime_ms) = timed(|| {
        let run = |sampler: &mut Sampler, break_arg: bool| -> Result<(f64, String)> {
            let (moduli, s, t, y) = bailey_draw(sampler, cfg)?;
            let pts = grid_points(n);
            // Germ pair: alpha analytic near the circle, beta = M(t) alpha.
            let alpha: Vec<Complex64> = pts
                .iter()
                .map(|&z| 1.0 + 0.5 * (z + 1.0 / z) + 0.2 * (z * z + 1.0 / (z * z)))
                .collect();
            let m_t = bailey_m_matrix(t, &moduli, n)?;
            let beta = apply_matrix(&m_t, &alpha, n);
            // alpha' = D(s; y, .) alpha
            let mut alpha_p = alpha.clone();
            d_diag(s, y, &moduli, &mut alpha_p, &pts)?;
            // beta' = D(t^{-1}) M(s) D(st) beta
            let st = if break_arg { s * t * 1.03 } else { s * t };
            let mut beta_p = beta;
            d_diag(st, y, &moduli, &mut beta_p, &pts)?;
            let m_s = bailey_m_matrix(s, &moduli, n)?;
            let mut beta_p = apply_matrix(&m_s, &beta_p, n);
            d_diag(1.0 / t, y, &moduli, &mut beta_p, &pts)?;
            // Check beta' = M(st) alpha'.
            let m_st = bailey_m_matrix(s * t, &moduli, n)?;
            let expect = apply_matrix(&m_st, &alpha_p, n);
            let scale = expect.iter().map(|v| v.norm()).fold(1.0f64, f64::max);
            let worst = beta_p
                .iter()
                .zip(&expect)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max)
                / scale;
            Ok((worst, format!("|s|={:.3},|t|={:.3}", s.norm(), t.norm())))
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
        identity_id: "bailey_lemma".into(),
        anchor: "Eq. (BL)".into(),
        seed: cfg.seed,
        tolerance: tol,
        n_used: n,
        draws: results,
        control_residual: control,
        control_floor: 1e-3,
        runtime_ms,
    })
}
