//! The intertwining relations: the integral operator conjugates the
//! difference-operator generators at spin l into the generators at spin
//! -1-l (the g -> -g flip), for both the base realization and its
//! modular-double partner.

use num_complex::Complex64;

use super::{timed, CheckOutcome, DrawResult, SuiteConfig, Sampler};
use crate::error::{Error, Result};
use crate::operators::{s1_apply, OperatorParams, Role, YFn};
use crate::sklyanin::{make_generator, test_function_family, zfn, Variant, ZFn};
use crate::special_fn::{cis2pi, EllipticModuli, Regime};

/// Which tensor slot the integral operator acts in. The two slots carry the
/// same kernel; the label keeps reports distinguishable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntertwineAxis {
    S1,
    S3,
}

fn variant_shift(variant: Variant, moduli: &EllipticModuli) -> Complex64 {
    match variant {
        Variant::ModularPartner => match moduli.regime {
            Regime::QGreater1 => -moduli.tau / 2.0,
            _ => moduli.tau / 2.0,
        },
        _ => moduli.eta,
    }
}

/// Kernel-parameter magnitude cap for the variant: the eta- or tau/2-shifts
/// compound the margins of the kernel inequality.
fn t_cap(variant: Variant, moduli: &EllipticModuli) -> Result<f64> {
    let kq = moduli.kernel_q()?.norm();
    Ok(match variant {
        Variant::ModularPartner => 0.7 * (kq * moduli.p.norm()).sqrt(),
        _ => 0.7 * kq,
    })
}

fn intertwine_residual(
    sampler: &mut Sampler,
    cfg: &SuiteConfig,
    variant: Variant,
    flip_correctly: bool,
) -> Result<(f64, String)> {
    let moduli = sampler.moduli(
        cfg.regime,
        (cfg.p_range.0.max(0.08), cfg.p_range.1.min(0.3)),
        (cfg.q_range.0.max(0.08), cfg.q_range.1.min(0.3)),
    )?;
    let cap = t_cap(variant, &moduli)?;
    let t = sampler.complex_in_annulus(0.5 * cap, cap);
    let params = OperatorParams::from_t(Role::S1, t, moduli)?;
    params.check_exceptional()?;
    // g = eta (2l + 1) is the operator argument; recover the spin.
    let g = params.a;
    let ell = (g / moduli.eta - 1.0) / 2.0;
    let ell_flipped = if flip_correctly { -1.0 - ell } else { ell };

    let family = test_function_family(&moduli);
    let fns: Vec<ZFn> = vec![family[1].clone(), family[3].clone()];
    let shift = variant_shift(variant, &moduli);
    let n = cfg.grid_n;
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);

    let mut worst = 0.0f64;
    for f_add in &fns {
        // Multiplicative view of f; periodicity makes the branch irrelevant.
        let f_mult: YFn = {
            let f = f_add.clone();
            std::sync::Arc::new(move |y: Complex64| f(y.ln() / two_pi_i))
        };
        // h = S1 f as a function of z, for the right-hand side.
        let h_add: ZFn = {
            let params = params;
            let f_mult = f_mult.clone();
            zfn(move |z| s1_apply(&params, &f_mult, cis2pi(z), n))
        };
        for &z0 in &crate::sklyanin::halton_circle_points(3) {
            let mut pairs = Vec::with_capacity(4);
            for a in 0..4 {
                let gen_l = make_generator(a, ell, &moduli, variant)?;
                let gen_flip = make_generator(a, ell_flipped, &moduli, variant)?;
                // LHS: S1 applied to (S^a(l) f).
                let gf_add = gen_l.bind(f_add.clone());
                let gf_mult: YFn = {
                    let g = gf_add.clone();
                    std::sync::Arc::new(move |y: Complex64| g(y.ln() / two_pi_i))
                };
                let lhs = s1_apply(&params, &gf_mult, cis2pi(z0), n)?;
                // RHS: S^a(-1-l) applied to (S1 f).
                let rhs = gen_flip.apply(&h_add, z0)?;
                pairs.push((lhs, rhs));
            }
            let scale = pairs
                .iter()
                .map(|(l, r)| l.norm().max(r.norm()))
                .fold(1.0f64, f64::max);
            for (l, r) in pairs {
                worst = worst.max((l - r).norm() / scale);
            }
        }
        let _ = shift;
    }
    Ok((
        worst,
        format!(
            "variant={:?} |t|={:.3} |p|={:.3} |q|={:.3}",
            variant,
            t.norm(),
            moduli.p.norm(),
            moduli.q.norm()
        ),
    ))
}

pub fn check_intertwining(
    cfg: &SuiteConfig,
    axis: IntertwineAxis,
    variant: Variant,
) -> Result<CheckOutcome> {
    if !matches!(variant, Variant::Modified | Variant::ModularPartner) {
        return Err(Error::domain(
            "intertwining suite covers the Modified and ModularPartner realizations",
        ));
    }
    let tol = cfg.tol(1e-7);
    let draws = cfg.draw_count(10);
    let axis_tag = match axis {
        IntertwineAxis::S1 => 0x51u64,
        IntertwineAxis::S3 => 0x53u64,
    };
    let variant_tag = match variant {
        Variant::ModularPartner => 0xD0B1u64,
        _ => 0x30D1u64,
    };
    let mut sampler = Sampler::new(cfg.seed, 0x1A7E ^ (axis_tag << 16) ^ variant_tag);
    let ((results, control), runtime_ms) = timed(|| {
        let mut results = Vec::with_capacity(draws);
        for _ in 0..draws {
            let (residual, params) = intertwine_residual(&mut sampler, cfg, variant, true)?;
            results.push(DrawResult { residual, params });
        }
        let (control, _) = intertwine_residual(&mut sampler, cfg, variant, false)?;
        Ok((results, control))
    })?;
    let id = format!(
        "intertwining_{}_{}",
        match axis {
            IntertwineAxis::S1 => "s1",
            IntertwineAxis::S3 => "s3",
        },
        match variant {
            Variant::ModularPartner => "partner",
            _ => "modified",
        }
    );
    Ok(CheckOutcome {
        identity_id: id,
        anchor: "Eq. (inter1) / Eq. (inter2)".into(),
        seed: cfg.seed,
        tolerance: tol,
        n_used: cfg.grid_n,
        draws: results,
        control_residual: control,
        control_floor: 1e-3,
        runtime_ms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modified_generators_are_intertwined() {
        let cfg = SuiteConfig { draws: Some(2), grid_n: 128, ..Default::default() };
        let out = check_intertwining(&cfg, IntertwineAxis::S1, Variant::Modified).unwrap();
        assert!(out.passed(), "max residual {}", out.max_residual());
        out.assert_control().unwrap();
    }

    #[test]
    fn spin_flip_is_involutive_on_parameters() {
        // l -> -1-l twice is the identity (g -> -g -> g).
        let ell = Complex64::new(0.23, 0.11);
        let flipped = -1.0 - (-1.0 - ell);
        assert!((flipped - ell).norm() < 1e-15);
    }

    #[test]
    fn partner_generators_are_intertwined_by_same_kernel() {
        let cfg = SuiteConfig { draws: Some(1), grid_n: 128, ..Default::default() };
        let out = check_intertwining(&cfg, IntertwineAxis::S3, Variant::ModularPartner).unwrap();
        assert!(out.passed(), "max residual {}", out.max_residual());
    }
}
