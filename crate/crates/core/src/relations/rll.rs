//! The defining RLL relation: R L1(u) sigma3 L2(v) = L1(v) sigma3 L2(u) R,
//! checked entrywise on two-variable test functions; with `double` set, the
//! L-operators are built from the modular-partner generators and the same
//! R-operator must intertwine them.

use num_complex::Complex64;

use super::{timed, CheckOutcome, DrawResult, SuiteConfig, Sampler};
use crate::error::{Error, Result};
use crate::operators::{grid_points, REvaluator, RPairArgs};
use crate::sklyanin::{l_operator, zfn, LOperator, Variant, ZFn};
use crate::special_fn::{cis2pi, EllipticModuli};

struct RllDraw {
    moduli: EllipticModuli,
    u: Complex64,
    v: Complex64,
    ell1: Complex64,
    ell2: Complex64,
}

impl RllDraw {
    fn g1(&self) -> Complex64 {
        self.moduli.eta * (2.0 * self.ell1 + 1.0)
    }
    fn g2(&self) -> Complex64 {
        self.moduli.eta * (2.0 * self.ell2 + 1.0)
    }
    fn args(&self) -> RPairArgs {
        let u1 = self.u / 2.0 + self.g1() / 2.0;
        let u2 = self.u / 2.0 - self.g1() / 2.0;
        let v1 = self.v / 2.0 + self.g2() / 2.0;
        let v2 = self.v / 2.0 - self.g2() / 2.0;
        RPairArgs { alpha1: u1, alpha2: u2, beta1: v1, beta2: v2 }
    }
}

/// Sample spectral data whose four argument differences keep every kernel
/// radius within the compounded margins for the variant's shift.
fn rll_draw(sampler: &mut Sampler, cfg: &SuiteConfig, double: bool) -> Result<RllDraw> {
    for _ in 0..200 {
        // The S2 no-pole condition at shifted points needs sqrt|pq| well
        // below the shift base: strongly separated moduli, orientation
        // depending on which base drives the shifts.
        let (p_range, q_range) = if double {
            ((0.32, 0.45), (0.05, 0.055))
        } else {
            ((0.05, 0.055), (0.32, 0.45))
        };
        let moduli = sampler.moduli(cfg.regime, p_range, q_range)?;
        let m_shift = if double { moduli.p.norm() } else { moduli.kernel_q()?.norm() };
        let rho_int = 0.33 * m_shift.sqrt();
        let rho_s2 = 0.4 * m_shift;
        let root = (moduli.p * moduli.kernel_q()?).sqrt().norm();
        if root >= rho_s2 {
            continue;
        }
        let beta = (1.0 / rho_int).ln() / (2.0 * std::f64::consts::PI);
        let gamma = (rho_s2 / root).ln() / (2.0 * std::f64::consts::PI);
        let h = beta * (1.0 + sampler.uniform(0.02, 0.2));
        let s_g = (h - gamma).max(0.0) + sampler.uniform(0.02, 0.1);
        let u = Complex64::new(sampler.uniform(-0.4, 0.4), 0.0);
        let v = u + Complex64::new(sampler.uniform(-0.3, 0.3), 2.0 * h);
        let g1 = Complex64::new(sampler.uniform(-0.2, 0.2), s_g);
        let g2 = Complex64::new(sampler.uniform(-0.2, 0.2), s_g * (1.0 + sampler.uniform(0.0, 0.1)));
        let ell1 = (g1 / moduli.eta - 1.0) / 2.0;
        let ell2 = (g2 / moduli.eta - 1.0) / 2.0;
        let draw = RllDraw { moduli, u, v, ell1, ell2 };
        let args = draw.args();
        // Verify every factor radius (the permutation convention makes the
        // integral arguments u_i - v_i and the multipliers u_i - v_j).
        let ok_int = [args.s1_arg(), args.s3_arg()]
            .iter()
            .all(|&a| cis2pi(-a).norm() <= rho_int);
        let ok_s2 = [args.outer_arg(), args.inner_arg()]
            .iter()
            .all(|&a| (root * cis2pi(a).norm()) <= rho_s2);
        if ok_int && ok_s2 {
            return Ok(draw);
        }
    }
    Err(Error::SamplerExhausted(200))
}

/// Value lookup over a small set of cached sample points.
fn lookup(cache: &[(Complex64, Complex64)], z: Complex64) -> Result<Complex64> {
    for (key, val) in cache {
        if (key - z).norm() < 1e-11 {
            return Ok(*val);
        }
    }
    Err(Error::domain(format!("uncached evaluation point {}", z)))
}

pub fn check_rll(cfg: &SuiteConfig, double: bool) -> Result<CheckOutcome> {
    let tol = cfg.tol(1e-6);
    let n = cfg.grid_n;
    let draws = cfg.draw_count(5);
    let variant = if double { Variant::ModularPartner } else { Variant::Modified };
    let mut sampler = Sampler::new(cfg.seed, if double { 0x2117 } else { 0x2116 });
    let ((results, control), runtime_ms) = timed(|| {
        let run = |sampler: &mut Sampler, swap_rhs: bool| -> Result<(f64, String)> {
            let draw = rll_draw(sampler, cfg, double)?;
            let md = draw.moduli;
            let args = draw.args();
            let shift = match variant {
                Variant::ModularPartner => md.tau / 2.0,
                _ => md.eta,
            };
            // Test functions, additive and on the grid.
            let phi: ZFn = zfn(|z| {
                let y = cis2pi(z);
                Ok(y + 1.0 / y + 0.4 * (y * y + 1.0 / (y * y)))
            });
            let psi: ZFn = zfn(|z| {
                let y = cis2pi(z);
                Ok(1.0 + 0.7 * (y + 1.0 / y))
            });

            let l1u = l_operator(draw.u, draw.ell1, &md, variant)?;
            let l2v = l_operator(draw.v, draw.ell2, &md, variant)?;
            // RHS L-operators carry the swapped parameter pairs.
            let (l1r, l2r) = if swap_rhs {
                (l_operator(draw.v, draw.ell2, &md, variant)?, l_operator(draw.u, draw.ell1, &md, variant)?)
            } else {
                (l_operator(draw.u, draw.ell1, &md, variant)?, l_operator(draw.v, draw.ell2, &md, variant)?)
            };

            // Left side: R applied to each entry of L1(u) s3 L2(v) f.
            // Entries of the product on factorized f = phi (x) psi:
            // h_ik = sum_j s3_j [L1_ij phi](x1) [L2_jk psi](x2).
            let pts = grid_points(n);
            let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
            let entry_tables = |l: &LOperator, f: &ZFn| -> Result<Vec<Vec<Complex64>>> {
                let mut tabs = vec![vec![Complex64::new(0.0, 0.0); n]; 4];
                for (m, &y) in pts.iter().enumerate() {
                    if m == 0 || m == n / 2 {
                        continue; // theta1(2z) zero; kernel short-circuits
                    }
                    let z = y.ln() / two_pi_i;
                    for i in 0..2 {
                        for j in 0..2 {
                            tabs[2 * i + j][m] = l.entry_apply(i, j, f, z)?;
                        }
                    }
                }
                Ok(tabs)
            };
            let a_tabs = entry_tables(&l1u, &phi)?;
            let b_tabs = entry_tables(&l2v, &psi)?;

            // R evaluator for the plain product f (right side).
            let mut f_vals = vec![Complex64::new(0.0, 0.0); n * n];
            for (i, &x) in pts.iter().enumerate() {
                let zx = x.ln() / two_pi_i;
                for (j, &y) in pts.iter().enumerate() {
                    let zy = y.ln() / two_pi_i;
                    f_vals[i * n + j] = phi(zx)? * psi(zy)?;
                }
            }
            let rf = REvaluator::from_values(&f_vals, args, md, false, n)?;

            let sample_z: Vec<(Complex64, Complex64)> = (0..3)
                .map(|_| {
                    let z1 = Complex64::new(sampler.uniform(0.05, 0.45), 0.0);
                    let z2 = Complex64::new(sampler.uniform(0.55, 0.95), 0.0);
                    (z1, z2)
                })
                .collect();

            let mut worst = 0.0f64;
            for &(z1, z2) in &sample_z {
                let y1 = cis2pi(z1);
                let y2 = cis2pi(z2);
                // Cache R f at the four shift combinations.
                let mut rf_cache: Vec<((Complex64, Complex64), Complex64)> = Vec::new();
                for s1 in [1.0, -1.0] {
                    for s2 in [1.0, -1.0] {
                        let w1 = cis2pi(z1 + s1 * shift);
                        let w2 = cis2pi(z2 + s2 * shift);
                        rf_cache.push(((z1 + s1 * shift, z2 + s2 * shift), rf.eval(w1, w2)?));
                    }
                }
                let mut pairs = Vec::with_capacity(4);
                for i in 0..2 {
                    for k in 0..2 {
                        // LHS: R applied to h_ik.
                        let mut h_vals = vec![Complex64::new(0.0, 0.0); n * n];
                        for m in 0..n {
                            for l in 0..n {
                                let mut acc = Complex64::new(0.0, 0.0);
                                for j in 0..2 {
                                    let s3 = if j == 0 { 1.0 } else { -1.0 };
                                    acc += s3 * a_tabs[2 * i + j][m] * b_tabs[2 * j + k][l];
                                }
                                h_vals[m * n + l] = acc;
                            }
                        }
                        let ev = REvaluator::from_values(&h_vals, args, md, false, n)?;
                        let lhs = ev.eval(y1, y2)?;
                        // RHS: (L1' s3 L2') applied to R f at (z1, z2).
                        // L2' acts in z2 on the cached R f values; L1' acts in
                        // z1 on the result, expanded over its two shifts.
                        let mut rhs = Complex64::new(0.0, 0.0);
                        for j in 0..2 {
                            let s3 = if j == 0 { 1.0 } else { -1.0 };
                            let inner_of_z1 = |z1p: Complex64| -> Result<Complex64> {
                                let curried: ZFn = {
                                    let cache = rf_cache.clone();
                                    zfn(move |z2p| {
                                        for ((a, b), v) in &cache {
                                            if (a - z1p).norm() < 1e-11 && (b - z2p).norm() < 1e-11 {
                                                return Ok(*v);
                                            }
                                        }
                                        Err(Error::domain("uncached rf point"))
                                    })
                                };
                                l2r.entry_apply(j, k, &curried, z2)
                            };
                            let vals: Vec<(Complex64, Complex64)> = [shift, -shift]
                                .iter()
                                .map(|&d| Ok((z1 + d, inner_of_z1(z1 + d)?)))
                                .collect::<Result<Vec<_>>>()?;
                            let wrapped: ZFn = {
                                let vals = vals.clone();
                                zfn(move |z| lookup(&vals, z))
                            };
                            rhs += s3 * l1r.entry_apply(i, j, &wrapped, z1)?;
                        }
                        pairs.push((lhs, rhs));
                    }
                }
                let scale = pairs
                    .iter()
                    .map(|(l, r)| l.norm().max(r.norm()))
                    .fold(1.0f64, f64::max);
                for (l, r) in pairs {
                    worst = worst.max((l - r).norm() / scale);
                }
            }
            Ok((
                worst,
                format!(
                    "double={} |p|={:.3} |q|={:.3} Im(v-u)={:.3}",
                    double,
                    md.p.norm(),
                    md.q.norm(),
                    (draw.v - draw.u).im
                ),
            ))
        };
        let mut results = Vec::with_capacity(draws);
        for _ in 0..draws {
            let (residual, params) = run(&mut sampler, true)?;
            results.push(DrawResult { residual, params });
        }
        // Negative control: forget to swap the RHS parameter pairs.
        let (control, _) = run(&mut sampler, false)?;
        Ok((results, control))
    })?;
    Ok(CheckOutcome {
        identity_id: if double { "rll_double".into() } else { "rll".into() },
        anchor: if double { "Eq. (RLL_doub)".into() } else { "Eq. (RLL')".into() },
        seed: cfg.seed,
        tolerance: tol,
        n_used: n,
        draws: results,
        control_residual: control,
        control_floor: 1e-4,
        runtime_ms,
    })
}
