//! Sklyanin-algebra generators as two-term difference operators (all four
//! realizations used downstream), spectral-parameter bookkeeping, L-operators
//! and their M-shift-N factorization, structure constants and Casimirs.

mod matrices;

pub use matrices::{baxter_r_matrix, mat2_mul, mn_product_nm, mn_product_nsm, m_matrix, n_matrix, sigma, x_beta_conjugate, Mat2, Mat4};

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special_fn::{cis2pi, jacobi_theta, theta_bar, EllipticModuli, Regime};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A function of one additive torus variable z. Difference operators act on
/// these; y = e^{2 pi i z} bridges to the multiplicative picture.
pub type ZFn = Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>;

pub fn zfn(f: impl Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static) -> ZFn {
    Arc::new(f)
}

/// Spectral parameters, spins, and their derived combinations. u, v and the
/// g's are treated as independent of eta and tau.
#[derive(Debug, Clone, Copy)]
pub struct SpectralData {
    pub u: Complex64,
    pub v: Complex64,
    pub w: Complex64,
    pub l1: Complex64,
    pub l2: Complex64,
    pub l3: Complex64,
    pub moduli: EllipticModuli,
}

impl SpectralData {
    pub fn g1(&self) -> Complex64 {
        self.moduli.eta * (2.0 * self.l1 + 1.0)
    }
    pub fn g2(&self) -> Complex64 {
        self.moduli.eta * (2.0 * self.l2 + 1.0)
    }
    pub fn g3(&self) -> Complex64 {
        self.moduli.eta * (2.0 * self.l3 + 1.0)
    }
    pub fn u1(&self) -> Complex64 {
        self.u / 2.0 + self.g1() / 2.0
    }
    pub fn u2(&self) -> Complex64 {
        self.u / 2.0 - self.g1() / 2.0
    }
    pub fn v1(&self) -> Complex64 {
        self.v / 2.0 + self.g2() / 2.0
    }
    pub fn v2(&self) -> Complex64 {
        self.v / 2.0 - self.g2() / 2.0
    }
    pub fn w1(&self) -> Complex64 {
        self.w / 2.0 + self.g3() / 2.0
    }
    pub fn w2(&self) -> Complex64 {
        self.w / 2.0 - self.g3() / 2.0
    }
    /// t = e^{2 pi i (u2 - u1)} = e^{-2 pi i g1}.
    pub fn t_mult(&self) -> Complex64 {
        cis2pi(self.u2() - self.u1())
    }
}

/// Which realization of the generators to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// The original difference-operator realization.
    Standard,
    /// Conjugated by e^{pi i z^2/eta}: theta coefficients acquire e^{-+2 pi i z}
    /// factors and the prefactor e^{-pi i eta}. In the |q| > 1 regime the
    /// conjugation sign flips with it.
    Modified,
    /// The algebra automorphism adding 1/2 to the spin-dependent theta
    /// arguments; Casimirs move from theta_1 to theta_2 values.
    HalfShifted,
    /// The elliptic-modular-double partner: 2 eta and tau swapped (same g).
    ModularPartner,
    /// The second modular double: quasi-period permutation sending
    /// (eta, tau, z, g) to (1/4eta, tau/2eta, z/2eta, (g - 1/2)/2eta).
    SecondDouble,
}

/// One realization term: coefficient(z) times the shift z -> z + delta.
#[derive(Clone)]
struct Term {
    coeff: Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>,
    shift: Complex64,
}

/// A two-term difference operator with theta-function coefficients.
#[derive(Clone)]
pub struct DifferenceOperator {
    terms: Vec<Term>,
    pub variant: Variant,
}

impl DifferenceOperator {
    pub fn apply(&self, f: &ZFn, z: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            acc += (t.coeff)(z)? * f(z + t.shift)?;
        }
        Ok(acc)
    }

    /// (self o inner) f at z, without building an intermediate closure.
    pub fn compose_apply(&self, inner: &DifferenceOperator, f: &ZFn, z: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            acc += (t.coeff)(z)? * inner.apply(f, z + t.shift)?;
        }
        Ok(acc)
    }

    /// Sum of |term| over the expansion of (self o inner) f at z: the scale
    /// against which cancellation in the composition is measurable in f64.
    pub fn compose_apply_abs(&self, inner: &DifferenceOperator, f: &ZFn, z: Complex64) -> Result<f64> {
        let mut acc = 0.0f64;
        for t in &self.terms {
            let c_out = (t.coeff)(z)?.norm();
            for s in &inner.terms {
                let zi = z + t.shift;
                acc += c_out * (s.coeff)(zi)?.norm() * f(zi + s.shift)?.norm();
            }
        }
        Ok(acc)
    }

    /// The operator applied to f, packaged as a new ZFn.
    pub fn bind(&self, f: ZFn) -> ZFn {
        let op = self.clone();
        zfn(move |z| op.apply(&f, z))
    }

    /// Largest |e^{2 pi i delta}| over the terms: the multiplicative factor
    /// by which one application shrinks an annulus of analyticity.
    pub fn shift_magnitude(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let m = cis2pi(t.shift).norm();
                m.max(1.0 / m)
            })
            .fold(1.0, f64::max)
    }
}

fn guard_theta1(v: Complex64, z: Complex64) -> Result<Complex64> {
    if v.norm() < 1e-12 {
        return Err(Error::domain(format!("theta1(2z) vanishes at z = {}", z)));
    }
    Ok(v)
}

/// Effective (eta, tau) of the Sklyanin algebra a variant realizes; the
/// structure constants and Casimir scalars are evaluated there.
pub fn effective_parameters(variant: Variant, moduli: &EllipticModuli) -> Result<(Complex64, Complex64)> {
    let (eta, tau) = (moduli.eta, moduli.tau);
    match variant {
        Variant::Standard | Variant::Modified | Variant::HalfShifted => Ok((eta, tau)),
        Variant::ModularPartner => match moduli.regime {
            Regime::QLess1 => Ok((tau / 2.0, 2.0 * eta)),
            Regime::QGreater1 => Ok((-tau / 2.0, -2.0 * eta)),
            Regime::QUnitCircle => Err(Error::domain("no modular partner on |q| = 1")),
        },
        Variant::SecondDouble => Ok((1.0 / (4.0 * eta), tau / (2.0 * eta))),
    }
}

/// Generator S^a (a = 0..3) with spin `ell` in the requested realization.
pub fn make_generator(
    a: usize,
    ell: Complex64,
    moduli: &EllipticModuli,
    variant: Variant,
) -> Result<DifferenceOperator> {
    if a > 3 {
        return Err(Error::domain(format!("generator index {} not in 0..3", a)));
    }
    let eta = moduli.eta;
    let tau = moduli.tau;
    let g = eta * (2.0 * ell + 1.0);
    let j = (a + 1) as u8;
    let phase = if a == 2 { I } else { Complex64::new(1.0, 0.0) };
    let i_pi = Complex64::new(0.0, std::f64::consts::PI);

    // Each arm packages (prefactor, theta modulus m, coefficient argument
    // builder, exponential factor exponent in z, shift).
    let build = |pref: Complex64,
                 modulus: Complex64,
                 eta_c: Complex64,      // argument of the constant theta_{a+1}
                 arg_plus: Complex64,   // theta arg is  2 z * slope + arg_plus
                 slope: Complex64,
                 expz: Complex64,       // coefficient carries e^{expz * z}
                 shift: Complex64,
                 theta1_arg_slope: Complex64|
     -> Result<DifferenceOperator> {
        let up = move |z: Complex64| -> Result<Complex64> {
            let t1 = guard_theta1(jacobi_theta(1, theta1_arg_slope * z, modulus)?, z)?;
            let c = pref * phase * jacobi_theta(j, eta_c, modulus)?
                * jacobi_theta(j, slope * z + arg_plus, modulus)?
                * (expz * z).exp()
                / t1;
            Ok(c)
        };
        let down = move |z: Complex64| -> Result<Complex64> {
            let t1 = guard_theta1(jacobi_theta(1, theta1_arg_slope * z, modulus)?, z)?;
            let c = -pref * phase * jacobi_theta(j, eta_c, modulus)?
                * jacobi_theta(j, -slope * z + arg_plus, modulus)?
                * (-expz * z).exp()
                / t1;
            Ok(c)
        };
        Ok(DifferenceOperator {
            terms: vec![
                Term { coeff: Arc::new(up), shift },
                Term { coeff: Arc::new(down), shift: -shift },
            ],
            variant,
        })
    };

    let two = Complex64::new(2.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    match variant {
        Variant::Standard => build(
            Complex64::new(1.0, 0.0),
            tau,
            eta,
            -2.0 * eta * ell,
            two,
            zero,
            eta,
            two,
        ),
        Variant::HalfShifted => build(
            Complex64::new(1.0, 0.0),
            tau,
            eta,
            -2.0 * eta * ell + 0.5,
            two,
            zero,
            eta,
            two,
        ),
        Variant::Modified => match moduli.regime {
            Regime::QLess1 => build(
                (-i_pi * eta).exp(),
                tau,
                eta,
                -g + eta,
                two,
                -2.0 * i_pi,
                eta,
                two,
            ),
            Regime::QGreater1 => build(
                (i_pi * eta).exp(),
                tau,
                eta,
                -2.0 * eta * ell,
                two,
                2.0 * i_pi,
                eta,
                two,
            ),
            Regime::QUnitCircle => Err(Error::domain("Modified generators need |q| != 1")),
        },
        Variant::ModularPartner => match moduli.regime {
            Regime::QLess1 => build(
                (-i_pi * tau / 2.0).exp(),
                2.0 * eta,
                tau / 2.0,
                -g + tau / 2.0,
                two,
                -2.0 * i_pi,
                tau / 2.0,
                two,
            ),
            Regime::QGreater1 => build(
                (-i_pi * tau / 2.0).exp(),
                -2.0 * eta,
                -tau / 2.0,
                -g - tau / 2.0,
                two,
                2.0 * i_pi,
                -tau / 2.0,
                two,
            ),
            Regime::QUnitCircle => Err(Error::domain("no modular partner on |q| = 1")),
        },
        Variant::SecondDouble => {
            if moduli.regime != Regime::QLess1 {
                return Err(Error::domain("SecondDouble generators need |q| < 1"));
            }
            let tau_d = tau / (2.0 * eta);
            if tau_d.im <= 0.0 {
                return Err(Error::domain("SecondDouble needs Im(tau/2eta) > 0"));
            }
            build(
                (-i_pi / (4.0 * eta)).exp(),
                tau_d,
                1.0 / (4.0 * eta),
                (-g + 1.0) / (2.0 * eta),
                1.0 / eta,
                -i_pi / eta,
                Complex64::new(0.5, 0.0),
                1.0 / eta,
            )
        }
    }
}

/// The six structure constants of the quadratic relations, evaluated at the
/// given (eta, tau).
#[derive(Debug, Clone, Copy)]
pub struct StructureConstants {
    pub j12: Complex64,
    pub j23: Complex64,
    pub j31: Complex64,
    pub j1: Complex64,
    pub j2: Complex64,
    pub j3: Complex64,
}

pub fn structure_constants_at(eta: Complex64, tau: Complex64) -> Result<StructureConstants> {
    let th = |j: u8, x: Complex64| jacobi_theta(j, x, tau);
    let zero = Complex64::new(0.0, 0.0);
    for j in 2..=4 {
        if th(j, eta)?.norm() < 1e-12 {
            return Err(Error::domain(format!("theta_{}(eta) vanishes", j)));
        }
    }
    let t1 = th(1, eta)?;
    let t2 = th(2, eta)?;
    let t3 = th(3, eta)?;
    let t4 = th(4, eta)?;
    Ok(StructureConstants {
        j12: (t1 * t1 * t4 * t4) / (t2 * t2 * t3 * t3),
        j23: (t1 * t1 * t2 * t2) / (t3 * t3 * t4 * t4),
        j31: -(t1 * t1 * t3 * t3) / (t2 * t2 * t4 * t4),
        j1: th(2, 2.0 * eta)? * th(2, zero)? / (t2 * t2),
        j2: th(3, 2.0 * eta)? * th(3, zero)? / (t3 * t3),
        j3: th(4, 2.0 * eta)? * th(4, zero)? / (t4 * t4),
    })
}

pub fn structure_constants(moduli: &EllipticModuli) -> Result<StructureConstants> {
    structure_constants_at(moduli.eta, moduli.tau)
}

/// The scalar Casimir values (K0, K2) a spin-ell representation must
/// reproduce. HalfShifted moves them to theta_2; the modular doubles evaluate
/// theta_1 at their effective parameters.
pub fn casimir_scalars(ell: Complex64, moduli: &EllipticModuli, variant: Variant) -> Result<(Complex64, Complex64)> {
    let (eta_e, tau_e) = effective_parameters(variant, moduli)?;
    // The doubles share the caller's g = eta (2 ell + 1); only the effective
    // lattice parameters move.
    let g = match variant {
        Variant::SecondDouble => {
            (moduli.eta * (2.0 * ell + 1.0) - 0.5) / (2.0 * moduli.eta)
        }
        _ => moduli.eta * (2.0 * ell + 1.0),
    };
    let kind = if variant == Variant::HalfShifted { 2 } else { 1 };
    let k0 = jacobi_theta(kind, g, tau_e)?;
    let k2 = jacobi_theta(kind, g + eta_e, tau_e)? * jacobi_theta(kind, g - eta_e, tau_e)?;
    Ok((4.0 * k0 * k0, 4.0 * k2))
}

/// Effective spin fed to ModularPartner / SecondDouble generator
/// construction so that their g matches the caller's g (the doubles share
/// the same independent g-parameter).
pub fn casimir_check(
    ell: Complex64,
    moduli: &EllipticModuli,
    variant: Variant,
    testfns: &[ZFn],
    points: &[Complex64],
) -> Result<f64> {
    let gens: Vec<DifferenceOperator> = (0..4)
        .map(|a| make_generator(a, ell, moduli, variant))
        .collect::<Result<_>>()?;
    let (eta_e, tau_e) = effective_parameters(variant, moduli)?;
    let sc = structure_constants_at(eta_e, tau_e)?;
    let (k0, k2) = casimir_scalars(ell, moduli, variant)?;
    let j_alpha = [sc.j1, sc.j2, sc.j3];

    let mut worst = 0.0f64;
    for f in testfns {
        for &z in points {
            let fv = f(z)?;
            let mut acc0 = Complex64::new(0.0, 0.0);
            let mut acc2 = Complex64::new(0.0, 0.0);
            for a in 0..4 {
                let ssf = gens[a].compose_apply(&gens[a], f, z)?;
                acc0 += ssf;
                if a >= 1 {
                    acc2 += j_alpha[a - 1] * ssf;
                }
            }
            let scale0 = (k0 * fv).norm().max(1.0);
            let scale2 = (k2 * fv).norm().max(1.0);
            worst = worst.max((acc0 - k0 * fv).norm() / scale0);
            worst = worst.max((acc2 - k2 * fv).norm() / scale2);
        }
    }
    Ok(worst)
}

/// Max residual of the quadratic Sklyanin relations over the test set:
///   S^al S^be - S^be S^al = i (S^0 S^ga + S^ga S^0)
///   S^0 S^al - S^al S^0  = i J_{be ga} (S^be S^ga + S^ga S^be)
/// for cyclic (al, be, ga).
pub fn quadratic_relations_residual(
    ell: Complex64,
    moduli: &EllipticModuli,
    variant: Variant,
    testfns: &[ZFn],
    points: &[Complex64],
) -> Result<f64> {
    let gens: Vec<DifferenceOperator> = (0..4)
        .map(|a| make_generator(a, ell, moduli, variant))
        .collect::<Result<_>>()?;
    let (eta_e, tau_e) = effective_parameters(variant, moduli)?;
    let sc = structure_constants_at(eta_e, tau_e)?;
    let j_of = |b: usize, c: usize| -> Complex64 {
        match (b, c) {
            (1, 2) => sc.j12,
            (2, 3) => sc.j23,
            (3, 1) => sc.j31,
            _ => unreachable!(),
        }
    };

    let mut worst = 0.0f64;
    for f in testfns {
        for &z in points {
            for (al, be, ga) in [(1usize, 2usize, 3usize), (2, 3, 1), (3, 1, 2)] {
                let ab = gens[al].compose_apply(&gens[be], f, z)?;
                let ba = gens[be].compose_apply(&gens[al], f, z)?;
                let zg = gens[0].compose_apply(&gens[ga], f, z)?;
                let gz = gens[ga].compose_apply(&gens[0], f, z)?;
                let lhs = ab - ba;
                let rhs = I * (zg + gz);
                // Normalize by the absolute term sums: cancellation below
                // that scale is indistinguishable from f64 rounding.
                let scale = gens[al]
                    .compose_apply_abs(&gens[be], f, z)?
                    .max(gens[0].compose_apply_abs(&gens[ga], f, z)?)
                    .max(1.0);
                worst = worst.max((lhs - rhs).norm() / scale);

                let za = gens[0].compose_apply(&gens[al], f, z)?;
                let az = gens[al].compose_apply(&gens[0], f, z)?;
                let bg = gens[be].compose_apply(&gens[ga], f, z)?;
                let gb = gens[ga].compose_apply(&gens[be], f, z)?;
                let lhs = za - az;
                let rhs = I * j_of(be, ga) * (bg + gb);
                let scale = gens[0]
                    .compose_apply_abs(&gens[al], f, z)?
                    .max(j_of(be, ga).norm() * gens[be].compose_apply_abs(&gens[ga], f, z)?)
                    .max(1.0);
                worst = worst.max((lhs - rhs).norm() / scale);
            }
        }
    }
    Ok(worst)
}

/// A 2x2 matrix of first-order difference operators: the L-operator
/// L = sum_a w_a(u) sigma_a (x) S^a.
pub struct LOperator {
    /// entries[i][j] as (coefficient, generator index) sums.
    weights: [Complex64; 4],
    gens: Vec<DifferenceOperator>,
}

impl LOperator {
    /// Apply entry (i,j) to f at z.
    pub fn entry_apply(&self, i: usize, j: usize, f: &ZFn, z: Complex64) -> Result<Complex64> {
        let w = &self.weights;
        let combo: [(Complex64, usize); 2] = match (i, j) {
            (0, 0) => [(w[0], 0), (w[3], 3)],
            (0, 1) => [(w[1], 1), (-I * w[2], 2)],
            (1, 0) => [(w[1], 1), (I * w[2], 2)],
            (1, 1) => [(w[0], 0), (-w[3], 3)],
            _ => return Err(Error::domain("L-operator entry out of range")),
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, a) in combo {
            acc += c * self.gens[a].apply(f, z)?;
        }
        Ok(acc)
    }

    pub fn weights(&self) -> [Complex64; 4] {
        self.weights
    }
}

/// Build L(u1, u2) for the given spin and variant. Baxter weights
/// w_a(u) = theta_{a+1}(u + eta_w | tau_w) / theta_{a+1}(eta_w | tau_w) with
/// (eta_w, tau_w) the variant's effective parameters.
pub fn l_operator(
    u: Complex64,
    ell: Complex64,
    moduli: &EllipticModuli,
    variant: Variant,
) -> Result<LOperator> {
    let (eta_w, tau_w) = effective_parameters(variant, moduli)?;
    let mut weights = [Complex64::new(0.0, 0.0); 4];
    for a in 0..4 {
        let j = (a + 1) as u8;
        let den = jacobi_theta(j, eta_w, tau_w)?;
        if den.norm() < 1e-12 {
            return Err(Error::domain(format!("theta_{}(eta) vanishes in Baxter weights", j)));
        }
        weights[a] = jacobi_theta(j, u + eta_w, tau_w)? / den;
    }
    let gens: Vec<DifferenceOperator> = (0..4)
        .map(|a| make_generator(a, ell, moduli, variant))
        .collect::<Result<_>>()?;
    Ok(LOperator { weights, gens })
}

/// Entry (i,k) of the factorized form
/// (1/theta_1(2z)) M(z -+ u1) diag(e^{eta d}, e^{-eta d}) N(z -+ u2)
/// applied to f at z. `half_shift` applies the u1 -> u1 - 1/4, u2 -> u2 + 1/4
/// replacement of the half-shifted automorphism.
pub fn factorized_l_apply(
    i: usize,
    k: usize,
    u1: Complex64,
    u2: Complex64,
    moduli: &EllipticModuli,
    half_shift: bool,
    f: &ZFn,
    z: Complex64,
) -> Result<Complex64> {
    let tau = moduli.tau;
    let eta = moduli.eta;
    let (u1, u2) = if half_shift { (u1 - 0.25, u2 + 0.25) } else { (u1, u2) };
    let t1 = guard_theta1(jacobi_theta(1, 2.0 * z, tau)?, z)?;
    let shifts = [eta, -eta];
    let mut acc = Complex64::new(0.0, 0.0);
    for (jj, &dz) in shifts.iter().enumerate() {
        let m = m_matrix(z - u1, z + u1, tau)?;
        let zs = z + dz;
        let n = n_matrix(zs - u2, zs + u2, tau)?;
        acc += m[i][jj] * n[jj][k] * f(zs)?;
    }
    Ok(acc / t1)
}

/// 20 deterministic Halton points on the real z-interval [0,1), filtered to
/// keep theta_1(2z) away from its zeros (dist(2z, Z) >= 1e-2).
pub fn halton_circle_points(count: usize) -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(count);
    let mut k = 1u32;
    while pts.len() < count {
        // van der Corput base 2
        let mut x = 0.0f64;
        let mut denom = 1.0f64;
        let mut n = k;
        while n > 0 {
            denom *= 2.0;
            x += (n % 2) as f64 / denom;
            n /= 2;
        }
        k += 1;
        let frac2 = (2.0 * x).fract();
        if frac2.min(1.0 - frac2) >= 1e-2 {
            pts.push(Complex64::new(x, 0.0));
        }
    }
    pts
}

/// The fixed test-function family: {1, y + 1/y, y^2 + 1/y^2, th3bar(z),
/// th4bar(z), th3bar(z) th4bar(z)} with y = e^{2 pi i z}.
pub fn test_function_family(moduli: &EllipticModuli) -> Vec<ZFn> {
    let tau = moduli.tau;
    vec![
        zfn(|_z| Ok(Complex64::new(1.0, 0.0))),
        zfn(|z| {
            let y = cis2pi(z);
            Ok(y + 1.0 / y)
        }),
        zfn(|z| {
            let y = cis2pi(z);
            Ok(y * y + 1.0 / (y * y))
        }),
        zfn(move |z| theta_bar(3, z, tau)),
        zfn(move |z| theta_bar(4, z, tau)),
        zfn(move |z| Ok(theta_bar(3, z, tau)? * theta_bar(4, z, tau)?)),
    ]
}

#[cfg(test)]
mod tests;
