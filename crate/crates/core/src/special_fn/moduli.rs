use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{cis2pi, theta::qpochhammer_inf};
use crate::error::{Error, Result};

/// Which side of the unit circle the base q lives on. All operator kernels
/// branch on this; the |q| = 1 case is carried by the modified gamma function
/// only (no operator suite is built there).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    QLess1,
    QGreater1,
    QUnitCircle,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::QLess1 => write!(f, "QLess1"),
            Regime::QGreater1 => write!(f, "QGreater1"),
            Regime::QUnitCircle => write!(f, "QUnitCircle"),
        }
    }
}

/// The modular parameters every special function draws from: tau (base
/// p = e^{2 pi i tau}) and eta (base q = e^{4 pi i eta}).
#[derive(Debug, Clone, Copy)]
pub struct EllipticModuli {
    pub tau: Complex64,
    pub eta: Complex64,
    pub p: Complex64,
    pub q: Complex64,
    pub regime: Regime,
}

impl EllipticModuli {
    pub fn new(tau: Complex64, eta: Complex64) -> Result<Self> {
        if tau.im <= 0.0 {
            return Err(Error::domain(format!("Im(tau) = {} must be positive", tau.im)));
        }
        let p = cis2pi(tau);
        let q = cis2pi(2.0 * eta);
        let regime = if (q.norm() - 1.0).abs() < 1e-12 {
            Regime::QUnitCircle
        } else if q.norm() < 1.0 {
            Regime::QLess1
        } else {
            Regime::QGreater1
        };
        Ok(EllipticModuli { tau, eta, p, q, regime })
    }

    /// Build from the multiplicative bases directly (principal logarithms fix
    /// tau and eta).
    pub fn from_bases(p: Complex64, q: Complex64) -> Result<Self> {
        if p.norm() >= 1.0 {
            return Err(Error::domain(format!("|p| = {} must be < 1", p.norm())));
        }
        let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        let tau = p.ln() / two_pi_i;
        let eta = q.ln() / (2.0 * two_pi_i);
        EllipticModuli::new(tau, eta)
    }

    /// e^{2 pi i eta} = q^{1/2} with the branch fixed by eta.
    pub fn q_half(&self) -> Complex64 {
        cis2pi(self.eta)
    }

    /// e^{pi i tau} = p^{1/2}.
    pub fn p_half(&self) -> Complex64 {
        cis2pi(self.tau / 2.0)
    }

    /// e^{2 pi i (eta + tau/2)} = +sqrt(pq), the branch entering S2 kernels.
    pub fn sqrt_pq(&self) -> Complex64 {
        cis2pi(self.eta + self.tau / 2.0)
    }

    /// The base actually used for kernel gamma functions: q for |q| < 1,
    /// 1/q for |q| > 1 (the |q| > 1 kernels are built on (p, q^{-1})).
    pub fn kernel_q(&self) -> Result<Complex64> {
        match self.regime {
            Regime::QLess1 => Ok(self.q),
            Regime::QGreater1 => Ok(1.0 / self.q),
            Regime::QUnitCircle => Err(Error::domain("no integral-operator kernels on |q| = 1")),
        }
    }

    /// kappa = (q;q)_inf (p;p)_inf / 2, with q replaced by 1/q in the
    /// |q| > 1 regime.
    pub fn kappa(&self) -> Result<Complex64> {
        let qk = self.kernel_q()?;
        Ok(qpochhammer_inf(qk, qk)? * qpochhammer_inf(self.p, self.p)? / 2.0)
    }
}

/// Three incommensurate quasi-periods and the six base variables built from
/// their ratios. Hosts the modified elliptic gamma function's parameters.
#[derive(Debug, Clone, Copy)]
pub struct QuasiPeriods {
    pub omega: [Complex64; 3],
    /// q = e^{2 pi i w1/w2}, p = e^{2 pi i w3/w2}, r = e^{2 pi i w3/w1}
    pub q: Complex64,
    pub p: Complex64,
    pub r: Complex64,
    /// Modular-transformed partners.
    pub q_t: Complex64,
    pub p_t: Complex64,
    pub r_t: Complex64,
}

impl QuasiPeriods {
    pub fn new(omega: [Complex64; 3]) -> Result<Self> {
        let scale: f64 = omega.iter().map(|w| w.norm()).sum();
        if scale == 0.0 {
            return Err(Error::domain("zero quasi-periods"));
        }
        // Numeric incommensurability guard over small integer triples.
        for n1 in -8i32..=8 {
            for n2 in -8i32..=8 {
                for n3 in -8i32..=8 {
                    if (n1, n2, n3) == (0, 0, 0) {
                        continue;
                    }
                    let s = omega[0] * n1 as f64 + omega[1] * n2 as f64 + omega[2] * n3 as f64;
                    if s.norm() < 1e-9 * scale {
                        return Err(Error::domain(format!(
                            "quasi-periods commensurate: {}w1 + {}w2 + {}w3 ~ 0",
                            n1, n2, n3
                        )));
                    }
                }
            }
        }
        let [w1, w2, w3] = omega;
        Ok(QuasiPeriods {
            omega,
            q: cis2pi(w1 / w2),
            p: cis2pi(w3 / w2),
            r: cis2pi(w3 / w1),
            q_t: cis2pi(-w2 / w1),
            p_t: cis2pi(-w2 / w3),
            r_t: cis2pi(-w1 / w3),
        })
    }

    pub fn omega_sum(&self) -> Complex64 {
        self.omega[0] + self.omega[1] + self.omega[2]
    }
}
