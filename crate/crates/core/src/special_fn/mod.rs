//! Theta functions, q-products, elliptic gamma functions, Bernoulli
//! polynomials, and the modified (three-quasi-period) gamma function.
//!
//! Everything here is computed in log space: products are accumulated as sums
//! of per-factor principal logarithms and exponentiated once at the end, so
//! large |log| values neither overflow nor underflow. All functions are pure;
//! no global state.

mod gamma;
mod modified;
mod moduli;
mod theta;

pub use gamma::{elliptic_gamma, elliptic_gamma_add, gamma_prod, gamma_residue_factor, GAMMA_POLE_GUARD};
pub use modified::{bernoulli_b22, bernoulli_b33, modified_gamma_g, theta_duplication_residual, theta_modular_residual, GammaGVariant};
pub use moduli::{EllipticModuli, QuasiPeriods, Regime};
pub use theta::{jacobi_theta, qpochhammer_inf, theta_bar, theta_mult};

use num_complex::Complex64;

/// e^{2 pi i z}; the single bridge between additive and multiplicative
/// notation. Additive wrappers always go through this map.
#[inline]
pub fn cis2pi(z: Complex64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * z).exp()
}

/// Lattice truncation threshold: factors with |p|^j |q|^k below this are
/// dropped. The geometric tail bounds the truncation error by
/// eps / (1 - max(|p|,|q|)).
pub const EPS_TRUNC: f64 = 1e-18;
