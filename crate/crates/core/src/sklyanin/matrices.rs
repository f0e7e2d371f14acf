//! The M/N theta matrices of the L-operator factorization, their product
//! identities, and the finite-dimensional Baxter R-matrix data.

use num_complex::Complex64;

use crate::error::Result;
use crate::special_fn::{jacobi_theta, theta_bar};

pub type Mat2 = [[Complex64; 2]; 2];
pub type Mat4 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Pauli matrices, sigma_0 = identity.
pub fn sigma(a: usize) -> Mat2 {
    match a {
        0 => [[ONE, ZERO], [ZERO, ONE]],
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, -I], [I, ZERO]],
        3 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => panic!("sigma index {} out of range", a),
    }
}

/// M(a;b) built from half-modulus thetas.
pub fn m_matrix(a: Complex64, b: Complex64, tau: Complex64) -> Result<Mat2> {
    Ok([
        [theta_bar(3, a, tau)?, -theta_bar(3, b, tau)?],
        [-theta_bar(4, a, tau)?, theta_bar(4, b, tau)?],
    ])
}

/// N(a;b) built from half-modulus thetas.
pub fn n_matrix(a: Complex64, b: Complex64, tau: Complex64) -> Result<Mat2> {
    Ok([
        [theta_bar(4, b, tau)?, theta_bar(3, b, tau)?],
        [theta_bar(4, a, tau)?, theta_bar(3, a, tau)?],
    ])
}

pub fn mat2_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                out[i][j] += x[i][k] * y[k][j];
            }
        }
    }
    out
}

/// Expected value of N(a1;b1) M(a2;b2): full-modulus theta_1 bilinears.
pub fn mn_product_nm(
    a1: Complex64,
    b1: Complex64,
    a2: Complex64,
    b2: Complex64,
    tau: Complex64,
) -> Result<Mat2> {
    let t1 = |x: Complex64, y: Complex64| -> Result<Complex64> {
        Ok(jacobi_theta(1, x - y, tau)? * jacobi_theta(1, x + y, tau)?)
    };
    Ok([
        [2.0 * t1(b1, a2)?, -2.0 * t1(b1, b2)?],
        [2.0 * t1(a1, a2)?, -2.0 * t1(a1, b2)?],
    ])
}

/// Expected value of N(a1;b1) sigma_3 M(a2;b2): theta_4 bilinears.
pub fn mn_product_nsm(
    a1: Complex64,
    b1: Complex64,
    a2: Complex64,
    b2: Complex64,
    tau: Complex64,
) -> Result<Mat2> {
    let t4 = |x: Complex64, y: Complex64| -> Result<Complex64> {
        Ok(jacobi_theta(4, x - y, tau)? * jacobi_theta(4, x + y, tau)?)
    };
    Ok([
        [2.0 * t4(b1, a2)?, -2.0 * t4(b1, b2)?],
        [2.0 * t4(a1, a2)?, -2.0 * t4(a1, b2)?],
    ])
}

/// Baxter's 4x4 eight-vertex R-matrix sum_a w_a(u) sigma_a (x) sigma_a with
/// w_a(u) = theta_{a+1}(u + eta) / theta_{a+1}(eta). Plain data; used only
/// for the X_beta invariance check and the spin-1/2 reduction.
pub fn baxter_r_matrix(u: Complex64, eta: Complex64, tau: Complex64) -> Result<Mat4> {
    let mut r = [[ZERO; 4]; 4];
    for a in 0..4 {
        let j = (a + 1) as u8;
        let w = jacobi_theta(j, u + eta, tau)? / jacobi_theta(j, eta, tau)?;
        let s = sigma(a);
        for i1 in 0..2 {
            for j1 in 0..2 {
                for i2 in 0..2 {
                    for j2 in 0..2 {
                        r[2 * i1 + i2][2 * j1 + j2] += w * s[i1][j1] * s[i2][j2];
                    }
                }
            }
        }
    }
    Ok(r)
}

/// X_beta R X_beta with X_beta = sigma_beta (x) sigma_beta.
pub fn x_beta_conjugate(r: &Mat4, beta: usize) -> Mat4 {
    let s = sigma(beta);
    let mut x = [[ZERO; 4]; 4];
    for i1 in 0..2 {
        for j1 in 0..2 {
            for i2 in 0..2 {
                for j2 in 0..2 {
                    x[2 * i1 + i2][2 * j1 + j2] = s[i1][j1] * s[i2][j2];
                }
            }
        }
    }
    let mul = |a: &Mat4, b: &Mat4| -> Mat4 {
        let mut out = [[ZERO; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        out
    };
    mul(&mul(&x, r), &x)
}
