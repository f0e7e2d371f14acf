//! Numerical engine for elliptic special functions, Sklyanin-algebra
//! difference operators, and the integral-operator solution of the
//! Yang-Baxter equation, together with quadrature-based verification suites
//! for the identities tying them together (beta integral, star-triangle,
//! Bailey lemma, inversion, intertwining, RLL, YBE, finite-dimensional
//! reductions).
//!
//! Layering, bottom up:
//!
//! * [`special_fn`] -- theta / q-product / elliptic-gamma / Bernoulli /
//!   modified-gamma primitives in log space.
//! * [`contour`] -- unit-circle trapezoid quadrature, adaptive refinement,
//!   pole scanning, and residue-corrected deformed contours.
//! * [`sklyanin`] -- the difference-operator realizations of the Sklyanin
//!   algebra, L-operators and their factorization.
//! * [`operators`] -- the integral operators S1..S5, Bailey M/D pair,
//!   factorized and direct R-operators, the terminating residue-sum operator
//!   and theta zero-mode spaces.
//! * [`perm`] -- exact word bookkeeping in S4/S6 with parameter tracking;
//!   gates the numeric YBE suites.
//! * [`relations`] -- one verification suite per identity, each returning
//!   residual reports over seeded parameter draws.
//! * [`report`] -- the report records and their CSV/JSON serialization.

pub mod contour;
pub mod error;
pub mod operators;
pub mod perm;
pub mod relations;
pub mod report;
pub mod sklyanin;
pub mod special_fn;

pub use error::{Error, Result};
