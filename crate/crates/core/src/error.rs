use num_complex::Complex64;
use thiserror::Error;

/// Library-wide error type. Quadrature and operator code propagates these so
/// that verification suites see clean failures instead of huge garbage values.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation requested within the guard distance of a pole of the
    /// elliptic gamma function (or of a kernel built from it).
    #[error("pole proximity: argument {arg} within {dist:.3e} of a pole")]
    PoleProximity { arg: Complex64, dist: f64 },

    /// Adaptive quadrature ran out of grid doublings. Carries the last two
    /// iterates for inspection.
    #[error("quadrature did not converge: |I_2N - I_N| = {delta:.3e} at N = {n}")]
    Convergence {
        n: usize,
        last: Complex64,
        previous: Complex64,
        delta: f64,
    },

    /// A residue correction was requested at a pole that is not simple.
    #[error("pole at {location} is not simple (c_-2 estimate {c2:.3e})")]
    Residue { location: Complex64, c2: f64 },

    /// Kernel parameter t^2 too close to the exceptional lattice p^j q^k.
    #[error("exceptional parameter: t^2 = {t2} within {dist:.3e} of the p^j q^k lattice")]
    ExceptionalParameter { t2: Complex64, dist: f64 },

    #[error("basis candidate failed theta-space validation: {0}")]
    BasisValidation(String),

    /// Parameter sampler could not satisfy the domain inequalities.
    #[error("sampler exhausted after {0} rejected draws")]
    SamplerExhausted(usize),

    #[error("word uses generator s{0} out of range for tuple arity {1}")]
    Arity(usize, usize),

    #[error("braid rewriting search exhausted (depth {depth}, {states} states)")]
    SearchExhausted { depth: usize, states: usize },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
