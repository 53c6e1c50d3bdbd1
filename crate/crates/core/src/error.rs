//! Error type shared by all solver stages.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("the spectral gap is empty at epsilon = 0; no bracket exists")]
    EmptyBracket,

    #[error("quadrature budget exhausted: best estimate {value:.6e}, error estimate {error:.3e} > required {required:.3e}")]
    QuadratureBudget { value: f64, error: f64, required: f64 },

    #[error("integrand returned a non-finite value at x = {x:.17e}")]
    NonFiniteSample { x: f64 },

    #[error("no sign change over bracket: f(lo) = {f_lo:.6e}, f(hi) = {f_hi:.6e}")]
    NoSignChange { f_lo: f64, f_hi: f64 },

    #[error("root finder failed to converge within {max_iter} iterations")]
    RootMaxIterations { max_iter: usize },

    #[error("denominator {denom:.6e} at x = {x:.6} violates the required sign for the {side} side")]
    BracketViolation { side: &'static str, x: f64, denom: f64 },

    #[error("solution value at the matching point is {value:.3e}, too close to zero to normalize")]
    DegenerateNormalization { value: f64 },

    #[error("fixed-point map is not a contraction (factor {factor:.3}); increase the exponential weight")]
    ContractionFailed { factor: f64 },

    #[error("operation requires epsilon = 0 (got {epsilon})")]
    RequiresLimitProblem { epsilon: f64 },

    #[error("series evaluation at {x:.6e} is outside the recorded radius {radius:.6e} around {center:.6e}")]
    SeriesOutOfRadius { x: f64, center: f64, radius: f64 },

    #[error("series centers differ: {a:.6e} vs {b:.6e}")]
    SeriesCenterMismatch { a: f64, b: f64 },

    #[error("product of two series with logarithmic parts is not representable")]
    SeriesLogProduct,

    #[error("identity violated: lhs = {lhs:.12e}, rhs = {rhs:.12e}, |diff| = {diff:.3e} > tol {tol:.3e}")]
    IdentityViolation { lhs: f64, rhs: f64, diff: f64, tol: f64 },

    #[error("matching matrix is degenerate: both rows vanish")]
    DegenerateMatrix,

    #[error("leading-order coefficient root left the admissible window: {value:.8}")]
    WindowViolation { value: f64 },

    #[error("solution grids do not overlap")]
    GridMismatch,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
