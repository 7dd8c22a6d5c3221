use thiserror::Error;

/// Errors shared by every numeric stage of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Node doubling hit the cap without two successive estimates agreeing.
    #[error(
        "quadrature did not converge at tol {tol:e}: last estimates {previous:e} and {last:e}"
    )]
    QuadratureNonConvergence { tol: f64, previous: f64, last: f64 },

    /// The requested point lies outside the operation's domain.
    #[error("argument {x} outside the valid range: {what}")]
    OutOfDomain { x: f64, what: &'static str },

    /// The interval pair `[-A,-1] u [1,B]` is invalid for this operation.
    #[error("invalid domain (a={a}, b={b}): {what}")]
    InvalidDomain { a: f64, b: f64, what: &'static str },

    /// Green function evaluated at (or too close to) its pole.
    #[error("evaluation point coincides with the pole (|w - c| = {dist:e})")]
    AtPole { dist: f64 },

    /// A root search exhausted its iteration budget.
    #[error("{what} did not converge: residual {residual:e} after {iterations} iterations")]
    RootNonConvergence {
        what: &'static str,
        residual: f64,
        iterations: usize,
    },

    /// Internal cross-check between two independent routes failed.
    #[error("consistency check failed: {what} (difference {diff:e}, allowed {allowed:e})")]
    ConsistencyCheck {
        what: &'static str,
        diff: f64,
        allowed: f64,
    },

    /// The refined prediction is undefined because the exponent is non-positive.
    #[error("refined prediction undefined for n={n}: a_n = {a_n} <= 0")]
    NonPositiveExponent { n: u32, a_n: f64 },

    /// The exchange loop stalled before reaching the requested bracket ratio.
    #[error("exchange stagnated after {iterations} iterations: bracket [{lower}, {upper}]")]
    ExchangeStagnation {
        iterations: usize,
        lower: String,
        upper: String,
    },

    /// The working precision is too small for the requested degree.
    #[error("insufficient precision ({digits} digits) for degree {n}: {what}")]
    InsufficientPrecision {
        digits: u32,
        n: u32,
        what: &'static str,
    },

    /// A reference or alternation set lost its required structure.
    #[error("alternation structure lost: {what}")]
    AlternationLoss { what: String },

    /// Invalid user-supplied parameter (precision, tolerance, range).
    #[error("invalid parameter: {what}")]
    InvalidParameter { what: String },
}

pub type Result<T> = std::result::Result<T, Error>;
