//! Best uniform polynomial approximation of the sign function on a pair of
//! intervals `[-A,-1] u [1,B]`, from two independent directions:
//!
//! * an exact oracle — a Remez multi-point exchange running in fixed-point
//!   arithmetic of arbitrary precision ([`remez`]), and
//! * an asymptotic predictor — the error law driven by the Green function of
//!   the complement, its Robin constant, and a theta-function oscillation
//!   factor ([`predictor`]), with the conformal machinery in [`domain`],
//!   [`ring`] and [`theta`].
//!
//! The two routes validate each other; closed forms in the symmetric
//! (`A = B`) and degenerate (`B = 1`) cases pin both down independently.

pub mod domain;
pub mod error;
pub mod predictor;
pub mod quadrature;
pub mod remez;
pub mod ring;
pub mod theta;

#[cfg(test)]
pub(crate) mod testkit;

pub use domain::{characteristics, GreenCharacteristics, TwoIntervalDomain};
pub use error::{Error, Result};
pub use predictor::{ExtReal, PredictionRecord, Predictor, Variant};
pub use remez::{
    best_approx, classify_case, count_zeros, grid_reference, verify_alternation, BestApproxResult,
    CaseLabel, ChebPoly, Fx, PrecisionContext,
};
