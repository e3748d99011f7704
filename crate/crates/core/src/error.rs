use thiserror::Error;

/// Errors raised by evaluation, counting and location routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zeta has a pole at s = 1 (|s - 1| = {distance:e})")]
    PoleAtOne { distance: f64 },

    #[error("log-gamma pole at nonpositive integer {at}")]
    PoleAtNonpositiveInteger { at: f64 },

    #[error("chi(s) is not evaluated at positive integers (s = {at})")]
    ChiPole { at: f64 },

    #[error("error bound {estimate:e} exceeds target {target:e} within {max_terms} terms")]
    PrecisionUnreachable {
        estimate: f64,
        target: f64,
        max_terms: usize,
    },

    #[error("exponent {log_magnitude} is outside the double-precision range")]
    NumericOverflow { log_magnitude: f64 },

    #[error("non-finite input {re} + {im}i")]
    NonFinite { re: f64, im: f64 },

    #[error("invalid precision: {0}")]
    InvalidPrecision(String),

    #[error("rank {r} exceeds the supported maximum of {max}")]
    RankTooLarge { r: usize, max: usize },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("argument is within guard distance of the pole s = {pole}")]
    NearPole { pole: f64 },

    #[error("point lies outside the absolute-convergence region of the multiple series")]
    OutsideConvergenceRegion,

    #[error("point lies outside the validity regime of the {model} model")]
    OutsideRegime { model: &'static str },

    #[error("|G(s)| = {magnitude:e} is too small; s is (numerically) an a-point")]
    AtAPoint { magnitude: f64 },

    #[error("invalid rectangle: {0}")]
    InvalidRectangle(String),

    #[error("invalid disk: {0}")]
    InvalidDisk(String),

    #[error("boundary passes within |G| < {threshold:e} of a zero after {attempts} perturbations")]
    BoundaryTooCloseToZero { threshold: f64, attempts: usize },

    #[error("winding integral {re} + {im}i is not within {tolerance:e} of an integer")]
    NonIntegerWinding { re: f64, im: f64, tolerance: f64 },

    #[error("Newton iteration diverged near {re} + {im}i")]
    NewtonDiverged { re: f64, im: f64 },

    #[error("located {located} a-points but the contour count is {counted}")]
    CountMismatch { located: usize, counted: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
