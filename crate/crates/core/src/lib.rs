//! Evaluation of, and root finding for, the permutation-symmetrized sum
//!
//! ```text
//! Z(s) = sum over permutations tau of zeta(a_tau(1) s, ..., a_tau(r) s)
//! ```
//!
//! of Euler-Zagier multiple zeta functions with fixed positive weights.
//! `Z` is evaluated through Hoffman's set-partition expansion into products
//! of Riemann zeta values; its a-points (solutions of `Z(s) = a`) are
//! counted by the argument principle and located by subdivision and Newton
//! refinement.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exec;
pub mod locator;
pub mod partition;
pub mod report;
pub mod special;
pub mod symmetric;

pub use error::{Error, Result};
pub use exec::Execution;
pub use locator::{APoint, LocatorOptions, Rectangle, WindingResult};
pub use partition::{HoffmanTerm, SetPartition, Weights};
pub use special::{ComplexPoint, EvalPrecision};
pub use symmetric::{SymZeta, TargetValue};

/// Crate version; part of every result-cache key.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
