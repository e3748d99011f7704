//! Riemann zeta, log-Gamma, digamma and the functional-equation factor
//! chi(s) on the complex plane, in double precision with explicit error
//! estimates.

mod gamma;
mod trig;
mod zeta;

pub use gamma::{digamma, log_gamma};
pub use zeta::{chi, zeta, zeta_deriv, zeta_eval, zeta_minus_one, ZetaEval};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point `s = sigma + i t` of the complex plane.
pub type ComplexPoint = Complex64;

/// Smallest accepted absolute error target.
pub const MIN_TARGET_ABS_ERR: f64 = 1e-14;
/// Smallest accepted term budget for the Euler-Maclaurin sum.
pub const MIN_MAX_TERMS: usize = 16;

/// Error target and term budget for zeta evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalPrecision {
    pub target_abs_err: f64,
    pub max_terms: usize,
}

impl EvalPrecision {
    pub fn new(target_abs_err: f64, max_terms: usize) -> Result<Self> {
        let p = EvalPrecision {
            target_abs_err,
            max_terms,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_abs_err >= MIN_TARGET_ABS_ERR) || !self.target_abs_err.is_finite() {
            return Err(Error::InvalidPrecision(format!(
                "target_abs_err must be a finite value >= {MIN_TARGET_ABS_ERR:e}, got {}",
                self.target_abs_err
            )));
        }
        if self.max_terms < MIN_MAX_TERMS {
            return Err(Error::InvalidPrecision(format!(
                "max_terms must be >= {MIN_MAX_TERMS}, got {}",
                self.max_terms
            )));
        }
        Ok(())
    }
}

impl Default for EvalPrecision {
    fn default() -> Self {
        EvalPrecision {
            target_abs_err: 1e-10,
            max_terms: 1 << 16,
        }
    }
}

/// Serde adapter writing complex numbers as `{"re": .., "im": ..}`.
pub mod re_im {
    use super::ComplexPoint;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct ReIm {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &ComplexPoint, s: S) -> Result<S::Ok, S::Error> {
        ReIm { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ComplexPoint, D::Error> {
        let ReIm { re, im } = ReIm::deserialize(d)?;
        Ok(ComplexPoint::new(re, im))
    }
}

pub(crate) fn ensure_finite(s: ComplexPoint) -> Result<()> {
    if s.re.is_finite() && s.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { re: s.re, im: s.im })
    }
}

/// B_2, B_4, ..., B_22.
pub(crate) const BERNOULLI_EVEN: [f64; 11] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
];
