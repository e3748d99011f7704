//! Riemann zeta by Euler-Maclaurin summation on Re(s) >= 1/2 and by the
//! functional equation zeta(s) = chi(s) zeta(1 - s) to the left of it.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, LN_2};

use super::gamma::{digamma, log_gamma};
use super::trig::{log_cos_pi, log_sin_pi};
use super::{ensure_finite, ComplexPoint, EvalPrecision, BERNOULLI_EVEN};
use crate::error::{Error, Result};

const LN_PI: f64 = 1.144_729_885_849_400_2;
const LN_2PI: f64 = 1.837_877_066_409_345_5;
/// Number of Bernoulli corrections (through B_20).
const EM_CORRECTIONS: usize = 10;
/// Points closer than this to the origin are summed directly: the
/// reflected form is 0 * infinity at s = 0.
const ORIGIN_DISC: f64 = 0.25;
/// Largest exponent that survives `exp` in double precision.
const MAX_LOG: f64 = 709.0;

/// zeta(s) and zeta'(s) with absolute error estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaEval {
    pub value: Complex64,
    pub deriv: Complex64,
    pub value_err: f64,
    pub deriv_err: f64,
}

/// zeta(s) with absolute error at most `prec.target_abs_err`.
///
/// Where |zeta(s)| > 1 the target is relative to |zeta(s)|, and on the
/// reflected side it is relative to `max(1, |chi(s)|)`: double precision
/// cannot resolve an absolute 1e-10 on values of size 1e6.
pub fn zeta(s: ComplexPoint, prec: &EvalPrecision) -> Result<Complex64> {
    zeta_eval(s, prec, false).map(|e| e.value)
}

/// zeta'(s) with absolute error at most `10 * prec.target_abs_err` (same
/// scaling rule as [`zeta`]).
pub fn zeta_deriv(s: ComplexPoint, prec: &EvalPrecision) -> Result<Complex64> {
    zeta_eval(s, prec, true).map(|e| e.deriv)
}

/// Joint evaluation of zeta and (optionally) zeta'. When `with_deriv` is
/// false the derivative fields are zero.
pub fn zeta_eval(s: ComplexPoint, prec: &EvalPrecision, with_deriv: bool) -> Result<ZetaEval> {
    ensure_finite(s)?;
    prec.validate()?;
    let dist = (s - 1.0).norm();
    if dist < 1e-12 {
        return Err(Error::PoleAtOne { distance: dist });
    }
    if s.re >= 0.5 || s.norm() < ORIGIN_DISC {
        euler_maclaurin(s, prec, with_deriv)
    } else {
        reflected(s, prec, with_deriv)
    }
}

/// Above this real part `zeta(s) - 1` is summed directly.
const DIRECT_TAIL_SIGMA: f64 = 8.0;

/// `zeta(s) - 1` (derivative unchanged) without the cancellation of
/// subtracting 1 from a value near 1.
pub fn zeta_minus_one(s: ComplexPoint, prec: &EvalPrecision, with_deriv: bool) -> Result<ZetaEval> {
    ensure_finite(s)?;
    prec.validate()?;
    if s.re < DIRECT_TAIL_SIGMA {
        let mut e = zeta_eval(s, prec, with_deriv)?;
        e.value -= 1.0;
        return Ok(e);
    }
    let sigma = s.re;
    // tail N^{1-sigma}/(sigma-1) below 1e-17 * 2^{-sigma}
    let ln_n = (sigma * LN_2 + 39.2 - (sigma - 1.0).ln()) / (sigma - 1.0);
    let n = (ln_n.exp().ceil() as usize).clamp(16, prec.max_terms);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut dsum = Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    for k in (2..=n).rev() {
        let ln_k = (k as f64).ln();
        let term = (-s * ln_k).exp();
        sum += term;
        if with_deriv {
            dsum -= term * ln_k;
        }
        abs += term.norm();
    }
    let nf = n as f64;
    let tail = nf.powf(1.0 - sigma) / (sigma - 1.0);
    let value_err = tail + f64::EPSILON * abs;
    let deriv_err = if with_deriv {
        (nf.ln() + 1.0 / (sigma - 1.0)) * tail + f64::EPSILON * abs * nf.ln()
    } else {
        0.0
    };
    Ok(ZetaEval {
        value: sum,
        deriv: dsum,
        value_err,
        deriv_err,
    })
}

/// log |T_{K+1}| bound on the Euler-Maclaurin remainder after
/// `EM_CORRECTIONS` Bernoulli terms, valid for Re(s) > -(2K + 1).
fn em_tail_bound(s: Complex64, n: f64) -> f64 {
    let k = EM_CORRECTIONS;
    let b = BERNOULLI_EVEN[k].abs();
    let mut log_mag = b.ln() - ln_factorial(2 * k + 2);
    for j in 0..=(2 * k) {
        log_mag += (s + j as f64).norm().ln();
    }
    log_mag -= (s.re + (2 * k + 1) as f64) * n.ln();
    let last = (s + (2 * k + 1) as f64).norm() / (s.re + (2 * k + 1) as f64);
    log_mag.exp() * last
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn euler_maclaurin(s: Complex64, prec: &EvalPrecision, with_deriv: bool) -> Result<ZetaEval> {
    let t = s.im.abs();
    let mut n = 32usize.max((2.0 * t).ceil() as usize);
    let mut tail = em_tail_bound(s, n as f64);
    while !(tail <= 0.5 * prec.target_abs_err) {
        n *= 2;
        if n > prec.max_terms {
            break;
        }
        tail = em_tail_bound(s, n as f64);
    }
    if n > prec.max_terms {
        return Err(Error::PrecisionUnreachable {
            estimate: tail,
            target: prec.target_abs_err,
            max_terms: prec.max_terms,
        });
    }

    let mut sum = Complex64::new(0.0, 0.0);
    let mut dsum = Complex64::new(0.0, 0.0);
    let mut sq = 0.0;
    // smallest terms first
    for k in (1..n).rev() {
        let ln_k = (k as f64).ln();
        let mag = (-s.re * ln_k).exp();
        let (sin, cos) = (-s.im * ln_k).sin_cos();
        let term = Complex64::new(mag * cos, mag * sin);
        sum += term;
        if with_deriv {
            dsum -= term * ln_k;
        }
        sq += mag * mag;
    }

    let nf = n as f64;
    let ln_n = nf.ln();
    let n_pow = (-s * ln_n).exp(); // N^{-s}
    let sm1 = s - 1.0;
    let head = n_pow * nf / sm1; // N^{1-s} / (s - 1)
    sum += head + n_pow * 0.5;
    if with_deriv {
        dsum += -head * ln_n - head / sm1 - n_pow * (0.5 * ln_n);
    }

    // Bernoulli corrections B_{2k}/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}
    let mut poly = s;
    let mut dpoly = Complex64::new(1.0, 0.0);
    let mut pow = n_pow / nf;
    let mut fact = 2.0;
    for (k, b) in BERNOULLI_EVEN.iter().take(EM_CORRECTIONS).enumerate() {
        let kk = (k + 1) as f64;
        let coef = b / fact;
        sum += poly * pow * coef;
        if with_deriv {
            dsum += (dpoly - poly * ln_n) * pow * coef;
        }
        let a1 = s + (2.0 * kk - 1.0);
        let a2 = s + 2.0 * kk;
        let p1 = poly * a1;
        let dp1 = dpoly * a1 + poly;
        dpoly = dp1 * a2 + p1;
        poly = p1 * a2;
        pow /= nf * nf;
        fact *= (2.0 * kk + 1.0) * (2.0 * kk + 2.0);
    }

    let eps = f64::EPSILON;
    let phase = 1.0 + s.norm() * ln_n;
    let rounding = eps * (phase * sq.sqrt() + sum.norm());
    let value_err = tail + rounding;
    let deriv_err = tail * (ln_n + 1.0) + rounding * (ln_n + 1.0);
    let scale = sum.norm().max(1.0);
    if value_err > prec.target_abs_err * scale {
        return Err(Error::PrecisionUnreachable {
            estimate: value_err / scale,
            target: prec.target_abs_err,
            max_terms: prec.max_terms,
        });
    }
    Ok(ZetaEval {
        value: sum,
        deriv: if with_deriv { dsum } else { Complex64::new(0.0, 0.0) },
        value_err,
        deriv_err: if with_deriv { deriv_err } else { 0.0 },
    })
}

/// log of 2^s pi^{s-1} Gamma(1-s) times the given trig factor, or None
/// where the trig factor vanishes.
fn log_prefactor(s: Complex64, log_trig: Option<Complex64>) -> Result<Option<Complex64>> {
    let Some(lt) = log_trig else {
        return Ok(None);
    };
    let lg = log_gamma(Complex64::new(1.0, 0.0) - s)?;
    Ok(Some(s * LN_2 + (s - 1.0) * LN_PI + lt + lg))
}

fn exp_checked(l: Complex64) -> Result<Complex64> {
    if l.re > MAX_LOG {
        return Err(Error::NumericOverflow { log_magnitude: l.re });
    }
    Ok(l.exp())
}

fn reflected(s: Complex64, prec: &EvalPrecision, with_deriv: bool) -> Result<ZetaEval> {
    let one = Complex64::new(1.0, 0.0);
    let inner = euler_maclaurin(one - s, prec, with_deriv)?;
    let half = s * 0.5;
    let log_chi = log_prefactor(s, log_sin_pi(half))?;
    let chi = match log_chi {
        Some(l) => exp_checked(l)?,
        None => Complex64::new(0.0, 0.0),
    };
    let eps = f64::EPSILON;
    let phase_rel = eps * (4.0 + log_chi.map_or(0.0, |l| l.norm()));
    let value = chi * inner.value;
    let value_err = chi.norm() * inner.value_err + phase_rel * value.norm();
    let scale = chi.norm().max(1.0);
    if value_err > prec.target_abs_err * scale {
        return Err(Error::PrecisionUnreachable {
            estimate: value_err / scale,
            target: prec.target_abs_err,
            max_terms: prec.max_terms,
        });
    }
    if !with_deriv {
        return Ok(ZetaEval {
            value,
            deriv: Complex64::new(0.0, 0.0),
            value_err,
            deriv_err: 0.0,
        });
    }
    // zeta'(s) = chi(s) [(ln 2pi - psi(1-s)) zeta(1-s) - zeta'(1-s)]
    //          + (pi/2) 2^s pi^{s-1} cos(pi s/2) Gamma(1-s) zeta(1-s)
    let psi = digamma(one - s)?;
    let log_k = log_prefactor(s, log_cos_pi(half))?;
    let kfac = match log_k {
        Some(l) => exp_checked(l)?,
        None => Complex64::new(0.0, 0.0),
    };
    let lead = Complex64::new(LN_2PI, 0.0) - psi;
    let deriv = chi * (lead * inner.value - inner.deriv) + kfac * inner.value * FRAC_PI_2;
    let deriv_err = chi.norm() * (lead.norm() * inner.value_err + inner.deriv_err)
        + FRAC_PI_2 * kfac.norm() * inner.value_err
        + eps * (4.0 + log_k.map_or(0.0, |l| l.norm())) * deriv.norm();
    Ok(ZetaEval {
        value,
        deriv,
        value_err,
        deriv_err,
    })
}

/// The functional-equation factor chi(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s),
/// assembled in log space.
pub fn chi(s: ComplexPoint) -> Result<Complex64> {
    ensure_finite(s)?;
    if s.im == 0.0 && s.re >= 1.0 && s.re == s.re.round() {
        return Err(Error::ChiPole { at: s.re });
    }
    match log_prefactor(s, log_sin_pi(s * 0.5))? {
        Some(l) => exp_checked(l),
        None => Ok(Complex64::new(0.0, 0.0)),
    }
}
