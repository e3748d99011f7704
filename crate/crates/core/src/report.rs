//! Main terms of the a-point counting function and comparisons with
//! counted and located a-points.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::locator::{count_apoints, scan_free_right, APoint, LocatorOptions, Rectangle, DEFAULT_T_MIN};
use crate::partition::Weights;
use crate::special::ComplexPoint;
use crate::symmetric::{SymZeta, TargetValue};

/// |discrepancy| / log T above this is flagged as a likely defect.
pub const DISCREPANCY_FLAG: f64 = 25.0;
/// Margin added to the empirical right edge of the a-points.
pub const RIGHT_MARGIN: f64 = 5.0;

/// `(T/2pi) sum_j a_j log(a_j T / 2pi) - A T / 2pi`, minus
/// `(T/2pi) log(1^{a_1} ... r^{a_r})` when `a = 0`.
pub fn main_term_n(w: &Weights, a: &TargetValue, t: f64) -> f64 {
    let scale = t / TAU;
    let mut n: f64 = w.values().iter().map(|&aj| scale * aj * (aj * scale).ln()).sum();
    n -= w.total() * scale;
    if a.is_zero() {
        // log(1^{a_1} ... r^{a_r}) = -log M
        n += scale * w.m().ln();
    }
    n
}

/// Whether every logarithm in the main term is positive.
pub fn main_term_in_range(w: &Weights, t: f64) -> bool {
    t > TAU / w.smallest()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub weights: Vec<f64>,
    #[serde(with = "crate::special::re_im")]
    pub a: ComplexPoint,
    pub y: f64,
    #[serde(rename = "T")]
    pub t: f64,
    /// Lower edge of the counting window (the count runs over t_min < gamma < T).
    pub t_min: f64,
    /// Right edge of the counting rectangle.
    pub x: f64,
    pub computed_count: u32,
    pub main_term: f64,
    pub discrepancy: f64,
    pub discrepancy_over_log_t: f64,
    pub main_term_in_range: bool,
    pub flagged: bool,
}

/// Counts over `[-y, x] x [t_min, T]` for each `T`, where `x` is the
/// empirical right edge plus a margin, against the main term.
pub fn compare_counts(
    z: &SymZeta,
    a: &TargetValue,
    y: f64,
    t_grid: &[f64],
    opts: &LocatorOptions,
) -> Result<Vec<CountReport>> {
    if !(y > 0.0) {
        return Err(Error::InvalidRectangle(format!("y = {y} must be positive")));
    }
    let t_max = t_grid.iter().copied().fold(f64::NAN, f64::max);
    if !(t_max > DEFAULT_T_MIN) {
        return Err(Error::InvalidRectangle("T grid must lie above t_min".into()));
    }
    let free = scan_free_right(z, a, DEFAULT_T_MIN, t_max, opts)?;
    let x = free.c1_hat + RIGHT_MARGIN;
    let inner = LocatorOptions {
        execution: Execution::Sequential,
        ..*opts
    };
    let counts = opts.execution.map(t_grid.to_vec(), |t| {
        let rect = Rectangle::new(-y, x, DEFAULT_T_MIN, t)?;
        count_apoints(z, a, &rect, if opts.execution.is_parallel() { &inner } else { opts })
    });
    let w = z.weights();
    t_grid
        .iter()
        .zip(counts)
        .map(|(&t, c)| {
            let count = c?.count;
            let main = main_term_n(w, a, t);
            let disc = count as f64 - main;
            let ratio = disc / t.ln();
            Ok(CountReport {
                weights: w.values().to_vec(),
                a: a.a,
                y,
                t,
                t_min: DEFAULT_T_MIN,
                x,
                computed_count: count,
                main_term: main,
                discrepancy: disc,
                discrepancy_over_log_t: ratio,
                main_term_in_range: main_term_in_range(w, t),
                flagged: ratio.abs() > DISCREPANCY_FLAG,
            })
        })
        .collect()
}

/// Ratios of consecutive `|discrepancy / log T|` values.
pub fn consecutive_ratios(reports: &[CountReport]) -> Vec<f64> {
    reports
        .windows(2)
        .map(|p| p[1].discrepancy_over_log_t.abs() / p[0].discrepancy_over_log_t.abs())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumReport {
    #[serde(rename = "T")]
    pub t: f64,
    pub y: f64,
    pub t_min: f64,
    /// Points in the window, with multiplicity.
    pub count: u32,
    /// 2 pi sum (beta - 1/2)
    pub sum_half: f64,
    /// 2 pi sum (beta - r / 2A)
    pub sum_crit: f64,
    /// 2 pi sum (beta + y)
    pub sum_littlewood: f64,
    /// ((r - A) / 2) T log T
    pub predicted_half: f64,
    /// sum_j (1/2 + a_j y) T log T
    pub predicted_littlewood: f64,
    pub half_over_t_log_t: f64,
    pub crit_over_t_log_t: f64,
}

/// Weighted sums of real parts over the points with `-y < beta` and
/// `t_min < gamma < T`.
pub fn weighted_sums(apoints: &[APoint], w: &Weights, y: f64, t: f64) -> SumReport {
    let r = w.rank() as f64;
    let crit = r / (2.0 * w.total());
    let mut count = 0u32;
    let (mut half, mut critical, mut littlewood) = (0.0, 0.0, 0.0);
    for p in apoints {
        if -y < p.beta && DEFAULT_T_MIN < p.gamma && p.gamma < t {
            let m = p.multiplicity as f64;
            count += p.multiplicity;
            half += m * (p.beta - 0.5);
            critical += m * (p.beta - crit);
            littlewood += m * (p.beta + y);
        }
    }
    let tlt = t * t.ln();
    let sum_half = TAU * half;
    let sum_crit = TAU * critical;
    SumReport {
        t,
        y,
        t_min: DEFAULT_T_MIN,
        count,
        sum_half,
        sum_crit,
        sum_littlewood: TAU * littlewood,
        predicted_half: 0.5 * (r - w.total()) * tlt,
        predicted_littlewood: w.values().iter().map(|aj| 0.5 + aj * y).sum::<f64>() * tlt,
        half_over_t_log_t: sum_half / tlt,
        crit_over_t_log_t: sum_crit / tlt,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    /// 1 / (2 a_r)
    pub y3: f64,
    pub delta: f64,
    #[serde(rename = "T")]
    pub t: f64,
    /// Points with beta > y3 + delta and gamma < T, with multiplicity.
    pub tail_count: u32,
    /// Points with beta > y3 - delta (below the threshold, for exploration).
    pub below_y3_count: u32,
    /// T log log T / delta
    pub bound_scale: f64,
    /// 2 pi tail_count / bound_scale
    pub normalized: f64,
}

pub fn tail_density(apoints: &[APoint], w: &Weights, delta: f64, t: f64) -> Result<TailReport> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidRectangle(format!("delta = {delta} must be positive")));
    }
    let y3 = 1.0 / (2.0 * w.smallest());
    let count_above = |edge: f64| -> u32 {
        apoints
            .iter()
            .filter(|p| p.beta > edge && p.gamma < t)
            .map(|p| p.multiplicity)
            .sum()
    };
    let tail_count = count_above(y3 + delta);
    let bound_scale = t * t.ln().ln() / delta;
    Ok(TailReport {
        y3,
        delta,
        t,
        tail_count,
        below_y3_count: count_above(y3 - delta),
        bound_scale,
        normalized: TAU * tail_count as f64 / bound_scale,
    })
}

/// The choice `delta = (log log T)^2 / log T`.
pub fn special_delta(t: f64) -> f64 {
    let l = t.ln();
    l.ln().powi(2) / l
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RightDecay {
    /// (sigma, |G(sigma + i t) - 1|) for a = 0
    pub samples: Vec<(f64, f64)>,
    /// exp of the least-squares slope of log |G - 1| against sigma: an
    /// empirical stand-in for the constant c in `Z = B M^s (1 + O(c^sigma))`.
    pub c_hat: f64,
}

/// Decay of `Z / (B M^s) - 1` along a horizontal line.
pub fn right_decay(z: &SymZeta, t: f64, sigmas: &[f64]) -> Result<RightDecay> {
    let zero = TargetValue::zero();
    let mut samples = Vec::with_capacity(sigmas.len());
    for &s in sigmas {
        let g = z.eval_g(&zero, ComplexPoint::new(s, t))?;
        samples.push((s, (g - 1.0).norm()));
    }
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|p| p.1 > 0.0)
        .map(|&(s, d)| (s, d.ln()))
        .collect();
    let n = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0 / n, b + p.1 / n));
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), p| {
        (a + (p.0 - mx) * (p.1 - my), b + (p.0 - mx).powi(2))
    });
    Ok(RightDecay {
        samples,
        c_hat: (sxy / sxx).exp(),
    })
}

/// 2 pi (y + 1/2) and 2 pi (y + r/(2A)): the shifts relating the three
/// weighted sums.
pub fn sum_shifts(w: &Weights, y: f64) -> (f64, f64) {
    let r = w.rank() as f64;
    (TAU * (y + 0.5), TAU * (y + r / (2.0 * w.total())))
}
