use serde::{Deserialize, Serialize};

use super::count::count_in_disk;
use super::{count_apoints, LocatorOptions, Rectangle, WindingResult};
use crate::error::{Error, Result};
use crate::special::ComplexPoint;
use crate::symmetric::{SymZeta, TargetValue};

const RIGHT_START: f64 = 60.0;
const RIGHT_FLOOR: f64 = -10.0;
const RIGHT_STEP: f64 = 0.25;
const T_STEP: f64 = 0.25;
const CERTIFICATE_WIDTH: f64 = 20.0;

/// Winding number on the circle `|s + 2n/A| = eps`.
pub fn verify_cluster(z: &SymZeta, a: &TargetValue, n: u32, eps: f64, opts: &LocatorOptions) -> Result<WindingResult> {
    let total = z.weights().total();
    if !(eps > 0.0 && eps <= 0.4 * 2.0 / total) {
        return Err(Error::InvalidDisk(format!(
            "radius {eps} must lie in (0, {}]",
            0.4 * 2.0 / total
        )));
    }
    let center = ComplexPoint::new(-2.0 * n as f64 / total, 0.0);
    count_in_disk(z, a, center, eps, opts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterScan {
    pub eps: f64,
    /// (n, count at eps, count at eps / 2); `None` where the disk boundary
    /// could not be kept off a zero.
    pub disks: Vec<(u32, Option<u32>, Option<u32>)>,
    /// First n from which every disk in the range holds exactly one
    /// a-point at both radii.
    pub n_min: Option<u32>,
}

pub fn cluster_scan(
    z: &SymZeta,
    a: &TargetValue,
    n_lo: u32,
    n_hi: u32,
    eps: f64,
    opts: &LocatorOptions,
) -> Result<ClusterScan> {
    let ns: Vec<u32> = (n_lo..=n_hi).collect();
    let results = opts.execution.map(ns.clone(), |n| {
        let one = |r| match verify_cluster(z, a, n, r, opts) {
            Ok(w) => Ok(Some(w.count)),
            Err(Error::BoundaryTooCloseToZero { .. }) => Ok(None),
            Err(e) => Err(e),
        };
        Ok::<_, Error>((n, one(eps)?, one(0.5 * eps)?))
    });
    let disks = results.into_iter().collect::<Result<Vec<_>>>()?;
    let mut n_min = None;
    for &(n, c, h) in disks.iter().rev() {
        if c == Some(1) && h == Some(1) {
            n_min = Some(n);
        } else {
            break;
        }
    }
    Ok(ClusterScan { eps, disks, n_min })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeRightScan {
    /// Smallest grid abscissa from which the sampled sufficient condition
    /// holds at every grid point to the right.
    pub c1_hat: f64,
    pub t_lo: f64,
    pub t_hi: f64,
    /// Direct contour count on `certified`.
    pub certificate: WindingResult,
    pub certified: Rectangle,
}

/// Sufficient condition for `s` to be no a-point: `|G - 1| < 1/2` for
/// `a = 0`, `|Z| < |a| / 2` otherwise.
fn clearly_free(z: &SymZeta, a: &TargetValue, s: ComplexPoint) -> Result<bool> {
    let v = z.eval_sym(s)?;
    Ok(if a.is_zero() {
        (v / z.leading_model(s) - 1.0).norm() < 0.5
    } else {
        v.norm() < 0.5 * a.a.norm()
    })
}

/// Empirical right edge of the a-points over `t_lo <= t <= t_hi`,
/// certified by a contour count on `[c1_hat, c1_hat + 20] x [t_lo, t_hi]`.
pub fn scan_free_right(
    z: &SymZeta,
    a: &TargetValue,
    t_lo: f64,
    t_hi: f64,
    opts: &LocatorOptions,
) -> Result<FreeRightScan> {
    Rectangle::new(0.0, 1.0, t_lo, t_hi)?;
    let nt = ((t_hi - t_lo) / T_STEP).ceil() as usize;
    let ts: Vec<f64> = (0..=nt).map(|i| (t_lo + i as f64 * T_STEP).min(t_hi)).collect();
    let mut c1_hat = RIGHT_START;
    let mut sigma = RIGHT_START;
    while sigma >= RIGHT_FLOOR {
        let checks = opts
            .execution
            .map(ts.clone(), |t| clearly_free(z, a, ComplexPoint::new(sigma, t)));
        let mut all = true;
        for ok in checks {
            match ok {
                Ok(true) => {}
                Ok(false) | Err(Error::NearPole { .. }) => all = false,
                Err(e) => return Err(e),
            }
        }
        if !all {
            break;
        }
        c1_hat = sigma;
        sigma -= RIGHT_STEP;
    }
    let certified = Rectangle::new(c1_hat, c1_hat + CERTIFICATE_WIDTH, t_lo, t_hi)?;
    let certificate = count_apoints(z, a, &certified, opts)?;
    Ok(FreeRightScan {
        c1_hat,
        t_lo,
        t_hi,
        certificate,
        certified,
    })
}

/// Count over `[-y1, -y2] x [t_lo, t_hi]`.
pub fn scan_strip_free(
    z: &SymZeta,
    a: &TargetValue,
    y1: f64,
    y2: f64,
    t_lo: f64,
    t_hi: f64,
    opts: &LocatorOptions,
) -> Result<WindingResult> {
    if !(y1 > y2 && y2 > 0.0) {
        return Err(Error::InvalidRectangle(format!("need y1 > y2 > 0, got {y1}, {y2}")));
    }
    count_apoints(z, a, &Rectangle::new(-y1, -y2, t_lo, t_hi)?, opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripBand {
    pub t_lo: f64,
    pub t_hi: f64,
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripScan {
    pub bands: Vec<StripBand>,
    /// Lower edge of the empty run of bands reaching the top, if any.
    pub c3_hat: Option<f64>,
}

/// Strip counts in bands of height `band`, reporting where the strip
/// empties out.
#[allow(clippy::too_many_arguments)]
pub fn scan_strip_bands(
    z: &SymZeta,
    a: &TargetValue,
    y1: f64,
    y2: f64,
    t_lo: f64,
    t_hi: f64,
    band: f64,
    opts: &LocatorOptions,
) -> Result<StripScan> {
    if !(band > 0.0) {
        return Err(Error::InvalidRectangle(format!("band height {band} must be positive")));
    }
    let n = ((t_hi - t_lo) / band).ceil() as usize;
    let edges: Vec<(f64, f64)> = (0..n)
        .map(|i| (t_lo + i as f64 * band, (t_lo + (i + 1) as f64 * band).min(t_hi)))
        .collect();
    let counts = opts
        .execution
        .map(edges.clone(), |(lo, hi)| scan_strip_free(z, a, y1, y2, lo, hi, opts));
    let mut bands = Vec::with_capacity(n);
    for ((lo, hi), c) in edges.into_iter().zip(counts) {
        bands.push(StripBand {
            t_lo: lo,
            t_hi: hi,
            count: c?.count,
        });
    }
    let mut c3_hat = None;
    for b in bands.iter().rev() {
        if b.count == 0 {
            c3_hat = Some(b.t_lo);
        } else {
            break;
        }
    }
    Ok(StripScan { bands, c3_hat })
}
