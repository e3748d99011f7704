//! Adaptive Gauss-Kronrod (7/15) integration of G'/G along contour pieces.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::Result;
use crate::exec::Execution;
use crate::special::ComplexPoint;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 40;
/// Subpanels one panel may be split into before it is reported unconverged.
const MAX_PIECES: usize = 4096;
/// Rounding allowance on a panel, in units of eps times the sum of |terms|.
const ROUNDING: f64 = 64.0 * f64::EPSILON;
/// A node closer to a zero than this fraction of its panel (estimated as
/// |G / G'|) marks the contour as passing too close to the zero.
const NEAR_FRACTION: f64 = 1e-4;

/// A piece of a positively oriented contour, parametrized on [0, 1].
#[derive(Debug, Clone, Copy)]
pub(crate) enum Path {
    Segment {
        from: ComplexPoint,
        to: ComplexPoint,
    },
    Arc {
        center: ComplexPoint,
        radius: f64,
        theta0: f64,
        theta1: f64,
    },
}

impl Path {
    fn at(&self, u: f64) -> (ComplexPoint, ComplexPoint) {
        match *self {
            Path::Segment { from, to } => (from + (to - from) * u, to - from),
            Path::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => {
                let th = theta0 + u * (theta1 - theta0);
                let e = Complex64::from_polar(radius, th);
                (center + e, Complex64::new(0.0, theta1 - theta0) * e)
            }
        }
    }

    fn length(&self) -> f64 {
        match *self {
            Path::Segment { from, to } => (to - from).norm(),
            Path::Arc {
                radius, theta0, theta1, ..
            } => radius * (theta1 - theta0).abs(),
        }
    }

    pub(crate) fn rectangle(corners: [ComplexPoint; 4]) -> Vec<Path> {
        (0..4)
            .map(|i| Path::Segment {
                from: corners[i],
                to: corners[(i + 1) % 4],
            })
            .collect()
    }

    pub(crate) fn circle(center: ComplexPoint, radius: f64) -> Vec<Path> {
        (0..4)
            .map(|i| Path::Arc {
                center,
                radius,
                theta0: TAU * i as f64 / 4.0,
                theta1: TAU * (i + 1) as f64 / 4.0,
            })
            .collect()
    }
}

/// Integrand sample: |G(s)| and G'(s)/G(s) (None where G is numerically 0).
pub(crate) type Sample = (f64, Option<Complex64>);

#[derive(Debug, Clone, Copy)]
pub(crate) struct Contour {
    pub integral: Complex64,
    pub min_g: f64,
    pub err: f64,
    pub converged: bool,
}

struct Piece {
    kronrod: Complex64,
    err: f64,
    /// Error level set by rounding in the samples.
    noise: f64,
    min_g: f64,
}

fn gk15<F>(path: &Path, u0: f64, u1: f64, f: &F, floor: f64, reach: f64) -> Result<Option<Piece>>
where
    F: Fn(ComplexPoint) -> Result<Sample>,
{
    let half = 0.5 * (u1 - u0);
    let mid = 0.5 * (u1 + u0);
    let mut k = Complex64::new(0.0, 0.0);
    let mut g = Complex64::new(0.0, 0.0);
    let mut min_g = f64::INFINITY;
    let mut abs = 0.0;
    for (i, (&x, &w)) in XGK.iter().zip(&WGK).enumerate() {
        let nodes: &[f64] = if x == 0.0 { &[0.0] } else { &[-x, x] };
        for &xi in nodes {
            let (s, ds) = path.at(mid + half * xi);
            let (mag, ld) = f(s)?;
            min_g = min_g.min(mag);
            let Some(ld) = ld.filter(|ld| mag >= floor && ld.norm() * reach < 1.0) else {
                return Ok(None);
            };
            let v = ld * ds;
            k += v * w;
            abs += v.norm() * w;
            if i % 2 == 1 {
                g += v * WG[i / 2];
            }
        }
    }
    Ok(Some(Piece {
        kronrod: k * half,
        err: ((k - g) * half).norm(),
        noise: ROUNDING * abs * half.abs(),
        min_g,
    }))
}

/// Adaptive integration over one panel. Returns `min_g = 0` as soon as
/// a node comes too close to a zero, and `converged = false` once the
/// panel has been split into `MAX_PIECES` pieces.
fn adaptive<F>(path: &Path, u0: f64, u1: f64, tol_per_u: f64, floor: f64, f: &F) -> Result<Contour>
where
    F: Fn(ComplexPoint) -> Result<Sample>,
{
    let mut out = Contour {
        integral: Complex64::new(0.0, 0.0),
        min_g: f64::INFINITY,
        err: 0.0,
        converged: true,
    };
    let mut stack = vec![(u0, u1, 0u32)];
    let mut pieces = 0;
    let reach = NEAR_FRACTION * path.length() * (u1 - u0);
    while let Some((a, b, depth)) = stack.pop() {
        let Some(p) = gk15(path, a, b, f, floor, reach)? else {
            out.min_g = 0.0;
            return Ok(out);
        };
        pieces += 1;
        out.min_g = out.min_g.min(p.min_g);
        let tol = (tol_per_u * (b - a)).max(p.noise);
        if pieces >= MAX_PIECES {
            out.converged = false;
            return Ok(out);
        }
        if p.err <= tol || depth >= MAX_DEPTH {
            if p.err > tol {
                out.converged = false;
            }
            out.integral += p.kronrod;
            out.err += p.err;
        } else {
            let m = 0.5 * (a + b);
            stack.push((m, b, depth + 1));
            stack.push((a, m, depth + 1));
        }
    }
    Ok(out)
}

/// Integral of G'/G over the closed contour formed by `paths`, to an
/// absolute tolerance `tol`, with panels of about `panel` length handled
/// as independent work items.
pub(crate) fn integrate<F>(paths: &[Path], f: &F, panel: f64, tol: f64, floor: f64, exec: Execution) -> Result<Contour>
where
    F: Fn(ComplexPoint) -> Result<Sample> + Sync,
{
    let total: f64 = paths.iter().map(Path::length).sum();
    let mut jobs = Vec::new();
    for path in paths {
        let len = path.length();
        let n = ((len / panel).ceil() as usize).max(1);
        let tol_per_u = tol * len / total;
        for i in 0..n {
            jobs.push((*path, i as f64 / n as f64, (i + 1) as f64 / n as f64, tol_per_u));
        }
    }
    let parts = exec.map(jobs, |(path, a, b, tpu)| adaptive(&path, a, b, tpu, floor, f));
    let mut out = Contour {
        integral: Complex64::new(0.0, 0.0),
        min_g: f64::INFINITY,
        err: 0.0,
        converged: true,
    };
    for p in parts {
        let p = p?;
        out.integral += p.integral;
        out.min_g = out.min_g.min(p.min_g);
        out.err += p.err;
        out.converged &= p.converged;
    }
    Ok(out)
}
