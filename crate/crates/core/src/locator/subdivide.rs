use super::count::{count_cell, count_perturbed, Cell};
use super::{APoint, LocatorOptions, Rectangle, RESIDUAL_FLOOR_FACTOR};
use crate::error::{Error, Result};
use crate::special::ComplexPoint;
use crate::symmetric::{SymZeta, TargetValue};

/// Offsets of the split lines from the midpoint, tried in turn when a
/// split line passes too close to a zero.
const JITTER: [f64; 8] = [0.0, 0.0377, -0.0613, 0.0891, -0.1137, 0.1409, -0.1693, 0.1931];

/// Cells this small that still fail Newton are reported as divergence.
const NEWTON_FLOOR: f64 = 1e-11;

enum Step {
    Found(APoint),
    Split(Vec<(Cell, u32)>),
}

/// All a-points in `rect` with multiplicity, sorted by gamma then beta.
///
/// The region is tiled into near-square tiles, every cell with count above
/// one is quadrisected, and every count-one cell is refined by Newton's
/// method on `G` from its center (splitting further when Newton leaves the
/// cell). If the contour had to be perturbed, points are located in the
/// perturbed rectangle.
pub fn locate_apoints(z: &SymZeta, a: &TargetValue, rect: &Rectangle, opts: &LocatorOptions) -> Result<Vec<APoint>> {
    locate(
        z,
        a,
        &Cell {
            rect: *rect,
            mirrored: false,
        },
        opts,
    )
}

/// As [`locate_apoints`] for the mirror image of `rect` in the real axis;
/// the returned points have negative `gamma`.
pub fn locate_mirrored(z: &SymZeta, a: &TargetValue, rect: &Rectangle, opts: &LocatorOptions) -> Result<Vec<APoint>> {
    locate(
        z,
        a,
        &Cell {
            rect: *rect,
            mirrored: true,
        },
        opts,
    )
}

fn locate(z: &SymZeta, a: &TargetValue, cell: &Cell, opts: &LocatorOptions) -> Result<Vec<APoint>> {
    let (total, cell) = count_perturbed(z, a, cell, opts)?;
    if total.count == 0 {
        return Ok(Vec::new());
    }
    let mut work = tiles(z, a, &cell, total.count, opts)?;
    let mut found = Vec::new();
    while !work.is_empty() {
        let steps = opts.execution.map(work, |(c, n)| step(z, a, &c, n, opts));
        work = Vec::new();
        for s in steps {
            match s? {
                Step::Found(p) => found.push(p),
                Step::Split(children) => work.extend(children),
            }
        }
    }
    let located: usize = found.iter().map(|p| p.multiplicity as usize).sum();
    if located != total.count as usize {
        return Err(Error::CountMismatch {
            located,
            counted: total.count as usize,
        });
    }
    found.sort_by(|p, q| p.gamma.total_cmp(&q.gamma).then(p.beta.total_cmp(&q.beta)));
    Ok(found)
}

/// Near-square tiling of a long cell, each tile with its count.
fn tiles(z: &SymZeta, a: &TargetValue, cell: &Cell, total: u32, opts: &LocatorOptions) -> Result<Vec<(Cell, u32)>> {
    let r = cell.rect;
    let (nx, ny) = if r.height() > r.width() {
        (1, (r.height() / r.width()).ceil() as usize)
    } else {
        ((r.width() / r.height()).ceil() as usize, 1)
    };
    if nx * ny == 1 {
        return Ok(vec![(*cell, total)]);
    }
    for jitter in JITTER {
        let line = |i: usize, n: usize, lo: f64, len: f64| {
            if i == 0 {
                lo
            } else if i == n {
                lo + len
            } else {
                lo + len * (i as f64 + jitter) / n as f64
            }
        };
        let mut parts = Vec::with_capacity(nx * ny);
        for i in 0..nx {
            for j in 0..ny {
                parts.push(cell.with_rect(Rectangle {
                    sigma_min: line(i, nx, r.sigma_min, r.width()),
                    sigma_max: line(i + 1, nx, r.sigma_min, r.width()),
                    t_min: line(j, ny, r.t_min, r.height()),
                    t_max: line(j + 1, ny, r.t_min, r.height()),
                }));
            }
        }
        let counts = opts.execution.map(parts.clone(), |c| count_cell(z, a, &c, opts));
        let counts: Option<Vec<u32>> = counts
            .into_iter()
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .map(|w| w.map(|w| w.count))
            .collect();
        match counts {
            Some(c) if c.iter().sum::<u32>() == total => {
                return Ok(parts.into_iter().zip(c).filter(|(_, n)| *n > 0).collect());
            }
            Some(c) => log::warn!("tile counts sum to {} against {total}; retiling", c.iter().sum::<u32>()),
            None => log::debug!("tile line near a zero; retiling"),
        }
    }
    Err(Error::BoundaryTooCloseToZero {
        threshold: opts.boundary_min,
        attempts: JITTER.len(),
    })
}

fn step(z: &SymZeta, a: &TargetValue, cell: &Cell, n: u32, opts: &LocatorOptions) -> Result<Step> {
    let diam = cell.rect.diameter();
    if n == 1 || diam < opts.min_cell {
        if let Some(p) = newton(z, a, cell, n, opts)? {
            return Ok(Step::Found(p));
        }
        if diam < opts.min_cell && n > 1 {
            return Ok(Step::Found(measured(z, a, cell.center(), n, 0)?));
        }
        if diam < NEWTON_FLOOR {
            let s = cell.center();
            return Err(Error::NewtonDiverged { re: s.re, im: s.im });
        }
    }
    split(z, a, cell, n, opts).map(Step::Split)
}

fn split(z: &SymZeta, a: &TargetValue, cell: &Cell, n: u32, opts: &LocatorOptions) -> Result<Vec<(Cell, u32)>> {
    for (k, jitter) in JITTER.iter().enumerate() {
        let fy = 0.5 + JITTER[(k + 3) % JITTER.len()];
        let children = cell.rect.quadrisect(0.5 + jitter, fy);
        let mut out = Vec::with_capacity(4);
        let mut sum = 0;
        let mut ok = true;
        for r in children {
            let child = cell.with_rect(r);
            match count_cell(z, a, &child, opts)? {
                Some(w) => {
                    sum += w.count;
                    if w.count > 0 {
                        out.push((child, w.count));
                    }
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && sum == n {
            return Ok(out);
        }
        if ok {
            log::warn!("children of a count-{n} cell sum to {sum}; resplitting");
        }
    }
    Err(Error::BoundaryTooCloseToZero {
        threshold: opts.boundary_min,
        attempts: JITTER.len(),
    })
}

/// Newton's method on `G` (modified by the multiplicity `m`) from the cell
/// center. `None` if it leaves the cell or stalls above the residual
/// tolerance.
fn newton(z: &SymZeta, a: &TargetValue, cell: &Cell, m: u32, opts: &LocatorOptions) -> Result<Option<APoint>> {
    let mut s: ComplexPoint = cell.center();
    let reach = 2.0 * cell.rect.diameter();
    let mut iters = 0;
    let mut settled = 0;
    while iters < opts.newton_max_iter {
        iters += 1;
        let (_, ld) = z.g_and_logderiv(a, s)?;
        let Some(ld) = ld else { break };
        let step = m as f64 / ld;
        s -= step;
        if !(s.re.is_finite() && s.im.is_finite()) || (s - cell.center()).norm() > reach {
            return Ok(None);
        }
        if step.norm() <= 1e-13 * s.norm().max(1.0) {
            settled += 1;
            if settled == 2 {
                break;
            }
        }
    }
    if !cell.contains(s) {
        return Ok(None);
    }
    let p = measured(z, a, s, m, iters)?;
    Ok(p.accepted(opts.residual_tol).then_some(p))
}

fn measured(z: &SymZeta, a: &TargetValue, s: ComplexPoint, m: u32, iters: u32) -> Result<APoint> {
    let e = z.eval_full(s, false)?;
    Ok(APoint {
        beta: s.re,
        gamma: s.im,
        multiplicity: m,
        residual: (e.value - a.a).norm(),
        residual_floor: RESIDUAL_FLOOR_FACTOR * e.value_err,
        newton_iters: iters,
    })
}
