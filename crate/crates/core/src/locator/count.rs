use num_complex::Complex64;
use std::f64::consts::TAU;

use super::quadrature::{integrate, Path, Sample};
use super::{LocatorOptions, Rectangle, WindingResult};
use crate::error::{Error, Result};
use crate::special::{ensure_finite, ComplexPoint};
use crate::symmetric::{SymZeta, TargetValue};

/// A rectangle, or its mirror image in the real axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Cell {
    pub rect: Rectangle,
    pub mirrored: bool,
}

impl Cell {
    pub fn corners(&self) -> [ComplexPoint; 4] {
        let c = self.rect.corners();
        if self.mirrored {
            // conjugation reverses orientation; restore it
            [c[3].conj(), c[2].conj(), c[1].conj(), c[0].conj()]
        } else {
            c
        }
    }

    pub fn center(&self) -> ComplexPoint {
        self.map(self.rect.center())
    }

    pub fn contains(&self, s: ComplexPoint) -> bool {
        self.rect.contains(self.map(s))
    }

    /// Identity, or conjugation for mirrored cells (an involution).
    pub fn map(&self, s: ComplexPoint) -> ComplexPoint {
        if self.mirrored {
            s.conj()
        } else {
            s
        }
    }

    pub fn with_rect(&self, rect: Rectangle) -> Cell {
        Cell {
            rect,
            mirrored: self.mirrored,
        }
    }
}

pub(crate) fn sampler<'a>(z: &'a SymZeta, a: &'a TargetValue) -> impl Fn(ComplexPoint) -> Result<Sample> + Sync + 'a {
    move |s| {
        let (g, ld) = z.g_and_logderiv(a, s)?;
        Ok((g.norm(), ld))
    }
}

/// Winding number of G around `paths`, or `None` if the contour passes
/// too close to a zero or cannot be resolved at the finest tolerance.
pub(crate) fn winding(
    z: &SymZeta,
    a: &TargetValue,
    paths: &[Path],
    opts: &LocatorOptions,
) -> Result<Option<WindingResult>> {
    let f = sampler(z, a);
    let mut tol = TAU * opts.winding_tol;
    let mut last = Complex64::new(f64::NAN, f64::NAN);
    let mut resolved = true;
    for _ in 0..=opts.max_refine {
        let c = integrate(paths, &f, opts.panel, tol, opts.boundary_min, opts.execution)?;
        if c.min_g < opts.boundary_min {
            return Ok(None);
        }
        let raw = c.integral / Complex64::new(0.0, TAU);
        last = raw;
        resolved = c.converged;
        let n = raw.re.round();
        let residual = (raw - n).norm();
        if c.converged && n >= 0.0 && residual <= opts.integer_tol {
            return Ok(Some(WindingResult {
                count: n as u32,
                raw_integral: raw,
                integer_residual: residual,
                perturbation: 0.0,
            }));
        }
        tol *= 1e-2;
    }
    if !resolved {
        log::debug!("contour unresolved at winding {last}; moving it");
        return Ok(None);
    }
    Err(Error::NonIntegerWinding {
        re: last.re,
        im: last.im,
        tolerance: opts.integer_tol,
    })
}

pub(crate) fn count_cell(
    z: &SymZeta,
    a: &TargetValue,
    cell: &Cell,
    opts: &LocatorOptions,
) -> Result<Option<WindingResult>> {
    winding(z, a, &Path::rectangle(cell.corners()), opts)
}

/// Count with the boundary perturbation rule: the cell as given, then grown
/// by `1e-3 (1 + k)` for `k = 0, .., attempts - 1`. Returns the cell that
/// was finally used.
pub(crate) fn count_perturbed(
    z: &SymZeta,
    a: &TargetValue,
    cell: &Cell,
    opts: &LocatorOptions,
) -> Result<(WindingResult, Cell)> {
    cell.rect.validate()?;
    if let Some(w) = count_cell(z, a, cell, opts)? {
        return Ok((w, *cell));
    }
    for k in 0..opts.perturb_attempts {
        let d = 1e-3 * (1 + k) as f64;
        let grown = cell.with_rect(cell.rect.grown(d));
        log::debug!("contour near a zero; growing by {d}");
        if let Some(mut w) = count_cell(z, a, &grown, opts)? {
            w.perturbation = d;
            return Ok((w, grown));
        }
    }
    Err(Error::BoundaryTooCloseToZero {
        threshold: opts.boundary_min,
        attempts: opts.perturb_attempts,
    })
}

/// Number of a-points of `Z` (zeros of `G`) inside `rect`, with multiplicity.
pub fn count_apoints(z: &SymZeta, a: &TargetValue, rect: &Rectangle, opts: &LocatorOptions) -> Result<WindingResult> {
    let cell = Cell {
        rect: *rect,
        mirrored: false,
    };
    count_perturbed(z, a, &cell, opts).map(|(w, _)| w)
}

/// As [`count_apoints`] for the mirror image `{conj s : s in rect}`,
/// evaluating `G` directly in the lower half-plane.
pub fn count_mirrored(z: &SymZeta, a: &TargetValue, rect: &Rectangle, opts: &LocatorOptions) -> Result<WindingResult> {
    let cell = Cell {
        rect: *rect,
        mirrored: true,
    };
    count_perturbed(z, a, &cell, opts).map(|(w, _)| w)
}

/// Number of a-points in the disk `|s - center| < radius`. The boundary is
/// perturbed by growing the radius, as for rectangles.
pub fn count_in_disk(
    z: &SymZeta,
    a: &TargetValue,
    center: ComplexPoint,
    radius: f64,
    opts: &LocatorOptions,
) -> Result<WindingResult> {
    ensure_finite(center)?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidDisk(format!("radius {radius} must be positive")));
    }
    let reach = radius + 1e-3 * opts.perturb_attempts as f64 + 1e-9;
    if let Some(p) = z.poles().into_iter().find(|&p| (center - p).norm() <= reach) {
        return Err(Error::InvalidDisk(format!("disk reaches the pole at {p}")));
    }
    if let Some(w) = winding(z, a, &Path::circle(center, radius), opts)? {
        return Ok(w);
    }
    for k in 0..opts.perturb_attempts {
        let d = 1e-3 * (1 + k) as f64;
        if let Some(mut w) = winding(z, a, &Path::circle(center, radius + d), opts)? {
            w.perturbation = d;
            return Ok(w);
        }
    }
    Err(Error::BoundaryTooCloseToZero {
        threshold: opts.boundary_min,
        attempts: opts.perturb_attempts,
    })
}
