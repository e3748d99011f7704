//! Counting a-points by the argument principle and locating them by
//! subdivision and Newton refinement.

mod count;
mod quadrature;
mod scan;
mod subdivide;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::special::ComplexPoint;

pub use count::{count_apoints, count_in_disk, count_mirrored};
pub use scan::{
    cluster_scan, scan_free_right, scan_strip_bands, scan_strip_free, verify_cluster, ClusterScan, FreeRightScan,
    StripBand, StripScan,
};
pub use subdivide::{locate_apoints, locate_mirrored};

/// Accepted residual as a multiple of the evaluation error estimate.
pub const RESIDUAL_FLOOR_FACTOR: f64 = 10.0;

/// Default lower edge of counting windows.
pub const DEFAULT_T_MIN: f64 = 0.5;

/// Axis-parallel rectangle in the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl Rectangle {
    pub fn new(sigma_min: f64, sigma_max: f64, t_min: f64, t_max: f64) -> Result<Self> {
        let r = Rectangle {
            sigma_min,
            sigma_max,
            t_min,
            t_max,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.sigma_min, self.sigma_max, self.t_min, self.t_max];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidRectangle("non-finite edge".into()));
        }
        if !(self.sigma_min < self.sigma_max) {
            return Err(Error::InvalidRectangle(format!(
                "sigma_min {} must be below sigma_max {}",
                self.sigma_min, self.sigma_max
            )));
        }
        if !(0.0 < self.t_min && self.t_min < self.t_max) {
            return Err(Error::InvalidRectangle(format!(
                "need 0 < t_min < t_max, got t_min {} and t_max {}",
                self.t_min, self.t_max
            )));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.sigma_max - self.sigma_min
    }

    pub fn height(&self) -> f64 {
        self.t_max - self.t_min
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> ComplexPoint {
        ComplexPoint::new(0.5 * (self.sigma_min + self.sigma_max), 0.5 * (self.t_min + self.t_max))
    }

    pub fn contains(&self, s: ComplexPoint) -> bool {
        self.sigma_min <= s.re && s.re <= self.sigma_max && self.t_min <= s.im && s.im <= self.t_max
    }

    /// Grown by `d` on every side; the lower edge stays above the real axis.
    pub fn grown(&self, d: f64) -> Rectangle {
        Rectangle {
            sigma_min: self.sigma_min - d,
            sigma_max: self.sigma_max + d,
            t_min: if self.t_min - d > 0.0 {
                self.t_min - d
            } else {
                0.5 * self.t_min
            },
            t_max: self.t_max + d,
        }
    }

    /// Corners in positive orientation.
    pub(crate) fn corners(&self) -> [ComplexPoint; 4] {
        [
            ComplexPoint::new(self.sigma_min, self.t_min),
            ComplexPoint::new(self.sigma_max, self.t_min),
            ComplexPoint::new(self.sigma_max, self.t_max),
            ComplexPoint::new(self.sigma_min, self.t_max),
        ]
    }

    /// Split at fractions `fx`, `fy` of the width and height.
    pub(crate) fn quadrisect(&self, fx: f64, fy: f64) -> [Rectangle; 4] {
        let x = self.sigma_min + fx * self.width();
        let y = self.t_min + fy * self.height();
        [
            Rectangle {
                sigma_max: x,
                t_max: y,
                ..*self
            },
            Rectangle {
                sigma_min: x,
                t_max: y,
                ..*self
            },
            Rectangle {
                sigma_min: x,
                t_min: y,
                ..*self
            },
            Rectangle {
                sigma_max: x,
                t_min: y,
                ..*self
            },
        ]
    }
}

/// A located a-point `rho = beta + i gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct APoint {
    pub beta: f64,
    pub gamma: f64,
    pub multiplicity: u32,
    /// |Z(rho) - a|
    pub residual: f64,
    /// Rounding floor of the residual: a multiple of the propagated
    /// evaluation error of Z at rho.
    pub residual_floor: f64,
    pub newton_iters: u32,
}

impl APoint {
    pub fn point(&self) -> ComplexPoint {
        ComplexPoint::new(self.beta, self.gamma)
    }

    /// Residual within `tol`, or within the rounding floor where the terms
    /// of the expansion are too large for `tol` to be resolvable.
    pub fn accepted(&self, tol: f64) -> bool {
        self.residual <= tol.max(self.residual_floor)
    }
}

/// Result of one argument-principle count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    pub count: u32,
    /// (1 / 2 pi i) times the contour integral of G'/G.
    #[serde(with = "crate::special::re_im")]
    pub raw_integral: ComplexPoint,
    pub integer_residual: f64,
    /// Amount by which the contour was moved off a near-zero (0 if none).
    pub perturbation: f64,
}

/// Tuning of the contour counter and the locator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocatorOptions {
    pub execution: Execution,
    /// Quadrature tolerance on the winding number.
    pub winding_tol: f64,
    /// Accepted distance of the winding number from an integer.
    pub integer_tol: f64,
    /// Smallest |G| tolerated on a contour.
    pub boundary_min: f64,
    pub perturb_attempts: usize,
    /// Tolerance refinements (factor 1/100 each) before giving up.
    pub max_refine: usize,
    /// Accepted |Z(rho) - a| for a located point.
    pub residual_tol: f64,
    pub newton_max_iter: u32,
    /// Cells below this diameter are reported with their multiplicity.
    pub min_cell: f64,
    /// Initial quadrature panel length.
    pub panel: f64,
}

impl Default for LocatorOptions {
    fn default() -> Self {
        LocatorOptions {
            execution: Execution::default(),
            winding_tol: 1e-4,
            integer_tol: 1e-3,
            boundary_min: 1e-6,
            perturb_attempts: 5,
            max_refine: 3,
            residual_tol: 1e-8,
            newton_max_iter: 60,
            min_cell: 1e-6,
            panel: 1.0,
        }
    }
}

impl LocatorOptions {
    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangle_validation() {
        assert!(Rectangle::new(0.0, 1.0, 0.5, 2.0).is_ok());
        assert!(Rectangle::new(1.0, 1.0, 0.5, 2.0).is_err());
        assert!(Rectangle::new(0.0, 1.0, 0.0, 2.0).is_err());
        assert!(Rectangle::new(0.0, 1.0, -3.0, -2.0).is_err());
        assert!(Rectangle::new(0.0, f64::NAN, 1.0, 2.0).is_err());
    }

    #[test]
    fn quadrisection_tiles_the_cell() {
        let r = Rectangle::new(-1.0, 3.0, 1.0, 5.0).unwrap();
        let q = r.quadrisect(0.5, 0.25);
        let area: f64 = q.iter().map(|c| c.width() * c.height()).sum();
        assert!((area - 16.0).abs() < 1e-12);
        assert_eq!(q[0].sigma_max, 1.0);
        assert_eq!(q[2].t_min, 2.0);
    }

    #[test]
    fn growth_stays_in_upper_half_plane() {
        let r = Rectangle::new(0.0, 1.0, 1e-4, 1.0).unwrap().grown(1e-3);
        assert!(r.t_min > 0.0);
        assert!(r.validate().is_ok());
    }
}
