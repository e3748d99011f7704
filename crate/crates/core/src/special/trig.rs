//! sin, cos and cot of `pi z` without overflow for large |Im z|.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, LN_2, PI};

/// Above this |Im z| the exponentially dominant half of sin/cos is
/// factored out (|t| > 30 when z = s/2).
const DOMINANT_IM: f64 = 15.0;

/// sin(pi x) with exact zeros at the integers.
pub(crate) fn sinpi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    let (r, sign) = if r > 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    let v = if r <= 0.5 {
        (PI * r).sin()
    } else {
        (PI * (1.0 - r)).sin()
    };
    sign * v
}

/// cos(pi x) with exact zeros at the half-integers.
pub(crate) fn cospi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.5 || r == 1.5 {
        return 0.0;
    }
    let (r, sign) = if r > 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    let v = if r <= 0.5 {
        (PI * (0.5 - r)).sin()
    } else {
        -(PI * (r - 0.5)).sin()
    };
    sign * v
}

/// e^{2 pi i z} for Im z >= 0 (or its mirror e^{-2 pi i z} for Im z < 0),
/// which always has modulus <= 1.
fn small_exponential(z: Complex64) -> Complex64 {
    let (x, y) = if z.im >= 0.0 { (z.re, z.im) } else { (-z.re, -z.im) };
    let m = (-2.0 * PI * y).exp();
    Complex64::new(m * cospi(2.0 * x), m * sinpi(2.0 * x))
}

/// A logarithm of sin(pi z), or `None` where sin(pi z) vanishes.
/// The branch is unspecified; callers exponentiate.
pub(crate) fn log_sin_pi(z: Complex64) -> Option<Complex64> {
    if z.im.abs() <= DOMINANT_IM {
        let v = Complex64::new(sinpi(z.re) * (PI * z.im).cosh(), cospi(z.re) * (PI * z.im).sinh());
        if v.re == 0.0 && v.im == 0.0 {
            return None;
        }
        return Some(v.ln());
    }
    let w = z * PI;
    let q = small_exponential(z);
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    Some(if z.im > 0.0 {
        Complex64::new(-LN_2, FRAC_PI_2) - i * w + (one - q).ln()
    } else {
        Complex64::new(-LN_2, -FRAC_PI_2) + i * w + (one - q).ln()
    })
}

/// A logarithm of cos(pi z), or `None` where cos(pi z) vanishes.
pub(crate) fn log_cos_pi(z: Complex64) -> Option<Complex64> {
    if z.im.abs() <= DOMINANT_IM {
        let v = Complex64::new(cospi(z.re) * (PI * z.im).cosh(), -sinpi(z.re) * (PI * z.im).sinh());
        if v.re == 0.0 && v.im == 0.0 {
            return None;
        }
        return Some(v.ln());
    }
    let w = z * PI;
    let q = small_exponential(z);
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    Some(if z.im > 0.0 {
        Complex64::new(-LN_2, 0.0) - i * w + (one + q).ln()
    } else {
        Complex64::new(-LN_2, 0.0) + i * w + (one + q).ln()
    })
}

/// cot(pi z); infinite at the integers.
pub(crate) fn cot_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    if z.im.abs() <= DOMINANT_IM {
        let s = Complex64::new(sinpi(z.re) * (PI * z.im).cosh(), cospi(z.re) * (PI * z.im).sinh());
        let c = Complex64::new(cospi(z.re) * (PI * z.im).cosh(), -sinpi(z.re) * (PI * z.im).sinh());
        return c / s;
    }
    let q = small_exponential(z);
    if z.im > 0.0 {
        i * (q + one) / (q - one)
    } else {
        i * (one + q) / (one - q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_sin(z: Complex64) -> Complex64 {
        (z * PI).sin()
    }

    #[test]
    fn exact_zeros() {
        for k in -6..6 {
            assert_eq!(sinpi(k as f64), 0.0);
            assert_eq!(cospi(k as f64 + 0.5), 0.0);
        }
        assert!(log_sin_pi(Complex64::new(-2.0, 0.0)).is_none());
        assert!(log_cos_pi(Complex64::new(-1.5, 0.0)).is_none());
    }

    #[test]
    fn reduced_trig_matches_std() {
        for i in 0..200 {
            let x = -7.3 + 0.0731 * i as f64;
            assert!((sinpi(x) - (PI * x).sin()).abs() < 1e-13);
            assert!((cospi(x) - (PI * x).cos()).abs() < 1e-13);
        }
    }

    #[test]
    fn dominant_forms_agree_with_direct_evaluation() {
        for &(x, y) in &[(0.3, 16.0), (-2.7, 20.0), (1.1, -17.5), (0.0, 25.0)] {
            let z = Complex64::new(x, y);
            let direct = direct_sin(z);
            let via_log = log_sin_pi(z).unwrap().exp();
            assert!(((via_log - direct) / direct).norm() < 1e-12, "{z}");
            let cdirect = (z * PI).cos();
            let cvia = log_cos_pi(z).unwrap().exp();
            assert!(((cvia - cdirect) / cdirect).norm() < 1e-12, "{z}");
            let cot = cdirect / direct;
            assert!((cot_pi(z) - cot).norm() < 1e-12, "{z}");
        }
    }

    #[test]
    fn no_overflow_far_from_axis() {
        let z = Complex64::new(0.25, 5000.0);
        let l = log_sin_pi(z).unwrap();
        assert!(l.re.is_finite() && (l.re - (PI * 5000.0 - LN_2)).abs() < 1e-9);
        let c = cot_pi(z);
        assert!((c - Complex64::new(0.0, -1.0)).norm() < 1e-12);
    }
}
