use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use super::trig::{cospi, cot_pi, sinpi};
use super::{ensure_finite, BERNOULLI_EVEN};
use crate::error::{Error, Result};

/// Stirling's series is applied once |z| reaches this radius.
const STIRLING_RADIUS: f64 = 12.0;
/// ln(2 pi) / 2
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

fn check_pole(z: Complex64) -> Result<()> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::PoleAtNonpositiveInteger { at: z.re });
    }
    Ok(())
}

/// Principal branch of log Gamma(z): analytic off the cut (-inf, 0] and
/// real on the positive axis. On the cut the limit from above is returned.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    ensure_finite(z)?;
    check_pole(z)?;
    Ok(log_gamma_unchecked(z))
}

fn log_gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        if z.im < 0.0 {
            return log_gamma_unchecked(z.conj()).conj();
        }
        // Reflection with a log of sin(pi z) that is continuous on the
        // closed upper half-plane and real-valued on (0, 1); no 2 pi i
        // correction is then needed.
        let one = Complex64::new(1.0, 0.0);
        let m = (-2.0 * PI * z.im).exp();
        let q = Complex64::new(m * cospi(2.0 * z.re), m * sinpi(2.0 * z.re));
        let log_sin = Complex64::new(-LN_2, FRAC_PI_2) - Complex64::i() * PI * z + (one - q).ln();
        return Complex64::new(LN_PI, 0.0) - log_sin - log_gamma_unchecked(one - z);
    }
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.norm() < STIRLING_RADIUS {
        shift += z.ln();
        z += 1.0;
    }
    stirling(z) - shift
}

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut series = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI_EVEN.iter().take(10).enumerate() {
        let two_k = 2.0 * (k + 1) as f64;
        series += pow * (b / (two_k * (two_k - 1.0)));
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series
}

/// Digamma psi(z) = Gamma'(z) / Gamma(z).
pub fn digamma(z: Complex64) -> Result<Complex64> {
    ensure_finite(z)?;
    check_pole(z)?;
    Ok(digamma_unchecked(z))
}

fn digamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let one = Complex64::new(1.0, 0.0);
        return digamma_unchecked(one - z) - cot_pi(z) * PI;
    }
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.norm() < STIRLING_RADIUS {
        shift += z.inv();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut pow = inv2;
    let mut series = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI_EVEN.iter().take(10).enumerate() {
        let two_k = 2.0 * (k + 1) as f64;
        series += pow * (b / two_k);
        pow *= inv2;
    }
    z.ln() - inv * 0.5 - series - shift
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn known_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        assert!(log_gamma(c(2.0, 0.0)).unwrap().norm() < 1e-14);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - 0.572_364_942_924_700_1).abs() < 1e-14);
        assert!(half.im.abs() < 1e-15);
        let five = log_gamma(c(5.0, 0.0)).unwrap();
        assert!((five.re - 24f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn recurrence_holds_across_the_plane() {
        // log Gamma(z + 1) = log Gamma(z) + log z up to a multiple of 2 pi i.
        for &(x, y) in &[(0.7, 3.0), (-3.3, 2.0), (-0.4, -7.0), (4.2, 40.0), (-12.5, 0.3)] {
            let z = c(x, y);
            let d = log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap() - z.ln();
            assert!(d.re.abs() < 1e-12, "{z}: {d}");
            let k = d.im / (2.0 * PI);
            assert!((k - k.round()).abs() < 1e-12, "{z}: {d}");
        }
    }

    #[test]
    fn principal_branch_is_continuous_in_the_upper_half_plane() {
        // The imaginary part must not jump while walking left at fixed height.
        let mut prev = log_gamma(c(5.0, 0.5)).unwrap();
        for i in 1..=400 {
            let z = c(5.0 - 0.025 * i as f64, 0.5);
            let cur = log_gamma(z).unwrap();
            assert!((cur - prev).norm() < 0.2, "jump at {z}");
            prev = cur;
        }
    }

    #[test]
    fn reflection_value_on_negative_axis() {
        // Gamma(-1/2) = -2 sqrt(pi)
        let v = log_gamma(c(-0.5, 0.0)).unwrap();
        assert!((v.re - (2.0 * PI.sqrt()).ln()).abs() < 1e-14);
        assert!((v.im + PI).abs() < 1e-14);
    }

    #[test]
    fn stirling_large_argument_matches_conjugate_symmetry() {
        let z = c(3.0, 800.0);
        let a = log_gamma(z).unwrap();
        let b = log_gamma(z.conj()).unwrap();
        assert!((a - b.conj()).norm() < 1e-10);
    }

    #[test]
    fn poles_are_rejected() {
        for k in 0..5 {
            assert!(matches!(
                log_gamma(c(-(k as f64), 0.0)),
                Err(Error::PoleAtNonpositiveInteger { .. })
            ));
        }
        assert!(log_gamma(c(-1.0, 1e-9)).is_ok());
    }

    #[test]
    fn digamma_values() {
        // psi(1) = -gamma_E
        let e = digamma(c(1.0, 0.0)).unwrap();
        assert!((e.re + 0.577_215_664_901_532_9).abs() < 1e-14);
        // psi(1/2) = -gamma_E - 2 ln 2
        let h = digamma(c(0.5, 0.0)).unwrap();
        assert!((h.re + 0.577_215_664_901_532_9 + 2.0 * LN_2).abs() < 1e-14);
        // finite-difference check of psi against log Gamma
        for &(x, y) in &[(2.5, 3.0), (-1.7, 4.0), (0.2, -30.0)] {
            let z = c(x, y);
            let h = 1e-5;
            let fd = (log_gamma(z + h).unwrap() - log_gamma(z - h).unwrap()) / (2.0 * h);
            assert!((fd - digamma(z).unwrap()).norm() < 1e-8, "{z}");
        }
    }
}
