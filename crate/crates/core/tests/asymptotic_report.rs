//! Main terms, count comparisons, weighted sums and tail densities.

use num_complex::Complex64;
use std::f64::consts::TAU;
use symzeta::locator::{count_apoints, locate_apoints, APoint, LocatorOptions, Rectangle};
use symzeta::report::*;
use symzeta::{EvalPrecision, Execution, SymZeta, TargetValue, Weights};

fn sym(w: &[f64]) -> SymZeta {
    SymZeta::new(Weights::new(w).unwrap(), EvalPrecision::default()).unwrap()
}

fn target(re: f64, im: f64) -> TargetValue {
    TargetValue::new(Complex64::new(re, im)).unwrap()
}

fn pt(beta: f64, gamma: f64, multiplicity: u32) -> APoint {
    APoint {
        beta,
        gamma,
        multiplicity,
        residual: 0.0,
        residual_floor: 0.0,
        newton_iters: 0,
    }
}

#[test]
fn zero_target_shifts_the_main_term_by_the_block_indices() {
    for w in [&[1.0, 1.0][..], &[2.0, 1.0], &[1.0, 1.0, 1.0], &[2.5, 1.5, 0.5]] {
        let ww = Weights::new(w).unwrap();
        // log(1^{a_1} 2^{a_2} ... r^{a_r})
        let log_idx: f64 = w.iter().enumerate().map(|(j, aj)| aj * ((j + 1) as f64).ln()).sum();
        for t in [30.0, 100.0, 1234.5] {
            let d = main_term_n(&ww, &TargetValue::zero(), t) - main_term_n(&ww, &target(1.0, 0.0), t);
            let expected = -t / TAU * log_idx;
            assert!((d - expected).abs() <= 1e-12 * expected.abs().max(1.0), "{w:?} {t}");
        }
    }
}

#[test]
fn main_term_range_flag() {
    let w = Weights::new(&[2.0, 0.5]).unwrap();
    assert!(!main_term_in_range(&w, 10.0));
    assert!(main_term_in_range(&w, 13.0));
}

#[test]
fn counts_against_main_term_for_two_equal_weights() {
    let z = sym(&[1.0, 1.0]);
    let grid = [50.0, 100.0, 200.0];
    let opts = LocatorOptions::default();
    for a in [TargetValue::zero(), target(1.0, 0.0)] {
        let reports = compare_counts(&z, &a, 5.0, &grid, &opts).unwrap();
        for r in &reports {
            println!(
                "a = {}: T = {}, N = {}, main = {:.4}, disc/log T = {:.3}",
                a.a, r.t, r.computed_count, r.main_term, r.discrepancy_over_log_t
            );
            assert_eq!(r.discrepancy, r.computed_count as f64 - r.main_term);
            assert_eq!(r.main_term, main_term_n(z.weights(), &a, r.t));
            assert!(!r.flagged);
            assert!(r.x > 1.0 && r.t > r.t_min);
        }
        assert!(reports.windows(2).all(|p| p[0].computed_count <= p[1].computed_count));
        for q in consecutive_ratios(&reports) {
            assert!(q <= 3.0, "{q}");
        }
    }
}

#[test]
fn count_report_matches_a_direct_count() {
    let z = sym(&[2.0, 1.0]);
    let a = target(0.5, -0.5);
    let opts = LocatorOptions::default();
    let r = &compare_counts(&z, &a, 2.0, &[40.0], &opts).unwrap()[0];
    let direct = count_apoints(&z, &a, &Rectangle::new(-2.0, r.x, 0.5, 40.0).unwrap(), &opts).unwrap();
    assert_eq!(r.computed_count, direct.count);
}

#[test]
fn sum_identities_on_a_located_set() {
    let z = sym(&[1.0, 1.0]);
    let opts = LocatorOptions::default();
    let pts = locate_apoints(
        &z,
        &TargetValue::zero(),
        &Rectangle::new(-5.0, 8.5, 0.5, 100.0).unwrap(),
        &opts,
    )
    .unwrap();
    for (y, t) in [(5.0, 100.0), (0.5, 60.0), (1.0, 100.0)] {
        let s = weighted_sums(&pts, z.weights(), y, t);
        let (shift_half, shift_crit) = sum_shifts(z.weights(), y);
        let n = s.count as f64;
        assert!((s.sum_half - (s.sum_littlewood - shift_half * n)).abs() <= 1e-9 * s.sum_littlewood.abs().max(1.0));
        assert!((s.sum_crit - (s.sum_littlewood - shift_crit * n)).abs() <= 1e-9 * s.sum_littlewood.abs().max(1.0));
        // r = A: both centerings coincide and the T log T term vanishes
        assert_eq!(s.predicted_half, 0.0);
        assert!((s.sum_half - s.sum_crit).abs() <= 1e-9 * s.sum_half.abs().max(1.0));
        println!(
            "y = {y}, T = {t}: N = {}, sum_half = {:.3}, sum_half / T = {:.4}",
            s.count,
            s.sum_half,
            s.sum_half / t
        );
    }
    let s = weighted_sums(&pts, z.weights(), 5.0, 100.0);
    assert_eq!(s.count, 69);
    assert!(s.sum_half.abs() <= 5.0 * 100.0, "{}", s.sum_half);
}

#[test]
fn sums_respect_the_window_and_multiplicity() {
    let w = Weights::new(&[2.0, 1.0]).unwrap();
    let pts = [
        pt(0.25, 10.0, 1),
        pt(-0.5, 20.0, 2),
        pt(-3.0, 20.0, 1), // left of -y
        pt(0.5, 0.25, 1),  // below t_min
        pt(0.5, 150.0, 1), // above T
    ];
    let s = weighted_sums(&pts, &w, 1.0, 100.0);
    assert_eq!(s.count, 3);
    assert!((s.sum_half - TAU * ((0.25 - 0.5) + 2.0 * (-0.5 - 0.5))).abs() < 1e-12);
    assert!((s.sum_crit - TAU * ((0.25 - 1.0 / 3.0) + 2.0 * (-0.5 - 1.0 / 3.0))).abs() < 1e-12);
    assert!((s.predicted_half + 0.5 * 100.0 * 100f64.ln()).abs() < 1e-9);
    assert!((s.predicted_littlewood - 4.0 * 100.0 * 100f64.ln()).abs() < 1e-9);
}

#[test]
fn two_one_half_sum_is_reported() {
    let z = sym(&[2.0, 1.0]);
    let opts = LocatorOptions::default();
    let pts = locate_apoints(
        &z,
        &TargetValue::zero(),
        &Rectangle::new(-5.0, 8.75, 0.5, 100.0).unwrap(),
        &opts,
    )
    .unwrap();
    let s = weighted_sums(&pts, z.weights(), 5.0, 100.0);
    println!(
        "w = (2,1), T = 100: N = {}, half / T log T = {:.4} (predicted -0.5), crit / T log T = {:.4}",
        s.count, s.half_over_t_log_t, s.crit_over_t_log_t
    );
    assert!((-1.0..=0.0).contains(&s.half_over_t_log_t));
}

#[test]
fn tail_counts_nest_in_delta() {
    let w = Weights::new(&[1.0, 1.0]).unwrap();
    let pts: Vec<APoint> = (0..40)
        .map(|k| pt(-1.0 + 0.07 * k as f64, 3.0 + k as f64, 1 + k % 2))
        .collect();
    let mut last = u32::MAX;
    for delta in [0.01, 0.1, 0.3, 0.5, 1.0, 1.5] {
        let r = tail_density(&pts, &w, delta, 100.0).unwrap();
        assert_eq!(r.y3, 0.5);
        assert!(r.tail_count <= last);
        assert!(r.below_y3_count >= r.tail_count);
        assert!((r.bound_scale - 100.0 * 100f64.ln().ln() / delta).abs() < 1e-9);
        last = r.tail_count;
    }
    assert_eq!(
        tail_density(&pts, &Weights::new(&[3.0, 0.25]).unwrap(), 0.1, 50.0)
            .unwrap()
            .y3,
        2.0
    );
}

#[test]
fn special_delta_value() {
    let l = 1000f64.ln();
    assert!((special_delta(1000.0) - l.ln() * l.ln() / l).abs() < 1e-15);
    assert!((special_delta(1000.0) - 0.540_713_374_56).abs() < 1e-10);
}

#[test]
fn tail_beyond_one_agrees_with_a_contour_count() {
    let z = sym(&[1.0, 1.0]);
    let opts = LocatorOptions::default();
    let zero = TargetValue::zero();
    let pts = locate_apoints(&z, &zero, &Rectangle::new(-5.0, 8.5, 0.5, 100.0).unwrap(), &opts).unwrap();
    let tail = tail_density(&pts, z.weights(), 0.5, 100.0).unwrap();
    let contour = count_apoints(&z, &zero, &Rectangle::new(1.0, 6.0, 0.5, 100.0).unwrap(), &opts).unwrap();
    println!(
        "beta > 1 up to T = 100: tail {} contour {}",
        tail.tail_count, contour.count
    );
    assert_eq!(tail.tail_count, contour.count);
}

#[test]
fn right_decay_rate_for_two_equal_weights() {
    // G - 1 ~ (2/3)^s once the 2^-s term is divided out
    let z = sym(&[1.0, 1.0]);
    let sigmas: Vec<f64> = (0..=12).map(|k| 10.0 + 2.5 * k as f64).collect();
    let d = right_decay(&z, 7.0, &sigmas).unwrap();
    assert!((d.c_hat - 2.0 / 3.0).abs() < 0.02, "{}", d.c_hat);
}

#[test]
fn reports_are_deterministic() {
    let z = sym(&[1.0, 1.0]);
    let a = target(1.0, 1.0);
    let seq = LocatorOptions::default().with_execution(Execution::Sequential);
    let par = LocatorOptions::default().with_execution(Execution::Parallel);
    let r1 = serde_json::to_string(&compare_counts(&z, &a, 3.0, &[20.0, 40.0], &seq).unwrap()).unwrap();
    let r2 = serde_json::to_string(&compare_counts(&z, &a, 3.0, &[20.0, 40.0], &par).unwrap()).unwrap();
    assert_eq!(r1, r2);
    let pts = locate_apoints(&z, &a, &Rectangle::new(-3.0, 6.0, 0.5, 40.0).unwrap(), &par).unwrap();
    let s1 = serde_json::to_string(&weighted_sums(&pts, z.weights(), 3.0, 40.0)).unwrap();
    let s2 = serde_json::to_string(&weighted_sums(&pts.clone(), z.weights(), 3.0, 40.0)).unwrap();
    assert_eq!(s1, s2);
    assert!(r1.contains("\"T\":20.0"));
}
