//! Locate the zeros of Z for weights (2, 1) up to height 200 and print the
//! weighted sums over them.
//!
//! ```text
//! cargo run --release --example weighted_sums
//! ```

use std::time::Instant;
use symzeta::locator::{locate_apoints, LocatorOptions, Rectangle};
use symzeta::report::weighted_sums;
use symzeta::{EvalPrecision, SymZeta, TargetValue, Weights};

fn main() -> symzeta::Result<()> {
    let z = SymZeta::new(Weights::new(&[2.0, 1.0])?, EvalPrecision::default())?;
    let start = Instant::now();
    let points = locate_apoints(
        &z,
        &TargetValue::zero(),
        &Rectangle::new(-5.0, 8.75, 0.5, 200.0)?,
        &LocatorOptions::default(),
    )?;
    println!("{} zeros in {:.1?}", points.len(), start.elapsed());
    for t in [50.0, 100.0, 200.0] {
        let s = weighted_sums(&points, z.weights(), 5.0, t);
        println!(
            "T={t:>5}  n={:>4}  half/TlogT={:+.4}  crit/TlogT={:+.4}",
            s.count, s.half_over_t_log_t, s.crit_over_t_log_t
        );
    }
    Ok(())
}
