use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use symzeta::locator::{count_apoints, locate_apoints, LocatorOptions, Rectangle};
use symzeta::{EvalPrecision, Execution, SymZeta, TargetValue, Weights};

fn strategies(c: &mut Criterion) {
    let z = SymZeta::new(Weights::new(&[1.0, 1.0]).unwrap(), EvalPrecision::default()).unwrap();
    let a = TargetValue::zero();
    let rect = Rectangle::new(-2.0, 4.0, 10.0, 40.0).unwrap();

    let mut g = c.benchmark_group("locator");
    g.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        let opts = LocatorOptions::default().with_execution(exec);
        let name = format!("{exec:?}").to_lowercase();
        g.bench_with_input(BenchmarkId::new("count", &name), &opts, |b, o| {
            b.iter(|| count_apoints(&z, &a, &rect, o).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("locate", &name), &opts, |b, o| {
            b.iter(|| locate_apoints(&z, &a, &rect, o).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, strategies);
criterion_main!(benches);
