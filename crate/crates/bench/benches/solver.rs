use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use bpswall_core::{
    classify_slope, find_critical_slope, first_integral, solve_higgs_to_magnetic, ModelParams,
};

fn bench_first_integral(c: &mut Criterion) {
    let p = ModelParams::new(2.0).unwrap();
    c.bench_function("first_integral beta=2 u=-5", |b| {
        b.iter(|| first_integral(black_box(-5.0), &p).unwrap())
    });
}

fn bench_classify(c: &mut Criterion) {
    let p = ModelParams::new(2.0).unwrap();
    c.bench_function("classify_slope beta=2", |b| {
        b.iter(|| classify_slope(black_box(0.8), black_box(1.0), &p).unwrap())
    });
}

fn bench_critical_slope(c: &mut Criterion) {
    let p = ModelParams::new(2.0).unwrap();
    let mut group = c.benchmark_group("critical_slope");
    group.sample_size(10);
    group.bench_function("find_critical_slope beta=2", |b| {
        b.iter(|| find_critical_slope(black_box(1.0), &p).unwrap())
    });
    group.finish();
}

fn bench_full_solve(c: &mut Criterion) {
    let p = ModelParams::new(2.0).unwrap();
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    group.bench_function("higgs_to_magnetic beta=2", |b| {
        b.iter(|| solve_higgs_to_magnetic(black_box(1.0), &p, (-20.0, 12.0)).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_first_integral,
    bench_classify,
    bench_critical_slope,
    bench_full_solve
);
criterion_main!(benches);
