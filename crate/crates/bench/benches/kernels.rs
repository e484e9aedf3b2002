use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use evap_bench::{generator, occupation, DT};
use evap_core::{evolve_full, page_curve, slice_propagator, transition_matrix, LogBase};

fn propagators(c: &mut Criterion) {
    let mut group = c.benchmark_group("slice_propagator");
    for k in [10, 50, 200] {
        let gen = generator(k);
        group.bench_with_input(BenchmarkId::from_parameter(k), &gen, |b, g| {
            b.iter(|| slice_propagator(black_box(g)).unwrap())
        });
    }
    group.finish();
}

fn transition(c: &mut Criterion) {
    c.bench_function("transition_matrix/n=50", |b| {
        b.iter(|| transition_matrix(black_box(occupation(50)), 1.0, DT).unwrap())
    });
}

fn curves(c: &mut Criterion) {
    let mut group = c.benchmark_group("page_curve_10k");
    group.sample_size(10);
    for n in [5, 20, 50] {
        let base = LogBase::for_occupation(occupation(n));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| page_curve(occupation(n), 1.0, DT, 10_000, base).unwrap())
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("evolve_full");
    group.sample_size(10);
    for slices in [10, 50] {
        group.bench_with_input(BenchmarkId::new("n=3", slices), &slices, |b, &s| {
            b.iter(|| evolve_full(occupation(3), 1.0, DT, s).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, propagators, transition, curves, oracle);
criterion_main!(benches);
