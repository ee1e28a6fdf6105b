//! End-to-end bound computations at representative sizes.

use boxbound::{dkhl_bound, lasserre_bound, ProductJacobiMeasure};
use boxbound_bench::{bivariate_quartic, trivariate_cubic, univariate_quadratic};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn bench_lasserre(c: &mut Criterion) {
    let mut group = c.benchmark_group("lasserre");
    let quadratic = univariate_quadratic();
    let mu1 = ProductJacobiMeasure::chebyshev(1).unwrap();
    group.bench_function("univariate-d50", |b| {
        b.iter(|| lasserre_bound(black_box(&quadratic), &mu1, 50, false).unwrap())
    });
    let quartic = bivariate_quartic();
    let mu2 = ProductJacobiMeasure::chebyshev(2).unwrap();
    group.bench_function("bivariate-quartic-d12", |b| {
        b.iter(|| lasserre_bound(black_box(&quartic), &mu2, 12, false).unwrap())
    });
    group.finish();
}

fn bench_dkhl(c: &mut Criterion) {
    let mut group = c.benchmark_group("dkhl");
    let quartic = bivariate_quartic();
    group.bench_function("bivariate-quartic-d10", |b| {
        b.iter(|| dkhl_bound(black_box(&quartic), 10, false).unwrap())
    });
    let cubic = trivariate_cubic();
    group.bench_function("trivariate-cubic-d6", |b| {
        b.iter(|| dkhl_bound(black_box(&cubic), 6, false).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_lasserre, bench_dkhl);
criterion_main!(benches);
