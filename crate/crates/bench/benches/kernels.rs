use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use rfdual_core::csum::{build_table, csum_expsum, csum_gcd, csum_mult};
use rfdual_core::dseries::zeta;
use rfdual_core::dualseries::{catalog, dual_coeff_euler, dual_coeff_sum};
use rfdual_core::{factorize, Grouping};

fn ramanujan_sums(c: &mut Criterion) {
    let mut g = c.benchmark_group("csum");
    g.bench_function("gcd", |b| b.iter(|| csum_gcd(black_box(720_720), black_box(360_360))));
    g.bench_function("mult", |b| b.iter(|| csum_mult(black_box(720_720), black_box(360_360))));
    g.bench_function("expsum", |b| b.iter(|| csum_expsum(black_box(2_310), black_box(1_155))));
    for size in [100u32, 400] {
        g.bench_with_input(BenchmarkId::new("table", size), &size, |b, &s| b.iter(|| build_table(s, s).unwrap()));
    }
    g.finish();
}

fn arithmetic(c: &mut Criterion) {
    c.bench_function("factorize", |b| b.iter(|| factorize(black_box(999_999_000_001))));
    c.bench_function("zeta(3)", |b| b.iter(|| zeta(black_box(3.0)).unwrap()));
}

fn coefficients(c: &mut Criterion) {
    let case = catalog("ex3-7", None).unwrap();
    let mut g = c.benchmark_group("coefficient");
    g.sample_size(10);
    g.bench_function("divisor sum M=1e4", |b| b.iter(|| dual_coeff_sum(&case.side_f, black_box(4), 10_000).unwrap()));
    g.bench_function("euler P=1e4", |b| b.iter(|| dual_coeff_euler(&case.side_f, black_box(4), 10_000).unwrap()));
    g.finish();
}

fn series(c: &mut Criterion) {
    let case = catalog("ra1", Some(2.0)).unwrap();
    let mut g = c.benchmark_group("series");
    g.sample_size(10);
    g.bench_function("ra1 N=1e5", |b| b.iter(|| case.verify(black_box(6), 100_000, Grouping::Natural, 1e-3).unwrap()));
    g.finish();
}

criterion_group!(benches, ramanujan_sums, arithmetic, coefficients, series);
criterion_main!(benches);
