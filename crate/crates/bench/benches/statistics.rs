use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hdwn_bench::white_noise;
use hdwn_core::autocov::{lag_stat, lag_stat_eigen, phi_stat};
use hdwn_core::wntest::{john_simes_test, multi_lag_test, permutation_test};
use hdwn_core::Nu4;

fn lag_statistic(c: &mut Criterion) {
    let mut group = c.benchmark_group("lag_stat");
    for (p, n) in [(50, 100), (150, 100), (150, 300)] {
        let x = white_noise(p, n);
        group.bench_with_input(BenchmarkId::new("trace", format!("{p}x{n}")), &x, |b, x| {
            b.iter(|| lag_stat(x, 1).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("eigen", format!("{p}x{n}")), &x, |b, x| {
            b.iter(|| lag_stat_eigen(x, 1).unwrap())
        });
    }
    group.finish();
}

fn tests(c: &mut Criterion) {
    let x = white_noise(150, 300);
    c.bench_function("phi_stat q=3", |b| b.iter(|| phi_stat(&x, 3).unwrap()));
    c.bench_function("multi_lag_test q=3", |b| {
        b.iter(|| multi_lag_test(&x, 3, 0.05, Nu4::Known(3.0)).unwrap())
    });
    c.bench_function("john_simes_test q=3", |b| {
        b.iter(|| john_simes_test(&x, 3, 0.05, Nu4::Known(3.0)).unwrap())
    });
    let mut group = c.benchmark_group("permutation");
    group.sample_size(10);
    group.bench_function("B=200 q=1", |b| {
        b.iter(|| permutation_test(&x, 1, 0.05, 200, 1).unwrap())
    });
    group.finish();
}

criterion_group!(benches, lag_statistic, tests);
criterion_main!(benches);
