//! Compares the rayon-backed bulk operations against their sequential
//! twins. Run with `cargo bench -p compreco`; set `COMPRECO_THREADS` to
//! control the pool.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use compreco::oracle::{
    ell_statistics, ell_statistics_seq, enumerate_classes, enumerate_classes_seq,
};
use compreco::Alphabet;

fn bench_enumeration(c: &mut Criterion) {
    let alpha = Alphabet::binary();
    let mut group = c.benchmark_group("enumerate_classes");
    group.sample_size(10);
    for n in [10usize, 12, 14] {
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, &n| {
            b.iter(|| enumerate_classes(n, &alpha).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
            b.iter(|| enumerate_classes_seq(n, &alpha).unwrap());
        });
    }
    group.finish();
}

fn bench_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("ell_statistics");
    group.sample_size(10);
    for n in [500usize, 2000] {
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, &n| {
            b.iter(|| ell_statistics(n, 4, 2000, 1));
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
            b.iter(|| ell_statistics_seq(n, 4, 2000, 1));
        });
    }
    group.finish();
}

criterion_group!(benches, bench_enumeration, bench_sampling);
criterion_main!(benches);
