use cecot_bench::{complex, square_matrix};
use cecot_core::ce::{build_ce, cototalize};
use cecot_core::exactla::rank;
use cecot_core::towers::{default_depth, truncation_tower};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn bench_rank(c: &mut Criterion) {
    let mut g = c.benchmark_group("rank");
    for n in [16, 64, 128] {
        let a = square_matrix(7, n, n as u64);
        g.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| b.iter(|| rank(black_box(a))));
    }
    g.finish();
}

fn bench_build_ce(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_ce");
    for window in [1usize, 2, 4] {
        let x = complex(3, 2, window, 6, 11);
        g.bench_with_input(BenchmarkId::from_parameter(window), &x, |b, x| {
            b.iter(|| build_ce(black_box(x), window + 3).expect("valid complex"))
        });
    }
    g.finish();
}

fn bench_cototalize(c: &mut Criterion) {
    let mut g = c.benchmark_group("cototalize");
    for window in [1usize, 2, 4] {
        let ce = build_ce(&complex(3, 2, window, 6, 11), window + 3).expect("valid complex");
        g.bench_with_input(BenchmarkId::from_parameter(window), &ce.bicomplex, |b, d| {
            b.iter(|| cototalize(black_box(d)).expect("commuting grid"))
        });
    }
    g.finish();
}

fn bench_tower(c: &mut Criterion) {
    let x = complex(5, 3, 3, 5, 4);
    let ce = build_ce(&x, 6).expect("valid complex");
    let depth = default_depth(&x);
    c.bench_function("truncation_tower", |b| {
        b.iter(|| truncation_tower(black_box(&ce), depth))
    });
}

criterion_group!(benches, bench_rank, bench_build_ce, bench_cototalize, bench_tower);
criterion_main!(benches);
