use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use finsler_core::analysis::{bh_sigma, sphere_scan, ScanTolerances};
use finsler_core::registry::resolve;
use finsler_core::Execution;

const STRATEGIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn scan(c: &mut Criterion) {
    let space = resolve("so3-randers-b05").unwrap().space().unwrap();
    let mut group = c.benchmark_group("sphere_scan");
    group.sample_size(10);
    for samples in [1_000usize, 10_000] {
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, samples), &samples, |b, &n| {
                b.iter(|| sphere_scan(black_box(&space), n, 0, ScanTolerances::default(), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn sigma(c: &mut Criterion) {
    let (_, norm) = resolve("randers-b05-n3").unwrap().build().unwrap();
    let mut group = c.benchmark_group("bh_sigma");
    group.sample_size(10);
    for samples in [100_000usize, 1_000_000] {
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, samples), &samples, |b, &n| {
                b.iter(|| bh_sigma(black_box(&norm), n, 0, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn pointwise(c: &mut Criterion) {
    let space = resolve("so3-alphabeta-b03").unwrap().space().unwrap();
    let y = [0.3, -0.7, 0.5];
    c.bench_function("curvature_at/so3-alphabeta", |b| b.iter(|| space.curvature_at(black_box(&y)).unwrap()));
}

criterion_group!(benches, scan, sigma, pointwise);
criterion_main!(benches);
