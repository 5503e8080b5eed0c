use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mixsub::parallel::default_workers;
use mixsub::verify::{check_all_theorems, enumerate_acyclic_systems, enumerate_subdivisions, ScaleLimits};

fn workers() -> Vec<(&'static str, usize)> {
    vec![("sequential", 1), ("parallel", default_workers())]
}

fn acyclic_systems(c: &mut Criterion) {
    let mut g = c.benchmark_group("acyclic_systems");
    g.sample_size(10);
    for (n, d) in [(4, 3), (3, 4)] {
        for (label, w) in workers() {
            g.bench_with_input(BenchmarkId::new(label, format!("{n}x{d}")), &w, |b, &w| {
                b.iter(|| enumerate_acyclic_systems(n, d, w).len())
            });
        }
    }
    g.finish();
}

fn subdivisions(c: &mut Criterion) {
    let limits = ScaleLimits::default();
    let mut g = c.benchmark_group("subdivisions");
    g.sample_size(10);
    for (n, d) in [(4, 3), (3, 4)] {
        for (label, w) in workers() {
            g.bench_with_input(BenchmarkId::new(label, format!("{n}x{d}")), &w, |b, &w| {
                b.iter(|| enumerate_subdivisions(n, d, &limits, w).unwrap().len())
            });
        }
    }
    g.finish();
}

fn theorem_checks(c: &mut Criterion) {
    let limits = ScaleLimits::default();
    let mut g = c.benchmark_group("check_all_theorems");
    g.sample_size(10);
    for (label, w) in workers() {
        g.bench_with_input(BenchmarkId::new(label, "3x3"), &w, |b, &w| {
            b.iter(|| check_all_theorems(3, 3, &limits, w).unwrap().all_passed())
        });
    }
    g.finish();
}

criterion_group!(benches, acyclic_systems, subdivisions, theorem_checks);
criterion_main!(benches);
