use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use fhawkes_core::sim::{cluster_path, replica_rng, ThinningSimulator, DEFAULT_BUDGET};
use fhawkes_core::{Engine, ModelParams};

fn paths(c: &mut Criterion) {
    let p = ModelParams::new(1.0, 0.5, 0.5, 1.0).unwrap();
    let sim = ThinningSimulator::new(p).unwrap();
    let mut g = c.benchmark_group("path to t=10");
    let mut rng = replica_rng(1, Engine::Thinning, 0);
    g.bench_function("thinning", |b| b.iter(|| sim.path(black_box(10.0), &mut rng).unwrap()));
    let mut rng = replica_rng(1, Engine::Cluster, 0);
    g.bench_function("cluster", |b| b.iter(|| cluster_path(p, black_box(10.0), DEFAULT_BUDGET, &mut rng).unwrap()));
    g.finish();
    c.bench_function("thinning simulator setup", |b| b.iter(|| ThinningSimulator::new(black_box(p)).unwrap()));
}

criterion_group!(benches, paths);
criterion_main!(benches);
