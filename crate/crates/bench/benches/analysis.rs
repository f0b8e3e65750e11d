use std::hint::black_box;
use std::path::PathBuf;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mpreprog::dynamics::{fixed_points, minimal_trap_spaces, smallest_trap_space};
use mpreprog::generate::random_unate_network;
use mpreprog::{
    parse_booleannet, solve, BooleanNetwork, Configuration, Limits, MonotoneNetwork, ReprogramQuery,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn yeast() -> (BooleanNetwork, MonotoneNetwork) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models/irons_yeast.bnet");
    let net = parse_booleannet(&std::fs::read_to_string(path).unwrap()).unwrap();
    let f = MonotoneNetwork::new(&net).unwrap();
    (net, f)
}

fn bench_dynamics(c: &mut Criterion) {
    let limits = Limits::default();
    let mut group = c.benchmark_group("dynamics");
    for n in [8, 12, 16] {
        let net = random_unate_network(&mut ChaCha8Rng::seed_from_u64(n as u64), n, 3);
        let f = MonotoneNetwork::new(&net).unwrap();
        let x = Configuration::zeros(n);
        group.bench_with_input(BenchmarkId::new("smallest_trap_space", n), &f, |b, f| {
            b.iter(|| smallest_trap_space(f, black_box(&x)))
        });
        group.bench_with_input(BenchmarkId::new("fixed_points", n), &f, |b, f| {
            b.iter(|| fixed_points(black_box(f)))
        });
        group.bench_with_input(BenchmarkId::new("minimal_trap_spaces", n), &f, |b, f| {
            b.iter(|| minimal_trap_spaces(black_box(f), &limits).unwrap())
        });
    }
    group.finish();
}

fn bench_reprogramming(c: &mut Criterion) {
    let limits = Limits::default();
    let (net, f) = yeast();
    let marker = net.assignment([("Cdh1", true), ("CKI", true)]).unwrap();
    let mut group = c.benchmark_group("reprogramming");
    group.sample_size(10);
    for k in [1, 2, 3] {
        let q = ReprogramQuery::fixpoints(marker.clone(), k);
        group.bench_with_input(BenchmarkId::new("yeast_fixpoints", k), &q, |b, q| {
            b.iter(|| solve(&f, black_box(q), &limits).unwrap())
        });
    }
    let q = ReprogramQuery::attractors(marker, 1);
    group.bench_function("yeast_attractors/1", |b| {
        b.iter(|| solve(&f, black_box(&q), &limits).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_dynamics, bench_reprogramming);
criterion_main!(benches);
