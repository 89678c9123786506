use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lensurf_core::construction::{construct_surface, Construction};
use lensurf_core::fundamental::{minimality_oracle, DEFAULT_BUDGET};
use lensurf_core::normal::{euler_characteristic, matching_equations};
use lensurf_core::quad::reconstruct_tdisks;
use lensurf_core::{LensParams, Triangulation};

fn triangulation(c: &mut Criterion) {
    let mut group = c.benchmark_group("triangulate");
    for (p, q) in [(8, 3), (112, 41), (1560, 571)] {
        let params = LensParams::new(p, q).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(p), &params, |b, &params| {
            b.iter(|| Triangulation::build(black_box(params)).unwrap())
        });
    }
    group.finish();

    let tri = Triangulation::build(LensParams::new(1560, 571).unwrap()).unwrap();
    c.bench_function("matching equations L(1560,571)", |b| {
        b.iter(|| matching_equations(black_box(&tri)))
    });
}

fn construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("construct");
    group.sample_size(10);
    for n in [3, 5, 6] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| construct_surface(black_box(n)).unwrap())
        });
    }
    group.finish();

    let con = Construction::new(6).unwrap();
    let h = con.run().unwrap().pop().unwrap();
    c.bench_function("reconstruct + euler, n = 6", |b| {
        b.iter(|| {
            let haken = reconstruct_tdisks(con.triangulation(), black_box(&h)).unwrap();
            euler_characteristic(con.triangulation(), &haken).unwrap()
        })
    });
}

fn oracle(c: &mut Criterion) {
    let con = Construction::new(2).unwrap();
    let tri = con.triangulation();
    let h1 = reconstruct_tdisks(tri, &con.run().unwrap()[1]).unwrap();
    c.bench_function("minimality oracle h_1 L(8,3)", |b| {
        b.iter(|| minimality_oracle(tri, black_box(&h1), DEFAULT_BUDGET).unwrap())
    });
}

criterion_group!(benches, triangulation, construction, oracle);
criterion_main!(benches);
