use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use saddlespec_bench::{probe, stokes};
use saddlespec_core::linalg::{extremal_eig, jacobi_eigen, singular_values, Which};
use saddlespec_core::stokes::{assemble, Method, StokesGridSpec};

fn matvec(c: &mut Criterion) {
    let mut g = c.benchmark_group("matvec");
    for ne in [8, 16, 32] {
        let w = stokes(Method::P1P0, ne, 1.0).assemble_w();
        let x = probe(w.order());
        g.bench_with_input(BenchmarkId::new("p1p0_w", w.order()), &w, |b, w| {
            b.iter(|| w.matvec(black_box(&x)).unwrap())
        });
    }
    g.finish();
}

fn lanczos(c: &mut Criterion) {
    let mut g = c.benchmark_group("lanczos");
    g.sample_size(10);
    for ne in [8, 16] {
        let w = stokes(Method::Q1P0Stab, ne, 1.0).assemble_w();
        g.bench_with_input(BenchmarkId::new("q1_largest", w.order()), &w, |b, w| {
            b.iter(|| extremal_eig(black_box(w), Which::Largest, 1e-10, 5000).unwrap().value)
        });
    }
    g.finish();
}

fn dense(c: &mut Criterion) {
    let mut g = c.benchmark_group("dense");
    g.sample_size(10);
    let sys = stokes(Method::P1P0, 6, 1.0);
    let d = sys.assemble_w().to_dense();
    g.bench_function("jacobi_eigenvalues", |b| b.iter(|| jacobi_eigen(black_box(&d), false)));
    g.bench_function("singular_values_b", |b| b.iter(|| singular_values(black_box(sys.b())).unwrap()));
    g.finish();
}

fn assembly(c: &mut Criterion) {
    let mut g = c.benchmark_group("assembly");
    for (method, ne) in [(Method::P1P0, 32), (Method::Q1P0Stab, 64)] {
        let spec = StokesGridSpec::new(method, ne, 1.0);
        g.bench_function(format!("{method}_ne{ne}"), |b| b.iter(|| assemble(black_box(&spec)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, matvec, lanczos, dense, assembly);
criterion_main!(benches);
