use std::hint::black_box;

use clarklab::clark::{essential_norm_estimate, ClarkConfig};
use clarklab::geometry::poisson_kernel;
use clarklab::hardy::{singular_values, truncate};
use clarklab::maccluer::{kernel_integral_i, KernelParams};
use clarklab::path::PathConfig;
use clarklab::symbol::TaylorConfig;
use clarklab::{BoundaryMeasure, CantorMeasure, CirclePoint, DiscPoint, PathFamily, Symbol};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

fn geometry(c: &mut Criterion) {
    let z = DiscPoint::new(Complex64::new(0.3, 0.9)).unwrap();
    let alpha = CirclePoint::from_turns(0.1);
    c.bench_function("poisson_kernel", |b| b.iter(|| poisson_kernel(black_box(z), black_box(alpha))));
}

fn cantor(c: &mut Criterion) {
    let mu = BoundaryMeasure::cantor(CantorMeasure::default());
    let z = DiscPoint::new(Complex64::from_polar(0.999, 1.0)).unwrap();
    c.bench_function("cantor_herglotz_near_boundary", |b| b.iter(|| mu.herglotz_integral(black_box(z)).unwrap()));
    let phi = PathFamily::default().path_symbol(0.5).unwrap();
    c.bench_function("path_symbol_eval", |b| b.iter(|| phi.eval(black_box(z)).unwrap()));
}

fn compression(c: &mut Criterion) {
    let phi = PathFamily::default().path_symbol(1.0).unwrap();
    let mut group = c.benchmark_group("truncate_and_svd");
    group.sample_size(10);
    for n in [32, 64, 128] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| singular_values(&truncate(&phi, n, &TaylorConfig::default()).unwrap()).unwrap())
        });
    }
    group.finish();
}

fn clark(c: &mut Criterion) {
    let phi = Symbol::identity();
    let p = KernelParams { delta: 1.0, kappa: 3.0, lambda_width: 2.0, r: 1e-4, a: 1.0 };
    c.bench_function("kernel_integral", |b| b.iter(|| kernel_integral_i(&phi, black_box(&p)).unwrap()));

    let cfg = PathConfig { alpha_grid: 32, ..PathConfig::default() };
    let phi = cfg.family().unwrap().path_symbol(0.5).unwrap();
    let mut group = c.benchmark_group("essential_norm");
    group.sample_size(10);
    group.bench_function("path_t_half_32_alphas", |b| {
        b.iter(|| essential_norm_estimate(&phi, &cfg.alphas(), &ClarkConfig::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, geometry, cantor, compression, clark);
criterion_main!(benches);
