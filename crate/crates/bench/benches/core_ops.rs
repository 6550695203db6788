use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ratreal_core::random::Sampler;
use ratreal_core::{
    build_gpe_canonical, canonical_gpe_certificate, classify_axis, design_pole_moving_gain,
    extract_factor, mcmillan_degree, verify_gpe_certificates, Complex64, GridConfig, Tolerance,
};

const SIZES: [usize; 3] = [2, 8, 24];

fn evaluate(c: &mut Criterion) {
    let mut g = c.benchmark_group("evaluate");
    let s = Complex64::new(0.3, 1.7);
    for n in SIZES {
        let r = Sampler::new(1).system(n, 2, 2);
        g.bench_with_input(BenchmarkId::from_parameter(n), &r, |b, r| {
            b.iter(|| r.evaluate(black_box(s)))
        });
    }
    g.finish();
}

fn canonical_build(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut g = c.benchmark_group("gpe_build_and_certify");
    for n in SIZES {
        let f = Sampler::new(2).factor(n, 2);
        let (h1, h2) = canonical_gpe_certificate(n).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| {
                let r = build_gpe_canonical(black_box(f));
                verify_gpe_certificates(&r.system_matrix(), &h1, &h2, n, 2, &tol)
            })
        });
    }
    g.finish();
}

fn mcmillan(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut g = c.benchmark_group("mcmillan_degree");
    for n in SIZES {
        let r = Sampler::new(3).system(n, 2, 2);
        g.bench_with_input(BenchmarkId::from_parameter(n), &r, |b, r| {
            b.iter(|| mcmillan_degree(black_box(r), &tol))
        });
    }
    g.finish();
}

fn pole_moving(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut g = c.benchmark_group("design_pole_moving_gain");
    for n in SIZES {
        let r = Sampler::new(4).system(n, 2, 2);
        g.bench_with_input(BenchmarkId::from_parameter(n), &r, |b, r| {
            b.iter(|| design_pole_moving_gain(black_box(r), &tol))
        });
    }
    g.finish();
}

fn factor_extraction(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut g = c.benchmark_group("extract_factor");
    for n in SIZES {
        let r = build_gpe_canonical(&Sampler::new(5).factor(n, 2));
        g.bench_with_input(BenchmarkId::from_parameter(n), &r, |b, r| {
            b.iter(|| extract_factor(black_box(r), n, 2, &tol))
        });
    }
    g.finish();
}

fn axis_classification(c: &mut Criterion) {
    let tol = Tolerance::default();
    let cfg = GridConfig::default();
    let mut g = c.benchmark_group("classify_axis");
    g.sample_size(10);
    for n in [1, 4, 8] {
        let r = build_gpe_canonical(&Sampler::new(6).factor(n, 2));
        g.bench_with_input(BenchmarkId::from_parameter(2 * n), &r, |b, r| {
            b.iter(|| classify_axis(black_box(r), &cfg, &tol))
        });
    }
    g.finish();
}

criterion_group!(
    benches,
    evaluate,
    canonical_build,
    mcmillan,
    pole_moving,
    factor_extraction,
    axis_classification
);
criterion_main!(benches);
