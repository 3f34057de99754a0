//! Benchmarks for the exact curvature pipeline, Jordan data, Osserman scans
//! and geodesic integration.

use std::hint::black_box;

use criterion::Criterion;
use walker_core::catalog::find_entry;
use walker_core::dynamics::{integrate_geodesic, GeodesicState, IntegrationOptions};
use walker_core::expression::rat;
use walker_core::geometry::curvature_report;
use walker_core::random::{random_walker_metric, rng};
use walker_core::spectral::{min_poly, osserman_scan, OperatorKind, SpectralReport};
use walker_core::Point4;

pub fn benchmarks(c: &mut Criterion) {
    let point = Point4([rat(1, 2), rat(-1, 3), rat(2, 1), rat(3, 4)]);
    let metric = random_walker_metric(&mut rng(1, 0), "bench");
    metric.curvature();

    c.bench_function("symbolic curvature of a random metric", |b| {
        b.iter(|| {
            walker_core::WalkerMetric::new(
                "b",
                metric.psi33.clone(),
                metric.psi34.clone(),
                metric.psi44.clone(),
            )
            .curvature()
            .ricci
            .len()
        })
    });
    c.bench_function("curvature report at a rational point", |b| {
        b.iter(|| curvature_report(black_box(&metric), black_box(&point)))
    });

    let thm51 = find_entry("thm51-k1").expect("catalog entry");
    let jacobi =
        thm51
            .metric
            .curvature()
            .at(&point)
            .jacobi(&[rat(1, 1), rat(0, 1), rat(1, 2), rat(-1, 4)]);
    c.bench_function("min_poly of a Jacobi operator", |b| {
        b.iter(|| min_poly(black_box(&jacobi)))
    });
    c.bench_function("spectral report of a Jacobi operator", |b| {
        b.iter(|| SpectralReport::analyze(black_box(&jacobi)))
    });
    c.bench_function("Osserman scan, 16 vectors per class", |b| {
        b.iter(|| osserman_scan(&thm51.metric, &point, OperatorKind::Jacobi, 16, 1e-8, 7))
    });

    let s0 = GeodesicState::new([0.25, 0.0, 0.0, 1.0], [0.0, 0.0, 1.0, 0.0]);
    let opts = IntegrationOptions::with_horizon(2.0);
    c.bench_function("log geodesic to blowup", |b| {
        b.iter(|| integrate_geodesic(&thm51.metric, black_box(&s0), &opts))
    });
    let strict = find_entry("thm31-strict").expect("catalog entry");
    let s1 = GeodesicState::new([0.1, -0.2, 0.3, 0.4], [0.5, -0.5, 0.25, 0.75]);
    let long = IntegrationOptions::with_horizon(1e4);
    c.bench_function("strict geodesic to horizon 1e4", |b| {
        b.iter(|| integrate_geodesic(&strict.metric, black_box(&s1), &long))
    });
}
