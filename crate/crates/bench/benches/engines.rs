use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mempart_core::engine::{compute_trace, EngineMode, EngineSettings};
use mempart_core::linalg::hermitian_eigenvalues;
use mempart_core::observables::density_matrix;
use mempart_core::partition::run_table1;
use mempart_core::{table1_scenarios, ClassifierControl, OracleEvaluator, QuadratureControl};

fn row(id: char) -> mempart_core::ScenarioConfig {
    table1_scenarios()
        .into_iter()
        .find(|r| r.id == id)
        .unwrap()
        .scenario
}

fn analytic_traces(c: &mut Criterion) {
    let settings = EngineSettings::default();
    let mut group = c.benchmark_group("analytic_trace");
    // Gaussian, zigzag series, ridge pair, parabola mixture.
    for id in ['a', 'b', 'l', 'k'] {
        let cfg = row(id);
        group.bench_with_input(BenchmarkId::from_parameter(id), &cfg, |b, cfg| {
            b.iter(|| compute_trace(black_box(cfg), &settings).unwrap())
        });
    }
    group.finish();
}

fn oracle_points(c: &mut Criterion) {
    let q = QuadratureControl::default();
    let mut group = c.benchmark_group("oracle_point");
    for id in ['b', 'l', 'n'] {
        let oracle = OracleEvaluator::for_scenario(&row(id), &q).unwrap();
        group.bench_function(BenchmarkId::from_parameter(id), |b| {
            b.iter(|| oracle.decoherence_set(black_box(3.7)).unwrap())
        });
    }
    group.finish();
}

fn table(c: &mut Criterion) {
    let ctl = ClassifierControl::default();
    let settings = EngineSettings::with_mode(EngineMode::Analytic);
    let mut group = c.benchmark_group("table1");
    group.sample_size(10);
    group.bench_function("analytic", |b| b.iter(|| run_table1(&ctl, &settings)));
    group.finish();
}

fn eigen(c: &mut Criterion) {
    let cfg = row('k');
    let trace = compute_trace(&cfg, &EngineSettings::default()).unwrap();
    let rho = density_matrix(&cfg.amplitudes, &trace.sets[137]).unwrap();
    c.bench_function("eigenvalues_4x4", |b| {
        b.iter(|| hermitian_eigenvalues(black_box(rho.entries())))
    });
}

criterion_group!(benches, analytic_traces, oracle_points, table, eigen);
criterion_main!(benches);
