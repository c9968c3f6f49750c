use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nsp_core::bounds::{BoundEvaluator, Params};
use nsp_core::montecarlo::{estimate_nsp_failure, estimate_psi_failure};
use nsp_core::par::Exec;
use nsp_core::phase::{borne_r_curve, default_delta_grid, pi_curve, uniform_grid};
use std::hint::black_box;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn mc_trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("mc_trials");
    group.sample_size(10);
    let params = Params::new(1.0, 1, 8, 10).unwrap();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("psi_l12_20k", name), &exec, |b, &exec| {
            b.iter(|| estimate_psi_failure(12, 1, 1.0, black_box(20_000), 7, exec).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("nsp_p10_200", name), &exec, |b, &exec| {
            b.iter(|| estimate_nsp_failure(&params, black_box(200), 1, exec).unwrap())
        });
    }
    group.finish();
}

fn delta_grids(c: &mut Criterion) {
    let mut group = c.benchmark_group("delta_grids");
    group.sample_size(10);
    let grid = default_delta_grid();
    let coarse = uniform_grid(0.39, 0.99, 8).unwrap();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("borner_60", name), &exec, |b, &exec| {
            b.iter(|| borne_r_curve(1.0, black_box(&grid), 1e-12, exec).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("pi_n20000_8", name), &exec, |b, &exec| {
            b.iter(|| pi_curve(1.0, 20_000, 0.0, black_box(&coarse), exec).unwrap())
        });
    }
    group.finish();
}

fn bound_terms(c: &mut Criterion) {
    let mut group = c.benchmark_group("bound_terms");
    let ev = BoundEvaluator::new(200_000, 512_820, 1.0).unwrap();
    for (name, exec) in MODES {
        group.bench_with_input(
            BenchmarkId::new("log_pi_n200000", name),
            &exec,
            |b, &exec| b.iter(|| ev.log_pi(black_box(8_500), exec).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(benches, mc_trials, delta_grids, bound_terms);
criterion_main!(benches);
