//! Sequential against rayon-parallel execution of the data-parallel kernels.
//! Both modes produce identical results; only wall time differs.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hypertree::asymptotics::{sample_w_batch, select_jmax};
use hypertree::exact::{brute_moments, BruteStatistic};
use hypertree::laplace::search_phi_max;
use hypertree::mc::{run_mc, McOptions};
use hypertree::params::validate_params;
use hypertree::{Execution, DEFAULT_BUDGET};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("mc_3_2_200");
    g.sample_size(10);
    let p = validate_params(3, 2, 200).unwrap();
    let opts = McOptions::new(2000, 1, 4);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_mc(black_box(p), opts, exec).unwrap())
        });
    }
    g.finish();
}

fn w_batch(c: &mut Criterion) {
    let mut g = c.benchmark_group("w_3_2_1e5");
    g.sample_size(10);
    let j_max = select_jmax(3, 2, 1).unwrap().j_max;
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| sample_w_batch(3, 2, 1, j_max, black_box(7), 100_000, exec).unwrap())
        });
    }
    g.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("brute_y_3_3_5");
    g.sample_size(10);
    let p = validate_params(3, 3, 5).unwrap();
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                brute_moments(black_box(p), &[], BruteStatistic::Y, DEFAULT_BUDGET, exec).unwrap()
            })
        });
    }
    g.finish();
}

fn phi_grid(c: &mut Criterion) {
    let mut g = c.benchmark_group("phi_max_4_5_grid400");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| search_phi_max(4, 5, 400, 1e-12, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, monte_carlo, w_batch, enumeration, phi_grid);
criterion_main!(benches);
