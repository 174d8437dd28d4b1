//! Parallel-versus-sequential benchmarks for batch inequality checks.
//!
//! The data-parallel core distributes independent (spec, function)
//! quadrature jobs; these benchmarks compare it against the forced
//! single-threaded path on the same workload. Built with
//! `--no-default-features` both modes are sequential and should coincide.

use criterion::{criterion_group, criterion_main, Criterion};
use hypradial::harness::{run_specs_with, InequalityId, InequalitySpec, Parallelism, RunConfig};
use hypradial::radial_calculus::library::default_library;
use std::hint::black_box;

fn hardy_specs(n: u32) -> Vec<InequalitySpec> {
    let mut specs = Vec::new();
    for alpha in 0..4 {
        specs.push(InequalitySpec::new(InequalityId::th1, n).with_alpha(alpha));
        specs.push(InequalitySpec::new(InequalityId::th3, n).with_alpha(alpha));
    }
    for alpha in 0..3 {
        specs.push(InequalitySpec::new(InequalityId::cor1, n).with_alpha(alpha));
    }
    specs.push(InequalitySpec::new(InequalityId::lemma3, n));
    specs.push(InequalitySpec::new(InequalityId::mu_bound, n));
    specs
}

fn bench_suite_eval(c: &mut Criterion) {
    let cfg = RunConfig::default();
    let funcs = default_library(cfg.library_seed);
    let specs = hardy_specs(9);
    let mut group = c.benchmark_group("suite_eval");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| run_specs_with(black_box(&specs), &funcs, &cfg, Parallelism::Auto).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| run_specs_with(black_box(&specs), &funcs, &cfg, Parallelism::Sequential).unwrap())
    });
    group.finish();
}

fn bench_single_check(c: &mut Criterion) {
    let cfg = RunConfig::default();
    let funcs = default_library(cfg.library_seed);
    let specs = vec![InequalitySpec::new(InequalityId::th4, 9).with_alpha(2)];
    let mut group = c.benchmark_group("single_check");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| run_specs_with(black_box(&specs), &funcs, &cfg, Parallelism::Auto).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| run_specs_with(black_box(&specs), &funcs, &cfg, Parallelism::Sequential).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_suite_eval, bench_single_check);
criterion_main!(benches);
