// Copyright 2026 The tickq Developers
// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tickq_bench::{generator, pure_state};
use tickq_core::channels::monte_carlo_average_sharded;
use tickq_core::qcore::hermitian_eigendecomposition;
use tickq_core::{build_channel, TickDistribution};

fn eigendecomposition(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigendecomposition");
    for dim in [2, 4, 8, 16] {
        let h = generator(dim, 1).matrix();
        group.bench_with_input(BenchmarkId::from_parameter(dim), &h, |b, h| {
            b.iter(|| hermitian_eigendecomposition(black_box(h)).unwrap())
        });
    }
    group.finish();
}

fn build_and_apply(c: &mut Criterion) {
    let dist = TickDistribution::gaussian(std::f64::consts::PI, 0.3).unwrap();
    let mut group = c.benchmark_group("channel");
    for dim in [2, 4, 8, 16] {
        let h = generator(dim, 2);
        let rho = pure_state(dim, 3);
        group.bench_with_input(BenchmarkId::new("build", dim), &h, |b, h| {
            b.iter(|| build_channel(black_box(h), &dist))
        });
        let ch = build_channel(&h, &dist);
        group.bench_with_input(BenchmarkId::new("apply", dim), &rho, |b, rho| {
            b.iter(|| ch.apply(black_box(rho)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("cptp", dim), &ch, |b, ch| {
            b.iter(|| ch.is_cptp().unwrap())
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let dist = TickDistribution::gaussian(std::f64::consts::PI, 0.3).unwrap();
    let mut group = c.benchmark_group("monte_carlo_10k");
    group.sample_size(20);
    for dim in [2, 4] {
        let h = generator(dim, 4);
        let rho = pure_state(dim, 5);
        group.bench_function(BenchmarkId::from_parameter(dim), |b| {
            b.iter(|| monte_carlo_average_sharded(&h, &dist, &rho, 10_000, 7, 8).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, eigendecomposition, build_and_apply, monte_carlo);
criterion_main!(benches);
