use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use duffing_bench::{primary_problem, subharmonic_problem};
use duffing_core::harmonic_balance::{hb_solve, linear_seed, trace_family};
use duffing_core::time_oracle::integrate;
use duffing_core::{Forcing, OscillatorConfig, StepControl};

fn hb(c: &mut Criterion) {
    let p = primary_problem(0.01);
    let guess = linear_seed(&p, 1.0);
    c.bench_function("hb_solve primary", |b| b.iter(|| hb_solve(&p, black_box(1.0), &guess).unwrap()));
}

fn continuation(c: &mut Criterion) {
    let mut g = c.benchmark_group("continuation");
    g.sample_size(10);
    let p = primary_problem(0.01);
    g.bench_function("primary branch", |b| {
        b.iter(|| trace_family(&p, black_box((0.8, 1.6)), &StepControl::default()).unwrap())
    });
    let p = subharmonic_problem(0.6);
    g.bench_function("1:3 isola", |b| {
        b.iter(|| trace_family(&p, black_box((2.5, 8.0)), &StepControl::default()).unwrap())
    });
    g.finish();
}

fn time_integration(c: &mut Criterion) {
    let cfg = OscillatorConfig::default();
    let forcing = Forcing::new(0.01, 1.2).unwrap();
    c.bench_function("rk4 100 periods", |b| {
        b.iter(|| integrate(&cfg, &forcing, black_box(0.1), 0.0, 100, 200).unwrap())
    });
}

criterion_group!(benches, hb, continuation, time_integration);
criterion_main!(benches);
