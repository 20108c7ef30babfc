use std::hint::black_box;

use causalog::checker::eval;
use causalog::fixtures::{binary_signature, mod3, push_pull};
use causalog::lang::parse;
use causalog::model::nth_model;
use causalog::{is_unique_solutions, CausalModel, Context, Intervention, DEFAULT_BUDGET};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

/// A model in which every variable reads every other one.
fn dense(n: usize) -> CausalModel {
    let sig = std::sync::Arc::new(binary_signature(n));
    let total = causalog::model::count_models(&sig);
    nth_model(&sig, total / 3)
}

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    for (name, m) in [("push_pull", push_pull()), ("mod3", mod3())] {
        group.bench_function(name, |b| {
            b.iter(|| {
                black_box(&m)
                    .solve(&Intervention::empty(), &Context::empty())
                    .unwrap()
            })
        });
    }
    for n in [4, 6, 8] {
        let m = dense(n);
        group.bench_with_input(BenchmarkId::new("dense", n), &m, |b, m| {
            b.iter(|| m.solve(&Intervention::empty(), &Context::empty()).unwrap())
        });
    }
    group.finish();
}

fn classify(c: &mut Criterion) {
    let mut group = c.benchmark_group("unique_solutions");
    for n in [3, 5, 7] {
        let m = dense(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| is_unique_solutions(m, DEFAULT_BUDGET).unwrap())
        });
    }
    group.finish();
}

fn evaluate(c: &mut Criterion) {
    let m = mod3();
    let f = parse(
        "[X0<-1](X1()=2) & ([X1<-1](X2()=2) -> <X2<-0;X0<-1>(X1()=2 & X2()=0))",
        m.signature(),
    )
    .unwrap();
    c.bench_function("eval/mod3", |b| b.iter(|| eval(black_box(&m), &f).unwrap()));
}

criterion_group!(benches, solve, classify, evaluate);
criterion_main!(benches);
