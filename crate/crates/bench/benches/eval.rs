use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use pio_core::interp::{run, run_backward, values_up_to_depth, Fuel};
use pio_core::program::{sweep_inputs, Program};
use pio_core::syntax::Value;

fn entry(src: &str) -> (pio_core::syntax::Combinator, pio_core::typecheck::CombinatorType) {
    let (_, c, ty) = Program::load(src).unwrap().entry().unwrap();
    (c, ty)
}

fn gates(c: &mut Criterion) {
    let (toffoli, ty) = entry(include_str!("../../../corpus/programs/toffoli.pio"));
    let inputs = sweep_inputs(&ty.domain);
    c.bench_function("toffoli forward, all inputs", |b| {
        b.iter(|| {
            for v in &inputs {
                black_box(run(&toffoli, v, Fuel::default()).unwrap());
            }
        })
    });
    c.bench_function("toffoli backward, all inputs", |b| {
        b.iter(|| {
            for v in &inputs {
                black_box(run_backward(&toffoli, v, Fuel::default()).unwrap());
            }
        })
    });
}

fn traces(c: &mut Criterion) {
    let (spin, _) = entry(include_str!("../../../corpus/programs/trace_loop.pio"));
    c.bench_function("trace loop on unit", |b| b.iter(|| run(&spin, black_box(&Value::Unit), Fuel::default())));
    let (shift, ty) = entry(include_str!("../../../corpus/programs/nat_shift.pio"));
    let nats = values_up_to_depth(&ty.domain, 12);
    c.bench_function("nat shift up to 12", |b| {
        b.iter(|| {
            for v in &nats {
                black_box(run(&shift, v, Fuel::default()).unwrap());
            }
        })
    });
}

criterion_group!(benches, gates, traces);
criterion_main!(benches);
