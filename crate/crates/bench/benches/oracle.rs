use std::collections::BTreeMap;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use pio_core::pinj::{check_trace_axioms, denote, PartialInjection};
use pio_core::program::{compare_with_oracle, Program};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn denotation(c: &mut Criterion) {
    let (_, fredkin, ty) =
        Program::load(include_str!("../../../corpus/programs/fredkin.pio")).unwrap().entry().unwrap();
    c.bench_function("denote fredkin", |b| b.iter(|| denote(black_box(&fredkin), &ty, &BTreeMap::new()).unwrap()));
    c.bench_function("oracle comparison fredkin", |b| {
        b.iter(|| compare_with_oracle(black_box(&fredkin), &ty).unwrap())
    });
}

fn injections(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = PartialInjection::random(&mut rng, 64, 64, 0.9);
    c.bench_function("trace of a 64-element injection", |b| b.iter(|| black_box(&f).trace(32, 32).unwrap()));
    c.bench_function("trace axioms, 50 trials", |b| {
        b.iter(|| check_trace_axioms(&mut ChaCha8Rng::seed_from_u64(2), 50, 6))
    });
}

criterion_group!(benches, denotation, injections);
criterion_main!(benches);
