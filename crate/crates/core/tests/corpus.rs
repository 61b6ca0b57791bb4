use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use pio_core::program::{compare_with_oracle, round_trip, sweep_inputs, Program, MAX_SWEEP_INPUTS};
use pio_core::{Combinator, Fuel};

fn corpus() -> Vec<(String, Program)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus/programs");
    let mut paths: Vec<PathBuf> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "pio"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let prog = Program::load(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, prog)
        })
        .collect()
}

fn basics(c: &Combinator, out: &mut BTreeSet<&'static str>) {
    match c {
        Combinator::Comp(f, g) | Combinator::SumC(f, g) | Combinator::ProdC(f, g) => {
            basics(f, out);
            basics(g, out);
        }
        Combinator::Trace(f) | Combinator::Inv(f) => basics(f, out),
        c => {
            out.insert(c.keyword().unwrap());
        }
    }
}

#[test]
fn corpus_covers_the_language() {
    let progs = corpus();
    assert!(progs.len() >= 25, "{} programs", progs.len());
    let mut seen = BTreeSet::new();
    let (mut traces, mut recursive) = (0, 0);
    for (_, p) in &progs {
        let (_, c, ty) = p.entry().unwrap();
        basics(&c, &mut seen);
        traces += usize::from(c.trace_count() > 0);
        recursive += usize::from(ty.domain.contains_mu() || ty.codomain.contains_mu());
    }
    let all: BTreeSet<&str> = [
        "id", "assocl+", "assocr+", "unitl+", "unitr+", "swap+", "assocl*", "assocr*", "unitl*", "unitr*", "swap*",
        "distrib", "factor", "absorb", "unabsorb", "fold", "unfold",
    ]
    .into();
    assert_eq!(seen, all);
    assert!(traces >= 5, "{traces} traced programs");
    assert!(recursive >= 3, "{recursive} recursive programs");
}

#[test]
fn every_corpus_program_round_trips() {
    for (name, p) in corpus() {
        let (_, c, ty) = p.entry().unwrap();
        let inputs = sweep_inputs(&ty.domain);
        if !ty.domain.contains_mu() {
            assert!(inputs.len() <= MAX_SWEEP_INPUTS, "{name}");
        }
        let r = round_trip(&c, &inputs, Fuel::default()).unwrap();
        assert!(r.failures.is_empty(), "{name}: {:?}", r.failures);
        assert_eq!(r.out_of_fuel, 0, "{name}");
    }
}

#[test]
fn interpreter_agrees_with_denotation() {
    let mut checked = 0;
    for (name, p) in corpus() {
        let (_, c, ty) = p.entry().unwrap();
        if ty.domain.contains_mu() || ty.codomain.contains_mu() {
            continue;
        }
        let r = compare_with_oracle(&c, &ty).unwrap();
        assert!(r.mismatches.is_empty(), "{name}: {:?}", r.mismatches);
        assert_eq!(r.out_of_fuel, 0, "{name}");
        checked += 1;
    }
    assert!(checked >= 20);
}
