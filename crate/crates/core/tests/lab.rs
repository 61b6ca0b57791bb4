use std::path::PathBuf;

use pio_core::finrel::{parse_chain, print_chain, print_groupoid, FiniteGroupoid};
use pio_core::lab::{load_groupoids, run_suite, LabConfig, Suite};
use pio_core::report::Status;

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

#[test]
fn every_suite_is_as_expected() {
    for suite in Suite::ALL {
        let report = run_suite(suite, &corpus(), LabConfig::default()).unwrap();
        assert!(report.ok, "{report}");
        assert!(!report.subjects.is_empty());
    }
}

#[test]
fn corpus_groupoids_print_back_to_their_files() {
    for (file, g) in load_groupoids(&corpus()).unwrap() {
        let text = std::fs::read_to_string(corpus().join("groupoids").join(&file)).unwrap();
        assert_eq!(print_groupoid(&g), text, "{file}");
    }
    assert_eq!(load_groupoids(&corpus()).unwrap().len(), FiniteGroupoid::all_small().len());
}

#[test]
fn expected_failures_are_real_failures() {
    let frob = run_suite(Suite::Frobenius, &corpus(), LabConfig::default()).unwrap();
    let absorbing = frob.subjects.iter().find(|s| s.subject.contains("absorbing")).unwrap();
    let law = absorbing.results.iter().find(|r| r.law == "frobenius").unwrap();
    assert_eq!(law.status, Status::Fail);
    assert!(law.counterexample.is_some());

    let fem = run_suite(Suite::Fem, &corpus(), LabConfig::default()).unwrap();
    let pinned = fem.subjects.iter().find(|s| s.subject.contains("pinned")).unwrap();
    let law = pinned.results.iter().find(|r| r.law == "femlaw").unwrap();
    assert_eq!(law.counterexample.as_deref(), Some("(0, a) -> (1, b): lhs false, rhs true"));
    assert!(pinned.results.iter().filter(|r| r.law != "femlaw").all(|r| r.status == Status::Pass));
}

#[test]
fn fixedpoint_sizes_for_nat() {
    let report = run_suite(Suite::Fixedpoint, &corpus(), LabConfig::default()).unwrap();
    assert!(report.subjects[0].subject.ends_with("(sizes [0, 1, 2, 3, 4])"), "{}", report.subjects[0].subject);
    assert!(report.subjects.iter().any(|s| s.subject.contains("pfn-restriction")));
}

#[test]
fn chain_files_round_trip() {
    for name in ["pfn-restriction-6", "pfn-min-6", "constant-3"] {
        let text = std::fs::read_to_string(corpus().join("chains").join(format!("{name}.chain"))).unwrap();
        let c = parse_chain(&text).unwrap();
        assert_eq!(parse_chain(&print_chain(&c)).unwrap(), c);
    }
}

#[test]
fn lab_reports_are_deterministic() {
    let a = run_suite(Suite::Kleisli, &corpus(), LabConfig::default()).unwrap();
    let b = run_suite(Suite::Kleisli, &corpus(), LabConfig::default()).unwrap();
    assert_eq!(a, b);
    assert!(a.subjects.iter().all(|s| s.results.iter().any(|r| r.law == "involution" && r.checked == 200)));
}
