use pio_core::arrows::{check_laws, instance_by_name, LawConfig, INSTANCE_NAMES, LAW_NAMES};
use pio_core::report::Status;

fn config(name: &str) -> LawConfig {
    // list carriers grow as |X|^3, so vectors use smaller element types
    if name == "vector" {
        LawConfig::uniform(2)
    } else {
        LawConfig::uniform(4)
    }
}

#[test]
fn sound_instances_pass_every_applicable_law() {
    for name in INSTANCE_NAMES.iter().filter(|n| **n != "broken") {
        let inst = instance_by_name(name).unwrap();
        let report = check_laws(inst.as_ref(), &config(name));
        assert!(report.passed(), "{report}");
        for law in LAW_NAMES {
            let r = report.get(law).unwrap();
            let expect_na = *name == "error"
                && matches!(law, "arrow4" | "arrow5" | "arrow6" | "arrow7" | "arrow8" | "daggerarrow4");
            let want = if expect_na { Status::NotApplicable } else { Status::Pass };
            assert_eq!(r.status, want, "{name} {law}\n{report}");
            if want == Status::Pass {
                assert!(r.checked > 0, "{name} {law} checked nothing");
            }
        }
    }
}

#[test]
fn only_dagger_laws_catch_the_broken_instance() {
    let inst = instance_by_name("broken").unwrap();
    let report = check_laws(inst.as_ref(), &LawConfig::uniform(3));
    assert_eq!(report.get("daggerarrow3").unwrap().status, Status::Fail);
    for law in ["arrow1", "arrow2", "arrow3", "arrow7", "arrow8", "daggerarrow1"] {
        assert_eq!(report.get(law).unwrap().status, Status::Pass, "{law}");
    }
}

#[test]
fn reports_are_deterministic_per_seed() {
    let inst = instance_by_name("rstate").unwrap();
    let a = check_laws(inst.as_ref(), &LawConfig::uniform(3)).to_string();
    let b = check_laws(inst.as_ref(), &LawConfig::uniform(3)).to_string();
    assert_eq!(a, b);
}
