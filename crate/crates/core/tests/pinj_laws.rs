use pio_core::finrel::Relation;
use pio_core::pinj::{check_inverse_laws, check_trace_axioms, PartialInjection};
use pio_core::report::Status;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(f: &PartialInjection) -> Relation {
    Relation::from_function(f.as_function())
}

fn block(r: &Relation, xs: std::ops::Range<usize>, ys: std::ops::Range<usize>) -> Relation {
    Relation::from_fn(xs.len(), ys.len(), |x, y| r.get(xs.start + x, ys.start + y))
}

/// Trace by the execution formula: AB ∪ AU;(UU)*;UB.
fn trace_oracle(f: &PartialInjection, a: usize, b: usize) -> Relation {
    let r = rel(f);
    let u = f.dom_size() - a;
    let ab = block(&r, 0..a, 0..b);
    let au = block(&r, 0..a, b..b + u);
    let ua = block(&r, a..a + u, 0..b);
    let uu = block(&r, a..a + u, b..b + u);
    let mut star = Relation::identity(u);
    let mut power = Relation::identity(u);
    for _ in 0..u {
        power = power.then(&uu).unwrap();
        star = star.union(&power).unwrap();
    }
    ab.union(&au.then(&star).unwrap().then(&ua).unwrap()).unwrap()
}

#[test]
fn trace_axioms_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let report = check_trace_axioms(&mut rng, 500, 6);
    assert!(report.passed(), "{report}");
    assert_eq!(report.results.len(), 6);
    for r in &report.results {
        assert_eq!(r.status, Status::Pass);
        assert!(r.checked >= 500, "{}: {}", r.law, r.checked);
    }
}

#[test]
fn trace_matches_execution_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..500 {
        let total = rng.gen_range(0..=6);
        let a = rng.gen_range(0..=total);
        let u = total - a;
        let b = rng.gen_range(0..=6 - u);
        let density = rng.gen_range(0.4..=1.0);
        let f = PartialInjection::random(&mut rng, a + u, b + u, density);
        let t = f.trace(a, b).unwrap();
        assert_eq!(rel(&t), trace_oracle(&f, a, b), "f = {f}, |A| = {a}, |B| = {b}");
    }
}

#[test]
fn inverse_laws_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let report = check_inverse_laws(&mut rng, 1000, 8);
    assert!(report.passed(), "{report}");
    assert!(report.results.iter().all(|r| r.checked == 1000));
}

#[test]
fn inverse_laws_match_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..1000 {
        let (n, m, k) = (rng.gen_range(0..=8), rng.gen_range(0..=8), rng.gen_range(0..=8));
        let density = rng.gen_range(0.3..=1.0);
        let f = PartialInjection::random(&mut rng, n, m, density);
        let g = PartialInjection::random(&mut rng, n, k, density);
        let (rf, rg) = (rel(&f), rel(&g));
        assert_eq!(rel(&f.dagger()), rf.dagger());
        let fff = rf.then(&rf.dagger()).unwrap().then(&rf).unwrap();
        assert_eq!(fff, rf, "f = {f}");
        let pf = rf.then(&rf.dagger()).unwrap();
        let pg = rg.then(&rg.dagger()).unwrap();
        assert_eq!(pf.then(&pg).unwrap(), pg.then(&pf).unwrap(), "f = {f}, g = {g}");
    }
}

#[test]
fn a_non_injection_breaks_the_isometry_law() {
    let s = Relation::from_pairs(2, 2, &[(0, 0), (0, 1), (1, 1)]).unwrap();
    let sss = s.then(&s.dagger()).unwrap().then(&s).unwrap();
    assert_ne!(sss, s);
}
