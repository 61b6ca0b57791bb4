use pio_core::finrel::{pinned_em_not_fem, FiniteGroupoid, GroupoidAction, RelAlgebra, RelMonoid};
use pio_core::report::Status;

/// S relates (x, b) to (y, c) when some b1 has b ∈ b1·c and y ∈ x·b1.
fn s_holds(alg: &RelAlgebra, (x, b): (usize, usize), (y, c): (usize, usize)) -> bool {
    let n = alg.monoid.size();
    (0..n).any(|b1| alg.monoid.mult.get(b1 * n + c, b) && alg.action.get(x * n + b1, y))
}

/// First (p, q) with S(p, q) != S(q, p).
fn asymmetry(alg: &RelAlgebra) -> Option<((usize, usize), (usize, usize))> {
    let points: Vec<_> = (0..alg.carrier).flat_map(|x| (0..alg.monoid.size()).map(move |b| (x, b))).collect();
    points
        .iter()
        .flat_map(|&p| points.iter().map(move |&q| (p, q)))
        .find(|&(p, q)| s_holds(alg, p, q) != s_holds(alg, q, p))
}

#[test]
fn pinned_algebra_is_em_but_not_fem() {
    let alg = pinned_em_not_fem();
    assert!(alg.is_em());
    let ((x, b), (y, c)) = asymmetry(&alg).expect("an asymmetric pair");
    let name = |i: usize| alg.monoid.elements[i].clone();
    let witness = format!(
        "({x}, {}) -> ({y}, {}): lhs {}, rhs {}",
        name(b),
        name(c),
        s_holds(&alg, (x, b), (y, c)),
        s_holds(&alg, (y, c), (x, b))
    );
    let law = alg.check_fem();
    assert_eq!(law.status, Status::Fail);
    assert_eq!(law.counterexample.as_deref(), Some(witness.as_str()));
}

#[test]
fn groupoid_algebras_are_symmetric() {
    for g in FiniteGroupoid::all_small() {
        let m = RelMonoid::from_groupoid(&g);
        for alg in [
            RelAlgebra::free(&m, 2),
            RelAlgebra::groupoid_action(&g, GroupoidAction::Regular),
            RelAlgebra::groupoid_action(&g, GroupoidAction::Trivial(2)),
        ] {
            assert_eq!(asymmetry(&alg), None, "{}", alg.name);
            assert_eq!(alg.check_fem().status, Status::Pass, "{}", alg.name);
        }
    }
}
