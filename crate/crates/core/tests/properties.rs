use std::collections::BTreeMap;

use pio_core::interp::{cardinality, run, run_backward, values_of, EvalResult, Fuel};
use pio_core::parser::{parse_combinator, parse_type, parse_value, print_combinator, print_type, print_value};
use pio_core::program::compare_with_oracle;
use pio_core::syntax::{Combinator as C, Value, ValueType as T};
use pio_core::typecheck::{infer_combinator, principal_type, unify_constraints, CombinatorType};
use proptest::prelude::*;

fn arb_type() -> impl Strategy<Value = T> {
    let leaf = prop_oneof![Just(T::Zero), Just(T::One), Just(T::var("a")), Just(T::var("b"))];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| T::sum(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| T::prod(a, b)),
            inner.prop_map(|body| T::mu("a", body)),
        ]
    })
}

fn arb_mono_type() -> impl Strategy<Value = T> {
    let leaf = prop_oneof![Just(T::Zero), Just(T::One), Just(T::var("a")), Just(T::var("b")), Just(T::var("c"))];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| T::sum(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| T::prod(a, b)),
        ]
    })
}

fn arb_value() -> impl Strategy<Value = Value> {
    Just(Value::Unit).prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Value::inl),
            inner.clone().prop_map(Value::inr),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Value::pair(a, b)),
            inner.prop_map(Value::fold),
        ]
    })
}

fn basics() -> Vec<C> {
    vec![
        C::Id,
        C::AssocLPlus,
        C::AssocRPlus,
        C::UnitLPlus,
        C::UnitRPlus,
        C::SwapPlus,
        C::AssocLTimes,
        C::AssocRTimes,
        C::UnitLTimes,
        C::UnitRTimes,
        C::SwapTimes,
        C::Distrib,
        C::Factor,
        C::Absorb,
        C::Unabsorb,
    ]
}

fn arb_combinator(with_mu: bool) -> impl Strategy<Value = C> {
    let mut leaves = basics();
    if with_mu {
        leaves.push(C::Fold(T::nat()));
        leaves.push(C::Unfold(T::nat()));
    }
    proptest::sample::select(leaves).prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            2 => (inner.clone(), inner.clone()).prop_map(|(f, g)| C::then(f, g)),
            3 => (inner.clone(), inner.clone()).prop_map(|(f, g)| C::sum(f, g)),
            3 => (inner.clone(), inner.clone()).prop_map(|(f, g)| C::prod(f, g)),
            1 => inner.clone().prop_map(C::trace),
            1 => inner.prop_map(C::inv),
        ]
    })
}

fn ground(t: &T) -> T {
    t.free_vars().iter().fold(t.clone(), |t, x| t.substitute(x, &T::bool()))
}

fn apply(s: &BTreeMap<String, T>, t: &T) -> T {
    match t {
        T::Var(x) => s.get(x).cloned().unwrap_or_else(|| t.clone()),
        T::Sum(a, b) => T::sum(apply(s, a), apply(s, b)),
        T::Prod(a, b) => T::prod(apply(s, a), apply(s, b)),
        other => other.clone(),
    }
}

/// Extends `map` to a bijection on variables taking `a` to `b`, if any.
fn rename(a: &T, b: &T, map: &mut BTreeMap<String, String>, back: &mut BTreeMap<String, String>) -> bool {
    match (a, b) {
        (T::Var(x), T::Var(y)) => {
            let fwd = map.entry(x.clone()).or_insert_with(|| y.clone()) == y;
            let bwd = back.entry(y.clone()).or_insert_with(|| x.clone()) == x;
            fwd && bwd
        }
        (T::Sum(a1, a2), T::Sum(b1, b2)) | (T::Prod(a1, a2), T::Prod(b1, b2)) => {
            rename(a1, b1, map, back) && rename(a2, b2, map, back)
        }
        (T::Mu(x, a), T::Mu(y, b)) => x == y && rename(a, b, map, back),
        (T::Zero, T::Zero) | (T::One, T::One) => true,
        _ => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn types_print_and_parse_back(t in arb_type()) {
        prop_assert_eq!(parse_type(&print_type(&t)).unwrap(), t);
    }

    #[test]
    fn values_print_and_parse_back(v in arb_value()) {
        prop_assert_eq!(parse_value(&print_value(&v)).unwrap(), v);
    }

    #[test]
    fn combinators_print_and_parse_back(c in arb_combinator(true)) {
        prop_assert_eq!(parse_combinator(&print_combinator(&c)).unwrap(), c);
    }

    #[test]
    fn dagger_is_an_involution(c in arb_combinator(true)) {
        prop_assert_eq!(c.dagger().dagger(), c.eliminate_inv());
        if !c.contains_inv() {
            prop_assert_eq!(c.dagger().dagger(), c.clone());
        }
        prop_assert_eq!(c.dagger().eliminate_inv(), C::inv(c).eliminate_inv());
    }

    #[test]
    fn dagger_flips_the_type(c in arb_combinator(true)) {
        if let Ok(ty) = principal_type(&c) {
            let flipped = principal_type(&c.dagger()).unwrap();
            let (mut map, mut back) = (BTreeMap::new(), BTreeMap::new());
            prop_assert!(
                rename(&ty.domain, &flipped.codomain, &mut map, &mut back)
                    && rename(&ty.codomain, &flipped.domain, &mut map, &mut back),
                "{}: {} vs {}", print_combinator(&c), ty, flipped
            );
        } else {
            prop_assert!(principal_type(&c.dagger()).is_err());
        }
    }

    #[test]
    fn well_typed_programs_are_reversible_and_match_the_oracle(c in arb_combinator(false)) {
        let Ok(principal) = principal_type(&c) else { return Ok(()) };
        let ty = CombinatorType::new(ground(&principal.domain), ground(&principal.codomain));
        // unknowns internal to c stay ambiguous under any ascription
        if infer_combinator(&c, Some(&ty)).is_err() {
            return Ok(());
        }
        if cardinality(&ty.domain).is_some_and(|n| n <= 64) {
            let fuel = Fuel::default();
            for v in values_of(&ty.domain).unwrap() {
                if let EvalResult::Defined(w) = run(&c, &v, fuel).unwrap() {
                    prop_assert_eq!(run_backward(&c, &w, fuel).unwrap(), EvalResult::Defined(v));
                }
            }
            let cmp = compare_with_oracle(&c, &ty).unwrap();
            prop_assert!(cmp.mismatches.is_empty(), "{}: {:?}", print_combinator(&c), cmp.mismatches);
            prop_assert_eq!(cmp.out_of_fuel, 0);
        }
    }

    #[test]
    fn unification_does_not_depend_on_order(
        cs in proptest::collection::vec((arb_mono_type(), arb_mono_type()), 0..5)
    ) {
        let mut flipped: Vec<(T, T)> = cs.iter().rev().map(|(a, b)| (b.clone(), a.clone())).collect();
        flipped.rotate_left(cs.len() / 2);
        match (unify_constraints(&cs), unify_constraints(&flipped)) {
            (Ok(s1), Ok(s2)) => {
                for (a, b) in &cs {
                    prop_assert_eq!(apply(&s1, a), apply(&s1, b));
                    prop_assert_eq!(apply(&s2, a), apply(&s2, b));
                }
                let (mut map, mut back) = (BTreeMap::new(), BTreeMap::new());
                for x in s1.keys() {
                    prop_assert!(rename(&s1[x], &s2[x], &mut map, &mut back), "{:?} vs {:?}", s1, s2);
                }
            }
            (Err(_), Err(_)) => {}
            (r1, r2) => prop_assert!(false, "{:?} vs {:?}", r1, r2),
        }
    }
}
