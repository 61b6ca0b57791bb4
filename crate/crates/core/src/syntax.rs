//! Abstract syntax for value types, values and combinators.
//!
//! Types are compared up to renaming of `mu` binders: the `PartialEq` and
//! `Hash` impls for [`ValueType`] go through a nameless (de Bruijn) form, so
//! `mu x. 1 + x` and `mu y. 1 + y` are equal and hash identically.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

/// A value type: `0`, `1`, `a + b`, `a * b`, a type variable or `mu x. a`.
#[derive(Clone, Debug)]
pub enum ValueType {
    Zero,
    One,
    Sum(Box<ValueType>, Box<ValueType>),
    Prod(Box<ValueType>, Box<ValueType>),
    Var(String),
    Mu(String, Box<ValueType>),
}

/// Nameless representation used for alpha-equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Nameless {
    Zero,
    One,
    Sum(Box<Nameless>, Box<Nameless>),
    Prod(Box<Nameless>, Box<Nameless>),
    Free(String),
    Bound(usize),
    Mu(Box<Nameless>),
}

impl ValueType {
    pub fn sum(a: ValueType, b: ValueType) -> Self {
        ValueType::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: ValueType, b: ValueType) -> Self {
        ValueType::Prod(Box::new(a), Box::new(b))
    }

    pub fn var(name: impl Into<String>) -> Self {
        ValueType::Var(name.into())
    }

    pub fn mu(binder: impl Into<String>, body: ValueType) -> Self {
        ValueType::Mu(binder.into(), Box::new(body))
    }

    /// `1 + 1`, the two-element type.
    pub fn bool() -> Self {
        ValueType::sum(ValueType::One, ValueType::One)
    }

    /// `mu x. 1 + x`.
    pub fn nat() -> Self {
        ValueType::mu("x", ValueType::sum(ValueType::One, ValueType::var("x")))
    }

    /// Lists of `elem`: `mu l. 1 + elem * l`, with a binder fresh for `elem`.
    pub fn list(elem: ValueType) -> Self {
        let binder = fresh_name("l", &elem.free_vars());
        let body = ValueType::sum(ValueType::One, ValueType::prod(elem, ValueType::Var(binder.clone())));
        ValueType::Mu(binder, Box::new(body))
    }

    /// Variables occurring free.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            ValueType::Zero | ValueType::One => {}
            ValueType::Sum(a, b) | ValueType::Prod(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            ValueType::Var(x) => {
                if !bound.contains(&x.as_str()) {
                    out.insert(x.clone());
                }
            }
            ValueType::Mu(x, body) => {
                bound.push(x);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn contains_mu(&self) -> bool {
        match self {
            ValueType::Zero | ValueType::One | ValueType::Var(_) => false,
            ValueType::Sum(a, b) | ValueType::Prod(a, b) => a.contains_mu() || b.contains_mu(),
            ValueType::Mu(..) => true,
        }
    }

    /// Capture-avoiding substitution `self[replacement/x]`.
    pub fn substitute(&self, x: &str, replacement: &ValueType) -> ValueType {
        let fv = replacement.free_vars();
        self.subst_with(x, replacement, &fv)
    }

    fn subst_with(&self, x: &str, b: &ValueType, fv_b: &BTreeSet<String>) -> ValueType {
        match self {
            ValueType::Zero => ValueType::Zero,
            ValueType::One => ValueType::One,
            ValueType::Sum(l, r) => ValueType::sum(l.subst_with(x, b, fv_b), r.subst_with(x, b, fv_b)),
            ValueType::Prod(l, r) => ValueType::prod(l.subst_with(x, b, fv_b), r.subst_with(x, b, fv_b)),
            ValueType::Var(y) if y == x => b.clone(),
            ValueType::Var(y) => ValueType::Var(y.clone()),
            ValueType::Mu(y, _) if y == x => self.clone(),
            ValueType::Mu(y, body) => {
                if !body.free_vars().contains(x) {
                    return self.clone();
                }
                if fv_b.contains(y) {
                    // rename the binder away from everything in sight
                    let mut avoid = fv_b.clone();
                    avoid.extend(body.free_vars());
                    avoid.insert(x.to_string());
                    let fresh = fresh_name(y, &avoid);
                    let renamed = body.substitute(y, &ValueType::Var(fresh.clone()));
                    ValueType::Mu(fresh, Box::new(renamed.subst_with(x, b, fv_b)))
                } else {
                    ValueType::Mu(y.clone(), Box::new(body.subst_with(x, b, fv_b)))
                }
            }
        }
    }

    /// For `mu x. a`, the one-step unfolding `a[mu x. a / x]`.
    pub fn unfold_mu(&self) -> Option<ValueType> {
        match self {
            ValueType::Mu(x, body) => Some(body.substitute(x, self)),
            _ => None,
        }
    }

    fn nameless(&self) -> Nameless {
        fn go<'a>(t: &'a ValueType, scope: &mut Vec<&'a str>) -> Nameless {
            match t {
                ValueType::Zero => Nameless::Zero,
                ValueType::One => Nameless::One,
                ValueType::Sum(a, b) => Nameless::Sum(Box::new(go(a, scope)), Box::new(go(b, scope))),
                ValueType::Prod(a, b) => Nameless::Prod(Box::new(go(a, scope)), Box::new(go(b, scope))),
                ValueType::Var(x) => match scope.iter().rev().position(|y| *y == x) {
                    Some(i) => Nameless::Bound(i),
                    None => Nameless::Free(x.clone()),
                },
                ValueType::Mu(x, body) => {
                    scope.push(x);
                    let inner = go(body, scope);
                    scope.pop();
                    Nameless::Mu(Box::new(inner))
                }
            }
        }
        go(self, &mut Vec::new())
    }

    /// Exact syntactic equality, binder names included.
    pub fn same_spelling(&self, other: &ValueType) -> bool {
        match (self, other) {
            (ValueType::Zero, ValueType::Zero) | (ValueType::One, ValueType::One) => true,
            (ValueType::Sum(a, b), ValueType::Sum(c, d)) | (ValueType::Prod(a, b), ValueType::Prod(c, d)) => {
                a.same_spelling(c) && b.same_spelling(d)
            }
            (ValueType::Var(x), ValueType::Var(y)) => x == y,
            (ValueType::Mu(x, a), ValueType::Mu(y, b)) => x == y && a.same_spelling(b),
            _ => false,
        }
    }
}

impl PartialEq for ValueType {
    fn eq(&self, other: &Self) -> bool {
        self.nameless() == other.nameless()
    }
}

impl Eq for ValueType {}

impl Hash for ValueType {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.nameless().hash(state);
    }
}

/// A name based on `base` that does not occur in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    if !avoid.contains(base) {
        return base.to_string();
    }
    (1..).map(|i| format!("{base}{i}")).find(|n| !avoid.contains(n)).expect("unbounded supply of names")
}

/// A closed canonical value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Unit,
    InL(Box<Value>),
    InR(Box<Value>),
    Pair(Box<Value>, Box<Value>),
    Fold(Box<Value>),
}

impl Value {
    pub fn inl(v: Value) -> Self {
        Value::InL(Box::new(v))
    }

    pub fn inr(v: Value) -> Self {
        Value::InR(Box::new(v))
    }

    pub fn pair(a: Value, b: Value) -> Self {
        Value::Pair(Box::new(a), Box::new(b))
    }

    pub fn fold(v: Value) -> Self {
        Value::Fold(Box::new(v))
    }

    /// Largest number of `fold` wrappers on any root-to-leaf path.
    pub fn fold_depth(&self) -> usize {
        match self {
            Value::Unit => 0,
            Value::InL(v) | Value::InR(v) => v.fold_depth(),
            Value::Pair(a, b) => a.fold_depth().max(b.fold_depth()),
            Value::Fold(v) => 1 + v.fold_depth(),
        }
    }

    /// The numeral `n` of `mu x. 1 + x`, with `inl ()` as zero.
    pub fn nat(n: usize) -> Value {
        let mut v = Value::fold(Value::inl(Value::Unit));
        for _ in 0..n {
            v = Value::fold(Value::inr(v));
        }
        v
    }

    /// Inverse of [`Value::nat`].
    pub fn as_nat(&self) -> Option<usize> {
        let mut n = 0;
        let mut cur = self;
        loop {
            match cur {
                Value::Fold(inner) => match inner.as_ref() {
                    Value::InL(u) if **u == Value::Unit => return Some(n),
                    Value::InR(rest) => {
                        n += 1;
                        cur = rest;
                    }
                    _ => return None,
                },
                _ => return None,
            }
        }
    }
}

/// Program syntax.
///
/// `Comp(f, g)` is diagram-order composition: `f` runs first, then `g`
/// (the surface syntax is `f ; g`, i.e. `g . f` in the usual notation).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Combinator {
    Id,
    AssocLPlus,
    AssocRPlus,
    UnitLPlus,
    UnitRPlus,
    SwapPlus,
    AssocLTimes,
    AssocRTimes,
    UnitLTimes,
    UnitRTimes,
    SwapTimes,
    Distrib,
    Factor,
    Absorb,
    Unabsorb,
    Fold(ValueType),
    Unfold(ValueType),
    Comp(Box<Combinator>, Box<Combinator>),
    SumC(Box<Combinator>, Box<Combinator>),
    ProdC(Box<Combinator>, Box<Combinator>),
    Trace(Box<Combinator>),
    Inv(Box<Combinator>),
}

/// Every basic combinator except the type-annotated `fold`/`unfold`.
pub const PLAIN_BASICS: [Combinator; 15] = [
    Combinator::Id,
    Combinator::AssocLPlus,
    Combinator::AssocRPlus,
    Combinator::UnitLPlus,
    Combinator::UnitRPlus,
    Combinator::SwapPlus,
    Combinator::AssocLTimes,
    Combinator::AssocRTimes,
    Combinator::UnitLTimes,
    Combinator::UnitRTimes,
    Combinator::SwapTimes,
    Combinator::Distrib,
    Combinator::Factor,
    Combinator::Absorb,
    Combinator::Unabsorb,
];

impl Combinator {
    /// `first ; second`.
    pub fn then(first: Combinator, second: Combinator) -> Self {
        Combinator::Comp(Box::new(first), Box::new(second))
    }

    pub fn sum(f: Combinator, g: Combinator) -> Self {
        Combinator::SumC(Box::new(f), Box::new(g))
    }

    pub fn prod(f: Combinator, g: Combinator) -> Self {
        Combinator::ProdC(Box::new(f), Box::new(g))
    }

    pub fn trace(f: Combinator) -> Self {
        Combinator::Trace(Box::new(f))
    }

    pub fn inv(f: Combinator) -> Self {
        Combinator::Inv(Box::new(f))
    }

    /// Left-to-right composition of a non-empty sequence.
    pub fn seq(parts: impl IntoIterator<Item = Combinator>) -> Self {
        let mut parts: Vec<_> = parts.into_iter().collect();
        let mut acc = parts.pop().expect("seq of an empty sequence");
        while let Some(prev) = parts.pop() {
            acc = Combinator::then(prev, acc);
        }
        acc
    }

    pub fn is_basic(&self) -> bool {
        !matches!(
            self,
            Combinator::Comp(..)
                | Combinator::SumC(..)
                | Combinator::ProdC(..)
                | Combinator::Trace(..)
                | Combinator::Inv(..)
        )
    }

    /// Surface keyword of a basic combinator (without annotation).
    pub fn keyword(&self) -> Option<&'static str> {
        Some(match self {
            Combinator::Id => "id",
            Combinator::AssocLPlus => "assocl+",
            Combinator::AssocRPlus => "assocr+",
            Combinator::UnitLPlus => "unitl+",
            Combinator::UnitRPlus => "unitr+",
            Combinator::SwapPlus => "swap+",
            Combinator::AssocLTimes => "assocl*",
            Combinator::AssocRTimes => "assocr*",
            Combinator::UnitLTimes => "unitl*",
            Combinator::UnitRTimes => "unitr*",
            Combinator::SwapTimes => "swap*",
            Combinator::Distrib => "distrib",
            Combinator::Factor => "factor",
            Combinator::Absorb => "absorb",
            Combinator::Unabsorb => "unabsorb",
            Combinator::Fold(_) => "fold",
            Combinator::Unfold(_) => "unfold",
            _ => return None,
        })
    }

    pub fn contains_inv(&self) -> bool {
        match self {
            Combinator::Inv(_) => true,
            Combinator::Comp(f, g) | Combinator::SumC(f, g) | Combinator::ProdC(f, g) => {
                f.contains_inv() || g.contains_inv()
            }
            Combinator::Trace(f) => f.contains_inv(),
            _ => false,
        }
    }

    /// Whether any `fold`/`unfold` occurs.
    pub fn mentions_mu(&self) -> bool {
        match self {
            Combinator::Fold(_) | Combinator::Unfold(_) => true,
            Combinator::Comp(f, g) | Combinator::SumC(f, g) | Combinator::ProdC(f, g) => {
                f.mentions_mu() || g.mentions_mu()
            }
            Combinator::Trace(f) | Combinator::Inv(f) => f.mentions_mu(),
            _ => false,
        }
    }

    /// Number of `trace` nodes.
    pub fn trace_count(&self) -> usize {
        match self {
            Combinator::Comp(f, g) | Combinator::SumC(f, g) | Combinator::ProdC(f, g) => {
                f.trace_count() + g.trace_count()
            }
            Combinator::Trace(f) => 1 + f.trace_count(),
            Combinator::Inv(f) => f.trace_count(),
            _ => 0,
        }
    }

    /// The canonical inverse. The result never contains `Inv`.
    ///
    /// Basic combinators map to their table partner, composition is
    /// reversed, `(+)`, `(*)` and `trace` act componentwise, and `inv(c)`
    /// yields `c` itself (with any inner `inv` eliminated).
    pub fn dagger(&self) -> Combinator {
        use Combinator::*;
        match self {
            Id => Id,
            AssocLPlus => AssocRPlus,
            AssocRPlus => AssocLPlus,
            UnitLPlus => UnitRPlus,
            UnitRPlus => UnitLPlus,
            SwapPlus => SwapPlus,
            AssocLTimes => AssocRTimes,
            AssocRTimes => AssocLTimes,
            UnitLTimes => UnitRTimes,
            UnitRTimes => UnitLTimes,
            SwapTimes => SwapTimes,
            Distrib => Factor,
            Factor => Distrib,
            Absorb => Unabsorb,
            Unabsorb => Absorb,
            Fold(t) => Unfold(t.clone()),
            Unfold(t) => Fold(t.clone()),
            Comp(f, g) => Combinator::then(g.dagger(), f.dagger()),
            SumC(f, g) => Combinator::sum(f.dagger(), g.dagger()),
            ProdC(f, g) => Combinator::prod(f.dagger(), g.dagger()),
            Trace(f) => Combinator::trace(f.dagger()),
            Inv(c) => c.eliminate_inv(),
        }
    }

    /// Rewrites every `inv(c)` into the dagger of `c`.
    pub fn eliminate_inv(&self) -> Combinator {
        use Combinator::*;
        match self {
            Comp(f, g) => Combinator::then(f.eliminate_inv(), g.eliminate_inv()),
            SumC(f, g) => Combinator::sum(f.eliminate_inv(), g.eliminate_inv()),
            ProdC(f, g) => Combinator::prod(f.eliminate_inv(), g.eliminate_inv()),
            Trace(f) => Combinator::trace(f.eliminate_inv()),
            Inv(c) => c.eliminate_inv().dagger(),
            basic => basic.clone(),
        }
    }
}

impl fmt::Display for ValueType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_type(self))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_value(self))
    }
}

impl fmt::Display for Combinator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_combinator(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ValueType as T;

    fn x() -> T {
        T::var("x")
    }

    #[test]
    fn substitute_replaces_free_occurrence() {
        assert!(x().substitute("x", &T::One).same_spelling(&T::One));
    }

    #[test]
    fn substitute_respects_shadowing() {
        let t = T::mu("x", T::sum(T::One, x()));
        assert!(t.substitute("x", &T::Zero).same_spelling(&t));
    }

    #[test]
    fn substitute_single_occurrence() {
        let t = T::sum(x(), T::var("y"));
        let got = t.substitute("x", &T::prod(T::One, T::One));
        assert!(got.same_spelling(&T::sum(T::prod(T::One, T::One), T::var("y"))));
    }

    #[test]
    fn substitute_avoids_capture() {
        // (mu y. x + y)[y/x] must not capture the free y
        let t = T::mu("y", T::sum(x(), T::var("y")));
        let got = t.substitute("x", &T::var("y"));
        assert_eq!(got.free_vars(), BTreeSet::from(["y".to_string()]));
        let expected = T::mu("z", T::sum(T::var("y"), T::var("z")));
        assert_eq!(got, expected);
    }

    #[test]
    fn free_vars_examples() {
        assert!(T::One.free_vars().is_empty());
        assert!(T::mu("x", T::sum(T::One, x())).free_vars().is_empty());
        let t = T::prod(x(), T::mu("x", x()));
        assert_eq!(t.free_vars(), BTreeSet::from(["x".to_string()]));
    }

    #[test]
    fn alpha_equivalence() {
        let a = T::mu("x", T::sum(T::One, x()));
        let b = T::mu("y", T::sum(T::One, T::var("y")));
        assert_eq!(a, b);
        assert!(!a.same_spelling(&b));
        assert_ne!(T::mu("x", T::var("y")), T::mu("y", T::var("y")));
    }

    #[test]
    fn unfold_nat() {
        let got = T::nat().unfold_mu().unwrap();
        assert_eq!(got, T::sum(T::One, T::nat()));
    }

    #[test]
    fn dagger_examples() {
        use Combinator::*;
        assert_eq!(AssocLPlus.dagger(), AssocRPlus);
        assert_eq!(Combinator::then(SwapPlus, Distrib).dagger(), Combinator::then(Factor, SwapPlus));
        assert_eq!(Combinator::trace(SwapPlus).dagger(), Combinator::trace(SwapPlus));
        assert_eq!(Combinator::inv(Distrib).dagger(), Distrib);
    }

    #[test]
    fn eliminate_inv_removes_all_inv_nodes() {
        use Combinator::*;
        let c = Combinator::then(
            Combinator::inv(Combinator::then(Distrib, Combinator::inv(SwapPlus))),
            Combinator::trace(Combinator::inv(AssocLPlus)),
        );
        let out = c.eliminate_inv();
        assert!(!out.contains_inv());
        assert_eq!(out, Combinator::then(Combinator::then(SwapPlus, Factor), Combinator::trace(AssocRPlus)));
    }

    #[test]
    fn nat_numerals_round_trip() {
        for n in 0..5 {
            assert_eq!(Value::nat(n).as_nat(), Some(n));
            assert_eq!(Value::nat(n).fold_depth(), n + 1);
        }
    }
}
