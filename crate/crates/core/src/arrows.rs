//! Inverse arrows over reversible functions.
//!
//! A [`RevFun`] is a pair of mutually partial-inverse evaluators. Every
//! arrow instance represents an effectful computation `X ~> Y` as an
//! [`Effectful`] whose carrier is a `RevFun` between instance-specific
//! types, e.g. `X * S <-> Y * S` for reversible state. Laws are checked
//! extensionally by [`check_laws`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::interp::{run, run_backward, values_up_to_depth, EvalResult, Fuel};
use crate::parser::{parse_value, print_value};
use crate::report::{LawCheck, LawReport, LawResult};
use crate::syntax::{Combinator, Value, ValueType};
use crate::typecheck::{check_value, infer_combinator, CombinatorType, TypeError};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ArrowError {
    #[error("table is not injective: {0}")]
    NotInjective(String),
    #[error("codec for `{ty}` is not a partial-inverse pair: {detail}")]
    CodecNotInjective { ty: String, detail: String },
    #[error("group law violated: {0}")]
    GroupLawViolation(String),
    #[error("choice function law violated: {0}")]
    ChoiceLawViolation(String),
    #[error("context changed: {input} -> {output}")]
    InvarianceViolation { input: String, output: String },
    #[error("{instance} does not support {operation}")]
    NotSupported { instance: String, operation: &'static str },
    #[error(transparent)]
    Type(#[from] TypeError),
}

type Action = Arc<dyn Fn(&Value) -> EvalResult + Send + Sync>;

/// A reversible function `input <-> output`: `forward` and `backward` are
/// partial inverses of each other.
#[derive(Clone)]
pub struct RevFun {
    pub input: ValueType,
    pub output: ValueType,
    forward: Action,
    backward: Action,
}

impl fmt::Debug for RevFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RevFun({} <-> {})", self.input, self.output)
    }
}

fn bind(r: EvalResult, k: impl FnOnce(Value) -> EvalResult) -> EvalResult {
    match r {
        EvalResult::Defined(v) => k(v),
        other => other,
    }
}

fn defined(v: Value) -> EvalResult {
    EvalResult::Defined(v)
}

impl RevFun {
    pub fn new(
        input: ValueType,
        output: ValueType,
        forward: impl Fn(&Value) -> EvalResult + Send + Sync + 'static,
        backward: impl Fn(&Value) -> EvalResult + Send + Sync + 'static,
    ) -> Self {
        RevFun { input, output, forward: Arc::new(forward), backward: Arc::new(backward) }
    }

    pub fn identity(t: ValueType) -> Self {
        RevFun::new(t.clone(), t, |v| defined(v.clone()), |v| defined(v.clone()))
    }

    /// Runs a combinator at the given type; backwards runs its dagger.
    pub fn from_combinator(c: &Combinator, ty: &CombinatorType) -> Result<Self, ArrowError> {
        let ty = infer_combinator(c, Some(ty))?;
        let (fwd, bwd) = (c.clone(), c.clone());
        let internal = |e| panic!("well-typed combinator failed: {e}");
        Ok(RevFun::new(
            ty.domain,
            ty.codomain,
            move |v| run(&fwd, v, Fuel::default()).unwrap_or_else(internal),
            move |v| run_backward(&bwd, v, Fuel::default()).unwrap_or_else(internal),
        ))
    }

    /// A finite table; undefined outside it.
    pub fn from_pairs(
        input: ValueType,
        output: ValueType,
        pairs: impl IntoIterator<Item = (Value, Value)>,
    ) -> Result<Self, ArrowError> {
        let mut fwd = BTreeMap::new();
        let mut bwd = BTreeMap::new();
        for (x, y) in pairs {
            if fwd.contains_key(&x) || bwd.contains_key(&y) {
                return Err(ArrowError::NotInjective(format!("{x} -> {y}")));
            }
            fwd.insert(x.clone(), y.clone());
            bwd.insert(y, x);
        }
        let lookup = |m: BTreeMap<Value, Value>| {
            move |v: &Value| m.get(v).cloned().map_or(EvalResult::Undefined, EvalResult::Defined)
        };
        Ok(RevFun::new(input, output, lookup(fwd), lookup(bwd)))
    }

    /// A random partial injection between the given inputs and outputs.
    pub fn random(
        rng: &mut dyn RngCore,
        input: ValueType,
        output: ValueType,
        inputs: &[Value],
        outputs: &[Value],
        density: f64,
    ) -> Self {
        let mut targets = outputs.to_vec();
        targets.shuffle(rng);
        let mut pairs = Vec::new();
        for x in inputs {
            if rng.gen_bool(density) {
                match targets.pop() {
                    Some(y) => pairs.push((x.clone(), y)),
                    None => break,
                }
            }
        }
        RevFun::from_pairs(input, output, pairs).expect("distinct targets")
    }

    pub fn apply(&self, v: &Value) -> EvalResult {
        (self.forward)(v)
    }

    pub fn unapply(&self, v: &Value) -> EvalResult {
        (self.backward)(v)
    }

    pub fn dagger(&self) -> Self {
        RevFun {
            input: self.output.clone(),
            output: self.input.clone(),
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    /// `self ; next`.
    pub fn then(&self, next: &RevFun) -> Self {
        let (f1, g1) = (self.forward.clone(), next.forward.clone());
        let (f2, g2) = (self.backward.clone(), next.backward.clone());
        RevFun::new(
            self.input.clone(),
            next.output.clone(),
            move |v| bind(f1(v), |w| g1(&w)),
            move |v| bind(g2(v), |w| f2(&w)),
        )
    }

    /// `self ⊗ g` on pairs.
    pub fn tensor(&self, g: &RevFun) -> Self {
        let both = |f: Action, g: Action| {
            move |v: &Value| match v {
                Value::Pair(a, b) => bind(f(a), |x| bind(g(b), |y| defined(Value::pair(x, y)))),
                _ => EvalResult::Undefined,
            }
        };
        RevFun::new(
            ValueType::prod(self.input.clone(), g.input.clone()),
            ValueType::prod(self.output.clone(), g.output.clone()),
            both(self.forward.clone(), g.forward.clone()),
            both(self.backward.clone(), g.backward.clone()),
        )
    }

    /// `self ⊕ g` on sums.
    pub fn oplus(&self, g: &RevFun) -> Self {
        let either = |f: Action, g: Action| {
            move |v: &Value| match v {
                Value::InL(a) => bind(f(a), |x| defined(Value::inl(x))),
                Value::InR(b) => bind(g(b), |y| defined(Value::inr(y))),
                _ => EvalResult::Undefined,
            }
        };
        RevFun::new(
            ValueType::sum(self.input.clone(), g.input.clone()),
            ValueType::sum(self.output.clone(), g.output.clone()),
            either(self.forward.clone(), g.forward.clone()),
            either(self.backward.clone(), g.backward.clone()),
        )
    }

    /// Checks the partial-inverse property on the given points.
    pub fn check_partial_inverse(&self, inputs: &[Value], outputs: &[Value]) -> Result<(), String> {
        for x in inputs {
            if let EvalResult::Defined(y) = self.apply(x) {
                if self.unapply(&y) != EvalResult::Defined(x.clone()) {
                    return Err(format!("forward {x} = {y}, but backward {y} = {}", self.unapply(&y)));
                }
            }
        }
        for y in outputs {
            if let EvalResult::Defined(x) = self.unapply(y) {
                if self.apply(&x) != EvalResult::Defined(y.clone()) {
                    return Err(format!("backward {y} = {x}, but forward {x} = {}", self.apply(&x)));
                }
            }
        }
        Ok(())
    }
}

fn comb(c: Combinator, dom: ValueType, cod: ValueType) -> RevFun {
    RevFun::from_combinator(&c, &CombinatorType::new(dom, cod)).expect("structural map")
}

/// `α: X * (Y * Z) <-> (X * Y) * Z`.
pub fn assoc_times(x: &ValueType, y: &ValueType, z: &ValueType) -> RevFun {
    comb(
        Combinator::AssocLTimes,
        ValueType::prod(x.clone(), ValueType::prod(y.clone(), z.clone())),
        ValueType::prod(ValueType::prod(x.clone(), y.clone()), z.clone()),
    )
}

/// `σ: X * Y <-> Y * X`.
pub fn swap_times(x: &ValueType, y: &ValueType) -> RevFun {
    comb(Combinator::SwapTimes, ValueType::prod(x.clone(), y.clone()), ValueType::prod(y.clone(), x.clone()))
}

/// `ρ: X * 1 <-> X`.
pub fn right_unit(x: &ValueType) -> RevFun {
    comb(
        Combinator::then(Combinator::SwapTimes, Combinator::UnitLTimes),
        ValueType::prod(x.clone(), ValueType::One),
        x.clone(),
    )
}

/// An effectful computation `input ~> output`, represented by its carrier.
#[derive(Clone, Debug)]
pub struct Effectful {
    pub input: ValueType,
    pub output: ValueType,
    pub carrier: RevFun,
}

impl Effectful {
    pub fn new(input: ValueType, output: ValueType, carrier: RevFun) -> Self {
        Effectful { input, output, carrier }
    }

    pub fn run(&self, v: &Value) -> EvalResult {
        self.carrier.apply(v)
    }
}

/// The arrow interface. `first` returns `None` for weak arrows.
pub trait InverseArrow: Send + Sync {
    fn name(&self) -> String;

    fn arr(&self, f: &RevFun) -> Effectful;

    /// `a >>> b`.
    fn seq(&self, a: &Effectful, b: &Effectful) -> Effectful;

    fn inv(&self, a: &Effectful) -> Effectful;

    fn first(&self, a: &Effectful, z: &ValueType) -> Option<Effectful>;

    /// `left a : X + Z ~> Y + Z`.
    fn left(&self, _a: &Effectful, _z: &ValueType) -> Result<Effectful, ArrowError> {
        Err(ArrowError::NotSupported { instance: self.name(), operation: "left" })
    }

    /// A random computation `x ~> y`.
    fn sample(&self, rng: &mut dyn RngCore, x: &ValueType, y: &ValueType) -> Effectful;

    /// Unfolding depth used to enumerate recursive carrier types.
    fn mu_depth(&self) -> usize {
        0
    }

    fn second(&self, a: &Effectful, z: &ValueType) -> Option<Effectful> {
        let pre = self.arr(&swap_times(z, &a.input));
        let post = self.arr(&swap_times(&a.output, z));
        let mid = self.first(a, z)?;
        Some(self.seq(&self.seq(&pre, &mid), &post))
    }

    /// The points on which carriers with input type `t` are compared.
    fn inputs(&self, t: &ValueType) -> Vec<Value> {
        values_up_to_depth(t, self.mu_depth())
    }

    fn is_weak(&self) -> bool {
        let one = ValueType::One;
        self.first(&self.arr(&RevFun::identity(one.clone())), &one).is_none()
    }
}

fn random_fun(rng: &mut dyn RngCore, x: &ValueType, y: &ValueType, depth: usize) -> RevFun {
    let xs = values_up_to_depth(x, depth);
    let ys = values_up_to_depth(y, depth);
    let density = [0.7, 0.9, 1.0][rng.gen_range(0..3)];
    RevFun::random(rng, x.clone(), y.clone(), &xs, &ys, density)
}

/// Pure reversible functions: the identity arrow.
#[derive(Clone, Debug, Default)]
pub struct Pure;

impl InverseArrow for Pure {
    fn name(&self) -> String {
        "pure".into()
    }

    fn arr(&self, f: &RevFun) -> Effectful {
        Effectful::new(f.input.clone(), f.output.clone(), f.clone())
    }

    fn seq(&self, a: &Effectful, b: &Effectful) -> Effectful {
        Effectful::new(a.input.clone(), b.output.clone(), a.carrier.then(&b.carrier))
    }

    fn inv(&self, a: &Effectful) -> Effectful {
        Effectful::new(a.output.clone(), a.input.clone(), a.carrier.dagger())
    }

    fn first(&self, a: &Effectful, z: &ValueType) -> Option<Effectful> {
        let id = RevFun::identity(z.clone());
        Some(Effectful::new(
            ValueType::prod(a.input.clone(), z.clone()),
            ValueType::prod(a.output.clone(), z.clone()),
            a.carrier.tensor(&id),
        ))
    }

    fn left(&self, a: &Effectful, z: &ValueType) -> Result<Effectful, ArrowError> {
        Ok(Effectful::new(
            ValueType::sum(a.input.clone(), z.clone()),
            ValueType::sum(a.output.clone(), z.clone()),
            a.carrier.oplus(&RevFun::identity(z.clone())),
        ))
    }

    fn sample(&self, rng: &mut dyn RngCore, x: &ValueType, y: &ValueType) -> Effectful {
        self.arr(&random_fun(rng, x, y, 0))
    }
}

/// Shared carrier plumbing for arrows of the form `X * S <-> Y * S`.
#[derive(Clone, Debug)]
struct Stateful {
    state: ValueType,
}

impl Stateful {
    fn wrap(&self, x: &ValueType, y: &ValueType, carrier: RevFun) -> Effectful {
        Effectful::new(x.clone(), y.clone(), carrier)
    }

    fn arr(&self, f: &RevFun) -> Effectful {
        self.wrap(&f.input, &f.output, f.tensor(&RevFun::identity(self.state.clone())))
    }

    fn seq(&self, a: &Effectful, b: &Effectful) -> Effectful {
        self.wrap(&a.input, &b.output, a.carrier.then(&b.carrier))
    }

    fn inv(&self, a: &Effectful) -> Effectful {
        self.wrap(&a.output, &a.input, a.carrier.dagger())
    }

    /// `((x, z), s) ↦ let (x', s') = a (x, s) in ((x', z), s')`.
    fn first(&self, a: &Effectful, z: &ValueType) -> Effectful {
        let (x, y, s) = (&a.input, &a.output, &self.state);
        // (X * Z) * S -> X * (Z * S) -> X * (S * Z) -> (X * S) * Z
        let shuffle = |x: &ValueType| {
            assoc_times(x, z, s)
                .dagger()
                .then(&RevFun::identity(x.clone()).tensor(&swap_times(z, s)))
                .then(&assoc_times(x, s, z))
        };
        let carrier = shuffle(x).then(&a.carrier.tensor(&RevFun::identity(z.clone()))).then(&shuffle(y).dagger());
        self.wrap(&ValueType::prod(x.clone(), z.clone()), &ValueType::prod(y.clone(), z.clone()), carrier)
    }

    /// `(inl x, s) ↦ a (x, s)` tagged left, `(inr z, s)` unchanged.
    fn left(&self, a: &Effectful, z: &ValueType) -> Effectful {
        let (x, y, s) = (&a.input, &a.output, &self.state);
        let dist = |x: &ValueType| {
            comb(
                Combinator::Distrib,
                ValueType::prod(ValueType::sum(x.clone(), z.clone()), s.clone()),
                ValueType::sum(ValueType::prod(x.clone(), s.clone()), ValueType::prod(z.clone(), s.clone())),
            )
        };
        let id_zs = RevFun::identity(ValueType::prod(z.clone(), s.clone()));
        let carrier = dist(x).then(&a.carrier.oplus(&id_zs)).then(&dist(y).dagger());
        self.wrap(&ValueType::sum(x.clone(), z.clone()), &ValueType::sum(y.clone(), z.clone()), carrier)
    }

    fn sample(&self, rng: &mut dyn RngCore, x: &ValueType, y: &ValueType) -> Effectful {
        let s = &self.state;
        let f = random_fun(rng, &ValueType::prod(x.clone(), s.clone()), &ValueType::prod(y.clone(), s.clone()), 0);
        self.wrap(x, y, f)
    }

    /// `get (x, s) = ((x, s), s)`.
    fn get(&self, x: &ValueType) -> Effectful {
        let s = self.state.clone();
        let xs = ValueType::prod(x.clone(), s.clone());
        let out = ValueType::prod(xs.clone(), s.clone());
        let carrier = RevFun::new(
            xs.clone(),
            out,
            |v| match v {
                Value::Pair(_, st) => defined(Value::pair(v.clone(), (**st).clone())),
                _ => EvalResult::Undefined,
            },
            |v| match v {
                Value::Pair(inner, st) => match &**inner {
                    Value::Pair(_, st2) if st2 == st => defined((**inner).clone()),
                    _ => EvalResult::Undefined,
                },
                _ => EvalResult::Undefined,
            },
        );
        self.wrap(x, &xs, carrier)
    }
}

macro_rules! delegate_stateful {
    () => {
        fn arr(&self, f: &RevFun) -> Effectful {
            self.inner.arr(f)
        }

        fn seq(&self, a: &Effectful, b: &Effectful) -> Effectful {
            self.inner.seq(a, b)
        }

        fn inv(&self, a: &Effectful) -> Effectful {
            self.inner.inv(a)
        }

        fn first(&self, a: &Effectful, z: &ValueType) -> Option<Effectful> {
            Some(self.inner.first(a, z))
        }

        fn left(&self, a: &Effectful, z: &ValueType) -> Result<Effectful, ArrowError> {
            Ok(self.inner.left(a, z))
        }
    };
}

/// Reversible state `X * S <-> Y * S`.
#[derive(Clone, Debug)]
pub struct RState {
    inner: Stateful,
}

impl RState {
    pub fn new(state: ValueType) -> Self {
        RState { inner: Stateful { state } }
    }

    pub fn state(&self) -> &ValueType {
        &self.inner.state
    }

    /// `get : X ~> X * S`.
    pub fn get(&self, x: &ValueType) -> Effectful {
        self.inner.get(x)
    }

    /// `assert : X * S ~> X`, the inverse of `get`.
    pub fn assert(&self, x: &ValueType) -> Effectful {
        self.inner.inv(&self.inner.get(x))
    }

    /// `update f (x, s) = (x, f s)`.
    pub fn update(&self, x: &ValueType, f: &RevFun) -> Effectful {
        self.inner.wrap(x, x, RevFun::identity(x.clone()).tensor(f))
    }
}

impl InverseArrow for RState {
    fn name(&self) -> String {
        format!("rstate[{}]", self.inner.state)
    }

    delegate_stateful!();

    fn sample(&self, rng: &mut dyn RngCore, x: &ValueType, y: &ValueType) -> Effectful {
        self.inner.sample(rng, x, y)
    }
}

/// Computation in an invariant context `X * C <-> Y * C`.
#[derive(Clone, Debug)]
pub struct Reader {
    inner: Stateful,
}

impl Reader {
    pub fn new(context: ValueType) -> Self {
        Reader { inner: Stateful { state: context } }
    }

    pub fn get(&self, x: &ValueType) -> Effectful {
        self.inner.get(x)
    }

    pub fn assert(&self, x: &ValueType) -> Effectful {
        self.inner.inv(&self.inner.get(x))
    }

    /// Checks that every defined output keeps the input's context.
    /// Returns the number of defined points inspected.
    pub fn check_invariance(&self, a: &Effectful, samples: &[Value]) -> Result<usize, ArrowError> {
        let mut seen = 0;
        for v in samples {
            if let EvalResult::Defined(w) = a.run(v) {
                seen += 1;
                let same = match (v, &w) {
                    (Value::Pair(_, c), Value::Pair(_, c2)) => c == c2,
                    _ => false,
                };
                if !same {
                    return Err(ArrowError::InvarianceViolation { input: v.to_string(), output: w.to_string() });
                }
            }
        }
        Ok(seen)
    }
}

impl InverseArrow for Reader {
    fn name(&self) -> String {
        format!("reader[{}]", self.inner.state)
    }

    delegate_stateful!();

    /// A random partial injection for each context value.
    fn sample(&self, rng: &mut dyn RngCore, x: &ValueType, y: &ValueType) -> Effectful {
        let c = &self.inner.state;
        let mut pairs = Vec::new();
        for ctx in values_up_to_depth(c, 0) {
            let f = random_fun(rng, x, y, 0);
            for v in values_up_to_depth(x, 0) {
                if let EvalResult::Defined(w) = f.apply(&v) {
                    pairs.push((Value::pair(v, ctx.clone()), Value::pair(w, ctx.clone())));
                }
            }
        }
        let carrier =
            RevFun::from_pairs(ValueType::prod(x.clone(), c.clone()), ValueType::prod(y.clone(), c.clone()), pairs)
                .expect("injective per context");
        self.inner.wrap(x, y, carrier)
    }
}

type GroupMul = Arc<dyn Fn(&Value) -> RevFun + Send + Sync>;

/// A finite group on the values of `carrier`.
#[derive(Clone)]
pub struct GroupSpec {
    pub carrier: ValueType,
    pub gunit: Value,
    pub gmul: GroupMul,
    pub ginv: RevFun,
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpec({}, unit {})", self.carrier, self.gunit)
    }
}

/// `1 + 1 + ... + 1` with `n` summands (`0` for `n = 0`), right nested.
pub fn sized_type(n: usize) -> ValueType {
    match n {
        0 => ValueType::Zero,
        1 => ValueType::One,
        _ => ValueType::sum(ValueType::One, sized_type(n - 1)),
    }
}

fn sized_index(v: &Value) -> Option<usize> {
    match v {
        Value::Unit | Value::InL(_) => Some(0),
        Value::InR(rest) => sized_index(rest).map(|i| i + 1),
        _ => None,
    }
}

/// The `i`-th value of [`sized_type`]`(n)`.
pub fn sized_value(n: usize, i: usize) -> Value {
    if n == 1 {
        return Value::Unit;
    }
    if i == 0 {
        Value::inl(Value::Unit)
    } else {
        Value::inr(sized_value(n - 1, i - 1))
    }
}

impl GroupSpec {
    pub fn new(carrier: ValueType, gunit: Value, gmul: GroupMul, ginv: RevFun) -> Result<Self, ArrowError> {
        let g = GroupSpec { carrier, gunit, gmul, ginv };
        g.validate()?;
        Ok(g)
    }

    /// `Z/n` on [`sized_type`]`(n)`; `gmul a` rotates by `a`.
    pub fn cyclic(n: usize) -> Result<Self, ArrowError> {
        assert!(n >= 1);
        let t = sized_type(n);
        let rotate = move |k: usize| {
            let pairs = (0..n).map(|i| (sized_value(n, i), sized_value(n, (i + k) % n)));
            RevFun::from_pairs(sized_type(n), sized_type(n), pairs).expect("rotation")
        };
        let gmul: GroupMul = Arc::new(move |a: &Value| rotate(sized_index(a).unwrap_or(0)));
        let inv_pairs = (0..n).map(|i| (sized_value(n, i), sized_value(n, (n - i) % n)));
        let ginv = RevFun::from_pairs(t.clone(), t.clone(), inv_pairs)?;
        GroupSpec::new(t, sized_value(n, 0), gmul, ginv)
    }

    fn validate(&self) -> Result<(), ArrowError> {
        let elems = values_up_to_depth(&self.carrier, 0);
        let bad = |m: String| Err(ArrowError::GroupLawViolation(m));
        let mul = |a: &Value, b: &Value| (self.gmul)(a).apply(b).defined();
        if check_value(&self.gunit, &self.carrier) != Ok(true) {
            return bad(format!("unit {} is not in {}", self.gunit, self.carrier));
        }
        for a in &elems {
            let ga = (self.gmul)(a);
            if let Err(e) = ga.check_partial_inverse(&elems, &elems) {
                return bad(format!("gmul {a} is not reversible: {e}"));
            }
            for b in &elems {
                match mul(a, b) {
                    Some(c) if elems.contains(&c) => {}
                    other => return bad(format!("gmul {a} {b} = {other:?} is not an element")),
                }
            }
            if mul(&self.gunit, a).as_ref() != Some(a) || mul(a, &self.gunit).as_ref() != Some(a) {
                return bad(format!("unit law fails at {a}"));
            }
            let Some(ia) = self.ginv.apply(a).defined() else {
                return bad(format!("ginv undefined at {a}"));
            };
            if mul(&ia, a).as_ref() != Some(&self.gunit) || mul(a, &ia).as_ref() != Some(&self.gunit) {
                return bad(format!("inverse law fails at {a}"));
            }
            for b in &elems {
                for c in &elems {
                    let lhs = mul(a, &mul(b, c).unwrap());
                    let rhs = mul(&mul(a, b).unwrap(), c);
                    if lhs != rhs {
                        return bad(format!("associativity fails at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Reversible state over a group, with `rewrite`.
#[derive(Clone, Debug)]
pub struct Rewriter {
    inner: Stateful,
    group: GroupSpec,
}

impl Rewriter {
    pub fn new(group: GroupSpec) -> Self {
        Rewriter { inner: Stateful { state: group.carrier.clone() }, group }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// `rewrite a (x, b) = (x, gmul a b)`.
    pub fn rewrite(&self, x: &ValueType, a: &Value) -> Effectful {
        self.inner.wrap(x, x, RevFun::identity(x.clone()).tensor(&(self.group.gmul)(a)))
    }
}

impl InverseArrow for Rewriter {
    fn name(&self) -> String {
        format!("rewriter[{}]", self.group.carrier)
    }

    delegate_stateful!();

    fn sample(&self, rng: &mut dyn RngCore, x: &ValueType, y: &ValueType) -> Effectful {
        self.inner.sample(rng, x, y)
    }
}

/// The weak error arrow `X + E <-> Y + E`.
#[derive(Clone, Debug)]
pub struct ErrorArrow {
    pub error: ValueType,
}

impl ErrorArrow {
    pub fn new(error: ValueType) -> Self {
        ErrorArrow { error }
    }

    fn wrap(&self, x: &ValueType, y: &ValueType, carrier: RevFun) -> Effectful {
        Effectful::new(x.clone(), y.clone(), carrier)
    }

    /// Checks `p f = i₁ f`, `i₂† p = p† i₂ i₂† p` and `p† p = id` exhaustively.
    pub fn check_choice(&self, f: &RevFun, p: &RevFun) -> Result<(), ArrowError> {
        let es = values_up_to_depth(&self.error, 0);
        let bad = |m: String| Err(ArrowError::ChoiceLawViolation(m));
        for x in values_up_to_depth(&f.input, 0) {
            if let EvalResult::Defined(e) = f.apply(&x) {
                if p.apply(&e) != defined(Value::inl(e.clone())) {
                    return bad(format!("p (f {x}) = {} but should be inl {e}", p.apply(&e)));
                }
            }
        }
        for e in &es {
            if let EvalResult::Defined(Value::InR(e2)) = p.apply(e) {
                if *e2 != *e {
                    return bad(format!("p {e} = inr {e2}: i2† p = {e2} but p† i2 i2† p = {e}"));
                }
            }
            if p.apply(e).defined().map(|w| p.unapply(&w)) != Some(defined(e.clone())) {
                return bad(format!("p† p is not the identity at {e}"));
            }
        }
        Ok(())
    }

    /// `raise f p = inr ∘ p† ∘ (f ⊕ id_E) : X ~> Y`.
    pub fn raise(&self, y: &ValueType, f: &RevFun, p: &RevFun) -> Result<Effectful, ArrowError> {
        self.check_choice(f, p)?;
        let e = self.error.clone();
        let into_right = RevFun::new(
            e.clone(),
            ValueType::sum(y.clone(), e.clone()),
            |v| defined(Value::inr(v.clone())),
            |v| match v {
                Value::InR(x) => defined((**x).clone()),
                _ => EvalResult::Undefined,
            },
        );
        let carrier = f.oplus(&RevFun::identity(e)).then(&p.dagger()).then(&into_right);
        Ok(self.wrap(&f.input, y, carrier))
    }

    /// The inverse of [`ErrorArrow::raise`].
    pub fn handle(&self, y: &ValueType, f: &RevFun, p: &RevFun) -> Result<Effectful, ArrowError> {
        Ok(self.inv(&self.raise(y, f, p)?))
    }
}

impl InverseArrow for ErrorArrow {
    fn name(&self) -> String {
        format!("error[{}]", self.error)
    }

    fn arr(&self, f: &RevFun) -> Effectful {
        self.wrap(&f.input, &f.output, f.oplus(&RevFun::identity(self.error.clone())))
    }

    fn seq(&self, a: &Effectful, b: &Effectful) -> Effectful {
        self.wrap(&a.input, &b.output, a.carrier.then(&b.carrier))
    }

    fn inv(&self, a: &Effectful) -> Effectful {
        self.wrap(&a.output, &a.input, a.carrier.dagger())
    }

    fn first(&self, _a: &Effectful, _z: &ValueType) -> Option<Effectful> {
        None
    }

    /// `(X + Z) + E -> (X + E) + Z`, then `a ⊕ id_Z`, then back.
    fn left(&self, a: &Effectful, z: &ValueType) -> Result<Effectful, ArrowError> {
        let e = &self.error;
        let shuffle = |x: &ValueType| {
            let c = Combinator::seq([
                Combinator::AssocRPlus,
                Combinator::sum(Combinator::Id, Combinator::SwapPlus),
                Combinator::AssocLPlus,
            ]);
            comb(
                c,
                ValueType::sum(ValueType::sum(x.clone(), z.clone()), e.clone()),
                ValueType::sum(ValueType::sum(x.clone(), e.clone()), z.clone()),
            )
        };
        let (x, y) = (&a.input, &a.output);
        let carrier = shuffle(x).then(&a.carrier.oplus(&RevFun::identity(z.clone()))).then(&shuffle(y).dagger());
        Ok(self.wrap(&ValueType::sum(x.clone(), z.clone()), &ValueType::sum(y.clone(), z.clone()), carrier))
    }

    fn sample(&self, rng: &mut dyn RngCore, x: &ValueType, y: &ValueType) -> Effectful {
        let e = &self.error;
        let f = random_fun(rng, &ValueType::sum(x.clone(), e.clone()), &ValueType::sum(y.clone(), e.clone()), 0);
        self.wrap(x, y, f)
    }
}

/// Eight bits, most significant first, as nested pairs of `1 + 1`.
pub fn byte_type() -> ValueType {
    let bit = ValueType::bool();
    (0..7).fold(bit.clone(), |acc, _| ValueType::prod(bit.clone(), acc))
}

/// Byte strings, `mu s. 1 + byte * s`.
pub fn serialized_type() -> ValueType {
    ValueType::mu("s", ValueType::sum(ValueType::One, ValueType::prod(byte_type(), ValueType::var("s"))))
}

fn byte_value(b: u8) -> Value {
    let bit = |i: u32| if b >> i & 1 == 1 { Value::inr(Value::Unit) } else { Value::inl(Value::Unit) };
    (1..8).fold(bit(0), |acc, i| Value::pair(bit(i), acc))
}

fn byte_of(v: &Value) -> Option<u8> {
    let mut out = 0u8;
    let mut cur = v;
    for i in (0..8).rev() {
        let (bit, rest) = match cur {
            Value::Pair(b, rest) if i > 0 => (&**b, Some(&**rest)),
            b if i == 0 => (b, None),
            _ => return None,
        };
        match bit {
            Value::InL(u) if **u == Value::Unit => {}
            Value::InR(u) if **u == Value::Unit => out |= 1 << i,
            _ => return None,
        }
        if let Some(r) = rest {
            cur = r;
        }
    }
    Some(out)
}

/// Encodes bytes as a value of [`serialized_type`].
pub fn encode_bytes(bytes: &[u8]) -> Value {
    bytes
        .iter()
        .rev()
        .fold(Value::fold(Value::inl(Value::Unit)), |acc, &b| Value::fold(Value::inr(Value::pair(byte_value(b), acc))))
}

pub fn decode_bytes(v: &Value) -> Option<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = v;
    loop {
        let Value::Fold(inner) = cur else { return None };
        match &**inner {
            Value::InL(u) if **u == Value::Unit => return Some(out),
            Value::InR(cell) => match &**cell {
                Value::Pair(b, rest) => {
                    out.push(byte_of(b)?);
                    cur = rest;
                }
                _ => return None,
            },
            _ => return None,
        }
    }
}

type Codec = Arc<dyn Fn(&ValueType) -> RevFun + Send + Sync>;

/// The default codec: canonical value text, as bytes. Deserialization only
/// accepts canonical text of a value of the right type.
pub fn text_codec(t: &ValueType) -> RevFun {
    let t2 = t.clone();
    RevFun::new(
        t.clone(),
        serialized_type(),
        |v| defined(encode_bytes(print_value(v).as_bytes())),
        move |s| {
            let parsed = decode_bytes(s)
                .and_then(|b| String::from_utf8(b).ok())
                .and_then(|text| parse_value(&text).ok().filter(|v| print_value(v) == text));
            match parsed {
                Some(v) if check_value(&v, &t2) == Ok(true) => defined(v),
                _ => EvalResult::Undefined,
            }
        },
    )
}

/// `X <-> Serialized Y`.
#[derive(Clone)]
pub struct Serializer {
    codec: Codec,
}

impl fmt::Debug for Serializer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Serializer")
    }
}

impl Default for Serializer {
    fn default() -> Self {
        Serializer { codec: Arc::new(text_codec) }
    }
}

impl Serializer {
    /// Uses `codec`, after checking it on every value of `types`.
    pub fn with_codec(codec: Codec, types: &[ValueType]) -> Result<Self, ArrowError> {
        for t in types {
            let c = codec(t);
            let inputs = values_up_to_depth(t, 0);
            let outputs: Vec<Value> = inputs.iter().filter_map(|v| c.apply(v).defined()).collect();
            if outputs.len() != inputs.len() {
                return Err(ArrowError::CodecNotInjective { ty: t.to_string(), detail: "not total".into() });
            }
            c.check_partial_inverse(&inputs, &outputs)
                .map_err(|detail| ArrowError::CodecNotInjective { ty: t.to_string(), detail })?;
            let mut sorted = outputs.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != outputs.len() {
                return Err(ArrowError::CodecNotInjective {
                    ty: t.to_string(),
                    detail: "two values share a serialization".into(),
                });
            }
        }
        Ok(Serializer { codec })
    }

    pub fn serialize(&self, t: &ValueType) -> RevFun {
        (self.codec)(t)
    }
}

impl InverseArrow for Serializer {
    fn name(&self) -> String {
        "serializer".into()
    }

    /// `arr f x = serialize (f x)`.
    fn arr(&self, f: &RevFun) -> Effectful {
        Effectful::new(f.input.clone(), f.output.clone(), f.then(&self.serialize(&f.output)))
    }

    /// `(a >>> b) x = b (serialize† (a x))`.
    fn seq(&self, a: &Effectful, b: &Effectful) -> Effectful {
        let carrier = a.carrier.then(&self.serialize(&a.output).dagger()).then(&b.carrier);
        Effectful::new(a.input.clone(), b.output.clone(), carrier)
    }

    /// `inv a y = serialize (a† (serialize y))`.
    fn inv(&self, a: &Effectful) -> Effectful {
        let carrier = self.serialize(&a.output).then(&a.carrier.dagger()).then(&self.serialize(&a.input));
        Effectful::new(a.output.clone(), a.input.clone(), carrier)
    }

    /// `first a (x, z) = serialize (serialize† (a x), z)`.
    fn first(&self, a: &Effectful, z: &ValueType) -> Option<Effectful> {
        let y = &a.output;
        let yz = ValueType::prod(y.clone(), z.clone());
        let inner = a.carrier.then(&self.serialize(y).dagger()).tensor(&RevFun::identity(z.clone()));
        let carrier = inner.then(&self.serialize(&yz));
        Some(Effectful::new(ValueType::prod(a.input.clone(), z.clone()), yz, carrier))
    }

    fn sample(&self, rng: &mut dyn RngCore, x: &ValueType, y: &ValueType) -> Effectful {
        self.arr(&random_fun(rng, x, y, 0))
    }
}

/// Lists as values of `mu l. 1 + x * l`.
pub fn list_value(items: impl IntoIterator<Item = Value>) -> Value {
    let items: Vec<Value> = items.into_iter().collect();
    items
        .into_iter()
        .rev()
        .fold(Value::fold(Value::inl(Value::Unit)), |acc, x| Value::fold(Value::inr(Value::pair(x, acc))))
}

pub fn list_items(v: &Value) -> Option<Vec<Value>> {
    let mut out = Vec::new();
    let mut cur = v;
    loop {
        let Value::Fold(inner) = cur else { return None };
        match &**inner {
            Value::InL(u) if **u == Value::Unit => return Some(out),
            Value::InR(cell) => match &**cell {
                Value::Pair(x, rest) => {
                    out.push((**x).clone());
                    cur = rest;
                }
                _ => return None,
            },
            _ => return None,
        }
    }
}

fn map_list(f: &Action, v: &Value) -> EvalResult {
    let Some(items) = list_items(v) else { return EvalResult::Undefined };
    let mut out = Vec::with_capacity(items.len());
    for x in &items {
        match f(x) {
            EvalResult::Defined(y) => out.push(y),
            other => return other,
        }
    }
    defined(list_value(out))
}

/// `map f : [a] <-> [b]`.
pub fn map(f: &RevFun) -> RevFun {
    let (fw, bw) = (f.forward.clone(), f.backward.clone());
    RevFun::new(
        ValueType::list(f.input.clone()),
        ValueType::list(f.output.clone()),
        move |v| map_list(&fw, v),
        move |v| map_list(&bw, v),
    )
}

/// `zip : [a] * [b] <-> [a * b]`; undefined on lists of different lengths.
pub fn zip(a: &ValueType, b: &ValueType) -> RevFun {
    RevFun::new(
        ValueType::prod(ValueType::list(a.clone()), ValueType::list(b.clone())),
        ValueType::list(ValueType::prod(a.clone(), b.clone())),
        |v| match v {
            Value::Pair(xs, ys) => match (list_items(xs), list_items(ys)) {
                (Some(xs), Some(ys)) if xs.len() == ys.len() => {
                    defined(list_value(xs.into_iter().zip(ys).map(|(x, y)| Value::pair(x, y))))
                }
                _ => EvalResult::Undefined,
            },
            _ => EvalResult::Undefined,
        },
        |v| {
            let Some(ps) = list_items(v) else { return EvalResult::Undefined };
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for p in ps {
                match p {
                    Value::Pair(x, y) => {
                        xs.push(*x);
                        ys.push(*y);
                    }
                    _ => return EvalResult::Undefined,
                }
            }
            defined(Value::pair(list_value(xs), list_value(ys)))
        },
    )
}

/// Length-preserving list transformations `[X] <-> [Y]`.
#[derive(Clone, Debug)]
pub struct Vector {
    /// Longest list used by [`InverseArrow::sample`].
    pub max_len: usize,
}

impl Default for Vector {
    fn default() -> Self {
        Vector { max_len: 3 }
    }
}

impl Vector {
    fn wrap(&self, x: &ValueType, y: &ValueType, carrier: RevFun) -> Effectful {
        Effectful::new(x.clone(), y.clone(), carrier)
    }

    /// All lists over `elems` of exactly length `n`.
    fn lists_of_len(elems: &[Value], n: usize) -> Vec<Value> {
        let mut acc: Vec<Vec<Value>> = vec![vec![]];
        for _ in 0..n {
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    elems.iter().map(move |e| {
                        let mut p = prefix.clone();
                        p.push(e.clone());
                        p
                    })
                })
                .collect();
        }
        acc.into_iter().map(list_value).collect()
    }
}

impl InverseArrow for Vector {
    fn name(&self) -> String {
        "vector".into()
    }

    fn arr(&self, f: &RevFun) -> Effectful {
        self.wrap(&f.input, &f.output, map(f))
    }

    fn seq(&self, a: &Effectful, b: &Effectful) -> Effectful {
        self.wrap(&a.input, &b.output, a.carrier.then(&b.carrier))
    }

    fn inv(&self, a: &Effectful) -> Effectful {
        self.wrap(&a.output, &a.input, a.carrier.dagger())
    }

    /// `first a ps = let (xs, zs) = zip† ps in zip (a xs, zs)`.
    fn first(&self, a: &Effectful, z: &ValueType) -> Option<Effectful> {
        let (x, y) = (&a.input, &a.output);
        let carrier =
            zip(x, z).dagger().then(&a.carrier.tensor(&RevFun::identity(ValueType::list(z.clone())))).then(&zip(y, z));
        Some(self.wrap(&ValueType::prod(x.clone(), z.clone()), &ValueType::prod(y.clone(), z.clone()), carrier))
    }

    fn sample(&self, rng: &mut dyn RngCore, x: &ValueType, y: &ValueType) -> Effectful {
        let xs = values_up_to_depth(x, 0);
        let ys = values_up_to_depth(y, 0);
        let mut pairs = Vec::new();
        for n in 0..=self.max_len {
            let ins = Vector::lists_of_len(&xs, n);
            let outs = Vector::lists_of_len(&ys, n);
            let f = RevFun::random(rng, ValueType::list(x.clone()), ValueType::list(y.clone()), &ins, &outs, 0.9);
            pairs.extend(ins.iter().filter_map(|v| f.apply(v).defined().map(|w| (v.clone(), w))));
        }
        let carrier = RevFun::from_pairs(ValueType::list(x.clone()), ValueType::list(y.clone()), pairs)
            .expect("length blocks are disjoint");
        self.wrap(x, y, carrier)
    }

    /// Lists up to `max_len` elements.
    fn mu_depth(&self) -> usize {
        self.max_len + 1
    }
}

/// Wraps an instance but replaces `inv` by the identity. Only type-correct
/// when inputs and outputs agree; used to validate the law harness.
#[derive(Clone, Debug)]
pub struct Broken<A>(pub A);

impl<A: InverseArrow> InverseArrow for Broken<A> {
    fn name(&self) -> String {
        format!("broken({})", self.0.name())
    }

    fn arr(&self, f: &RevFun) -> Effectful {
        self.0.arr(f)
    }

    fn seq(&self, a: &Effectful, b: &Effectful) -> Effectful {
        self.0.seq(a, b)
    }

    fn inv(&self, a: &Effectful) -> Effectful {
        Effectful::new(a.output.clone(), a.input.clone(), a.carrier.clone())
    }

    fn first(&self, a: &Effectful, z: &ValueType) -> Option<Effectful> {
        self.0.first(a, z)
    }

    fn sample(&self, rng: &mut dyn RngCore, x: &ValueType, y: &ValueType) -> Effectful {
        self.0.sample(rng, x, y)
    }

    fn mu_depth(&self) -> usize {
        self.0.mu_depth()
    }
}

/// Types and sampling budget for [`check_laws`].
#[derive(Clone, Debug)]
pub struct LawConfig {
    pub x: ValueType,
    pub y: ValueType,
    pub z: ValueType,
    /// Extra component for the associativity law of `first`.
    pub v: ValueType,
    /// Random arrows drawn per law.
    pub trials: usize,
    /// At most this many inputs are compared per instance of a law.
    pub max_inputs: usize,
    pub seed: u64,
}

impl LawConfig {
    /// All types `1 + ... + 1` with `n` elements.
    pub fn uniform(n: usize) -> Self {
        LawConfig {
            x: sized_type(n),
            y: sized_type(n),
            z: sized_type(n),
            v: sized_type(2),
            trials: 8,
            max_inputs: 20_000,
            seed: 0x5eed,
        }
    }
}

/// Every law name checked by [`check_laws`], in report order.
pub const LAW_NAMES: [&str; 14] = [
    "arrow1",
    "arrow2",
    "arrow3",
    "arrow4",
    "arrow5",
    "arrow6",
    "arrow7",
    "arrow8",
    "daggerarrow1",
    "daggerarrow2",
    "daggerarrow3",
    "daggerarrow4",
    "inversearrow1",
    "inversearrow2",
];

struct Harness<'a> {
    inst: &'a dyn InverseArrow,
    cfg: &'a LawConfig,
    rng: ChaCha8Rng,
}

impl Harness<'_> {
    fn pure(&mut self, x: &ValueType, y: &ValueType) -> RevFun {
        random_fun(&mut self.rng, x, y, self.inst.mu_depth())
    }

    fn arrow(&mut self, x: &ValueType, y: &ValueType) -> Effectful {
        self.inst.sample(&mut self.rng, x, y)
    }

    /// Pointwise comparison over the carrier inputs of `lhs`.
    fn compare(&mut self, check: &mut LawCheck, lhs: &Effectful, rhs: &Effectful, context: &str) {
        let mut inputs = self.inst.inputs(&lhs.carrier.input);
        if inputs.len() > self.cfg.max_inputs {
            inputs.shuffle(&mut self.rng);
            inputs.truncate(self.cfg.max_inputs);
        }
        for v in &inputs {
            let (l, r) = (lhs.run(v), rhs.run(v));
            check.record(l == r, || format!("{context}input {v}: lhs {l}, rhs {r}"));
            if check.failed() {
                return;
            }
        }
    }

    fn law(
        &mut self,
        name: &str,
        mut instance: impl FnMut(&mut Self) -> Option<(Effectful, Effectful, String)>,
    ) -> LawResult {
        let mut check = LawCheck::new(name);
        for _ in 0..self.cfg.trials {
            match instance(self) {
                Some((lhs, rhs, ctx)) => self.compare(&mut check, &lhs, &rhs, &ctx),
                None => return LawResult::not_applicable(name),
            }
            if check.failed() {
                break;
            }
        }
        check.finish()
    }
}

/// Checks the arrow, dagger arrow and inverse arrow laws, plus `left` laws
/// where supported, by exhaustive pointwise comparison on random arrows.
pub fn check_laws(inst: &dyn InverseArrow, cfg: &LawConfig) -> LawReport {
    let mut h = Harness { inst, cfg, rng: ChaCha8Rng::seed_from_u64(cfg.seed) };
    let (x, y, z, v) = (&cfg.x, &cfg.y, &cfg.z, &cfg.v);
    let one = ValueType::One;
    let mut report = LawReport::new(format!("{} laws at X = {x}, Y = {y}, Z = {z}", inst.name()));

    report.push(h.law("arrow1", |h| {
        let (a, b, c) = (h.arrow(x, y), h.arrow(y, z), h.arrow(z, x));
        let lhs = inst.seq(&inst.seq(&a, &b), &c);
        let rhs = inst.seq(&a, &inst.seq(&b, &c));
        Some((lhs, rhs, String::new()))
    }));
    report.push(h.law("arrow2", |h| {
        let (f, g) = (h.pure(x, y), h.pure(y, z));
        Some((inst.arr(&f.then(&g)), inst.seq(&inst.arr(&f), &inst.arr(&g)), String::new()))
    }));
    report.push(h.law("arrow3", |h| {
        let a = h.arrow(x, y);
        let left = inst.seq(&inst.arr(&RevFun::identity(x.clone())), &a);
        let right = inst.seq(&a, &inst.arr(&RevFun::identity(y.clone())));
        // both unit laws: compare each side against a
        let mut check = LawCheck::new("");
        h.compare(&mut check, &left, &a, "");
        if check.failed() {
            return Some((left, a, "left unit: ".into()));
        }
        Some((right, a, "right unit: ".into()))
    }));
    report.push(h.law("arrow4", |h| {
        let a = h.arrow(x, y);
        let lhs = inst.seq(&inst.first(&a, &one)?, &inst.arr(&right_unit(y)));
        let rhs = inst.seq(&inst.arr(&right_unit(x)), &a);
        Some((lhs, rhs, String::new()))
    }));
    report.push(h.law("arrow5", |h| {
        let a = h.arrow(x, y);
        let f = h.pure(z, v);
        let lhs = inst.seq(&inst.first(&a, z)?, &inst.arr(&RevFun::identity(y.clone()).tensor(&f)));
        let rhs = inst.seq(&inst.arr(&RevFun::identity(x.clone()).tensor(&f)), &inst.first(&a, v)?);
        Some((lhs, rhs, String::new()))
    }));
    report.push(h.law("arrow6", |h| {
        let a = h.arrow(x, y);
        let zv = ValueType::prod(z.clone(), v.clone());
        let lhs = inst.seq(&inst.first(&a, &zv)?, &inst.arr(&assoc_times(y, z, v)));
        let rhs = inst.seq(&inst.arr(&assoc_times(x, z, v)), &inst.first(&inst.first(&a, z)?, v)?);
        Some((lhs, rhs, String::new()))
    }));
    report.push(h.law("arrow7", |h| {
        let f = h.pure(x, y);
        let lhs = inst.first(&inst.arr(&f), z)?;
        let rhs = inst.arr(&f.tensor(&RevFun::identity(z.clone())));
        Some((lhs, rhs, String::new()))
    }));
    report.push(h.law("arrow8", |h| {
        let (a, b) = (h.arrow(x, y), h.arrow(y, z));
        let lhs = inst.first(&inst.seq(&a, &b), v)?;
        let rhs = inst.seq(&inst.first(&a, v)?, &inst.first(&b, v)?);
        Some((lhs, rhs, String::new()))
    }));
    report.push(h.law("daggerarrow1", |h| {
        let a = h.arrow(x, y);
        Some((inst.inv(&inst.inv(&a)), a, String::new()))
    }));
    report.push(h.law("daggerarrow2", |h| {
        let (a, b) = (h.arrow(x, y), h.arrow(z, x));
        let lhs = inst.seq(&inst.inv(&a), &inst.inv(&b));
        let rhs = inst.inv(&inst.seq(&b, &a));
        Some((lhs, rhs, String::new()))
    }));
    report.push(h.law("daggerarrow3", |h| {
        let f = h.pure(x, y);
        Some((inst.arr(&f.dagger()), inst.inv(&inst.arr(&f)), format!("f = {}: ", describe(&f, inst.mu_depth()))))
    }));
    report.push(h.law("daggerarrow4", |h| {
        let a = h.arrow(x, y);
        let lhs = inst.inv(&inst.first(&a, z)?);
        let rhs = inst.first(&inst.inv(&a), z)?;
        Some((lhs, rhs, String::new()))
    }));
    report.push(h.law("inversearrow1", |h| {
        let a = h.arrow(x, y);
        let lhs = inst.seq(&inst.seq(&a, &inst.inv(&a)), &a);
        Some((lhs, a, String::new()))
    }));
    report.push(h.law("inversearrow2", |h| {
        let (a, b) = (h.arrow(x, y), h.arrow(x, z));
        let pa = inst.seq(&a, &inst.inv(&a));
        let pb = inst.seq(&b, &inst.inv(&b));
        Some((inst.seq(&pa, &pb), inst.seq(&pb, &pa), String::new()))
    }));

    let supports_left = inst.left(&inst.arr(&RevFun::identity(x.clone())), z).is_ok();
    report.push(h.law("left-arr", |h| {
        if !supports_left {
            return None;
        }
        let f = h.pure(x, y);
        let lhs = inst.left(&inst.arr(&f), z).ok()?;
        let rhs = inst.arr(&f.oplus(&RevFun::identity(z.clone())));
        Some((lhs, rhs, String::new()))
    }));
    report.push(h.law("left-seq", |h| {
        if !supports_left {
            return None;
        }
        let (a, b) = (h.arrow(x, y), h.arrow(y, x));
        let lhs = inst.left(&inst.seq(&a, &b), z).ok()?;
        let rhs = inst.seq(&inst.left(&a, z).ok()?, &inst.left(&b, z).ok()?);
        Some((lhs, rhs, String::new()))
    }));
    report
}

/// The graph of `f` on its enumerable inputs, for counterexamples.
fn describe(f: &RevFun, depth: usize) -> String {
    let pairs: Vec<String> = values_up_to_depth(&f.input, depth)
        .iter()
        .filter_map(|v| f.apply(v).defined().map(|w| format!("{v} -> {w}")))
        .collect();
    format!("{{{}}}", pairs.join(", "))
}

/// Instances by command-line name.
pub fn instance_by_name(name: &str) -> Option<Box<dyn InverseArrow>> {
    let bit = ValueType::bool();
    Some(match name {
        "pure" => Box::new(Pure),
        "rstate" => Box::new(RState::new(bit)),
        "reader" => Box::new(Reader::new(bit)),
        "rewriter" => Box::new(Rewriter::new(GroupSpec::cyclic(2).expect("Z/2"))),
        "error" => Box::new(ErrorArrow::new(bit)),
        "serializer" => Box::new(Serializer::default()),
        "vector" => Box::new(Vector::default()),
        "broken" => Box::new(Broken(Pure)),
        _ => return None,
    })
}

pub const INSTANCE_NAMES: [&str; 8] =
    ["pure", "rstate", "reader", "rewriter", "error", "serializer", "vector", "broken"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    fn bit() -> ValueType {
        ValueType::bool()
    }

    fn u() -> Value {
        Value::Unit
    }

    fn swap() -> RevFun {
        comb(Combinator::SwapPlus, bit(), bit())
    }

    fn tt() -> Value {
        Value::inl(u())
    }

    fn ff() -> Value {
        Value::inr(u())
    }

    #[test]
    fn revfun_tables_reject_collisions() {
        let r = RevFun::from_pairs(bit(), bit(), [(tt(), tt()), (ff(), tt())]);
        assert!(matches!(r, Err(ArrowError::NotInjective(_))));
    }

    #[test]
    fn pure_inverse_is_backward() {
        let f = RevFun::from_pairs(bit(), sized_type(3), [(tt(), sized_value(3, 2))]).unwrap();
        let inv = Pure.inv(&Pure.arr(&f));
        assert_eq!(inv.run(&sized_value(3, 2)), defined(tt()));
        assert_eq!(inv.run(&sized_value(3, 0)), EvalResult::Undefined);
    }

    #[test]
    fn second_matches_its_definition() {
        let a = Pure.arr(&swap());
        let s = Pure.second(&a, &ValueType::One).unwrap();
        assert_eq!(s.run(&Value::pair(u(), tt())), defined(Value::pair(u(), ff())));
    }

    #[test]
    fn rstate_get_assert_and_update() {
        let st = RState::new(bit());
        let x = ValueType::One;
        let roundtrip = st.inner.seq(&st.get(&x), &st.assert(&x));
        for s in [tt(), ff()] {
            let v = Value::pair(u(), s.clone());
            assert_eq!(roundtrip.run(&v), defined(v.clone()));
        }
        let twice = st.inner.seq(&st.update(&x, &swap()), &st.update(&x, &swap()));
        for s in [tt(), ff()] {
            let v = Value::pair(u(), s);
            assert_eq!(twice.run(&v), defined(v.clone()));
        }
        let mismatched = Value::pair(Value::pair(u(), ff()), tt());
        assert_eq!(st.assert(&x).run(&mismatched), EvalResult::Undefined);
    }

    #[test]
    fn reader_invariance() {
        let r = Reader::new(bit());
        let x = bit();
        let samples = values_up_to_depth(&ValueType::prod(x.clone(), bit()), 0);
        assert_eq!(r.check_invariance(&r.arr(&swap()), &samples), Ok(4));
        let gs = values_up_to_depth(&ValueType::prod(x.clone(), bit()), 0);
        assert!(r.check_invariance(&r.get(&x), &gs).is_ok());
        let smuggled = RState::new(bit()).update(&x, &swap());
        let err = r.check_invariance(&smuggled, &samples).unwrap_err();
        assert_eq!(
            err,
            ArrowError::InvarianceViolation { input: "(inl (), inl ())".into(), output: "(inl (), inr ())".into() }
        );
    }

    #[test]
    fn rewriter_over_z2() {
        let rw = Rewriter::new(GroupSpec::cyclic(2).unwrap());
        let x = bit();
        let one = sized_value(2, 1);
        let twice = rw.seq(&rw.rewrite(&x, &one), &rw.rewrite(&x, &one));
        let unit = rw.rewrite(&x, &rw.group().gunit.clone());
        let undo = rw.seq(&rw.rewrite(&x, &one), &rw.inv(&rw.rewrite(&x, &one)));
        for v in values_up_to_depth(&ValueType::prod(x.clone(), bit()), 0) {
            assert_eq!(twice.run(&v), defined(v.clone()));
            assert_eq!(unit.run(&v), defined(v.clone()));
            assert_eq!(undo.run(&v), defined(v.clone()));
        }
    }

    #[test]
    fn rewrite_inverse_is_rewrite_by_inverse() {
        let rw = Rewriter::new(GroupSpec::cyclic(3).unwrap());
        let x = ValueType::One;
        for a in 0..3 {
            let av = sized_value(3, a);
            let ia = rw.group().ginv.apply(&av).defined().unwrap();
            let lhs = rw.inv(&rw.rewrite(&x, &av));
            let rhs = rw.rewrite(&x, &ia);
            for v in values_up_to_depth(&ValueType::prod(x.clone(), sized_type(3)), 0) {
                assert_eq!(lhs.run(&v), rhs.run(&v));
            }
        }
    }

    #[test]
    fn broken_group_is_rejected() {
        let t = bit();
        let gmul: GroupMul = Arc::new(|_: &Value| swap());
        let err = GroupSpec::new(t.clone(), tt(), gmul, RevFun::identity(t)).unwrap_err();
        assert!(matches!(err, ArrowError::GroupLawViolation(_)));
    }

    /// Errors are `1 + 1 + 1`; the failing input is the middle value.
    fn error_setup() -> (ErrorArrow, RevFun, RevFun) {
        let e = sized_type(3);
        let ea = ErrorArrow::new(e.clone());
        let f = RevFun::from_pairs(bit(), e.clone(), [(ff(), sized_value(3, 1))]).unwrap();
        // p claims error 1 as its own
        let p = RevFun::from_pairs(
            e.clone(),
            ValueType::sum(e.clone(), e.clone()),
            (0..3).map(|i| {
                let v = sized_value(3, i);
                (v.clone(), if i == 1 { Value::inl(v) } else { Value::inr(v) })
            }),
        )
        .unwrap();
        (ea, f, p)
    }

    #[test]
    fn error_arrow_propagates_and_raises() {
        let (ea, f, p) = error_setup();
        let e2 = Value::inr(sized_value(3, 2));
        assert_eq!(ea.arr(&swap()).run(&e2), defined(e2.clone()));
        let raise = ea.raise(&bit(), &f, &p).unwrap();
        assert_eq!(raise.run(&Value::inl(ff())), defined(Value::inr(sized_value(3, 1))));
        assert_eq!(raise.run(&Value::inl(tt())), EvalResult::Undefined);
        let handle = ea.handle(&bit(), &f, &p).unwrap();
        let there_and_back = ea.seq(&raise, &handle);
        for v in values_up_to_depth(&ValueType::sum(bit(), sized_type(3)), 0) {
            if raise.run(&v).is_defined() {
                assert_eq!(there_and_back.run(&v), defined(v.clone()));
            }
        }
    }

    #[test]
    fn choice_laws_are_enforced() {
        let (ea, f, _) = error_setup();
        let e = sized_type(3);
        // p† p = id fails: p is undefined on error 2
        let p = RevFun::from_pairs(
            e.clone(),
            ValueType::sum(e.clone(), e.clone()),
            [(sized_value(3, 0), Value::inr(sized_value(3, 0))), (sized_value(3, 1), Value::inl(sized_value(3, 1)))],
        )
        .unwrap();
        assert!(matches!(ea.raise(&bit(), &f, &p), Err(ArrowError::ChoiceLawViolation(_))));
        // i2† p = p† i2 i2† p fails: p moves error 0 to inr 2
        let p = RevFun::from_pairs(
            e.clone(),
            ValueType::sum(e.clone(), e.clone()),
            [
                (sized_value(3, 0), Value::inr(sized_value(3, 2))),
                (sized_value(3, 1), Value::inl(sized_value(3, 1))),
                (sized_value(3, 2), Value::inr(sized_value(3, 0))),
            ],
        )
        .unwrap();
        assert!(matches!(ea.raise(&bit(), &f, &p), Err(ArrowError::ChoiceLawViolation(_))));
    }

    #[test]
    fn serializer_round_trip_and_whitespace() {
        let s = Serializer::default();
        let t = ValueType::prod(bit(), bit());
        let ser = s.serialize(&t);
        for v in values_up_to_depth(&t, 0) {
            let bytes = ser.apply(&v).defined().unwrap();
            assert_eq!(decode_bytes(&bytes).unwrap(), print_value(&v).into_bytes());
            assert_eq!(ser.unapply(&bytes), defined(v));
        }
        let spaced = encode_bytes(b"(inl (),  inr ())");
        assert_eq!(ser.unapply(&spaced), EvalResult::Undefined);
        let canonical = encode_bytes(b"(inl (), inr ())");
        assert_eq!(ser.unapply(&canonical), defined(Value::pair(tt(), ff())));
        let wrong_type = encode_bytes(b"()");
        assert_eq!(ser.unapply(&wrong_type), EvalResult::Undefined);
        // arr id is serialize
        let arr_id = s.arr(&RevFun::identity(t.clone()));
        for v in values_up_to_depth(&t, 0) {
            assert_eq!(arr_id.run(&v), ser.apply(&v));
        }
    }

    #[test]
    fn bad_codec_is_rejected() {
        let codec: Codec = Arc::new(|t: &ValueType| {
            RevFun::new(t.clone(), serialized_type(), |_| defined(encode_bytes(b"x")), |_| EvalResult::Undefined)
        });
        let err = Serializer::with_codec(codec, &[bit()]).unwrap_err();
        assert!(matches!(err, ArrowError::CodecNotInjective { .. }));
        assert!(Serializer::with_codec(Arc::new(text_codec), &[bit(), sized_type(3)]).is_ok());
    }

    #[test]
    fn vector_map_zip_and_first() {
        let v = Vector::default();
        let xs = list_value([tt(), ff()]);
        assert_eq!(v.arr(&swap()).run(&xs), defined(list_value([ff(), tt()])));
        let z = zip(&bit(), &bit());
        let pair = Value::pair(xs.clone(), list_value([ff(), ff()]));
        let zipped = z.apply(&pair).defined().unwrap();
        assert_eq!(z.unapply(&zipped), defined(pair));
        assert_eq!(z.apply(&Value::pair(xs.clone(), list_value([ff()]))), EvalResult::Undefined);
        // an arrow that drops the head changes the length
        let drop_head = RevFun::new(
            ValueType::list(bit()),
            ValueType::list(bit()),
            |v| match list_items(v) {
                Some(items) if items.first() == Some(&Value::inl(Value::Unit)) => {
                    defined(list_value(items[1..].to_vec()))
                }
                _ => EvalResult::Undefined,
            },
            |v| match list_items(v) {
                Some(items) => defined(list_value(std::iter::once(Value::inl(Value::Unit)).chain(items))),
                None => EvalResult::Undefined,
            },
        );
        let a = Effectful::new(bit(), bit(), drop_head);
        let first = v.first(&a, &bit()).unwrap();
        let ps = list_value([Value::pair(tt(), tt()), Value::pair(ff(), tt())]);
        assert_eq!(first.run(&ps), EvalResult::Undefined);
    }

    #[test]
    fn left_routes_by_tag() {
        let z = ValueType::One;
        let a = Pure.arr(&swap());
        let l = Pure.left(&a, &z).unwrap();
        assert_eq!(l.run(&Value::inr(u())), defined(Value::inr(u())));
        assert_eq!(l.run(&Value::inl(tt())), defined(Value::inl(ff())));
        assert!(matches!(Serializer::default().left(&a, &z), Err(ArrowError::NotSupported { .. })));
    }

    #[test]
    fn pure_passes_all_laws() {
        let r = check_laws(&Pure, &LawConfig::uniform(3));
        assert!(r.passed(), "{r}");
        assert!(r.results.iter().all(|l| l.status == Status::Pass), "{r}");
    }

    #[test]
    fn broken_instance_fails_daggerarrow3() {
        let r = check_laws(&Broken(Pure), &LawConfig::uniform(3));
        let d3 = r.get("daggerarrow3").unwrap();
        assert_eq!(d3.status, Status::Fail, "{r}");
        assert!(d3.counterexample.is_some());
    }

    #[test]
    fn error_is_weak() {
        let ea = ErrorArrow::new(bit());
        assert!(ea.is_weak());
        let r = check_laws(&ea, &LawConfig::uniform(2));
        assert!(r.passed(), "{r}");
        for law in ["arrow4", "arrow5", "arrow6", "arrow7", "arrow8", "daggerarrow4"] {
            assert_eq!(r.get(law).unwrap().status, Status::NotApplicable);
        }
        assert_eq!(r.get("left-seq").unwrap().status, Status::Pass);
    }
}
