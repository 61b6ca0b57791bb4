//! Partial functions and partial injections between finite sets.
//!
//! Elements of a finite set are dense indices `0..size`. Sums put the left
//! block first; products are row-major, `(i, j) ↦ i * |B| + j`. Under this
//! encoding a closed value type denotes the set of its values in the order
//! produced by [`crate::interp::values_of`].

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::interp::values_of;
use crate::report::{LawCheck, LawReport};
use crate::syntax::{Combinator, Value, ValueType};
use crate::typecheck::{derive, CombinatorType, Derivation, TypeError};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PinjError {
    #[error("shape mismatch in {op}: {detail}")]
    ShapeMismatch { op: &'static str, detail: String },
    #[error("index {index} out of range for a set of size {size}")]
    OutOfRange { index: usize, size: usize },
    #[error("map is not injective: {a} and {b} both go to {target}")]
    NotInjective { a: usize, b: usize, target: usize },
    #[error("labels are not distinct: `{0}`")]
    DuplicateLabel(String),
    #[error("type `{0}` mentions a recursive type")]
    HasMu(String),
    #[error("no size given for type variable `{0}`")]
    UnboundVariable(String),
    #[error(transparent)]
    Type(#[from] TypeError),
}

fn mismatch(op: &'static str, detail: String) -> PinjError {
    PinjError::ShapeMismatch { op, detail }
}

/// A finite set `{0, ..., size-1}` with optional element labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FinSet {
    size: usize,
    labels: Option<Vec<String>>,
}

impl FinSet {
    pub fn new(size: usize) -> Self {
        FinSet { size, labels: None }
    }

    pub fn labelled(labels: Vec<String>) -> Result<Self, PinjError> {
        let mut sorted = labels.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(PinjError::DuplicateLabel(w[0].clone()));
        }
        Ok(FinSet { size: labels.len(), labels: Some(labels) })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(ls) => ls[i].clone(),
            None => i.to_string(),
        }
    }
}

/// A partial function, stored as its graph: `map[i]` is the image of `i`.
#[derive(Clone, Debug, Eq)]
pub struct PartialFunction {
    dom: FinSet,
    cod: FinSet,
    map: Vec<Option<usize>>,
}

impl PartialEq for PartialFunction {
    fn eq(&self, other: &Self) -> bool {
        self.dom.size == other.dom.size && self.cod.size == other.cod.size && self.map == other.map
    }
}

impl std::hash::Hash for PartialFunction {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.dom.size, self.cod.size, &self.map).hash(state);
    }
}

impl PartialFunction {
    pub fn new(dom: usize, cod: usize, map: Vec<Option<usize>>) -> Result<Self, PinjError> {
        if map.len() != dom {
            return Err(mismatch("new", format!("{} entries for a domain of size {dom}", map.len())));
        }
        if let Some(&bad) = map.iter().flatten().find(|&&j| j >= cod) {
            return Err(PinjError::OutOfRange { index: bad, size: cod });
        }
        Ok(PartialFunction { dom: FinSet::new(dom), cod: FinSet::new(cod), map })
    }

    pub fn from_pairs(dom: usize, cod: usize, pairs: &[(usize, usize)]) -> Result<Self, PinjError> {
        let mut map = vec![None; dom];
        for &(i, j) in pairs {
            if i >= dom {
                return Err(PinjError::OutOfRange { index: i, size: dom });
            }
            if map[i].is_some() {
                return Err(mismatch("from_pairs", format!("{i} has two images")));
            }
            map[i] = Some(j);
        }
        PartialFunction::new(dom, cod, map)
    }

    pub fn with_sets(mut self, dom: FinSet, cod: FinSet) -> Result<Self, PinjError> {
        if dom.size != self.dom.size || cod.size != self.cod.size {
            return Err(mismatch("with_sets", "sizes differ".into()));
        }
        self.dom = dom;
        self.cod = cod;
        Ok(self)
    }

    pub fn identity(n: usize) -> Self {
        PartialFunction { dom: FinSet::new(n), cod: FinSet::new(n), map: (0..n).map(Some).collect() }
    }

    pub fn empty(dom: usize, cod: usize) -> Self {
        PartialFunction { dom: FinSet::new(dom), cod: FinSet::new(cod), map: vec![None; dom] }
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn apply(&self, i: usize) -> Option<usize> {
        self.map.get(i).copied().flatten()
    }

    pub fn graph(&self) -> Vec<(usize, usize)> {
        self.map.iter().enumerate().filter_map(|(i, j)| j.map(|j| (i, j))).collect()
    }

    pub fn is_total(&self) -> bool {
        self.map.iter().all(Option::is_some)
    }

    pub fn is_injective(&self) -> bool {
        self.injectivity_witness().is_none()
    }

    fn injectivity_witness(&self) -> Option<(usize, usize, usize)> {
        let mut seen = vec![None; self.cod.size];
        for (i, j) in self.graph() {
            if let Some(prev) = seen[j] {
                return Some((prev, i, j));
            }
            seen[j] = Some(i);
        }
        None
    }

    /// `self ; next`, i.e. `next ∘ self`.
    pub fn then(&self, next: &PartialFunction) -> Result<Self, PinjError> {
        if self.cod.size != next.dom.size {
            return Err(mismatch("compose", format!("codomain {} vs domain {}", self.cod.size, next.dom.size)));
        }
        let map = self.map.iter().map(|j| j.and_then(|j| next.map[j])).collect();
        Ok(PartialFunction { dom: self.dom.clone(), cod: next.cod.clone(), map })
    }

    /// Acts on the disjoint union, left block first.
    pub fn oplus(&self, g: &PartialFunction) -> Self {
        let (n, m) = (self.cod.size, self.dom.size);
        let mut map = self.map.clone();
        map.extend(g.map.iter().map(|j| j.map(|j| j + n)));
        PartialFunction { dom: FinSet::new(m + g.dom.size), cod: FinSet::new(n + g.cod.size), map }
    }

    /// Acts on the product, row-major.
    pub fn otimes(&self, g: &PartialFunction) -> Self {
        let (gd, gc) = (g.dom.size, g.cod.size);
        let mut map = Vec::with_capacity(self.dom.size * gd);
        for i in 0..self.dom.size {
            for j in 0..gd {
                map.push(match (self.map[i], g.map[j]) {
                    (Some(a), Some(b)) => Some(a * gc + b),
                    _ => None,
                });
            }
        }
        PartialFunction { dom: FinSet::new(self.dom.size * gd), cod: FinSet::new(self.cod.size * gc), map }
    }

    /// The trace over `U` of `f: A ⊕ U → B ⊕ U`, where `|A| = split_a` and
    /// `|B| = split_b`. Each `a` follows its orbit through `U` for at most
    /// `|U| + 1` steps; revisiting a state or an undefined step leaves `a`
    /// outside the domain.
    pub fn trace(&self, split_a: usize, split_b: usize) -> Result<Self, PinjError> {
        if split_a > self.dom.size || split_b > self.cod.size {
            return Err(mismatch("trace", "split exceeds the set".into()));
        }
        let u = self.dom.size - split_a;
        if self.cod.size - split_b != u {
            return Err(mismatch("trace", format!("loop sizes differ: {} vs {}", u, self.cod.size - split_b)));
        }
        let map = (0..split_a)
            .map(|a| {
                let mut state = a;
                for _ in 0..=u {
                    match self.map[state] {
                        None => return None,
                        Some(y) if y < split_b => return Some(y),
                        Some(y) => state = split_a + (y - split_b),
                    }
                }
                None
            })
            .collect();
        Ok(PartialFunction { dom: FinSet::new(split_a), cod: FinSet::new(split_b), map })
    }

    /// The relational converse, if it is a function.
    pub fn converse(&self) -> Option<Self> {
        if !self.is_injective() {
            return None;
        }
        let mut map = vec![None; self.cod.size];
        for (i, j) in self.graph() {
            map[j] = Some(i);
        }
        Some(PartialFunction { dom: self.cod.clone(), cod: self.dom.clone(), map })
    }

    /// Uniformly random total function.
    pub fn random_total(rng: &mut impl Rng, dom: usize, cod: usize) -> Self {
        let map = (0..dom).map(|_| if cod == 0 { None } else { Some(rng.gen_range(0..cod)) });
        PartialFunction::new(dom, cod, map.collect()).unwrap()
    }

    /// Random partial function; each point is defined with probability `density`.
    pub fn random(rng: &mut impl Rng, dom: usize, cod: usize, density: f64) -> Self {
        let map = (0..dom).map(|_| (cod > 0 && rng.gen_bool(density)).then(|| rng.gen_range(0..cod))).collect();
        PartialFunction::new(dom, cod, map).unwrap()
    }
}

impl fmt::Display for PartialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> =
            self.graph().into_iter().map(|(i, j)| format!("{}->{}", self.dom.label(i), self.cod.label(j))).collect();
        write!(f, "{} -> {} {{{}}}", self.dom.size, self.cod.size, pairs.join(", "))
    }
}

/// A partial function that is injective on its domain of definition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialInjection(PartialFunction);

impl PartialInjection {
    pub fn new(f: PartialFunction) -> Result<Self, PinjError> {
        match f.injectivity_witness() {
            Some((a, b, target)) => Err(PinjError::NotInjective { a, b, target }),
            None => Ok(PartialInjection(f)),
        }
    }

    pub fn from_pairs(dom: usize, cod: usize, pairs: &[(usize, usize)]) -> Result<Self, PinjError> {
        PartialInjection::new(PartialFunction::from_pairs(dom, cod, pairs)?)
    }

    pub fn identity(n: usize) -> Self {
        PartialInjection(PartialFunction::identity(n))
    }

    pub fn empty(dom: usize, cod: usize) -> Self {
        PartialInjection(PartialFunction::empty(dom, cod))
    }

    /// The permutation `i ↦ perm[i]`.
    pub fn permutation(perm: &[usize]) -> Result<Self, PinjError> {
        let n = perm.len();
        PartialInjection::new(PartialFunction::new(n, n, perm.iter().map(|&j| Some(j)).collect())?)
    }

    pub fn as_function(&self) -> &PartialFunction {
        &self.0
    }

    pub fn into_function(self) -> PartialFunction {
        self.0
    }

    pub fn dom_size(&self) -> usize {
        self.0.dom.size
    }

    pub fn cod_size(&self) -> usize {
        self.0.cod.size
    }

    pub fn apply(&self, i: usize) -> Option<usize> {
        self.0.apply(i)
    }

    pub fn graph(&self) -> Vec<(usize, usize)> {
        self.0.graph()
    }

    pub fn dagger(&self) -> Self {
        PartialInjection(self.0.converse().expect("injective by construction"))
    }

    pub fn then(&self, next: &PartialInjection) -> Result<Self, PinjError> {
        Ok(PartialInjection(self.0.then(&next.0)?))
    }

    pub fn oplus(&self, g: &PartialInjection) -> Self {
        PartialInjection(self.0.oplus(&g.0))
    }

    pub fn otimes(&self, g: &PartialInjection) -> Self {
        PartialInjection(self.0.otimes(&g.0))
    }

    pub fn trace(&self, split_a: usize, split_b: usize) -> Result<Self, PinjError> {
        let t = self.0.trace(split_a, split_b)?;
        debug_assert!(t.is_injective());
        Ok(PartialInjection(t))
    }

    /// `σ: A ⊕ B → B ⊕ A`.
    pub fn swap_plus(a: usize, b: usize) -> Self {
        let map = (0..a + b).map(|i| Some(if i < a { b + i } else { i - a })).collect();
        PartialInjection(PartialFunction::new(a + b, a + b, map).unwrap())
    }

    /// `σ: A ⊗ B → B ⊗ A`.
    pub fn swap_times(a: usize, b: usize) -> Self {
        let map = (0..a * b).map(|k| Some((k % b) * a + k / b)).collect();
        PartialInjection(PartialFunction::new(a * b, a * b, map).unwrap())
    }

    /// A random partial injection; each point is kept with probability
    /// `density` (as far as the codomain allows).
    pub fn random(rng: &mut impl Rng, dom: usize, cod: usize, density: f64) -> Self {
        let mut targets: Vec<usize> = (0..cod).collect();
        targets.shuffle(rng);
        let mut map = vec![None; dom];
        for slot in map.iter_mut() {
            if rng.gen_bool(density) {
                *slot = targets.pop();
            }
        }
        PartialInjection(PartialFunction::new(dom, cod, map).unwrap())
    }
}

impl fmt::Display for PartialInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `g ∘ f`.
pub fn compose(g: &PartialInjection, f: &PartialInjection) -> Result<PartialInjection, PinjError> {
    f.then(g)
}

pub fn identity(n: usize) -> PartialInjection {
    PartialInjection::identity(n)
}

/// Graph equality.
pub fn equivalent(f: &PartialInjection, g: &PartialInjection) -> Result<bool, PinjError> {
    if f.dom_size() != g.dom_size() || f.cod_size() != g.cod_size() {
        return Err(mismatch(
            "equivalent",
            format!("{} -> {} vs {} -> {}", f.dom_size(), f.cod_size(), g.dom_size(), g.cod_size()),
        ));
    }
    Ok(f == g)
}

/// Size of the set denoted by `t`, with type variables sized by `ground`.
pub fn type_size(t: &ValueType, ground: &BTreeMap<String, usize>) -> Result<usize, PinjError> {
    let too_big = || mismatch("type_size", format!("`{t}` is too large"));
    match t {
        ValueType::Zero => Ok(0),
        ValueType::One => Ok(1),
        ValueType::Sum(a, b) => type_size(a, ground)?.checked_add(type_size(b, ground)?).ok_or_else(too_big),
        ValueType::Prod(a, b) => type_size(a, ground)?.checked_mul(type_size(b, ground)?).ok_or_else(too_big),
        ValueType::Var(x) => ground.get(x).copied().ok_or_else(|| PinjError::UnboundVariable(x.clone())),
        ValueType::Mu(..) => Err(PinjError::HasMu(t.to_string())),
    }
}

/// Index of `v` in the enumeration of the closed type `t`.
pub fn index_of(v: &Value, t: &ValueType) -> Option<usize> {
    let ground = BTreeMap::new();
    match (v, t) {
        (Value::Unit, ValueType::One) => Some(0),
        (Value::InL(x), ValueType::Sum(a, _)) => index_of(x, a),
        (Value::InR(x), ValueType::Sum(a, b)) => Some(type_size(a, &ground).ok()? + index_of(x, b)?),
        (Value::Pair(x, y), ValueType::Prod(a, b)) => {
            Some(index_of(x, a)? * type_size(b, &ground).ok()? + index_of(y, b)?)
        }
        _ => None,
    }
}

/// The value with index `i` in the enumeration of the closed type `t`.
pub fn value_at(i: usize, t: &ValueType) -> Option<Value> {
    let ground = BTreeMap::new();
    match t {
        ValueType::One if i == 0 => Some(Value::Unit),
        ValueType::Sum(a, b) => {
            let n = type_size(a, &ground).ok()?;
            if i < n {
                value_at(i, a).map(Value::inl)
            } else {
                value_at(i - n, b).map(Value::inr)
            }
        }
        ValueType::Prod(a, b) => {
            let m = type_size(b, &ground).ok()?;
            if m == 0 {
                return None;
            }
            Some(Value::pair(value_at(i / m, a)?, value_at(i % m, b)?))
        }
        _ => None,
    }
}

/// The partial injection denoted by `c` at type `ty`. Type variables are
/// interpreted by the sizes in `ground`.
pub fn denote(
    c: &Combinator,
    ty: &CombinatorType,
    ground: &BTreeMap<String, usize>,
) -> Result<PartialInjection, PinjError> {
    let d = derive(c, Some(ty))?;
    denote_with(c, &d, ground)
}

fn denote_with(
    c: &Combinator,
    d: &Derivation,
    ground: &BTreeMap<String, usize>,
) -> Result<PartialInjection, PinjError> {
    use Combinator::*;
    let size = |t: &ValueType| type_size(t, ground);
    let (dom, cod) = (&d.ty.domain, &d.ty.codomain);
    let n = size(dom)?;
    size(cod)?;
    Ok(match c {
        Id | AssocLPlus | AssocRPlus | UnitLPlus | UnitRPlus | AssocLTimes | AssocRTimes | UnitLTimes | UnitRTimes
        | Distrib | Factor | Absorb | Unabsorb => {
            // dense indices make these coherence maps identities
            PartialInjection::identity(n)
        }
        SwapPlus | SwapTimes => {
            let (a, b) = match dom {
                ValueType::Sum(a, b) | ValueType::Prod(a, b) => (size(a)?, size(b)?),
                _ => unreachable!("swap at a non-binary type"),
            };
            if matches!(c, SwapPlus) {
                PartialInjection::swap_plus(a, b)
            } else {
                PartialInjection::swap_times(a, b)
            }
        }
        Fold(t) | Unfold(t) => return Err(PinjError::HasMu(t.to_string())),
        Comp(f, g) => {
            let df = denote_with(f, &d.premises[0], ground)?;
            let dg = denote_with(g, &d.premises[1], ground)?;
            df.then(&dg)?
        }
        SumC(f, g) | ProdC(f, g) => {
            let df = denote_with(f, &d.premises[0], ground)?;
            let dg = denote_with(g, &d.premises[1], ground)?;
            if matches!(c, SumC(..)) {
                df.oplus(&dg)
            } else {
                df.otimes(&dg)
            }
        }
        Trace(f) => {
            let df = denote_with(f, &d.premises[0], ground)?;
            df.trace(n, size(cod)?)?
        }
        Inv(f) => denote_with(f, &d.premises[0], ground)?.dagger(),
    })
}

/// The largest `|U| + 1` over the traces in `c`: trace fuel that suffices
/// for every input.
pub fn trace_fuel_bound(c: &Combinator, ty: &CombinatorType) -> Result<u64, PinjError> {
    fn go(c: &Combinator, d: &Derivation) -> Result<u64, PinjError> {
        let ground = BTreeMap::new();
        let own = match c {
            Combinator::Trace(_) => {
                let inner = &d.premises[0].ty.domain;
                (type_size(inner, &ground)? - type_size(&d.ty.domain, &ground)?) as u64 + 1
            }
            _ => 0,
        };
        let children: Vec<&Combinator> = match c {
            Combinator::Comp(f, g) | Combinator::SumC(f, g) | Combinator::ProdC(f, g) => vec![f, g],
            Combinator::Trace(f) | Combinator::Inv(f) => vec![f],
            _ => vec![],
        };
        let mut best = own;
        for (child, pd) in children.into_iter().zip(&d.premises) {
            best = best.max(go(child, pd)?);
        }
        Ok(best)
    }
    go(c, &derive(c, Some(ty))?)
}

/// Values of a closed mu-free type, in index order.
pub fn elements(t: &ValueType) -> Result<Vec<Value>, PinjError> {
    type_size(t, &BTreeMap::new())?;
    Ok(values_of(t).expect("closed mu-free type"))
}

fn show_pair(f: &PartialInjection, g: &PartialInjection) -> String {
    format!("lhs {f}; rhs {g}")
}

/// A random partial injection, total or nearly so most of the time.
fn sample(rng: &mut impl Rng, dom: usize, cod: usize) -> PartialInjection {
    let density = [0.6, 0.85, 1.0][rng.gen_range(0..3)];
    PartialInjection::random(rng, dom, cod, density)
}

/// Randomized check of the trace axioms (with `⊕` as the monoidal
/// product). Each set involved has at most `max_size` elements in total.
pub fn check_trace_axioms(rng: &mut impl Rng, trials: usize, max_size: usize) -> LawReport {
    let mut report = LawReport::new(format!("trace axioms ({trials} trials, sets of size <= {max_size})"));
    // sizes (x, y) with x + y <= max
    let split = |rng: &mut dyn rand::RngCore, max: usize| {
        let total = rng.gen_range(0..=max);
        let x = rng.gen_range(0..=total);
        (x, total - x)
    };

    let mut nat = LawCheck::new("naturality");
    for _ in 0..trials {
        let (a, u) = split(rng, max_size);
        let b = rng.gen_range(0..=max_size - u);
        let a2 = rng.gen_range(0..=max_size);
        let b2 = rng.gen_range(0..=max_size);
        let f = sample(rng, a + u, b + u);
        let h = sample(rng, a2, a);
        let g = sample(rng, b, b2);
        let inner = h.oplus(&identity(u)).then(&f).unwrap().then(&g.oplus(&identity(u))).unwrap();
        let lhs = inner.trace(a2, b2).unwrap();
        let rhs = h.then(&f.trace(a, b).unwrap()).unwrap().then(&g).unwrap();
        nat.record(lhs == rhs, || format!("f = {f}, h = {h}, g = {g}: {}", show_pair(&lhs, &rhs)));
    }
    report.push(nat.finish());

    let mut dinat = LawCheck::new("dinaturality");
    for _ in 0..trials {
        let (a, u) = split(rng, max_size);
        let u2 = rng.gen_range(0..=max_size - a);
        let b = rng.gen_range(0..=max_size - u2.max(u));
        // f: A ⊕ U → B ⊕ U', g: U' → U
        let f = sample(rng, a + u, b + u2);
        let g = sample(rng, u2, u);
        let lhs = f.then(&identity(b).oplus(&g)).unwrap().trace(a, b).unwrap();
        let rhs = identity(a).oplus(&g).then(&f).unwrap().trace(a, b).unwrap();
        dinat.record(lhs == rhs, || format!("f = {f}, g = {g}: {}", show_pair(&lhs, &rhs)));
    }
    report.push(dinat.finish());

    let mut strength = LawCheck::new("strength");
    for _ in 0..trials {
        let (a, u) = split(rng, max_size);
        let b = rng.gen_range(0..=max_size - u);
        let c = rng.gen_range(0..=max_size - a - u);
        let dd = rng.gen_range(0..=max_size - b - u);
        let f = sample(rng, a + u, b + u);
        let g = sample(rng, c, dd);
        // (A ⊕ C) ⊕ U → (A ⊕ U) ⊕ C → (B ⊕ U) ⊕ D → (B ⊕ D) ⊕ U
        let pre = identity(a).oplus(&PartialInjection::swap_plus(c, u));
        let post = identity(b).oplus(&PartialInjection::swap_plus(u, dd));
        let lhs = pre.then(&f.oplus(&g)).unwrap().then(&post).unwrap().trace(a + c, b + dd).unwrap();
        let rhs = f.trace(a, b).unwrap().oplus(&g);
        strength.record(lhs == rhs, || format!("f = {f}, g = {g}: {}", show_pair(&lhs, &rhs)));
    }
    report.push(strength.finish());

    let mut van1 = LawCheck::new("vanishing I");
    for _ in 0..trials {
        let a = rng.gen_range(0..=max_size);
        let b = rng.gen_range(0..=max_size);
        let f = sample(rng, a, b);
        let lhs = f.trace(a, b).unwrap();
        van1.record(lhs == f, || format!("f = {f}: trace {lhs}"));
    }
    report.push(van1.finish());

    let mut van2 = LawCheck::new("vanishing II");
    for _ in 0..trials {
        let (a, uv) = split(rng, max_size);
        let u = rng.gen_range(0..=uv);
        let v = uv - u;
        let b = rng.gen_range(0..=max_size - uv);
        let f = sample(rng, a + u + v, b + u + v);
        let lhs = f.trace(a, b).unwrap();
        let rhs = f.trace(a + u, b + u).unwrap().trace(a, b).unwrap();
        van2.record(lhs == rhs, || format!("f = {f}, |U| = {u}, |V| = {v}: {}", show_pair(&lhs, &rhs)));
    }
    report.push(van2.finish());

    let mut yank = LawCheck::new("yanking");
    for _ in 0..trials {
        let u = rng.gen_range(0..=max_size / 2);
        let lhs = PartialInjection::swap_plus(u, u).trace(u, u).unwrap();
        yank.record(lhs == identity(u), || format!("|U| = {u}: trace {lhs}"));
    }
    report.push(yank.finish());
    report
}

/// Randomized check of the inverse-category laws `f f† f = f` and
/// `f†f g†g = g†g f†f`.
pub fn check_inverse_laws(rng: &mut impl Rng, trials: usize, max_size: usize) -> LawReport {
    let mut report = LawReport::new(format!("inverse category laws ({trials} trials, sets of size <= {max_size})"));
    let mut iso = LawCheck::new("partial isometry");
    let mut pos = LawCheck::new("positives commute");
    let mut inv = LawCheck::new("dagger involution");
    for _ in 0..trials {
        let n = rng.gen_range(0..=max_size);
        let m = rng.gen_range(0..=max_size);
        let k = rng.gen_range(0..=max_size);
        let density = rng.gen_range(0.3..=1.0);
        let f = PartialInjection::random(rng, n, m, density);
        let g = PartialInjection::random(rng, n, k, density);
        let fff = f.then(&f.dagger()).unwrap().then(&f).unwrap();
        iso.record(fff == f, || format!("f = {f}: f f† f = {fff}"));
        let pf = f.then(&f.dagger()).unwrap();
        let pg = g.then(&g.dagger()).unwrap();
        let lhs = pg.then(&pf).unwrap();
        let rhs = pf.then(&pg).unwrap();
        pos.record(lhs == rhs, || format!("f = {f}, g = {g}: {}", show_pair(&lhs, &rhs)));
        inv.record(f.dagger().dagger() == f, || format!("f = {f}"));
    }
    report.push(iso.finish());
    report.push(pos.finish());
    report.push(inv.finish());
    report
}
