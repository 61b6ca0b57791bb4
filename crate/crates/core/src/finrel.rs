//! Finite relations workbench.
//!
//! Relations between finite sets are dense boolean matrices. On top of them
//! live groupoid-induced Frobenius monoids, the Kleisli dagger and FEM law
//! for `T = - * B`, ambilimit checks for chains of partial functions, and
//! Adámek approximants of polynomial functors.
//!
//! Products of finite sets are indexed row-major, `(a, b) ↦ a·|B| + b`, so
//! the associator and unitors of `*` are identities on indices.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::arrows::sized_type;
use crate::interp::unroll_mu_approximant;
use crate::pinj::{index_of, PartialFunction, PinjError};
use crate::report::{LawCheck, LawReport, LawResult};
use crate::syntax::{Value, ValueType};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum FinRelError {
    #[error("{op}: shape mismatch ({detail})")]
    ShapeMismatch { op: &'static str, detail: String },
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),
    #[error("invalid monoid: {0}")]
    InvalidMonoid(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Pinj(#[from] PinjError),
}

fn mismatch(op: &'static str, detail: String) -> FinRelError {
    FinRelError::ShapeMismatch { op, detail }
}

/// A relation `dom -> cod`, stored as a `cod × dom` boolean matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    dom: usize,
    cod: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(dom: usize, cod: usize) -> Self {
        Relation { dom, cod, bits: vec![false; dom * cod] }
    }

    pub fn identity(n: usize) -> Self {
        Relation::from_fn(n, n, |x, y| x == y)
    }

    pub fn from_fn(dom: usize, cod: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut r = Relation::empty(dom, cod);
        for y in 0..cod {
            for x in 0..dom {
                r.bits[y * dom + x] = f(x, y);
            }
        }
        r
    }

    pub fn from_pairs(dom: usize, cod: usize, pairs: &[(usize, usize)]) -> Result<Self, FinRelError> {
        let mut r = Relation::empty(dom, cod);
        for &(x, y) in pairs {
            if x >= dom || y >= cod {
                return Err(mismatch("from_pairs", format!("({x}, {y}) outside {dom} -> {cod}")));
            }
            r.set(x, y, true);
        }
        Ok(r)
    }

    pub fn from_function(f: &PartialFunction) -> Self {
        let mut r = Relation::empty(f.dom().size(), f.cod().size());
        for (x, y) in f.graph() {
            r.set(x, y, true);
        }
        r
    }

    /// Entry `k` of the matrix is bit `k` of `code`, row-major over `cod × dom`.
    pub fn from_code(dom: usize, cod: usize, code: u64) -> Self {
        let mut r = Relation::empty(dom, cod);
        for (k, b) in r.bits.iter_mut().enumerate() {
            *b = code >> k & 1 == 1;
        }
        r
    }

    pub fn random(rng: &mut impl Rng, dom: usize, cod: usize, density: f64) -> Self {
        Relation::from_fn(dom, cod, |_, _| rng.gen_bool(density))
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    /// `x R y`.
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.dom + x]
    }

    pub fn set(&mut self, x: usize, y: usize, b: bool) {
        self.bits[y * self.dom + x] = b;
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.dom {
            for y in 0..self.cod {
                if self.get(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn image(&self, x: usize) -> Vec<usize> {
        (0..self.cod).filter(|&y| self.get(x, y)).collect()
    }

    /// The transpose.
    pub fn dagger(&self) -> Self {
        Relation::from_fn(self.cod, self.dom, |y, x| self.get(x, y))
    }

    /// `self ; next`, i.e. `next ∘ self`, as a boolean matrix product.
    pub fn then(&self, next: &Relation) -> Result<Self, FinRelError> {
        if self.cod != next.dom {
            return Err(mismatch("compose", format!("{} -> {} then {} -> {}", self.dom, self.cod, next.dom, next.cod)));
        }
        let mut r = Relation::empty(self.dom, next.cod);
        for x in 0..self.dom {
            for y in 0..self.cod {
                if self.get(x, y) {
                    for z in 0..next.cod {
                        if next.get(y, z) {
                            r.set(x, z, true);
                        }
                    }
                }
            }
        }
        Ok(r)
    }

    /// `(x1, x2) R⊗S (y1, y2)` iff `x1 R y1` and `x2 S y2`.
    pub fn tensor(&self, g: &Relation) -> Self {
        Relation::from_fn(self.dom * g.dom, self.cod * g.cod, |x, y| {
            self.get(x / g.dom, y / g.cod) && g.get(x % g.dom, y % g.cod)
        })
    }

    pub fn oplus(&self, g: &Relation) -> Self {
        Relation::from_fn(self.dom + g.dom, self.cod + g.cod, |x, y| match (x < self.dom, y < self.cod) {
            (true, true) => self.get(x, y),
            (false, false) => g.get(x - self.dom, y - self.cod),
            _ => false,
        })
    }

    pub fn union(&self, g: &Relation) -> Result<Self, FinRelError> {
        self.same_shape(g, "union")?;
        Ok(Relation::from_fn(self.dom, self.cod, |x, y| self.get(x, y) || g.get(x, y)))
    }

    pub fn is_subset(&self, g: &Relation) -> bool {
        self.dom == g.dom && self.cod == g.cod && self.bits.iter().zip(&g.bits).all(|(a, b)| !a || *b)
    }

    /// First `(x, y)` on which the relations disagree.
    pub fn first_difference(&self, g: &Relation) -> Option<(usize, usize)> {
        if self.dom != g.dom || self.cod != g.cod {
            return Some((self.dom.min(g.dom), self.cod.min(g.cod)));
        }
        (0..self.dom).flat_map(|x| (0..self.cod).map(move |y| (x, y))).find(|&(x, y)| self.get(x, y) != g.get(x, y))
    }

    fn same_shape(&self, g: &Relation, op: &'static str) -> Result<(), FinRelError> {
        if self.dom != g.dom || self.cod != g.cod {
            return Err(mismatch(op, format!("{} -> {} vs {} -> {}", self.dom, self.cod, g.dom, g.cod)));
        }
        Ok(())
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self.pairs().iter().map(|(x, y)| format!("{x}->{y}")).collect();
        write!(f, "{} -> {} {{{}}}", self.dom, self.cod, pairs.join(", "))
    }
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    pub name: String,
    pub order: usize,
    /// `mul[a * order + b] = a·b`; element 0 is the unit.
    pub mul: Vec<usize>,
}

impl FiniteGroup {
    pub fn cyclic(n: usize) -> Self {
        FiniteGroup { name: format!("z{n}"), order: n, mul: (0..n * n).map(|k| (k / n + k % n) % n).collect() }
    }

    /// `Z/2 × Z/2`.
    pub fn klein() -> Self {
        FiniteGroup { name: "v4".into(), order: 4, mul: (0..16).map(|k| (k / 4) ^ (k % 4)).collect() }
    }

    /// Permutations of three points in lexicographic order; `a·b` applies `b` first.
    pub fn s3() -> Self {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let mut mul = Vec::with_capacity(36);
        for a in &perms {
            for b in &perms {
                mul.push(index([a[b[0]], a[b[1]], a[b[2]]]));
            }
        }
        FiniteGroup { name: "s3".into(), order: 6, mul }
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    /// Every group of order at most 6, up to isomorphism.
    pub fn all_up_to_order_six() -> Vec<FiniteGroup> {
        vec![
            FiniteGroup::cyclic(1),
            FiniteGroup::cyclic(2),
            FiniteGroup::cyclic(3),
            FiniteGroup::cyclic(4),
            FiniteGroup::klein(),
            FiniteGroup::cyclic(5),
            FiniteGroup::cyclic(6),
            FiniteGroup::s3(),
        ]
    }
}

/// A finite groupoid given by an explicit composition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    pub name: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<String>,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    /// `comp[g * |M| + f] = g ∘ f`, defined iff `tgt f = src g`.
    pub comp: Vec<Option<usize>>,
    pub id: Vec<usize>,
    pub inv: Vec<usize>,
}

const OBJECT_NAMES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

impl FiniteGroupoid {
    /// Builds a groupoid from its table, deriving identities and inverses.
    pub fn from_table(
        name: impl Into<String>,
        objects: Vec<String>,
        morphisms: Vec<(String, usize, usize)>,
        comp: Vec<Option<usize>>,
    ) -> Result<Self, FinRelError> {
        let m = morphisms.len();
        let bad = |s: String| Err(FinRelError::InvalidGroupoid(s));
        if comp.len() != m * m {
            return bad(format!("table has {} entries for {m} morphisms", comp.len()));
        }
        let (names, ends): (Vec<String>, Vec<(usize, usize)>) =
            morphisms.into_iter().map(|(n, s, t)| (n, (s, t))).unzip();
        let (src, tgt): (Vec<usize>, Vec<usize>) = ends.into_iter().unzip();
        if let Some(&o) = src.iter().chain(&tgt).find(|&&o| o >= objects.len()) {
            return bad(format!("object index {o} out of range"));
        }
        let at = |g: usize, f: usize| comp[g * m + f];
        let mut id = Vec::with_capacity(objects.len());
        for (x, xname) in objects.iter().enumerate() {
            let found = (0..m).find(|&e| {
                src[e] == x
                    && tgt[e] == x
                    && (0..m).all(|f| (tgt[f] != x || at(e, f) == Some(f)) && (src[f] != x || at(f, e) == Some(f)))
            });
            match found {
                Some(e) => id.push(e),
                None => return bad(format!("object {xname} has no identity")),
            }
        }
        let mut inv = Vec::with_capacity(m);
        for f in 0..m {
            match (0..m).find(|&g| at(g, f) == Some(id[src[f]]) && at(f, g) == Some(id[tgt[f]])) {
                Some(g) => inv.push(g),
                None => return bad(format!("morphism {} has no inverse", names[f])),
            }
        }
        let g = FiniteGroupoid { name: name.into(), objects, morphisms: names, src, tgt, comp, id, inv };
        g.validate()?;
        Ok(g)
    }

    /// Disjoint union of connected groupoids. A component `(k, H)` has `k`
    /// objects and vertex group `H`; its morphisms are `(s, t, h)`.
    pub fn from_components(name: impl Into<String>, components: &[(usize, FiniteGroup)]) -> Result<Self, FinRelError> {
        let mut objects = Vec::new();
        let mut morphisms = Vec::new();
        // (component, source, target, element)
        let mut shape = Vec::new();
        for (c, (k, h)) in components.iter().enumerate() {
            let base = objects.len();
            for i in 0..*k {
                objects.push(OBJECT_NAMES.get(base + i).map_or(format!("O{}", base + i), |s| s.to_string()));
            }
            for s in 0..*k {
                for t in 0..*k {
                    for e in 0..h.order {
                        let label = format!("{}{}{}", objects[base + s], objects[base + t], e);
                        morphisms.push((label, base + s, base + t));
                        shape.push((c, base + s, base + t, e));
                    }
                }
            }
        }
        let m = morphisms.len();
        let mut comp = vec![None; m * m];
        for (g, &(cg, sg, tg, eg)) in shape.iter().enumerate() {
            for (f, &(cf, sf, tf, ef)) in shape.iter().enumerate() {
                if cg == cf && tf == sg {
                    let e = components[cg].1.mul(eg, ef);
                    comp[g * m + f] = shape.iter().position(|&q| q == (cg, sf, tg, e));
                }
            }
        }
        FiniteGroupoid::from_table(name, objects, morphisms, comp)
    }

    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp[g * self.morphisms.len() + f]
    }

    pub fn validate(&self) -> Result<(), FinRelError> {
        let m = self.morphisms.len();
        let bad = |s: String| Err(FinRelError::InvalidGroupoid(s));
        for g in 0..m {
            for f in 0..m {
                let composable = self.tgt[f] == self.src[g];
                match self.compose(g, f) {
                    Some(h) if !composable => {
                        return bad(format!(
                            "{} ∘ {} = {} but they are not composable",
                            self.morphisms[g], self.morphisms[f], self.morphisms[h]
                        ))
                    }
                    None if composable => {
                        return bad(format!("{} ∘ {} is missing", self.morphisms[g], self.morphisms[f]))
                    }
                    Some(h) if h >= m || self.src[h] != self.src[f] || self.tgt[h] != self.tgt[g] => {
                        return bad(format!("{} ∘ {} has the wrong endpoints", self.morphisms[g], self.morphisms[f]))
                    }
                    _ => {}
                }
            }
        }
        for h in 0..m {
            for g in 0..m {
                for f in 0..m {
                    let lhs = self.compose(g, f).and_then(|gf| self.compose(h, gf));
                    let rhs = self.compose(h, g).and_then(|hg| self.compose(hg, f));
                    if self.tgt[f] == self.src[g] && self.tgt[g] == self.src[h] && lhs != rhs {
                        return bad(format!(
                            "associativity fails at ({}, {}, {})",
                            self.morphisms[h], self.morphisms[g], self.morphisms[f]
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Every groupoid with at most 3 objects and 6 morphisms, up to
    /// isomorphism, as disjoint unions of connected components.
    pub fn all_small() -> Vec<FiniteGroupoid> {
        // connected components fitting the bounds: one object with any group
        // of order <= 6, or two objects with the trivial group
        let mut kinds: Vec<(String, usize, FiniteGroup)> =
            FiniteGroup::all_up_to_order_six().into_iter().map(|g| (g.name.clone(), 1, g)).collect();
        kinds.push(("pair".into(), 2, FiniteGroup::cyclic(1)));
        let cost = |k: &(String, usize, FiniteGroup)| (k.1, k.1 * k.1 * k.2.order);

        let mut out = Vec::new();
        let mut stack: Vec<(Vec<usize>, usize, usize)> = vec![(vec![], 0, 0)];
        while let Some((chosen, objs, mors)) = stack.pop() {
            if !chosen.is_empty() {
                let comps: Vec<(usize, FiniteGroup)> =
                    chosen.iter().map(|&i| (kinds[i].1, kinds[i].2.clone())).collect();
                let name: Vec<&str> = chosen.iter().map(|&i| kinds[i].0.as_str()).collect();
                out.push(FiniteGroupoid::from_components(name.join("+"), &comps).expect("valid components"));
            }
            let start = chosen.last().copied().unwrap_or(0);
            for i in (start..kinds.len()).rev() {
                let (o, m) = cost(&kinds[i]);
                if objs + o <= 3 && mors + m <= 6 {
                    let mut next = chosen.clone();
                    next.push(i);
                    stack.push((next, objs + o, mors + m));
                }
            }
        }
        out.sort_by(|a, b| (a.morphisms.len(), &a.name).cmp(&(b.morphisms.len(), &b.name)));
        out
    }
}

/// A monoid in `Rel` on a finite carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelMonoid {
    pub name: String,
    pub elements: Vec<String>,
    /// `B * B -> B`.
    pub mult: Relation,
    /// `1 -> B`.
    pub unit: Relation,
}

impl RelMonoid {
    pub fn new(
        name: impl Into<String>,
        elements: Vec<String>,
        mult: Relation,
        unit: Relation,
    ) -> Result<Self, FinRelError> {
        let n = elements.len();
        if mult.dom() != n * n || mult.cod() != n || unit.dom() != 1 || unit.cod() != n {
            return Err(mismatch("monoid", format!("{n} elements, mult {mult}, unit {unit}")));
        }
        Ok(RelMonoid { name: name.into(), elements, mult, unit })
    }

    /// A monoid from a total multiplication table with unit element `e`.
    pub fn from_table(
        name: impl Into<String>,
        elements: &[&str],
        table: &[usize],
        e: usize,
    ) -> Result<Self, FinRelError> {
        let n = elements.len();
        let mult = Relation::from_fn(n * n, n, |x, y| table[x] == y);
        let unit = Relation::from_fn(1, n, |_, y| y == e);
        RelMonoid::new(name, elements.iter().map(|s| s.to_string()).collect(), mult, unit)
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    fn id(&self) -> Relation {
        Relation::identity(self.size())
    }

    /// Associativity and both unit laws.
    pub fn monoid_laws(&self) -> Vec<LawResult> {
        let (mu, id, eta) = (&self.mult, self.id(), &self.unit);
        let n = self.size();
        let assoc_l = mu.tensor(&id).then(mu).expect("shapes");
        let assoc_r = id.tensor(mu).then(mu).expect("shapes");
        let left = eta.tensor(&id).then(mu).expect("shapes");
        let right = id.tensor(eta).then(mu).expect("shapes");
        let show3 = |k: usize| {
            format!("({}, {}, {})", self.elements[k / (n * n)], self.elements[k / n % n], self.elements[k % n])
        };
        vec![
            relation_law("associativity", &assoc_l, &assoc_r, |x, y| format!("{} -> {}", show3(x), self.elements[y])),
            relation_law("left unit", &left, &id, |x, y| format!("{} -> {}", self.elements[x], self.elements[y])),
            relation_law("right unit", &right, &id, |x, y| format!("{} -> {}", self.elements[x], self.elements[y])),
        ]
    }

    pub fn is_monoid(&self) -> bool {
        self.monoid_laws().iter().all(|r| r.counterexample.is_none())
    }

    /// `(μ ⊗ id)(id ⊗ μ†) = μ†μ = (id ⊗ μ)(μ† ⊗ id)` as relations `B*B -> B*B`.
    pub fn check_frobenius(&self) -> LawResult {
        let (mu, id) = (&self.mult, self.id());
        let mid = mu.then(&mu.dagger()).expect("shapes");
        let lhs = id.tensor(&mu.dagger()).then(&mu.tensor(&id)).expect("shapes");
        let rhs = mu.dagger().tensor(&id).then(&id.tensor(mu)).expect("shapes");
        let pair = |k: usize| format!("({}, {})", self.elements[k / self.size()], self.elements[k % self.size()]);
        let mut check = LawCheck::new("frobenius");
        for (side, r) in [("left", &lhs), ("right", &rhs)] {
            let diff = r.first_difference(&mid);
            check.record(diff.is_none(), || {
                let (x, y) = diff.unwrap();
                format!("{} -> {}: {side} composite {}, μ†μ {}", pair(x), pair(y), r.get(x, y), mid.get(x, y))
            });
        }
        check.finish()
    }

    /// The composition monoid of a groupoid: `(g, f) ↦ {g ∘ f}` and unit
    /// the set of identities.
    pub fn from_groupoid(g: &FiniteGroupoid) -> Self {
        let m = g.morphisms.len();
        let mult = Relation::from_fn(m * m, m, |x, y| g.compose(x / m, x % m) == Some(y));
        let unit = Relation::from_fn(1, m, |_, y| g.id.contains(&y));
        RelMonoid { name: g.name.clone(), elements: g.morphisms.clone(), mult, unit }
    }
}

/// Same as [`RelMonoid::from_groupoid`], after validating `g`.
pub fn groupoid_to_frobenius(g: &FiniteGroupoid) -> Result<RelMonoid, FinRelError> {
    g.validate()?;
    Ok(RelMonoid::from_groupoid(g))
}

fn relation_law(law: &str, lhs: &Relation, rhs: &Relation, show: impl Fn(usize, usize) -> String) -> LawResult {
    let mut check = LawCheck::new(law);
    let diff = lhs.first_difference(rhs);
    check.record(diff.is_none(), || {
        let (x, y) = diff.unwrap();
        format!("{}: lhs {}, rhs {}", show(x, y), lhs.get(x, y), rhs.get(x, y))
    });
    check.finish()
}

/// The Kleisli unit `η_X : X -> X * B`, `x ↦ {(x, e) | e unit}`.
pub fn kleisli_unit(m: &RelMonoid, x: usize) -> Relation {
    Relation::identity(x).tensor(&m.unit)
}

fn monad_cod(f: &Relation, m: &RelMonoid, op: &'static str) -> Result<usize, FinRelError> {
    let n = m.size();
    if f.cod().checked_rem(n) != Some(0) {
        return Err(mismatch(op, format!("codomain {} is not a multiple of |B| = {n}", f.cod())));
    }
    Ok(f.cod() / n)
}

/// Kleisli composition `g ∘ f = μ ∘ T(g) ∘ f` for `f: X -> Y*B`, `g: Y -> Z*B`.
pub fn kleisli_compose(m: &RelMonoid, g: &Relation, f: &Relation) -> Result<Relation, FinRelError> {
    let y = monad_cod(f, m, "kleisli_compose")?;
    let z = monad_cod(g, m, "kleisli_compose")?;
    if g.dom() != y {
        return Err(mismatch("kleisli_compose", format!("{} is not a Kleisli map from {y}", g)));
    }
    let tg = g.tensor(&m.id());
    let mu = Relation::identity(z).tensor(&m.mult);
    f.then(&tg)?.then(&mu)
}

/// `f ↦ T(f†) ∘ μ† ∘ η` for `f: A -> B*M`, giving `B -> A*M`.
pub fn kleisli_dagger(f: &Relation, m: &RelMonoid) -> Result<Relation, FinRelError> {
    let b = monad_cod(f, m, "kleisli_dagger")?;
    let eta = kleisli_unit(m, b);
    let mu_dag = Relation::identity(b).tensor(&m.mult.dagger());
    let tf = f.dagger().tensor(&m.id());
    eta.then(&mu_dag)?.then(&tf)
}

/// An Eilenberg-Moore candidate `a: A * B -> A` for `T = - * B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelAlgebra {
    pub name: String,
    pub monoid: RelMonoid,
    pub carrier: usize,
    pub action: Relation,
}

/// Groupoid actions with pairwise disjoint fibres.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupoidAction {
    /// Fibre over `X` is `Hom(X, -)`, acted on by precomposition.
    Regular,
    /// Fibre over `X` is `{X} × [k]`; `g` moves `(tgt g, i)` to `(src g, i)`.
    Trivial(usize),
}

impl RelAlgebra {
    pub fn new(
        name: impl Into<String>,
        monoid: RelMonoid,
        carrier: usize,
        action: Relation,
    ) -> Result<Self, FinRelError> {
        if action.dom() != carrier * monoid.size() || action.cod() != carrier {
            return Err(mismatch("algebra", format!("action {action} on carrier {carrier}")));
        }
        Ok(RelAlgebra { name: name.into(), monoid, carrier, action })
    }

    /// The free algebra `μ_A = id_A * m : (A * B) * B -> A * B`.
    pub fn free(monoid: &RelMonoid, base: usize) -> Self {
        let n = monoid.size();
        RelAlgebra {
            name: format!("free({}, {base})", monoid.name),
            monoid: monoid.clone(),
            carrier: base * n,
            action: Relation::identity(base).tensor(&monoid.mult),
        }
    }

    pub fn groupoid_action(g: &FiniteGroupoid, kind: GroupoidAction) -> Self {
        let monoid = RelMonoid::from_groupoid(g);
        let m = g.morphisms.len();
        let (name, carrier, action) = match kind {
            GroupoidAction::Regular => {
                let act = Relation::from_fn(m * m, m, |x, y| g.compose(x / m, x % m) == Some(y));
                (format!("regular({})", g.name), m, act)
            }
            GroupoidAction::Trivial(k) => {
                let objs = g.objects.len();
                let act = Relation::from_fn(objs * k * m, objs * k, |x, y| {
                    let (v, h) = (x / m, x % m);
                    let (obj, i) = (v / k, v % k);
                    g.tgt[h] == obj && y == g.src[h] * k + i
                });
                (format!("trivial({}, {k})", g.name), objs * k, act)
            }
        };
        RelAlgebra { name, monoid, carrier, action }
    }

    /// Unit and associativity laws of an Eilenberg-Moore algebra.
    pub fn em_laws(&self) -> Vec<LawResult> {
        let (a, b) = (&self.action, self.monoid.id());
        let ida = Relation::identity(self.carrier);
        let unit = ida.tensor(&self.monoid.unit).then(a).expect("shapes");
        let lhs = a.tensor(&b).then(a).expect("shapes");
        let rhs = ida.tensor(&self.monoid.mult).then(a).expect("shapes");
        let show = |x: usize, y: usize| format!("{x} -> {y}");
        vec![relation_law("action unit", &unit, &ida, show), relation_law("action associativity", &lhs, &rhs, show)]
    }

    pub fn is_em(&self) -> bool {
        self.em_laws().iter().all(|r| r.counterexample.is_none())
    }

    /// `T(a) ∘ μ†` must be self-adjoint on `A * B`.
    pub fn check_fem(&self) -> LawResult {
        let n = self.monoid.size();
        let ida = Relation::identity(self.carrier);
        let mu_dag = ida.tensor(&self.monoid.mult.dagger());
        let ta = self.action.tensor(&self.monoid.id());
        let s = mu_dag.then(&ta).expect("shapes");
        let pair = |k: usize| format!("({}, {})", k / n, self.monoid.elements[k % n]);
        relation_law("femlaw", &s, &s.dagger(), |x, y| format!("{} -> {}", pair(x), pair(y)))
    }
}

/// Every two-element monoid in `Rel`, in order of its encoding.
pub fn two_element_monoids() -> Vec<RelMonoid> {
    let mut out = Vec::new();
    for unit_code in 1..4u64 {
        for mult_code in 0..256u64 {
            let m = RelMonoid {
                name: format!("m{mult_code}u{unit_code}"),
                elements: vec!["a".into(), "b".into()],
                mult: Relation::from_code(4, 2, mult_code),
                unit: Relation::from_code(1, 2, unit_code),
            };
            if m.is_monoid() {
                out.push(m);
            }
        }
    }
    out
}

/// Searches two-element monoids and carriers up to `max_carrier` for an
/// Eilenberg-Moore algebra violating the FEM law.
pub fn search_em_not_fem(max_carrier: usize, frobenius_only: bool) -> Option<RelAlgebra> {
    for monoid in two_element_monoids() {
        if frobenius_only && monoid.check_frobenius().counterexample.is_some() {
            continue;
        }
        for carrier in 1..=max_carrier {
            let entries = (carrier * 2 * carrier) as u32;
            for code in 0..1u64 << entries {
                let alg = RelAlgebra {
                    name: format!("{}/a{carrier}c{code}", monoid.name),
                    monoid: monoid.clone(),
                    carrier,
                    action: Relation::from_code(carrier * 2, carrier, code),
                };
                if alg.is_em() && alg.check_fem().counterexample.is_some() {
                    return Some(alg);
                }
            }
        }
    }
    None
}

/// The EM algebra that fails the FEM law, as found by
/// [`search_em_not_fem`] over Frobenius monoids. The monoid on `{a, b}` has
/// unit `a` and `b·b = {a, b}`; the carrier is `{0, 1}` with `0·g = 0`,
/// `1·a = 1` and `1·b = {0, 1}`.
pub fn pinned_em_not_fem() -> RelAlgebra {
    let elements = vec!["a".to_string(), "b".to_string()];
    // pairs indexed (x, y) ↦ 2x + y
    let mult = Relation::from_pairs(4, 2, &[(0, 0), (1, 1), (2, 1), (3, 0), (3, 1)]).expect("in range");
    let unit = Relation::from_pairs(1, 2, &[(0, 0)]).expect("in range");
    let monoid = RelMonoid::new("frobenius-nonspecial", elements, mult, unit).expect("shapes");
    let action = Relation::from_pairs(4, 2, &[(0, 0), (1, 0), (2, 1), (3, 0), (3, 1)]).expect("in range");
    RelAlgebra::new("em-not-fem", monoid, 2, action).expect("shapes")
}

fn composite(fs: &[PartialFunction], dom: usize) -> PartialFunction {
    fs.iter().fold(PartialFunction::identity(dom), |acc, f| acc.then(f).expect("chain shapes"))
}

fn below_identity(f: &PartialFunction) -> Option<usize> {
    f.graph().into_iter().find(|&(x, y)| x != y).map(|(x, _)| x)
}

/// A truncated chain `D(0) ⇄ D(1) ⇄ … ⇄ D(N)` with a candidate apex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainData {
    pub name: String,
    pub sizes: Vec<usize>,
    /// `e_n : D(n) -> D(n+1)`.
    pub forward: Vec<PartialFunction>,
    /// `q_n : D(n+1) -> D(n)`.
    pub backward: Vec<PartialFunction>,
    pub apex: usize,
    /// `p_n : L -> D(n)`.
    pub proj: Vec<PartialFunction>,
    /// `i_n : D(n) -> L`.
    pub inj: Vec<PartialFunction>,
}

impl ChainData {
    /// Checks that every map has the shape its position requires.
    pub fn new(
        name: impl Into<String>,
        sizes: Vec<usize>,
        forward: Vec<PartialFunction>,
        backward: Vec<PartialFunction>,
        apex: usize,
        proj: Vec<PartialFunction>,
        inj: Vec<PartialFunction>,
    ) -> Result<Self, FinRelError> {
        let n = sizes.len();
        let shape = |f: &PartialFunction, d: usize, c: usize, what: String| {
            if f.dom().size() != d || f.cod().size() != c {
                Err(mismatch("chain", format!("{what} should be {d} -> {c}, got {f}")))
            } else {
                Ok(())
            }
        };
        if n == 0 || forward.len() + 1 != n || backward.len() + 1 != n || proj.len() != n || inj.len() != n {
            return Err(mismatch(
                "chain",
                format!("{n} objects need {} forward and backward maps", n.saturating_sub(1)),
            ));
        }
        for k in 0..n - 1 {
            shape(&forward[k], sizes[k], sizes[k + 1], format!("e{k}"))?;
            shape(&backward[k], sizes[k + 1], sizes[k], format!("q{k}"))?;
        }
        for k in 0..n {
            shape(&proj[k], apex, sizes[k], format!("p{k}"))?;
            shape(&inj[k], sizes[k], apex, format!("i{k}"))?;
        }
        Ok(ChainData { name: name.into(), sizes, forward, backward, apex, proj, inj })
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// `e_{n,m}` for `n <= m`, `q_{n,m}` for `n > m`.
    pub fn connecting(&self, n: usize, m: usize) -> PartialFunction {
        if n <= m {
            composite(&self.forward[n..m], self.sizes[n])
        } else {
            let qs: Vec<PartialFunction> = self.backward[m..n].iter().rev().cloned().collect();
            composite(&qs, self.sizes[n])
        }
    }

    /// The inclusions `{0..n-1} ⊆ {0..m-1}` split by restriction, with
    /// apex `D(N)`.
    pub fn pfn_restriction(n_max: usize) -> Self {
        let sizes: Vec<usize> = (0..=n_max).collect();
        let incl = |d: usize, c: usize| PartialFunction::new(d, c, (0..d).map(Some).collect()).unwrap();
        let restrict =
            |d: usize, c: usize| PartialFunction::new(d, c, (0..d).map(|k| (k < c).then_some(k)).collect()).unwrap();
        ChainData::new(
            "pfn-restriction",
            sizes.clone(),
            (0..n_max).map(|n| incl(n, n + 1)).collect(),
            (0..n_max).map(|n| restrict(n + 1, n)).collect(),
            n_max,
            sizes.iter().map(|&n| restrict(n_max, n)).collect(),
            sizes.iter().map(|&n| incl(n, n_max)).collect(),
        )
        .expect("well-shaped")
    }

    /// The same inclusions split by `k ↦ min(k, n-1)`, with apex `D(N)`
    /// plus a point at infinity (index `N`) sent to the top of each `D(n)`.
    pub fn pfn_min(n_max: usize) -> Self {
        let sizes: Vec<usize> = (0..=n_max).collect();
        let incl = |d: usize, c: usize| PartialFunction::new(d, c, (0..d).map(Some).collect()).unwrap();
        let clamp = |d: usize, c: usize| {
            PartialFunction::new(d, c, (0..d).map(|k| (c > 0).then(|| k.min(c - 1))).collect()).unwrap()
        };
        let apex = n_max + 1;
        ChainData::new(
            "pfn-min",
            sizes.clone(),
            (0..n_max).map(|n| incl(n, n + 1)).collect(),
            (0..n_max).map(|n| clamp(n + 1, n)).collect(),
            apex,
            sizes.iter().map(|&n| clamp(apex, n)).collect(),
            sizes.iter().map(|&n| incl(n, apex)).collect(),
        )
        .expect("well-shaped")
    }

    /// A one-object chain on a set of `size` elements with identity cone.
    pub fn constant(size: usize) -> Self {
        let id = PartialFunction::identity(size);
        ChainData::new("constant", vec![size], vec![], vec![], size, vec![id.clone()], vec![id]).expect("well-shaped")
    }

    /// The approximant chain with apex its last stage.
    pub fn from_approximant(a: &Approximant) -> Self {
        let last = a.sizes.len() - 1;
        let apex = a.sizes[last];
        let mut c = ChainData {
            name: format!("adamek({})", a.functor),
            sizes: a.sizes.clone(),
            forward: a.embeddings.clone(),
            backward: a.projections.clone(),
            apex,
            proj: vec![],
            inj: vec![],
        };
        c.proj = (0..=last).map(|n| c.connecting(last, n)).collect();
        c.inj = (0..=last).map(|n| c.connecting(n, last)).collect();
        c
    }
}

/// Every law reported by [`check_ambilimit_laws`], in order.
pub const AMBILIMIT_LAWS: [&str; 8] = [
    "split premise",
    "cone",
    "cocone",
    "normalization",
    "independence",
    "connecting maps",
    "embedding-projection",
    "canonical map",
];

/// Checks a truncated chain and apex against the ambilimit laws. Beyond the
/// defining laws it checks that every `e_n q_n` is below the identity and
/// that the canonical map `i_N : D(N) -> L` is a bijection.
pub fn check_ambilimit_laws(c: &ChainData) -> LawReport {
    let mut report = LawReport::new(format!("ambilimit laws for {} ({} objects, apex {})", c.name, c.len(), c.apex));
    let n = c.len();
    let then = |f: &PartialFunction, g: &PartialFunction| f.then(g).expect("chain shapes");
    let eq = |check: &mut LawCheck, lhs: PartialFunction, rhs: PartialFunction, what: String| {
        check.record(lhs == rhs, || format!("{what}: {lhs} vs {rhs}"));
    };

    let mut premise = LawCheck::new("split premise");
    for k in 0..n - 1 {
        eq(
            &mut premise,
            then(&c.forward[k], &c.backward[k]),
            PartialFunction::identity(c.sizes[k]),
            format!("q{k} e{k}"),
        );
    }
    report.push(premise.finish());

    let mut cone = LawCheck::new("cone");
    let mut cocone = LawCheck::new("cocone");
    for k in 0..n - 1 {
        eq(&mut cone, then(&c.proj[k + 1], &c.backward[k]), c.proj[k].clone(), format!("q{k} p{}", k + 1));
        eq(&mut cocone, then(&c.forward[k], &c.inj[k + 1]), c.inj[k].clone(), format!("i{} e{k}", k + 1));
    }
    report.push(cone.finish());
    report.push(cocone.finish());

    let mut norm = LawCheck::new("normalization");
    for k in 0..n {
        let (p, i) = (&c.proj[k], &c.inj[k]);
        eq(&mut norm, then(&then(i, p), i), i.clone(), format!("i{k} p{k} i{k}"));
        eq(&mut norm, then(&then(p, i), p), p.clone(), format!("p{k} i{k} p{k}"));
    }
    report.push(norm.finish());

    let idem: Vec<PartialFunction> = (0..n).map(|k| then(&c.proj[k], &c.inj[k])).collect();
    let mut indep = LawCheck::new("independence");
    for a in 0..n {
        for b in 0..n {
            eq(&mut indep, then(&idem[a], &idem[b]), then(&idem[b], &idem[a]), format!("i{a}p{a} vs i{b}p{b}"));
        }
    }
    report.push(indep.finish());

    let mut conn = LawCheck::new("connecting maps");
    for a in 0..n {
        for b in 0..n {
            eq(&mut conn, then(&c.inj[a], &c.proj[b]), c.connecting(a, b), format!("p{b} i{a}"));
        }
    }
    report.push(conn.finish());

    let mut ep = LawCheck::new("embedding-projection");
    for k in 0..n - 1 {
        let r = then(&c.backward[k], &c.forward[k]);
        let bad = below_identity(&r);
        ep.record(bad.is_none(), || format!("e{k} q{k} moves {} to {}", bad.unwrap(), r.apply(bad.unwrap()).unwrap()));
    }
    report.push(ep.finish());

    let mut canon = LawCheck::new("canonical map");
    let top = &c.inj[n - 1];
    let bijective = top.is_total() && top.is_injective() && c.sizes[n - 1] == c.apex;
    canon.record(bijective, || format!("i{} = {top} is not a bijection onto the apex", n - 1));
    report.push(canon.finish());
    report
}

/// A polynomial endofunctor on finite sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Poly {
    /// A constant set with this many elements.
    Const(usize),
    Var,
    Sum(Box<Poly>, Box<Poly>),
    Prod(Box<Poly>, Box<Poly>),
}

impl Poly {
    pub fn sum(a: Poly, b: Poly) -> Self {
        Poly::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: Poly, b: Poly) -> Self {
        Poly::Prod(Box::new(a), Box::new(b))
    }

    /// `1 + X`.
    pub fn nat() -> Self {
        Poly::sum(Poly::Const(1), Poly::Var)
    }

    /// `1 + X * X`.
    pub fn binary_trees() -> Self {
        Poly::sum(Poly::Const(1), Poly::prod(Poly::Var, Poly::Var))
    }

    /// `(1 + 1) * X`.
    pub fn streams() -> Self {
        Poly::prod(Poly::Const(2), Poly::Var)
    }

    pub fn apply_size(&self, x: usize) -> usize {
        match self {
            Poly::Const(n) => *n,
            Poly::Var => x,
            Poly::Sum(a, b) => a.apply_size(x) + b.apply_size(x),
            Poly::Prod(a, b) => a.apply_size(x) * b.apply_size(x),
        }
    }

    /// The functorial action on partial functions.
    pub fn apply_fn(&self, f: &PartialFunction) -> PartialFunction {
        match self {
            Poly::Const(n) => PartialFunction::identity(*n),
            Poly::Var => f.clone(),
            Poly::Sum(a, b) => a.apply_fn(f).oplus(&b.apply_fn(f)),
            Poly::Prod(a, b) => a.apply_fn(f).otimes(&b.apply_fn(f)),
        }
    }

    /// The body of the corresponding mu type, in the variable `x`.
    pub fn body(&self, x: &str) -> ValueType {
        match self {
            Poly::Const(n) => sized_type(*n),
            Poly::Var => ValueType::var(x),
            Poly::Sum(a, b) => ValueType::sum(a.body(x), b.body(x)),
            Poly::Prod(a, b) => ValueType::prod(a.body(x), b.body(x)),
        }
    }

    /// `mu x. F(x)`.
    pub fn mu_type(&self) -> ValueType {
        ValueType::mu("x", self.body("x"))
    }

    /// Index of `v ∈ F(stage)` where elements of the stage are indexed by `var`.
    fn index(&self, v: &Value, stage: usize, var: &dyn Fn(&Value) -> Option<usize>) -> Option<usize> {
        match (self, v) {
            (Poly::Const(n), _) => index_of(v, &sized_type(*n)),
            (Poly::Var, _) => var(v),
            (Poly::Sum(a, _), Value::InL(u)) => a.index(u, stage, var),
            (Poly::Sum(a, b), Value::InR(u)) => Some(a.apply_size(stage) + b.index(u, stage, var)?),
            (Poly::Prod(a, b), Value::Pair(u, w)) => {
                Some(a.index(u, stage, var)? * b.apply_size(stage) + b.index(w, stage, var)?)
            }
            _ => None,
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Poly::Const(n) => write!(f, "{n}"),
            Poly::Var => f.write_str("X"),
            Poly::Sum(a, b) => write!(f, "{a} + {b}"),
            Poly::Prod(a, b) => {
                let wrap = |p: &Poly| match p {
                    Poly::Sum(..) => format!("({p})"),
                    _ => p.to_string(),
                };
                write!(f, "{} * {}", wrap(a), wrap(b))
            }
        }
    }
}

/// Stages `0, F0, F²0, …` with their canonical embeddings and projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Approximant {
    pub functor: Poly,
    pub sizes: Vec<usize>,
    /// `e_k = F^k(!) : F^k 0 -> F^{k+1} 0`.
    pub embeddings: Vec<PartialFunction>,
    /// `q_k = F^k(¡) : F^{k+1} 0 -> F^k 0`, the partial inverse of `e_k`.
    pub projections: Vec<PartialFunction>,
}

pub fn adamek_approximant(f: &Poly, stages: usize) -> Approximant {
    let mut sizes = vec![0];
    let mut embeddings = Vec::new();
    let mut projections = Vec::new();
    for k in 1..stages {
        sizes.push(f.apply_size(sizes[k - 1]));
        let (e, q) = if k == 1 {
            (PartialFunction::empty(0, sizes[1]), PartialFunction::empty(sizes[1], 0))
        } else {
            (f.apply_fn(&embeddings[k - 2]), f.apply_fn(&projections[k - 2]))
        };
        embeddings.push(e);
        projections.push(q);
    }
    sizes.truncate(stages.max(1));
    Approximant { functor: f.clone(), sizes, embeddings, projections }
}

/// Index of a fold value of fold depth at most `k` in stage `k`.
pub fn stage_index(f: &Poly, sizes: &[usize], v: &Value, k: usize) -> Option<usize> {
    match v {
        Value::Fold(w) if k > 0 => {
            let var = |u: &Value| stage_index(f, sizes, u, k - 1);
            f.index(w, sizes[k - 1], &var)
        }
        _ => None,
    }
}

/// Checks the approximant levelwise and against the interpreter's values of
/// `mu x. F(x)`: values of fold depth at most `k` biject with stage `k`, and
/// the embeddings agree with the inclusion of shallower values.
pub fn check_initial_algebra_approx(f: &Poly, stages: usize) -> LawReport {
    let a = adamek_approximant(f, stages);
    let mut report = LawReport::new(format!("initial algebra approximant of F(X) = {f}, {stages} stages"));

    let mut level = LawCheck::new("levelwise");
    for k in 0..a.embeddings.len() {
        let e = &a.embeddings[k];
        let ok = e.is_total()
            && e.is_injective()
            && e.then(&a.projections[k]).ok() == Some(PartialFunction::identity(a.sizes[k]))
            && a.sizes[k + 1] == f.apply_size(a.sizes[k]);
        level.record(ok, || format!("stage {k}: e{k} = {e}, q{k} = {}", a.projections[k]));
        if k > 0 {
            let lifted = f.apply_fn(&a.embeddings[k - 1]);
            level.record(lifted == *e, || format!("F(e{}) = {lifted} differs from e{k} = {e}", k - 1));
        }
    }
    report.push(level.finish());

    let ty = f.mu_type();
    let mut values = LawCheck::new("fold values");
    let mut coherent = LawCheck::new("embedding coherence");
    for k in 0..stages {
        let vs = match unroll_mu_approximant(&ty, k) {
            Ok(vs) => vs,
            Err(e) => {
                values.record(false, || e.to_string());
                break;
            }
        };
        let mut hit = vec![false; a.sizes[k]];
        let mut ok = vs.len() == a.sizes[k];
        for v in &vs {
            match stage_index(f, &a.sizes, v, k) {
                Some(i) if i < hit.len() && !hit[i] => hit[i] = true,
                _ => ok = false,
            }
            if k > 0 {
                if let Some(i) = stage_index(f, &a.sizes, v, k - 1) {
                    let up = a.embeddings[k - 1].apply(i);
                    coherent.record(up == stage_index(f, &a.sizes, v, k), || {
                        format!("{v}: index {i} at stage {} embeds to {up:?}", k - 1)
                    });
                }
            }
        }
        values.record(ok, || format!("stage {k}: {} values of depth <= {k}, stage size {}", vs.len(), a.sizes[k]));
    }
    report.push(values.finish());
    report.push(coherent.finish());
    report
}

fn parse_err(line: usize, message: impl Into<String>) -> FinRelError {
    FinRelError::Parse { line, message: message.into() }
}

/// Non-blank lines with `#` comments and `expect-fail:` lines removed,
/// numbered from 1.
fn content_lines(src: &str) -> Vec<(usize, &str)> {
    src.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with(EXPECT_FAIL))
        .collect()
}

const EXPECT_FAIL: &str = "expect-fail:";

/// Laws a corpus file declares as failing, from `expect-fail: law, law`.
pub fn expected_failures(src: &str) -> Vec<String> {
    src.lines()
        .filter_map(|l| l.trim().strip_prefix(EXPECT_FAIL))
        .flat_map(|rest| rest.split(',').map(|s| s.trim().to_string()))
        .filter(|s| !s.is_empty())
        .collect()
}

fn expect_key<'a>(lines: &[(usize, &'a str)], at: usize, key: &str) -> Result<&'a str, FinRelError> {
    let (no, l) =
        *lines.get(at).ok_or_else(|| parse_err(lines.last().map_or(0, |x| x.0), format!("missing `{key}`")))?;
    l.strip_prefix(key).map(str::trim).ok_or_else(|| parse_err(no, format!("expected `{key}`")))
}

fn lookup(names: &[String], s: &str, line: usize) -> Result<usize, FinRelError> {
    names.iter().position(|n| n == s).ok_or_else(|| parse_err(line, format!("unknown name `{s}`")))
}

/// Parses a square table whose header row lists `names` and whose rows each
/// start with a name; returns cells indexed `[row * n + column]`.
fn parse_grid<'a>(lines: &[(usize, &'a str)], names: &[String]) -> Result<Vec<&'a str>, FinRelError> {
    let n = names.len();
    let (hno, header) = *lines.first().ok_or_else(|| parse_err(0, "missing table"))?;
    let cols: Vec<&str> = header.split_whitespace().collect();
    if cols.len() != n || cols.iter().zip(names).any(|(c, name)| c != name) {
        return Err(parse_err(hno, "table header must list every name in order"));
    }
    if lines.len() != n + 1 {
        return Err(parse_err(hno, format!("expected {n} table rows, found {}", lines.len() - 1)));
    }
    let mut cells = Vec::with_capacity(n * n);
    for (r, &(no, row)) in lines[1..].iter().enumerate() {
        let toks: Vec<&str> = row.split_whitespace().collect();
        if toks.first() != Some(&names[r].as_str()) || toks.len() != n + 1 {
            return Err(parse_err(no, format!("row should be `{}` followed by {n} entries", names[r])));
        }
        cells.extend_from_slice(&toks[1..]);
    }
    Ok(cells)
}

fn print_grid(out: &mut String, names: &[String], cell: impl Fn(usize, usize) -> String) {
    let n = names.len();
    let mut rows: Vec<Vec<String>> = vec![std::iter::once(String::new()).chain(names.iter().cloned()).collect()];
    for (r, name) in names.iter().enumerate() {
        rows.push(std::iter::once(name.clone()).chain((0..n).map(|c| cell(r, c))).collect());
    }
    let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
    for row in rows {
        let line: Vec<String> = row.iter().map(|s| format!("{s:<width$}")).collect();
        out.push_str("  ");
        out.push_str(line.join(" ").trim_end());
        out.push('\n');
    }
}

/// Groupoid file:
///
/// ```text
/// groupoid NAME
/// objects: A B
/// morphisms: AA0:A->A BB0:B->B
/// table:
///       AA0 BB0
///   AA0 AA0 -
///   BB0 -   BB0
/// ```
///
/// The entry in row `g`, column `f` is `g ∘ f`, or `-` when undefined.
pub fn parse_groupoid(src: &str) -> Result<FiniteGroupoid, FinRelError> {
    let lines = content_lines(src);
    let name = expect_key(&lines, 0, "groupoid")?;
    let objects: Vec<String> = expect_key(&lines, 1, "objects:")?.split_whitespace().map(String::from).collect();
    let mline = lines.get(2).map_or(0, |l| l.0);
    let mut morphisms = Vec::new();
    for decl in expect_key(&lines, 2, "morphisms:")?.split_whitespace() {
        let bad = || parse_err(mline, format!("morphism `{decl}` should look like `f:A->B`"));
        let (m, ends) = decl.split_once(':').ok_or_else(bad)?;
        let (s, t) = ends.split_once("->").ok_or_else(bad)?;
        morphisms.push((m.to_string(), lookup(&objects, s, mline)?, lookup(&objects, t, mline)?));
    }
    let names: Vec<String> = morphisms.iter().map(|m| m.0.clone()).collect();
    expect_key(&lines, 3, "table:")?;
    let cells = parse_grid(&lines[4..], &names)?;
    let comp = cells
        .iter()
        .map(|c| if *c == "-" { Ok(None) } else { lookup(&names, c, lines[4].0).map(Some) })
        .collect::<Result<Vec<_>, _>>()?;
    FiniteGroupoid::from_table(name, objects, morphisms, comp)
}

pub fn print_groupoid(g: &FiniteGroupoid) -> String {
    let mut out = format!("groupoid {}\nobjects: {}\nmorphisms:", g.name, g.objects.join(" "));
    for (i, m) in g.morphisms.iter().enumerate() {
        out.push_str(&format!(" {m}:{}->{}", g.objects[g.src[i]], g.objects[g.tgt[i]]));
    }
    out.push_str("\ntable:\n");
    print_grid(&mut out, &g.morphisms, |r, c| g.compose(r, c).map_or("-".into(), |h| g.morphisms[h].clone()));
    out
}

fn parse_set(cell: &str, names: &[String], line: usize) -> Result<Vec<usize>, FinRelError> {
    if cell == "-" {
        return Ok(vec![]);
    }
    cell.split(',').map(|s| lookup(names, s, line)).collect()
}

fn print_set(items: &[usize], names: &[String]) -> String {
    if items.is_empty() {
        "-".into()
    } else {
        items.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join(",")
    }
}

/// Monoid file:
///
/// ```text
/// monoid NAME
/// elements: e z
/// unit: e
/// table:
///     e z
///   e e z
///   z z z
/// ```
///
/// Entries are sets: `-` for empty, otherwise comma-separated elements.
/// The unit is a space-separated set.
pub fn parse_monoid(src: &str) -> Result<RelMonoid, FinRelError> {
    let lines = content_lines(src);
    let name = expect_key(&lines, 0, "monoid")?;
    let elements: Vec<String> = expect_key(&lines, 1, "elements:")?.split_whitespace().map(String::from).collect();
    let n = elements.len();
    let uline = lines.get(2).map_or(0, |l| l.0);
    let mut unit = Relation::empty(1, n);
    for u in expect_key(&lines, 2, "unit:")?.split_whitespace() {
        unit.set(0, lookup(&elements, u, uline)?, true);
    }
    expect_key(&lines, 3, "table:")?;
    let cells = parse_grid(&lines[4..], &elements)?;
    let mut mult = Relation::empty(n * n, n);
    for (k, cell) in cells.iter().enumerate() {
        for y in parse_set(cell, &elements, lines[4 + 1 + k / n].0)? {
            mult.set(k, y, true);
        }
    }
    RelMonoid::new(name, elements, mult, unit)
}

pub fn print_monoid(m: &RelMonoid) -> String {
    let n = m.size();
    let unit: Vec<&str> = m.unit.image(0).iter().map(|&i| m.elements[i].as_str()).collect();
    let mut out = format!("monoid {}\nelements: {}\nunit: {}\ntable:\n", m.name, m.elements.join(" "), unit.join(" "));
    print_grid(&mut out, &m.elements, |r, c| print_set(&m.mult.image(r * n + c), &m.elements));
    out
}

fn parse_targets(s: &str, dom: usize, cod: usize, line: usize) -> Result<PartialFunction, FinRelError> {
    let toks: Vec<&str> = s.split_whitespace().collect();
    if toks.len() != dom {
        return Err(parse_err(line, format!("expected {dom} targets, found {}", toks.len())));
    }
    let map = toks
        .iter()
        .map(|t| match *t {
            "-" => Ok(None),
            t => t.parse::<usize>().map(Some).map_err(|_| parse_err(line, format!("bad target `{t}`"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    PartialFunction::new(dom, cod, map).map_err(|e| parse_err(line, e.to_string()))
}

fn print_targets(f: &PartialFunction) -> String {
    (0..f.dom().size()).map(|i| f.apply(i).map_or("-".into(), |j| j.to_string())).collect::<Vec<_>>().join(" ")
}

/// Chain file:
///
/// ```text
/// chain NAME
/// sizes: 0 1 2
/// apex: 2
/// e0:
/// e1: 0
/// q0: -
/// q1: 0 -
/// p0: - -
/// ...
/// ```
///
/// Each map lists the image of every element of its domain, `-` when
/// undefined. Maps are `e`, `q` for the chain and `p`, `i` for the apex,
/// each indexed by position.
pub fn parse_chain(src: &str) -> Result<ChainData, FinRelError> {
    let lines = content_lines(src);
    let name = expect_key(&lines, 0, "chain")?;
    let sline = lines.get(1).map_or(0, |l| l.0);
    let sizes = expect_key(&lines, 1, "sizes:")?
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| parse_err(sline, format!("bad size `{t}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let aline = lines.get(2).map_or(0, |l| l.0);
    let apex: usize = expect_key(&lines, 2, "apex:")?.parse().map_err(|_| parse_err(aline, "bad apex"))?;
    let mut maps: BTreeMap<(char, usize), PartialFunction> = BTreeMap::new();
    for &(no, l) in &lines[3..] {
        let (key, rest) = l.split_once(':').ok_or_else(|| parse_err(no, "expected `kN: targets`"))?;
        let mut chars = key.chars();
        let kind = chars.next().ok_or_else(|| parse_err(no, "missing map name"))?;
        let k: usize = chars.as_str().parse().map_err(|_| parse_err(no, format!("bad map name `{key}`")))?;
        let size = |i: usize| sizes.get(i).copied().ok_or_else(|| parse_err(no, format!("no object {i}")));
        let (dom, cod) = match kind {
            'e' => (size(k)?, size(k + 1)?),
            'q' => (size(k + 1)?, size(k)?),
            'p' => (apex, size(k)?),
            'i' => (size(k)?, apex),
            _ => return Err(parse_err(no, format!("unknown map kind `{kind}`"))),
        };
        if maps.insert((kind, k), parse_targets(rest, dom, cod, no)?).is_some() {
            return Err(parse_err(no, format!("duplicate map `{key}`")));
        }
    }
    let last = lines.last().map_or(0, |l| l.0);
    let mut take = |kind: char, count: usize| {
        (0..count)
            .map(|k| maps.remove(&(kind, k)).ok_or_else(|| parse_err(last, format!("missing map `{kind}{k}`"))))
            .collect::<Result<Vec<_>, _>>()
    };
    let n = sizes.len();
    let forward = take('e', n.saturating_sub(1))?;
    let backward = take('q', n.saturating_sub(1))?;
    let proj = take('p', n)?;
    let inj = take('i', n)?;
    ChainData::new(name, sizes, forward, backward, apex, proj, inj)
}

pub fn print_chain(c: &ChainData) -> String {
    let sizes: Vec<String> = c.sizes.iter().map(usize::to_string).collect();
    let mut out = format!("chain {}\nsizes: {}\napex: {}\n", c.name, sizes.join(" "), c.apex);
    for (kind, maps) in [('e', &c.forward), ('q', &c.backward), ('p', &c.proj), ('i', &c.inj)] {
        for (k, f) in maps.iter().enumerate() {
            out.push_str(format!("{kind}{k}: {}", print_targets(f)).trim_end());
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// `x R y` iff some `m` has `x f m` and `m g y`.
    fn compose_by_definition(f: &Relation, g: &Relation) -> Relation {
        Relation::from_fn(f.dom(), g.cod(), |x, y| (0..f.cod()).any(|m| f.get(x, m) && g.get(m, y)))
    }

    #[test]
    fn composition_matches_set_builder_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let (a, b, c) = (rng.gen_range(0..=5), rng.gen_range(0..=5), rng.gen_range(0..=5));
            let f = Relation::random(&mut rng, a, b, 0.4);
            let g = Relation::random(&mut rng, b, c, 0.4);
            let h = Relation::random(&mut rng, c, a, 0.4);
            let fg = f.then(&g).unwrap();
            assert_eq!(fg, compose_by_definition(&f, &g));
            assert_eq!(fg.dagger(), g.dagger().then(&f.dagger()).unwrap());
            assert_eq!(f.dagger().dagger(), f);
            assert_eq!(Relation::identity(a).then(&f).unwrap(), f);
            assert_eq!(f.then(&Relation::identity(b)).unwrap(), f);
            assert_eq!(fg.then(&h).unwrap(), f.then(&g.then(&h).unwrap()).unwrap());
        }
    }

    #[test]
    fn shape_errors() {
        let f = Relation::empty(2, 3);
        assert!(matches!(f.then(&f), Err(FinRelError::ShapeMismatch { .. })));
        assert!(Relation::from_pairs(1, 1, &[(1, 0)]).is_err());
    }

    #[test]
    fn groups_are_groups() {
        for g in FiniteGroup::all_up_to_order_six() {
            let n = g.order;
            for a in 0..n {
                assert_eq!(g.mul(0, a), a);
                assert!((0..n).any(|b| g.mul(a, b) == 0), "{}", g.name);
                for b in 0..n {
                    for c in 0..n {
                        assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)), "{}", g.name);
                    }
                }
            }
        }
        let s3 = FiniteGroup::s3();
        assert!((0..6).any(|a| (0..6).any(|b| s3.mul(a, b) != s3.mul(b, a))));
    }

    #[test]
    fn small_groupoids_are_bounded_and_distinct() {
        let all = FiniteGroupoid::all_small();
        let mut names: Vec<&str> = all.iter().map(|g| g.name.as_str()).collect();
        names.dedup();
        assert_eq!(names.len(), all.len());
        for g in &all {
            assert!(g.objects.len() <= 3 && g.morphisms.len() <= 6, "{}", g.name);
        }
        assert!(names.contains(&"z1"));
        assert!(names.contains(&"z1+pair"));
        assert!(names.contains(&"s3"));
        assert!(names.contains(&"z1+z1+z1"));
    }

    #[test]
    fn missing_inverse_is_rejected() {
        // one object with a non-invertible idempotent
        let err = FiniteGroupoid::from_table(
            "bad",
            vec!["A".into()],
            vec![("e".into(), 0, 0), ("z".into(), 0, 0)],
            vec![Some(0), Some(1), Some(1), Some(1)],
        )
        .unwrap_err();
        assert_eq!(err, FinRelError::InvalidGroupoid("morphism z has no inverse".into()));
    }

    #[test]
    fn groupoid_monoid_examples() {
        let triv = FiniteGroupoid::from_components("z1", &[(1, FiniteGroup::cyclic(1))]).unwrap();
        let m = groupoid_to_frobenius(&triv).unwrap();
        assert_eq!(m.size(), 1);
        assert!(m.is_monoid());
        assert_eq!(m.check_frobenius().status, Status::Pass);

        let z2 = FiniteGroupoid::from_components("z2", &[(1, FiniteGroup::cyclic(2))]).unwrap();
        let m = groupoid_to_frobenius(&z2).unwrap();
        assert_eq!(m.size(), 2);
        assert_eq!(m.check_frobenius().status, Status::Pass);

        let discrete =
            FiniteGroupoid::from_components("z1+z1", &[(1, FiniteGroup::cyclic(1)), (1, FiniteGroup::cyclic(1))])
                .unwrap();
        let m = groupoid_to_frobenius(&discrete).unwrap();
        assert_eq!(m.unit.image(0), vec![0, 1]);
        assert!(m.is_monoid());
    }

    #[test]
    fn absorbing_monoid_is_not_frobenius() {
        let m = RelMonoid::from_table("absorbing", &["e", "z"], &[0, 1, 1, 1], 0).unwrap();
        assert!(m.is_monoid());
        let r = m.check_frobenius();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.counterexample.as_deref(), Some("(z, e) -> (e, z): left composite false, μ†μ true"));
    }

    #[test]
    fn kleisli_dagger_of_unit_is_unit() {
        let z2 =
            RelMonoid::from_groupoid(&FiniteGroupoid::from_components("z2", &[(1, FiniteGroup::cyclic(2))]).unwrap());
        for x in 0..4 {
            let eta = kleisli_unit(&z2, x);
            assert_eq!(kleisli_dagger(&eta, &z2).unwrap(), eta);
        }
        assert!(kleisli_dagger(&Relation::empty(2, 3), &z2).is_err());
    }

    #[test]
    fn free_and_groupoid_actions_are_fem() {
        for g in FiniteGroupoid::all_small().iter().take(12) {
            let m = RelMonoid::from_groupoid(g);
            for alg in [
                RelAlgebra::free(&m, 2),
                RelAlgebra::groupoid_action(g, GroupoidAction::Regular),
                RelAlgebra::groupoid_action(g, GroupoidAction::Trivial(2)),
            ] {
                assert!(alg.is_em(), "{}", alg.name);
                assert_eq!(alg.check_fem().status, Status::Pass, "{}", alg.name);
            }
        }
    }

    #[test]
    fn restriction_chain_passes_min_chain_does_not() {
        let good = check_ambilimit_laws(&ChainData::pfn_restriction(6));
        assert!(good.passed(), "{good}");
        let bad = check_ambilimit_laws(&ChainData::pfn_min(6));
        for law in ["split premise", "cone", "cocone", "normalization", "independence", "connecting maps"] {
            assert_eq!(bad.get(law).unwrap().status, Status::Pass, "{law}\n{bad}");
        }
        assert_eq!(bad.get("embedding-projection").unwrap().status, Status::Fail);
        assert_eq!(bad.get("canonical map").unwrap().status, Status::Fail);
        assert!(check_ambilimit_laws(&ChainData::constant(3)).passed());
    }

    #[test]
    fn approximant_sizes() {
        assert_eq!(adamek_approximant(&Poly::nat(), 5).sizes, vec![0, 1, 2, 3, 4]);
        assert_eq!(adamek_approximant(&Poly::Const(1), 4).sizes, vec![0, 1, 1, 1]);
        assert_eq!(adamek_approximant(&Poly::binary_trees(), 4).sizes, vec![0, 1, 2, 5]);
        assert_eq!(adamek_approximant(&Poly::Var, 4).sizes, vec![0, 0, 0, 0]);
    }

    #[test]
    fn approximants_check_out() {
        for f in [Poly::nat(), Poly::binary_trees(), Poly::streams(), Poly::Const(1), Poly::Var] {
            let r = check_initial_algebra_approx(&f, 4);
            assert!(r.passed(), "{r}");
            for n in 1..=4 {
                let c = ChainData::from_approximant(&adamek_approximant(&f, n));
                assert!(check_ambilimit_laws(&c).passed(), "{f} at {n}");
            }
        }
    }

    #[test]
    fn formats_round_trip() {
        for g in FiniteGroupoid::all_small() {
            let text = print_groupoid(&g);
            assert_eq!(parse_groupoid(&text).unwrap(), g, "{text}");
        }
        let m = RelMonoid::from_table("absorbing", &["e", "z"], &[0, 1, 1, 1], 0).unwrap();
        assert_eq!(parse_monoid(&print_monoid(&m)).unwrap(), m);
        for c in [ChainData::pfn_restriction(3), ChainData::pfn_min(3), ChainData::constant(2)] {
            assert_eq!(parse_chain(&print_chain(&c)).unwrap(), c);
        }
    }

    #[test]
    fn pinned_algebra_is_what_the_search_finds() {
        let found = search_em_not_fem(2, true).unwrap();
        let pinned = pinned_em_not_fem();
        assert_eq!((&found.monoid.mult, &found.monoid.unit), (&pinned.monoid.mult, &pinned.monoid.unit));
        assert_eq!((found.carrier, &found.action), (pinned.carrier, &pinned.action));
        assert!(pinned.is_em());
        assert_eq!(pinned.monoid.check_frobenius().status, Status::Pass);
        let r = pinned.check_fem();
        assert_eq!(r.counterexample.as_deref(), Some("(0, a) -> (1, b): lhs false, rhs true"));
    }

    #[test]
    fn expectations_are_read_and_skipped() {
        let src = "monoid m\nexpect-fail: frobenius, left unit\nelements: a\nunit: a\ntable:\n  a\na a\n";
        assert_eq!(expected_failures(src), vec!["frobenius", "left unit"]);
        assert!(parse_monoid(src).is_ok());
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = parse_monoid("monoid m\nelements: a\nunit: b\ntable:\n  a\na a\n").unwrap_err();
        assert_eq!(err, FinRelError::Parse { line: 3, message: "unknown name `b`".into() });
        let err = parse_chain("chain c\nsizes: 1 2\napex: 2\ne0: 0\n").unwrap_err();
        assert!(matches!(err, FinRelError::Parse { .. }));
    }
}
