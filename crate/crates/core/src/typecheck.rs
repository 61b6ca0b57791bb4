//! Value typing and combinator type inference.
//!
//! Inference is first-order unification over value types with
//! metavariables. Free type variables in annotations and ascriptions are
//! rigid constants; `mu` types only unify with alpha-equal `mu` types.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::parser::{print_expr, Expr, Pos, SourceProgram};
use crate::syntax::{Combinator, Value, ValueType};

/// `domain <-> codomain`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CombinatorType {
    pub domain: ValueType,
    pub codomain: ValueType,
}

impl CombinatorType {
    pub fn new(domain: ValueType, codomain: ValueType) -> Self {
        CombinatorType { domain, codomain }
    }

    pub fn flip(&self) -> Self {
        CombinatorType::new(self.codomain.clone(), self.domain.clone())
    }

    pub fn is_closed(&self) -> bool {
        self.domain.is_closed() && self.codomain.is_closed()
    }
}

impl fmt::Display for CombinatorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <-> {}", self.domain, self.codomain)
    }
}

/// Bindings of type variables to closed types.
pub type Assignment = BTreeMap<String, ValueType>;

#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize)]
pub enum TypeError {
    #[error("cannot unify `{left}` with `{right}` in `{site}`")]
    UnificationFailure { left: String, right: String, site: String },
    #[error("occurs check: `{var}` occurs in `{ty}` in `{site}`")]
    OccursCheck { var: String, ty: String, site: String },
    #[error("ambiguous type: `{ty}` in `{site}` is not determined; add an ascription")]
    AmbiguousType { ty: String, site: String },
    #[error("ill-formed type `{ty}`: {reason}")]
    IllFormedType { ty: String, reason: String },
    #[error("`{keyword}` annotation `{ty}` is not a mu type")]
    NotMuAnnotation { keyword: String, ty: String },
    #[error("declaration `{name}` has no type ascription")]
    MissingAscription { name: String },
    #[error("`{name}` refers to a declaration that failed to check")]
    BrokenReference { name: String },
}

#[derive(Clone, Debug)]
enum Ty {
    Meta(usize),
    Zero,
    One,
    Sum(Box<Ty>, Box<Ty>),
    Prod(Box<Ty>, Box<Ty>),
    Rigid(String),
    Mu(ValueType),
}

impl Ty {
    fn sum(a: Ty, b: Ty) -> Ty {
        Ty::Sum(Box::new(a), Box::new(b))
    }

    fn prod(a: Ty, b: Ty) -> Ty {
        Ty::Prod(Box::new(a), Box::new(b))
    }

    fn from_type(t: &ValueType) -> Ty {
        match t {
            ValueType::Zero => Ty::Zero,
            ValueType::One => Ty::One,
            ValueType::Sum(a, b) => Ty::sum(Ty::from_type(a), Ty::from_type(b)),
            ValueType::Prod(a, b) => Ty::prod(Ty::from_type(a), Ty::from_type(b)),
            ValueType::Var(x) => Ty::Rigid(x.clone()),
            ValueType::Mu(..) => Ty::Mu(t.clone()),
        }
    }

    /// Metavariables become `meta_name(i)`.
    fn to_type(&self, meta_name: &dyn Fn(usize) -> String) -> ValueType {
        match self {
            Ty::Meta(i) => ValueType::Var(meta_name(*i)),
            Ty::Zero => ValueType::Zero,
            Ty::One => ValueType::One,
            Ty::Sum(a, b) => ValueType::sum(a.to_type(meta_name), b.to_type(meta_name)),
            Ty::Prod(a, b) => ValueType::prod(a.to_type(meta_name), b.to_type(meta_name)),
            Ty::Rigid(x) => ValueType::Var(x.clone()),
            Ty::Mu(t) => t.clone(),
        }
    }

    fn first_meta(&self) -> Option<usize> {
        match self {
            Ty::Meta(i) => Some(*i),
            Ty::Sum(a, b) | Ty::Prod(a, b) => a.first_meta().or_else(|| b.first_meta()),
            _ => None,
        }
    }
}

fn meta_display(i: usize) -> String {
    format!("?{i}")
}

enum Clash {
    Mismatch,
    Occurs(usize, Ty),
}

#[derive(Default)]
struct Unifier {
    subst: Vec<Option<Ty>>,
}

impl Unifier {
    fn fresh(&mut self) -> Ty {
        self.subst.push(None);
        Ty::Meta(self.subst.len() - 1)
    }

    fn shallow(&self, t: &Ty) -> Ty {
        let mut cur = t.clone();
        while let Ty::Meta(i) = cur {
            match &self.subst[i] {
                Some(next) => cur = next.clone(),
                None => break,
            }
        }
        cur
    }

    fn resolve(&self, t: &Ty) -> Ty {
        match self.shallow(t) {
            Ty::Sum(a, b) => Ty::sum(self.resolve(&a), self.resolve(&b)),
            Ty::Prod(a, b) => Ty::prod(self.resolve(&a), self.resolve(&b)),
            other => other,
        }
    }

    fn occurs(&self, m: usize, t: &Ty) -> bool {
        match self.shallow(t) {
            Ty::Meta(i) => i == m,
            Ty::Sum(a, b) | Ty::Prod(a, b) => self.occurs(m, &a) || self.occurs(m, &b),
            _ => false,
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> Result<(), Clash> {
        let (a, b) = (self.shallow(a), self.shallow(b));
        match (&a, &b) {
            (Ty::Meta(i), Ty::Meta(j)) if i == j => Ok(()),
            (Ty::Meta(i), Ty::Meta(j)) => {
                // bind the younger variable to the older one
                let (hi, lo) = if i > j { (*i, *j) } else { (*j, *i) };
                self.subst[hi] = Some(Ty::Meta(lo));
                Ok(())
            }
            (Ty::Meta(i), t) | (t, Ty::Meta(i)) => {
                if self.occurs(*i, t) {
                    return Err(Clash::Occurs(*i, t.clone()));
                }
                self.subst[*i] = Some(t.clone());
                Ok(())
            }
            (Ty::Zero, Ty::Zero) | (Ty::One, Ty::One) => Ok(()),
            (Ty::Sum(a1, a2), Ty::Sum(b1, b2)) | (Ty::Prod(a1, a2), Ty::Prod(b1, b2)) => {
                self.unify(a1, b1)?;
                self.unify(a2, b2)
            }
            (Ty::Rigid(x), Ty::Rigid(y)) if x == y => Ok(()),
            (Ty::Mu(s), Ty::Mu(t)) if s == t => Ok(()),
            _ => Err(Clash::Mismatch),
        }
    }

    fn show(&self, t: &Ty) -> String {
        self.resolve(t).to_type(&meta_display).to_string()
    }

    fn unify_at(&mut self, a: &Ty, b: &Ty, site: &dyn Fn() -> String) -> Result<(), TypeError> {
        match self.unify(a, b) {
            Ok(()) => Ok(()),
            Err(Clash::Mismatch) => {
                Err(TypeError::UnificationFailure { left: self.show(a), right: self.show(b), site: site() })
            }
            Err(Clash::Occurs(m, t)) => {
                Err(TypeError::OccursCheck { var: meta_display(m), ty: self.show(&t), site: site() })
            }
        }
    }
}

/// A typing derivation: the resolved type at every node, with premises in
/// the order of the combinator's children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub ty: CombinatorType,
    pub premises: Vec<Derivation>,
}

struct Node {
    dom: Ty,
    cod: Ty,
    site: String,
    premises: Vec<Node>,
}

fn check_annotation(keyword: &str, t: &ValueType) -> Result<(), TypeError> {
    match t {
        ValueType::Mu(..) => Ok(()),
        _ => Err(TypeError::NotMuAnnotation { keyword: keyword.into(), ty: t.to_string() }),
    }
}

fn basic_schema(u: &mut Unifier, c: &Combinator) -> Result<(Ty, Ty), TypeError> {
    use Combinator::*;
    let mut m = || u.fresh();
    Ok(match c {
        Id => {
            let a = m();
            (a.clone(), a)
        }
        AssocLPlus | AssocRPlus => {
            let (a, b, c2) = (m(), m(), m());
            let right = Ty::sum(a.clone(), Ty::sum(b.clone(), c2.clone()));
            let left = Ty::sum(Ty::sum(a, b), c2);
            if matches!(c, AssocLPlus) {
                (right, left)
            } else {
                (left, right)
            }
        }
        UnitLPlus | UnitRPlus => {
            let a = m();
            let with_zero = Ty::sum(Ty::Zero, a.clone());
            if matches!(c, UnitLPlus) {
                (with_zero, a)
            } else {
                (a, with_zero)
            }
        }
        SwapPlus => {
            let (a, b) = (m(), m());
            (Ty::sum(a.clone(), b.clone()), Ty::sum(b, a))
        }
        AssocLTimes | AssocRTimes => {
            let (a, b, c2) = (m(), m(), m());
            let right = Ty::prod(a.clone(), Ty::prod(b.clone(), c2.clone()));
            let left = Ty::prod(Ty::prod(a, b), c2);
            if matches!(c, AssocLTimes) {
                (right, left)
            } else {
                (left, right)
            }
        }
        UnitLTimes | UnitRTimes => {
            let a = m();
            let with_one = Ty::prod(Ty::One, a.clone());
            if matches!(c, UnitLTimes) {
                (with_one, a)
            } else {
                (a, with_one)
            }
        }
        SwapTimes => {
            let (a, b) = (m(), m());
            (Ty::prod(a.clone(), b.clone()), Ty::prod(b, a))
        }
        Distrib | Factor => {
            let (a, b, c2) = (m(), m(), m());
            let lhs = Ty::prod(Ty::sum(a.clone(), b.clone()), c2.clone());
            let rhs = Ty::sum(Ty::prod(a, c2.clone()), Ty::prod(b, c2));
            if matches!(c, Distrib) {
                (lhs, rhs)
            } else {
                (rhs, lhs)
            }
        }
        Absorb | Unabsorb => {
            let a = m();
            let lhs = Ty::prod(Ty::Zero, a);
            if matches!(c, Absorb) {
                (lhs, Ty::Zero)
            } else {
                (Ty::Zero, lhs)
            }
        }
        Fold(t) | Unfold(t) => {
            check_annotation(c.keyword().unwrap(), t)?;
            let unfolded = Ty::from_type(&t.unfold_mu().expect("mu annotation"));
            let folded = Ty::Mu(t.clone());
            if matches!(c, Fold(_)) {
                (unfolded, folded)
            } else {
                (folded, unfolded)
            }
        }
        _ => unreachable!("not a basic combinator"),
    })
}

fn infer_node(u: &mut Unifier, e: &Expr, env: &HashMap<String, CombinatorType>) -> Result<Node, TypeError> {
    let site = || print_expr(e);
    match e {
        Expr::Basic(c) => {
            let (dom, cod) = basic_schema(u, c)?;
            Ok(Node { dom, cod, site: site(), premises: vec![] })
        }
        Expr::Ref(name, _) => {
            let ty = env.get(name).ok_or_else(|| TypeError::BrokenReference { name: name.clone() })?;
            Ok(Node {
                dom: Ty::from_type(&ty.domain),
                cod: Ty::from_type(&ty.codomain),
                site: site(),
                premises: vec![],
            })
        }
        Expr::Comp(f, g) => {
            let nf = infer_node(u, f, env)?;
            let ng = infer_node(u, g, env)?;
            u.unify_at(&nf.cod, &ng.dom, &site)?;
            Ok(Node { dom: nf.dom.clone(), cod: ng.cod.clone(), site: site(), premises: vec![nf, ng] })
        }
        Expr::Sum(f, g) | Expr::Prod(f, g) => {
            let nf = infer_node(u, f, env)?;
            let ng = infer_node(u, g, env)?;
            let join = if matches!(e, Expr::Sum(..)) { Ty::sum } else { Ty::prod };
            Ok(Node {
                dom: join(nf.dom.clone(), ng.dom.clone()),
                cod: join(nf.cod.clone(), ng.cod.clone()),
                site: site(),
                premises: vec![nf, ng],
            })
        }
        Expr::Trace(f) => {
            let nf = infer_node(u, f, env)?;
            let (a, b, loop_ty) = (u.fresh(), u.fresh(), u.fresh());
            u.unify_at(&nf.dom, &Ty::sum(a.clone(), loop_ty.clone()), &site)?;
            u.unify_at(&nf.cod, &Ty::sum(b.clone(), loop_ty), &site)?;
            Ok(Node { dom: a, cod: b, site: site(), premises: vec![nf] })
        }
        Expr::Inv(f) => {
            let nf = infer_node(u, f, env)?;
            Ok(Node { dom: nf.cod.clone(), cod: nf.dom.clone(), site: site(), premises: vec![nf] })
        }
    }
}

fn finish(u: &Unifier, node: &Node) -> Result<Derivation, TypeError> {
    let mut premises = Vec::with_capacity(node.premises.len());
    for p in &node.premises {
        premises.push(finish(u, p)?);
    }
    let side = |t: &Ty| {
        let r = u.resolve(t);
        match r.first_meta() {
            Some(_) => Err(TypeError::AmbiguousType { ty: u.show(t), site: node.site.clone() }),
            None => Ok(r.to_type(&meta_display)),
        }
    };
    let ty = CombinatorType::new(side(&node.dom)?, side(&node.cod)?);
    Ok(Derivation { ty, premises })
}

fn ill_formed_if_open(t: &ValueType) -> Result<(), TypeError> {
    if t.is_closed() {
        Ok(())
    } else {
        let vars: Vec<_> = t.free_vars().into_iter().collect();
        Err(TypeError::IllFormedType {
            ty: t.to_string(),
            reason: format!("free type variable(s) {}", vars.join(", ")),
        })
    }
}

/// Infers the type of `e`, where `env` gives the types of referenced
/// declarations.
pub fn derive_expr(
    e: &Expr,
    env: &HashMap<String, CombinatorType>,
    ascription: Option<&CombinatorType>,
) -> Result<Derivation, TypeError> {
    let mut u = Unifier::default();
    let root = infer_node(&mut u, e, env)?;
    if let Some(asc) = ascription {
        let site = || print_expr(e);
        u.unify_at(&root.dom, &Ty::from_type(&asc.domain), &site)?;
        u.unify_at(&root.cod, &Ty::from_type(&asc.codomain), &site)?;
    }
    finish(&u, &root)
}

/// Full derivation for `c`. Free variables in the ascription are rigid.
pub fn derive(c: &Combinator, ascription: Option<&CombinatorType>) -> Result<Derivation, TypeError> {
    derive_expr(&Expr::from(c), &HashMap::new(), ascription)
}

pub fn infer_combinator(c: &Combinator, ascription: Option<&CombinatorType>) -> Result<CombinatorType, TypeError> {
    derive(c, ascription).map(|d| d.ty)
}

/// The most general type of `c`, with unsolved unknowns left as type
/// variables.
pub fn principal_type(c: &Combinator) -> Result<CombinatorType, TypeError> {
    let mut u = Unifier::default();
    let root = infer_node(&mut u, &Expr::from(c), &HashMap::new())?;
    let side = |t: &Ty| u.resolve(t).to_type(&meta_display);
    Ok(CombinatorType::new(side(&root.dom), side(&root.cod)))
}

/// Whether `v : a`.
pub fn check_value(v: &Value, a: &ValueType) -> Result<bool, TypeError> {
    ill_formed_if_open(a)?;
    Ok(has_type(v, a))
}

fn has_type(v: &Value, a: &ValueType) -> bool {
    match (v, a) {
        (Value::Unit, ValueType::One) => true,
        (Value::InL(x), ValueType::Sum(l, _)) => has_type(x, l),
        (Value::InR(x), ValueType::Sum(_, r)) => has_type(x, r),
        (Value::Pair(x, y), ValueType::Prod(l, r)) => has_type(x, l) && has_type(y, r),
        (Value::Fold(x), ValueType::Mu(..)) => has_type(x, &a.unfold_mu().unwrap()),
        _ => false,
    }
}

/// A type error located at a declaration.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{pos}: in `{name}`: {error}")]
pub struct DeclarationError {
    pub name: String,
    pub pos: Pos,
    pub error: TypeError,
}

/// Checks every declaration against its ascription, in order. All
/// failures are collected.
pub fn check_program(p: &SourceProgram) -> Result<BTreeMap<String, CombinatorType>, Vec<DeclarationError>> {
    let mut env: HashMap<String, CombinatorType> = HashMap::new();
    let mut errors = Vec::new();
    for decl in &p.declarations {
        let result = (|| {
            let (dom, cod) =
                decl.ascription.clone().ok_or_else(|| TypeError::MissingAscription { name: decl.name.clone() })?;
            ill_formed_if_open(&dom)?;
            ill_formed_if_open(&cod)?;
            let asc = CombinatorType::new(dom, cod);
            derive_expr(&decl.body, &env, Some(&asc)).map(|d| d.ty)
        })();
        match result {
            Ok(ty) => {
                env.insert(decl.name.clone(), ty);
            }
            Err(error) => errors.push(DeclarationError { name: decl.name.clone(), pos: decl.pos, error }),
        }
    }
    if errors.is_empty() {
        Ok(env.into_iter().collect())
    } else {
        Err(errors)
    }
}

/// Unifies equations between types whose variables are all unknowns.
/// Returns the solved form: each variable mapped to its fully resolved
/// type, where unsolved variables stand for themselves.
pub fn unify_constraints(constraints: &[(ValueType, ValueType)]) -> Result<BTreeMap<String, ValueType>, TypeError> {
    let mut names: Vec<String> =
        constraints.iter().flat_map(|(a, b)| a.free_vars().into_iter().chain(b.free_vars())).collect();
    names.sort();
    names.dedup();
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    fn lift(t: &ValueType, index: &HashMap<&str, usize>) -> Ty {
        match t {
            ValueType::Var(x) => Ty::Meta(index[x.as_str()]),
            ValueType::Sum(a, b) => Ty::sum(lift(a, index), lift(b, index)),
            ValueType::Prod(a, b) => Ty::prod(lift(a, index), lift(b, index)),
            other => Ty::from_type(other),
        }
    }
    let mut u = Unifier { subst: vec![None; names.len()] };
    let name_of = |i: usize| names[i].clone();
    for (a, b) in constraints {
        let (ta, tb) = (lift(a, &index), lift(b, &index));
        match u.unify(&ta, &tb) {
            Ok(()) => {}
            Err(Clash::Mismatch) => {
                return Err(TypeError::UnificationFailure {
                    left: u.resolve(&ta).to_type(&name_of).to_string(),
                    right: u.resolve(&tb).to_type(&name_of).to_string(),
                    site: format!("{a} = {b}"),
                })
            }
            Err(Clash::Occurs(m, t)) => {
                return Err(TypeError::OccursCheck {
                    var: names[m].clone(),
                    ty: u.resolve(&t).to_type(&name_of).to_string(),
                    site: format!("{a} = {b}"),
                })
            }
        }
    }
    Ok(names.iter().enumerate().map(|(i, n)| (n.clone(), u.resolve(&Ty::Meta(i)).to_type(&name_of))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_combinator, parse_program, parse_type};
    use Combinator as C;
    use ValueType as T;

    fn ty(a: &str, b: &str) -> CombinatorType {
        CombinatorType::new(parse_type(a).unwrap(), parse_type(b).unwrap())
    }

    #[test]
    fn value_rules() {
        assert!(check_value(&Value::Unit, &T::One).unwrap());
        assert!(check_value(&Value::inl(Value::Unit), &T::sum(T::One, T::Zero)).unwrap());
        assert!(check_value(&Value::fold(Value::inl(Value::Unit)), &T::nat()).unwrap());
        assert!(!check_value(&Value::inr(Value::Unit), &T::sum(T::One, T::Zero)).unwrap());
        assert!(!check_value(&Value::Unit, &T::Zero).unwrap());
        assert!(matches!(check_value(&Value::Unit, &T::var("x")), Err(TypeError::IllFormedType { .. })));
    }

    #[test]
    fn fold_schema() {
        let got = infer_combinator(&C::Fold(T::nat()), None).unwrap();
        assert_eq!(got, CombinatorType::new(T::sum(T::One, T::nat()), T::nat()));
    }

    #[test]
    fn id_with_ascription() {
        assert_eq!(infer_combinator(&C::Id, Some(&ty("1", "1"))).unwrap(), ty("1", "1"));
    }

    #[test]
    fn id_without_ascription_is_ambiguous() {
        assert!(matches!(infer_combinator(&C::Id, None), Err(TypeError::AmbiguousType { .. })));
        let p = principal_type(&C::then(C::UnitLPlus, C::SwapPlus)).unwrap();
        assert_eq!(p.to_string(), "0 + ?1 + ?2 <-> ?2 + ?1");
    }

    #[test]
    fn unit_then_swap_against_bad_ascription() {
        let c = C::then(C::UnitLPlus, C::SwapPlus);
        let err = infer_combinator(&c, Some(&ty("0 + 1", "1 + 0"))).unwrap_err();
        assert!(matches!(err, TypeError::UnificationFailure { .. }), "{err}");
    }

    #[test]
    fn trace_swap_program() {
        let p = parse_program("f : 1+1 <-> 1+1 = trace(swap+)").unwrap();
        let types = check_program(&p).unwrap();
        assert_eq!(types["f"], ty("1 + 1", "1 + 1"));
        let d = derive(&C::trace(C::SwapPlus), Some(&ty("1 + 1", "1 + 1"))).unwrap();
        assert_eq!(d.premises[0].ty, ty("(1 + 1) + (1 + 1)", "(1 + 1) + (1 + 1)"));
    }

    #[test]
    fn trace_loop_type_must_be_determined() {
        // trace(id) at 1 <-> 1 leaves the loop type free
        let err = infer_combinator(&C::trace(C::Id), Some(&ty("1", "1"))).unwrap_err();
        assert!(matches!(err, TypeError::AmbiguousType { .. }));
        let p = parse_program("f : 1 <-> 1 = trace(id)").unwrap();
        let errs = check_program(&p).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].name, "f");
    }

    #[test]
    fn programs_need_ascriptions_and_closed_types() {
        let errs = check_program(&parse_program("f = id").unwrap()).unwrap_err();
        assert!(matches!(errs[0].error, TypeError::MissingAscription { .. }));
        let errs = check_program(&parse_program("f : a <-> a = id").unwrap()).unwrap_err();
        assert!(matches!(errs[0].error, TypeError::IllFormedType { .. }));
    }

    #[test]
    fn references_use_declared_types() {
        let src = "s : 1 + 1 <-> 1 + 1 = swap+\n\
                   t : (1 + 1) * 1 <-> 1 * (1 + 1) = s (*) id ; swap*\n\
                   bad : 1 <-> 1 = s\n\
                   worse : 1 + 1 <-> 1 + 1 = bad\n";
        let errs = check_program(&parse_program(src).unwrap()).unwrap_err();
        let names: Vec<_> = errs.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, ["bad", "worse"]);
        assert!(matches!(errs[1].error, TypeError::BrokenReference { .. }));
    }

    #[test]
    fn fold_annotation_must_be_mu() {
        let err = infer_combinator(&C::Fold(T::One), None).unwrap_err();
        assert!(matches!(err, TypeError::NotMuAnnotation { .. }));
    }

    #[test]
    fn distrib_schema() {
        let d = infer_combinator(&C::Distrib, Some(&ty("(1 + 0) * 1", "1 * 1 + 0 * 1"))).unwrap();
        assert_eq!(d, ty("(1 + 0) * 1", "1 * 1 + 0 * 1"));
    }

    #[test]
    fn dagger_flips_inferred_type() {
        let c = parse_combinator("swap* ; distrib ; swap+").unwrap();
        let asc = ty("1 * (1 + 1)", "1 * 1 + 1 * 1");
        let t = infer_combinator(&c, Some(&asc)).unwrap();
        let back = infer_combinator(&c.dagger(), Some(&t.flip())).unwrap();
        assert_eq!(back, t.flip());
        let inv = infer_combinator(&C::inv(c), Some(&t.flip())).unwrap();
        assert_eq!(inv, t.flip());
    }

    #[test]
    fn open_ascriptions_are_rigid() {
        let t = infer_combinator(&C::SwapPlus, Some(&ty("a + b", "b + a"))).unwrap();
        assert_eq!(t, ty("a + b", "b + a"));
        assert!(infer_combinator(&C::SwapPlus, Some(&ty("a + b", "a + b"))).is_err());
    }

    #[test]
    fn mu_types_unify_up_to_alpha() {
        let c = C::then(C::Unfold(parse_type("mu y. 1 + y").unwrap()), C::Fold(T::nat()));
        assert_eq!(infer_combinator(&c, None).unwrap(), CombinatorType::new(T::nat(), T::nat()));
    }

    #[test]
    fn occurs_check_in_constraints() {
        let err = unify_constraints(&[(T::var("a"), T::sum(T::var("a"), T::One))]).unwrap_err();
        assert!(matches!(err, TypeError::OccursCheck { .. }));
    }

    #[test]
    fn constraint_solving() {
        let got = unify_constraints(&[
            (T::sum(T::var("a"), T::var("b")), T::sum(T::One, T::var("c"))),
            (T::var("c"), T::prod(T::var("a"), T::Zero)),
        ])
        .unwrap();
        assert_eq!(got["a"], T::One);
        assert_eq!(got["b"], T::prod(T::One, T::Zero));
    }
}
