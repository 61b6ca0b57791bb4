//! Forward and backward evaluation of combinators on values.

use std::fmt;

use thiserror::Error;

use crate::syntax::{Combinator, Value, ValueType};

/// Outcome of running a combinator on a value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EvalResult {
    Defined(Value),
    /// Outside the domain of the partial map. Not an error.
    Undefined,
    /// Fuel ran out after this many steps.
    OutOfFuel(u64),
}

impl EvalResult {
    pub fn defined(self) -> Option<Value> {
        match self {
            EvalResult::Defined(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, EvalResult::Defined(_))
    }
}

impl fmt::Display for EvalResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalResult::Defined(v) => write!(f, "{v}"),
            EvalResult::Undefined => f.write_str("undefined"),
            EvalResult::OutOfFuel(n) => write!(f, "out of fuel after {n} steps"),
        }
    }
}

/// Evaluation limits. `max_trace_steps` bounds the loop iterations of each
/// single trace invocation; `max_total_steps` bounds all primitive steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fuel {
    pub max_trace_steps: u64,
    pub max_total_steps: u64,
}

pub const DEFAULT_TRACE_FUEL: u64 = 10_000;
pub const DEFAULT_TOTAL_FUEL: u64 = 50_000_000;

impl Default for Fuel {
    fn default() -> Self {
        Fuel { max_trace_steps: DEFAULT_TRACE_FUEL, max_total_steps: DEFAULT_TOTAL_FUEL }
    }
}

impl Fuel {
    pub fn with_trace_steps(n: u64) -> Self {
        Fuel { max_trace_steps: n.max(1), ..Fuel::default() }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("internal type error: `{combinator}` applied to `{value}`")]
    InternalTypeError { combinator: String, value: String },
    #[error("`{ty}` is not polynomial in its recursion variable: {reason}")]
    NotPolynomial { ty: String, reason: String },
}

fn type_error(c: &Combinator, v: &Value) -> EvalError {
    EvalError::InternalTypeError { combinator: c.to_string(), value: v.to_string() }
}

/// The value action of a basic combinator.
pub fn eval_basic(c: &Combinator, v: &Value) -> Result<EvalResult, EvalError> {
    use Combinator::*;
    use Value::{InL, InR, Pair};
    let out = match (c, v) {
        (Id, v) => v.clone(),
        (SwapPlus, InL(x)) => Value::inr((**x).clone()),
        (SwapPlus, InR(x)) => Value::inl((**x).clone()),
        (AssocLPlus, InL(a)) => Value::inl(Value::inl((**a).clone())),
        (AssocLPlus, InR(bc)) => match &**bc {
            InL(b) => Value::inl(Value::inr((**b).clone())),
            InR(c2) => Value::inr((**c2).clone()),
            _ => return Err(type_error(c, v)),
        },
        (AssocRPlus, InL(ab)) => match &**ab {
            InL(a) => Value::inl((**a).clone()),
            InR(b) => Value::inr(Value::inl((**b).clone())),
            _ => return Err(type_error(c, v)),
        },
        (AssocRPlus, InR(c2)) => Value::inr(Value::inr((**c2).clone())),
        (UnitLPlus, InR(x)) => (**x).clone(),
        (UnitRPlus, x) => Value::inr(x.clone()),
        (SwapTimes, Pair(a, b)) => Value::pair((**b).clone(), (**a).clone()),
        (AssocLTimes, Pair(a, bc)) => match &**bc {
            Pair(b, c2) => Value::pair(Value::pair((**a).clone(), (**b).clone()), (**c2).clone()),
            _ => return Err(type_error(c, v)),
        },
        (AssocRTimes, Pair(ab, c2)) => match &**ab {
            Pair(a, b) => Value::pair((**a).clone(), Value::pair((**b).clone(), (**c2).clone())),
            _ => return Err(type_error(c, v)),
        },
        (UnitLTimes, Pair(u, x)) if **u == Value::Unit => (**x).clone(),
        (UnitRTimes, x) => Value::pair(Value::Unit, x.clone()),
        (Distrib, Pair(ab, z)) => match &**ab {
            InL(x) => Value::inl(Value::pair((**x).clone(), (**z).clone())),
            InR(y) => Value::inr(Value::pair((**y).clone(), (**z).clone())),
            _ => return Err(type_error(c, v)),
        },
        (Factor, InL(p)) | (Factor, InR(p)) => match &**p {
            Pair(x, z) => {
                let inner = if matches!(v, InL(_)) { Value::inl((**x).clone()) } else { Value::inr((**x).clone()) };
                Value::pair(inner, (**z).clone())
            }
            _ => return Err(type_error(c, v)),
        },
        (Fold(_), x) => Value::fold(x.clone()),
        (Unfold(_), Value::Fold(x)) => (**x).clone(),
        // absorb and unabsorb have empty domains, as does everything else here
        _ => return Err(type_error(c, v)),
    };
    Ok(EvalResult::Defined(out))
}

/// Counters reported by [`eval_counted`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalStats {
    /// Basic combinator applications.
    pub steps: u64,
    /// Trace loop iterations, summed over all trace invocations.
    pub trace_iterations: u64,
}

fn wrap(r: EvalResult, k: impl FnOnce(Value) -> Value) -> EvalResult {
    match r {
        EvalResult::Defined(w) => EvalResult::Defined(k(w)),
        other => other,
    }
}

struct Machine {
    fuel: Fuel,
    stats: EvalStats,
}

impl Machine {
    fn eval(&mut self, c: &Combinator, v: &Value) -> Result<EvalResult, EvalError> {
        use Combinator::*;
        match c {
            Comp(f, g) => match self.eval(f, v)? {
                EvalResult::Defined(w) => self.eval(g, &w),
                other => Ok(other),
            },
            SumC(f, g) => match v {
                Value::InL(x) => Ok(wrap(self.eval(f, x)?, Value::inl)),
                Value::InR(y) => Ok(wrap(self.eval(g, y)?, Value::inr)),
                _ => Err(type_error(c, v)),
            },
            ProdC(f, g) => match v {
                Value::Pair(x, y) => {
                    let left = match self.eval(f, x)? {
                        EvalResult::Defined(w) => w,
                        other => return Ok(other),
                    };
                    Ok(wrap(self.eval(g, y)?, |right| Value::pair(left, right)))
                }
                _ => Err(type_error(c, v)),
            },
            Trace(f) => self.trace(f, v),
            Inv(inner) => {
                let d = inner.eliminate_inv().dagger();
                self.eval(&d, v)
            }
            basic => {
                if self.stats.steps >= self.fuel.max_total_steps {
                    return Ok(EvalResult::OutOfFuel(self.stats.steps));
                }
                self.stats.steps += 1;
                eval_basic(basic, v)
            }
        }
    }

    fn trace(&mut self, f: &Combinator, v: &Value) -> Result<EvalResult, EvalError> {
        let mut token = Value::inl(v.clone());
        for _ in 0..self.fuel.max_trace_steps {
            self.stats.trace_iterations += 1;
            match self.eval(f, &token)? {
                EvalResult::Defined(Value::InL(w)) => return Ok(EvalResult::Defined(*w)),
                EvalResult::Defined(Value::InR(u)) => token = Value::InR(u),
                EvalResult::Defined(other) => return Err(type_error(f, &other)),
                other => return Ok(other),
            }
        }
        Ok(EvalResult::OutOfFuel(self.stats.steps))
    }
}

/// Evaluates `c` on `v`, also returning step counters.
pub fn eval_counted(c: &Combinator, v: &Value, fuel: Fuel) -> Result<(EvalResult, EvalStats), EvalError> {
    let mut m = Machine { fuel, stats: EvalStats::default() };
    let r = m.eval(c, v)?;
    Ok((r, m.stats))
}

pub fn eval(c: &Combinator, v: &Value, fuel: Fuel) -> Result<EvalResult, EvalError> {
    eval_counted(c, v, fuel).map(|(r, _)| r)
}

/// Runs `c` forwards.
pub fn run(c: &Combinator, v: &Value, fuel: Fuel) -> Result<EvalResult, EvalError> {
    eval(&c.eliminate_inv(), v, fuel)
}

/// Runs `c` backwards, i.e. evaluates its dagger.
pub fn run_backward(c: &Combinator, v: &Value, fuel: Fuel) -> Result<EvalResult, EvalError> {
    eval(&c.dagger(), v, fuel)
}

/// Number of values of a closed type, or `None` for mu types and sizes
/// beyond `usize`.
pub fn cardinality(t: &ValueType) -> Option<usize> {
    match t {
        ValueType::Zero => Some(0),
        ValueType::One => Some(1),
        ValueType::Sum(a, b) => cardinality(a)?.checked_add(cardinality(b)?),
        ValueType::Prod(a, b) => cardinality(a)?.checked_mul(cardinality(b)?),
        ValueType::Var(_) | ValueType::Mu(..) => None,
    }
}

/// All values of a closed mu-free type: left summand first, pairs in
/// row-major order.
pub fn values_of(t: &ValueType) -> Option<Vec<Value>> {
    cardinality(t)?;
    Some(enumerate(t, 0))
}

/// Values of a closed type whose mu types unfold at most `depth` times
/// along any path. For mu-free types this is [`values_of`].
pub fn values_up_to_depth(t: &ValueType, depth: usize) -> Vec<Value> {
    enumerate(t, depth)
}

fn enumerate(t: &ValueType, depth: usize) -> Vec<Value> {
    match t {
        ValueType::Zero | ValueType::Var(_) => vec![],
        ValueType::One => vec![Value::Unit],
        ValueType::Sum(a, b) => {
            let mut out: Vec<Value> = enumerate(a, depth).into_iter().map(Value::inl).collect();
            out.extend(enumerate(b, depth).into_iter().map(Value::inr));
            out
        }
        ValueType::Prod(a, b) => {
            let (xs, ys) = (enumerate(a, depth), enumerate(b, depth));
            let mut out = Vec::with_capacity(xs.len() * ys.len());
            for x in &xs {
                for y in &ys {
                    out.push(Value::pair(x.clone(), y.clone()));
                }
            }
            out
        }
        ValueType::Mu(..) => {
            if depth == 0 {
                return vec![];
            }
            let body = t.unfold_mu().unwrap();
            enumerate(&body, depth - 1).into_iter().map(Value::fold).collect()
        }
    }
}

fn polynomial_in(t: &ValueType, x: &str) -> Result<(), String> {
    match t {
        ValueType::Zero | ValueType::One => Ok(()),
        ValueType::Var(y) if y == x => Ok(()),
        ValueType::Var(y) => Err(format!("free variable `{y}`")),
        ValueType::Sum(a, b) | ValueType::Prod(a, b) => {
            polynomial_in(a, x)?;
            polynomial_in(b, x)
        }
        ValueType::Mu(..) => {
            if t.is_closed() {
                Ok(())
            } else {
                Err(format!("nested recursive type `{t}` mentions an outer variable"))
            }
        }
    }
}

/// The values of the `depth`-th approximant `F^depth(0)` of the recursive
/// type `t = mu x. F(x)`: all values of `t` with at most `depth` nested
/// folds. Stage 0 is empty and each stage contains the previous one.
pub fn unroll_mu_approximant(t: &ValueType, depth: usize) -> Result<Vec<Value>, EvalError> {
    let not_poly = |reason: String| EvalError::NotPolynomial { ty: t.to_string(), reason };
    match t {
        ValueType::Mu(x, body) => polynomial_in(body, x).map_err(not_poly)?,
        _ => return Err(not_poly("not a mu type".into())),
    }
    Ok(enumerate(t, depth))
}
