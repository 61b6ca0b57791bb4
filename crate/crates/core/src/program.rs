//! Loading checked programs, and the exhaustive round-trip and oracle sweeps
//! run over them.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::interp::{run, run_backward, values_up_to_depth, EvalError, EvalResult, Fuel};
use crate::parser::{parse_program, print_value, SourceProgram, SyntaxError};
use crate::pinj::{denote, index_of, trace_fuel_bound, value_at, PinjError};
use crate::syntax::{Combinator, Value, ValueType};
use crate::typecheck::{check_program, CombinatorType, DeclarationError};

/// Recursive inputs are enumerated up to this unfolding depth.
pub const MU_INPUT_DEPTH: usize = 4;

/// Mu-free input types larger than this are not swept.
pub const MAX_SWEEP_INPUTS: usize = 64;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("{}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n"))]
    Type(Vec<DeclarationError>),
    #[error("no entry point: add `main = NAME`")]
    NoEntry,
    #[error("no declaration named `{0}`")]
    Unknown(String),
}

/// A parsed and type-checked program.
#[derive(Clone, Debug)]
pub struct Program {
    pub source: SourceProgram,
    pub types: BTreeMap<String, CombinatorType>,
}

impl Program {
    pub fn load(text: &str) -> Result<Self, LoadError> {
        let source = parse_program(text)?;
        let types = check_program(&source).map_err(LoadError::Type)?;
        Ok(Program { source, types })
    }

    /// The named declaration with references inlined, and its type.
    pub fn declaration(&self, name: &str) -> Result<(Combinator, CombinatorType), LoadError> {
        let c = self.source.resolve(name).ok_or_else(|| LoadError::Unknown(name.into()))?;
        let ty = self.types.get(name).cloned().ok_or_else(|| LoadError::Unknown(name.into()))?;
        Ok((c, ty))
    }

    pub fn entry(&self) -> Result<(String, Combinator, CombinatorType), LoadError> {
        let name = self.source.entry_name().ok_or(LoadError::NoEntry)?.to_string();
        let (c, ty) = self.declaration(&name)?;
        Ok((name, c, ty))
    }
}

/// The inputs swept for a domain type: every value of a mu-free type, or
/// values up to [`MU_INPUT_DEPTH`] unfoldings.
pub fn sweep_inputs(t: &ValueType) -> Vec<Value> {
    let depth = if t.contains_mu() { MU_INPUT_DEPTH } else { 0 };
    values_up_to_depth(t, depth)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RoundTrip {
    pub inputs: usize,
    pub defined: usize,
    pub undefined: usize,
    pub out_of_fuel: usize,
    pub failures: Vec<String>,
}

/// Runs every input forwards and every defined result backwards.
pub fn round_trip(c: &Combinator, inputs: &[Value], fuel: Fuel) -> Result<RoundTrip, EvalError> {
    let mut r = RoundTrip { inputs: inputs.len(), ..RoundTrip::default() };
    for v in inputs {
        match run(c, v, fuel)? {
            EvalResult::Defined(w) => {
                r.defined += 1;
                let back = run_backward(c, &w, fuel)?;
                if back != EvalResult::Defined(v.clone()) {
                    r.failures.push(format!("{} -> {} -> {back}", print_value(v), print_value(&w)));
                }
            }
            EvalResult::Undefined => r.undefined += 1,
            EvalResult::OutOfFuel(_) => r.out_of_fuel += 1,
        }
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleComparison {
    pub inputs: usize,
    pub mismatches: Vec<String>,
    pub out_of_fuel: usize,
    /// Trace fuel used: one more than the largest loop type.
    pub trace_fuel: u64,
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("{0}")]
    Pinj(#[from] PinjError),
    #[error("{0}")]
    Eval(#[from] EvalError),
}

impl fmt::Display for OracleComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} inputs, {} mismatches", self.inputs, self.mismatches.len())
    }
}

/// Compares the interpreter with the partial-injection denotation on every
/// input of a mu-free program.
pub fn compare_with_oracle(c: &Combinator, ty: &CombinatorType) -> Result<OracleComparison, OracleError> {
    let graph = denote(c, ty, &BTreeMap::new())?;
    let trace_fuel = trace_fuel_bound(c, ty)?;
    let fuel = Fuel::with_trace_steps(trace_fuel);
    let mut out = OracleComparison { inputs: graph.dom_size(), mismatches: vec![], out_of_fuel: 0, trace_fuel };
    for i in 0..graph.dom_size() {
        let v = value_at(i, &ty.domain).expect("index in range");
        let expected = graph.apply(i).map(|j| value_at(j, &ty.codomain).expect("index in range"));
        let got = run(c, &v, fuel)?;
        let agrees = match (&got, &expected) {
            (EvalResult::Defined(w), Some(e)) => index_of(w, &ty.codomain).is_some() && w == e,
            (EvalResult::Undefined, None) => true,
            _ => false,
        };
        if matches!(got, EvalResult::OutOfFuel(_)) {
            out.out_of_fuel += 1;
        }
        if !agrees {
            let want = expected.as_ref().map_or("undefined".to_string(), print_value);
            out.mismatches.push(format!("{}: interpreter {got}, denotation {want}", print_value(&v)));
        }
    }
    Ok(out)
}
