//! Toolkit for the reversible combinator language `pio`.
//!
//! * [`syntax`] and [`parser`]: types, values, combinators and their
//!   concrete syntax.
//! * [`typecheck`]: value typing and unification-based inference.
//! * [`interp`]: forward and backward evaluation with a fuelled trace loop.
//! * [`pinj`]: finite partial injections, used as a denotational oracle.
//! * [`arrows`]: inverse arrows over reversible functions, with a law harness.
//! * [`finrel`]: finite relations, Frobenius monoids and chain checks.
//! * [`lab`]: the finite-relation suites run over the corpus.
//! * [`program`]: loading programs, round-trip and oracle sweeps.

pub mod arrows;
pub mod finrel;
pub mod interp;
pub mod lab;
pub mod parser;
pub mod pinj;
pub mod program;
pub mod report;
pub mod syntax;
pub mod typecheck;

pub use interp::{eval, run, run_backward, EvalResult, Fuel};
pub use parser::{parse_combinator, parse_program, parse_type, parse_value, SourceProgram};
pub use syntax::{Combinator, Value, ValueType};
pub use typecheck::{check_program, check_value, infer_combinator, CombinatorType, TypeError};
