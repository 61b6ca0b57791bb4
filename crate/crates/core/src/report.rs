//! Law-check reports shared by the oracle, arrow and relation checkers.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

/// Outcome of checking one law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawResult {
    pub law: String,
    pub status: Status,
    /// Instances evaluated (inputs, random trials or corpus items).
    pub checked: usize,
    pub counterexample: Option<String>,
}

impl LawResult {
    pub fn not_applicable(law: impl Into<String>) -> Self {
        LawResult { law: law.into(), status: Status::NotApplicable, checked: 0, counterexample: None }
    }
}

/// Accumulates instances of one law, keeping the first counterexample.
#[derive(Debug)]
pub struct LawCheck {
    law: String,
    checked: usize,
    counterexample: Option<String>,
}

impl LawCheck {
    pub fn new(law: impl Into<String>) -> Self {
        LawCheck { law: law.into(), checked: 0, counterexample: None }
    }

    /// Records one instance; `witness` is only built on failure.
    pub fn record(&mut self, holds: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !holds && self.counterexample.is_none() {
            self.counterexample = Some(witness());
        }
    }

    pub fn failed(&self) -> bool {
        self.counterexample.is_some()
    }

    pub fn finish(self) -> LawResult {
        LawResult {
            status: if self.counterexample.is_some() { Status::Fail } else { Status::Pass },
            law: self.law,
            checked: self.checked,
            counterexample: self.counterexample,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub subject: String,
    pub results: Vec<LawResult>,
}

impl LawReport {
    pub fn new(subject: impl Into<String>) -> Self {
        LawReport { subject: subject.into(), results: Vec::new() }
    }

    pub fn push(&mut self, r: LawResult) {
        self.results.push(r);
    }

    /// No law failed (not-applicable laws are ignored).
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.status != Status::Fail)
    }

    pub fn get(&self, law: &str) -> Option<&LawResult> {
        self.results.iter().find(|r| r.law == law)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawResult> {
        self.results.iter().filter(|r| r.status == Status::Fail)
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for r in &self.results {
            match r.status {
                Status::Pass => writeln!(f, "  {:<18} pass ({} checked)", r.law, r.checked)?,
                Status::NotApplicable => writeln!(f, "  {:<18} not applicable", r.law)?,
                Status::Fail => {
                    writeln!(f, "  {:<18} FAIL ({} checked)", r.law, r.checked)?;
                    if let Some(w) = &r.counterexample {
                        writeln!(f, "    counterexample: {w}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
