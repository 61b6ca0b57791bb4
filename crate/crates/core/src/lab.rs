//! Suites of finite-relation checks run over the `corpus/` directory.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::finrel::{
    adamek_approximant, check_ambilimit_laws, check_initial_algebra_approx, expected_failures, kleisli_compose,
    kleisli_dagger, kleisli_unit, parse_chain, parse_groupoid, parse_monoid, pinned_em_not_fem, search_em_not_fem,
    ChainData, FinRelError, FiniteGroupoid, GroupoidAction, Poly, RelAlgebra, RelMonoid, Relation,
};
use crate::interp::unroll_mu_approximant;
use crate::report::{LawCheck, LawReport, LawResult, Status};

#[derive(Debug, Error)]
pub enum LabError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {error}")]
    Parse { path: String, error: FinRelError },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Frobenius,
    Fem,
    Kleisli,
    Ambilimit,
    Fixedpoint,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Frobenius, Suite::Fem, Suite::Kleisli, Suite::Ambilimit, Suite::Fixedpoint];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Frobenius => "frobenius",
            Suite::Fem => "fem",
            Suite::Kleisli => "kleisli",
            Suite::Ambilimit => "ambilimit",
            Suite::Fixedpoint => "fixedpoint",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// One checked subject with the laws it is expected to fail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabSubject {
    pub subject: String,
    pub results: Vec<LawResult>,
    pub expected_failures: Vec<String>,
    /// Every law failed exactly when expected.
    pub as_expected: bool,
}

impl LabSubject {
    fn new(subject: impl Into<String>, results: Vec<LawResult>, expected_failures: Vec<String>) -> Self {
        let as_expected = results.iter().all(|r| match r.status {
            Status::Fail => expected_failures.contains(&r.law),
            Status::Pass => !expected_failures.contains(&r.law),
            Status::NotApplicable => true,
        }) && expected_failures.iter().all(|law| results.iter().any(|r| &r.law == law));
        LabSubject { subject: subject.into(), results, expected_failures, as_expected }
    }

    fn from_report(r: LawReport, expected_failures: Vec<String>) -> Self {
        LabSubject::new(r.subject, r.results, expected_failures)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabReport {
    pub suite: String,
    pub subjects: Vec<LabSubject>,
    pub ok: bool,
}

impl fmt::Display for LabReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.subjects {
            let report = LawReport { subject: s.subject.clone(), results: s.results.clone() };
            write!(f, "{report}")?;
            if !s.expected_failures.is_empty() {
                writeln!(f, "  expected to fail: {}", s.expected_failures.join(", "))?;
            }
            if !s.as_expected {
                writeln!(f, "  UNEXPECTED OUTCOME")?;
            }
        }
        let bad = self.subjects.iter().filter(|s| !s.as_expected).count();
        if self.ok {
            writeln!(f, "{} suite: {} subjects, all as expected", self.suite, self.subjects.len())
        } else {
            writeln!(f, "{} suite: {} subjects, {bad} not as expected", self.suite, self.subjects.len())
        }
    }
}

/// Files in `dir` with extension `ext`, sorted by name, with their text.
fn corpus_files(dir: &Path, ext: &str) -> Result<Vec<(String, String)>, LabError> {
    let io = |path: &Path, source| LabError::Io { path: path.display().to_string(), source };
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == ext))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = fs::read_to_string(&p).map_err(|e| io(&p, e))?;
            let name = p.file_name().unwrap_or_default().to_string_lossy().into_owned();
            Ok((name, text))
        })
        .collect()
}

fn parsed<T>(file: &str, r: Result<T, FinRelError>) -> Result<T, LabError> {
    r.map_err(|error| LabError::Parse { path: file.into(), error })
}

pub fn load_groupoids(corpus: &Path) -> Result<Vec<(String, FiniteGroupoid)>, LabError> {
    corpus_files(&corpus.join("groupoids"), "grp")?
        .into_iter()
        .map(|(f, text)| Ok((f.clone(), parsed(&f, parse_groupoid(&text))?)))
        .collect()
}

fn load_monoids(corpus: &Path) -> Result<Vec<(String, RelMonoid, Vec<String>)>, LabError> {
    corpus_files(&corpus.join("monoids"), "mon")?
        .into_iter()
        .map(|(f, text)| Ok((f.clone(), parsed(&f, parse_monoid(&text))?, expected_failures(&text))))
        .collect()
}

fn load_chains(corpus: &Path) -> Result<Vec<(String, ChainData, Vec<String>)>, LabError> {
    corpus_files(&corpus.join("chains"), "chain")?
        .into_iter()
        .map(|(f, text)| Ok((f.clone(), parsed(&f, parse_chain(&text))?, expected_failures(&text))))
        .collect()
}

/// Settings shared by the randomized suites.
#[derive(Clone, Copy, Debug)]
pub struct LabConfig {
    pub seed: u64,
    /// Random Kleisli relations per groupoid.
    pub kleisli_trials: usize,
}

impl Default for LabConfig {
    fn default() -> Self {
        LabConfig { seed: 7, kleisli_trials: 200 }
    }
}

pub fn run_suite(suite: Suite, corpus: &Path, cfg: LabConfig) -> Result<LabReport, LabError> {
    let subjects = match suite {
        Suite::Frobenius => frobenius_suite(corpus)?,
        Suite::Fem => fem_suite(corpus)?,
        Suite::Kleisli => kleisli_suite(corpus, cfg)?,
        Suite::Ambilimit => ambilimit_suite(corpus)?,
        Suite::Fixedpoint => fixedpoint_suite(),
    };
    let ok = subjects.iter().all(|s| s.as_expected);
    Ok(LabReport { suite: suite.name().into(), subjects, ok })
}

fn frobenius_suite(corpus: &Path) -> Result<Vec<LabSubject>, LabError> {
    let groupoids = load_groupoids(corpus)?;
    let mut out = Vec::new();

    let mut coverage = LawCheck::new("all present");
    for g in FiniteGroupoid::all_small() {
        let present = groupoids.iter().any(|(_, h)| *h == g);
        coverage.record(present, || format!("groupoid {} is missing from the corpus", g.name));
    }
    out.push(LabSubject::new("groupoids with <= 3 objects and <= 6 morphisms", vec![coverage.finish()], vec![]));

    for (file, g) in &groupoids {
        let m = RelMonoid::from_groupoid(g);
        let mut results = m.monoid_laws();
        results.push(m.check_frobenius());
        out.push(LabSubject::new(format!("{file}: groupoid {}", g.name), results, vec![]));
    }
    for (file, m, expect) in load_monoids(corpus)? {
        let mut results = m.monoid_laws();
        results.push(m.check_frobenius());
        out.push(LabSubject::new(format!("{file}: monoid {}", m.name), results, expect));
    }
    Ok(out)
}

fn algebra_subject(alg: &RelAlgebra, expect: Vec<String>) -> LabSubject {
    let mut results = alg.em_laws();
    results.push(alg.check_fem());
    LabSubject::new(alg.name.clone(), results, expect)
}

fn fem_suite(corpus: &Path) -> Result<Vec<LabSubject>, LabError> {
    let mut out = Vec::new();
    for (_, g) in load_groupoids(corpus)? {
        let m = RelMonoid::from_groupoid(&g);
        out.push(algebra_subject(&RelAlgebra::free(&m, 2), vec![]));
        out.push(algebra_subject(&RelAlgebra::groupoid_action(&g, GroupoidAction::Regular), vec![]));
        out.push(algebra_subject(&RelAlgebra::groupoid_action(&g, GroupoidAction::Trivial(2)), vec![]));
    }
    for (_, m, _) in load_monoids(corpus)? {
        if m.check_frobenius().status == Status::Pass {
            out.push(algebra_subject(&RelAlgebra::free(&m, 2), vec![]));
        }
    }

    let pinned = pinned_em_not_fem();
    let mut results = pinned.em_laws();
    results.push(pinned.monoid.check_frobenius());
    let mut search = LawCheck::new("found by search");
    let found = search_em_not_fem(2, true);
    let same = found.as_ref().is_some_and(|a| {
        a.monoid.mult == pinned.monoid.mult
            && a.monoid.unit == pinned.monoid.unit
            && a.carrier == pinned.carrier
            && a.action == pinned.action
    });
    search.record(same, || format!("search found {:?}", found.map(|a| a.name)));
    results.push(search.finish());
    results.push(pinned.check_fem());
    out.push(LabSubject::new("em-not-fem (pinned)", results, vec!["femlaw".into()]));
    Ok(out)
}

fn kleisli_suite(corpus: &Path, cfg: LabConfig) -> Result<Vec<LabSubject>, LabError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for (file, g) in load_groupoids(corpus)? {
        let m = RelMonoid::from_groupoid(&g);
        let n = m.size();
        let mut unit = LawCheck::new("dagger of unit");
        for x in 0..=4 {
            let eta = kleisli_unit(&m, x);
            unit.record(kleisli_dagger(&eta, &m).ok().as_ref() == Some(&eta), || format!("η at size {x}"));
        }
        let mut invol = LawCheck::new("involution");
        let mut contra = LawCheck::new("contravariance");
        for _ in 0..cfg.kleisli_trials {
            let (x, y, z) = (rng.gen_range(1..=4), rng.gen_range(1..=4), rng.gen_range(1..=4));
            let density = [0.1, 0.25, 0.5][rng.gen_range(0..3)];
            let f = Relation::random(&mut rng, x, y * n, density);
            let h = Relation::random(&mut rng, y, z * n, density);
            let fd = kleisli_dagger(&f, &m).expect("shapes");
            let fdd = kleisli_dagger(&fd, &m).expect("shapes");
            invol.record(fdd == f, || format!("f = {f}, f‡‡ = {fdd}"));
            let lhs = kleisli_dagger(&kleisli_compose(&m, &h, &f).expect("shapes"), &m).expect("shapes");
            let hd = kleisli_dagger(&h, &m).expect("shapes");
            let rhs = kleisli_compose(&m, &fd, &hd).expect("shapes");
            contra.record(lhs == rhs, || format!("f = {f}, h = {h}: (h∘f)‡ = {lhs}, f‡∘h‡ = {rhs}"));
        }
        out.push(LabSubject::new(
            format!("{file}: kleisli category of {}", g.name),
            vec![unit.finish(), invol.finish(), contra.finish()],
            vec![],
        ));
    }
    Ok(out)
}

fn ambilimit_suite(corpus: &Path) -> Result<Vec<LabSubject>, LabError> {
    Ok(load_chains(corpus)?
        .into_iter()
        .map(|(file, c, expect)| {
            let mut r = check_ambilimit_laws(&c);
            r.subject = format!("{file}: {}", r.subject);
            LabSubject::from_report(r, expect)
        })
        .collect())
}

/// The functors whose approximants are checked by the fixed-point suite.
pub fn lab_functors() -> [Poly; 3] {
    [Poly::nat(), Poly::binary_trees(), Poly::streams()]
}

fn fixedpoint_suite() -> Vec<LabSubject> {
    let mut out = Vec::new();
    for f in lab_functors() {
        let approx = adamek_approximant(&f, 5);
        let mut sizes = LawCheck::new("stage sizes");
        for (d, &size) in approx.sizes.iter().enumerate() {
            let values = unroll_mu_approximant(&f.mu_type(), d).map(|v| v.len());
            sizes.record(values.as_ref().ok() == Some(&size), || {
                format!("stage {d} has {size} elements, interpreter enumerates {values:?}")
            });
        }
        let mut report = check_initial_algebra_approx(&f, 4);
        report.results.insert(0, sizes.finish());
        report.subject = format!("{} (sizes {:?})", report.subject, approx.sizes);
        out.push(LabSubject::from_report(report, vec![]));
        out.push(LabSubject::from_report(check_ambilimit_laws(&ChainData::from_approximant(&approx)), vec![]));
    }
    out.push(LabSubject::from_report(check_ambilimit_laws(&ChainData::pfn_restriction(6)), vec![]));
    out
}
