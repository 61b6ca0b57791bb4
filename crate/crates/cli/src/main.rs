//! `pio`: check, run, invert and test reversible combinator programs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value as Json};

use pio_core::arrows::{check_laws, instance_by_name, LawConfig, INSTANCE_NAMES};
use pio_core::interp::{eval_counted, EvalResult, Fuel};
use pio_core::lab::{run_suite, LabConfig, Suite};
use pio_core::parser::{parse_program, parse_value, print_combinator, print_value};
use pio_core::program::{compare_with_oracle, LoadError, Program};
use pio_core::report::LawReport;
use pio_core::typecheck::{check_program, check_value, CombinatorType};

#[derive(Parser)]
#[command(name = "pio", version, about = "Reversible combinator toolkit")]
struct Cli {
    /// Machine-readable output on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Include elapsed wall-clock time in reports.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and type-check a program.
    Check { file: PathBuf },
    /// Run a declaration on an input value.
    Run(RunArgs),
    /// Print the inverse of a declaration.
    Invert {
        file: PathBuf,
        /// Declaration to invert (default: the entry point).
        #[arg(long)]
        name: Option<String>,
    },
    /// Compare the interpreter with the partial-injection semantics on every input.
    Oracle {
        /// A `.pio` file or a directory of them.
        path: PathBuf,
    },
    /// Check the inverse arrow laws for an instance.
    Laws {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(INSTANCE_NAMES))]
        instance: String,
        /// Number of elements of the object types X, Y and Z.
        #[arg(long, default_value_t = 3)]
        size: usize,
        /// Random arrows per law.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a finite-relation suite over the corpus.
    Lab {
        #[arg(long, value_parser = ["frobenius", "fem", "kleisli", "ambilimit", "fixedpoint"])]
        suite: String,
        #[arg(long, default_value = "corpus")]
        corpus: PathBuf,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Args)]
struct RunArgs {
    file: PathBuf,
    /// Input value, in value syntax.
    #[arg(long)]
    input: String,
    /// Trace loop iterations allowed per trace.
    #[arg(long, env = "PIO_FUEL", default_value_t = pio_core::interp::DEFAULT_TRACE_FUEL)]
    fuel: u64,
    /// Run the inverse.
    #[arg(long)]
    backward: bool,
    /// Declaration to run (default: the entry point).
    #[arg(long)]
    name: Option<String>,
}

/// Exit status: 0 success, 1 failed check or counterexample, 2 usage error.
enum Failure {
    Check,
    Usage(String),
}

type Outcome = Result<bool, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

struct Out {
    json: bool,
    timing: bool,
    start: Instant,
}

impl Out {
    fn emit(&self, mut value: Json, text: impl FnOnce() -> String) {
        if self.json {
            if self.timing {
                value["elapsed_ms"] = json!(self.start.elapsed().as_millis() as u64);
            }
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
        } else {
            print!("{}", text());
            if self.timing {
                println!("elapsed: {} ms", self.start.elapsed().as_millis());
            }
        }
    }
}

fn to_json(v: &impl Serialize) -> Json {
    serde_json::to_value(v).expect("serializable")
}

fn check(out: &Out, file: &Path) -> Outcome {
    let text = read(file)?;
    let shown = file.display().to_string();
    let mut diagnostics = Vec::new();
    let mut declarations = Vec::new();
    match parse_program(&text) {
        Err(e) => diagnostics.push(json!({"line": e.pos.line, "col": e.pos.col, "message": e.message})),
        Ok(p) => match check_program(&p) {
            Ok(types) => {
                for d in &p.declarations {
                    declarations.push(json!({"name": d.name, "type": types[&d.name].to_string()}));
                }
            }
            Err(errors) => {
                for e in errors {
                    let message = format!("in `{}`: {}", e.name, e.error);
                    diagnostics.push(json!({"line": e.pos.line, "col": e.pos.col, "message": message}));
                }
            }
        },
    }
    for d in &diagnostics {
        eprintln!("{shown}:{}:{}: {}", d["line"], d["col"], d["message"].as_str().unwrap_or_default());
    }
    let ok = diagnostics.is_empty();
    out.emit(
        json!({"command": "check", "file": shown, "ok": ok, "declarations": declarations, "diagnostics": diagnostics}),
        || {
            let mut s = String::new();
            for d in &declarations {
                s += &format!(
                    "{} : {}\n",
                    d["name"].as_str().unwrap_or_default(),
                    d["type"].as_str().unwrap_or_default()
                );
            }
            s + if ok { "ok\n" } else { "failed\n" }
        },
    );
    Ok(ok)
}

fn load(file: &Path) -> Result<Program, Failure> {
    let text = read(file)?;
    Program::load(&text).map_err(|e| match e {
        LoadError::Type(errors) => {
            for e in errors {
                eprintln!("{}:{e}", file.display());
            }
            Failure::Check
        }
        LoadError::Syntax(e) => {
            eprintln!("{}:{e}", file.display());
            Failure::Check
        }
        other => usage(format!("{}: {other}", file.display())),
    })
}

fn select(p: &Program, name: Option<&str>) -> Result<(String, pio_core::syntax::Combinator, CombinatorType), Failure> {
    match name {
        Some(n) => {
            let (c, ty) = p.declaration(n).map_err(|e| usage(e.to_string()))?;
            Ok((n.to_string(), c, ty))
        }
        None => p.entry().map_err(|e| usage(e.to_string())),
    }
}

fn run(out: &Out, args: &RunArgs) -> Outcome {
    let p = load(&args.file)?;
    let (name, c, ty) = select(&p, args.name.as_deref())?;
    let input = parse_value(&args.input).map_err(|e| usage(format!("--input: {e}")))?;
    let (c, ty) = if args.backward { (c.dagger(), ty.flip()) } else { (c.eliminate_inv(), ty) };
    if !check_value(&input, &ty.domain).unwrap_or(false) {
        return Err(usage(format!("--input: `{}` does not have type {}", print_value(&input), ty.domain)));
    }
    let fuel = Fuel::with_trace_steps(args.fuel);
    let (result, stats) = eval_counted(&c, &input, fuel).map_err(|e| usage(e.to_string()))?;
    let result_json = match &result {
        EvalResult::Defined(v) => json!({"kind": "defined", "value": print_value(v)}),
        EvalResult::Undefined => json!({"kind": "undefined"}),
        EvalResult::OutOfFuel(n) => json!({"kind": "out_of_fuel", "steps": n}),
    };
    out.emit(
        json!({
            "command": "run",
            "file": args.file.display().to_string(),
            "name": name,
            "direction": if args.backward { "backward" } else { "forward" },
            "input": print_value(&input),
            "result": result_json,
            "fuel": fuel.max_trace_steps,
            "steps": stats.steps,
            "trace_iterations": stats.trace_iterations,
        }),
        || format!("{result}\n"),
    );
    Ok(!matches!(result, EvalResult::OutOfFuel(_)))
}

fn invert(out: &Out, file: &Path, name: Option<&str>) -> Outcome {
    let p = load(file)?;
    let (name, c, ty) = select(&p, name)?;
    let inverse = print_combinator(&c.dagger());
    out.emit(
        json!({
            "command": "invert",
            "file": file.display().to_string(),
            "name": name,
            "source": print_combinator(&c),
            "inverse": inverse,
            "type": ty.flip().to_string(),
        }),
        || format!("{inverse}\n"),
    );
    Ok(true)
}

fn program_files(path: &Path) -> Result<Vec<PathBuf>, Failure> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let entries = fs::read_dir(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "pio"))
        .collect();
    files.sort();
    Ok(files)
}

fn oracle(out: &Out, path: &Path) -> Outcome {
    let mut programs = Vec::new();
    let (mut checked, mut inputs, mut mismatches, mut skipped) = (0, 0, 0, 0);
    let mut text = String::new();
    for file in program_files(path)? {
        let p = load(&file)?;
        let (name, c, ty) = select(&p, None)?;
        let shown = file.display().to_string();
        if ty.domain.contains_mu() || ty.codomain.contains_mu() || c.mentions_mu() {
            skipped += 1;
            text += &format!("{shown}: skipped (recursive type)\n");
            programs.push(json!({"file": shown, "name": name, "skipped": "recursive type"}));
            continue;
        }
        let cmp = compare_with_oracle(&c, &ty).map_err(|e| usage(format!("{shown}: {e}")))?;
        checked += 1;
        inputs += cmp.inputs;
        mismatches += cmp.mismatches.len();
        text += &format!("{shown}: {cmp}\n");
        for m in &cmp.mismatches {
            text += &format!("  {m}\n");
        }
        let mut entry = to_json(&cmp);
        entry["file"] = json!(shown);
        entry["name"] = json!(name);
        programs.push(entry);
    }
    text += &format!("{checked} programs, {inputs} inputs, {mismatches} mismatches");
    if skipped > 0 {
        text += &format!(" ({skipped} recursive programs skipped)");
    }
    text.push('\n');
    out.emit(
        json!({
            "command": "oracle",
            "programs": programs,
            "checked": checked,
            "skipped": skipped,
            "inputs": inputs,
            "mismatches": mismatches,
        }),
        || text,
    );
    Ok(mismatches == 0)
}

fn laws(out: &Out, instance: &str, size: usize, trials: Option<usize>, seed: Option<u64>) -> Outcome {
    if size == 0 {
        return Err(usage("--size must be at least 1"));
    }
    let inst = instance_by_name(instance).ok_or_else(|| usage(format!("unknown instance `{instance}`")))?;
    let mut cfg = LawConfig::uniform(size);
    if let Some(t) = trials {
        cfg.trials = t;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let report: LawReport = check_laws(inst.as_ref(), &cfg);
    let ok = report.passed();
    let mut value = to_json(&report);
    value["command"] = json!("laws");
    value["instance"] = json!(instance);
    value["size"] = json!(size);
    value["trials"] = json!(cfg.trials);
    value["seed"] = json!(cfg.seed);
    value["ok"] = json!(ok);
    out.emit(value, || report.to_string());
    Ok(ok)
}

fn lab(out: &Out, suite: &str, corpus: &Path, seed: u64) -> Outcome {
    let suite: Suite = suite.parse().map_err(usage)?;
    let cfg = LabConfig { seed, ..LabConfig::default() };
    let report = run_suite(suite, corpus, cfg).map_err(|e| usage(e.to_string()))?;
    let mut value = to_json(&report);
    value["command"] = json!("lab");
    out.emit(value, || report.to_string());
    Ok(report.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Out { json: cli.json, timing: cli.timing, start: Instant::now() };
    let outcome = match &cli.command {
        Command::Check { file } => check(&out, file),
        Command::Run(args) => run(&out, args),
        Command::Invert { file, name } => invert(&out, file, name.as_deref()),
        Command::Oracle { path } => oracle(&out, path),
        Command::Laws { instance, size, trials, seed } => laws(&out, instance, *size, *trials, *seed),
        Command::Lab { suite, corpus, seed } => lab(&out, suite, corpus, *seed),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) | Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("pio: {msg}");
            ExitCode::from(2)
        }
    }
}
