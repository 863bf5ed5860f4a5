//! `fsgrp`: checks fibered semi-groups and bimodules, audits local theories
//! and verifies the cylinder double functor.
//!
//! Exit codes: 0 when every check passes, 1 on a mathematical violation, 2 on
//! malformed input or usage errors.

mod json;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fsgrp_core::bimod::identity_bimodule;
use fsgrp_core::cyl::{verify_double_functor, CylinderFunctor};
use fsgrp_core::theory::{check_axioms, ConstantSheaf, FreeBoundary, LocalTheory};
use fsgrp_core::universe::theory_universe;
use fsgrp_core::{Error, FinSet, Report, Token};
use serde_json::{json, Value};

use json::{BimoduleJson, FsgrpJson, Shape, TheoryJson};

const MAX_BOUND: usize = 3;
const MAX_SET_SIZE: usize = 4;
/// Largest solution space `build` will construct.
const MAX_SPACE: usize = 1 << 22;
/// Failures listed in text output before the rest are counted.
const SHOWN_FAILURES: usize = 20;

#[derive(Parser)]
#[command(name = "fsgrp", version, about = "Verifier for fibered semi-groups and cylinder field theories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a fibered semi-group file and report rigidity.
    CheckFsgrp {
        path: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Validate a fibered bimodule file, including both semi-groups.
    CheckBimodule {
        path: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Audit the local-theory axioms over a bounded universe.
    CheckTheory {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        bounds: Bounds,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Audit the theory, then verify the double-functor laws of its cylinder construction.
    VerifyFunctor {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        bounds: Bounds,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Construct E_Σ from an object or Ω_M from a cobordism, as JSON.
    Build {
        path: PathBuf,
        /// For an object, emit the identity bimodule of E_Σ instead.
        #[arg(long)]
        identity: bool,
        #[command(flatten)]
        theory: TheoryArgs,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct TheoryArgs {
    /// `constant`, `free_boundary`, or a JSON theory descriptor file.
    #[arg(long, default_value = "constant")]
    theory: String,
    /// Size of the value set S = {0, 1, ...}.
    #[arg(long, default_value_t = 2)]
    set_size: usize,
    /// Value on glued components for `free_boundary`.
    #[arg(long, default_value = "0")]
    fill: String,
}

#[derive(Args)]
struct Bounds {
    /// Most boundary components of an object in the universe [default: 3
    /// for check-theory, 2 for verify-functor].
    #[arg(long)]
    max_components: Option<usize>,
    /// Most regions of a cobordism in the universe.
    #[arg(long, default_value_t = 3)]
    max_regions: usize,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

enum Failure {
    Input(anyhow::Error),
    Violation(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

struct Outcome {
    passed: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(o) => ExitCode::from(if o.passed { 0 } else { 1 }),
        Err(Failure::Input(e)) => {
            eprintln!("input error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Violation(e)) => {
            eprintln!("violation: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::CheckFsgrp { path, output } => {
            let e = json::parse::<FsgrpJson>(&read(&path)?, "fibered semi-group")?.decode("")?;
            let report = e.validate();
            let rigid = e.is_rigid();
            emit(&output, report.passed(), || {
                let mut text = render(&report);
                let _ = writeln!(text, "rigid: {rigid}");
                text
            }, || json!({ "report": report, "rigid": rigid }))
        }
        Command::CheckBimodule { path, output } => {
            let b = json::parse::<BimoduleJson>(&read(&path)?, "fibered bimodule")?.decode()?;
            let reports = [
                ("left", b.left_sgrp().validate()),
                ("right", b.right_sgrp().validate()),
                ("bimodule", b.validate()),
            ];
            let rigid = b.is_rigid();
            let passed = reports.iter().all(|(_, r)| r.passed());
            emit(&output, passed, || {
                let mut text = String::new();
                for (side, r) in &reports {
                    let _ = write!(text, "{side} ");
                    text.push_str(&render(r));
                }
                let _ = writeln!(text, "rigid: {rigid}");
                text
            }, || {
                let mut v = serde_json::Map::new();
                for (side, r) in &reports {
                    v.insert(side.to_string(), json!(r));
                }
                v.insert("rigid".into(), json!(rigid));
                Value::Object(v)
            })
        }
        Command::CheckTheory { theory, bounds, output } => {
            let (theory, _) = load_theory(&theory)?;
            let (c, r) = bounds.checked(3)?;
            let report = check_axioms(theory.as_ref(), &theory_universe(c, r));
            emit(&output, report.passed(), || render(&report), || json!({ "audit": report }))
        }
        Command::VerifyFunctor { theory, bounds, output } => {
            let (theory, _) = load_theory(&theory)?;
            let (c, r) = bounds.checked(2)?;
            let u = theory_universe(c, r);
            let audit = check_axioms(theory.as_ref(), &u);
            let functor = verify_double_functor(theory.as_ref(), &u);
            let passed = audit.passed() && functor.passed();
            emit(&output, passed, || render(&audit) + &render(&functor), || json!({ "audit": audit, "functor": functor }))
        }
        Command::Build { path, identity, theory, out } => {
            let (theory, values) = load_theory(&theory)?;
            let shape = json::parse_shape(&read(&path)?)?;
            check_size(&shape, values)?;
            let f = CylinderFunctor::new(theory.as_ref());
            let value = match (&shape, identity) {
                (Shape::Object(sigma), false) => json!(FsgrpJson::encode(&f.semigroup(sigma).map_err(violation)?)),
                (Shape::Object(sigma), true) => {
                    json!(BimoduleJson::encode(&identity_bimodule(&f.semigroup(sigma).map_err(violation)?)))
                }
                (Shape::Cobordism(m), false) => json!(BimoduleJson::encode(&f.bimodule(m).map_err(violation)?)),
                (Shape::Cobordism(_), true) => return Err(anyhow!("--identity applies to objects only").into()),
            };
            write_out(out.as_deref(), &pretty(&value))?;
            Ok(Outcome { passed: true })
        }
    }
}

impl Bounds {
    fn checked(&self, components: usize) -> Result<(usize, usize), Failure> {
        let components = self.max_components.unwrap_or(components);
        if components > MAX_BOUND || self.max_regions > MAX_BOUND {
            return Err(anyhow!("universe bounds above {MAX_BOUND} are not supported").into());
        }
        Ok((components, self.max_regions))
    }
}

/// Construction errors of a theory that breaks an axiom guard are violations;
/// anything else means the input was unusable.
fn violation(e: Error) -> Failure {
    match e {
        Error::TheoryViolation { .. } => Failure::Violation(e.into()),
        _ => Failure::Input(anyhow::Error::from(e).context("construction failed")),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// The theory and the size of its value set.
fn load_theory(args: &TheoryArgs) -> anyhow::Result<(Box<dyn LocalTheory>, usize)> {
    let values = || -> anyhow::Result<FinSet> {
        if args.set_size == 0 || args.set_size > MAX_SET_SIZE {
            bail!("--set-size must be between 1 and {MAX_SET_SIZE}");
        }
        let names: Vec<String> = (0..args.set_size).map(|i| i.to_string()).collect();
        Ok(FinSet::from_atoms(&names)?)
    };
    Ok(match args.theory.as_str() {
        "constant" => (Box::new(ConstantSheaf::new(values()?)?), args.set_size),
        "free_boundary" => {
            let fill = Token::parse(&args.fill).with_context(|| format!("--fill {:?} is not a valid element", args.fill))?;
            (Box::new(FreeBoundary::new(values()?, &fill)?), args.set_size)
        }
        other if Path::new(other).is_file() => {
            let descriptor = json::parse::<TheoryJson>(&read(Path::new(other))?, "theory descriptor")?;
            let size = descriptor.set_size();
            if size == 0 || size > MAX_SET_SIZE {
                bail!("a theory descriptor must list between 1 and {MAX_SET_SIZE} values");
            }
            (descriptor.decode()?, size)
        }
        other => bail!("unknown theory {other:?}: expected constant, free_boundary or a descriptor file"),
    })
}

/// Refuses inputs whose solution spaces would not fit in memory. Every body
/// met while building has at most `regions + 2·(|source| + |target|)`
/// regions or boundary components.
fn check_size(shape: &Shape, values: usize) -> anyhow::Result<()> {
    let arity = match shape {
        Shape::Object(sigma) => 2 * sigma.len(),
        Shape::Cobordism(m) => m.regions().len() + 2 * (m.source().len() + m.target().len()),
    };
    match values.checked_pow(arity as u32) {
        Some(n) if n <= MAX_SPACE => Ok(()),
        _ => bail!("the input is too large to build: |S|^{arity} exceeds {MAX_SPACE}"),
    }
}

fn emit<T, J>(output: &OutputArgs, passed: bool, text: T, json: J) -> Result<Outcome, Failure>
where
    T: FnOnce() -> String,
    J: FnOnce() -> Value,
{
    let text = match output.format {
        Format::Text => text(),
        Format::Json => pretty(&json()),
    };
    write_out(output.out.as_deref(), &text)?;
    Ok(Outcome { passed })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn write_out(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not an input error
            let _ = stdout.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn render(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}: {}", report.title, if report.passed() { "pass" } else { "FAIL" });
    for note in &report.notes {
        let _ = writeln!(out, "  note: {note}");
    }
    for s in report.summary() {
        let _ = writeln!(out, "  {:<28} {:>8} checked {:>8} failed", s.law, s.checked, s.failed);
    }
    let failures: Vec<_> = report.failures().collect();
    for r in failures.iter().take(SHOWN_FAILURES) {
        let _ = writeln!(out, "  failure: {} [{}]", r.law, r.instance);
        if let Some(w) = &r.witness {
            let _ = writeln!(out, "    at {}: {} vs {}", w.element, w.left, w.right);
        }
        if let Some(d) = &r.detail {
            let _ = writeln!(out, "    {d}");
        }
    }
    if failures.len() > SHOWN_FAILURES {
        let _ = writeln!(out, "  and {} more failures", failures.len() - SHOWN_FAILURES);
    }
    out
}
