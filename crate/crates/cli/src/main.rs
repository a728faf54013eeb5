//! `puiseux`: command-line access to the Puiseux monoid library.
//!
//! Every subcommand reads a JSON monoid description (a path, or `-` for
//! stdin) and prints a report. Exit status: 0 for a definite answer, 2 when
//! the answer is undecided within the budget, 1 for invalid input.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use puiseux::atoms::{self, AtomicityKind};
use puiseux::closure::{self, ConductorKind};
use puiseux::constructions::{self, IncreasingForm, SeedSequence};
use puiseux::density::{self, DensityClass, ProbeResult};
use puiseux::{Error, Membership, MonoidSpec, Rat, SignedRat};

#[derive(Parser)]
#[command(name = "puiseux", version, about = "Puiseux monoid toolkit")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Output::Text, global = true)]
    output: Output,

    /// Work limit: generators used by truncated searches, or the number of
    /// factorizations collected.
    #[arg(long, env = "PUISEUX_BUDGET", default_value_t = 32, global = true)]
    budget: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Args)]
struct SpecArg {
    /// Monoid description file, or `-` for stdin.
    spec: String,
}

#[derive(Subcommand)]
enum Command {
    /// Density class with the rule that decided it.
    Classify(SpecArg),
    /// Atomicity verdict and atoms.
    Atoms {
        #[command(flatten)]
        spec: SpecArg,
        /// Number of atoms to list for infinite atom sets.
        #[arg(long, default_value_t = 10)]
        limit: usize,
    },
    /// Membership of a nonnegative rational.
    Member {
        #[command(flatten)]
        spec: SpecArg,
        x: String,
    },
    /// Factorizations of an element into atoms.
    Factorize {
        #[command(flatten)]
        spec: SpecArg,
        x: String,
    },
    /// Factorization lengths of an element.
    Lengths {
        #[command(flatten)]
        spec: SpecArg,
        x: String,
    },
    /// Frobenius number and least conductor element (finitely generated only).
    Frobenius(SpecArg),
    /// Root closure: group description, sample elements and a density witness.
    Closure {
        #[command(flatten)]
        spec: SpecArg,
        /// Largest denominator in the sample.
        #[arg(long, default_value_t = 12)]
        max_den: u64,
        /// Largest value in the sample.
        #[arg(long, default_value_t = 1)]
        max_value: u64,
    },
    /// Density of the difference group and of the root closure.
    Gp(SpecArg),
    /// Conductor with the rule that decided it.
    Conductor(SpecArg),
    /// Epsilon-density probe on an interval.
    Probe {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], required = true)]
        interval: Vec<String>,
        #[arg(long)]
        eps: String,
        /// Generator depth (defaults to the budget).
        #[arg(long)]
        depth: Option<usize>,
        /// Also probe the scaled windows (n lo, n hi) for n up to this value.
        #[arg(long, default_value_t = 1)]
        windows: u64,
    },
    /// Distance from each element up to T to the next element.
    Isolate {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long = "T", alias = "t")]
        t: String,
        /// Generator depth (defaults to the budget).
        #[arg(long)]
        depth: Option<usize>,
        /// Use the submonoid of the first `depth` generators without
        /// requiring a complete enumeration.
        #[arg(long)]
        truncated: bool,
    },
    /// Build example monoids; prints a description usable by every other command.
    #[command(subcommand)]
    Construct(Construct),
}

#[derive(Subcommand)]
enum Construct {
    /// Atomic monoid with dense atoms.
    DenseAtoms {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value = "dyadic")]
        seed: String,
    },
    /// Shifted Cantor endpoint monoid.
    Cantor {
        #[arg(long)]
        depth: u32,
    },
    /// Monoid generated by an increasing sequence from the catalog.
    Increasing {
        #[arg(long, value_enum)]
        form: FormArg,
        #[arg(long, allow_hyphen_values = true)]
        offset: Option<String>,
        #[arg(long)]
        step: Option<String>,
        #[arg(long)]
        limit: Option<String>,
        #[arg(long)]
        coeff: Option<String>,
        #[arg(long)]
        ratio: Option<String>,
        /// Comma-separated strictly increasing prefix.
        #[arg(long, value_delimiter = ',')]
        prefix: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Affine,
    Harmonic,
    PrimeReciprocal,
    Geometric,
}

/// A report plus whether it is undecided.
struct Report {
    value: Value,
    undecided: bool,
}

impl Report {
    fn definite(value: Value) -> Report {
        Report { value, undecided: false }
    }

    fn new(value: Value, undecided: bool) -> Report {
        Report { value, undecided }
    }
}

/// Failures: input errors exit 1, exhausted budgets exit 2.
struct Failure {
    message: String,
    undecided: bool,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let undecided = matches!(
            e,
            Error::Budget { .. }
                | Error::LatticeTooLarge { .. }
                | Error::IncompleteEnumeration(_)
                | Error::CannotCertifyIsolation(_)
        );
        Failure { message: e.to_string(), undecided }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { message: message.into(), undecided: false }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn read_spec(arg: &SpecArg) -> Result<MonoidSpec, Failure> {
    let text = if arg.spec == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| input_error(format!("reading stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(&arg.spec).map_err(|e| input_error(format!("{}: {e}", arg.spec)))?
    };
    MonoidSpec::from_json(&text).map_err(|e| input_error(format!("{}: {e}", arg.spec)))
}

fn rat(s: &str) -> Result<Rat, Failure> {
    s.parse::<Rat>().map_err(|e| input_error(e.to_string()))
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let budget = cli.budget;
    if budget == 0 {
        return Err(input_error("budget must be at least 1"));
    }
    match &cli.command {
        Command::Classify(arg) => {
            let v = density::classify_density(&read_spec(arg)?);
            Ok(Report::new(to_value(&v), v.class == DensityClass::Unknown))
        }
        Command::Atoms { spec, limit } => {
            let v = atoms::atoms(&read_spec(spec)?, *limit)?;
            Ok(Report::new(to_value(&v), v.kind == AtomicityKind::Unknown))
        }
        Command::Member { spec, x } => {
            let x = rat(x)?;
            let m = read_spec(spec)?.member(&x, budget)?;
            let mut v = to_value(&m);
            v["x"] = json!(x.to_string());
            Ok(Report::new(v, matches!(m, Membership::Unknown(_))))
        }
        Command::Factorize { spec, x } => {
            let set = atoms::factorizations(&read_spec(spec)?, &rat(x)?, budget)?;
            let complete = set.complete;
            Ok(Report::new(to_value(&set), !complete))
        }
        Command::Lengths { spec, x } => {
            let set = atoms::length_set(&read_spec(spec)?, &rat(x)?, budget)?;
            let complete = set.complete;
            Ok(Report::new(to_value(&set), !complete))
        }
        Command::Frobenius(arg) => {
            let spec = read_spec(arg)?;
            let c = spec
                .canonical()?
                .ok_or_else(|| input_error("the Frobenius number needs a finitely generated monoid"))?;
            let f = c.frobenius_value();
            Ok(Report::definite(json!({
                "frobenius": f.to_string(),
                "conductor_min": c.conductor_element().to_string(),
            })))
        }
        Command::Closure { spec, max_den, max_value } => {
            let c = closure::root_closure(&read_spec(spec)?);
            let known = c.is_known();
            Ok(Report::new(
                json!({
                    "group": to_value(&c.group),
                    "sample": to_value(&c.elements(*max_den, *max_value)),
                    "witness": to_value(&c.decreasing_witness(8)),
                }),
                !known,
            ))
        }
        Command::Gp(arg) => {
            let spec = read_spec(arg)?;
            let d = closure::gp_density(&spec, 8)?;
            Ok(Report::definite(json!({
                "density": to_value(&d),
                "group": to_value(&closure::difference_group(&spec)),
            })))
        }
        Command::Conductor(arg) => {
            let c = closure::conductor(&read_spec(arg)?);
            Ok(Report::new(to_value(&c), matches!(c.kind, ConductorKind::Unknown { .. })))
        }
        Command::Probe { spec, interval, eps, depth, windows } => {
            let spec = read_spec(spec)?;
            let (lo, hi, eps) = (rat(&interval[0])?, rat(&interval[1])?, rat(eps)?);
            let depth = depth.unwrap_or(budget);
            let reports = if *windows > 1 {
                density::eventual_window_check(&spec, &lo, &hi, *windows, &eps, depth)?
            } else {
                vec![density::probe_density(&spec, &lo, &hi, &eps, depth)?]
            };
            let undecided = reports.iter().any(|r| r.result == ProbeResult::Inconclusive);
            let value = if reports.len() == 1 { to_value(&reports[0]) } else { to_value(&reports) };
            Ok(Report::new(value, undecided))
        }
        Command::Isolate { spec, t, depth, truncated } => {
            let spec = read_spec(spec)?;
            let t = rat(t)?;
            let depth = depth.unwrap_or(budget);
            let radii = if *truncated {
                density::right_isolation_truncated(&spec, &t, depth)?
            } else {
                density::right_isolation(&spec, &t, depth)?
            };
            let rows: Vec<Value> = radii
                .iter()
                .map(|(e, d)| json!({"element": e.to_string(), "radius": d.to_string()}))
                .collect();
            Ok(Report::definite(json!({ "T": t.to_string(), "truncated": truncated, "radii": rows })))
        }
        Command::Construct(c) => construct(c),
    }
}

fn construct(c: &Construct) -> Result<Report, Failure> {
    match c {
        Construct::DenseAtoms { count, seed } => {
            let seed: SeedSequence = seed.parse()?;
            let (out, spec) = constructions::build_dense_atoms(*count, seed)?;
            Ok(Report::definite(json!({ "spec": to_value(&spec), "details": to_value(&out) })))
        }
        Construct::Cantor { depth } => {
            let (spec, gens) = constructions::build_cantor_shift(*depth)?;
            Ok(Report::definite(json!({ "spec": to_value(&spec), "details": {"generators": to_value(&gens)} })))
        }
        Construct::Increasing { form, offset, step, limit, coeff, ratio, prefix } => {
            let need = |v: &Option<String>, name: &str| -> Result<Rat, Failure> {
                rat(v.as_deref().ok_or_else(|| input_error(format!("--{name} is required for this form")))?)
            };
            let form = match form {
                FormArg::Affine => IncreasingForm::Affine {
                    offset: offset
                        .as_deref()
                        .unwrap_or("0")
                        .parse::<SignedRat>()
                        .map_err(|e| input_error(e.to_string()))?,
                    step: need(step, "step")?,
                },
                FormArg::Harmonic => IncreasingForm::Harmonic {
                    limit: need(limit, "limit")?,
                    coeff: need(coeff, "coeff")?,
                },
                FormArg::PrimeReciprocal => IncreasingForm::PrimeReciprocal { limit: need(limit, "limit")? },
                FormArg::Geometric => IncreasingForm::Geometric { ratio: need(ratio, "ratio")? },
            };
            let prefix = prefix.iter().map(|s| rat(s)).collect::<Result<Vec<_>, _>>()?;
            let spec = constructions::build_increasing(form, prefix)?;
            Ok(Report::definite(json!({ "spec": to_value(&spec) })))
        }
    }
}

/// Plain-text rendering of a JSON report, one fact per line.
fn render_text(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(v, indent + 1, out);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(v, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(v))),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        render_text(item, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {}\n", scalar(item))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(value))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            // construct prints the bare description in text mode so it can be piped
            let construct_text = matches!(cli.command, Command::Construct(_)) && cli.output == Output::Text;
            if construct_text {
                println!("{}", report.value["spec"]);
            } else if cli.output == Output::Json {
                println!("{}", report.value);
            } else {
                let mut out = String::new();
                render_text(&report.value, 0, &mut out);
                print!("{out}");
            }
            if report.undecided {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(if f.undecided { 2 } else { 1 })
        }
    }
}
