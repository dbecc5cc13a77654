use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use strata_core::field::{FieldChoice, Scalar};
use strata_core::k0::{split_decompose, verify_splitting, SplitOrder};
use strata_core::random::{random_diagram, random_poset, random_strat, rng_from_seed, GenConfig};
use strata_core::recollement::RecollementCtx;
use strata_core::{ingest, with_field, ChainComplex, ComplexJson, DiagramJson, Error, StratDiagram};

/// Exact computations with chain-complex valued diagrams on stratified posets.
#[derive(Parser, Debug)]
#[command(name = "strata", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a diagram (or a single complex) is well formed.
    Validate(Common),
    /// Run the recollement axiom suite for a closed set of strata.
    CheckRecollement(Common),
    /// Split a diagram stratum by stratum and log every step.
    Decompose(Common),
    /// Verify the splitting of Grothendieck classes.
    K0Report(Common),
    /// Write a seeded random diagram.
    Gen(Common),
    /// Turn a stratified simplicial complex into a face-poset diagram.
    Ingest(Common),
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Comma separated closed strata, or `minimal`.
    #[arg(long, default_value = "minimal")]
    closed: String,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `Q` or a supported prime such as `101`.
    #[arg(long, default_value = "Q")]
    field: String,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Order::Minimal)]
    order: Order,
    /// Number of elements of the random shape used by `gen` without input.
    #[arg(long, default_value_t = 4)]
    size: usize,
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Order {
    Minimal,
    OneAtATime,
}

impl From<Order> for SplitOrder {
    fn from(o: Order) -> Self {
        match o {
            Order::Minimal => SplitOrder::Minimal,
            Order::OneAtATime => SplitOrder::OneAtATime,
        }
    }
}

/// A report and whether every check in it passed.
struct Outcome {
    report: Value,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(n) = std::env::var("STRATA_WORKERS") {
        let threads = match n.parse::<usize>() {
            Ok(t) if t > 0 => t,
            _ => {
                eprintln!("error: STRATA_WORKERS must be a positive integer, got `{n}`");
                return ExitCode::from(2);
            }
        };
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .expect("global pool is configured once");
    }
    match run(&cli.command) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli.command, &outcome.report) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn common(c: &Command) -> &Common {
    match c {
        Command::Validate(a)
        | Command::CheckRecollement(a)
        | Command::Decompose(a)
        | Command::K0Report(a)
        | Command::Gen(a)
        | Command::Ingest(a) => a,
    }
}

fn emit(c: &Command, report: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(report)? + "\n";
    match &common(c).output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn read_json(path: Option<&Path>) -> Result<Value> {
    let Some(path) = path else { bail!("--input is required") };
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

fn run(command: &Command) -> Result<Outcome> {
    let args = common(command);
    let field: FieldChoice = args.field.parse()?;
    with_field!(field, S => run_in::<S>(command, args, field))
}

fn load_diagram<S: Scalar>(args: &Common) -> Result<StratDiagram<S>> {
    let json: DiagramJson = serde_json::from_value(read_json(args.input.as_deref())?)
        .context("input is not a diagram")?;
    Ok(StratDiagram::from_json(&json)?)
}

fn recollement_ctx<S: Scalar>(f: &StratDiagram<S>, closed: &str) -> Result<RecollementCtx> {
    let strat = f.strat().clone();
    if closed.trim() == "minimal" {
        return Ok(RecollementCtx::minimal(strat)?);
    }
    let ids: Vec<&str> = closed.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    Ok(RecollementCtx::from_ids(strat, &ids)?)
}

fn log(args: &Common, msg: impl AsRef<str>) {
    if args.verbose {
        eprintln!("{}", msg.as_ref());
    }
}

fn run_in<S: Scalar>(command: &Command, args: &Common, field: FieldChoice) -> Result<Outcome> {
    match command {
        Command::Validate(_) => validate::<S>(args),
        Command::CheckRecollement(_) => {
            let f = load_diagram::<S>(args)?;
            let ctx = recollement_ctx(&f, &args.closed)?;
            log(args, format!("checking {} samples over {field}", args.samples));
            let report = ctx.check_axioms::<S>(args.samples, args.seed, &GenConfig::default());
            let triangles = ctx.localization_triangles(&f)?;
            let input_ok = triangles.iter().all(|t| t.passed);
            for a in &report.axioms {
                log(args, format!("{}: {} checked, {} failures", a.name, a.checked, a.failures));
            }
            Ok(Outcome {
                passed: report.passed && input_ok,
                report: json!({
                    "field": field.to_string(),
                    "suite": report,
                    "input_triangles": triangles,
                }),
            })
        }
        Command::Decompose(_) => {
            let f = load_diagram::<S>(args)?;
            let d = split_decompose(&f, args.order.into())?;
            let pieces: Vec<Value> = d
                .pieces
                .iter()
                .map(|p| {
                    json!({
                        "stratum": p.stratum,
                        "elements": p.fiber.ids(f.shape()),
                        "class": p.diagram.euler_vector(),
                        "diagram": p.diagram.to_json(),
                    })
                })
                .collect();
            let exact = d.steps.iter().all(|s| s.triangle_exact);
            log(args, format!("{} steps", d.depth()));
            Ok(Outcome {
                passed: exact,
                report: json!({
                    "field": field.to_string(),
                    "order": SplitOrder::from(args.order),
                    "depth": d.depth(),
                    "steps": d.steps,
                    "pieces": pieces,
                }),
            })
        }
        Command::K0Report(_) => {
            let f = load_diagram::<S>(args)?;
            let r = verify_splitting(&f, args.order.into())?;
            log(args, format!("identity holds: {}, determinant {}", r.identity_holds, r.generator_matrix.determinant));
            Ok(Outcome {
                passed: r.passed,
                report: to_value(&r)?,
            })
        }
        Command::Gen(_) => {
            let mut rng = rng_from_seed(args.seed);
            let strat = match &args.input {
                Some(_) => load_diagram::<S>(args)?.strat().clone(),
                None => {
                    if args.size == 0 {
                        bail!("--size must be positive");
                    }
                    let shape = Arc::new(random_poset(&mut rng, args.size, 0.45));
                    random_strat(&mut rng, shape)
                }
            };
            let f: StratDiagram<S> = random_diagram(&mut rng, &strat, &GenConfig::default());
            Ok(Outcome {
                passed: true,
                report: to_value(&f.to_json())?,
            })
        }
        Command::Ingest(_) => {
            let j: ingest::SimplicialJson = serde_json::from_value(read_json(args.input.as_deref())?)
                .context("input is not a stratified simplicial complex")?;
            let r = ingest::ingest(&j)?;
            for f in &r.fibers {
                log(args, format!("stratum {}: {} cells, chi {}", f.stratum, f.elements.len(), f.euler_char));
            }
            Ok(Outcome {
                passed: true,
                report: to_value(&r)?,
            })
        }
    }
}

/// Structural defects found while parsing count as failed checks, not as
/// unreadable input.
fn validate<S: Scalar>(args: &Common) -> Result<Outcome> {
    let raw = read_json(args.input.as_deref())?;
    if raw.get("shape").is_none() {
        let j: ComplexJson = serde_json::from_value(raw).context("input is neither a diagram nor a complex")?;
        return Ok(match ChainComplex::<S>::from_json(&j) {
            Ok(c) => Outcome {
                passed: true,
                report: json!({ "kind": "complex", "valid": true, "betti": c.betti() }),
            },
            Err(Error::NotAComplex(n)) => Outcome {
                passed: false,
                report: json!({
                    "kind": "complex",
                    "valid": false,
                    "violations": [{ "kind": "not_a_complex", "degree": n }],
                }),
            },
            Err(e) => return Err(e.into()),
        });
    }
    let j: DiagramJson = serde_json::from_value(raw).context("input is not a diagram")?;
    match StratDiagram::<S>::from_json(&j) {
        Ok(f) => {
            let v = f.validate();
            Ok(Outcome {
                passed: v.valid,
                report: json!({ "kind": "diagram", "valid": v.valid, "violations": v.violations }),
            })
        }
        Err(e @ (Error::NotAComplex(_) | Error::NotAChainMap(_))) => Ok(Outcome {
            passed: false,
            report: json!({ "kind": "diagram", "valid": false, "violations": [{ "kind": "parse", "detail": e.to_string() }] }),
        }),
        Err(e) => Err(e.into()),
    }
}
