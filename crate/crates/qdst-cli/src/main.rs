//! `qdst` — combine evidence classically or on simulated circuits, inspect
//! compiled rule circuits, and train/evaluate the attribute-fusion
//! classifier.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use qdst::circuit::{compile_plan, compile_rule_circuit, prepare_tree, sample, Circuit};
use qdst::classifier::{
    derive_seed, evaluate, Backend, ClassifierModel, Dataset, EvalBackend, EvalOptions,
};
use qdst::dst::{combine_rule, MassFunction};
use qdst::io::{read_mass_file, write_mass_file};
use qdst::rule::{lower, RuleExpr};

#[derive(Parser)]
#[command(
    name = "qdst",
    version,
    about = "Evidential combination on simulated circuits, plus an attribute-fusion classifier"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Combine mass functions under a rule, on the simulator and classically
    Combine(CombineArgs),
    /// Show the compiled circuit for a rule
    Circuit(CircuitArgs),
    /// Train a classifier on a labeled CSV dataset
    Train(TrainArgs),
    /// Classify the rows of a labeled CSV dataset with a trained model
    Predict(PredictArgs),
    /// Sweep training fractions and report accuracy statistics
    Eval(EvalArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendKind {
    /// Read the exact output distribution
    Exact,
    /// Estimate it from seeded measurement shots
    Shots,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CombineFormat {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct CombineArgs {
    /// Combination rule over the source names, e.g. "(~(m1 & m2)) & (m2 | m3)"
    #[arg(long)]
    rule: String,
    /// Mass file, `name=path` or bare `path` (auto-named m1, m2, ...); repeatable
    #[arg(long = "mass", required = true)]
    masses: Vec<String>,
    #[arg(long, value_enum, default_value = "exact")]
    backend: BackendKind,
    /// Shots for the sampling backend
    #[arg(long, default_value_t = 1024)]
    shots: u64,
    /// Seed for the sampling backend
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the observed fused mass as JSON
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: CombineFormat,
}

#[derive(Args)]
struct CircuitArgs {
    /// Combination rule to compile
    #[arg(long)]
    rule: String,
    /// Number of frame elements (qubits per register)
    #[arg(long)]
    frame_size: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: CircuitFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CircuitFormat {
    Text,
    Json,
}

#[derive(Args)]
struct TrainArgs {
    /// Labeled CSV: attribute columns, class label last
    #[arg(long)]
    data: PathBuf,
    /// Gaussians per (attribute, class) mixture
    #[arg(long, default_value_t = 3)]
    components: usize,
    /// Where to write the model JSON
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    /// Trained model JSON
    #[arg(long)]
    model: PathBuf,
    /// Labeled CSV to classify (same format as training data)
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    backend: BackendKind,
    #[arg(long, default_value_t = 1024)]
    shots: u64,
    /// Master seed; each row samples under a seed derived from it
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write predictions as CSV
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Labeled CSV: attribute columns, class label last
    #[arg(long)]
    data: PathBuf,
    /// Training fractions: `start:end:step` sweep or comma-separated list
    #[arg(long, default_value = "0.25:1.0:0.125")]
    fractions: String,
    /// Splits per fraction
    #[arg(long, default_value_t = 100)]
    repeats: usize,
    /// Gaussians per (attribute, class) mixture
    #[arg(long, default_value_t = 3)]
    components: usize,
    #[arg(long, value_enum, default_value = "exact")]
    backend: BackendKind,
    #[arg(long, default_value_t = 1024)]
    shots: u64,
    /// Master seed for splits and shot sampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the results CSV to a file as well as stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> anyhow::Result<()> {
    env_logger::init();
    match Cli::parse().command {
        Command::Combine(args) => run_combine(args),
        Command::Circuit(args) => run_circuit(args),
        Command::Train(args) => run_train(args),
        Command::Predict(args) => run_predict(args),
        Command::Eval(args) => run_eval(args),
    }
}

/// Parses `name=path` or bare `path` mass-file arguments, auto-naming bare
/// ones m1, m2, ... by position.
fn parse_sources(specs: &[String]) -> anyhow::Result<Vec<(String, MassFunction)>> {
    let mut sources = Vec::with_capacity(specs.len());
    for (index, spec) in specs.iter().enumerate() {
        let (name, path) = match spec.split_once('=') {
            Some((name, path)) if !name.is_empty() => (name.to_string(), path),
            _ => (format!("m{}", index + 1), spec.as_str()),
        };
        let mass = read_mass_file(path).with_context(|| format!("reading mass file {path}"))?;
        sources.push((name, mass));
    }
    Ok(sources)
}

fn run_combine(args: CombineArgs) -> anyhow::Result<()> {
    let expr = RuleExpr::parse(&args.rule)?;
    let sources = parse_sources(&args.masses)?;
    let actual = combine_rule(&expr, &sources)?;
    let frame = actual.frame().clone();

    // the compiled route: prepare every rule variable's source, run, observe
    let plan = lower(&expr);
    let preparations: Vec<Circuit> = plan
        .variables()
        .iter()
        .map(|name| {
            sources
                .iter()
                .find(|(source, _)| source == name)
                .map(|(_, mass)| prepare_tree(mass))
                .ok_or_else(|| qdst::Error::UnboundVariable(name.clone()))
        })
        .collect::<Result<_, _>>()?;
    let circuit = compile_rule_circuit(&plan, frame.len(), &preparations)?;
    let distribution = circuit.output_distribution()?;
    let simulated = match args.backend {
        BackendKind::Exact => distribution,
        BackendKind::Shots => sample(&distribution, args.shots, args.seed)?.frequencies(),
    };

    let labels: Vec<String> = (0..frame.num_subsets())
        .map(|index| frame.subset_label(index))
        .collect();
    match args.format {
        CombineFormat::Text => {
            println!("rule: {expr}");
            match args.backend {
                BackendKind::Exact => println!("backend: exact"),
                BackendKind::Shots => {
                    println!("backend: {} shots, seed {}", args.shots, args.seed)
                }
            }
            let width = labels.iter().map(|l| l.len() + 2).max().unwrap_or(2).max(6);
            println!(
                "{:width$}  {:>10}  {:>10}  {:>12}",
                "subset", "simulated", "actual", "error"
            );
            for (index, label) in labels.iter().enumerate() {
                println!(
                    "{:width$}  {:>10.6}  {:>10.6}  {:>12.6e}",
                    format!("{{{label}}}"),
                    simulated[index],
                    actual.value(index),
                    (simulated[index] - actual.value(index)).abs()
                );
            }
        }
        CombineFormat::Csv => {
            println!("subset,simulated,actual,error");
            for (index, label) in labels.iter().enumerate() {
                println!(
                    "{label},{:.6},{:.6},{:.6e}",
                    simulated[index],
                    actual.value(index),
                    (simulated[index] - actual.value(index)).abs()
                );
            }
        }
        CombineFormat::Json => {
            let results: Vec<serde_json::Value> = labels
                .iter()
                .enumerate()
                .map(|(index, label)| {
                    serde_json::json!({
                        "subset": label,
                        "simulated": simulated[index],
                        "actual": actual.value(index),
                        "error": (simulated[index] - actual.value(index)).abs(),
                    })
                })
                .collect();
            let backend = match args.backend {
                BackendKind::Exact => serde_json::json!("exact"),
                BackendKind::Shots => {
                    serde_json::json!({"shots": args.shots, "seed": args.seed})
                }
            };
            let doc = serde_json::json!({
                "rule": expr.to_string(),
                "elements": frame.elements(),
                "backend": backend,
                "results": results,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
    }

    if let Some(path) = args.out {
        let observed = MassFunction::new(frame, simulated)?;
        write_mass_file(&path, &observed)?;
    }
    Ok(())
}

fn run_circuit(args: CircuitArgs) -> anyhow::Result<()> {
    let expr = RuleExpr::parse(&args.rule)?;
    let plan = lower(&expr);
    let circuit = compile_plan(&plan, args.frame_size)?;
    let resources = circuit.resources();
    match args.format {
        CircuitFormat::Text => {
            println!("rule: {expr}");
            println!(
                "registers: {} of {} qubits (sources: {})",
                plan.num_registers(),
                args.frame_size,
                plan.variables().join(", ")
            );
            println!(
                "output register: qubits {}..{}",
                circuit.output_register().start,
                circuit.output_register().end
            );
            println!("resources: {resources}");
            print!("{}", circuit.dump());
        }
        CircuitFormat::Json => {
            let gates: Vec<String> = circuit.dump().lines().map(str::to_owned).collect();
            let doc = serde_json::json!({
                "rule": expr.to_string(),
                "width": circuit.width(),
                "registers": plan.num_registers(),
                "sources": plan.variables(),
                "output_register": [circuit.output_register().start, circuit.output_register().end],
                "resources": {
                    "x": resources.x,
                    "ry": resources.ry,
                    "cry": resources.cry,
                    "mcx": resources.mcx,
                },
                "gates": gates,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
    }
    Ok(())
}

fn run_train(args: TrainArgs) -> anyhow::Result<()> {
    let data = Dataset::from_csv_path(&args.data)
        .with_context(|| format!("reading dataset {}", args.data.display()))?;
    let model = ClassifierModel::train(&data, args.components)?;
    model.save(&args.out)?;
    println!(
        "trained on {} rows: {} attributes, {} classes ({}), {} components per mixture",
        data.len(),
        model.attributes().len(),
        model.frame().len(),
        model.frame().elements().join(", "),
        model.components()
    );
    println!("model written to {}", args.out.display());
    Ok(())
}

fn run_predict(args: PredictArgs) -> anyhow::Result<()> {
    let model = ClassifierModel::load(&args.model)
        .with_context(|| format!("reading model {}", args.model.display()))?;
    let data = Dataset::from_csv_path(&args.data)
        .with_context(|| format!("reading dataset {}", args.data.display()))?;

    let mut csv = String::from("row,predicted,actual");
    for class in model.frame().elements() {
        write!(csv, ",p_{class}").expect("string write");
    }
    csv.push('\n');

    let mut correct = 0usize;
    let mut conflicts = 0usize;
    for row in 0..data.len() {
        let (point, truth) = data.row(row);
        let backend = match args.backend {
            BackendKind::Exact => Backend::Exact,
            BackendKind::Shots => Backend::Shots {
                shots: args.shots,
                seed: derive_seed(args.seed, &[row as u64]),
            },
        };
        let truth_label = &data.classes()[truth];
        match model.classify(point, backend) {
            Ok(outcome) => {
                if outcome.label == *truth_label {
                    correct += 1;
                }
                write!(csv, "{row},{},{truth_label}", outcome.label).expect("string write");
                for p in &outcome.pignistic {
                    write!(csv, ",{p:.6}").expect("string write");
                }
                csv.push('\n');
            }
            Err(qdst::Error::TotalConflict { .. }) => {
                conflicts += 1;
                write!(csv, "{row},conflict,{truth_label}").expect("string write");
                for _ in model.frame().elements() {
                    csv.push(',');
                }
                csv.push('\n');
            }
            Err(other) => return Err(other.into()),
        }
    }

    print!("{csv}");
    println!(
        "accuracy: {:.6} ({correct}/{} rows{})",
        correct as f64 / data.len() as f64,
        data.len(),
        if conflicts > 0 {
            format!(", {conflicts} undecidable")
        } else {
            String::new()
        }
    );
    if let Some(path) = args.out {
        std::fs::write(&path, csv)?;
    }
    Ok(())
}

/// Parses `start:end:step` (inclusive sweep) or a comma-separated list.
fn parse_fractions(text: &str) -> anyhow::Result<Vec<f64>> {
    if let Some((start, rest)) = text.split_once(':') {
        let (end, step) = rest
            .split_once(':')
            .context("fraction sweep must look like start:end:step")?;
        let start: f64 = start.trim().parse().context("bad sweep start")?;
        let end: f64 = end.trim().parse().context("bad sweep end")?;
        let step: f64 = step.trim().parse().context("bad sweep step")?;
        if step <= 0.0 || end < start {
            bail!("fraction sweep must have a positive step and end ≥ start");
        }
        let count = ((end - start) / step).round() as usize;
        let fractions: Vec<f64> = (0..=count).map(|i| start + i as f64 * step).collect();
        Ok(fractions)
    } else {
        text.split(',')
            .map(|part| {
                part.trim()
                    .parse::<f64>()
                    .with_context(|| format!("bad fraction `{part}`"))
            })
            .collect()
    }
}

fn run_eval(args: EvalArgs) -> anyhow::Result<()> {
    let data = Dataset::from_csv_path(&args.data)
        .with_context(|| format!("reading dataset {}", args.data.display()))?;
    let options = EvalOptions {
        fractions: parse_fractions(&args.fractions)?,
        repeats: args.repeats,
        components: args.components,
        backend: match args.backend {
            BackendKind::Exact => EvalBackend::Exact,
            BackendKind::Shots => EvalBackend::Shots { shots: args.shots },
        },
        seed: args.seed,
    };
    let report = evaluate(&data, &options)?;
    let csv = report.to_csv();
    print!("{csv}");
    if let Some(path) = args.out {
        std::fs::write(&path, csv)?;
    }
    Ok(())
}
