use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use aal_core::spectral::{bohr_set, fourier, large_spectrum, BohrSpec};
use aal_core::structure::{katz_koester_iterate, CrootSisaskParams, PipelineParams, Variant};
use aal_core::{CharSet, GSet, GroupSpec, RealMap};
use aal_workbench::{
    evaluate, run_experiment, EvalContext, Evaluation, ExperimentConfig, Format, GeneratorSpec,
    OperationSpec, OutputSpec, Result,
};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "aal",
    version,
    about = "Exact experiments on approximate groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Group such as `Z12`, `Z2^3` or `Z2xZ6`.
    #[arg(long)]
    group: String,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct WithSet {
    #[command(flatten)]
    common: Common,
    /// Set literal such as `{0,3,6}` or `{(0,1),(1,0)}`.
    #[arg(long)]
    set: String,
}

#[derive(Subcommand)]
enum Command {
    /// Additive energy.
    Energy(WithSet),
    /// `A + B`, with `B = A` by default.
    Sumset {
        #[command(flatten)]
        input: WithSet,
        #[arg(long)]
        other: Option<String>,
    },
    /// Symmetry set at a rational threshold.
    Sym {
        #[command(flatten)]
        input: WithSet,
        #[arg(long, default_value = "1/2")]
        eta: String,
    },
    /// Bohr set of a set of characters, optionally as a coset progression.
    Bohr {
        #[command(flatten)]
        common: Common,
        /// Characters as dual coordinates, e.g. `{1,-1}`.
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        progression: bool,
        #[arg(long)]
        d_claim: Option<usize>,
        #[arg(long, default_value_t = 8)]
        d_max: usize,
    },
    /// Large spectrum.
    Lspec {
        #[command(flatten)]
        input: WithSet,
        #[arg(long)]
        eps: f64,
        /// Also write the full transform of the indicator as CSV.
        #[arg(long)]
        spectrum: Option<PathBuf>,
    },
    /// Growth profile and order.
    Growth {
        #[command(flatten)]
        input: WithSet,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
    /// Growth bound for symmetric sets with small iterated sumsets.
    Chang {
        #[command(flatten)]
        input: WithSet,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
    /// Iterated sumset bound from the doubling constant.
    Plunnecke {
        #[command(flatten)]
        input: WithSet,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
    },
    /// Certified almost periods of the indicator convolved with the set.
    CrootSisask {
        #[command(flatten)]
        input: WithSet,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[arg(long, default_value_t = 256)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Density-increment iteration trace.
    KkIterate {
        #[command(flatten)]
        input: WithSet,
        #[arg(long, default_value_t = 0.5)]
        eta: f64,
        #[arg(long, default_value_t = 32)]
        max_steps: usize,
    },
    /// Large subset with small doubling from large energy.
    Bsg {
        #[command(flatten)]
        input: WithSet,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 64)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// End-to-end structure pipeline.
    Pipeline {
        #[command(flatten)]
        input: WithSet,
        #[arg(long, value_enum, default_value = "basic")]
        variant: VariantArg,
        /// Pipeline parameters as JSON; flags below override it.
        #[arg(long)]
        params: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluates an operation over a generated domain.
    Sweep {
        /// Experiment file; otherwise build one from the flags below.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        group: Option<String>,
        /// Generator as JSON, e.g. `{"kind":"all_subsets"}`.
        #[arg(long)]
        generator: Option<String>,
        /// Operation as JSON, e.g. `{"op":"energy"}`.
        #[arg(long)]
        operation: Option<String>,
        /// Output directory for records.csv, result.json and experiment.json.
        #[arg(long)]
        out: Option<String>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Prints the instances of a generator.
    Gen {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        generator: String,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum VariantArg {
    Basic,
    Schoen,
    Lp,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Basic => Variant::Basic,
            VariantArg::Schoen => Variant::Schoen,
            VariantArg::Lp => Variant::Lp,
        }
    }
}

fn init_threads() {
    let Ok(v) = std::env::var("AAL_THREADS") else {
        return;
    };
    match v.parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
            {
                log::warn!("AAL_THREADS ignored: {e}");
            }
        }
        _ => log::warn!("AAL_THREADS={v} is not a positive integer"),
    }
}

fn parse_input(w: &WithSet) -> Result<(GroupSpec, GSet)> {
    let g: GroupSpec = w.common.group.parse()?;
    let a = GSet::parse(&g, &w.set)?;
    Ok((g, a))
}

fn emit(common: &Common, text: &str) -> Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn render(common: &Common, op: &OperationSpec, e: &Evaluation) -> Result<String> {
    Ok(match common.format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "status": e.status,
            "pass": e.pass,
            "result": e.detail,
        }))?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header: Vec<&str> = op.columns().to_vec();
            header.extend(["status", "pass"]);
            w.write_record(&header)?;
            let mut row = e.values.clone();
            row.push(e.status.clone());
            row.push(e.pass.to_string());
            w.write_record(&row)?;
            String::from_utf8(w.into_inner().map_err(|e| e.into_error())?)
                .expect("csv output is utf-8")
        }
    })
}

/// Evaluates one operation on `--set`; returns whether it passed.
fn single(input: &WithSet, op: OperationSpec) -> Result<bool> {
    let (_, a) = parse_input(input)?;
    let e = evaluate(&op, &a, &EvalContext::default());
    if e.status.starts_with("error") {
        log::error!("{}", e.status);
    }
    emit(&input.common, &render(&input.common, &op, &e)?)?;
    Ok(e.pass)
}

fn emit_value(common: &Common, value: &Value) -> Result<()> {
    emit(common, &serde_json::to_string_pretty(value)?)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Energy(input) => single(&input, OperationSpec::Energy),
        Command::Sumset { input, other } => single(&input, OperationSpec::Sumset { other }),
        Command::Sym { input, eta } => single(&input, OperationSpec::Sym { eta }),
        Command::Growth { input, n_max } => single(&input, OperationSpec::Growth { n_max }),
        Command::Chang { input, k, n_max } => single(&input, OperationSpec::Chang { k, n_max }),
        Command::Plunnecke { input, n_max } => single(&input, OperationSpec::Plunnecke { n_max }),
        Command::CrootSisask {
            input,
            eps,
            p,
            samples,
            trials,
            seed,
        } => single(
            &input,
            OperationSpec::CrootSisask {
                params: CrootSisaskParams {
                    eps,
                    p,
                    samples,
                    trials,
                    seed,
                    ..Default::default()
                },
            },
        ),
        Command::Bsg {
            input,
            delta,
            trials,
            seed,
        } => single(
            &input,
            OperationSpec::Bsg {
                delta,
                trials,
                seed,
            },
        ),
        Command::Pipeline {
            input,
            variant,
            params,
            k,
            samples,
            trials,
            seed,
        } => {
            let mut params: PipelineParams = match params {
                Some(text) => serde_json::from_str(&text)?,
                None => PipelineParams::default(),
            };
            if let Some(k) = k {
                params.k = k;
            }
            if let Some(s) = samples {
                params.samples = s;
            }
            if let Some(t) = trials {
                params.trials = t;
            }
            if let Some(s) = seed {
                params.seed = s;
            }
            single(
                &input,
                OperationSpec::Pipeline {
                    variant: variant.into(),
                    params,
                },
            )
        }
        Command::Bohr {
            common,
            gamma,
            delta,
            progression,
            d_claim,
            d_max,
        } => {
            let g: GroupSpec = common.group.parse()?;
            let gamma_set = CharSet::parse(&g, &gamma)?;
            if progression {
                let op = OperationSpec::BohrProgression {
                    delta,
                    d_claim,
                    d_max,
                };
                let e = evaluate(&op, gamma_set.as_dual_set(), &EvalContext::default());
                emit(&common, &render(&common, &op, &e)?)?;
                Ok(e.pass)
            } else {
                let b = bohr_set(&BohrSpec::new(gamma_set, delta)?);
                emit_value(&common, &json!({ "size": b.len(), "bohr_set": b }))?;
                Ok(true)
            }
        }
        Command::Lspec {
            input,
            eps,
            spectrum,
        } => {
            let (_, a) = parse_input(&input)?;
            let spec = large_spectrum(&a, eps)?;
            if let Some(path) = spectrum {
                let s = fourier(&RealMap::indicator(&a));
                s.write_csv(std::fs::File::create(path)?)?;
            }
            emit_value(
                &input.common,
                &json!({ "eps": eps, "size": spec.len(), "large_spectrum": spec }),
            )?;
            Ok(true)
        }
        Command::KkIterate {
            input,
            eta,
            max_steps,
        } => {
            let (_, a) = parse_input(&input)?;
            let trace = katz_koester_iterate(&a, eta, max_steps)?;
            emit_value(&input.common, &serde_json::to_value(&trace)?)?;
            Ok(trace.completed)
        }
        Command::Sweep {
            config,
            group,
            generator,
            operation,
            out,
            format,
        } => {
            let mut cfg = match config {
                Some(path) => ExperimentConfig::load(&path)?,
                None => {
                    let missing = |name: &str| {
                        aal_workbench::WorkbenchError::Config(format!(
                            "--{name} is required without --config"
                        ))
                    };
                    ExperimentConfig {
                        group: group.ok_or_else(|| missing("group"))?,
                        generator: serde_json::from_str(
                            &generator.ok_or_else(|| missing("generator"))?,
                        )?,
                        operation: serde_json::from_str(
                            &operation.ok_or_else(|| missing("operation"))?,
                        )?,
                        output: OutputSpec::default(),
                    }
                }
            };
            if out.is_some() {
                cfg.output.dir = out;
            }
            if let Some(f) = format {
                cfg.output.format = f;
            }
            let result = run_experiment(&cfg)?;
            if cfg.output.dir.is_none() {
                let text = match cfg.output.format {
                    Format::Csv => result.to_csv_string()?,
                    Format::Json => serde_json::to_string_pretty(&result)?,
                };
                print!("{text}");
            }
            log::info!(
                "{} instances, {} failures",
                result.records.len(),
                result.failures.len()
            );
            Ok(result.all_passed())
        }
        Command::Gen { common, generator } => {
            let g: GroupSpec = common.group.parse()?;
            let spec: GeneratorSpec = serde_json::from_str(&generator)?;
            let instances = spec.instances(&g)?;
            let text = match common.format {
                Format::Json => serde_json::to_string_pretty(
                    &instances
                        .iter()
                        .map(|i| json!({ "descriptor": i.descriptor, "set": i.set }))
                        .collect::<Vec<_>>(),
                )?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["instance_id", "descriptor", "size", "set"])?;
                    for (id, i) in instances.iter().enumerate() {
                        w.write_record([
                            id.to_string(),
                            i.descriptor.clone(),
                            i.set.len().to_string(),
                            i.set.to_string(),
                        ])?;
                    }
                    String::from_utf8(w.into_inner().map_err(|e| e.into_error())?)
                        .expect("csv output is utf-8")
                }
            };
            emit(&common, &text)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    init_threads();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
