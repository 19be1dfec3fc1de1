//! `aquakern` command-line runner.
//!
//! Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
//! failure. Failures print one JSON object to stderr.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aquakern::data::{generate_synthetic, DEFAULT_ECOLI_COLUMN};
use aquakern::experiment::{
    experiment_gram, resolve_seed_from_env, run_experiment, run_sweep, sweep_row_dir, sweep_table, write_gram_csv,
    write_outputs, write_sweep_csv, ExperimentConfig, RunReport,
};
use aquakern::{Error, ErrorClass};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "aquakern", version, about = "Quantum-kernel SVM and QNN experiments on water-quality data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Root seed; overrides the config and AQUAKERN_SEED.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Only print errors.
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run a JSON array of experiment configs and tabulate them.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Write a synthetic water-quality CSV.
    GenerateData {
        #[arg(long, default_value_t = 32)]
        n: usize,
        /// Fraction of acceptable rows.
        #[arg(long, default_value_t = 3.0 / 32.0)]
        imbalance: f64,
        #[arg(long)]
        seed: Option<u64>,
        /// CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
    /// Build a QSVC experiment's training Gram matrix and report its health.
    InspectGram {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Print the version.
    Version,
}

fn exit_code(e: &Error) -> u8 {
    match e.class() {
        ErrorClass::Config => 2,
        ErrorClass::Data => 3,
        ErrorClass::Numerical => 4,
    }
}

fn report_error(e: &Error) -> ExitCode {
    let class = match e.class() {
        ErrorClass::Config => "config",
        ErrorClass::Data => "data",
        ErrorClass::Numerical => "numerical",
    };
    let mut body = serde_json::json!({
        "error": {
            "class": class,
            "kind": e.kind(),
            "message": e.to_string(),
        }
    });
    if let Error::Config(problems) = e {
        body["error"]["problems"] = serde_json::json!(problems);
    }
    eprintln!("{body}");
    ExitCode::from(exit_code(e))
}

fn read_text(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Config(vec![format!("cannot read config {}: {e}", path.display())]))
}

fn load_config(path: &Path) -> Result<ExperimentConfig, Error> {
    ExperimentConfig::from_json(&read_text(path)?)
        .map_err(|e| Error::Config(vec![format!("{}: {e}", path.display())]))
}

fn out_dir(common: &Common, config: Option<&ExperimentConfig>, fallback: &str) -> PathBuf {
    common
        .out
        .clone()
        .or_else(|| config.and_then(|c| c.output_dir.clone()))
        .unwrap_or_else(|| PathBuf::from("aquakern-out").join(fallback))
}

fn summary(report: &RunReport) -> String {
    let m = &report.metrics;
    let mut s = format!(
        "{} ({}, seed {}): accuracy {:.4}  f1 {:.4}  precision {:.4}  recall {:.4}  auroc {:.4}  auprc {:.4}",
        report.name, report.family, report.seed, m.accuracy, m.f1, m.precision, m.recall, m.auroc, m.auprc
    );
    if let Some(last) = report.history.last() {
        s.push_str(&format!("\nfinal training loss {:.6} after {} epochs", last.loss, report.history.len()));
    }
    if report.diagnostics.dead_neuron {
        s.push_str("\nwarning: dead-neuron diagnostic fired (outputs constant across the batch)");
    }
    if report.diagnostics.plateau {
        s.push_str("\nwarning: training loss plateaued");
    }
    for w in &report.diagnostics.warnings {
        s.push_str(&format!("\nwarning: {w}"));
    }
    s
}

fn cmd_run(config: &Path, common: &Common) -> Result<(), Error> {
    let cfg = load_config(config)?;
    let seed = resolve_seed_from_env(common.seed, cfg.seed)?;
    let outcome = run_experiment(&cfg, seed)?;
    let dir = out_dir(common, Some(&cfg), &cfg.name);
    let written = write_outputs(&outcome, &dir)?;
    if !common.quiet {
        println!("{}", summary(&outcome.report));
        for p in written {
            println!("wrote {}", p.display());
        }
    }
    Ok(())
}

fn cmd_sweep(config: &Path, common: &Common) -> Result<(), Error> {
    let text = read_text(config)?;
    let configs: Vec<ExperimentConfig> = serde_json::from_str(&text)
        .map_err(|e| Error::Config(vec![format!("{}: expected a JSON array of experiments: {e}", config.display())]))?;
    let sweep = run_sweep(&configs, |c| resolve_seed_from_env(common.seed, c.seed))?;
    let root = out_dir(common, None, "sweep");
    std::fs::create_dir_all(&root).map_err(|e| Error::io(root.display().to_string(), e))?;
    // one directory per row, written in order
    for (i, (cfg, outcome)) in configs.iter().zip(&sweep.outcomes).enumerate() {
        if let Ok(o) = outcome {
            write_outputs(o, &sweep_row_dir(&root, i, &cfg.name))?;
        }
    }
    write_sweep_csv(&sweep.rows, &root.join("sweep.csv"))?;
    let table = sweep_table(&sweep.rows);
    let txt = root.join("sweep.txt");
    std::fs::write(&txt, &table).map_err(|e| Error::io(txt.display().to_string(), e))?;
    let failed = sweep.rows.iter().filter(|r| r.status != "ok").count();
    if failed > 0 {
        log::warn!("{failed} of {} sweep rows failed", sweep.rows.len());
    }
    if !common.quiet {
        print!("{table}");
        println!("wrote {}", root.join("sweep.csv").display());
    }
    Ok(())
}

fn cmd_generate(n: usize, imbalance: f64, seed: Option<u64>, out: Option<&Path>, quiet: bool) -> Result<(), Error> {
    let seed = resolve_seed_from_env(seed, None)?;
    let data = generate_synthetic(n, imbalance, seed)?;
    match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| Error::io(parent.display().to_string(), e))?;
            }
            data.save_csv(path)?;
            if !quiet {
                let counts = data.class_counts();
                println!(
                    "wrote {} ({} rows: {} acceptable, {} not acceptable, seed {seed})",
                    path.display(),
                    data.len(),
                    counts.acceptable,
                    counts.not_acceptable
                );
            }
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            data.write_csv(&mut lock, DEFAULT_ECOLI_COLUMN)?;
            lock.flush().map_err(|e| Error::io("stdout", e))?;
        }
    }
    Ok(())
}

fn cmd_inspect(config: &Path, common: &Common) -> Result<(), Error> {
    let cfg = load_config(config)?;
    let seed = resolve_seed_from_env(common.seed, cfg.seed)?;
    let k = experiment_gram(&cfg, seed)?;
    let diag = k.diagnostics();
    if let Some(dir) = &common.out {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
        write_gram_csv(&k, &dir.join("gram.csv"))?;
    }
    if !common.quiet {
        let body = serde_json::json!({ "kernel": k.spec().name(), "seed": seed, "diagnostics": diag });
        println!("{}", serde_json::to_string_pretty(&body).map_err(Error::from)?);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let quiet = match &cli.command {
        Command::Run { common, .. } | Command::Sweep { common, .. } | Command::InspectGram { common, .. } => {
            common.quiet
        }
        Command::GenerateData { quiet, .. } => *quiet,
        Command::Version => false,
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(if quiet { "error" } else { "warn" }))
        .init();

    let result = match &cli.command {
        Command::Run { config, common } => cmd_run(config, common),
        Command::Sweep { config, common } => cmd_sweep(config, common),
        Command::GenerateData {
            n,
            imbalance,
            seed,
            out,
            quiet,
        } => cmd_generate(*n, *imbalance, *seed, out.as_deref(), *quiet),
        Command::InspectGram { config, common } => cmd_inspect(config, common),
        Command::Version => {
            println!("aquakern {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report_error(&e),
    }
}
