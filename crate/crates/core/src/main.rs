use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ualab::harness::{
    run_experiment, verify_certificate, ConfigError, Experiment, ExperimentConfig, Format, HarnessError,
};
use ualab::percolation::WitnessCertificate;

const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "ualab", version, about = "Experiments on uniform attachment random graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree, special set, connectivity and diameter statistics.
    Stats(Common),
    /// Sweep and exact conductance, spectral gap.
    Expansion(Common),
    /// The vertex expansion constants ρ(k).
    Rho(Common),
    /// Lazy walk deviation from stationarity against the conductance bound.
    Walk(Common),
    /// A single bootstrap percolation run.
    Percolate(Common),
    /// Full-infection probability over a grid of p.
    Scan(Common),
    /// Closed-form degree probabilities against simulation.
    Oracle(Common),
    /// Witness certificates: soundness runs, or `verify` for a JSON file.
    Witness {
        #[command(subcommand)]
        action: Option<WitnessAction>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum WitnessAction {
    /// Check a certificate against the run described by the flags.
    Verify {
        certificate: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Clone, Default)]
struct Common {
    /// `key = value` configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "n")]
    n: Vec<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long = "p")]
    p: Vec<f64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long = "t-max")]
    t_max: Option<u64>,
    /// Witness root for `percolate`.
    #[arg(long)]
    root: Option<u32>,
    /// Where `percolate` writes the witness of `--root`.
    #[arg(long = "witness-out")]
    witness_out: Option<PathBuf>,
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(c) => c.into(),
            HarnessError::Runtime(r) => Failure::Runtime(r.to_string()),
        }
    }
}

fn build_config(experiment: Experiment, c: &Common) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match &c.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
            ExperimentConfig::parse(&text, Some(experiment))?
        }
        None => ExperimentConfig::new(experiment),
    };
    if !c.n.is_empty() {
        cfg.n_grid = c.n.clone();
    }
    if !c.p.is_empty() {
        cfg.p_grid = Some(c.p.clone());
    }
    let scalars = [
        ("k", c.k.map(|v| v.to_string())),
        ("r", c.r.map(|v| v.to_string())),
        ("trials", c.trials.map(|v| v.to_string())),
        ("seed", c.seed.map(|v| v.to_string())),
        ("out", c.out.clone()),
        ("format", c.format.clone()),
        ("omega", c.omega.map(|v| v.to_string())),
        ("t_max", c.t_max.map(|v| v.to_string())),
        ("root", c.root.map(|v| v.to_string())),
    ];
    for (key, value) in scalars {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn run(experiment: Experiment, common: &Common) -> Result<(), Failure> {
    let cfg = build_config(experiment, common)?;
    let table = run_experiment(&cfg)?;
    let body = match cfg.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    match &cfg.output_path {
        Some(out) => {
            write(Path::new(out), &body)?;
            if cfg.format == Format::Csv {
                write(Path::new(&format!("{out}.meta.json")), &table.metadata_json())?;
            }
        }
        None => print!("{body}"),
    }
    if let (Some(path), Some(w)) = (&common.witness_out, table.metadata.get("witness")) {
        write(path, &format!("{w}\n"))?;
    }
    Ok(())
}

fn verify(certificate: &Path, common: &Common) -> Result<(), Failure> {
    let cfg = build_config(Experiment::Percolate, common)?;
    let text = std::fs::read_to_string(certificate)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", certificate.display())))?;
    let cert = WitnessCertificate::from_json(&text)
        .map_err(|e| Failure::Config(format!("{} is not a certificate: {e}", certificate.display())))?;
    let verdict = verify_certificate(&cfg, &cert).map_err(|e| Failure::Runtime(e.to_string()))?;
    println!("{}", serde_json::to_string(&verdict).expect("verdict serialises"));
    Ok(())
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("UALAB_THREADS") else { return Ok(()) };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Config(format!("UALAB_THREADS must be a positive integer (got {value:?})")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Runtime(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Stats(c) => run(Experiment::Stats, c),
        Command::Expansion(c) => run(Experiment::Expansion, c),
        Command::Rho(c) => run(Experiment::Rho, c),
        Command::Walk(c) => run(Experiment::Walk, c),
        Command::Percolate(c) => run(Experiment::Percolate, c),
        Command::Scan(c) => run(Experiment::Scan, c),
        Command::Oracle(c) => run(Experiment::Oracle, c),
        Command::Witness { action: Some(WitnessAction::Verify { certificate, common }), .. } => {
            verify(certificate, common)
        }
        Command::Witness { action: None, common } => run(Experiment::Witness, common),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
