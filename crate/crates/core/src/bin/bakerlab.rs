use std::path::PathBuf;
use std::process::ExitCode;

use bakerlab::experiment::{exit_code, run, ExperimentConfig, ExperimentKind, EXIT_CONFIG};
use bakerlab::Error;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bakerlab", version, about = "Baker domain experiments")]
struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Config file, `key = value` lines or a JSON object (`.json`).
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Extra `key=value` settings applied after the config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory; overrides `output_dir`.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Table of the catalog maps.
    Catalog(Common),
    /// Escape-time picture of a map as PPM.
    Render(Common),
    /// Cowen type of a map's Baker domain.
    Classify(Common),
    /// Ergodic statistics of an inner function on the circle.
    CircleStats(Common),
    /// Census of repelling periodic points.
    Periodic(Common),
    /// Denjoy-Wolff and Carathéodory membership of boundary samples.
    BoundaryClass(Common),
    /// Moran lower bound from two inverse-branch chains.
    Dimension(Common),
    /// Julia-set density and singularity preimages on the circle.
    Probe(Common),
}

impl Command {
    fn split(self) -> (ExperimentKind, Common) {
        use ExperimentKind as K;
        match self {
            Command::Catalog(c) => (K::Catalog, c),
            Command::Render(c) => (K::Render, c),
            Command::Classify(c) => (K::Classify, c),
            Command::CircleStats(c) => (K::CircleStats, c),
            Command::Periodic(c) => (K::Periodic, c),
            Command::BoundaryClass(c) => (K::BoundaryClass, c),
            Command::Dimension(c) => (K::Dimension, c),
            Command::Probe(c) => (K::Probe, c),
        }
    }
}

fn config(kind: ExperimentKind, common: &Common) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path, Some(kind))?,
        None => ExperimentConfig::parse("", false, Some(kind))?,
    };
    for s in &common.set {
        cfg = cfg.with_override(s)?;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, common) = cli.command.split();
    let cfg = match config(kind, &common) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    match run(&cfg, common.out.as_deref(), cli.threads) {
        Ok(report) => {
            for a in &report.artifacts {
                println!("{}", report.output_dir.join(&a.name).display());
            }
            for note in &report.manifest.notes {
                eprintln!("note: {note}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
