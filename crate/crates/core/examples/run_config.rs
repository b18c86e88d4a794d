//! Runs a shipped experiment config through the library, as the CLI does.
//!
//! `cargo run --example run_config -- configs/circle_stats_blaschke.cfg`

use std::path::PathBuf;

use bakerlab::experiment::{run, ExperimentConfig};

fn main() -> bakerlab::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/dimension_bargmann.cfg")));
    let cfg = ExperimentConfig::load(&path, None)?;
    println!("{} experiment, config hash {}", cfg.kind, cfg.hash());
    let out = std::env::temp_dir().join("bakerlab").join(cfg.kind.name());
    let report = run(&cfg, Some(&out), None)?;
    for a in &report.artifacts {
        println!("\n== {} ({} bytes)", a.name, a.bytes.len());
        if a.name.ends_with(".csv") {
            for line in String::from_utf8_lossy(&a.bytes).lines().take(8) {
                println!("{line}");
            }
        }
    }
    println!("\nwall time {:.3}s", report.manifest.wall_time_seconds);
    Ok(())
}
