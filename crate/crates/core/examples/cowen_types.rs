//! Cowen type of each catalog Baker domain from quasi-hyperbolic increments.

use bakerlab::catalog::all_maps;
use bakerlab::cowen::{classify_baker_type, DEFAULT_DEPTH, DEFAULT_PROBE_BUDGET};

fn main() -> bakerlab::Result<()> {
    for map in all_maps() {
        let t = std::time::Instant::now();
        let c = classify_baker_type(&map, None, DEFAULT_DEPTH, DEFAULT_PROBE_BUDGET)?;
        let levels: Vec<String> = c.levels.iter().map(|l| format!("{l:.4}")).collect();
        println!(
            "{:<11} levels [{}] -> {:<17} (expected {}, {:.2}s)",
            map.id,
            levels.join(", "),
            c.decision.to_string(),
            map.baker_meta.known_type,
            t.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
