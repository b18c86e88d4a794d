//! Density of preimage trees in the circle Julia set, and preimages of a
//! point accumulating at the singularity of fatou_inner.

use bakerlab::probe::{julia_on_circle, singularity_preimage_probe};
use bakerlab::InnerFunctionSpec;

fn main() -> bakerlab::Result<()> {
    let blaschke = InnerFunctionSpec::blaschke_baker();
    for depth in [4, 8, 12] {
        let s = julia_on_circle(&blaschke, depth, 1 << 16, 0.01)?;
        println!(
            "blaschke depth {depth:>2}: {:>5} points, largest gap {:.4} turns, {} arcs",
            s.points.len(),
            s.point_gap,
            s.cover.arcs.len()
        );
    }

    let g = InnerFunctionSpec::fatou_inner();
    let s = julia_on_circle(&g, 1, 1 << 16, 0.01)?;
    println!("fatou_inner pre-poles at depth 1: {} points, gap {:.4}", s.points.len(), s.point_gap);

    println!("\nsolutions of g(x) = 0.3 beyond R:");
    for h in singularity_preimage_probe(&g, 0.3, &[10.0, 100.0, 1000.0], 3)? {
        println!("  R = {:>6}: x = {:.12} (k = {}), residual {:.1e}", h.window, h.eta, h.k, h.residual);
    }
    Ok(())
}
