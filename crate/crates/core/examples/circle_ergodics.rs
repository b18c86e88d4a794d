//! Boundary statistics of inner functions: convergence to the Denjoy-Wolff
//! point, recurrence, and the invariant halves of a hyperbolic dilation.

use bakerlab::circle::{
    dw_convergence_fraction, invariant_halves_measure, invariant_halves_monte_carlo, iterate_circle,
    recurrence_fraction,
};
use bakerlab::{BoundaryArc, BoundaryPoint, InnerFunctionSpec};

fn main() -> bakerlab::Result<()> {
    let seed = 42;
    let hyper = InnerFunctionSpec::moebius_hyperbolic(2.0);
    let para = InnerFunctionSpec::moebius_parabolic(1.0);
    let blaschke = InnerFunctionSpec::blaschke_baker();

    let arc = BoundaryArc::disk(0.30, 0.35);
    for (g, n) in [(&hyper, 60), (&para, 10_000), (&blaschke, 1000)] {
        let dw = dw_convergence_fraction(g, 4000, n, 1e-3, seed)?;
        let rec = recurrence_fraction(g, &arc, 4000, n, seed + 1)?;
        println!(
            "{:<19} n={n:<6} to DW {:.4} ± {:.4}   returns {:.4} ± {:.4}",
            g.id, dw.value, dw.stderr, rec.value, rec.stderr
        );
    }

    let (pos, neg) = invariant_halves_measure(&hyper)?;
    let (mp, mn) = invariant_halves_monte_carlo(&hyper, 100_000, seed)?;
    println!("\ninvariant halves: exact ({pos}, {neg}), sampled ({:.4}, {:.4})", mp.value, mn.value);

    let orbit = iterate_circle(&blaschke, BoundaryPoint::disk(0.3), 8);
    let turns: Vec<String> = orbit.points.iter().map(|p| format!("{:.4}", p.coord)).collect();
    println!("blaschke orbit of 0.3 turns: {}", turns.join(" "));
    Ok(())
}
