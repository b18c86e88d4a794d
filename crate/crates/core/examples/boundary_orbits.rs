//! Which boundary points of a Baker domain escape (Denjoy-Wolff set) and
//! which escape along the domain's own access (Caratheodory set).

use bakerlab::boundary::{classify_boundary_orbit, julia_boundary_samples, TriState};
use bakerlab::dynamics::Window;
use bakerlab::{get_map, Budgets};
use num_complex::Complex64;

fn main() -> bakerlab::Result<()> {
    let barg = get_map("bargmann")?;
    let budgets = Budgets::default();
    for x in [Complex64::new(0.792_059_968_430_677, 0.0), Complex64::new(2.0, 0.0), Complex64::new(1.64, 4.98)] {
        let c = classify_boundary_orbit(&barg, x, 200, &budgets);
        println!(
            "{x:.4}: DW {} Caratheodory {} after {} steps, cycle {:?}",
            c.dw_set_member.name(),
            c.caratheodory_member.name(),
            c.evidence.steps,
            c.evidence.cycle
        );
    }

    let samples = julia_boundary_samples(&barg, &Window::from_bounds(-2.0, 4.0, -6.0, 6.0), 48, 96, 200);
    let mut counts = [[0usize; 3]; 3];
    let idx = |t: TriState| match t {
        TriState::Yes => 0,
        TriState::No => 1,
        TriState::Undecided => 2,
    };
    for &x in &samples {
        let c = classify_boundary_orbit(&barg, x, 200, &budgets);
        counts[idx(c.dw_set_member)][idx(c.caratheodory_member)] += 1;
    }
    println!("\n{} boundary samples (rows DW yes/no/undecided, columns Caratheodory):", samples.len());
    for row in counts {
        println!("  {row:?}");
    }
    Ok(())
}
