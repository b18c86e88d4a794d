//! Inverse branches: Newton preimages, path lifting with an obstruction at
//! a critical value, and the contraction of a branch chain.

use std::f64::consts::TAU;

use bakerlab::branches::{chain_contraction, lift_path, newton_preimage, ChoiceRule, Disk, SingularData, StepControl};
use bakerlab::{get_map, Error};
use num_complex::Complex64;

fn main() -> bakerlab::Result<()> {
    let barg = get_map("bargmann")?;
    let w = Complex64::new(1.0, 1.0);
    let target = barg.eval(w)?;
    let back = newton_preimage(&barg, target, w + 0.05, 1e-13)?;
    println!("bargmann preimage of f(1+i): {back:.12}");

    let abel = get_map("baker_abel")?;
    let cv = abel.critical_value(1);
    let path = [cv - Complex64::new(0.5, 1e-13), cv + Complex64::new(0.5, -1e-13)];
    let start = newton_preimage(&abel, path[0], Complex64::new(-0.3, TAU + 0.5), 1e-13)?;
    match lift_path(&abel, &path, start, &StepControl::default()) {
        Err(Error::Obstruction { segment, t, reason }) => {
            println!("lift through {cv:.4}: blocked on segment {segment} at t = {t:.6} ({reason})")
        }
        other => println!("unexpected: {other:?}"),
    }

    let sd = SingularData::new(&barg);
    let zstar = Complex64::new(0.792_059_968_430_677, 0.0);
    let chain = chain_contraction(&barg, &sd, Disk::new(zstar, 0.2), 5, ChoiceRule::NearestPrevious)?;
    println!("\nfixed branch at z*, 5 steps, valid = {}", chain.valid);
    print!("{}", chain.to_csv());
    println!("total contraction {:.6e} vs (5 - z*)^-5 = {:.6e}", chain.total_contraction(), (5.0 - zstar.re).powi(-5));
    Ok(())
}
