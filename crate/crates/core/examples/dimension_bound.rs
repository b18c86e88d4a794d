//! Moran equation and a dimension lower bound from two inverse-branch
//! chains of bargmann's map.

use bakerlab::branches::{chain_contraction, ChoiceRule, Disk, SingularData};
use bakerlab::dimension::{chain_lower_bound, ifs_lower_bound, moran_exponent, Similitude};
use bakerlab::get_map;
use num_complex::Complex64;

fn main() -> bakerlab::Result<()> {
    for (a, b) in [(0.5, 0.5), (1.0 / 3.0, 1.0 / 3.0), (0.5, 0.25)] {
        println!("moran({a:.4}, {b:.4}) = {:.12}", moran_exponent(a, b)?);
    }

    let unit = Disk::new(Complex64::new(0.0, 0.0), 1.0);
    let third = Complex64::new(1.0 / 3.0, 0.0);
    let f1 = Similitude::new(third, Complex64::new(-0.5, 0.0));
    let f2 = Similitude::new(third, Complex64::new(0.5, 0.0));
    let d = ifs_lower_bound(unit, &f1, &f2)?;
    println!("\nz/3 -+ 1/2 on the unit disk: s = {:.6} (b = {:.3}, {:.3})", d.s, d.b1, d.b2);
    let half = Complex64::new(0.5, 0.0);
    let overlap = ifs_lower_bound(unit, &Similitude::new(half, 0.0.into()), &Similitude::new(half, half));
    println!("z/2, z/2 + 1/2: {}", overlap.unwrap_err());

    let barg = get_map("bargmann")?;
    let sd = SingularData::new(&barg);
    let zstar = Complex64::new(0.792_059_968_430_677, 0.0);
    let p = Complex64::new(1.641_119_050_938_34, 4.978_831_304_928_97);
    let disk = Disk::new((zstar + p) / 2.0, 3.8);
    let c1 = chain_contraction(&barg, &sd, disk, 1, ChoiceRule::NearestTo(zstar))?;
    let c2 = chain_contraction(&barg, &sd, disk, 1, ChoiceRule::NearestTo(p))?;
    let d = chain_lower_bound(&barg, &c1, &c2)?;
    println!(
        "\nbargmann two-branch system: dim >= {:.4} ({}), b = ({:.4}, {:.4}), gap {:.3}",
        d.s, d.label, d.b1, d.b2, d.disjointness_margin
    );
    Ok(())
}
