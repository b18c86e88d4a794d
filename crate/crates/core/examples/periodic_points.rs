//! Repelling periodic points on the boundary of Baker domains, found as
//! fixed points of contracting inverse-branch chains.

use std::f64::consts::PI;

use bakerlab::boundary::{find_periodic_point, periodic_census, PeriodicBudgets, PeriodicSearch, Region};
use bakerlab::branches::{Disk, SingularData};
use bakerlab::get_map;
use num_complex::Complex64;

fn report(label: &str, s: &PeriodicSearch) {
    match s {
        PeriodicSearch::Found(r) => println!(
            "{label}: {:.12} period {} multiplier {:.10} residual {:.1e}",
            r.point, r.period, r.multiplier, r.residual
        ),
        PeriodicSearch::NotFound { best_margin } => println!("{label}: not found (best margin {best_margin:.3})"),
    }
}

fn main() -> bakerlab::Result<()> {
    let budgets = PeriodicBudgets::default();
    for (id, center, radius) in [
        ("fatou", Complex64::new(0.0, PI), 0.5),
        ("bargmann", Complex64::new(0.8, 0.0), 0.3),
        ("baker_abel", Complex64::new(0.0, 1.0), 0.5),
    ] {
        let map = get_map(id)?;
        let sd = SingularData::new(&map);
        report(id, &find_periodic_point(&map, &sd, Disk::new(center, radius), 1, &budgets)?);
    }

    let barg = get_map("bargmann")?;
    let sd = SingularData::new(&barg);
    let region = Region { re_min: 0.0, re_max: 3.0, im_min: -8.0, im_max: 8.0 };
    let census = periodic_census(&barg, &sd, &region, 12, 3, 0.5, &budgets)?;
    println!(
        "\nbargmann census: {} disks probed, {} productive",
        census.probed_disks, census.productive_disks
    );
    print!("{}", census.to_csv());
    Ok(())
}
