//! The catalog of entire maps and inner functions.

use bakerlab::branches::{AnalyticMap, SingularData};
use bakerlab::catalog::{all_maps, catalog_table, get_inner, inner_ids};
use num_complex::Complex64;

fn main() -> bakerlab::Result<()> {
    print!("{}", catalog_table());
    println!();

    let z = Complex64::new(0.5, 1.0);
    for map in all_maps() {
        let (w, d) = map.eval_with_derivative(z)?;
        let sd = SingularData::new(&map);
        println!(
            "{:<11} f({z}) = {w:.6}   f' = {d:.6}   critical values nearby: {}",
            map.id,
            sd.critical_values.len()
        );
    }

    // bargmann overflows once Re z passes the guard
    let barg = bakerlab::get_map("bargmann")?;
    println!("\nbargmann at 800: {:?}", barg.eval(Complex64::new(800.0, 0.0)).err());

    println!();
    for id in inner_ids() {
        let g = get_inner(id)?;
        let probe = Complex64::new(0.3, 0.4);
        let (v, _) = g.eval_d(probe)?;
        println!("{id:<19} {:?} DW point {:?}  g({probe}) = {v:.6}", g.cowen_type, g.dw_point);
    }
    Ok(())
}
