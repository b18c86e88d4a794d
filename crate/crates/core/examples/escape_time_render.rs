//! Escape-time picture of Fatou's function and orbit classification.

use bakerlab::dynamics::{classify_point, iterate_orbit, render_plane, OrbitClass, Window};
use bakerlab::{get_map, Budgets};
use num_complex::Complex64;

fn main() -> bakerlab::Result<()> {
    let fatou = get_map("fatou")?;
    let budgets = Budgets::new(300, 200.0, 100.0);
    let window = Window::from_bounds(-5.0, 15.0, -10.0, 10.0);
    let grid = render_plane(&fatou, &window, 200, 200, &budgets)?;

    let path = std::env::temp_dir().join("fatou_escape.ppm");
    std::fs::write(&path, grid.to_ppm()).map_err(|e| bakerlab::Error::Io(e.to_string()))?;
    println!("wrote {}", path.display());
    for class in [OrbitClass::Escaping, OrbitClass::Bounded, OrbitClass::Bungee, OrbitClass::Undecided] {
        println!("  {:<9} {}", class.name(), grid.count(class));
    }

    let orbit = iterate_orbit(&fatou, Complex64::new(1.0, 0.0), &budgets)?;
    println!(
        "\norbit of 1: {:?}, escape index {:?}, sup |z| = {:.3e}",
        orbit.classification, orbit.escape_index, orbit.sup_radius
    );
    let ipi = Complex64::new(0.0, std::f64::consts::PI);
    println!("i*pi is fixed: {:?}", classify_point(&fatou, ipi, &Budgets::default()));
    Ok(())
}
