//! Forward iteration, orbit classification and rasterization of the
//! dynamical plane.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::EntireMapSpec;
use crate::error::{Error, Result};

/// Number of consecutive steps beyond the escape radius required to call an
/// orbit escaping.
pub const ESCAPE_PERSISTENCE: usize = 5;

/// Largest accepted pixel count for a render.
pub const MAX_PIXELS: usize = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budgets {
    pub n_max: usize,
    pub escape_radius: f64,
    pub bounded_radius: f64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            n_max: 1000,
            escape_radius: 1e6,
            bounded_radius: 1e3,
        }
    }
}

impl Budgets {
    pub fn new(n_max: usize, escape_radius: f64, bounded_radius: f64) -> Self {
        Budgets {
            n_max,
            escape_radius,
            bounded_radius,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.escape_radius > self.bounded_radius && self.bounded_radius > 0.0) {
            return Err(Error::Precondition(format!(
                "need escape_radius > bounded_radius > 0, got {} and {}",
                self.escape_radius, self.bounded_radius
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitClass {
    Escaping,
    Bounded,
    Bungee,
    Undecided,
}

impl OrbitClass {
    pub fn as_byte(self) -> u8 {
        match self {
            OrbitClass::Escaping => 0,
            OrbitClass::Bounded => 1,
            OrbitClass::Bungee => 2,
            OrbitClass::Undecided => 3,
        }
    }

    pub fn from_byte(b: u8) -> Option<Self> {
        Some(match b {
            0 => OrbitClass::Escaping,
            1 => OrbitClass::Bounded,
            2 => OrbitClass::Bungee,
            3 => OrbitClass::Undecided,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            OrbitClass::Escaping => "escaping",
            OrbitClass::Bounded => "bounded",
            OrbitClass::Bungee => "bungee",
            OrbitClass::Undecided => "undecided",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitRecord {
    pub points: Vec<Complex64>,
    pub classification: OrbitClass,
    pub escape_index: Option<usize>,
    /// True when the orbit stopped because an exponential overflowed.
    pub overflowed: bool,
    pub sup_radius: f64,
    pub inf_tail_radius: f64,
}

struct OrbitSummary {
    class: OrbitClass,
    escape_index: Option<usize>,
    overflowed: bool,
    sup_radius: f64,
    inf_tail_radius: f64,
}

fn run_orbit(
    map: &EntireMapSpec,
    z0: Complex64,
    budgets: &Budgets,
    mut sink: Option<&mut Vec<Complex64>>,
) -> OrbitSummary {
    let mut sup = z0.norm();
    let mut inf_tail = f64::INFINITY;
    let tail_start = budgets.n_max / 2;
    if tail_start == 0 {
        inf_tail = sup;
    }
    if budgets.n_max == 0 {
        return OrbitSummary {
            class: OrbitClass::Undecided,
            escape_index: None,
            overflowed: false,
            sup_radius: sup,
            inf_tail_radius: inf_tail,
        };
    }
    let mut z = z0;
    let mut run = 0usize;
    let mut run_start = 0usize;
    for k in 1..=budgets.n_max {
        z = match map.eval(z) {
            Ok(w) if w.re.is_finite() && w.im.is_finite() => w,
            _ => {
                return OrbitSummary {
                    class: OrbitClass::Escaping,
                    escape_index: Some(k),
                    overflowed: true,
                    sup_radius: f64::INFINITY,
                    inf_tail_radius: inf_tail,
                }
            }
        };
        if let Some(s) = sink.as_deref_mut() {
            s.push(z);
        }
        let r = z.norm();
        sup = sup.max(r);
        if k >= tail_start {
            inf_tail = inf_tail.min(r);
        }
        if r > budgets.escape_radius {
            if run == 0 {
                run_start = k;
            }
            run += 1;
            if run >= ESCAPE_PERSISTENCE {
                return OrbitSummary {
                    class: OrbitClass::Escaping,
                    escape_index: Some(run_start),
                    overflowed: false,
                    sup_radius: sup,
                    inf_tail_radius: inf_tail,
                };
            }
        } else {
            run = 0;
        }
    }
    let class = if sup <= budgets.bounded_radius {
        OrbitClass::Bounded
    } else if sup > budgets.escape_radius && inf_tail < budgets.bounded_radius {
        OrbitClass::Bungee
    } else {
        OrbitClass::Undecided
    };
    OrbitSummary {
        class,
        escape_index: None,
        overflowed: false,
        sup_radius: sup,
        inf_tail_radius: inf_tail,
    }
}

/// Iterates `map` from `z0`, keeping the points.
pub fn iterate_orbit(
    map: &EntireMapSpec,
    z0: Complex64,
    budgets: &Budgets,
) -> Result<OrbitRecord> {
    if budgets.n_max == 0 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    budgets.validate()?;
    let mut points = Vec::with_capacity(budgets.n_max.min(1 << 16) + 1);
    points.push(z0);
    let s = run_orbit(map, z0, budgets, Some(&mut points));
    let tail = &points[points.len() / 2..];
    let inf_tail_radius = tail.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    Ok(OrbitRecord {
        points,
        classification: s.class,
        escape_index: s.escape_index,
        overflowed: s.overflowed,
        sup_radius: s.sup_radius,
        inf_tail_radius: if s.escape_index.is_some() {
            inf_tail_radius
        } else {
            s.inf_tail_radius
        },
    })
}

/// Streaming classification; O(1) memory. A zero budget yields `Undecided`.
pub fn classify_point(map: &EntireMapSpec, z0: Complex64, budgets: &Budgets) -> OrbitClass {
    run_orbit(map, z0, budgets, None).class
}

fn classify_with_index(map: &EntireMapSpec, z0: Complex64, budgets: &Budgets) -> Cell {
    let s = run_orbit(map, z0, budgets, None);
    Cell {
        class: s.class,
        iterations: s.escape_index.unwrap_or(budgets.n_max) as u32,
    }
}

// ---------------------------------------------------------------------------
// Baker-domain membership
// ---------------------------------------------------------------------------

/// Fatou-side label of a point relative to the map's absorbing region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasinLabel {
    /// The orbit entered the absorbing region of the Baker domain with the
    /// given component index.
    Absorbed(i64),
    /// An exponential overflowed first (Julia-side escape).
    Overflowed,
    /// Neither happened within the budget.
    Unresolved,
}

impl BasinLabel {
    pub fn is_absorbed(self) -> bool {
        matches!(self, BasinLabel::Absorbed(_))
    }
}

/// Iterates until the orbit enters the absorbing region, overflows, or the
/// budget runs out.
pub fn absorption_label(map: &EntireMapSpec, z0: Complex64, n_max: usize) -> BasinLabel {
    let region = map.baker_meta.absorbing_hint;
    let mut z = z0;
    for _ in 0..=n_max {
        if let Some(k) = region.label(z) {
            return BasinLabel::Absorbed(k);
        }
        z = match map.eval(z) {
            Ok(w) if w.re.is_finite() && w.im.is_finite() => w,
            _ => return BasinLabel::Overflowed,
        };
    }
    BasinLabel::Unresolved
}

// ---------------------------------------------------------------------------
// Rasterization
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub center: Complex64,
    pub width: f64,
    pub height: f64,
}

impl Window {
    pub fn new(center: Complex64, width: f64, height: f64) -> Self {
        Window {
            center,
            width,
            height,
        }
    }

    /// Window covering `[re_min, re_max] x [im_min, im_max]`.
    pub fn from_bounds(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        Window {
            center: Complex64::new((re_min + re_max) / 2.0, (im_min + im_max) / 2.0),
            width: re_max - re_min,
            height: im_max - im_min,
        }
    }

    /// Center of pixel `(col, row)`; row 0 is the top edge.
    pub fn pixel_center(&self, col: usize, row: usize, w: usize, h: usize) -> Complex64 {
        let re = self.center.re - self.width / 2.0 + (col as f64 + 0.5) * self.width / w as f64;
        let im = self.center.im + self.height / 2.0 - (row as f64 + 0.5) * self.height / h as f64;
        Complex64::new(re, im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub class: OrbitClass,
    /// Escape index for escaping cells, otherwise the iteration budget.
    pub iterations: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridRender {
    pub window: Window,
    pub width: usize,
    pub height: usize,
    pub n_max: usize,
    pub cells: Vec<Cell>,
}

pub fn render_plane(
    map: &EntireMapSpec,
    window: &Window,
    width: usize,
    height: usize,
    budgets: &Budgets,
) -> Result<GridRender> {
    if width == 0 || height == 0 {
        return Err(Error::Precondition("render resolution must be at least 1x1".into()));
    }
    match width.checked_mul(height) {
        Some(n) if n <= MAX_PIXELS => {}
        _ => {
            return Err(Error::Precondition(format!(
                "render resolution {width}x{height} exceeds {MAX_PIXELS} pixels"
            )))
        }
    }
    if budgets.n_max > 0 {
        budgets.validate()?;
    }
    let cells = (0..width * height)
        .into_par_iter()
        .map(|idx| {
            let z = window.pixel_center(idx % width, idx / width, width, height);
            classify_with_index(map, z, budgets)
        })
        .collect();
    Ok(GridRender {
        window: *window,
        width,
        height,
        n_max: budgets.n_max,
        cells,
    })
}

/// Palette: escaping cells ramp linearly from white (escape index 0) to
/// pure blue (escape index n_max); bounded is black, bungee red, undecided
/// gray (128,128,128).
pub fn cell_color(cell: &Cell, n_max: usize) -> [u8; 3] {
    match cell.class {
        OrbitClass::Escaping => {
            let t = (cell.iterations as f64 / n_max.max(1) as f64).clamp(0.0, 1.0);
            let v = (255.0 * (1.0 - t)).round() as u8;
            [v, v, 255]
        }
        OrbitClass::Bounded => [0, 0, 0],
        OrbitClass::Bungee => [255, 0, 0],
        OrbitClass::Undecided => [128, 128, 128],
    }
}

impl GridRender {
    pub fn cell(&self, col: usize, row: usize) -> &Cell {
        &self.cells[row * self.width + col]
    }

    /// Binary PPM (P6, maxval 255).
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.reserve(self.cells.len() * 3);
        for cell in &self.cells {
            out.extend_from_slice(&cell_color(cell, self.n_max));
        }
        out
    }

    pub fn count(&self, class: OrbitClass) -> usize {
        self.cells.iter().filter(|c| c.class == class).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::get_map;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn baker_abel_real_orbit_increases_and_escapes() {
        let map = get_map("baker_abel").unwrap();
        // x_n grows like log n, so the radii must sit within reach of 10^4 steps.
        let rec = iterate_orbit(&map, c(0.0, 0.0), &Budgets::new(10_000, 5.0, 1.0)).unwrap();
        assert_eq!(rec.classification, OrbitClass::Escaping);
        for w in rec.points.windows(2) {
            assert!(w[1].re > w[0].re);
            assert_eq!(w[1].im, 0.0);
        }
    }

    #[test]
    fn fatou_fixed_point_is_bounded() {
        let map = get_map("fatou").unwrap();
        let rec = iterate_orbit(&map, c(0.0, PI), &Budgets::new(40, 1e6, 1e3)).unwrap();
        assert_eq!(rec.classification, OrbitClass::Bounded);
        assert!(rec.points.iter().all(|z| (z - c(0.0, PI)).norm() < 1e-9));
    }

    #[test]
    fn fatou_real_start_drifts_right() {
        let map = get_map("fatou").unwrap();
        let rec = iterate_orbit(&map, c(10.0, 0.0), &Budgets::new(2000, 1e3, 50.0)).unwrap();
        assert!(rec.points[100].re > 109.0 && rec.points[100].re < 111.0);
        assert_eq!(rec.classification, OrbitClass::Escaping);
    }

    #[test]
    fn overflow_counts_as_escape() {
        let map = get_map("bargmann").unwrap();
        let rec = iterate_orbit(&map, c(8.0, 0.0), &Budgets::default()).unwrap();
        assert_eq!(rec.classification, OrbitClass::Escaping);
        assert!(rec.overflowed);
    }

    #[test]
    fn classify_examples() {
        let b = Budgets::default();
        let bargmann = get_map("bargmann").unwrap();
        let zstar = c(0.792_059_968_430_677, 0.0);
        assert_eq!(
            classify_point(&bargmann, zstar, &Budgets::new(20, 1e6, 1e3)),
            OrbitClass::Bounded
        );
        let berg = get_map("bergweiler").unwrap();
        assert_eq!(classify_point(&berg, c(-10.0, 0.0), &b), OrbitClass::Escaping);
        let zero = Budgets::new(0, 1e6, 1e3);
        for map in crate::catalog::all_maps() {
            assert_eq!(classify_point(&map, c(0.5, 0.5), &zero), OrbitClass::Undecided);
        }
    }

    #[test]
    fn iterate_rejects_bad_budgets() {
        let map = get_map("fatou").unwrap();
        assert!(iterate_orbit(&map, c(0.0, 0.0), &Budgets::new(0, 1e6, 1e3)).is_err());
        assert!(iterate_orbit(&map, c(0.0, 0.0), &Budgets::new(5, 1.0, 2.0)).is_err());
    }

    #[test]
    fn tiny_renders() {
        let fatou = get_map("fatou").unwrap();
        let r = render_plane(&fatou, &Window::new(c(0.0, PI), 1.0, 1.0), 1, 1, &Budgets::new(60, 1e6, 1e3))
            .unwrap();
        assert_eq!(r.cells[0].class, OrbitClass::Bounded);
        let r = render_plane(&fatou, &Window::new(c(10.0, 0.0), 1.0, 1.0), 1, 1, &Budgets::new(2000, 1e3, 50.0))
            .unwrap();
        assert_eq!(r.cells[0].class, OrbitClass::Escaping);
        let r = render_plane(&fatou, &Window::new(c(0.0, 0.0), 1.0, 1.0), 2, 2, &Budgets::new(0, 1e6, 1e3))
            .unwrap();
        assert!(r.cells.iter().all(|c| c.class == OrbitClass::Undecided));
        assert!(render_plane(&fatou, &Window::new(c(0.0, 0.0), 1.0, 1.0), 0, 2, &Budgets::default()).is_err());
        assert!(render_plane(&fatou, &Window::new(c(0.0, 0.0), 1.0, 1.0), 20_000, 20_000, &Budgets::default())
            .is_err());
    }

    #[test]
    fn ppm_layout_and_palette() {
        let fatou = get_map("fatou").unwrap();
        let r = render_plane(&fatou, &Window::from_bounds(-5.0, 15.0, -10.0, 10.0), 8, 4, &Budgets::new(50, 1e3, 20.0))
            .unwrap();
        let ppm = r.to_ppm();
        let header = b"P6\n8 4\n255\n";
        assert_eq!(&ppm[..header.len()], header);
        assert_eq!(ppm.len(), header.len() + 8 * 4 * 3);
        let bounded = Cell { class: OrbitClass::Bounded, iterations: 0 };
        assert_eq!(cell_color(&bounded, 10), [0, 0, 0]);
        let fast = Cell { class: OrbitClass::Escaping, iterations: 0 };
        assert_eq!(cell_color(&fast, 10), [255, 255, 255]);
        let slow = Cell { class: OrbitClass::Escaping, iterations: 10 };
        assert_eq!(cell_color(&slow, 10), [0, 0, 255]);
    }

    #[test]
    fn render_is_deterministic() {
        let map = get_map("bargmann").unwrap();
        let w = Window::from_bounds(-2.0, 4.0, -6.0, 6.0);
        let b = Budgets::new(100, 1e6, 1e3);
        let a = render_plane(&map, &w, 40, 30, &b).unwrap();
        let z = render_plane(&map, &w, 40, 30, &b).unwrap();
        assert_eq!(a.to_ppm(), z.to_ppm());
    }

    #[test]
    fn absorption_labels() {
        let fatou = get_map("fatou").unwrap();
        assert_eq!(absorption_label(&fatou, c(5.0, 0.0), 10), BasinLabel::Absorbed(0));
        // the half-line Im z = π, Re z < 0 escapes to the left through overflow
        assert_eq!(absorption_label(&fatou, c(-0.5, PI), 100), BasinLabel::Overflowed);
        let abel = get_map("baker_abel").unwrap();
        assert_eq!(absorption_label(&abel, c(2.0, 2.0 * PI + 0.1), 10), BasinLabel::Absorbed(1));
    }
}
