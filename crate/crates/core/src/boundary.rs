//! Periodic points on the boundary of a Baker domain from contracting
//! branch chains, and classification of boundary orbits by how they reach
//! infinity.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::branches::{chain_contraction_from_endpoints, BranchChain, Disk, SingularData};
use crate::catalog::{AccessPredicate, EntireMapSpec};
use crate::dynamics::{absorption_label, BasinLabel, Budgets, ESCAPE_PERSISTENCE};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicBudgets {
    /// Seeds per side of the Newton grid over the target disk.
    pub seed_grid: usize,
    /// Boundary samples used for the containment check.
    pub boundary_samples: usize,
    /// Fixed-point iterations of the chain.
    pub max_iterations: usize,
    /// Half-width of the label raster used for the boundary witness; an odd
    /// `witness_grid` puts the point itself at the central cell.
    pub witness_window: f64,
    pub witness_grid: usize,
    /// Iteration budget of each witness-raster label.
    pub witness_steps: usize,
}

impl Default for PeriodicBudgets {
    fn default() -> Self {
        PeriodicBudgets {
            seed_grid: 16,
            boundary_samples: 32,
            max_iterations: 200,
            witness_window: 0.05,
            witness_grid: 33,
            witness_steps: 200,
        }
    }
}

pub const RESIDUAL_TOL: f64 = 1e-9;
pub const MINIMALITY_TOL: f64 = 1e-6;
pub const DEDUP_TOL: f64 = 1e-6;
const FIXED_POINT_STEP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicPointResult {
    pub point: Complex64,
    pub period: usize,
    pub multiplier: Complex64,
    pub residual: f64,
    /// Distance from the point to the nearest label change of a local
    /// raster, a proxy for the distance to the Julia set.
    pub boundary_witness: f64,
    /// Relative margin by which the chain maps the target disk into itself.
    pub containment_margin: f64,
    pub chain: BranchChain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodicSearch {
    Found(Box<PeriodicPointResult>),
    /// No chain mapped the disk into itself; the best relative margin seen
    /// (negative, or −∞ when no candidate branch existed) is reported.
    NotFound { best_margin: f64 },
}

impl PeriodicSearch {
    pub fn found(&self) -> Option<&PeriodicPointResult> {
        match self {
            PeriodicSearch::Found(r) => Some(r),
            PeriodicSearch::NotFound { .. } => None,
        }
    }
}

/// `f^n(w)` and `(f^n)'(w)`.
pub fn iterate_with_derivative(map: &EntireMapSpec, w: Complex64, n: usize) -> Result<(Complex64, Complex64)> {
    let mut z = w;
    let mut d = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        let (fz, dz) = map.eval_with_derivative(z)?;
        d *= dz;
        z = fz;
    }
    Ok((z, d))
}

fn newton_iterate(map: &EntireMapSpec, target: Complex64, seed: Complex64, n: usize) -> Option<Complex64> {
    let tol = 1e-13 * (1.0 + target.norm());
    let mut w = seed;
    for _ in 0..100 {
        let (g, dg) = iterate_with_derivative(map, w, n).ok()?;
        if dg.norm() < 1e-8 {
            return None;
        }
        let r = g - target;
        if r.norm() < tol {
            return Some(w);
        }
        w -= r / dg;
        if !(w.re.is_finite() && w.im.is_finite()) {
            return None;
        }
    }
    None
}

/// Endpoints `c, f^{n-1}(w), …, f(w), w` of the chain that takes `c` to `w`.
fn endpoints_of(map: &EntireMapSpec, c: Complex64, w: Complex64, n: usize) -> Result<Vec<Complex64>> {
    let mut forward = vec![w];
    let mut z = w;
    for _ in 0..n {
        z = map.eval(z)?;
        forward.push(z);
    }
    forward.reverse();
    // f^n(w) equals c up to the Newton tolerance
    forward[0] = c;
    Ok(forward)
}

fn proper_divisors(n: usize) -> impl Iterator<Item = usize> {
    (1..n).filter(move |d| n % d == 0)
}

/// Distance from `p` to the nearest cell of a local label raster that
/// borders a cell with a different label.
pub fn boundary_witness(map: &EntireMapSpec, p: Complex64, budgets: &PeriodicBudgets) -> f64 {
    let n = budgets.witness_grid;
    let h = budgets.witness_window;
    let cell = 2.0 * h / n as f64;
    let center = |i: usize, j: usize| {
        p + Complex64::new(-h + (i as f64 + 0.5) * cell, -h + (j as f64 + 0.5) * cell)
    };
    let labels: Vec<BasinLabel> = (0..n * n)
        .into_par_iter()
        .map(|idx| absorption_label(map, center(idx % n, idx / n), budgets.witness_steps))
        .collect();
    let mut best = f64::INFINITY;
    for j in 0..n {
        for i in 0..n {
            let l = labels[j * n + i];
            let differs = (i + 1 < n && labels[j * n + i + 1] != l) || (j + 1 < n && labels[(j + 1) * n + i] != l);
            if differs {
                best = best.min((center(i, j) - p).norm());
            }
        }
    }
    best
}

/// Every verified periodic point of period `<= max_period` produced by a
/// chain that maps `target` into itself, with the best containment margin.
pub fn periodic_points_in_disk(
    map: &EntireMapSpec,
    singular: &SingularData,
    target: Disk,
    max_period: usize,
    budgets: &PeriodicBudgets,
) -> Result<(Vec<PeriodicPointResult>, f64)> {
    if !singular.disk_is_clear(target.center, target.radius) {
        return Err(Error::Precondition(format!(
            "target disk D({}, {}) meets the postsingular exclusion zone",
            target.center, target.radius
        )));
    }
    let g = budgets.seed_grid.max(1);
    let seeds: Vec<Complex64> = (0..g * g)
        .map(|idx| {
            let u = -1.0 + (2.0 * (idx % g) as f64 + 1.0) / g as f64;
            let v = -1.0 + (2.0 * (idx / g) as f64 + 1.0) / g as f64;
            target.center + Complex64::new(u, v) * target.radius
        })
        .filter(|&s| target.contains(s))
        .collect();
    let mut found: Vec<PeriodicPointResult> = Vec::new();
    let mut best_margin = f64::NEG_INFINITY;
    for n in 1..=max_period {
        let mut candidates: Vec<Complex64> = Vec::new();
        let roots: Vec<Option<Complex64>> = seeds
            .par_iter()
            .map(|&s| newton_iterate(map, target.center, s, n))
            .collect();
        for w in roots.into_iter().flatten() {
            if target.contains(w) && candidates.iter().all(|q| (q - w).norm() > 1e-9) {
                candidates.push(w);
            }
        }
        candidates.sort_by(|a, b| (a - target.center).norm().total_cmp(&(b - target.center).norm()));
        for w in candidates {
            let endpoints = endpoints_of(map, target.center, w, n)?;
            let chain = chain_contraction_from_endpoints(map, singular, target, endpoints)?;
            if !chain.valid {
                continue;
            }
            let mut reach: f64 = 0.0;
            let mut lifted_all = true;
            for zeta in target.boundary_samples(budgets.boundary_samples) {
                match chain.apply(map, zeta) {
                    Ok(z) => reach = reach.max((z - target.center).norm()),
                    Err(_) => {
                        lifted_all = false;
                        break;
                    }
                }
            }
            if !lifted_all {
                continue;
            }
            let margin = 1.0 - reach / target.radius;
            best_margin = best_margin.max(margin);
            if margin <= 0.0 {
                continue;
            }
            let Some(p) = chain_fixed_point(map, &chain, w, budgets.max_iterations) else {
                continue;
            };
            let (fp, mult) = iterate_with_derivative(map, p, n)?;
            let residual = (fp - p).norm();
            if !(residual < RESIDUAL_TOL && mult.norm() > 1.0) {
                continue;
            }
            let minimal = proper_divisors(n).all(|d| match iterate_with_derivative(map, p, d) {
                Ok((z, _)) => (z - p).norm() > MINIMALITY_TOL,
                Err(_) => true,
            });
            if !minimal || found.iter().any(|r| (r.point - p).norm() < DEDUP_TOL) {
                continue;
            }
            found.push(PeriodicPointResult {
                point: p,
                period: n,
                multiplier: mult,
                residual,
                boundary_witness: boundary_witness(map, p, budgets),
                containment_margin: margin,
                chain,
            });
        }
    }
    Ok((found, best_margin))
}

/// Iterates `p ← F_n(p)` from `start` until the step falls below 1e-12.
fn chain_fixed_point(map: &EntireMapSpec, chain: &BranchChain, start: Complex64, max_iter: usize) -> Option<Complex64> {
    let mut p = start;
    for _ in 0..max_iter {
        let q = chain.apply(map, p).ok()?;
        let step = (q - p).norm();
        p = q;
        if step < FIXED_POINT_STEP * (1.0 + p.norm()) {
            return Some(p);
        }
    }
    None
}

/// Searches for a repelling periodic point of period `<= max_period` in
/// `target`, smallest period first.
pub fn find_periodic_point(
    map: &EntireMapSpec,
    singular: &SingularData,
    target: Disk,
    max_period: usize,
    budgets: &PeriodicBudgets,
) -> Result<PeriodicSearch> {
    let (found, best_margin) = periodic_points_in_disk(map, singular, target, max_period, budgets)?;
    Ok(match found.into_iter().next() {
        Some(r) => PeriodicSearch::Found(Box::new(r)),
        None => PeriodicSearch::NotFound { best_margin },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Region {
    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Census {
    pub points: Vec<PeriodicPointResult>,
    pub probed_disks: usize,
    pub productive_disks: usize,
    /// Fraction of probed disks yielding at least one point; 0 when no
    /// disk could be probed.
    pub coverage: f64,
}

impl Census {
    pub const CSV_HEADER: &'static str = "re,im,period,mult_re,mult_im,residual,witness";

    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", Self::CSV_HEADER);
        for r in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{:e},{:e}\n",
                r.point.re, r.point.im, r.period, r.multiplier.re, r.multiplier.im, r.residual, r.boundary_witness
            ));
        }
        out
    }
}

/// Runs the periodic search over a grid of disks of radius `disk_radius`
/// covering `region`, skipping disks that meet the exclusion zone.
/// Results are deduplicated, ordered by period and then by distance to the
/// region's center, and cut at `count`.
pub fn periodic_census(
    map: &EntireMapSpec,
    singular: &SingularData,
    region: &Region,
    count: usize,
    max_period: usize,
    disk_radius: f64,
    budgets: &PeriodicBudgets,
) -> Result<Census> {
    let step = disk_radius;
    let nx = ((region.re_max - region.re_min) / step).ceil().max(0.0) as usize;
    let ny = ((region.im_max - region.im_min) / step).ceil().max(0.0) as usize;
    let disks: Vec<Disk> = (0..nx * ny)
        .map(|idx| {
            let (i, j) = (idx % nx, idx / nx);
            Disk::new(
                Complex64::new(
                    region.re_min + (i as f64 + 0.5) * step,
                    region.im_min + (j as f64 + 0.5) * step,
                ),
                disk_radius,
            )
        })
        .filter(|d| singular.disk_is_clear(d.center, d.radius))
        .collect();
    let per_disk: Vec<Vec<PeriodicPointResult>> = disks
        .par_iter()
        .map(|&d| periodic_points_in_disk(map, singular, d, max_period, budgets).map(|(v, _)| v))
        .collect::<Result<_>>()?;
    let productive = per_disk.iter().filter(|v| !v.is_empty()).count();
    let mut points: Vec<PeriodicPointResult> = Vec::new();
    for r in per_disk.into_iter().flatten() {
        if points.iter().all(|q| (q.point - r.point).norm() >= DEDUP_TOL) {
            points.push(r);
        }
    }
    let c = region.center();
    points.sort_by(|a, b| {
        a.period
            .cmp(&b.period)
            .then((a.point - c).norm().total_cmp(&(b.point - c).norm()))
            .then(a.point.re.total_cmp(&b.point.re))
            .then(a.point.im.total_cmp(&b.point.im))
    });
    points.truncate(count);
    Ok(Census {
        points,
        probed_disks: disks.len(),
        productive_disks: productive,
        coverage: if disks.is_empty() { 0.0 } else { productive as f64 / disks.len() as f64 },
    })
}

// ---------------------------------------------------------------------------
// Boundary orbit classes
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    Yes,
    No,
    Undecided,
}

impl TriState {
    pub fn name(self) -> &'static str {
        match self {
            TriState::Yes => "yes",
            TriState::No => "no",
            TriState::Undecided => "undecided",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitEvidence {
    pub steps: usize,
    pub last: Complex64,
    pub sup_radius: f64,
    pub overflowed: bool,
    /// Period of the cycle the orbit was seen to fall into.
    pub cycle: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryOrbitClass {
    pub start: Complex64,
    pub dw_set_member: TriState,
    pub caratheodory_member: TriState,
    pub evidence: OrbitEvidence,
}

/// Modulus beyond which the access direction of an escaping orbit is read.
pub const ACCESS_THRESHOLD: f64 = 100.0;
/// Steps over which the access coordinate must grow monotonically.
pub const ACCESS_WINDOW: usize = 3;

fn access_holds(pred: AccessPredicate, tail: &[Complex64]) -> bool {
    let coord = |z: &Complex64| match pred {
        AccessPredicate::RealPartToPlusInfinity => z.re,
        AccessPredicate::RealPartToMinusInfinity => -z.re,
        AccessPredicate::ImaginaryPartUnbounded => z.im.abs(),
    };
    tail.len() >= ACCESS_WINDOW
        && tail.windows(2).all(|w| coord(&w[1]) > coord(&w[0]))
        && coord(&tail[tail.len() - 1]) > ACCESS_THRESHOLD
}

/// Classifies the orbit of a boundary sample `x` over `horizon` steps.
///
/// Membership in the Denjoy-Wolff set is read from sustained escape (or
/// overflow); non-membership is only claimed for orbits seen to cycle.
/// Carathéodory membership additionally asks that the last finite iterates
/// leave along the map's access to infinity.
pub fn classify_boundary_orbit(
    map: &EntireMapSpec,
    x: Complex64,
    horizon: usize,
    budgets: &Budgets,
) -> BoundaryOrbitClass {
    let mut orbit = vec![x];
    let mut overflowed = false;
    let mut run = 0usize;
    let mut sup = x.norm();
    let mut cycle = None;
    let mut z = x;
    for k in 1..=horizon {
        match map.eval(z) {
            Ok(w) if w.re.is_finite() && w.im.is_finite() => z = w,
            _ => {
                overflowed = true;
                break;
            }
        }
        orbit.push(z);
        sup = sup.max(z.norm());
        run = if z.norm() > budgets.escape_radius { run + 1 } else { 0 };
        if run >= ESCAPE_PERSISTENCE {
            break;
        }
        // Floyd: compare z_k with z_{k/2}
        if k % 2 == 0 {
            let half = orbit[k / 2];
            if (z - half).norm() < 1e-9 * (1.0 + half.norm()) {
                // find the exact cycle length
                let p = (1..=k / 2)
                    .find(|&p| (orbit[k - p] - z).norm() < 1e-9 * (1.0 + z.norm()))
                    .unwrap_or(k / 2);
                cycle = Some(p);
                break;
            }
        }
    }
    let escaped = overflowed || run >= ESCAPE_PERSISTENCE;
    let dw = if escaped {
        TriState::Yes
    } else if cycle.is_some() {
        TriState::No
    } else {
        TriState::Undecided
    };
    let cara = match dw {
        TriState::Yes => {
            let m = orbit.len();
            let tail = &orbit[m.saturating_sub(ACCESS_WINDOW)..];
            if access_holds(map.baker_meta.access_predicate, tail) {
                TriState::Yes
            } else {
                TriState::No
            }
        }
        other => other,
    };
    BoundaryOrbitClass {
        start: x,
        dw_set_member: dw,
        caratheodory_member: cara,
        evidence: OrbitEvidence {
            steps: orbit.len() - 1,
            last: *orbit.last().unwrap(),
            sup_radius: sup,
            overflowed,
            cycle,
        },
    }
}

/// Non-absorbed cell centers of a label raster that border an absorbed
/// cell: samples within one cell of the boundary of the Baker domain.
pub fn julia_boundary_samples(
    map: &EntireMapSpec,
    window: &crate::dynamics::Window,
    width: usize,
    height: usize,
    steps: usize,
) -> Vec<Complex64> {
    let labels: Vec<BasinLabel> = (0..width * height)
        .into_par_iter()
        .map(|idx| absorption_label(map, window.pixel_center(idx % width, idx / width, width, height), steps))
        .collect();
    let mut out = Vec::new();
    for row in 0..height {
        for col in 0..width {
            let l = labels[row * width + col];
            if l.is_absorbed() {
                continue;
            }
            let neighbors = [
                (col > 0).then(|| labels[row * width + col - 1]),
                (col + 1 < width).then(|| labels[row * width + col + 1]),
                (row > 0).then(|| labels[(row - 1) * width + col]),
                (row + 1 < height).then(|| labels[(row + 1) * width + col]),
            ];
            if neighbors.iter().flatten().any(|n| n.is_absorbed()) {
                out.push(window.pixel_center(col, row, width, height));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::get_map;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const ZSTAR: f64 = 0.792_059_968_430_677;

    #[test]
    fn fatou_fixed_point() {
        let fatou = get_map("fatou").unwrap();
        let sd = SingularData::new(&fatou);
        let r = find_periodic_point(&fatou, &sd, Disk::new(c(0.0, PI), 0.5), 1, &PeriodicBudgets::default())
            .unwrap();
        let r = r.found().expect("fixed point");
        assert!((r.point - c(0.0, PI)).norm() < 1e-10);
        assert!((r.multiplier - c(2.0, 0.0)).norm() < 1e-8);
        assert_eq!(r.period, 1);
        assert!(r.boundary_witness < 0.01);
    }

    #[test]
    fn bargmann_fixed_point() {
        let barg = get_map("bargmann").unwrap();
        let sd = SingularData::new(&barg);
        let r = find_periodic_point(&barg, &sd, Disk::new(c(0.8, 0.0), 0.5), 1, &PeriodicBudgets::default())
            .unwrap();
        let r = r.found().expect("fixed point");
        assert!((r.point - c(ZSTAR, 0.0)).norm() < 1e-10);
        assert!((r.multiplier.re - (5.0 - ZSTAR)).abs() < 1e-6);
    }

    #[test]
    fn baker_abel_has_no_fixed_point() {
        let abel = get_map("baker_abel").unwrap();
        let sd = SingularData::new(&abel);
        for center in [c(-1.0, 0.0), c(0.5, PI), c(2.0, 1.0)] {
            let r = find_periodic_point(&abel, &sd, Disk::new(center, 0.5), 1, &PeriodicBudgets::default()).unwrap();
            assert!(r.found().is_none());
        }
    }

    #[test]
    fn boundary_classes_of_fixed_points() {
        let b = Budgets::default();
        let fatou = get_map("fatou").unwrap();
        let k = classify_boundary_orbit(&fatou, c(0.0, PI), 200, &b);
        assert_eq!((k.dw_set_member, k.caratheodory_member), (TriState::No, TriState::No));
        assert_eq!(k.evidence.cycle, Some(1));
        let barg = get_map("bargmann").unwrap();
        let k = classify_boundary_orbit(&barg, c(ZSTAR, 0.0), 200, &b);
        assert_eq!((k.dw_set_member, k.caratheodory_member), (TriState::No, TriState::No));
    }

    #[test]
    fn real_hair_of_bargmann_escapes_without_access() {
        // real points beyond z* escape along the real axis, Im stays 0
        let barg = get_map("bargmann").unwrap();
        let k = classify_boundary_orbit(&barg, c(1.5, 0.0), 200, &Budgets::default());
        assert_eq!(k.dw_set_member, TriState::Yes);
        assert_eq!(k.caratheodory_member, TriState::No);
    }

    #[test]
    fn empty_census() {
        let barg = get_map("bargmann").unwrap();
        let sd = SingularData::new(&barg);
        // a tiny region around a critical value: every disk is excluded
        let v = barg.critical_value(0);
        let region = Region { re_min: v.re - 0.1, re_max: v.re + 0.1, im_min: v.im - 0.1, im_max: v.im + 0.1 };
        let census = periodic_census(&barg, &sd, &region, 20, 2, 0.5, &PeriodicBudgets::default()).unwrap();
        assert!(census.points.is_empty());
        assert_eq!(census.coverage, 0.0);
    }
}
