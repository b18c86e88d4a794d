//! Cowen type of a catalog Baker domain from quasi-hyperbolic increments
//! along interior orbits.
//!
//! The hyperbolic density of U is replaced by `1/dist(z, ∂U)`, which is
//! within a factor 4 of it on simply connected domains. The distance is
//! probed on rings of 64 points: a probe agrees with `z` when both enter
//! the same absorbing component of the map.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{CowenType, EntireMapSpec};
use crate::dynamics::{absorption_label, BasinLabel};
use crate::error::{Error, Result};

pub const GAP_DIRECTIONS: usize = 64;
/// Bisection passes after the dyadic ladder has bracketed the gap.
pub const GAP_REFINEMENTS: usize = 6;
/// Iteration budget of a single membership probe.
pub const LABEL_STEPS: usize = 200;
pub const DEFAULT_PROBE_BUDGET: usize = 8192;
pub const DEFAULT_DEPTH: usize = 48;

/// Thresholds of the decision rule.
pub const VANISHING: f64 = 0.05;
pub const BOUNDED_BELOW: f64 = 0.2;
pub const SPREAD: f64 = 3.0;

fn ring_agrees(map: &EntireMapSpec, z: Complex64, r: f64, label: BasinLabel) -> bool {
    (0..GAP_DIRECTIONS).into_par_iter().all(|j| {
        let w = z + Complex64::from_polar(r, TAU * j as f64 / GAP_DIRECTIONS as f64);
        absorption_label(map, w, LABEL_STEPS) == label
    })
}

/// Estimated distance from `z` to the boundary of its Fatou component,
/// using at most `probe_budget` membership probes.
pub fn boundary_gap(map: &EntireMapSpec, z: Complex64, probe_budget: usize) -> Result<f64> {
    if probe_budget < GAP_DIRECTIONS {
        return Err(Error::UndecidableGap { budget: probe_budget });
    }
    let label = absorption_label(map, z, LABEL_STEPS);
    if !label.is_absorbed() {
        return Err(Error::Precondition(format!(
            "z = {z} is not in an absorbing component of `{}`",
            map.id
        )));
    }
    let rings = probe_budget / GAP_DIRECTIONS;
    let mut used = 0;
    let mut ring = |r: f64| -> Result<bool> {
        if used == rings {
            return Err(Error::UndecidableGap { budget: probe_budget });
        }
        used += 1;
        Ok(ring_agrees(map, z, r, label))
    };

    let r0 = (-20f64).exp2() * z.norm().max(1.0);
    let floor = 1e-15 * z.norm().max(1.0);
    let (mut ok, mut bad) = if ring(r0)? {
        let mut r = r0;
        loop {
            let next = 2.0 * r;
            if !next.is_finite() {
                return Err(Error::UndecidableGap { budget: probe_budget });
            }
            if !ring(next)? {
                break (r, next);
            }
            r = next;
        }
    } else {
        let mut r = r0;
        loop {
            let next = 0.5 * r;
            if next < floor {
                return Err(Error::UndecidableGap { budget: probe_budget });
            }
            if ring(next)? {
                break (next, r);
            }
            r = next;
        }
    };
    for _ in 0..GAP_REFINEMENTS {
        let mid = 0.5 * (ok + bad);
        match ring(mid) {
            Ok(true) => ok = mid,
            Ok(false) => bad = mid,
            // the bracket is already valid; refinement is optional
            Err(_) => break,
        }
    }
    Ok(ok)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncrementSeries {
    pub start: Complex64,
    pub orbit: Vec<Complex64>,
    /// `d_k = |z_{k+1} − z_k| / gap(z_k)`.
    pub increments: Vec<f64>,
    pub boundary_gaps: Vec<f64>,
}

impl IncrementSeries {
    /// Median of the last quartile of increments.
    pub fn tail_level(&self) -> f64 {
        let n = self.increments.len();
        let mut tail: Vec<f64> = self.increments[n - (n / 4).max(1)..].to_vec();
        tail.sort_by(f64::total_cmp);
        let m = tail.len();
        if m % 2 == 1 {
            tail[m / 2]
        } else {
            0.5 * (tail[m / 2 - 1] + tail[m / 2])
        }
    }

    pub fn to_csv(&self, map_id: &str) -> String {
        let mut out = String::new();
        for (k, (d, g)) in self.increments.iter().zip(&self.boundary_gaps).enumerate() {
            let z = self.orbit[k];
            let _ = writeln!(
                out,
                "{map_id},{},{},{k},{},{},{d:e},{g:e}",
                self.start.re, self.start.im, z.re, z.im
            );
        }
        out
    }

    pub const CSV_HEADER: &'static str = "map_id,start_re,start_im,k,re,im,increment,gap";
}

pub fn increment_series(
    map: &EntireMapSpec,
    z0: Complex64,
    depth: usize,
    probe_budget: usize,
) -> Result<IncrementSeries> {
    if depth < 2 {
        return Err(Error::Precondition("depth must be at least 2".into()));
    }
    if !absorption_label(map, z0, LABEL_STEPS).is_absorbed() {
        return Err(Error::Precondition(format!(
            "start {z0} does not reach the Baker domain of `{}`",
            map.id
        )));
    }
    let mut orbit = Vec::with_capacity(depth);
    let mut z = z0;
    orbit.push(z);
    for _ in 1..depth {
        z = map.eval(z)?;
        orbit.push(z);
    }
    let boundary_gaps = orbit[..depth - 1]
        .par_iter()
        .map(|&z| boundary_gap(map, z, probe_budget))
        .collect::<Result<Vec<f64>>>()?;
    let increments = orbit
        .windows(2)
        .zip(&boundary_gaps)
        .map(|(w, g)| (w[1] - w[0]).norm() / g)
        .collect();
    Ok(IncrementSeries {
        start: z0,
        orbit,
        increments,
        boundary_gaps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CowenDecision {
    Decided(CowenType),
    Undecided,
}

impl std::fmt::Display for CowenDecision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CowenDecision::Decided(t) => t.fmt(f),
            CowenDecision::Undecided => f.write_str("undecided"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub map_id: String,
    pub decision: CowenDecision,
    /// Tail level `L` per start, in the order the starts were given.
    pub levels: Vec<f64>,
    pub series: Vec<IncrementSeries>,
}

/// Applies the decision rule to the tail levels of starts at increasing
/// depth.
pub fn decide(levels: &[f64]) -> CowenDecision {
    let min = levels.iter().copied().fold(f64::INFINITY, f64::min);
    let max = levels.iter().copied().fold(0.0, f64::max);
    if levels.iter().all(|&l| l < VANISHING) {
        return CowenDecision::Decided(CowenType::DoublyParabolic);
    }
    if min > BOUNDED_BELOW && max / min < SPREAD {
        return CowenDecision::Decided(CowenType::Hyperbolic);
    }
    let decreasing = levels.windows(2).all(|w| w[1] < w[0]);
    let first = levels[0];
    let last = levels[levels.len() - 1];
    if min > 0.0 && decreasing && first / last >= SPREAD {
        return CowenDecision::Decided(CowenType::SimplyParabolic);
    }
    CowenDecision::Undecided
}

/// Classifies the Baker domain of `map`. `starts` must lie at increasing
/// depth in the absorbing region; `None` uses the catalog defaults.
pub fn classify_baker_type(
    map: &EntireMapSpec,
    starts: Option<&[Complex64]>,
    depth: usize,
    probe_budget: usize,
) -> Result<Classification> {
    let starts = starts.unwrap_or(&map.baker_meta.default_starts);
    if starts.len() < 3 {
        return Err(Error::Precondition(
            "the classifier needs at least 3 starts".into(),
        ));
    }
    let series = starts
        .par_iter()
        .map(|&z0| increment_series(map, z0, depth, probe_budget))
        .collect::<Result<Vec<_>>>()?;
    let levels: Vec<f64> = series.iter().map(IncrementSeries::tail_level).collect();
    Ok(Classification {
        map_id: map.id.clone(),
        decision: decide(&levels),
        levels,
        series,
    })
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
    fn gap_deep_in_fatou_half_plane() {
        let fatou = get_map("fatou").unwrap();
        let g = boundary_gap(&fatou, c(100.0, 0.0), DEFAULT_PROBE_BUDGET).unwrap();
        assert!(g >= 50.0, "gap {g}");
        assert!(g <= c(100.0, -PI).norm() * 1.5);
    }

    #[test]
    fn gap_near_repelling_fixed_point() {
        let fatou = get_map("fatou").unwrap();
        let g = boundary_gap(&fatou, c(0.01, PI), DEFAULT_PROBE_BUDGET).unwrap();
        assert!(g <= 0.02, "gap {g}");
    }

    #[test]
    fn zero_budget_is_an_error() {
        for map in crate::catalog::all_maps() {
            let z = map.baker_meta.default_starts[0];
            assert!(matches!(boundary_gap(&map, z, 0), Err(Error::UndecidableGap { .. })));
        }
    }

    #[test]
    fn increments_shrink_for_fatou() {
        let fatou = get_map("fatou").unwrap();
        let s = increment_series(&fatou, c(50.0, 0.0), 24, DEFAULT_PROBE_BUDGET).unwrap();
        assert_eq!(s.increments.len(), 23);
        assert!(s.increments.iter().all(|&d| d >= 0.0));
        assert!(s.tail_level() < VANISHING);
    }

    #[test]
    fn decision_rule() {
        use CowenType::*;
        assert_eq!(decide(&[0.01, 0.02, 0.001]), CowenDecision::Decided(DoublyParabolic));
        assert_eq!(decide(&[0.9, 1.0, 1.1]), CowenDecision::Decided(Hyperbolic));
        assert_eq!(decide(&[0.2, 0.07, 0.02]), CowenDecision::Decided(SimplyParabolic));
        assert_eq!(decide(&[0.2, 0.3, 0.02]), CowenDecision::Undecided);
        assert_eq!(decide(&[0.15, 0.12, 0.1]), CowenDecision::Undecided);
    }

    #[test]
    fn too_few_starts() {
        let fatou = get_map("fatou").unwrap();
        let starts = [c(20.0, 0.0), c(50.0, 0.0)];
        assert!(classify_baker_type(&fatou, Some(&starts), 8, DEFAULT_PROBE_BUDGET).is_err());
    }
}
