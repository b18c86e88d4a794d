//! Sampling checks on the circle side: how densely iterated preimages fill
//! the Julia set of an inner function, and whether preimages keep
//! appearing near the singularity of `fatou_inner`.
//!
//! For `blaschke_baker`, a rational map, there are no singular values to
//! follow. The Julia set is the whole circle and is approximated by the
//! preimage tree of a point other than the Denjoy-Wolff point. For
//! `fatou_inner` the singular set of the iterates accumulates on the
//! pre-poles of cot, which are collected instead.
//!
//! The inclusion of the Julia set in the closure of the accessible
//! directions of a Baker domain needs the Riemann map and is not checked.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{InnerFunctionSpec, InnerKind};
use crate::circle::{level_preimages, max_circle_gap, BoundaryPoint, FATOU_INNER_BRANCHES};
use crate::error::{Error, Result};

/// Residual required of every singularity preimage.
pub const PROBE_TOL: f64 = 1e-10;

/// Disjoint closed arcs of the circle, in turns, sorted by start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleCover {
    pub arcs: Vec<(f64, f64)>,
    pub eps: f64,
}

impl CircleCover {
    /// Groups sorted points whose spacing is at most `eps` into arcs. An
    /// isolated point becomes an arc of length `eps` centred on it.
    pub fn from_points(points: &[BoundaryPoint], eps: f64) -> Self {
        let mut t: Vec<f64> = points.iter().map(|p| p.to_disk().coord).collect();
        t.sort_by(f64::total_cmp);
        let mut arcs: Vec<(f64, f64)> = Vec::new();
        for &x in &t {
            match arcs.last_mut() {
                Some(arc) if x - arc.1 <= eps => arc.1 = x,
                _ => arcs.push((x, x)),
            }
        }
        for arc in &mut arcs {
            if arc.1 == arc.0 {
                arc.0 = (arc.0 - eps / 2.0).max(0.0);
                arc.1 = (arc.1 + eps / 2.0).min(1.0);
            }
        }
        // widening may have made neighbours touch
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(arcs.len());
        for arc in arcs {
            match merged.last_mut() {
                Some(last) if arc.0 <= last.1 => last.1 = last.1.max(arc.1),
                _ => merged.push(arc),
            }
        }
        CircleCover { arcs: merged, eps }
    }

    /// Longest stretch of the circle not covered by an arc.
    pub fn max_gap(&self) -> f64 {
        if self.arcs.is_empty() {
            return 1.0;
        }
        let n = self.arcs.len();
        let wrap = self.arcs[0].0 + 1.0 - self.arcs[n - 1].1;
        self.arcs.windows(2).map(|w| w[1].0 - w[0].1).fold(wrap.max(0.0), f64::max)
    }

    pub fn is_eps_dense(&self) -> bool {
        self.max_gap() <= self.eps
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JuliaSample {
    pub inner_id: String,
    pub depth: usize,
    /// Sampled points, in turns, sorted.
    pub points: Vec<f64>,
    pub cover: CircleCover,
    /// Largest gap between consecutive points, in turns.
    pub point_gap: f64,
    pub exhausted: bool,
}

impl JuliaSample {
    pub const CSV_HEADER: &'static str = "inner_id,depth,index,turns,line_x";

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (i, &t) in self.points.iter().enumerate() {
            let x = BoundaryPoint::disk(t).to_half_plane().coord;
            let _ = writeln!(out, "{},{},{i},{t:e},{x:e}", self.inner_id, self.depth);
        }
        out
    }
}

/// Starting level of the tree: `−1` for the Blaschke product, the poles
/// `kπ`, `|k| ≤ K`, for `fatou_inner`.
fn seed_level(inner: &InnerFunctionSpec, budget: usize) -> Result<Vec<BoundaryPoint>> {
    match inner.kind {
        InnerKind::BlaschkeBaker => Ok(vec![BoundaryPoint::disk(0.5)]),
        InnerKind::FatouInner => {
            let k_max = FATOU_INNER_BRANCHES.min((budget.saturating_sub(1) / 2) as i64);
            Ok((-k_max..=k_max).map(|k| BoundaryPoint::half_plane(k as f64 * PI)).collect())
        }
        _ => Err(Error::Precondition(format!(
            "`{}` has no Julia set on the circle to sample",
            inner.id
        ))),
    }
}

/// Points of the Julia set of `inner` reached by `depth` levels of
/// preimages, at most `budget` of them, with an `eps`-net cover.
pub fn julia_on_circle(
    inner: &InnerFunctionSpec,
    depth: usize,
    budget: usize,
    eps: f64,
) -> Result<JuliaSample> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Precondition("eps must lie in (0, 1)".into()));
    }
    let mut level = seed_level(inner, budget)?;
    let mut exhausted = false;
    if level.len() > budget {
        level.truncate(budget);
        exhausted = true;
    }
    if !exhausted {
        for _ in 0..depth {
            let mut next: Vec<BoundaryPoint> = level
                .par_iter()
                .flat_map_iter(|p| level_preimages(inner, p))
                .collect();
            if next.len() > budget {
                next.truncate(budget);
                exhausted = true;
            }
            level = next;
            if exhausted {
                break;
            }
        }
    }
    let mut points: Vec<f64> = level.iter().map(|p| p.to_disk().coord).collect();
    points.sort_by(f64::total_cmp);
    let cover = CircleCover::from_points(&level, eps);
    Ok(JuliaSample {
        inner_id: inner.id.clone(),
        depth,
        point_gap: max_circle_gap(&level),
        points,
        cover,
        exhausted,
    })
}

/// A solution `η = kπ + u` of `g(η) = target` with `0 < u < π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularityHit {
    pub window: f64,
    pub k: i64,
    pub u: f64,
    pub eta: f64,
    /// `|kπ + u − cot(u)/2 − target|`.
    pub residual: f64,
    pub verified: bool,
}

impl SingularityHit {
    pub const CSV_HEADER: &'static str = "window,k,u,eta,residual,verified";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:e},{},{:e},{}",
            self.window, self.k, self.u, self.eta, self.residual, self.verified
        )
    }
}

/// Root of `u − cot(u)/2 = c` in `(0, π)`. Bisection, then Newton to clean
/// up the last digits, which matter when `u` is tiny.
fn branch_root(c: f64) -> f64 {
    let h = |u: f64| u - u.cos() / u.sin() / 2.0 - c;
    let (mut a, mut b) = (0.0f64, PI);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let v = h(m);
        if v == 0.0 {
            return m;
        }
        if v < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let mut u = 0.5 * (a + b);
    for _ in 0..4 {
        let s = u.sin();
        let step = h(u) / (1.0 + 1.0 / (2.0 * s * s));
        let next = u - step;
        if !(next > a && next < b) || step == 0.0 {
            break;
        }
        u = next;
    }
    u
}

/// For each window radius `R`, the solutions of `g(η) = target` in the
/// first `count` pole intervals `(kπ, (k+1)π)` with `kπ ≥ R`.
pub fn singularity_preimage_probe(
    inner: &InnerFunctionSpec,
    target: f64,
    windows: &[f64],
    count: usize,
) -> Result<Vec<SingularityHit>> {
    if inner.kind != InnerKind::FatouInner {
        return Err(Error::Precondition(
            "the singularity probe applies to fatou_inner".into(),
        ));
    }
    if !target.is_finite() {
        return Err(Error::Precondition(
            "target must not be the Denjoy-Wolff point".into(),
        ));
    }
    if windows.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
        return Err(Error::Precondition("window radii must be finite and non-negative".into()));
    }
    let jobs: Vec<(f64, i64)> = windows
        .iter()
        .flat_map(|&r| {
            let k0 = (r / PI).ceil() as i64;
            (0..count as i64).map(move |j| (r, k0 + j))
        })
        .collect();
    Ok(jobs
        .par_iter()
        .map(|&(window, k)| {
            let base = k as f64 * PI;
            let u = branch_root(target - base);
            let residual = ((base - target) + (u - u.cos() / u.sin() / 2.0)).abs();
            SingularityHit {
                window,
                k,
                u,
                eta: base + u,
                residual,
                verified: residual <= PROBE_TOL && u > 0.0 && u < PI,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poles_at_depth_zero() {
        let s = julia_on_circle(&InnerFunctionSpec::fatou_inner(), 0, 1000, 0.01).unwrap();
        assert_eq!(s.points.len(), 2 * FATOU_INNER_BRANCHES as usize + 1);
        let poles: Vec<f64> = (-FATOU_INNER_BRANCHES..=FATOU_INNER_BRANCHES)
            .map(|k| BoundaryPoint::half_plane(k as f64 * PI).to_disk().coord)
            .collect();
        for p in poles {
            assert!(s.points.iter().any(|&t| (t - p).abs() < 1e-14));
        }
        assert!(!s.exhausted);
    }

    #[test]
    fn zero_budget_gives_empty_cover() {
        for inner in [InnerFunctionSpec::blaschke_baker(), InnerFunctionSpec::fatou_inner()] {
            let s = julia_on_circle(&inner, 3, 0, 0.01).unwrap();
            assert!(s.points.is_empty() && s.cover.arcs.is_empty());
            assert!(s.exhausted);
            assert_eq!(s.cover.max_gap(), 1.0);
        }
    }

    #[test]
    fn cover_arcs_are_disjoint_and_sorted() {
        let s = julia_on_circle(&InnerFunctionSpec::blaschke_baker(), 8, 1 << 12, 0.01).unwrap();
        assert_eq!(s.points.len(), 256);
        for w in s.cover.arcs.windows(2) {
            assert!(w[0].1 < w[1].0);
        }
        assert!(s.cover.arcs.iter().all(|a| a.1 > a.0));
        assert!(s.cover.max_gap() <= s.point_gap);
    }

    #[test]
    fn moebius_has_no_circle_julia_set() {
        assert!(julia_on_circle(&InnerFunctionSpec::moebius_hyperbolic(2.0), 2, 100, 0.01).is_err());
    }

    #[test]
    fn singularity_hits() {
        let g = InnerFunctionSpec::fatou_inner();
        let hits = singularity_preimage_probe(&g, 0.3, &[10.0, 100.0, 1000.0], 4).unwrap();
        assert_eq!(hits.len(), 12);
        for h in &hits {
            assert!(h.verified, "{h:?}");
            assert!(h.eta > h.window);
        }
        assert!(singularity_preimage_probe(&g, 0.3, &[10.0], 0).unwrap().is_empty());
        assert!(singularity_preimage_probe(&g, f64::INFINITY, &[10.0], 3).is_err());
    }
}
