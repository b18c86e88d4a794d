//! Local inverse branches by Newton's method and path lifting, with the
//! postsingular set kept at a distance.
//!
//! Chains of branches are scored in the quasi-hyperbolic proxy of
//! `W = C \ P(f)`, whose density is `1/dist(z, P(f))`; `P(f)` is known only
//! through finite forward orbits of the critical values.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{
    eval_inner, eval_inner_derivative, EntireMapSpec, FormulaKind, InnerFunctionSpec, InnerKind,
};
use crate::error::{Error, Result};

/// Newton gives up below this derivative modulus.
pub const DERIVATIVE_FLOOR: f64 = 1e-8;
pub const NEWTON_MAX_STEPS: usize = 100;
pub const DEFAULT_EXCLUSION_RADIUS: f64 = 1e-3;
pub const POSTSINGULAR_DEPTH: usize = 50;
pub const POSTSINGULAR_LATTICE: i64 = 64;
pub const POSTSINGULAR_CUTOFF: f64 = 1e8;
/// Resolution of the seed grid used to enumerate nearby preimages.
pub const SCAN_GRID: usize = 32;

/// A holomorphic map whose local inverses can be followed.
pub trait AnalyticMap: Sync {
    fn eval_d(&self, z: Complex64) -> Result<(Complex64, Complex64)>;

    /// Critical values inside the box with corners `lo` and `hi`; may
    /// include a few outside it.
    fn critical_values_in_box(&self, lo: Complex64, hi: Complex64) -> Vec<Complex64>;
}

/// Indices `k` with `base + k*step` inside `[lo, hi]`, widened by one on
/// each side.
fn lattice_range(base: f64, step: f64, lo: f64, hi: f64) -> std::ops::RangeInclusive<i64> {
    let a = ((lo - base) / step).floor() as i64;
    let b = ((hi - base) / step).ceil() as i64;
    a.max(-1_000_000)..=b.min(1_000_000)
}

impl EntireMapSpec {
    /// The critical point with lattice index `k`.
    pub fn critical_point(&self, k: i64) -> Complex64 {
        let kf = k as f64;
        match self.formula_kind {
            FormulaKind::BakerAbel | FormulaKind::Fatou => Complex64::new(0.0, TAU * kf),
            FormulaKind::Herman => Complex64::new(0.0, PI * (2.0 * kf + 1.0)),
            FormulaKind::Bergweiler => Complex64::new(std::f64::consts::LN_2, TAU * kf),
            FormulaKind::Bargmann => Complex64::new(std::f64::consts::LN_2, PI * (2.0 * kf + 1.0)),
        }
    }

    pub fn critical_value(&self, k: i64) -> Complex64 {
        self.eval(self.critical_point(k))
            .expect("critical points have small real part")
    }

    /// Vertical spacing of consecutive critical values.
    fn critical_value_step(&self) -> f64 {
        match self.formula_kind {
            FormulaKind::Bergweiler | FormulaKind::Bargmann => 2.0 * TAU,
            _ => TAU,
        }
    }
}

impl AnalyticMap for EntireMapSpec {
    fn eval_d(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        self.eval_with_derivative(z)
    }

    fn critical_values_in_box(&self, lo: Complex64, hi: Complex64) -> Vec<Complex64> {
        let base = self.critical_value(0);
        lattice_range(base.im, self.critical_value_step(), lo.im, hi.im)
            .map(|k| self.critical_value(k))
            .collect()
    }
}

/// Critical points of `z − cot(z)/2` in the upper half-plane sit at
/// `kπ + i·asinh(1/√2)`; those below are their conjugates.
pub fn fatou_inner_critical_height() -> f64 {
    (1.0 / 2f64.sqrt()).asinh()
}

fn fatou_inner_critical_value_height() -> f64 {
    let y = fatou_inner_critical_height();
    // cot(iy) = −i coth(y)
    y + 0.5 / y.tanh()
}

impl AnalyticMap for InnerFunctionSpec {
    fn eval_d(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        Ok((eval_inner(self, z)?, eval_inner_derivative(self, z)?))
    }

    fn critical_values_in_box(&self, lo: Complex64, hi: Complex64) -> Vec<Complex64> {
        match self.kind {
            // critical points 0 and ∞
            InnerKind::BlaschkeBaker => vec![Complex64::new(1.0 / 3.0, 0.0), Complex64::new(3.0, 0.0)],
            InnerKind::FatouInner => {
                let h = fatou_inner_critical_value_height();
                let ks = lattice_range(0.0, PI, lo.re, hi.re);
                [h, -h]
                    .into_iter()
                    .flat_map(|y| ks.clone().map(move |k| Complex64::new(k as f64 * PI, y)))
                    .collect()
            }
            InnerKind::MoebiusHyperbolic { .. } | InnerKind::MoebiusParabolic { .. } => Vec::new(),
        }
    }
}

// ---------------------------------------------------------------------------
// Singular data
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularData {
    pub map_id: String,
    /// Critical points with lattice index `|k| <= POSTSINGULAR_LATTICE`.
    pub critical_points: Vec<Complex64>,
    pub critical_values: Vec<Complex64>,
    /// None of the catalog maps has a finite asymptotic value.
    pub asymptotic_values: Vec<Complex64>,
    /// Forward orbits of the critical values, one vector per orbit, cut at
    /// `POSTSINGULAR_DEPTH` steps or modulus `POSTSINGULAR_CUTOFF`.
    pub orbits: Vec<Vec<Complex64>>,
    pub exclusion_radius: f64,
}

impl SingularData {
    pub fn new(map: &EntireMapSpec) -> Self {
        let ks = -POSTSINGULAR_LATTICE..=POSTSINGULAR_LATTICE;
        let critical_points: Vec<Complex64> = ks.clone().map(|k| map.critical_point(k)).collect();
        let critical_values: Vec<Complex64> = ks.map(|k| map.critical_value(k)).collect();
        let orbits = critical_values
            .iter()
            .map(|&v| {
                let mut orbit = vec![v];
                let mut z = v;
                for _ in 0..POSTSINGULAR_DEPTH {
                    match map.eval(z) {
                        Ok(w) if w.norm() <= POSTSINGULAR_CUTOFF => {
                            z = w;
                            orbit.push(z);
                        }
                        _ => break,
                    }
                }
                orbit
            })
            .collect();
        SingularData {
            map_id: map.id.clone(),
            critical_points,
            critical_values,
            asymptotic_values: Vec::new(),
            orbits,
            exclusion_radius: DEFAULT_EXCLUSION_RADIUS,
        }
    }

    pub fn samples(&self) -> impl Iterator<Item = &Complex64> {
        self.orbits.iter().flatten().chain(&self.asymptotic_values)
    }

    /// Distance from `z` to the sampled postsingular set.
    pub fn gap(&self, z: Complex64) -> f64 {
        self.samples().map(|s| (s - z).norm()).fold(f64::INFINITY, f64::min)
    }

    /// Whether the closed disk `D(center, radius)` keeps the exclusion
    /// distance from every postsingular sample.
    pub fn disk_is_clear(&self, center: Complex64, radius: f64) -> bool {
        self.gap(center) > radius + self.exclusion_radius
    }
}

// ---------------------------------------------------------------------------
// Newton and path lifting
// ---------------------------------------------------------------------------

/// Solves `f(w) = target` by Newton's method from `seed`.
pub fn newton_preimage<M: AnalyticMap + ?Sized>(
    map: &M,
    target: Complex64,
    seed: Complex64,
    tol: f64,
) -> Result<Complex64> {
    let mut w = seed;
    let mut residual = f64::INFINITY;
    for _ in 0..=NEWTON_MAX_STEPS {
        let (fw, dfw) = map.eval_d(w).map_err(|e| Error::BranchFailure {
            w,
            reason: e.to_string(),
        })?;
        if dfw.norm() < DERIVATIVE_FLOOR {
            return Err(Error::BranchFailure {
                w,
                reason: format!("derivative underflow |f'| = {:e} near a critical point", dfw.norm()),
            });
        }
        let r = fw - target;
        residual = r.norm();
        if residual < tol {
            return Ok(w);
        }
        w -= r / dfw;
        if !(w.re.is_finite() && w.im.is_finite()) {
            break;
        }
    }
    Err(Error::NonConvergence {
        steps: NEWTON_MAX_STEPS,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepControl {
    /// First trial step as a fraction of the segment.
    pub initial_step: f64,
    /// Halving below this fraction declares an obstruction.
    pub min_step: f64,
    /// Relative residual tolerance `|f(w) − p| < tol·(1 + |p|)`.
    pub tol: f64,
    /// Newton corrector iterations allowed per step.
    pub corrector_steps: usize,
    /// Critical values closer than this to the path block it.
    pub exclusion_radius: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            initial_step: 0.125,
            min_step: 1e-12,
            tol: 1e-13,
            corrector_steps: 8,
            exclusion_radius: DEFAULT_EXCLUSION_RADIUS,
        }
    }
}

/// Parameter of the point of segment `[a, b]` closest to `c`.
fn closest_parameter(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    let d = b - a;
    let n2 = d.norm_sqr();
    if n2 == 0.0 {
        return 0.0;
    }
    (((c - a) * d.conj()).re / n2).clamp(0.0, 1.0)
}

fn check_segment<M: AnalyticMap + ?Sized>(
    map: &M,
    seg: usize,
    a: Complex64,
    b: Complex64,
    radius: f64,
) -> Result<()> {
    let lo = Complex64::new(a.re.min(b.re) - radius, a.im.min(b.im) - radius);
    let hi = Complex64::new(a.re.max(b.re) + radius, a.im.max(b.im) + radius);
    for v in map.critical_values_in_box(lo, hi) {
        let t = closest_parameter(a, b, v);
        let p = a + (b - a) * t;
        if (p - v).norm() <= radius {
            return Err(Error::Obstruction {
                segment: seg,
                t,
                reason: format!("path passes within {:e} of critical value {v}", (p - v).norm()),
            });
        }
    }
    Ok(())
}

/// One corrector run: Newton from `pred` for `target`, at most `steps`
/// iterations. `None` when it does not settle.
fn correct<M: AnalyticMap + ?Sized>(
    map: &M,
    target: Complex64,
    pred: Complex64,
    ctrl: &StepControl,
) -> Option<Complex64> {
    let tol = ctrl.tol * (1.0 + target.norm());
    let mut w = pred;
    for _ in 0..ctrl.corrector_steps {
        let (fw, dfw) = map.eval_d(w).ok()?;
        if dfw.norm() < DERIVATIVE_FLOOR {
            return None;
        }
        let r = fw - target;
        if r.norm() < tol {
            return Some(w);
        }
        w -= r / dfw;
    }
    let (fw, _) = map.eval_d(w).ok()?;
    ((fw - target).norm() < tol).then_some(w)
}

/// Analytic continuation of the inverse branch through `w_start` along the
/// polyline `path`, returning the lifted vertices.
pub fn lift_path<M: AnalyticMap + ?Sized>(
    map: &M,
    path: &[Complex64],
    w_start: Complex64,
    ctrl: &StepControl,
) -> Result<Vec<Complex64>> {
    let Some(&p0) = path.first() else {
        return Ok(Vec::new());
    };
    let (f0, _) = map.eval_d(w_start)?;
    let start_tol = 1e-9 * (1.0 + p0.norm());
    if (f0 - p0).norm() > start_tol {
        return Err(Error::Precondition(format!(
            "f(w_start) = {f0} does not match the path start {p0}"
        )));
    }
    for (seg, pair) in path.windows(2).enumerate() {
        check_segment(map, seg, pair[0], pair[1], ctrl.exclusion_radius)?;
    }
    let mut out = Vec::with_capacity(path.len());
    let mut w = correct(map, p0, w_start, ctrl).unwrap_or(w_start);
    out.push(w);
    for (seg, pair) in path.windows(2).enumerate() {
        let (a, b) = (pair[0], pair[1]);
        let mut t = 0.0;
        let mut h = ctrl.initial_step;
        while t < 1.0 {
            let h_eff = h.min(1.0 - t);
            let p_now = a + (b - a) * t;
            let p_next = if t + h_eff >= 1.0 { b } else { a + (b - a) * (t + h_eff) };
            let (_, dfw) = map.eval_d(w)?;
            let step = (p_next - p_now) / dfw;
            let pred = w + step;
            match correct(map, p_next, pred, ctrl) {
                // reject corrections that wander off the predicted branch
                Some(w_new) if (w_new - pred).norm() <= 0.5 * step.norm() + 1e-14 => {
                    w = w_new;
                    t += h_eff;
                    h = (2.0 * h).min(1.0);
                }
                _ => {
                    h *= 0.5;
                    if h < ctrl.min_step {
                        return Err(Error::Obstruction {
                            segment: seg,
                            t,
                            reason: "step halving reached the floor".into(),
                        });
                    }
                }
            }
        }
        out.push(w);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Branch chains
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Complex64, radius: f64) -> Self {
        Disk { center, radius }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }

    /// `n` equally spaced points on the boundary circle.
    pub fn boundary_samples(&self, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|j| self.center + Complex64::from_polar(self.radius, TAU * j as f64 / n as f64))
            .collect()
    }
}

/// How each step of a chain picks its branch of `f⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChoiceRule {
    /// The preimage nearest to the previous endpoint.
    NearestPrevious,
    /// The preimage nearest to a fixed anchor.
    NearestTo(Complex64),
    /// Endpoints supplied by the caller, e.g. a backward orbit.
    Prescribed,
}

/// Preimages of `target` found by Newton from a `SCAN_GRID`² grid over the
/// square of half-width `half_width` around `anchor` (plus the anchor),
/// sorted by distance to the anchor.
pub fn preimage_scan<M: AnalyticMap + ?Sized>(
    map: &M,
    target: Complex64,
    anchor: Complex64,
    half_width: f64,
) -> Vec<Complex64> {
    let n = SCAN_GRID;
    let tol = 1e-13 * (1.0 + target.norm());
    let seeds: Vec<Complex64> = std::iter::once(anchor)
        .chain((0..n * n).map(|idx| {
            let (i, j) = (idx % n, idx / n);
            let u = -1.0 + (2.0 * i as f64 + 1.0) / n as f64;
            let v = -1.0 + (2.0 * j as f64 + 1.0) / n as f64;
            anchor + Complex64::new(u, v) * half_width
        }))
        .collect();
    let found: Vec<Complex64> = seeds
        .par_iter()
        .filter_map(|&s| newton_preimage(map, target, s, tol).ok())
        .collect();
    let mut roots: Vec<Complex64> = Vec::new();
    for r in found {
        if roots.iter().all(|q| (q - r).norm() > 1e-9 * (1.0 + r.norm())) {
            roots.push(r);
        }
    }
    roots.sort_by(|a, b| (a - anchor).norm().total_cmp(&(b - anchor).norm()));
    roots
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchChain {
    pub map_id: String,
    pub base_disk: Disk,
    pub rule: ChoiceRule,
    /// The seed each step was steered towards.
    pub choices: Vec<Complex64>,
    /// `F_k(center)` for `k = 0..=n`.
    pub endpoints: Vec<Complex64>,
    /// `|F_k'(center)|`, the radius scale of the k-th pullback.
    pub derivatives: Vec<f64>,
    /// Quasi-hyperbolic contraction of each step.
    pub step_contraction: Vec<f64>,
    /// Running product of `step_contraction`, starting at 1.
    pub cumulative: Vec<f64>,
    /// Distance of each endpoint to the postsingular samples.
    pub gaps: Vec<f64>,
    pub valid: bool,
    pub reason: Option<String>,
}

impl BranchChain {
    pub fn len(&self) -> usize {
        self.endpoints.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn total_contraction(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// `F_n(z)` for `z` in the base disk, by lifting the segment from the
    /// center through every step.
    pub fn apply(&self, map: &EntireMapSpec, z: Complex64) -> Result<Complex64> {
        let ctrl = StepControl::default();
        let mut tail = z;
        for k in 1..self.endpoints.len() {
            let lifted = lift_path(map, &[self.endpoints[k - 1], tail], self.endpoints[k], &ctrl)?;
            tail = lifted[1];
        }
        Ok(tail)
    }

    pub const CSV_HEADER: &'static str = "step,re,im,contraction,cumulative,gap";

    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", Self::CSV_HEADER);
        for (k, z) in self.endpoints.iter().enumerate() {
            let step = if k == 0 { 1.0 } else { self.step_contraction[k - 1] };
            let _ = writeln!(
                out,
                "{k},{},{},{step:e},{:e},{:e}",
                z.re, z.im, self.cumulative[k], self.gaps[k]
            );
        }
        out
    }
}

/// Pulls `base_disk` back `n` times along branches picked by `rule`.
/// Chains that touch the exclusion zone come back with `valid = false`.
pub fn chain_contraction(
    map: &EntireMapSpec,
    singular: &SingularData,
    base_disk: Disk,
    n: usize,
    rule: ChoiceRule,
) -> Result<BranchChain> {
    let half_width = (2.0 * base_disk.radius).max(2.0);
    let mut endpoints = vec![base_disk.center];
    let mut choices = Vec::with_capacity(n);
    for _ in 0..n {
        let prev = *endpoints.last().unwrap();
        let anchor = match rule {
            ChoiceRule::NearestPrevious => prev,
            ChoiceRule::NearestTo(a) => a,
            ChoiceRule::Prescribed => {
                return Err(Error::Precondition(
                    "prescribed chains are built from their endpoints".into(),
                ))
            }
        };
        let e = *preimage_scan(map, prev, anchor, half_width)
            .first()
            .ok_or_else(|| Error::BranchFailure {
                w: anchor,
                reason: format!("no preimage of {prev} near {anchor}"),
            })?;
        choices.push(anchor);
        endpoints.push(e);
    }
    let mut chain = chain_contraction_from_endpoints(map, singular, base_disk, endpoints)?;
    chain.rule = rule;
    chain.choices = choices;
    Ok(chain)
}

/// Scores the chain whose k-th step takes `endpoints[k-1]` to its preimage
/// `endpoints[k]`; `endpoints[0]` must be the center of `base_disk`.
pub fn chain_contraction_from_endpoints(
    map: &EntireMapSpec,
    singular: &SingularData,
    base_disk: Disk,
    endpoints: Vec<Complex64>,
) -> Result<BranchChain> {
    let c = base_disk.center;
    if endpoints.first() != Some(&c) {
        return Err(Error::Precondition("chain must start at the disk center".into()));
    }
    let n = endpoints.len() - 1;
    let mut chain = BranchChain {
        map_id: map.id.clone(),
        base_disk,
        rule: ChoiceRule::Prescribed,
        choices: endpoints[1..].to_vec(),
        endpoints: vec![c],
        derivatives: vec![1.0],
        step_contraction: Vec::with_capacity(n),
        cumulative: vec![1.0],
        gaps: vec![singular.gap(c)],
        valid: true,
        reason: None,
    };
    if !singular.disk_is_clear(c, base_disk.radius) {
        chain.valid = false;
        chain.reason = Some("base disk meets the postsingular exclusion zone".into());
    }
    for k in 1..=n {
        let e = endpoints[k];
        let (fe, dfe) = map.eval_with_derivative(e)?;
        if (fe - endpoints[k - 1]).norm() > 1e-9 * (1.0 + fe.norm()) {
            return Err(Error::Precondition(format!("endpoint {k} is not a preimage of endpoint {}", k - 1)));
        }
        let df = dfe.norm();
        let gap = singular.gap(e);
        let step = chain.gaps[k - 1] / (df * gap);
        let deriv = chain.derivatives[k - 1] / df;
        chain.endpoints.push(e);
        chain.derivatives.push(deriv);
        chain.step_contraction.push(step);
        chain.cumulative.push(chain.cumulative[k - 1] * step);
        chain.gaps.push(gap);
        if chain.valid && !singular.disk_is_clear(e, base_disk.radius * deriv) {
            chain.valid = false;
            chain.reason = Some(format!("pullback {k} meets the postsingular exclusion zone"));
        }
    }
    Ok(chain)
}

// ---------------------------------------------------------------------------
// Stolz angles
// ---------------------------------------------------------------------------

/// `Δ_{ρ,α}(x) = { w ∈ H : Im w < ρ, |Re w − x| / Im w < α }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StolzRegion {
    pub vertex: f64,
    pub rho: f64,
    pub alpha: f64,
}

impl StolzRegion {
    pub fn contains(&self, w: Complex64) -> bool {
        self.margin(w) > 0.0
    }

    /// Smallest of the angular margin `α − |Re w − x|/Im w` and the
    /// relative height margin `1 − Im w/ρ`; positive inside.
    pub fn margin(&self, w: Complex64) -> f64 {
        if !(w.im > 0.0) {
            return -1.0;
        }
        let angular = self.alpha - (w.re - self.vertex).abs() / w.im;
        let height = 1.0 - w.im / self.rho;
        angular.min(height)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StolzReport {
    pub pass: bool,
    /// Set when a branch could not be followed; `pass` is then false.
    pub inconclusive: Option<String>,
    pub worst_margin: f64,
    /// `H_n(x)`, the vertex of the target angle.
    pub vertex: f64,
    pub samples: usize,
}

/// Orbit of the upper critical values of `fatou_inner` for the
/// precondition check.
fn fatou_inner_postcritical(depth: usize) -> Vec<Complex64> {
    let inner = InnerFunctionSpec::fatou_inner();
    let h = fatou_inner_critical_value_height();
    let mut out = Vec::new();
    for k in -8..=8 {
        let mut z = Complex64::new(k as f64 * PI, h);
        out.push(z);
        for _ in 0..depth {
            match inner.eval(z) {
                Ok(w) => z = w,
                Err(_) => break,
            }
            out.push(z);
        }
    }
    out
}

/// Pulls the radial segment `x + i(0, ρ)` back `n` times along the branch
/// that follows `x` and checks it lands in `Δ_{ρ,α}(H_n(x))`.
pub fn stolz_containment(
    inner: &InnerFunctionSpec,
    x: f64,
    rho: f64,
    alpha: f64,
    n: usize,
    samples: usize,
) -> Result<StolzReport> {
    if inner.domain_model != crate::catalog::DomainModel::UpperHalfPlane {
        return Err(Error::Precondition(format!(
            "`{}` has no half-plane model",
            inner.id
        )));
    }
    if !(rho > 0.0 && alpha > 0.0 && samples > 0) {
        return Err(Error::Precondition("need ρ > 0, α > 0 and samples > 0".into()));
    }
    if let InnerKind::FatouInner = inner.kind {
        let pole = crate::catalog::cot_pole_distance(Complex64::new(x, 0.0));
        if pole <= rho {
            return Err(Error::Precondition(format!(
                "x = {x} is within {pole:e} of a pole of cot"
            )));
        }
        let xc = Complex64::new(x, 0.0);
        let sing = fatou_inner_postcritical(20)
            .iter()
            .map(|v| (v - xc).norm())
            .fold(f64::INFINITY, f64::min);
        if sing <= rho {
            return Err(Error::Precondition(format!(
                "x = {x} is within {sing:e} of a postcritical point"
            )));
        }
    }
    let mut path: Vec<Complex64> = vec![Complex64::new(x, 0.0)];
    path.extend((1..=samples).map(|j| Complex64::new(x, rho * j as f64 / (samples + 1) as f64)));
    let ctrl = StepControl::default();
    let mut vertex = Complex64::new(x, 0.0);
    for _ in 0..n {
        let start = match newton_preimage(inner, path[0], vertex, 1e-13 * (1.0 + vertex.norm())) {
            Ok(w) => w,
            Err(e) => return Ok(inconclusive(e, x, samples)),
        };
        path = match lift_path(inner, &path, start, &ctrl) {
            Ok(p) => p,
            Err(e) => return Ok(inconclusive(e, x, samples)),
        };
        vertex = path[0];
    }
    let region = StolzRegion {
        vertex: vertex.re,
        rho,
        alpha,
    };
    let worst_margin = path[1..]
        .iter()
        .map(|&w| region.margin(w))
        .fold(f64::INFINITY, f64::min);
    Ok(StolzReport {
        pass: worst_margin > 0.0,
        inconclusive: None,
        worst_margin,
        vertex: vertex.re,
        samples,
    })
}

fn inconclusive(e: Error, x: f64, samples: usize) -> StolzReport {
    StolzReport {
        pass: false,
        inconclusive: Some(e.to_string()),
        worst_margin: f64::NEG_INFINITY,
        vertex: x,
        samples,
    }
}

/// Halves ρ from `rho0` until the containment test passes, at most
/// `max_halvings` times.
pub fn stolz_rho_search(
    inner: &InnerFunctionSpec,
    x: f64,
    rho0: f64,
    alpha: f64,
    n: usize,
    samples: usize,
    max_halvings: usize,
) -> Result<Option<(f64, StolzReport)>> {
    let mut rho = rho0;
    for _ in 0..=max_halvings {
        match stolz_containment(inner, x, rho, alpha, n, samples) {
            Ok(r) if r.pass => return Ok(Some((rho, r))),
            Ok(_) | Err(Error::Precondition(_)) => {}
            Err(e) => return Err(e),
        }
        rho *= 0.5;
    }
    Ok(None)
}
