//! Boundary dynamics of inner functions on the unit circle or the real line.
//!
//! Disk points are stored in turns, `ξ = exp(2πi t)` with `t ∈ [0, 1)`.
//! Half-plane points are extended reals; any infinite coordinate is ∞.
//! The two models are identified by `M(z) = i(1+z)/(1−z)`, which on the
//! boundary reads `x = −cot(πt)`, `t = 1/2 + atan(x)/π`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{cot_pole_distance, DomainModel, InnerFunctionSpec, InnerKind, POLE_GUARD};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub model: DomainModel,
    pub coord: f64,
}

fn wrap_turns(t: f64) -> f64 {
    let w = t.rem_euclid(1.0);
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

impl BoundaryPoint {
    pub fn disk(turns: f64) -> Self {
        BoundaryPoint {
            model: DomainModel::UnitDisk,
            coord: wrap_turns(turns),
        }
    }

    pub fn half_plane(x: f64) -> Self {
        BoundaryPoint {
            model: DomainModel::UpperHalfPlane,
            coord: if x.is_infinite() { f64::INFINITY } else { x },
        }
    }

    pub fn infinity() -> Self {
        Self::half_plane(f64::INFINITY)
    }

    /// True for the point ∞ of the half-plane model.
    pub fn is_infinity(&self) -> bool {
        self.model == DomainModel::UpperHalfPlane && self.coord.is_infinite()
    }

    pub fn to_disk(&self) -> BoundaryPoint {
        match self.model {
            DomainModel::UnitDisk => *self,
            DomainModel::UpperHalfPlane => {
                if self.coord.is_infinite() {
                    BoundaryPoint::disk(0.0)
                } else {
                    BoundaryPoint::disk(0.5 + self.coord.atan() / PI)
                }
            }
        }
    }

    pub fn to_half_plane(&self) -> BoundaryPoint {
        match self.model {
            DomainModel::UpperHalfPlane => *self,
            DomainModel::UnitDisk => {
                if self.coord == 0.0 {
                    BoundaryPoint::infinity()
                } else {
                    BoundaryPoint::half_plane(-1.0 / (PI * self.coord).tan())
                }
            }
        }
    }

    pub fn to_model(&self, model: DomainModel) -> BoundaryPoint {
        match model {
            DomainModel::UnitDisk => self.to_disk(),
            DomainModel::UpperHalfPlane => self.to_half_plane(),
        }
    }

    /// The point as a complex number in its own model; `None` for ∞.
    pub fn to_complex(&self) -> Option<Complex64> {
        match self.model {
            DomainModel::UnitDisk => Some(Complex64::from_polar(1.0, TAU * self.coord)),
            DomainModel::UpperHalfPlane => {
                (!self.coord.is_infinite()).then(|| Complex64::new(self.coord, 0.0))
            }
        }
    }

    /// Chordal distance on the unit circle between the disk images.
    pub fn circle_distance(&self, other: &BoundaryPoint) -> f64 {
        let a = self.to_disk().coord;
        let b = other.to_disk().coord;
        2.0 * (PI * (a - b)).sin().abs()
    }
}

// ---------------------------------------------------------------------------
// Native boundary iteration
// ---------------------------------------------------------------------------

/// Boundary point in the inner function's own model.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Native {
    Disk(Complex64),
    Line(f64),
}

fn native_model(inner: &InnerFunctionSpec) -> DomainModel {
    inner.domain_model
}

fn to_native(inner: &InnerFunctionSpec, p: &BoundaryPoint) -> Native {
    match native_model(inner) {
        DomainModel::UnitDisk => Native::Disk(Complex64::from_polar(1.0, TAU * p.to_disk().coord)),
        DomainModel::UpperHalfPlane => Native::Line(p.to_half_plane().coord),
    }
}

fn from_native(n: Native) -> BoundaryPoint {
    match n {
        Native::Disk(xi) => BoundaryPoint::disk(xi.arg() / TAU),
        Native::Line(x) => BoundaryPoint::half_plane(x),
    }
}

/// One step of the boundary map. `None` signals a pole or singularity.
fn step(inner: &InnerFunctionSpec, p: Native) -> Option<Native> {
    match (inner.kind, p) {
        (InnerKind::BlaschkeBaker, Native::Disk(xi)) => {
            let z2 = xi * xi;
            let w = (3.0 * z2 + 1.0) / (3.0 + z2);
            Some(Native::Disk(w / w.norm()))
        }
        (InnerKind::FatouInner, Native::Line(x)) => {
            if !x.is_finite() || cot_pole_distance(Complex64::new(x, 0.0)) < POLE_GUARD {
                return None;
            }
            Some(Native::Line(x - x.cos() / x.sin() / 2.0))
        }
        (InnerKind::MoebiusHyperbolic { lambda }, Native::Line(x)) => Some(Native::Line(lambda * x)),
        (InnerKind::MoebiusParabolic { shift }, Native::Line(x)) => Some(Native::Line(x + shift)),
        _ => unreachable!("native representation always matches the model"),
    }
}

/// Whether a native point lies within `eps` of the Denjoy-Wolff point:
/// Euclidean distance on the circle, or the spherical rule `|x| > 1/eps`
/// when the point is ∞.
fn near_dw(inner: &InnerFunctionSpec, p: Native, eps: f64) -> bool {
    match p {
        Native::Disk(xi) => {
            let dw = Complex64::from_polar(1.0, TAU * inner.dw_point.to_disk().coord);
            (xi - dw).norm() < eps
        }
        Native::Line(x) => {
            let dw = inner.dw_point.to_half_plane();
            if dw.is_infinity() {
                x.abs() > 1.0 / eps
            } else {
                (x - dw.coord).abs() < eps
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircleOrbit {
    /// `p0` followed by its iterates, all in `p0`'s model.
    pub points: Vec<BoundaryPoint>,
    pub pole_hit: bool,
}

pub fn iterate_circle(inner: &InnerFunctionSpec, p0: BoundaryPoint, n: usize) -> CircleOrbit {
    let mut points = Vec::with_capacity(n + 1);
    points.push(p0);
    let mut z = to_native(inner, &p0);
    for _ in 0..n {
        match step(inner, z) {
            Some(w) => {
                z = w;
                points.push(from_native(z).to_model(p0.model));
            }
            None => {
                return CircleOrbit {
                    points,
                    pole_hit: true,
                }
            }
        }
    }
    CircleOrbit {
        points,
        pole_hit: false,
    }
}

// ---------------------------------------------------------------------------
// Monte Carlo statistics
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    pub iterations: usize,
    /// Samples whose orbit hit a pole; counted as failures in `value`.
    pub flagged: usize,
}

impl MeasureEstimate {
    pub fn from_counts(hits: usize, samples: usize, iterations: usize, flagged: usize) -> Self {
        let value = hits as f64 / samples as f64;
        MeasureEstimate {
            value,
            stderr: (value * (1.0 - value) / samples as f64).sqrt(),
            samples,
            iterations,
            flagged,
        }
    }
}

#[derive(Clone, Copy, Default)]
struct Tally {
    hits: usize,
    flagged: usize,
}

fn tally(outcomes: impl ParallelIterator<Item = Option<bool>>) -> Tally {
    outcomes
        .map(|o| match o {
            Some(true) => Tally { hits: 1, flagged: 0 },
            Some(false) => Tally::default(),
            None => Tally { hits: 0, flagged: 1 },
        })
        .reduce(Tally::default, |a, b| Tally {
            hits: a.hits + b.hits,
            flagged: a.flagged + b.flagged,
        })
}

/// Fraction of uniformly random boundary starts whose `n`-th iterate lies
/// within `arc_eps` of the Denjoy-Wolff point.
pub fn dw_convergence_fraction(
    inner: &InnerFunctionSpec,
    samples: usize,
    n: usize,
    arc_eps: f64,
    seed: u64,
) -> Result<MeasureEstimate> {
    if samples == 0 {
        return Err(Error::Precondition("samples must be at least 1".into()));
    }
    if !(arc_eps > 0.0) {
        return Err(Error::Precondition("arc_eps must be positive".into()));
    }
    let t = tally((0..samples).into_par_iter().map(|i| {
        let p = BoundaryPoint::disk(rng::uniform(seed, i as u64));
        let mut z = to_native(inner, &p);
        for _ in 0..n {
            z = step(inner, z)?;
        }
        Some(near_dw(inner, z, arc_eps))
    }));
    Ok(MeasureEstimate::from_counts(t.hits, samples, n, t.flagged))
}

/// Half-open boundary interval `[start, end)` in one model. A disk arc with
/// `end < start` wraps through angle 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryArc {
    pub model: DomainModel,
    pub start: f64,
    pub end: f64,
}

impl BoundaryArc {
    pub fn disk(start: f64, end: f64) -> Self {
        BoundaryArc {
            model: DomainModel::UnitDisk,
            start,
            end,
        }
    }

    pub fn half_plane(start: f64, end: f64) -> Self {
        BoundaryArc {
            model: DomainModel::UpperHalfPlane,
            start,
            end,
        }
    }

    pub fn length(&self) -> f64 {
        match self.model {
            DomainModel::UnitDisk => {
                if self.end >= self.start {
                    self.end - self.start
                } else {
                    (self.end - self.start).rem_euclid(1.0)
                }
            }
            DomainModel::UpperHalfPlane => self.end - self.start,
        }
    }

    pub fn contains(&self, p: &BoundaryPoint) -> bool {
        let c = p.to_model(self.model).coord;
        match self.model {
            DomainModel::UnitDisk if self.end < self.start => c >= self.start || c < self.end,
            _ => c >= self.start && c < self.end,
        }
    }

    fn sample(&self, u: f64) -> BoundaryPoint {
        match self.model {
            DomainModel::UnitDisk => BoundaryPoint::disk(self.start + u * self.length()),
            DomainModel::UpperHalfPlane => {
                BoundaryPoint::half_plane(self.start + u * (self.end - self.start))
            }
        }
    }
}

/// Fraction of random starts in `arc` whose orbit returns to `arc` at some
/// step `1..=n`.
pub fn recurrence_fraction(
    inner: &InnerFunctionSpec,
    arc: &BoundaryArc,
    samples: usize,
    n: usize,
    seed: u64,
) -> Result<MeasureEstimate> {
    if samples == 0 {
        return Err(Error::Precondition("samples must be at least 1".into()));
    }
    let len = arc.length();
    let finite = arc.start.is_finite() && arc.end.is_finite();
    let too_long = arc.model == DomainModel::UnitDisk && len > 1.0;
    if !(finite && len > 0.0) || too_long {
        return Err(Error::Precondition(format!(
            "arc [{}, {}) must have positive length",
            arc.start, arc.end
        )));
    }
    if arc.contains(&inner.dw_point) {
        return Err(Error::Precondition(
            "arc must exclude the Denjoy-Wolff point".into(),
        ));
    }
    let t = tally((0..samples).into_par_iter().map(|i| {
        let mut z = to_native(inner, &arc.sample(rng::uniform(seed, i as u64)));
        for _ in 0..n {
            z = step(inner, z)?;
            if arc.contains(&from_native(z)) {
                return Some(true);
            }
        }
        Some(false)
    }));
    Ok(MeasureEstimate::from_counts(t.hits, samples, n, t.flagged))
}

fn require_hyperbolic(inner: &InnerFunctionSpec) -> Result<f64> {
    match inner.kind {
        InnerKind::MoebiusHyperbolic { lambda } if lambda > 1.0 => Ok(lambda),
        InnerKind::MoebiusHyperbolic { lambda } => Err(Error::Precondition(format!(
            "T(z) = λz is hyperbolic only for λ > 1, got λ = {lambda}"
        ))),
        _ => Err(Error::Precondition(format!(
            "`{}` is not the dilation model",
            inner.id
        ))),
    }
}

/// Normalized Lebesgue measures of the pullbacks to the circle of the two
/// invariant sets `{x > 0}` and `{x < 0}` of `T(z) = λz`.
pub fn invariant_halves_measure(inner: &InnerFunctionSpec) -> Result<(f64, f64)> {
    require_hyperbolic(inner)?;
    // t(x) = 1/2 + atan(x)/π is increasing from t(−∞) = 0 to t(+∞) = 1.
    let t = |x: f64| 0.5 + x.atan() / PI;
    let positive = t(f64::INFINITY) - t(0.0);
    let negative = t(0.0) - t(f64::NEG_INFINITY);
    Ok((positive, negative))
}

/// Monte Carlo version of [`invariant_halves_measure`]: uniform turns are
/// pushed to the line and classified by sign.
pub fn invariant_halves_monte_carlo(
    inner: &InnerFunctionSpec,
    samples: usize,
    seed: u64,
) -> Result<(MeasureEstimate, MeasureEstimate)> {
    require_hyperbolic(inner)?;
    if samples == 0 {
        return Err(Error::Precondition("samples must be at least 1".into()));
    }
    let sign = |i: usize| BoundaryPoint::disk(rng::uniform(seed, i as u64)).to_half_plane().coord;
    let pos = tally((0..samples).into_par_iter().map(|i| Some(sign(i) > 0.0)));
    let neg = tally((0..samples).into_par_iter().map(|i| Some(sign(i) < 0.0)));
    Ok((
        MeasureEstimate::from_counts(pos.hits, samples, 0, 0),
        MeasureEstimate::from_counts(neg.hits, samples, 0, 0),
    ))
}

/// The Möbius models transported to the disk: `M⁻¹ ∘ T ∘ M`.
pub fn disk_conjugate(inner: &InnerFunctionSpec, xi: Complex64) -> Result<Complex64> {
    match inner.kind {
        InnerKind::MoebiusHyperbolic { lambda } => {
            Ok(((lambda + 1.0) * xi + (lambda - 1.0)) / ((lambda - 1.0) * xi + (lambda + 1.0)))
        }
        InnerKind::MoebiusParabolic { shift } => {
            let two_i = Complex64::new(0.0, 2.0);
            Ok((shift + (two_i - shift) * xi) / ((two_i + shift) - shift * xi))
        }
        _ => Err(Error::Precondition(format!(
            "`{}` has no Möbius disk conjugate",
            inner.id
        ))),
    }
}

/// Cayley map `M(z) = i(1+z)/(1−z)` from the disk to the upper half-plane.
pub fn cayley(z: Complex64) -> Complex64 {
    Complex64::new(0.0, 1.0) * (1.0 + z) / (1.0 - z)
}

/// Inverse Cayley map `w ↦ (w − i)/(w + i)`.
pub fn cayley_inverse(w: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    (w - i) / (w + i)
}

// ---------------------------------------------------------------------------
// Preimages
// ---------------------------------------------------------------------------

/// Number of bracketing cells per level on the circle.
pub const BRACKET_CELLS: usize = 4096;
/// Bisection stops once the bracket is this short.
pub const BISECTION_TOL: f64 = 1e-12;
/// Pole intervals `(kπ, (k+1)π)`, `|k| <= FATOU_INNER_BRANCHES`, searched on
/// the line for `fatou_inner`.
pub const FATOU_INNER_BRANCHES: i64 = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct PreimageTree {
    /// Level-`depth` preimages in the target's model, sorted by coordinate.
    pub points: Vec<BoundaryPoint>,
    /// True when the point budget cut the tree short.
    pub exhausted: bool,
}

fn bisect(mut a: f64, mut b: f64, mut fa: f64, f: impl Fn(f64) -> f64) -> f64 {
    while b - a > BISECTION_TOL {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Solutions in turns of `g(e^{2πit}) = e^{2πi·target}`.
fn blaschke_preimages(target: f64) -> Vec<f64> {
    let g_turns = |t: f64| {
        let xi = Complex64::from_polar(1.0, TAU * t);
        let z2 = xi * xi;
        ((3.0 * z2 + 1.0) / (3.0 + z2)).arg() / TAU
    };
    let h = |t: f64| {
        let d = g_turns(t) - target;
        d - d.round()
    };
    let cells = BRACKET_CELLS;
    let mut roots = Vec::new();
    let mut a = 0.0;
    let mut ha = h(a);
    for j in 1..=cells {
        let b = j as f64 / cells as f64;
        let hb = h(b);
        if ha == 0.0 {
            roots.push(a);
        } else if ha * hb < 0.0 && ha.abs() < 0.25 && hb.abs() < 0.25 {
            roots.push(bisect(a, b, ha, h));
        }
        a = b;
        ha = hb;
    }
    // a root sitting on t = 1 can be found again from the wrapped side
    let mut roots: Vec<f64> = roots.into_iter().map(wrap_turns).collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|b, a| *b - *a < 1e-10);
    if roots.len() > 1 && roots[0] + 1.0 - roots[roots.len() - 1] < 1e-10 {
        roots.pop();
    }
    roots
}

/// Solutions of `x − cot(x)/2 = target`, one per pole interval.
fn fatou_inner_preimages(target: f64) -> Vec<f64> {
    let g = |x: f64| x - x.cos() / x.sin() / 2.0 - target;
    (-FATOU_INNER_BRANCHES..=FATOU_INNER_BRANCHES)
        .map(|k| {
            // g increases from −∞ to +∞ on (kπ, (k+1)π); shrink inward until
            // the ends bracket the root.
            let (mut a, mut b) = (k as f64 * PI, (k + 1) as f64 * PI);
            let mut d = 1e-3;
            while g(a + d) > 0.0 {
                d *= 1e-3;
            }
            a += d;
            let mut d = 1e-3;
            while g(b - d) < 0.0 {
                d *= 1e-3;
            }
            b -= d;
            bisect(a, b, g(a), g)
        })
        .collect()
}

pub(crate) fn level_preimages(inner: &InnerFunctionSpec, p: &BoundaryPoint) -> Vec<BoundaryPoint> {
    match inner.kind {
        InnerKind::BlaschkeBaker => blaschke_preimages(p.to_disk().coord)
            .into_iter()
            .map(BoundaryPoint::disk)
            .collect(),
        InnerKind::FatouInner => fatou_inner_preimages(p.to_half_plane().coord)
            .into_iter()
            .map(BoundaryPoint::half_plane)
            .collect(),
        InnerKind::MoebiusHyperbolic { lambda } => {
            vec![BoundaryPoint::half_plane(p.to_half_plane().coord / lambda)]
        }
        InnerKind::MoebiusParabolic { shift } => {
            vec![BoundaryPoint::half_plane(p.to_half_plane().coord - shift)]
        }
    }
}

/// All boundary solutions of `g^depth(ξ) = target`, at most `budget` of them.
pub fn preimage_tree(
    inner: &InnerFunctionSpec,
    target: BoundaryPoint,
    depth: usize,
    budget: usize,
) -> Result<PreimageTree> {
    let on_line = target.to_half_plane();
    let singular = inner.singularities.iter().any(|s| s.circle_distance(&target) < POLE_GUARD);
    let line_model = inner.domain_model == DomainModel::UpperHalfPlane;
    if singular || (line_model && on_line.is_infinity()) {
        return Err(Error::Precondition(
            "target must not be ∞ or a singularity of the inner function".into(),
        ));
    }
    let mut level = vec![target];
    let mut exhausted = false;
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
    let mut points: Vec<BoundaryPoint> = level.iter().map(|p| p.to_model(target.model)).collect();
    points.sort_by(|a, b| a.coord.total_cmp(&b.coord));
    Ok(PreimageTree { points, exhausted })
}

/// Largest gap, in turns, between consecutive points on the circle.
pub fn max_circle_gap(points: &[BoundaryPoint]) -> f64 {
    let mut t: Vec<f64> = points.iter().map(|p| p.to_disk().coord).collect();
    if t.is_empty() {
        return 1.0;
    }
    t.sort_by(f64::total_cmp);
    let wrap = t[0] + 1.0 - t[t.len() - 1];
    t.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn cayley_round_trip() {
        for &t in &[0.1, 0.25, 0.5, 0.75, 0.9] {
            let p = BoundaryPoint::disk(t);
            assert!(close(p.to_half_plane().to_disk().coord, t, 1e-14));
            let xi = p.to_complex().unwrap();
            let w = cayley(xi);
            assert!(w.im.abs() < 1e-12 && close(w.re, p.to_half_plane().coord, 1e-12));
            assert!((cayley_inverse(w) - xi).norm() < 1e-12);
        }
        assert!(BoundaryPoint::disk(0.0).to_half_plane().is_infinity());
        assert_eq!(BoundaryPoint::infinity().to_disk().coord, 0.0);
        assert_eq!(BoundaryPoint::disk(1.0).coord, 0.0);
        assert_eq!(BoundaryPoint::disk(-1e-18).coord, 0.0);
        assert_eq!(BoundaryPoint::half_plane(f64::NEG_INFINITY), BoundaryPoint::infinity());
    }

    #[test]
    fn blaschke_boundary_orbits() {
        let b = InnerFunctionSpec::blaschke_baker();
        let o = iterate_circle(&b, BoundaryPoint::disk(0.0), 5);
        assert!(o.points.iter().all(|p| p.coord == 0.0));
        let o = iterate_circle(&b, BoundaryPoint::disk(0.5), 5);
        assert_eq!(o.points[0].coord, 0.5);
        assert!(o.points[1..].iter().all(|p| p.circle_distance(&BoundaryPoint::disk(0.0)) < 1e-15));
    }

    #[test]
    fn dilation_orbit_on_the_line() {
        let m = InnerFunctionSpec::moebius_hyperbolic(2.0);
        let o = iterate_circle(&m, BoundaryPoint::half_plane(3.0), 4);
        let xs: Vec<f64> = o.points.iter().map(|p| p.coord).collect();
        assert_eq!(xs, vec![3.0, 6.0, 12.0, 24.0, 48.0]);
        assert!(!o.pole_hit);
    }

    #[test]
    fn fatou_inner_pole_truncates() {
        let f = InnerFunctionSpec::fatou_inner();
        let o = iterate_circle(&f, BoundaryPoint::half_plane(PI), 10);
        assert!(o.pole_hit);
        assert_eq!(o.points.len(), 1);
        let o = iterate_circle(&f, BoundaryPoint::half_plane(PI / 2.0), 3);
        assert!(!o.pole_hit && o.points.iter().all(|p| close(p.coord, PI / 2.0, 1e-15)));
    }

    #[test]
    fn dw_fraction_examples() {
        let est = dw_convergence_fraction(&InnerFunctionSpec::moebius_hyperbolic(2.0), 10_000, 60, 0.01, 1)
            .unwrap();
        assert!(est.value > 0.99);
        assert!(close(est.stderr, (est.value * (1.0 - est.value) / 1e4).sqrt(), 1e-15));
        let est = dw_convergence_fraction(&InnerFunctionSpec::moebius_parabolic(1.0), 2_000, 10_000, 0.01, 1)
            .unwrap();
        assert!(est.value > 0.99);
        assert!(dw_convergence_fraction(&InnerFunctionSpec::blaschke_baker(), 0, 1, 0.1, 0).is_err());
    }

    #[test]
    fn recurrence_of_moebius_models_is_zero() {
        let m = InnerFunctionSpec::moebius_hyperbolic(2.0);
        let est = recurrence_fraction(&m, &BoundaryArc::half_plane(1.0, 2.0), 10_000, 100, 3).unwrap();
        assert_eq!(est.value, 0.0);
        let p = InnerFunctionSpec::moebius_parabolic(1.0);
        let est = recurrence_fraction(&p, &BoundaryArc::half_plane(0.0, 1.0), 1000, 1000, 3).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn recurrence_preconditions() {
        let b = InnerFunctionSpec::blaschke_baker();
        assert!(recurrence_fraction(&b, &BoundaryArc::disk(0.3, 0.3), 10, 10, 0).is_err());
        // wraps through angle 0, the Denjoy-Wolff point
        assert!(recurrence_fraction(&b, &BoundaryArc::disk(0.9, 0.1), 10, 10, 0).is_err());
    }

    #[test]
    fn halves() {
        for lambda in [2.0, 10.0] {
            let (a, b) = invariant_halves_measure(&InnerFunctionSpec::moebius_hyperbolic(lambda)).unwrap();
            assert!(close(a, 0.5, 1e-15) && close(b, 0.5, 1e-15));
        }
        assert!(invariant_halves_measure(&InnerFunctionSpec::moebius_hyperbolic(1.0)).is_err());
        assert!(invariant_halves_measure(&InnerFunctionSpec::blaschke_baker()).is_err());
        let (p, n) = invariant_halves_monte_carlo(&InnerFunctionSpec::moebius_hyperbolic(2.0), 20_000, 5).unwrap();
        assert!(close(p.value, 0.5, 4.0 * p.stderr) && close(p.value + n.value, 1.0, 1e-12));
    }

    #[test]
    fn blaschke_first_level_preimages() {
        let b = InnerFunctionSpec::blaschke_baker();
        let tree = preimage_tree(&b, BoundaryPoint::disk(0.5), 1, 100).unwrap();
        let t: Vec<f64> = tree.points.iter().map(|p| p.coord).collect();
        assert_eq!(t.len(), 2);
        assert!(close(t[0], 0.25, 1e-11) && close(t[1], 0.75, 1e-11));
        let tree = preimage_tree(&b, BoundaryPoint::disk(0.0), 1, 100).unwrap();
        let t: Vec<f64> = tree.points.iter().map(|p| p.coord).collect();
        assert_eq!(t.len(), 2);
        assert!(close(t[0], 0.0, 1e-11) && close(t[1], 0.5, 1e-11));
        let tree = preimage_tree(&b, BoundaryPoint::disk(0.5), 0, 100).unwrap();
        assert_eq!(tree.points, vec![BoundaryPoint::disk(0.5)]);
    }

    #[test]
    fn preimages_map_to_target() {
        let b = InnerFunctionSpec::blaschke_baker();
        let target = BoundaryPoint::disk(0.37);
        let tree = preimage_tree(&b, target, 3, 100).unwrap();
        assert_eq!(tree.points.len(), 8);
        for p in &tree.points {
            let end = *iterate_circle(&b, *p, 3).points.last().unwrap();
            assert!(end.circle_distance(&target) < 1e-9);
        }
        let tree = preimage_tree(&b, target, 10, 100).unwrap();
        assert!(tree.exhausted && tree.points.len() <= 100);
    }

    #[test]
    fn fatou_inner_preimages_solve_equation() {
        let f = InnerFunctionSpec::fatou_inner();
        let tree = preimage_tree(&f, BoundaryPoint::half_plane(0.3), 1, 1000).unwrap();
        assert_eq!(tree.points.len(), 2 * FATOU_INNER_BRANCHES as usize + 1);
        for p in &tree.points {
            let x = p.coord;
            assert!(close(x - x.cos() / x.sin() / 2.0, 0.3, 1e-9));
        }
        assert!(preimage_tree(&f, BoundaryPoint::infinity(), 1, 10).is_err());
    }

    #[test]
    fn moebius_disk_conjugates_match_cayley() {
        for inner in [InnerFunctionSpec::moebius_hyperbolic(2.0), InnerFunctionSpec::moebius_parabolic(1.0)] {
            for &t in &[0.1, 0.3, 0.6, 0.85] {
                let xi = Complex64::from_polar(1.0, TAU * t);
                let lhs = disk_conjugate(&inner, xi).unwrap();
                let rhs = cayley_inverse(inner.eval(cayley(xi)).unwrap());
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn gap_scan() {
        let pts: Vec<_> = (0..4).map(|k| BoundaryPoint::disk(k as f64 / 4.0)).collect();
        assert!(close(max_circle_gap(&pts), 0.25, 1e-15));
        assert_eq!(max_circle_gap(&[]), 1.0);
    }
}
