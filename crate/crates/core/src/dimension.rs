//! Lower bounds on Hausdorff dimension from two disjoint contractions of a
//! disk, through the Moran equation `b1^s + b2^s = 1`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::branches::{BranchChain, Disk};
use crate::catalog::EntireMapSpec;
use crate::error::{Error, Result};

pub const BOUNDARY_POINTS: usize = 64;
/// Index offsets pairing boundary points: 4 × 64 = 256 pairs.
pub const PAIR_OFFSETS: [usize; 4] = [1, 5, 17, 32];
pub const SAFETY_FACTOR: f64 = 0.9;
pub const LABEL: &str = "numerical lower-bound estimate";

fn moran_defect(lo: f64, hi: f64, s: f64) -> f64 {
    lo.powf(s) + hi.powf(s) - 1.0
}

/// The unique `s > 0` with `b1^s + b2^s = 1`.
pub fn moran_exponent(b1: f64, b2: f64) -> Result<f64> {
    if !(b1 > 0.0 && b1 < 1.0 && b2 > 0.0 && b2 < 1.0) {
        return Err(Error::Precondition(format!(
            "contraction factors must lie in (0, 1), got {b1} and {b2}"
        )));
    }
    // fixed argument order makes the result symmetric bit for bit
    let (lo, hi_b) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
    let phi = |s: f64| moran_defect(lo, hi_b, s);
    let mut a = 0.0;
    let mut b = 1.0;
    loop {
        let v = phi(b);
        if v == 0.0 {
            return Ok(b);
        }
        if v < 0.0 {
            break;
        }
        a = b;
        b *= 2.0;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let v = phi(m);
        if v == 0.0 {
            return Ok(m);
        }
        if v > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// A map of the base disk into itself.
pub trait Contraction: Sync {
    fn apply(&self, z: Complex64) -> Result<Complex64>;
    fn id(&self) -> String;
}

/// `z ↦ scale·z + shift`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Similitude {
    pub scale: Complex64,
    pub shift: Complex64,
}

impl Similitude {
    pub fn new(scale: Complex64, shift: Complex64) -> Self {
        Similitude { scale, shift }
    }
}

impl Contraction for Similitude {
    fn apply(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.scale * z + self.shift)
    }

    fn id(&self) -> String {
        format!("similitude({}, {})", self.scale, self.shift)
    }
}

/// A branch chain of a catalog map, evaluated by path lifting.
pub struct ChainContraction<'a> {
    pub map: &'a EntireMapSpec,
    pub chain: &'a BranchChain,
}

impl Contraction for ChainContraction<'_> {
    fn apply(&self, z: Complex64) -> Result<Complex64> {
        self.chain.apply(self.map, z)
    }

    fn id(&self) -> String {
        let e = self.chain.endpoints.last().unwrap();
        format!("{}:n={}:end=({},{})", self.chain.map_id, self.chain.len(), e.re, e.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionBound {
    pub s: f64,
    pub b1: f64,
    pub b2: f64,
    /// Sampled bi-Lipschitz constants before the safety factor.
    pub b1_raw: f64,
    pub b2_raw: f64,
    pub chain_ids: (String, String),
    /// Distance between the sampled boundaries of the two images.
    pub disjointness_margin: f64,
    /// `1 − max|F_i(ζ) − c| / r` for each image.
    pub containment_margins: (f64, f64),
    pub capped: bool,
    pub warning: Option<String>,
    pub label: String,
}

fn point_in_polygon(p: Complex64, poly: &[Complex64]) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a.im > p.im) != (b.im > p.im) {
            let x = a.re + (p.im - a.im) / (b.im - a.im) * (b.re - a.re);
            if p.re < x {
                inside = !inside;
            }
        }
    }
    inside
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let n2 = d.norm_sqr();
    let t = if n2 == 0.0 { 0.0 } else { (((p - a) * d.conj()).re / n2).clamp(0.0, 1.0) };
    (p - (a + d * t)).norm()
}

fn polygon_distance(p: &[Complex64], q: &[Complex64]) -> f64 {
    let one_way = |p: &[Complex64], q: &[Complex64]| {
        p.iter()
            .map(|&x| {
                (0..q.len())
                    .map(|i| segment_distance(x, q[i], q[(i + 1) % q.len()]))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(f64::INFINITY, f64::min)
    };
    one_way(p, q).min(one_way(q, p))
}

/// Smallest ratio `|F(x) − F(y)| / |x − y|` over the sampled pairs.
fn lower_lipschitz(boundary: &[Complex64], image: &[Complex64]) -> f64 {
    let n = boundary.len();
    (0..n * PAIR_OFFSETS.len())
        .into_par_iter()
        .map(|idx| {
            let (j, off) = (idx % n, PAIR_OFFSETS[idx / n]);
            let k = (j + off) % n;
            (image[j] - image[k]).norm() / (boundary[j] - boundary[k]).norm()
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// Moran lower bound for the attractor of two contractions of `base`.
/// Fails, naming the inclusion, unless both images lie inside `base` and
/// are disjoint.
pub fn ifs_lower_bound(
    base: Disk,
    f1: &dyn Contraction,
    f2: &dyn Contraction,
) -> Result<DimensionBound> {
    let boundary: Vec<Complex64> = (0..BOUNDARY_POINTS)
        .map(|j| base.center + Complex64::from_polar(base.radius, TAU * j as f64 / BOUNDARY_POINTS as f64))
        .collect();
    let image = |f: &dyn Contraction| -> Result<Vec<Complex64>> {
        boundary.par_iter().map(|&z| f.apply(z)).collect()
    };
    let im1 = image(f1)?;
    let im2 = image(f2)?;
    let reach = |im: &[Complex64]| im.iter().map(|z| (z - base.center).norm()).fold(0.0, f64::max);
    let m1 = 1.0 - reach(&im1) / base.radius;
    let m2 = 1.0 - reach(&im2) / base.radius;
    if m1 <= 0.0 {
        return Err(Error::Containment(format!("image of {} is not inside the base disk", f1.id())));
    }
    if m2 <= 0.0 {
        return Err(Error::Containment(format!("image of {} is not inside the base disk", f2.id())));
    }
    let c1 = f1.apply(base.center)?;
    let c2 = f2.apply(base.center)?;
    let gap = polygon_distance(&im1, &im2);
    let nested = point_in_polygon(c1, &im2) || point_in_polygon(c2, &im1);
    let crossing = im1.iter().any(|&z| point_in_polygon(z, &im2)) || im2.iter().any(|&z| point_in_polygon(z, &im1));
    if nested || crossing || gap <= 0.0 {
        return Err(Error::Containment(format!(
            "images of {} and {} overlap",
            f1.id(),
            f2.id()
        )));
    }
    let b1_raw = lower_lipschitz(&boundary, &im1);
    let b2_raw = lower_lipschitz(&boundary, &im2);
    let b1 = SAFETY_FACTOR * b1_raw;
    let b2 = SAFETY_FACTOR * b2_raw;
    let mut s = moran_exponent(b1, b2)?;
    let (capped, warning) = if s > 2.0 {
        s = 2.0;
        (true, Some("Moran exponent above 2 was capped; the Lipschitz estimates are unreliable".to_string()))
    } else {
        (false, None)
    };
    Ok(DimensionBound {
        s,
        b1,
        b2,
        b1_raw,
        b2_raw,
        chain_ids: (f1.id(), f2.id()),
        disjointness_margin: gap,
        containment_margins: (m1, m2),
        capped,
        warning,
        label: LABEL.to_string(),
    })
}

/// [`ifs_lower_bound`] for two valid branch chains over the same disk.
pub fn chain_lower_bound(
    map: &EntireMapSpec,
    chain1: &BranchChain,
    chain2: &BranchChain,
) -> Result<DimensionBound> {
    if !(chain1.valid && chain2.valid) {
        return Err(Error::Containment("both chains must be valid".into()));
    }
    if chain1.base_disk != chain2.base_disk {
        return Err(Error::Containment("chains must share their base disk".into()));
    }
    ifs_lower_bound(
        chain1.base_disk,
        &ChainContraction { map, chain: chain1 },
        &ChainContraction { map, chain: chain2 },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn moran_closed_forms() {
        assert_eq!(moran_exponent(0.5, 0.5).unwrap(), 1.0);
        let s = moran_exponent(1.0 / 3.0, 1.0 / 3.0).unwrap();
        assert!((s - 2f64.ln() / 3f64.ln()).abs() < 1e-10);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let s = moran_exponent(0.5, 0.25).unwrap();
        assert!((s - golden.ln() / 2f64.ln()).abs() < 1e-10);
        let s = moran_exponent(0.3, 0.7).unwrap();
        assert!((0.3f64.powf(s) + 0.7f64.powf(s) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn moran_domain() {
        for (a, b) in [(0.0, 0.5), (1.0, 0.5), (0.5, -0.1), (f64::NAN, 0.5)] {
            assert!(moran_exponent(a, b).is_err());
        }
    }

    #[test]
    fn disjoint_similitudes() {
        let f1 = Similitude::new(c(1.0 / 3.0, 0.0), c(-0.5, 0.0));
        let f2 = Similitude::new(c(1.0 / 3.0, 0.0), c(0.5, 0.0));
        let bound = ifs_lower_bound(Disk::new(c(0.0, 0.0), 1.0), &f1, &f2).unwrap();
        assert!((bound.b1_raw - 1.0 / 3.0).abs() < 1e-12);
        assert!((bound.b1 - 0.3).abs() < 1e-12);
        let expected = 2f64.ln() / (1.0 / 0.3f64).ln();
        assert!((bound.s - expected).abs() < 1e-10);
        assert!(bound.disjointness_margin > 0.3);
        assert!(bound.s <= moran_exponent(bound.b1_raw, bound.b2_raw).unwrap());
    }

    #[test]
    fn overlapping_halves_are_rejected() {
        let f1 = Similitude::new(c(0.5, 0.0), c(0.0, 0.0));
        let f2 = Similitude::new(c(0.5, 0.0), c(0.5, 0.0));
        assert!(matches!(
            ifs_lower_bound(Disk::new(c(0.0, 0.0), 1.0), &f1, &f2),
            Err(Error::Containment(_))
        ));
        let f3 = Similitude::new(c(0.5, 0.0), c(-0.25, 0.0));
        let f4 = Similitude::new(c(0.5, 0.0), c(0.25, 0.0));
        assert!(ifs_lower_bound(Disk::new(c(0.0, 0.0), 1.0), &f3, &f4).is_err());
    }

    #[test]
    fn escaping_image_is_rejected() {
        let f1 = Similitude::new(c(0.3, 0.0), c(0.8, 0.0));
        let f2 = Similitude::new(c(0.3, 0.0), c(-0.5, 0.0));
        match ifs_lower_bound(Disk::new(c(0.0, 0.0), 1.0), &f1, &f2) {
            Err(Error::Containment(msg)) => assert!(msg.contains("not inside")),
            other => panic!("{other:?}"),
        }
    }
}
