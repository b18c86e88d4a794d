//! The closed catalog of example maps: five transcendental entire maps with
//! Baker domains, and four inner functions that model their boundary
//! dynamics.
//!
//! | id           | f(z)                    | Baker domain type  | univalent |
//! |--------------|-------------------------|--------------------|-----------|
//! | `baker_abel` | z + e^{-z}              | doubly parabolic   | no        |
//! | `fatou`      | z + 1 + e^{-z}          | doubly parabolic   | no        |
//! | `herman`     | z + 2πiα + e^z          | simply parabolic   | yes       |
//! | `bergweiler` | 2 - log 2 + 2z - e^z    | hyperbolic         | yes       |
//! | `bargmann`   | 2z - 3 + e^z            | hyperbolic         | no        |

use std::f64::consts::{LN_2, PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle::BoundaryPoint;
use crate::error::{Error, Result};

/// Real part of an exponent above which `exp` overflows in double precision.
pub const DEFAULT_OVERFLOW_GUARD: f64 = 700.0;

/// Golden-mean rotation number used for the `herman` map by default.
pub fn golden_alpha() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaKind {
    BakerAbel,
    Fatou,
    Herman,
    Bergweiler,
    Bargmann,
}

impl FormulaKind {
    pub const ALL: [FormulaKind; 5] = [
        FormulaKind::BakerAbel,
        FormulaKind::Fatou,
        FormulaKind::Herman,
        FormulaKind::Bergweiler,
        FormulaKind::Bargmann,
    ];

    pub fn id(self) -> &'static str {
        match self {
            FormulaKind::BakerAbel => "baker_abel",
            FormulaKind::Fatou => "fatou",
            FormulaKind::Herman => "herman",
            FormulaKind::Bergweiler => "bergweiler",
            FormulaKind::Bargmann => "bargmann",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            FormulaKind::BakerAbel => "z+exp(-z)",
            FormulaKind::Fatou => "z+1+exp(-z)",
            FormulaKind::Herman => "z+2*pi*i*alpha+exp(z)",
            FormulaKind::Bergweiler => "2-log(2)+2z-exp(z)",
            FormulaKind::Bargmann => "2z-3+exp(z)",
        }
    }
}

/// Cowen's trichotomy for the Möbius model of a Baker domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CowenType {
    DoublyParabolic,
    Hyperbolic,
    SimplyParabolic,
}

impl fmt::Display for CowenType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CowenType::DoublyParabolic => "doubly_parabolic",
            CowenType::Hyperbolic => "hyperbolic",
            CowenType::SimplyParabolic => "simply_parabolic",
        })
    }
}

/// A region known to lie inside the Baker domain and to be mapped into
/// itself. Orbits that enter it are certified members of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbsorbingRegion {
    /// `Re z > re_min`.
    RightHalfPlane { re_min: f64 },
    /// `Re z < re_max`.
    LeftHalfPlane { re_max: f64 },
    /// `Re z > re_min` and `|Im z - k*period| < half_width` for some integer
    /// k; each k is a different (translated) Baker domain.
    PeriodicStrip {
        re_min: f64,
        half_width: f64,
        period: f64,
    },
}

impl AbsorbingRegion {
    /// Returns the component label of `z` if it lies in the region.
    pub fn label(&self, z: Complex64) -> Option<i64> {
        match *self {
            AbsorbingRegion::RightHalfPlane { re_min } => (z.re > re_min).then_some(0),
            AbsorbingRegion::LeftHalfPlane { re_max } => (z.re < re_max).then_some(0),
            AbsorbingRegion::PeriodicStrip {
                re_min,
                half_width,
                period,
            } => {
                if z.re <= re_min {
                    return None;
                }
                let k = (z.im / period).round();
                ((z.im - k * period).abs() < half_width).then_some(k as i64)
            }
        }
    }
}

/// Which dynamical access to infinity defines Carathéodory-set membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AccessPredicate {
    /// `Re f^n(x) -> +inf` (fatou, baker_abel).
    RealPartToPlusInfinity,
    /// `Re f^n(x) -> -inf` (herman, bergweiler).
    RealPartToMinusInfinity,
    /// `|Im f^n(x)| -> inf` (bargmann).
    ImaginaryPartUnbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BakerMeta {
    pub known_type: CowenType,
    pub univalent: bool,
    pub absorbing_hint: AbsorbingRegion,
    pub access_predicate: AccessPredicate,
    /// Starting points at increasing depth into the absorbing region, used
    /// by the Cowen classifier when no starts are supplied.
    pub default_starts: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntireMapSpec {
    pub id: String,
    pub formula_kind: FormulaKind,
    /// Rotation number α; only read by `herman`.
    pub alpha: f64,
    pub overflow_guard: f64,
    pub baker_meta: BakerMeta,
}

fn reals(xs: &[f64]) -> Vec<Complex64> {
    xs.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

impl EntireMapSpec {
    pub fn new(kind: FormulaKind) -> Self {
        use AbsorbingRegion::*;
        use AccessPredicate::*;
        let baker_meta = match kind {
            FormulaKind::BakerAbel => BakerMeta {
                known_type: CowenType::DoublyParabolic,
                univalent: false,
                absorbing_hint: PeriodicStrip {
                    re_min: 0.0,
                    half_width: PI / 2.0,
                    period: TAU,
                },
                access_predicate: RealPartToPlusInfinity,
                default_starts: reals(&[1.0, 3.0, 6.0]),
            },
            FormulaKind::Fatou => BakerMeta {
                known_type: CowenType::DoublyParabolic,
                univalent: false,
                absorbing_hint: RightHalfPlane { re_min: 1.0 },
                access_predicate: RealPartToPlusInfinity,
                default_starts: reals(&[20.0, 50.0, 100.0]),
            },
            FormulaKind::Herman => BakerMeta {
                known_type: CowenType::SimplyParabolic,
                univalent: true,
                absorbing_hint: LeftHalfPlane { re_max: -3.0 },
                access_predicate: RealPartToMinusInfinity,
                default_starts: reals(&[-20.0, -60.0, -200.0]),
            },
            FormulaKind::Bergweiler => BakerMeta {
                known_type: CowenType::Hyperbolic,
                univalent: true,
                absorbing_hint: LeftHalfPlane { re_max: -2.0 },
                access_predicate: RealPartToMinusInfinity,
                default_starts: reals(&[-10.0, -30.0, -100.0]),
            },
            FormulaKind::Bargmann => BakerMeta {
                known_type: CowenType::Hyperbolic,
                univalent: false,
                absorbing_hint: LeftHalfPlane { re_max: 0.0 },
                access_predicate: ImaginaryPartUnbounded,
                default_starts: reals(&[-10.0, -30.0, -100.0]),
            },
        };
        EntireMapSpec {
            id: kind.id().to_string(),
            formula_kind: kind,
            alpha: golden_alpha(),
            overflow_guard: DEFAULT_OVERFLOW_GUARD,
            baker_meta,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    /// Evaluates `exp(w)`, refusing when `Re w` exceeds the overflow guard.
    /// `z` is the point being mapped and is carried in the error.
    fn guarded_exp(&self, w: Complex64, z: Complex64) -> Result<Complex64> {
        if !(w.re <= self.overflow_guard) {
            return Err(Error::Overflow { z });
        }
        Ok(w.exp())
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        eval_map(self, z)
    }

    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        eval_derivative(self, z)
    }

    /// Evaluates `f` and `f'` sharing one exponential.
    pub fn eval_with_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let one = Complex64::new(1.0, 0.0);
        Ok(match self.formula_kind {
            FormulaKind::BakerAbel => {
                let e = self.guarded_exp(-z, z)?;
                (z + e, one - e)
            }
            FormulaKind::Fatou => {
                let e = self.guarded_exp(-z, z)?;
                (z + 1.0 + e, one - e)
            }
            FormulaKind::Herman => {
                let e = self.guarded_exp(z, z)?;
                (z + Complex64::new(0.0, TAU * self.alpha) + e, one + e)
            }
            FormulaKind::Bergweiler => {
                let e = self.guarded_exp(z, z)?;
                (2.0 - LN_2 + 2.0 * z - e, 2.0 - e)
            }
            FormulaKind::Bargmann => {
                let e = self.guarded_exp(z, z)?;
                (2.0 * z - 3.0 + e, 2.0 + e)
            }
        })
    }
}

/// Looks up a catalog map by id.
pub fn get_map(id: &str) -> Result<EntireMapSpec> {
    FormulaKind::ALL
        .iter()
        .find(|k| k.id() == id)
        .map(|&k| EntireMapSpec::new(k))
        .ok_or_else(|| Error::CatalogMiss {
            id: id.to_string(),
            known: map_ids().join(", "),
        })
}

pub fn map_ids() -> Vec<&'static str> {
    FormulaKind::ALL.iter().map(|k| k.id()).collect()
}

pub fn all_maps() -> Vec<EntireMapSpec> {
    FormulaKind::ALL.iter().map(|&k| EntireMapSpec::new(k)).collect()
}

pub fn eval_map(spec: &EntireMapSpec, z: Complex64) -> Result<Complex64> {
    spec.eval_with_derivative(z).map(|(v, _)| v)
}

pub fn eval_derivative(spec: &EntireMapSpec, z: Complex64) -> Result<Complex64> {
    spec.eval_with_derivative(z).map(|(_, d)| d)
}

/// Fixed-width table of the catalog, one row per map.
pub fn catalog_table() -> String {
    let mut out = format!(
        "{:<12} {:<24} {:<18} {:<9}\n",
        "id", "formula", "known_type", "univalent"
    );
    for spec in all_maps() {
        out.push_str(&format!(
            "{:<12} {:<24} {:<18} {:<9}\n",
            spec.id,
            spec.formula_kind.formula(),
            spec.baker_meta.known_type.to_string(),
            spec.baker_meta.univalent
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Inner functions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainModel {
    UnitDisk,
    UpperHalfPlane,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerKind {
    /// g(z) = (3z²+1)/(3+z²) on the disk.
    BlaschkeBaker,
    /// g(z) = z - cot(z)/2 on the upper half-plane.
    FatouInner,
    /// T(z) = λz on the upper half-plane.
    MoebiusHyperbolic { lambda: f64 },
    /// T(z) = z + shift on the upper half-plane, shift = ±1.
    MoebiusParabolic { shift: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerFunctionSpec {
    pub id: String,
    pub domain_model: DomainModel,
    pub kind: InnerKind,
    pub dw_point: BoundaryPoint,
    pub cowen_type: CowenType,
    pub singularities: Vec<BoundaryPoint>,
}

/// Distance below which a point is treated as sitting on a pole.
pub const POLE_GUARD: f64 = 1e-12;

impl InnerFunctionSpec {
    pub fn blaschke_baker() -> Self {
        InnerFunctionSpec {
            id: "blaschke_baker".into(),
            domain_model: DomainModel::UnitDisk,
            kind: InnerKind::BlaschkeBaker,
            dw_point: BoundaryPoint::disk(0.0),
            cowen_type: CowenType::DoublyParabolic,
            singularities: Vec::new(),
        }
    }

    pub fn fatou_inner() -> Self {
        InnerFunctionSpec {
            id: "fatou_inner".into(),
            domain_model: DomainModel::UpperHalfPlane,
            kind: InnerKind::FatouInner,
            dw_point: BoundaryPoint::infinity(),
            cowen_type: CowenType::DoublyParabolic,
            singularities: vec![BoundaryPoint::infinity()],
        }
    }

    /// Dilation by `lambda`; hyperbolic only for `lambda > 1`, which the
    /// operations that need it check.
    pub fn moebius_hyperbolic(lambda: f64) -> Self {
        InnerFunctionSpec {
            id: "moebius_hyperbolic".into(),
            domain_model: DomainModel::UpperHalfPlane,
            kind: InnerKind::MoebiusHyperbolic { lambda },
            dw_point: BoundaryPoint::infinity(),
            cowen_type: CowenType::Hyperbolic,
            singularities: Vec::new(),
        }
    }

    pub fn moebius_parabolic(shift: f64) -> Self {
        InnerFunctionSpec {
            id: "moebius_parabolic".into(),
            domain_model: DomainModel::UpperHalfPlane,
            kind: InnerKind::MoebiusParabolic { shift },
            dw_point: BoundaryPoint::infinity(),
            cowen_type: CowenType::SimplyParabolic,
            singularities: Vec::new(),
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        eval_inner(self, z)
    }

    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        eval_inner_derivative(self, z)
    }
}

/// Looks up an inner function by id; Möbius models get λ = 2 and shift +1.
pub fn get_inner(id: &str) -> Result<InnerFunctionSpec> {
    match id {
        "blaschke_baker" => Ok(InnerFunctionSpec::blaschke_baker()),
        "fatou_inner" => Ok(InnerFunctionSpec::fatou_inner()),
        "moebius_hyperbolic" => Ok(InnerFunctionSpec::moebius_hyperbolic(2.0)),
        "moebius_parabolic" => Ok(InnerFunctionSpec::moebius_parabolic(1.0)),
        _ => Err(Error::CatalogMiss {
            id: id.to_string(),
            known: inner_ids().join(", "),
        }),
    }
}

pub fn inner_ids() -> Vec<&'static str> {
    vec![
        "blaschke_baker",
        "fatou_inner",
        "moebius_hyperbolic",
        "moebius_parabolic",
    ]
}

/// Distance from `z` to the nearest pole `kπ` of cot.
pub(crate) fn cot_pole_distance(z: Complex64) -> f64 {
    let k = (z.re / PI).round();
    (z - Complex64::new(k * PI, 0.0)).norm()
}

fn blaschke_pole_check(z: Complex64) -> Result<()> {
    let root = Complex64::new(0.0, 3f64.sqrt());
    if (z - root).norm() < POLE_GUARD || (z + root).norm() < POLE_GUARD {
        return Err(Error::Pole { z });
    }
    Ok(())
}

pub fn eval_inner(spec: &InnerFunctionSpec, z: Complex64) -> Result<Complex64> {
    match spec.kind {
        InnerKind::BlaschkeBaker => {
            blaschke_pole_check(z)?;
            let z2 = z * z;
            Ok((3.0 * z2 + 1.0) / (3.0 + z2))
        }
        InnerKind::FatouInner => {
            if cot_pole_distance(z) < POLE_GUARD {
                return Err(Error::Pole { z });
            }
            Ok(z - z.cos() / z.sin() / 2.0)
        }
        InnerKind::MoebiusHyperbolic { lambda } => Ok(lambda * z),
        InnerKind::MoebiusParabolic { shift } => Ok(z + shift),
    }
}

pub fn eval_inner_derivative(spec: &InnerFunctionSpec, z: Complex64) -> Result<Complex64> {
    match spec.kind {
        InnerKind::BlaschkeBaker => {
            blaschke_pole_check(z)?;
            let d = 3.0 + z * z;
            Ok(16.0 * z / (d * d))
        }
        InnerKind::FatouInner => {
            if cot_pole_distance(z) < POLE_GUARD {
                return Err(Error::Pole { z });
            }
            let s = z.sin();
            Ok(1.0 + 1.0 / (2.0 * s * s))
        }
        InnerKind::MoebiusHyperbolic { lambda } => Ok(Complex64::new(lambda, 0.0)),
        InnerKind::MoebiusParabolic { .. } => Ok(Complex64::new(1.0, 0.0)),
    }
}
