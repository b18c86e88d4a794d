//! Numerical laboratory for the boundary dynamics of Baker domains of
//! transcendental entire maps.
//!
//! The crate iterates a closed catalog of entire maps and of the inner
//! functions that model them, classifies Baker domains by Cowen type,
//! measures ergodic statistics on the circle, constructs repelling periodic
//! points on the boundary through contracting inverse branches and bounds
//! Hausdorff dimensions from below with iterated function systems.

pub mod boundary;
pub mod branches;
pub mod catalog;
pub mod circle;
pub mod cowen;
pub mod dimension;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod probe;
pub mod rng;

pub use catalog::{get_inner, get_map, CowenType, EntireMapSpec, InnerFunctionSpec};
pub use circle::{BoundaryArc, BoundaryPoint, MeasureEstimate};
pub use dynamics::{Budgets, OrbitClass, OrbitRecord};
pub use error::{Error, Result};
