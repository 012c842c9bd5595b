//! Exact constructions of point sets shattered by `k`-fold unions of
//! half-spaces and of hyperplane sets shattered by low-dimensional open
//! simplices, on top of a finite set-system engine for VC-dimension and
//! `k`-fold operators.
//!
//! All geometry uses arbitrary-precision rationals.

pub mod bundled;
pub mod cli;
pub mod construct;
pub mod error;
pub mod gadget;
pub mod geometry;
pub mod report;
pub mod scalar;
pub mod setsys;

pub use construct::{Theorem1Instance, Theorem2Instance, TheoremReport, VerifyMode};
pub use error::{Error, Result};
pub use gadget::BoxGadget;
pub use geometry::{AxisBox, DualHyperplane, OpenSimplex, Point, RestrictedHalfspace};
pub use report::RunReport;
pub use scalar::Scalar;
pub use setsys::{SetSystem, VcDimension};
