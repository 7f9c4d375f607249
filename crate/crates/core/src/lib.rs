//! Electrical capacitance of an unloaded ball/raceway contact.
//!
//! The crate computes the capacitance of one rolling element against its
//! raceway by several independent routes:
//!
//! * [`closed_form`]: exact per-length formulas for a cylinder over a plane
//!   and for eccentric (or external) cylinder pairs.
//! * [`semi_analytic`]: the infinitesimal plate-capacitor family (models A
//!   to E) in 2D per-length and 3D absolute form, on top of an adaptive
//!   Gauss-Kronrod engine in [`quadrature`].
//! * [`analytic2d`]: the exact line-charge (Apollonian circle) solution for
//!   two eccentric circular electrode sections (model F).
//! * [`fem2d`]: a P1 finite-element solver for the same 2D domain (model G).
//!
//! All lengths are millimetres, permittivities are F/m. Per-length results
//! are F/m, absolute results are F.

// `!(x > 0.0)` style guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic2d;
pub mod closed_form;
pub mod error;
pub mod exec;
pub mod fem2d;
pub mod geometry;
pub mod method;
pub mod quadrature;
pub mod semi_analytic;

pub use error::{Error, Result};
pub use exec::Execution;
pub use geometry::{BearingContactGeometry, DimensionlessSection, EffectiveRadii, RingSide, SectionPlane};
pub use method::{CapacitanceResult, CapacitanceUnit, Diagnostics, Method};

/// Vacuum permittivity in F/m (CODATA 2018).
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Millimetres per metre; lengths are stored in mm.
pub const MM_PER_M: f64 = 1.0e3;
