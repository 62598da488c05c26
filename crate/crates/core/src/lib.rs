//! Zero-energy Kepler billiards and their Levi-Civita lift.
//!
//! The crate simulates a particle attracted by a Newtonian center at the
//! origin and reflected elastically by a smooth wall, at energy zero, where
//! every free arc is a parabola focused at the origin. The complex square
//! root sends such a billiard to an ordinary Birkhoff billiard in a centrally
//! symmetric table, two lifted orbits per Kepler orbit. Modules:
//!
//! - [`geometry`]: walls, frames, winding numbers, arc length;
//! - [`levi_civita`]: state maps, lifted tables, orbit lifting and projection;
//! - [`kepler`]: the direct zero-energy Kepler billiard map;
//! - [`birkhoff`]: the straight-chord billiard and the Joachimsthal invariant;
//! - [`diagnostics`]: K-convexity classifiers, conservation reports,
//!   quadratic first-integral fits, phase portraits and the conjugacy check.

// `!(x > y)` is the NaN-rejecting form used for every threshold test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod birkhoff;
pub mod diagnostics;
pub mod error;
pub mod geometry;
pub mod kepler;
pub mod levi_civita;
pub mod planar;
pub mod quadrature;
pub mod roots;
pub mod tolerances;

pub use birkhoff::{BirkhoffOrbit, ChordState, PhasePoint};
pub use error::{DynamicsError, FitError, GeometryError, LiftError};
pub use geometry::{BilliardTable, BoundaryFrame, SymmetricForm, Table, TableSpec};
pub use kepler::{BounceRecord, KeplerBilliard, KeplerOrbit, ParabolicArc};
pub use levi_civita::{BranchSign, LiftedState, LiftedTable, PhaseState};
pub use planar::{pt, PlanarPoint};
pub use tolerances::Tolerances;
