//! Numerical witnesses: K-convexity classification, conserved quantities,
//! first-integral fitting, phase portraits and the direct-versus-lifted
//! comparison.

pub mod conjugacy;
pub mod conservation;
pub mod fit;
pub mod kconvex;
pub mod portrait;

pub use conjugacy::{conjugacy_check, ConjugacyReport};
pub use conservation::{conservation_report, ConservationReport, ConservationRow, OrbitRef};
pub use fit::{fit_states, integral_fit_residual, invariant_spread, IntegralFitReport};
pub use kconvex::{
    brute_force_k_convex, check_k_convex, check_lifted_k_convex, count_parabola_crossings, KConvexVerdict, Verdict,
    Witness,
};
pub use portrait::{kepler_phase_portrait, phase_portrait, seed_grid, Portrait, PortraitRow};
