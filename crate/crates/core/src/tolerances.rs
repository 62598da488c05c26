//! Numerical tolerances shared by the simulators and the CLI.

use serde::{Deserialize, Serialize};

/// Default bound on `|H|` for states on the zero-energy surface.
pub const ENERGY_TOL: f64 = 1e-10;
/// Default width to which wall-intersection brackets are bisected.
pub const ROOT_TOL: f64 = 1e-13;
/// Default bounce-point agreement required between the direct and lifted routes.
pub const CONJUGACY_TOL: f64 = 1e-8;
/// Minimum sine of the crossing angle for a wall intersection to count as transversal.
pub const TRANSVERSALITY_TOL: f64 = 1e-8;

/// Tolerance set threaded through simulations; every field must be positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub energy: f64,
    pub root: f64,
    pub conjugacy: f64,
    pub transversality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { energy: ENERGY_TOL, root: ROOT_TOL, conjugacy: CONJUGACY_TOL, transversality: TRANSVERSALITY_TOL }
    }
}

impl Tolerances {
    /// Returns the name of the first non-positive (or non-finite) field, if any.
    pub fn invalid_field(&self) -> Option<&'static str> {
        [
            ("energy", self.energy),
            ("root", self.root),
            ("conjugacy", self.conjugacy),
            ("transversality", self.transversality),
        ]
        .into_iter()
        .find(|(_, v)| !(v.is_finite() && *v > 0.0))
        .map(|(name, _)| name)
    }
}
