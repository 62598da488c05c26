//! Phase-portrait datasets on a uniform seed grid.

use std::f64::consts::PI;

use serde::Serialize;

use crate::birkhoff::{launch, phase_coords, simulate_birkhoff_from, ChordState, PhasePoint};
use crate::diagnostics::fit::{fit_states, invariant_spread};
use crate::error::{LiftError, Termination};
use crate::geometry::{BilliardTable, Table};
use crate::levi_civita::lift_table;
use crate::planar::PlanarPoint;
use crate::tolerances::Tolerances;

/// Seeds avoid angles within this margin of grazing.
pub const SEED_MARGIN: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PortraitRow {
    pub seed: usize,
    pub k: usize,
    pub s: f64,
    pub phi: f64,
    pub point: PlanarPoint,
    pub direction: PlanarPoint,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncatedSeed {
    pub seed: usize,
    pub termination: Termination,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Portrait {
    pub seeds: Vec<PhasePoint>,
    pub rows: Vec<PortraitRow>,
    pub truncated: Vec<TruncatedSeed>,
}

/// Seeds `s_i = i / n_s`, `φ_j = δ + (π − 2δ)(j + ½) / n_φ`, row-major in `s`.
pub fn seed_grid(n_s: usize, n_phi: usize) -> Vec<PhasePoint> {
    let mut seeds = Vec::with_capacity(n_s * n_phi);
    for i in 0..n_s {
        for j in 0..n_phi {
            seeds.push(PhasePoint {
                s: i as f64 / n_s as f64,
                phi: SEED_MARGIN + (PI - 2.0 * SEED_MARGIN) * (j as f64 + 0.5) / n_phi as f64,
            });
        }
    }
    seeds
}

/// Birkhoff orbits of `n` bounces from every seed of the grid.
pub fn phase_portrait<T: BilliardTable + ?Sized>(
    table: &T,
    grid: (usize, usize),
    n: usize,
    tol: &Tolerances,
) -> Portrait {
    let seeds = seed_grid(grid.0, grid.1);
    let mut rows = Vec::with_capacity(seeds.len() * (n + 1));
    let mut truncated = Vec::new();
    for (seed, p) in seeds.iter().enumerate() {
        let start = match launch(table, *p) {
            Ok(c) => c,
            Err(reason) => {
                truncated.push(TruncatedSeed { seed, termination: Termination { after_bounce: 0, reason } });
                continue;
            }
        };
        let orbit = simulate_birkhoff_from(table, start, n, tol);
        for (k, (c, ph)) in orbit.states.iter().zip(&orbit.phases).enumerate() {
            rows.push(PortraitRow { seed, k, s: ph.s, phi: ph.phi, point: c.point, direction: c.direction });
        }
        if let Some(termination) = orbit.termination {
            truncated.push(TruncatedSeed { seed, termination });
        }
    }
    Portrait { seeds, rows, truncated }
}

/// Portrait of a Kepler billiard, in the coordinates of its lifted table.
pub fn kepler_phase_portrait(
    table: &Table,
    grid: (usize, usize),
    n: usize,
    tol: &Tolerances,
) -> Result<Portrait, LiftError> {
    let lifted = lift_table(table)?;
    Ok(phase_portrait(&lifted, grid, n, tol))
}

impl Portrait {
    /// Chord states of one seed, in bounce order.
    pub fn seed_states(&self, seed: usize) -> Vec<ChordState> {
        self.rows
            .iter()
            .filter(|r| r.seed == seed)
            .map(|r| ChordState { t: f64::NAN, point: r.point, direction: r.direction })
            .collect()
    }

    /// Per seed, the spread of the best-fitting `⟨Qz, v⟩` along its orbit;
    /// `None` for seeds whose data cannot be fitted (e.g. periodic orbits).
    pub fn seed_spreads(&self) -> Vec<Option<f64>> {
        (0..self.seeds.len())
            .map(|seed| {
                let states = self.seed_states(seed);
                fit_states(&states).ok().map(|fit| invariant_spread(&fit.form, &states))
            })
            .collect()
    }
}

/// `(s, φ)` of every state; convenience for callers holding bare states.
pub fn phases_of<T: BilliardTable + ?Sized>(table: &T, states: &[ChordState]) -> Vec<PhasePoint> {
    states.iter().map(|c| phase_coords(table, c)).collect()
}
