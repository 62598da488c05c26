//! Per-bounce conserved-quantity tables.

use serde::Serialize;

use crate::birkhoff::{joachimsthal_form, BirkhoffOrbit};
use crate::geometry::{BilliardTable, OrbitTable, SymmetricForm, Table};
use crate::kepler::KeplerOrbit;
use crate::levi_civita::{kepler_momentum, lift_states, lift_table, BranchSign, PhaseState};

/// An orbit of either billiard.
#[derive(Clone, Copy, Debug)]
pub enum OrbitRef<'a> {
    Kepler(&'a KeplerOrbit),
    Birkhoff(&'a BirkhoffOrbit),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConservationRow {
    pub index: usize,
    /// Kepler `|H|` (for lifted Birkhoff orbits, of the projected state).
    pub energy_residual: Option<f64>,
    pub abs_angular_momentum: Option<f64>,
    /// `⟨Mz, v⟩` on the lifted (or plain) centered-ellipse wall.
    pub joachimsthal: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConservationReport {
    /// The centered-ellipse form used for the Joachimsthal column, if any.
    pub form: Option<SymmetricForm>,
    pub rows: Vec<ConservationRow>,
}

fn spread(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let (mut lo, mut hi, mut any) = (f64::INFINITY, f64::NEG_INFINITY, false);
    for v in values.flatten() {
        lo = lo.min(v);
        hi = hi.max(v);
        any = true;
    }
    any.then_some(hi - lo)
}

impl ConservationReport {
    pub fn max_energy_residual(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.energy_residual).reduce(f64::max)
    }

    /// `max − min` of `|L|`.
    pub fn angular_momentum_drift(&self) -> Option<f64> {
        spread(self.rows.iter().map(|r| r.abs_angular_momentum))
    }

    /// `max − min` of the Joachimsthal column.
    pub fn joachimsthal_drift(&self) -> Option<f64> {
        spread(self.rows.iter().map(|r| r.joachimsthal))
    }
}

/// Builds the conservation table of an orbit. The Joachimsthal column is
/// present only when the relevant wall is a centered ellipse (for Kepler
/// orbits: when the lift is one within the fit tolerance).
pub fn conservation_report(orbit: OrbitRef<'_>) -> ConservationReport {
    match orbit {
        OrbitRef::Kepler(k) => kepler_report(k),
        OrbitRef::Birkhoff(b) => birkhoff_report(b),
    }
}

fn kepler_report(orbit: &KeplerOrbit) -> ConservationReport {
    let lifted = Table::new(orbit.table.clone()).ok().and_then(|t| lift_table(&t).ok());
    let form = lifted.as_ref().and_then(|l| l.centered_fit()).map(|(f, _)| f);
    let pullback = match (&lifted, form) {
        (Some(l), Some(_)) => lift_states(orbit, l, BranchSign::Plus).ok(),
        _ => None,
    };
    let rows = orbit
        .bounces
        .iter()
        .enumerate()
        .map(|(index, b)| ConservationRow {
            index,
            energy_residual: Some(b.diagnostics.energy_residual),
            abs_angular_momentum: Some(b.diagnostics.angular_momentum.abs()),
            joachimsthal: match (&pullback, form) {
                (Some(states), Some(f)) => joachimsthal_form(&f, states[index].point, states[index].direction).ok(),
                _ => None,
            },
        })
        .collect();
    ConservationReport { form: pullback.and(form), rows }
}

fn birkhoff_report(orbit: &BirkhoffOrbit) -> ConservationReport {
    let (form, lifted) = match &orbit.table {
        OrbitTable::Plain(spec) => (Table::new(spec.clone()).ok().and_then(|t| t.centered_form()), false),
        OrbitTable::Lifted(spec) => (
            Table::new(spec.clone())
                .ok()
                .and_then(|t| lift_table(&t).ok())
                .and_then(|l| l.centered_fit())
                .map(|(f, _)| f),
            true,
        ),
    };
    let rows = orbit
        .states
        .iter()
        .enumerate()
        .map(|(index, c)| {
            let projected = lifted.then(|| PhaseState::new(c.point * c.point, kepler_momentum(c.point, c.direction)));
            ConservationRow {
                index,
                energy_residual: projected.map(|s| s.hamiltonian().abs()),
                abs_angular_momentum: projected.map(|s| s.angular_momentum().abs()),
                joachimsthal: form.and_then(|f| joachimsthal_form(&f, c.point, c.direction).ok()),
            }
        })
        .collect();
    ConservationReport { form, rows }
}
