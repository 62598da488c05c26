//! Least-squares search for a first integral of the form `⟨Qz, v⟩`.

use nalgebra::DMatrix;
use serde::Serialize;
use std::f64::consts::SQRT_2;

use crate::birkhoff::{BirkhoffOrbit, ChordState};
use crate::error::FitError;
use crate::geometry::SymmetricForm;

/// Minimum number of bounces accepted by [`integral_fit_residual`].
pub const MIN_FIT_BOUNCES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntegralFitReport {
    /// Fitted form with unit Frobenius norm and non-negative trace.
    pub form: SymmetricForm,
    /// Standard deviation of `⟨Qz, v⟩` over the orbit divided by its mean
    /// absolute value.
    pub residual: f64,
    pub samples: usize,
}

/// Fits `Q` to an orbit with at least [`MIN_FIT_BOUNCES`] bounces.
pub fn integral_fit_residual(orbit: &BirkhoffOrbit) -> Result<IntegralFitReport, FitError> {
    let bounces = orbit.states.len().saturating_sub(1);
    if bounces < MIN_FIT_BOUNCES {
        return Err(FitError::TooFewBounces { got: bounces, need: MIN_FIT_BOUNCES });
    }
    fit_states(&orbit.states)
}

/// Fits `Q` to arbitrary chord states (no length requirement).
pub fn fit_states(states: &[ChordState]) -> Result<IntegralFitReport, FitError> {
    let n = states.len();
    let rows: Vec<[f64; 3]> = states
        .iter()
        .map(|c| {
            let (z, v) = (c.point, c.direction);
            [z.re * v.re, z.im * v.im, (z.re * v.im + z.im * v.re) / SQRT_2]
        })
        .collect();
    let mut mean = [0.0; 3];
    for r in &rows {
        for k in 0..3 {
            mean[k] += r[k] / n as f64;
        }
    }
    let centered = DMatrix::from_fn(n, 3, |i, k| rows[i][k] - mean[k]);
    let svd = centered.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| svd.singular_values[b].partial_cmp(&svd.singular_values[a]).unwrap());
    let singular_values = order.map(|k| svd.singular_values[k]);
    let degenerate = FitError::DegenerateOrbit { singular_values };
    let scale = rows.iter().map(|r| r.iter().map(|x| x * x).sum::<f64>()).sum::<f64>().sqrt();
    if !(singular_values[1] > 1e-9 * scale) {
        return Err(degenerate);
    }
    let u = v_t.row(order[2]);
    let mut form = SymmetricForm { xx: u[0], yy: u[1], xy: u[2] / SQRT_2 };
    if form.xx + form.yy < 0.0 {
        form = form.scaled(-1.0);
    }
    let values: Vec<f64> = rows.iter().map(|r| form.xx * r[0] + form.yy * r[1] + SQRT_2 * form.xy * r[2]).collect();
    let avg = values.iter().sum::<f64>() / n as f64;
    let mean_abs = values.iter().map(|v| v.abs()).sum::<f64>() / n as f64;
    if !(mean_abs > 1e-300) {
        return Err(degenerate);
    }
    let var = values.iter().map(|v| (v - avg).powi(2)).sum::<f64>() / n as f64;
    Ok(IntegralFitReport { form, residual: var.sqrt() / mean_abs, samples: n })
}

/// Largest `|⟨Qz, v⟩ − ⟨Qz₀, v₀⟩|` over the states.
pub fn invariant_spread(form: &SymmetricForm, states: &[ChordState]) -> f64 {
    let Some(first) = states.first() else { return 0.0 };
    let j0 = form.pair(first.point, first.direction);
    states.iter().map(|c| (form.pair(c.point, c.direction) - j0).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::birkhoff::{simulate_birkhoff, PhasePoint};
    use crate::geometry::{Table, TableSpec};
    use crate::planar::PlanarPoint;
    use crate::tolerances::Tolerances;

    #[test]
    fn centered_ellipse_recovers_joachimsthal_form() {
        let (a, b) = (1.2, 0.8);
        let table = Table::new(TableSpec::ellipse(PlanarPoint::default(), a, b, 0.0)).unwrap();
        let orbit = simulate_birkhoff(&table, PhasePoint { s: 0.1, phi: 1.0 }, 1000, &Tolerances::default()).unwrap();
        let r = integral_fit_residual(&orbit).unwrap();
        assert!(r.residual < 1e-9, "{}", r.residual);
        let expected = SymmetricForm::diagonal(1.0 / (a * a), 1.0 / (b * b));
        let expected = expected.scaled(1.0 / expected.frobenius());
        assert!((r.form.xx - expected.xx).abs() < 1e-6);
        assert!((r.form.yy - expected.yy).abs() < 1e-6);
        assert!(r.form.xy.abs() < 1e-6);
        assert!((r.form.frobenius() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circle_gives_identity() {
        let table = Table::new(TableSpec::circle(PlanarPoint::default(), 1.0)).unwrap();
        let orbit = simulate_birkhoff(&table, PhasePoint { s: 0.0, phi: 0.7 }, 500, &Tolerances::default()).unwrap();
        let r = integral_fit_residual(&orbit).unwrap();
        assert!(r.residual < 1e-12);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r.form.xx - h).abs() < 1e-9 && (r.form.yy - h).abs() < 1e-9 && r.form.xy.abs() < 1e-9);
    }

    #[test]
    fn short_and_periodic_orbits_are_rejected() {
        let table = Table::new(TableSpec::ellipse(PlanarPoint::default(), 1.2, 0.8, 0.0)).unwrap();
        let tol = Tolerances::default();
        let short = simulate_birkhoff(&table, PhasePoint { s: 0.1, phi: 1.0 }, 10, &tol).unwrap();
        assert!(matches!(integral_fit_residual(&short), Err(FitError::TooFewBounces { .. })));
        let period_two =
            simulate_birkhoff(&table, PhasePoint { s: 0.25, phi: std::f64::consts::FRAC_PI_2 }, 300, &tol).unwrap();
        assert!(matches!(integral_fit_residual(&period_two), Err(FitError::DegenerateOrbit { .. })));
    }
}
