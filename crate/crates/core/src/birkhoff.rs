//! Birkhoff billiard: straight chords and elastic reflection.
//!
//! Works on any [`BilliardTable`]; in practice on lifted tables. Walls that
//! are origin-centered ellipses get the exact quadratic chord; other walls
//! use the same Taylor-bound root isolation as the Kepler stepper, applied to
//! the line function `t ↦ v × (γ(t) − x₀)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{DynamicsError, Termination};
use crate::geometry::{BilliardTable, OrbitTable, SymmetricForm};
use crate::kepler::reflect;
use crate::planar::{cross, dot, PlanarPoint};
use crate::roots::{isolate, refine, ScanOptions};
use crate::tolerances::Tolerances;

/// A point on the wall with a unit direction (outgoing after a bounce,
/// arriving before it).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChordState {
    pub t: f64,
    pub point: PlanarPoint,
    pub direction: PlanarPoint,
}

/// Billiard coordinates: arc-length fraction `s ∈ [0, 1)` and angle
/// `φ ∈ (0, π)` from the tangent to the outgoing direction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhasePoint {
    pub s: f64,
    pub phi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BirkhoffOrbit {
    pub table: OrbitTable,
    pub states: Vec<ChordState>,
    pub phases: Vec<PhasePoint>,
    pub termination: Option<Termination>,
}

impl BirkhoffOrbit {
    pub(crate) fn from_states<T: BilliardTable + ?Sized>(
        table: &T,
        states: Vec<ChordState>,
        termination: Option<Termination>,
    ) -> Self {
        let phases = states.iter().map(|c| phase_coords(table, c)).collect();
        Self { table: table.orbit_table(), states, phases, termination }
    }

    /// The pointwise negation, an orbit of any centrally symmetric table of
    /// period 2: `t ↦ t + 1`, `z ↦ −z`, `v ↦ −v`, `s ↦ s + ½`.
    pub fn negated<T: BilliardTable + ?Sized>(&self, table: &T) -> Self {
        let half = 0.5 * table.period();
        let states = self
            .states
            .iter()
            .map(|c| ChordState {
                t: (c.t + half).rem_euclid(table.period()),
                point: -c.point,
                direction: -c.direction,
            })
            .collect();
        let phases = self.phases.iter().map(|p| PhasePoint { s: (p.s + 0.5).rem_euclid(1.0), phi: p.phi }).collect();
        Self { table: self.table.clone(), states, phases, termination: self.termination.clone() }
    }
}

/// Where the ray from `c` next meets the wall; the returned state carries
/// the unchanged arriving direction.
pub fn chord_exit<T: BilliardTable + ?Sized>(
    table: &T,
    c: &ChordState,
    tol: &Tolerances,
) -> Result<ChordState, DynamicsError> {
    let x0 = c.point;
    let v = c.direction;
    let b = table.bounds();
    if let Some(form) = table.centered_form() {
        let tau = -2.0 * form.pair(x0, v) / form.pair(v, v);
        if !(tau > 0.0) {
            return Err(DynamicsError::NoIntersection);
        }
        let t = table.locate(x0 + v * tau).ok_or(DynamicsError::NoIntersection)?;
        let (point, d1) = table.point_d1(t);
        let sine = cross(v, d1).abs() / d1.norm();
        if sine < tol.transversality {
            return Err(DynamicsError::TangencyDetected { t, sine });
        }
        return Ok(ChordState { t, point, direction: v });
    }

    let period = table.period();
    let h = |t: f64| {
        let (x, d1) = table.point_d1(t);
        (cross(v, x - x0), cross(v, d1))
    };
    let opts = ScanOptions { initial_intervals: (4.0 * period) as usize, min_width: 1e-10 * period };
    let scan = isolate(h, 0.0, period, b.accel, opts);
    let near = 1e-9 * b.diameter;
    // the bracket around the start parameter holds the start root only
    let start_t = c.t.rem_euclid(period);
    let skip_start = (table.point(start_t) - x0).norm() <= near;
    let mut best: Option<(f64, f64)> = None;
    for br in &scan.brackets {
        if skip_start && br.holds(start_t, 1e-12 * period) {
            continue;
        }
        let t = refine(h, *br, tol.root * period);
        let tau = dot(table.point(t) - x0, v);
        if tau > near && best.map_or(true, |(bt, _)| tau < bt) {
            best = Some((tau, t));
        }
    }
    let (tau, t) = best.ok_or(DynamicsError::NoIntersection)?;
    for &touch in &scan.touches {
        let tt = dot(table.point(touch) - x0, v);
        if tt > near && tt < tau {
            return Err(DynamicsError::TangencyDetected { t: touch, sine: 0.0 });
        }
    }
    let (point, d1) = table.point_d1(t);
    let sine = cross(v, d1).abs() / d1.norm();
    if sine < tol.transversality {
        return Err(DynamicsError::TangencyDetected { t, sine });
    }
    Ok(ChordState { t, point, direction: v })
}

/// One application of the billiard map: chord, then reflection.
pub fn birkhoff_step<T: BilliardTable + ?Sized>(
    table: &T,
    c: &ChordState,
    tol: &Tolerances,
) -> Result<ChordState, DynamicsError> {
    let arrival = chord_exit(table, c, tol)?;
    let frame = table.frame(arrival.t)?;
    Ok(ChordState { direction: reflect(arrival.direction, &frame), ..arrival })
}

/// `(s, φ)` of a chord state.
pub fn phase_coords<T: BilliardTable + ?Sized>(table: &T, c: &ChordState) -> PhasePoint {
    let s = table.arc_length_fraction(c.t);
    let (_, d1) = table.point_d1(c.t);
    let phi = cross(d1, c.direction).atan2(dot(d1, c.direction));
    PhasePoint { s, phi }
}

/// Chord state leaving the wall at arc-length fraction `s` with angle `φ`.
pub fn launch<T: BilliardTable + ?Sized>(table: &T, initial: PhasePoint) -> Result<ChordState, DynamicsError> {
    if !(initial.phi > 0.0 && initial.phi < PI) {
        return Err(DynamicsError::GrazingLaunch { angle: initial.phi });
    }
    let t = table.param_at_fraction(initial.s);
    let frame = table.frame(t)?;
    Ok(ChordState { t, point: frame.point, direction: frame.tangent * crate::planar::unit(initial.phi) })
}

/// Orbit of `n` bounces from the phase point `initial`.
pub fn simulate_birkhoff<T: BilliardTable + ?Sized>(
    table: &T,
    initial: PhasePoint,
    n: usize,
    tol: &Tolerances,
) -> Result<BirkhoffOrbit, DynamicsError> {
    let c = launch(table, initial)?;
    Ok(simulate_birkhoff_from(table, c, n, tol))
}

/// Orbit of `n` bounces from a chord state; a failing step ends the orbit
/// early with the reason recorded.
pub fn simulate_birkhoff_from<T: BilliardTable + ?Sized>(
    table: &T,
    initial: ChordState,
    n: usize,
    tol: &Tolerances,
) -> BirkhoffOrbit {
    let (states, termination) = iterate(table, initial, n, tol);
    BirkhoffOrbit::from_states(table, states, termination)
}

/// Bare chord states of an orbit, without phase coordinates.
pub fn iterate<T: BilliardTable + ?Sized>(
    table: &T,
    initial: ChordState,
    n: usize,
    tol: &Tolerances,
) -> (Vec<ChordState>, Option<Termination>) {
    let mut states = Vec::with_capacity(n + 1);
    states.push(initial);
    for i in 0..n {
        match birkhoff_step(table, &states[i], tol) {
            Ok(c) => states.push(c),
            Err(reason) => return (states, Some(Termination { after_bounce: i, reason })),
        }
    }
    (states, None)
}

/// Joachimsthal invariant `x_x v_x / A² + x_y v_y / B²` of the centered
/// ellipse with semi-axes `A`, `B`.
pub fn joachimsthal(a: f64, b: f64, x: PlanarPoint, v: PlanarPoint) -> Result<f64, DynamicsError> {
    joachimsthal_form(&SymmetricForm::diagonal(1.0 / (a * a), 1.0 / (b * b)), x, v)
}

/// `⟨Mx, v⟩` for the centered ellipse `{⟨Mx, x⟩ = 1}`.
pub fn joachimsthal_form(form: &SymmetricForm, x: PlanarPoint, v: PlanarPoint) -> Result<f64, DynamicsError> {
    let residual = (form.pair(x, x) - 1.0).abs();
    if !(residual <= 1e-9) {
        return Err(DynamicsError::PointOffEllipse { residual });
    }
    Ok(form.pair(x, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Table, TableSpec};
    use crate::planar::{normalize, pt};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, SQRT_2};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn unit_circle() -> Table {
        Table::new(TableSpec::circle(PlanarPoint::default(), 1.0)).unwrap()
    }

    #[test]
    fn chord_exit_examples() {
        let c = unit_circle();
        let s = ChordState { t: 0.0, point: pt(1.0, 0.0), direction: pt(-1.0, 0.0) };
        let a = chord_exit(&c, &s, &tol()).unwrap();
        assert!((a.point - pt(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(a.direction, s.direction);
        let s = ChordState { t: 0.0, point: pt(1.0, 0.0), direction: pt(-1.0, 1.0) / SQRT_2 };
        let a = chord_exit(&c, &s, &tol()).unwrap();
        assert!((a.point - pt(0.0, 1.0)).norm() < 1e-15);
        assert!((a.t - 0.25).abs() < 1e-15);

        let e = Table::new(TableSpec::ellipse(PlanarPoint::default(), 2.0, 1.0, 0.0)).unwrap();
        let s = ChordState { t: 0.0, point: pt(2.0, 0.0), direction: pt(-1.0, 0.0) };
        let a = chord_exit(&e, &s, &tol()).unwrap();
        assert!((a.point - pt(-2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn general_solver_matches_closed_form() {
        let spec = TableSpec::ellipse(PlanarPoint::default(), 1.7, 0.6, 0.3);
        let closed = Table::new(spec.clone()).unwrap();
        let general = Table::new(spec.to_fourier()).unwrap();
        assert!(closed.centered_form().is_some() && general.centered_form().is_none());
        let start = launch(&closed, PhasePoint { s: 0.1, phi: 1.2 }).unwrap();
        let mut a = start;
        let mut b = ChordState { t: general.locate(start.point).unwrap_or(start.t), ..start };
        for _ in 0..200 {
            a = birkhoff_step(&closed, &a, &tol()).unwrap();
            b = birkhoff_step(&general, &b, &tol()).unwrap();
            assert!((a.point - b.point).norm() < 1e-9, "{} vs {}", a.point, b.point);
        }
    }

    #[test]
    fn diameter_and_minor_axis_are_period_two() {
        let c = unit_circle();
        let orbit = simulate_birkhoff(&c, PhasePoint { s: 0.0, phi: FRAC_PI_2 }, 2, &tol()).unwrap();
        let s: Vec<f64> = orbit.phases.iter().map(|p| p.s).collect();
        assert!(s[0].abs() < 1e-12 && (s[1] - 0.5).abs() < 1e-12);
        assert!(s[2].abs() < 1e-12 || (s[2] - 1.0).abs() < 1e-12);

        let e = Table::new(TableSpec::ellipse(PlanarPoint::default(), 1.2, 0.8, 0.0)).unwrap();
        let orbit = simulate_birkhoff(&e, PhasePoint { s: 0.25, phi: FRAC_PI_2 }, 4, &tol()).unwrap();
        for (i, c) in orbit.states.iter().enumerate() {
            let expected = if i % 2 == 0 { pt(0.0, 0.8) } else { pt(0.0, -0.8) };
            assert!((c.point - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn circle_angle_is_invariant() {
        let c = unit_circle();
        let orbit = simulate_birkhoff(&c, PhasePoint { s: 0.0, phi: FRAC_PI_4 }, 1000, &tol()).unwrap();
        assert!(orbit.phases.iter().all(|p| (p.phi - FRAC_PI_4).abs() < 1e-12));
        let orbit = simulate_birkhoff(&c, PhasePoint { s: 0.0, phi: FRAC_PI_3 }, 50, &tol()).unwrap();
        for w in orbit.phases.windows(2) {
            let ds = (w[1].s - w[0].s).rem_euclid(1.0);
            assert!((ds - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn joachimsthal_examples_and_conservation() {
        assert_eq!(joachimsthal(1.0, 1.0, pt(1.0, 0.0), pt(-1.0, 0.0)).unwrap(), -1.0);
        assert_eq!(joachimsthal(1.0, 1.0, pt(-1.0, 0.0), pt(1.0, 0.0)).unwrap(), -1.0);
        assert_eq!(joachimsthal(1.0, 1.0, pt(1.0, 0.0), pt(0.0, 1.0)).unwrap(), 0.0);
        assert!(matches!(
            joachimsthal(1.0, 1.0, pt(1.1, 0.0), pt(0.0, 1.0)),
            Err(DynamicsError::PointOffEllipse { .. })
        ));

        let (a, b) = (1.2, 0.8);
        let e = Table::new(TableSpec::ellipse(PlanarPoint::default(), a, b, 0.0)).unwrap();
        let orbit = simulate_birkhoff(&e, PhasePoint { s: 0.07, phi: 0.9 }, 10_000, &tol()).unwrap();
        let j0 = joachimsthal(a, b, orbit.states[0].point, orbit.states[0].direction).unwrap();
        for c in &orbit.states {
            let j = joachimsthal(a, b, c.point, c.direction).unwrap();
            assert!((j - j0).abs() < 1e-10);
        }
    }

    #[test]
    fn phase_coords_examples() {
        let c = unit_circle();
        let p = phase_coords(&c, &ChordState { t: 0.0, point: pt(1.0, 0.0), direction: pt(-1.0, 0.0) });
        assert!(p.s.abs() < 1e-15 && (p.phi - FRAC_PI_2).abs() < 1e-15);
        let p = phase_coords(&c, &ChordState { t: 0.0, point: pt(1.0, 0.0), direction: pt(0.0, 1.0) });
        assert!(p.phi.abs() < 1e-15);
        let p = phase_coords(&c, &ChordState { t: 0.25, point: pt(0.0, 1.0), direction: pt(0.0, -1.0) });
        assert!((p.s - 0.25).abs() < 1e-14 && (p.phi - FRAC_PI_2).abs() < 1e-15);
        assert!(matches!(
            simulate_birkhoff(&c, PhasePoint { s: 0.0, phi: PI }, 3, &tol()),
            Err(DynamicsError::GrazingLaunch { .. })
        ));
    }

    #[test]
    fn reversibility() {
        let table =
            Table::new(TableSpec::fourier([(1, pt(1.0, 0.0)), (-1, pt(0.15, 0.0)), (2, pt(0.02, 0.01))])).unwrap();
        let start = launch(&table, PhasePoint { s: 0.3, phi: 1.1 }).unwrap();
        let (states, term) = iterate(&table, start, 100, &tol());
        assert!(term.is_none());
        let last = states[100];
        let arrived = states[99].direction;
        let back = ChordState { direction: -arrived, ..last };
        let (rev, term) = iterate(&table, back, 100, &tol());
        assert!(term.is_none());
        assert!((rev[100].point - start.point).norm() < 1e-8);
        assert!((normalize(rev[99].direction) + start.direction).norm() < 1e-6);
    }

    #[test]
    fn chord_midpoints_are_interior() {
        let table = Table::new(TableSpec::ellipse(pt(0.1, 0.0), 1.5, 1.0, 0.2)).unwrap();
        let orbit = simulate_birkhoff(&table, PhasePoint { s: 0.6, phi: 0.4 }, 200, &tol()).unwrap();
        for w in orbit.states.windows(2) {
            let mid = 0.5 * (w[0].point + w[1].point);
            assert_eq!(crate::geometry::winding_number(&table, mid).unwrap(), 1);
        }
    }
}
