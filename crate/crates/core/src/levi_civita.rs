//! The Levi-Civita correspondence between zero-energy Kepler motion and free
//! motion.
//!
//! On states, `(z, w) ↦ (q, p) = (z², w / (2 z̄))` carries the energy-1
//! surface of `|w|²/8` onto the zero-energy surface of `|p|²/2 − 1/|q|`. On
//! walls, the square root of a table containing the origin is a centrally
//! symmetric curve traversed once while the original is traversed twice. On
//! orbits, every Kepler billiard orbit has exactly two lifts, negatives of
//! each other.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};

use crate::birkhoff::{BirkhoffOrbit, ChordState, PhasePoint};
use crate::error::{DynamicsError, LiftError};
use crate::geometry::{distance_to_wall, winding_number, BilliardTable, CurveBounds, OrbitTable, SymmetricForm, Table};
use crate::kepler::{arc_from_state, reflect, BounceDiagnostics, BounceRecord, KeplerOrbit};
use crate::planar::{cross, dot, normalize, principal_sqrt, PlanarPoint};
use crate::quadrature::ArcLengthTable;
use crate::tolerances::Tolerances;

/// Kepler-side state `(q, p)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseState {
    pub q: PlanarPoint,
    pub p: PlanarPoint,
}

impl PhaseState {
    pub fn new(q: PlanarPoint, p: PlanarPoint) -> Self {
        Self { q, p }
    }

    /// `H(p, q) = |p|²/2 − 1/|q|`.
    pub fn hamiltonian(&self) -> f64 {
        0.5 * self.p.norm_sqr() - 1.0 / self.q.norm()
    }

    /// Angular momentum `q × p`.
    pub fn angular_momentum(&self) -> f64 {
        cross(self.q, self.p)
    }
}

/// Lifted state `(z, w)` of the free-motion Hamiltonian `|w|²/8`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LiftedState {
    pub z: PlanarPoint,
    pub w: PlanarPoint,
}

impl LiftedState {
    pub fn new(z: PlanarPoint, w: PlanarPoint) -> Self {
        Self { z, w }
    }

    /// `|w|²/8`; equal to 1 on lifts of zero-energy states.
    pub fn energy(&self) -> f64 {
        self.w.norm_sqr() / 8.0
    }
}

/// Which of the two square roots to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BranchSign {
    Plus,
    Minus,
}

impl BranchSign {
    pub fn sign(self) -> f64 {
        match self {
            BranchSign::Plus => 1.0,
            BranchSign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            BranchSign::Plus => BranchSign::Minus,
            BranchSign::Minus => BranchSign::Plus,
        }
    }
}

/// `(z, w) ↦ (z², w / (2 z̄))`.
pub fn project_state(l: &LiftedState) -> Result<PhaseState, LiftError> {
    let modulus = l.z.norm();
    if modulus < 1e-14 {
        return Err(LiftError::OriginSingularity { modulus });
    }
    // w / (2 z̄) = w z / (2 |z|²)
    let p = l.w * l.z / (2.0 * l.z.norm_sqr());
    Ok(PhaseState { q: l.z * l.z, p })
}

/// Inverse of [`project_state`] on the branch `b`: `z = ±√q`, `w = 2 z̄ p`.
pub fn lift_state(s: &PhaseState, b: BranchSign) -> Result<LiftedState, LiftError> {
    let modulus = s.q.norm();
    if modulus < 1e-14 {
        return Err(LiftError::OriginSingularity { modulus });
    }
    let z = principal_sqrt(s.q) * b.sign();
    Ok(LiftedState { z, w: 2.0 * z.conj() * s.p })
}

/// Kepler momentum of the unit lifted direction `d` at `z`: the projection
/// of `w = 2√2 d`.
pub(crate) fn kepler_momentum(z: PlanarPoint, d: PlanarPoint) -> PlanarPoint {
    std::f64::consts::SQRT_2 * d * z / z.norm_sqr()
}

/// Unit lifted direction of the Kepler momentum `p` at the lifted point `z`.
pub(crate) fn lifted_direction(z: PlanarPoint, p: PlanarPoint) -> PlanarPoint {
    normalize(z.conj() * p)
}

const INITIAL_CELLS: usize = 4096;
const MAX_CELLS: usize = 1 << 22;
/// Fit residual below which the lift is treated as an exact centered ellipse
/// by the chord solver.
const EXACT_ELLIPSE_RESIDUAL: f64 = 1e-12;
/// Fit residual below which the lift counts as a centered ellipse for
/// Joachimsthal pullbacks.
pub const ELLIPSE_FIT_TOL: f64 = 1e-9;

/// Branch-continuous square root `γ̂` of a table, with period 2 and
/// `γ̂(t + 1) = −γ̂(t)`.
#[derive(Clone, Debug)]
pub struct LiftedTable {
    base: Table,
    /// `γ̂` at the start of each of the uniform cells covering `[0, 1)`.
    anchors: Vec<PlanarPoint>,
    bounds: CurveBounds,
    arc: ArcLengthTable,
    fit: Option<(SymmetricForm, f64)>,
    /// Unwrapped polar angles of the anchors (plus the closing angle), when
    /// the lift is star-shaped about the origin.
    polar: Option<Vec<f64>>,
}

/// Lifts a table through the complex square root by analytic continuation
/// from the principal root at `t = 0`.
pub fn lift_table(table: &Table) -> Result<LiftedTable, LiftError> {
    let distance = distance_to_wall(table, PlanarPoint::default());
    if distance < 1e-10 {
        return Err(LiftError::OriginOnBoundary { distance });
    }
    let winding = winding_number(table, PlanarPoint::default())?;
    if winding != 1 {
        return Err(LiftError::WindingMismatch { winding });
    }

    // Continuation with step doubling: a jump of more than half the modulus
    // between consecutive samples halves the step everywhere.
    let mut n = INITIAL_CELLS;
    let anchors = loop {
        let mut chain = Vec::with_capacity(n + 1);
        chain.push(principal_sqrt(table.point(0.0)));
        let mut ok = true;
        for i in 1..=n {
            let prev = chain[i - 1];
            let mut r = principal_sqrt(table.point(i as f64 / n as f64));
            if dot(r, prev) < 0.0 {
                r = -r;
            }
            if (r - prev).norm() > 0.5 * prev.norm() {
                ok = false;
                break;
            }
            chain.push(r);
        }
        if ok {
            break chain;
        }
        if n >= MAX_CELLS {
            return Err(LiftError::OriginOnBoundary { distance });
        }
        n *= 2;
    };
    if dot(anchors[n], anchors[0]) > 0.0 {
        return Err(LiftError::WindingMismatch { winding: 2 });
    }
    let closing = anchors[n];
    let mut anchors = anchors;
    anchors.truncate(n);

    let base_bounds = *table.bounds();
    let rmin = base_bounds.radius_min;
    let sqrt_rmin = rmin.sqrt();
    let bounds = CurveBounds {
        speed: base_bounds.speed / (2.0 * sqrt_rmin),
        accel: (base_bounds.accel + base_bounds.speed.powi(2) / (2.0 * rmin)) / (2.0 * sqrt_rmin),
        radius_min: sqrt_rmin,
        radius_max: base_bounds.radius_max.sqrt(),
        diameter: 2.0 * base_bounds.radius_max.sqrt(),
    };
    let arc = {
        let base = table.clone();
        ArcLengthTable::new(
            move |t| {
                let (p, d1) = base.point_d1(t);
                d1.norm() / (2.0 * p.norm().sqrt())
            },
            2.0,
        )
    };
    let mut lifted = LiftedTable { base: table.clone(), anchors, bounds, arc, fit: None, polar: None };
    lifted.fit = fit_centered_conic(&lifted);
    if lifted.fit.is_some() {
        let mut angles = Vec::with_capacity(n + 1);
        let mut prev = lifted.anchors[0].arg();
        angles.push(prev);
        for a in lifted.anchors[1..].iter().chain(std::iter::once(&closing)) {
            let step = crate::planar::wrap_angle(a.arg() - prev);
            let next = angles.last().unwrap() + step;
            angles.push(next);
            prev = a.arg();
        }
        if angles.windows(2).all(|w| w[1] > w[0]) {
            lifted.polar = Some(angles);
        }
    }
    Ok(lifted)
}

/// Least-squares fit of `{z : ⟨Mz, z⟩ = 1}` to the lifted wall; returns the
/// form and the max residual when the fit is within [`ELLIPSE_FIT_TOL`].
fn fit_centered_conic(lifted: &LiftedTable) -> Option<(SymmetricForm, f64)> {
    let m = 512;
    let pts: Vec<PlanarPoint> = (0..m).map(|j| lifted.point(j as f64 / m as f64)).collect();
    let a = DMatrix::from_fn(m, 3, |i, c| {
        let z = pts[i];
        match c {
            0 => z.re * z.re,
            1 => z.im * z.im,
            _ => 2.0 * z.re * z.im,
        }
    });
    let b = DVector::from_element(m, 1.0);
    let sol = a.svd(true, true).solve(&b, 1e-15).ok()?;
    let form = SymmetricForm { xx: sol[0], yy: sol[1], xy: sol[2] };
    if !form.is_positive_definite() {
        return None;
    }
    let residual = pts.iter().map(|z| (form.pair(*z, *z) - 1.0).abs()).fold(0.0, f64::max);
    (residual < ELLIPSE_FIT_TOL).then_some((form, residual))
}

impl LiftedTable {
    pub fn base(&self) -> &Table {
        &self.base
    }

    /// Number of continuation cells on `[0, 1)`.
    pub fn cells(&self) -> usize {
        self.anchors.len()
    }

    /// `(M, residual)` when the lift is an origin-centered ellipse within
    /// [`ELLIPSE_FIT_TOL`].
    pub fn centered_fit(&self) -> Option<(SymmetricForm, f64)> {
        self.fit
    }

    /// `γ̂` on one sheet: `u ∈ [0, 1)`, `sheet` 0 or 1.
    pub fn sheet_point(&self, u: f64, sheet: u8) -> PlanarPoint {
        let r = self.root_at(u, self.base.point(u));
        if sheet == 0 {
            r
        } else {
            -r
        }
    }

    fn root_at(&self, u: f64, g: PlanarPoint) -> PlanarPoint {
        let n = self.anchors.len();
        let cell = ((u * n as f64) as usize).min(n - 1);
        let r = principal_sqrt(g);
        if dot(r, self.anchors[cell]) < 0.0 {
            -r
        } else {
            r
        }
    }

    fn split(t: f64) -> (f64, f64) {
        let t2 = t.rem_euclid(2.0);
        if t2 >= 1.0 {
            (t2 - 1.0, -1.0)
        } else {
            (t2, 1.0)
        }
    }

    /// Parameter on `[0, 2)` of the lifted point `z` over the base
    /// parameter `t_base`: whichever sheet is closer to `z`.
    pub fn lifted_param(&self, t_base: f64, z: PlanarPoint) -> f64 {
        let u = t_base.rem_euclid(1.0);
        if dot(self.sheet_point(u, 0), z) >= 0.0 {
            u
        } else {
            u + 1.0
        }
    }

    /// Lifted wall curvature sampled on `n` points of `[0, 1)` (the other
    /// sheet has identical curvature).
    pub fn curvature_samples(&self, n: usize) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..n).map(move |i| {
            let t = i as f64 / n as f64;
            let [_, d1, d2] = self.point_d2(t);
            (t, cross(d1, d2) / d1.norm().powi(3))
        })
    }
}

impl BilliardTable for LiftedTable {
    fn period(&self) -> f64 {
        2.0
    }

    fn point(&self, t: f64) -> PlanarPoint {
        let (u, s) = Self::split(t);
        self.root_at(u, self.base.point(u)) * s
    }

    fn point_d1(&self, t: f64) -> (PlanarPoint, PlanarPoint) {
        let (u, s) = Self::split(t);
        let (g, g1) = self.base.point_d1(u);
        let z = self.root_at(u, g) * s;
        (z, g1 / (2.0 * z))
    }

    fn point_d2(&self, t: f64) -> [PlanarPoint; 3] {
        let (u, s) = Self::split(t);
        let [g, g1, g2] = self.base.point_d2(u);
        let z = self.root_at(u, g) * s;
        let z1 = g1 / (2.0 * z);
        let z2 = (g2 - 2.0 * z1 * z1) / (2.0 * z);
        [z, z1, z2]
    }

    fn bounds(&self) -> &CurveBounds {
        &self.bounds
    }

    fn arc_length_fraction(&self, t: f64) -> f64 {
        let base = &self.base;
        self.arc.fraction(
            |u| {
                let (p, d1) = base.point_d1(u);
                d1.norm() / (2.0 * p.norm().sqrt())
            },
            t,
        )
    }

    fn param_at_fraction(&self, s: f64) -> f64 {
        let base = &self.base;
        self.arc.param_at_fraction(
            |u| {
                let (p, d1) = base.point_d1(u);
                d1.norm() / (2.0 * p.norm().sqrt())
            },
            s,
        )
    }

    fn centered_form(&self) -> Option<SymmetricForm> {
        match (self.fit, &self.polar) {
            (Some((form, residual)), Some(_)) if residual < EXACT_ELLIPSE_RESIDUAL => Some(form),
            _ => None,
        }
    }

    fn locate(&self, p: PlanarPoint) -> Option<f64> {
        let angles = self.polar.as_ref()?;
        let n = self.anchors.len();
        let theta0 = angles[0];
        let mut th = theta0 + (p.arg() - theta0).rem_euclid(TAU);
        let mut sheet = 0.0;
        if th >= theta0 + PI {
            th -= PI;
            sheet = 1.0;
        }
        let i = match angles.binary_search_by(|a| a.partial_cmp(&th).unwrap()) {
            Ok(i) => i.min(n - 1),
            Err(i) => i.saturating_sub(1).min(n - 1),
        };
        let frac = ((th - angles[i]) / (angles[i + 1] - angles[i])).clamp(0.0, 1.0);
        let mut t = sheet + (i as f64 + frac) / n as f64;
        for _ in 0..8 {
            let (z, z1) = self.point_d1(t);
            let f = cross(z, p);
            let df = cross(z1, p);
            if df == 0.0 {
                break;
            }
            let step = f / df;
            t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        Some(t.rem_euclid(2.0))
    }

    fn orbit_table(&self) -> OrbitTable {
        OrbitTable::Lifted(self.base.spec().clone())
    }
}

/// Lifts a Kepler billiard orbit to the two centrally symmetric Birkhoff
/// orbits over it. The first returned orbit starts on branch `b0`; the
/// second is its pointwise negation.
///
/// Each lifted chord starts where the previous one ended: of the two roots
/// of the next bounce point, the one on the forward ray of the current
/// lifted direction is taken.
pub fn lift_orbit(
    orbit: &KeplerOrbit,
    lifted: &LiftedTable,
    b0: BranchSign,
) -> Result<(BirkhoffOrbit, BirkhoffOrbit), LiftError> {
    let states = lift_states(orbit, lifted, b0)?;
    let first = BirkhoffOrbit::from_states(lifted, states, orbit.termination.clone());
    let second = first.negated(lifted);
    Ok((first, second))
}

/// Chord states of the lift of `orbit` on branch `b0`, without phase
/// coordinates.
pub fn lift_states(orbit: &KeplerOrbit, lifted: &LiftedTable, b0: BranchSign) -> Result<Vec<ChordState>, LiftError> {
    const MATCH_TOL: f64 = 1e-10;
    let mut states: Vec<ChordState> = Vec::with_capacity(orbit.bounces.len());
    let Some(first) = orbit.bounces.first() else { return Ok(states) };
    let mut z = principal_sqrt(first.point) * b0.sign();
    for (i, bounce) in orbit.bounces.iter().enumerate() {
        if let Some(prev) = states.last() {
            let root = principal_sqrt(bounce.point);
            let mut best: Option<(f64, PlanarPoint)> = None;
            for cand in [root, -root] {
                if dot(cand - prev.point, prev.direction) <= 0.0 {
                    continue;
                }
                let off = cross(prev.direction, cand - prev.point).abs();
                if best.map_or(true, |(o, _)| off < o) {
                    best = Some((off, cand));
                }
            }
            let (mismatch, cand) = best.ok_or(LiftError::BranchDiscontinuity { bounce: i, mismatch: f64::INFINITY })?;
            if mismatch > MATCH_TOL * cand.norm().max(1.0) {
                return Err(LiftError::BranchDiscontinuity { bounce: i, mismatch });
            }
            z = cand;
        }
        let direction = lifted_direction(z, bounce.outgoing);
        states.push(ChordState { t: lifted.lifted_param(bounce.t, z), point: z, direction });
    }
    Ok(states)
}

/// Projects a Birkhoff orbit of a lifted table to the Kepler billiard orbit
/// below it.
pub fn project_orbit(orbit: &BirkhoffOrbit, lifted: &LiftedTable) -> Result<KeplerOrbit, LiftError> {
    if !matches!(orbit.table, OrbitTable::Lifted(_)) {
        return Err(LiftError::NotLifted);
    }
    let tol = Tolerances::default();
    let mut bounces = Vec::with_capacity(orbit.states.len());
    for (i, c) in orbit.states.iter().enumerate() {
        let z = c.point;
        let q = z * z;
        let p_out = kepler_momentum(z, c.direction);
        let p_in = if i > 0 {
            kepler_momentum(z, orbit.states[i - 1].direction)
        } else {
            let frame = lifted.base().frame(c.t.rem_euclid(1.0)).map_err(LiftError::from)?;
            reflect(p_out, &frame)
        };
        let arc = arc_from_state(&PhaseState::new(q, p_out), &tol).map_err(|e| match e {
            DynamicsError::Lift(l) => l,
            DynamicsError::Geometry(g) => LiftError::Geometry(g),
            _ => LiftError::OriginSingularity { modulus: q.norm() },
        })?;
        bounces.push(BounceRecord {
            t: c.t.rem_euclid(1.0),
            point: q,
            incoming: normalize(p_in),
            outgoing: normalize(p_out),
            arc,
            diagnostics: BounceDiagnostics::of(&PhaseState::new(q, p_out)),
        });
    }
    Ok(KeplerOrbit { table: lifted.base().spec().clone(), bounces, termination: orbit.termination.clone() })
}

/// Lifts a Kepler launch `(t, p)` on `table` to a chord state of the lifted
/// table on branch `b`.
pub fn lift_launch(lifted: &LiftedTable, t: f64, p: PlanarPoint, b: BranchSign) -> ChordState {
    let u = t.rem_euclid(1.0);
    let t_hat = match b {
        BranchSign::Plus => u,
        BranchSign::Minus => u + 1.0,
    };
    let z = lifted.point(t_hat);
    ChordState { t: t_hat, point: z, direction: lifted_direction(z, p) }
}

/// Phase coordinates `(s, φ)` of a chord state, re-exported for lifted use.
pub fn lifted_phase(lifted: &LiftedTable, c: &ChordState) -> PhasePoint {
    crate::birkhoff::phase_coords(lifted, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::TableSpec;
    use crate::planar::pt;
    use proptest::prelude::*;
    use std::f64::consts::SQRT_2;

    #[test]
    fn project_state_examples() {
        let s = project_state(&LiftedState::new(pt(1.0, 0.0), pt(0.0, 2.0 * SQRT_2))).unwrap();
        assert!((s.q - pt(1.0, 0.0)).norm() < 1e-15);
        assert!((s.p - pt(0.0, SQRT_2)).norm() < 1e-15);

        let s = project_state(&LiftedState::new(pt(0.0, 1.0), pt(2.0 * SQRT_2, 0.0))).unwrap();
        assert!((s.q - pt(-1.0, 0.0)).norm() < 1e-15);
        assert!((s.p - pt(0.0, SQRT_2)).norm() < 1e-15);
        assert!(s.hamiltonian().abs() < 1e-15);

        let s = project_state(&LiftedState::new(pt(1.0, 0.0), pt(0.0, 0.0))).unwrap();
        assert_eq!(s.p, pt(0.0, 0.0));
        assert!(matches!(
            project_state(&LiftedState::new(pt(0.0, 0.0), pt(1.0, 0.0))),
            Err(LiftError::OriginSingularity { .. })
        ));
    }

    #[test]
    fn lift_state_examples() {
        let s = PhaseState::new(pt(1.0, 0.0), pt(0.0, SQRT_2));
        let plus = lift_state(&s, BranchSign::Plus).unwrap();
        assert!((plus.z - pt(1.0, 0.0)).norm() < 1e-15);
        assert!((plus.w - pt(0.0, 2.0 * SQRT_2)).norm() < 1e-15);
        let minus = lift_state(&s, BranchSign::Minus).unwrap();
        assert!((minus.z - pt(-1.0, 0.0)).norm() < 1e-15);
        assert!((minus.w - pt(0.0, -2.0 * SQRT_2)).norm() < 1e-15);

        let s = PhaseState::new(pt(-1.0, 0.0), pt(0.0, SQRT_2));
        let l = lift_state(&s, BranchSign::Plus).unwrap();
        assert!((l.z - pt(0.0, 1.0)).norm() < 1e-15);
        assert!((l.w - pt(2.0 * SQRT_2, 0.0)).norm() < 1e-15);
    }

    proptest! {
        #[test]
        fn round_trip_and_antipodes(
            log_r in -3.0f64..3.0, th in -PI..PI, dir in -PI..PI, minus in any::<bool>()
        ) {
            let r = 10f64.powf(log_r);
            let q = crate::planar::unit(th) * r;
            let p = crate::planar::unit(dir) * (2.0 / r).sqrt();
            let s = PhaseState::new(q, p);
            let b = if minus { BranchSign::Minus } else { BranchSign::Plus };
            let l = lift_state(&s, b).unwrap();
            prop_assert!((l.energy() - 1.0).abs() < 1e-13);
            let back = project_state(&l).unwrap();
            let scale_q = r.max(1.0);
            let scale_p = p.norm().max(1.0);
            prop_assert!((back.q.re - q.re).abs() <= 1e-13 * scale_q);
            prop_assert!((back.q.im - q.im).abs() <= 1e-13 * scale_q);
            prop_assert!((back.p.re - p.re).abs() <= 1e-13 * scale_p);
            prop_assert!((back.p.im - p.im).abs() <= 1e-13 * scale_p);
            let other = lift_state(&s, b.flipped()).unwrap();
            prop_assert_eq!(other.z, -l.z);
            prop_assert_eq!(other.w, -l.w);
        }

        #[test]
        fn energy_correspondence(log_r in -3.0f64..3.0, th in -PI..PI, dir in -PI..PI, e in -1e-9f64..1e-9) {
            let r = 10f64.powf(log_r);
            let q = crate::planar::unit(th) * r;
            let speed = (2.0 * (e + 1.0 / r)).sqrt();
            let s = PhaseState::new(q, crate::planar::unit(dir) * speed);
            let l = lift_state(&s, BranchSign::Plus).unwrap();
            // |w|²/8 − 1 = |q| H
            prop_assert!(((l.energy() - 1.0) - r * s.hamiltonian()).abs() < 1e-12 * r.max(1.0));
        }
    }

    #[test]
    fn circle_lifts_to_half_radius_circle() {
        let table = Table::new(TableSpec::circle(PlanarPoint::default(), 4.0)).unwrap();
        let lifted = lift_table(&table).unwrap();
        for i in 0..40 {
            let t = i as f64 / 20.0;
            let z = lifted.point(t);
            assert!((z.norm() - 2.0).abs() < 1e-14);
            assert!((z * z - table.point(t)).norm() < 1e-13);
        }
        assert!((lifted.point(0.0) - pt(2.0, 0.0)).norm() < 1e-15);
        assert!((lifted.point(1.0) - pt(-2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn focused_ellipse_lifts_to_centered_ellipse() {
        let (a, b) = (1.2, 0.8);
        let table = Table::new(TableSpec::focused_ellipse(a, b)).unwrap();
        let lifted = lift_table(&table).unwrap();
        for i in 0..200 {
            let t = i as f64 / 100.0;
            let z = lifted.point(t);
            let expected = pt(a * (PI * t).cos(), b * (PI * t).sin());
            assert!((z - expected).norm() < 1e-14, "t={t}: {z} vs {expected}");
        }
        let (form, residual) = lifted.centered_fit().expect("lift is an ellipse");
        assert!(residual < 1e-13);
        assert!((form.xx - 1.0 / (a * a)).abs() < 1e-12);
        assert!((form.yy - 1.0 / (b * b)).abs() < 1e-12);
        assert!(form.xy.abs() < 1e-12);
        assert!(lifted.centered_form().is_some());
        for &t in &[0.0, 0.3, 0.77, 1.2, 1.9] {
            let located = lifted.locate(lifted.point(t)).unwrap();
            assert!((located - t).abs() < 1e-13, "{t} -> {located}");
        }
    }

    #[test]
    fn central_symmetry_is_exact_on_sheets() {
        let table = Table::new(TableSpec::fourier([
            (0, pt(0.2, 0.1)),
            (1, pt(1.0, 0.0)),
            (-1, pt(0.2, 0.05)),
            (3, pt(0.01, -0.02)),
        ]))
        .unwrap();
        let lifted = lift_table(&table).unwrap();
        for i in 0..1024 {
            let u = i as f64 / 1024.0;
            assert_eq!(lifted.sheet_point(u, 1), -lifted.sheet_point(u, 0));
            // dyadic shifts are exact in floating point
            assert_eq!(lifted.point(u + 1.0), -lifted.point(u));
        }
        for i in 0..997 {
            let t = i as f64 / 997.0 * 2.0;
            let z = lifted.point(t);
            assert!((z * z - table.point(t)).norm() < 1e-14);
            // continuity
            let z2 = lifted.point(t + 1e-6);
            assert!((z2 - z).norm() < 1e-4);
        }
    }

    #[test]
    fn thin_centered_ellipse_has_nonconvex_lift() {
        let table = Table::new(TableSpec::ellipse(PlanarPoint::default(), 5.0, 0.3, 0.0)).unwrap();
        let lifted = lift_table(&table).unwrap();
        let kmin = lifted.curvature_samples(4096).map(|(_, k)| k).fold(f64::INFINITY, f64::min);
        let kmax = lifted.curvature_samples(4096).map(|(_, k)| k).fold(f64::NEG_INFINITY, f64::max);
        assert!(kmin < 0.0 && kmax > 0.0, "{kmin} {kmax}");
    }
}
