//! Direct zero-energy Kepler billiard.
//!
//! Between bounces the particle follows a parabola with focus at the origin,
//! parameterized by true anomaly `ν` in the apse frame. The next bounce is
//! the first root, in travel direction, of the focal function
//! `F(x) = |x| + ⟨x, ê⟩ − L²` along the wall, isolated in the wall parameter.
//! Radial arcs that would fall into the origin are continued through the
//! lifted table, where the collision is a regular straight chord.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::birkhoff::chord_exit;
use crate::error::{DynamicsError, LiftError, Termination};
use crate::geometry::{BilliardTable, BoundaryFrame, Table, TableSpec};
use crate::levi_civita::{kepler_momentum, lift_launch, lift_table, BranchSign, LiftedTable, PhaseState};
use crate::planar::{cross, dot, normalize, unit, PlanarPoint};
use crate::roots::{isolate, refine, ScanOptions};
use crate::tolerances::Tolerances;

/// `|L| ≤ RADIAL_REL · |q| |p|` marks a radial arc.
const RADIAL_REL: f64 = 1e-10;

/// A zero-energy Kepler arc: a parabola focused at the origin, or a radial
/// ray when the angular momentum vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParabolicArc {
    /// `q × p`.
    pub angular_momentum: f64,
    /// Pericenter direction; for radial arcs the direction of the ray.
    pub apse: f64,
    /// Sign of `L`; for radial arcs `+1` outward and `−1` inward.
    pub orientation: i8,
    pub degenerate: bool,
    /// `e^{i apse}`, kept separately to avoid a round trip through `atan2`.
    pub apse_dir: PlanarPoint,
}

impl ParabolicArc {
    pub fn pericenter_distance(&self) -> f64 {
        0.5 * self.angular_momentum * self.angular_momentum
    }

    /// Anomaly of a point on the arc: true anomaly, or the radial coordinate
    /// for radial arcs.
    pub fn anomaly_of(&self, q: PlanarPoint) -> f64 {
        if self.degenerate {
            dot(self.apse_dir, q)
        } else {
            cross(self.apse_dir, q).atan2(dot(self.apse_dir, q))
        }
    }
}

/// Per-bounce diagnostic values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BounceDiagnostics {
    /// `|H(q, p)|` of the arriving state.
    pub energy_residual: f64,
    /// `q × p` of the outgoing state.
    pub angular_momentum: f64,
}

impl BounceDiagnostics {
    pub(crate) fn of(s: &PhaseState) -> Self {
        Self { energy_residual: s.hamiltonian().abs(), angular_momentum: s.angular_momentum() }
    }
}

/// One bounce of a Kepler billiard orbit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BounceRecord {
    pub t: f64,
    pub point: PlanarPoint,
    /// Unit arriving direction; for the launch record, the mirror image of
    /// the outgoing direction.
    pub incoming: PlanarPoint,
    pub outgoing: PlanarPoint,
    /// Arc leaving this bounce.
    pub arc: ParabolicArc,
    pub diagnostics: BounceDiagnostics,
}

impl BounceRecord {
    /// Outgoing momentum on the zero-energy shell.
    pub fn momentum(&self) -> PlanarPoint {
        self.outgoing * (2.0 / self.point.norm()).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KeplerOrbit {
    pub table: TableSpec,
    pub bounces: Vec<BounceRecord>,
    pub termination: Option<Termination>,
}

/// `(q, p) ↦` the arc through it. Requires `|H| ≤ tol.energy`.
pub fn arc_from_state(s: &PhaseState, tol: &Tolerances) -> Result<ParabolicArc, DynamicsError> {
    let r = s.q.norm();
    if r < 1e-12 {
        return Err(DynamicsError::CollisionState { modulus: r });
    }
    let h = s.hamiltonian();
    if !(h.abs() <= tol.energy) {
        return Err(DynamicsError::NotZeroEnergy { residual: h.abs() });
    }
    let l = s.angular_momentum();
    if l.abs() <= RADIAL_REL * r * s.p.norm() {
        let orientation = if dot(s.q, s.p) >= 0.0 { 1 } else { -1 };
        let dir = s.q / r;
        return Ok(ParabolicArc { angular_momentum: l, apse: dir.arg(), orientation, degenerate: true, apse_dir: dir });
    }
    let e = (s.p.norm_sqr() - 1.0 / r) * s.q - dot(s.q, s.p) * s.p;
    let dir = normalize(e);
    Ok(ParabolicArc {
        angular_momentum: l,
        apse: dir.arg(),
        orientation: if l > 0.0 { 1 } else { -1 },
        degenerate: false,
        apse_dir: dir,
    })
}

/// State on the arc at anomaly `ν` (radial coordinate for radial arcs).
pub fn arc_eval(arc: &ParabolicArc, nu: f64) -> Result<PhaseState, DynamicsError> {
    if arc.degenerate {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(DynamicsError::DomainError { nu });
        }
        let q = arc.apse_dir * nu;
        let p = arc.apse_dir * (f64::from(arc.orientation) * (2.0 / nu).sqrt());
        return Ok(PhaseState::new(q, p));
    }
    if !(nu > -PI && nu < PI) {
        return Err(DynamicsError::DomainError { nu });
    }
    let l = arc.angular_momentum;
    let (s, c) = nu.sin_cos();
    let r = l * l / (1.0 + c);
    let rot = arc.apse_dir * unit(nu);
    let q = rot * r;
    let p = rot * PlanarPoint::new(s, 1.0 + c) / l;
    Ok(PhaseState::new(q, p))
}

/// Focal coordinates of a wall point `x` relative to an arc with apse
/// direction `e`: `(x', y', |x|, F)` where `x = x' e + y' ie` and
/// `F = |x| + x'`, evaluated without cancellation.
#[inline]
fn focal(e: PlanarPoint, x: PlanarPoint) -> (f64, f64, f64, f64) {
    let xp = dot(e, x);
    let yp = cross(e, x);
    let r = x.norm();
    let f = if xp <= 0.0 { yp * yp / (r - xp) } else { r + xp };
    (xp, yp, r, f)
}

/// First wall intersection after `nu_start` in travel direction; returns
/// `(ν*, t*)`.
pub fn next_wall_intersection<T: BilliardTable + ?Sized>(
    arc: &ParabolicArc,
    table: &T,
    nu_start: f64,
    tol: &Tolerances,
) -> Result<(f64, f64), DynamicsError> {
    if arc.degenerate {
        return next_radial_intersection(arc, table, nu_start, tol);
    }
    let start = arc_eval(arc, nu_start)?.q;
    intersection_after(arc, table, nu_start, start, None, tol)
}

/// [`next_wall_intersection`] with the start point, and optionally its wall
/// parameter, given: on thin parabolas `arc_eval` near `ν = ±π` is too
/// coarse to recognize the root at the start. The bracket holding
/// `start_t` is skipped without refinement.
fn intersection_after<T: BilliardTable + ?Sized>(
    arc: &ParabolicArc,
    table: &T,
    nu_start: f64,
    start: PlanarPoint,
    start_t: Option<f64>,
    tol: &Tolerances,
) -> Result<(f64, f64), DynamicsError> {
    let e = arc.apse_dir;
    let l2 = arc.angular_momentum * arc.angular_momentum;
    let b = table.bounds();
    let period = table.period();
    let g = |t: f64| {
        let (x, d1) = table.point_d1(t);
        let (_, yp, r, f) = focal(e, x);
        let grad = (e * f + e * PlanarPoint::i() * yp) / r;
        (f - l2, dot(grad, d1))
    };
    let m2 = 2.0 * b.accel + b.speed * b.speed / b.radius_min;
    let scan = isolate(g, 0.0, period, m2, scan_options(period));

    let sigma = f64::from(arc.orientation);
    let exclude = 1e-9 * b.diameter;
    let anomaly = |t: f64| {
        let (xp, yp, _, _) = focal(e, table.point(t));
        yp.atan2(xp)
    };
    let start_t = start_t.map(|t| t.rem_euclid(period));
    let mut best: Option<(f64, f64, f64)> = None;
    for br in &scan.brackets {
        if start_t.is_some_and(|s| br.holds(s, 1e-12 * period)) {
            continue;
        }
        let t = refine(g, *br, tol.root * period);
        if (table.point(t) - start).norm() <= exclude {
            continue;
        }
        let nu = anomaly(t);
        let ahead = sigma * (nu - nu_start);
        if ahead > 0.0 && best.map_or(true, |(a, _, _)| ahead < a) {
            best = Some((ahead, nu, t));
        }
    }
    let (ahead, nu, t) = best.ok_or(DynamicsError::NoIntersection)?;
    for &touch in &scan.touches {
        if (table.point(touch) - start).norm() <= exclude {
            continue;
        }
        let a = sigma * (anomaly(touch) - nu_start);
        if a > 0.0 && a < ahead {
            return Err(DynamicsError::TangencyDetected { t: touch, sine: 0.0 });
        }
    }
    let (x, d1) = table.point_d1(t);
    let (_, yp, r, f) = focal(e, x);
    let grad = (e * f + e * PlanarPoint::i() * yp) / r;
    let sine = dot(grad, d1).abs() / (grad.norm() * d1.norm());
    if sine < tol.transversality {
        return Err(DynamicsError::TangencyDetected { t, sine });
    }
    Ok((nu, t))
}

fn scan_options(period: f64) -> ScanOptions {
    ScanOptions { initial_intervals: (8.0 * period) as usize, min_width: 1e-10 * period }
}

fn next_radial_intersection<T: BilliardTable + ?Sized>(
    arc: &ParabolicArc,
    table: &T,
    rho_start: f64,
    tol: &Tolerances,
) -> Result<(f64, f64), DynamicsError> {
    let u = arc.apse_dir;
    let b = table.bounds();
    let period = table.period();
    let f = |t: f64| {
        let (x, d1) = table.point_d1(t);
        (cross(u, x), cross(u, d1))
    };
    let scan = isolate(f, 0.0, period, b.accel, scan_options(period));
    let exclude = 1e-9 * b.diameter;
    let mut best: Option<(f64, f64)> = None;
    for br in &scan.brackets {
        let t = refine(f, *br, tol.root * period);
        let rho = dot(u, table.point(t));
        if rho <= 0.0 || (rho - rho_start).abs() <= exclude {
            continue;
        }
        let ahead = f64::from(arc.orientation) * (rho - rho_start);
        if ahead > 0.0 && best.map_or(true, |(a, _)| ahead < a) {
            best = Some((ahead, t));
        }
    }
    match best {
        Some((ahead, t)) => {
            let (_, d1) = table.point_d1(t);
            let sine = cross(u, d1).abs() / d1.norm();
            if sine < tol.transversality {
                return Err(DynamicsError::TangencyDetected { t, sine });
            }
            Ok((rho_start + f64::from(arc.orientation) * ahead, t))
        }
        None if arc.orientation < 0 => Err(DynamicsError::CollisionReached),
        None => Err(DynamicsError::NoIntersection),
    }
}

/// Elastic reflection `v − 2⟨v, n⟩ n` in the wall with the given frame.
pub fn reflect(v: PlanarPoint, frame: &BoundaryFrame) -> PlanarPoint {
    let n = frame.normal;
    v - n * (2.0 * dot(v, n))
}

/// A wall together with tolerances and a lazily built lift, which the
/// direct stepper uses to continue radial collision arcs.
#[derive(Debug)]
pub struct KeplerBilliard {
    table: Table,
    tol: Tolerances,
    lifted: OnceLock<Result<LiftedTable, LiftError>>,
}

impl Clone for KeplerBilliard {
    fn clone(&self) -> Self {
        let lifted = OnceLock::new();
        if let Some(l) = self.lifted.get() {
            let _ = lifted.set(l.clone());
        }
        Self { table: self.table.clone(), tol: self.tol, lifted }
    }
}

impl KeplerBilliard {
    pub fn new(table: Table) -> Self {
        Self::with_tolerances(table, Tolerances::default())
    }

    pub fn with_tolerances(table: Table, tol: Tolerances) -> Self {
        Self { table, tol, lifted: OnceLock::new() }
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// The lifted table, built on first use.
    pub fn lifted(&self) -> Result<&LiftedTable, LiftError> {
        self.lifted.get_or_init(|| lift_table(&self.table)).as_ref().map_err(Clone::clone)
    }

    /// Launch record at wall parameter `t` with outgoing direction at
    /// `angle ∈ (0, π)` from the tangent.
    pub fn launch(&self, t: f64, angle: f64) -> Result<BounceRecord, DynamicsError> {
        if !(angle > 0.0 && angle < PI) {
            return Err(DynamicsError::GrazingLaunch { angle });
        }
        let frame = self.table.frame(t)?;
        let dir = frame.tangent * unit(angle);
        let q = frame.point;
        let p = dir * (2.0 / q.norm()).sqrt();
        let state = PhaseState::new(q, p);
        let arc = arc_from_state(&state, &self.tol)?;
        Ok(BounceRecord {
            t: frame.t.rem_euclid(1.0),
            point: q,
            incoming: reflect(dir, &frame),
            outgoing: dir,
            arc,
            diagnostics: BounceDiagnostics::of(&state),
        })
    }

    /// One application of the billiard map.
    pub fn step(&self, bounce: &BounceRecord) -> Result<BounceRecord, DynamicsError> {
        let frame = self.table.frame(bounce.t)?;
        let inward = -dot(bounce.outgoing, frame.normal);
        if !(inward > 1e-10) {
            return Err(DynamicsError::GrazingLaunch { angle: frame.departure_angle(bounce.outgoing) });
        }
        let arc = &bounce.arc;
        let nu_start = arc.anomaly_of(bounce.point);
        let next = if arc.degenerate {
            next_radial_intersection(arc, &self.table, nu_start, &self.tol)
        } else {
            intersection_after(arc, &self.table, nu_start, bounce.point, Some(bounce.t), &self.tol)
        };
        let (t, q, p_in) = match next {
            Ok((_, t)) => {
                let q = self.table.point(t);
                let p_in = if arc.degenerate {
                    arc.apse_dir * (f64::from(arc.orientation) * (2.0 / q.norm()).sqrt())
                } else {
                    arriving_momentum(arc, q)
                };
                (t, q, p_in)
            }
            Err(DynamicsError::CollisionReached) => self.through_collision(bounce)?,
            Err(e) => return Err(e),
        };
        let frame = self.table.frame(t)?;
        let p_out = reflect(p_in, &frame);
        let arrival = PhaseState::new(q, p_in);
        let departure = PhaseState::new(q, p_out);
        let arc = arc_from_state(&departure, &self.tol)?;
        Ok(BounceRecord {
            t,
            point: q,
            incoming: normalize(p_in),
            outgoing: normalize(p_out),
            arc,
            diagnostics: BounceDiagnostics {
                energy_residual: arrival.hamiltonian().abs(),
                angular_momentum: departure.angular_momentum(),
            },
        })
    }

    /// Continues a collision arc as a straight chord of the lifted table.
    fn through_collision(&self, bounce: &BounceRecord) -> Result<(f64, PlanarPoint, PlanarPoint), DynamicsError> {
        let lifted = self.lifted()?;
        let start = lift_launch(lifted, bounce.t, bounce.outgoing, BranchSign::Plus);
        let arrival = chord_exit(lifted, &start, &self.tol)?;
        let t = arrival.t.rem_euclid(1.0);
        let z = arrival.point;
        Ok((t, self.table.point(t), kepler_momentum(z, arrival.direction)))
    }

    /// Launches at `(t, angle)` and iterates `n` bounces; a failing step
    /// ends the orbit early with the reason recorded.
    pub fn simulate(&self, t: f64, angle: f64, n: usize) -> Result<KeplerOrbit, DynamicsError> {
        let first = self.launch(t, angle)?;
        Ok(self.simulate_from(first, n))
    }

    pub fn simulate_from(&self, first: BounceRecord, n: usize) -> KeplerOrbit {
        let mut bounces = Vec::with_capacity(n + 1);
        bounces.push(first);
        let mut termination = None;
        for i in 0..n {
            match self.step(&bounces[i]) {
                Ok(b) => bounces.push(b),
                Err(reason) => {
                    termination = Some(Termination { after_bounce: i, reason });
                    break;
                }
            }
        }
        KeplerOrbit { table: self.table.spec().clone(), bounces, termination }
    }
}

/// Momentum on the arc at the wall point `q`: the parabola's unit tangent
/// `ê(−y' + iF)` (oriented by the sign of `L`) times `√(2/r)`. Dividing by
/// `rL` instead is exact on the parabola but, for near-collision arcs, turns
/// the ulp-level position error of the root into an energy error of order
/// `ε r / L`.
fn arriving_momentum(arc: &ParabolicArc, q: PlanarPoint) -> PlanarPoint {
    let e = arc.apse_dir;
    let (_, yp, r, f) = focal(e, q);
    let tangent = e * PlanarPoint::new(-yp, f) * arc.angular_momentum.signum();
    tangent * ((2.0 / r).sqrt() / tangent.norm())
}

pub fn kepler_step(billiard: &KeplerBilliard, bounce: &BounceRecord) -> Result<BounceRecord, DynamicsError> {
    billiard.step(bounce)
}

/// Orbit of `n` bounces from the launch `(t, angle)`.
pub fn simulate_kepler(billiard: &KeplerBilliard, initial: (f64, f64), n: usize) -> Result<KeplerOrbit, DynamicsError> {
    billiard.simulate(initial.0, initial.1, n)
}
