//! Direct Kepler simulation against lift, Birkhoff, project.

use serde::Serialize;

use crate::birkhoff::{birkhoff_step, iterate, ChordState};
use crate::error::{DynamicsError, LiftError, Termination};
use crate::geometry::BilliardTable;
use crate::kepler::KeplerBilliard;
use crate::levi_civita::{kepler_momentum, lift_launch, lift_states, BranchSign};
use crate::planar::PlanarPoint;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjugacyReport {
    /// Bounces of the direct orbit.
    pub bounces: usize,
    /// Per bounce `k ≥ 1`, `|q_k − z'²|` where `z'` ends the lifted chord
    /// from the lift of bounce `k − 1`; entry 0 is `|q_0 − z_0²|`.
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    /// Per bounce, `|Kepler-side − lifted-side|` incidence angle over the
    /// same chords (departure angle for the launch).
    pub conformal_errors: Vec<f64>,
    pub max_conformal_error: f64,
    /// Largest `|angle in − angle out|` on the Kepler side.
    pub max_reflection_error_kepler: f64,
    /// Largest `|angle in − angle out|` on the lifted side.
    pub max_reflection_error_lifted: f64,
    /// Whether both branch lifts of every bounce project to bit-identical
    /// Kepler states.
    pub negation_exact: bool,
    /// Largest `|B(−c) + B(c)|` over every [`ANTIPODAL_STRIDE`]-th lifted
    /// chord `c`, starting with the launch.
    pub max_antipodal_deviation: f64,
    /// `|q_k − z_k²|` against a lifted orbit iterated on its own from the
    /// lifted launch. On chaotic tables this grows at the Lyapunov rate.
    pub free_deviations: Vec<f64>,
    pub max_free_deviation: f64,
    /// Failure to lift the direct orbit as one continuous chord sequence.
    pub lift_error: Option<String>,
    /// First lifted chord that failed where the direct step succeeded.
    pub step_failure: Option<Termination>,
    pub direct_termination: Option<Termination>,
    /// Termination of the free-running lifted orbit.
    pub lifted_termination: Option<Termination>,
}

impl ConjugacyReport {
    /// Every direct bounce has a lifted counterpart and the direct orbit
    /// lifts continuously.
    pub fn consistent(&self) -> bool {
        self.lift_error.is_none() && self.step_failure.is_none()
    }
}

/// Spacing of the lifted chords whose antipodal step is also taken.
pub const ANTIPODAL_STRIDE: usize = 8;

fn negate(c: &ChordState) -> ChordState {
    ChordState { t: (c.t + 1.0).rem_euclid(2.0), point: -c.point, direction: -c.direction }
}

fn same(u: PlanarPoint, v: PlanarPoint) -> bool {
    u.re.to_bits() == v.re.to_bits() && u.im.to_bits() == v.im.to_bits()
}

/// Runs `n` bounces from `(t0, angle)` directly and checks every bounce
/// against lift, one Birkhoff chord, project; also iterates the lifted
/// launch on its own for comparison.
pub fn conjugacy_check(
    billiard: &KeplerBilliard,
    t0: f64,
    angle: f64,
    n: usize,
) -> Result<ConjugacyReport, DynamicsError> {
    let tol = billiard.tolerances();
    let table = billiard.table();
    let lifted = billiard.lifted()?;
    let direct = billiard.simulate(t0, angle, n)?;
    let bounces = &direct.bounces;

    let lifts: Vec<ChordState> =
        bounces.iter().map(|b| lift_launch(lifted, b.t, b.outgoing, BranchSign::Plus)).collect();
    let mut deviations = vec![(bounces[0].point - lifts[0].point * lifts[0].point).norm()];
    let launch_frame = lifted.frame(lifts[0].t)?;
    let mut conformal_errors = vec![(table.frame(bounces[0].t)?.departure_angle(bounces[0].outgoing)
        - launch_frame.departure_angle(lifts[0].direction))
    .abs()];
    let (mut refl_k, mut refl_l, mut antipodal) = (0.0f64, 0.0f64, 0.0f64);
    let mut negation_exact = true;
    let mut step_failure = None;
    for (k, c) in lifts.iter().enumerate() {
        let z = c.point;
        let neg = negate(c);
        negation_exact &= same(neg.point * neg.point, z * z)
            && same(kepler_momentum(neg.point, neg.direction), kepler_momentum(z, c.direction));
        let Some(b) = bounces.get(k + 1) else { break };
        let next = match birkhoff_step(lifted, c, tol) {
            Ok(next) => next,
            Err(reason) => {
                step_failure = Some(Termination { after_bounce: k, reason });
                break;
            }
        };
        if k % ANTIPODAL_STRIDE == 0 {
            if let Ok(opposite) = birkhoff_step(lifted, &neg, tol) {
                antipodal = antipodal.max((opposite.point + next.point).norm());
            }
        }
        deviations.push((b.point - next.point * next.point).norm());
        let kf = table.frame(b.t)?;
        let lf = lifted.frame(next.t)?;
        let kepler_in = kf.arrival_angle(b.incoming);
        let lifted_in = lf.arrival_angle(c.direction);
        conformal_errors.push((kepler_in - lifted_in).abs());
        refl_k = refl_k.max((kepler_in - kf.departure_angle(b.outgoing)).abs());
        refl_l = refl_l.max((lifted_in - lf.departure_angle(next.direction)).abs());
    }

    let (free, lifted_termination) = iterate(lifted, lifts[0], n, tol);
    let free_deviations: Vec<f64> =
        bounces.iter().zip(&free).map(|(b, c)| (b.point - c.point * c.point).norm()).collect();
    let lift_error = lift_states(&direct, lifted, BranchSign::Plus).err().map(|e: LiftError| e.to_string());
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    Ok(ConjugacyReport {
        bounces: bounces.len() - 1,
        max_deviation: max(&deviations),
        deviations,
        max_conformal_error: max(&conformal_errors),
        conformal_errors,
        max_reflection_error_kepler: refl_k,
        max_reflection_error_lifted: refl_l,
        negation_exact,
        max_antipodal_deviation: antipodal,
        max_free_deviation: max(&free_deviations),
        free_deviations,
        lift_error,
        step_failure,
        direct_termination: direct.termination,
        lifted_termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Table, TableSpec};
    use crate::planar::pt;

    #[test]
    fn focused_ellipse_routes_agree() {
        let billiard = KeplerBilliard::new(Table::new(TableSpec::focused_ellipse(1.2, 0.8)).unwrap());
        let r = conjugacy_check(&billiard, 0.21, 1.1, 200).unwrap();
        assert!(r.consistent(), "{r:?}");
        assert_eq!(r.bounces, 200);
        assert!(r.max_deviation < 1e-8, "{}", r.max_deviation);
        assert!(r.max_conformal_error < 1e-9);
        assert!(r.max_reflection_error_kepler < 1e-12 && r.max_reflection_error_lifted < 1e-12);
        assert!(r.negation_exact);
        assert!(r.max_antipodal_deviation < 1e-10);
        assert!(r.max_free_deviation < 1e-8, "{}", r.max_free_deviation);
        assert!(r.lifted_termination.is_none());
    }

    #[test]
    fn single_bounce_agrees() {
        let billiard = KeplerBilliard::new(Table::new(TableSpec::focused_ellipse(1.2, 0.8)).unwrap());
        let r = conjugacy_check(&billiard, 0.6, 2.0, 1).unwrap();
        assert_eq!(r.bounces, 1);
        assert!(r.max_deviation < 1e-12);
    }

    #[test]
    fn perturbed_table_routes_agree() {
        // the square of a slightly perturbed centered ellipse
        let lift = [(1, pt(1.0, 0.0)), (-1, pt(0.2, 0.0)), (3, pt(0.01, 0.005))];
        let mut coeffs = std::collections::BTreeMap::new();
        for &(j, a) in &lift {
            for &(k, b) in &lift {
                *coeffs.entry((j + k) / 2).or_insert(PlanarPoint::default()) += a * b;
            }
        }
        let table = Table::new(TableSpec::fourier(coeffs)).unwrap();
        let billiard = KeplerBilliard::new(table);
        let r = conjugacy_check(&billiard, 0.05, 0.8, 200).unwrap();
        assert!(r.consistent(), "{r:?}");
        assert!(r.max_deviation < 1e-8, "{}", r.max_deviation);
        assert!(r.max_conformal_error < 1e-9);
    }
}
