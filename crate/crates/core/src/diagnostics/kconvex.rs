//! K-convexity: every focused zero-energy parabola meets the wall at most
//! twice.
//!
//! Two independent classifiers. [`check_k_convex`] looks at the sign of the
//! curvature of the square-root lift. [`brute_force_k_convex`] counts
//! intersections of the wall with focused parabolas `|x| + ⟨x, ê⟩ = ℓ` on a
//! grid of apse directions and latus values.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::LiftError;
use crate::geometry::{BilliardTable, Table};
use crate::levi_civita::{lift_table, LiftedTable};
use crate::planar::{cross, dot, unit, PlanarPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    KConvex,
    NotKConvex,
    Marginal,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::KConvex => "KConvex",
            Verdict::NotKConvex => "NotKConvex",
            Verdict::Marginal => "Marginal",
        })
    }
}

/// A focused parabola `|x| + ⟨x, e^{i apse}⟩ = ℓ` meeting the wall at least
/// three times.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub apse: f64,
    /// `ℓ`: the parabola is `r = ℓ / (1 + cos(θ − apse))`.
    pub latus: f64,
    /// Wall parameters of the transversal crossings.
    pub crossings: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KConvexVerdict {
    pub verdict: Verdict,
    /// Minimum curvature of the lifted wall (curvature classifier only).
    pub kappa_min: Option<f64>,
    /// Lifted wall parameter where the minimum is attained.
    pub kappa_argmin: Option<f64>,
    /// Half-width of the marginal band used (curvature classifier only).
    pub threshold: Option<f64>,
    pub witness: Option<Witness>,
    /// Sign touches without a sign change seen by the parabola sweep.
    pub grazes: usize,
}

const CURVATURE_START: usize = 4096;
const CURVATURE_MAX: usize = 1 << 20;
const MARGINAL_BAND: f64 = 1e-6;

/// Curvature classifier on the lift.
pub fn check_k_convex(table: &Table) -> Result<KConvexVerdict, LiftError> {
    Ok(check_lifted_k_convex(&lift_table(table)?))
}

/// Minimum signed curvature of the lifted wall and where it occurs; the
/// grid doubles until the minimum is stable to `1e-6` relative.
pub fn lifted_curvature_min(lifted: &LiftedTable) -> (f64, f64) {
    let scan = |n: usize| {
        lifted.curvature_samples(n).fold((f64::INFINITY, 0.0), |best, (t, k)| if k < best.0 { (k, t) } else { best })
    };
    let mut n = CURVATURE_START;
    let mut prev = scan(n);
    while n < CURVATURE_MAX {
        n *= 2;
        let next = scan(n);
        let stable = (next.0 - prev.0).abs() <= 1e-6 * next.0.abs().max(f64::MIN_POSITIVE);
        prev = next;
        if stable {
            break;
        }
    }
    prev
}

pub fn check_lifted_k_convex(lifted: &LiftedTable) -> KConvexVerdict {
    let (kappa_min, argmin) = lifted_curvature_min(lifted);
    let threshold = MARGINAL_BAND / lifted.bounds().diameter;
    let verdict = if kappa_min > threshold {
        Verdict::KConvex
    } else if kappa_min < -threshold {
        Verdict::NotKConvex
    } else {
        Verdict::Marginal
    };
    KConvexVerdict {
        verdict,
        kappa_min: Some(kappa_min),
        kappa_argmin: Some(argmin),
        threshold: Some(threshold),
        witness: None,
        grazes: 0,
    }
}

/// `|x| + ⟨x, e⟩` without cancellation.
#[inline]
fn focal_value(e: PlanarPoint, x: PlanarPoint) -> f64 {
    let xp = dot(e, x);
    let r = x.norm();
    if xp <= 0.0 {
        let yp = cross(e, x);
        yp * yp / (r - xp)
    } else {
        r + xp
    }
}

#[inline]
fn focal_slope(e: PlanarPoint, x: PlanarPoint, d1: PlanarPoint) -> (f64, f64) {
    let f = focal_value(e, x);
    let yp = cross(e, x);
    let r = x.norm();
    let grad = (e * f + e * PlanarPoint::i() * yp) / r;
    (dot(grad, d1), grad.norm() * d1.norm())
}

/// Crossings of one focused parabola with the wall.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossingCount {
    /// Refined wall parameters of the transversal crossings.
    pub crossings: Vec<f64>,
    /// Smallest sine of the crossing angle among them.
    pub min_sine: f64,
    pub grazes: usize,
}

/// Counts transversal intersections of the parabola `(apse, ℓ)` with the
/// wall from sign changes on `n_t` samples, each refined by bisection.
pub fn count_parabola_crossings(table: &Table, apse: f64, latus: f64, n_t: usize) -> CrossingCount {
    let e = unit(apse);
    let values: Vec<f64> = (0..n_t).map(|i| focal_value(e, table.point(i as f64 / n_t as f64)) - latus).collect();
    crossings_from_samples(table, e, latus, &values)
}

fn crossings_from_samples(table: &Table, e: PlanarPoint, latus: f64, values: &[f64]) -> CrossingCount {
    let n = values.len();
    let h = 1.0 / n as f64;
    let scale = latus.abs().max(f64::MIN_POSITIVE);
    let mut crossings = Vec::new();
    let mut min_sine = f64::INFINITY;
    let mut grazes = 0;
    for i in 0..n {
        let (a, b) = (values[i], values[(i + 1) % n]);
        if (a < 0.0) != (b < 0.0) {
            let (mut lo, mut hi, s_lo) = (i as f64 * h, (i + 1) as f64 * h, a < 0.0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if (focal_value(e, table.point(mid)) - latus < 0.0) == s_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-15 {
                    break;
                }
            }
            let t = 0.5 * (lo + hi);
            let (x, d1) = table.point_d1(t);
            let (slope, norm) = focal_slope(e, x, d1);
            let sine = slope.abs() / norm;
            if sine > 1e-8 {
                crossings.push(t.rem_euclid(1.0));
                min_sine = min_sine.min(sine);
            } else {
                grazes += 1;
            }
        } else {
            // a sample-level extremum that nearly touches ℓ without crossing
            let prev = values[(i + n - 1) % n];
            let extremum = (a - prev) * (b - a) < 0.0;
            if extremum && a.abs() < 1e-9 * scale {
                grazes += 1;
            }
        }
    }
    CrossingCount { crossings, min_sine, grazes }
}

/// Parabola sweep on `n_θ` apse directions, latus values
/// `ℓ_j = 2 max|γ| (j + 1) / n_ℓ` and `n_t` wall samples.
///
/// For each direction the sweep also tries the latus values halfway between
/// consecutive local extrema of the sampled focal function, which is where
/// extra crossings first appear. The witness is the parabola with at least
/// three crossings whose smallest crossing angle is largest.
pub fn brute_force_k_convex(table: &Table, grid: (usize, usize, usize)) -> KConvexVerdict {
    let (n_theta, n_ell, n_t) = grid;
    let points: Vec<PlanarPoint> = (0..n_t).map(|i| table.point(i as f64 / n_t as f64)).collect();
    let rmax = points.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let mut best: Option<(f64, Witness)> = None;
    let mut grazes = 0;
    let mut values = vec![0.0; n_t];
    for i in 0..n_theta {
        let apse = TAU * i as f64 / n_theta as f64;
        let e = unit(apse);
        for (v, p) in values.iter_mut().zip(&points) {
            *v = focal_value(e, *p);
        }
        let mut latus: Vec<f64> = (0..n_ell).map(|j| 2.0 * rmax * (j + 1) as f64 / n_ell as f64).collect();
        let mut extrema: Vec<f64> = (0..n_t)
            .filter(|&k| {
                let (a, b, c) = (values[(k + n_t - 1) % n_t], values[k], values[(k + 1) % n_t]);
                (b - a) * (c - b) < 0.0
            })
            .map(|k| values[k])
            .collect();
        if extrema.len() >= 4 {
            extrema.sort_by(|a, b| a.partial_cmp(b).unwrap());
            latus.extend(extrema.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        }
        for ell in latus {
            let shifted: Vec<f64> = values.iter().map(|v| v - ell).collect();
            let changes = (0..n_t).filter(|&k| (shifted[k] < 0.0) != (shifted[(k + 1) % n_t] < 0.0)).count();
            if changes < 3 {
                continue;
            }
            let count = crossings_from_samples(table, e, ell, &shifted);
            grazes += count.grazes;
            if count.crossings.len() >= 3 && best.as_ref().map_or(true, |(s, _)| count.min_sine > *s) {
                best = Some((count.min_sine, Witness { apse, latus: ell, crossings: count.crossings }));
            }
        }
    }
    KConvexVerdict {
        verdict: if best.is_some() { Verdict::NotKConvex } else { Verdict::KConvex },
        kappa_min: None,
        kappa_argmin: None,
        threshold: None,
        witness: best.map(|(_, w)| w),
        grazes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::TableSpec;
    use crate::planar::pt;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn focused_ellipse_and_circle_are_k_convex() {
        let focused = Table::new(TableSpec::focused_ellipse(1.2, 0.8)).unwrap();
        let v = check_k_convex(&focused).unwrap();
        assert_eq!(v.verdict, Verdict::KConvex);
        // lifted ellipse (1.2, 0.8): minimum curvature b/a² at the minor vertices
        assert!((v.kappa_min.unwrap() - 0.8 / 1.44).abs() < 1e-9);
        let b = brute_force_k_convex(&focused, (64, 64, 1024));
        assert_eq!(b.verdict, Verdict::KConvex);
        assert!(b.witness.is_none());

        let circle = Table::new(TableSpec::circle(PlanarPoint::default(), 1.0)).unwrap();
        assert_eq!(check_k_convex(&circle).unwrap().verdict, Verdict::KConvex);
    }

    #[test]
    fn thin_centered_ellipse_has_minor_axis_witness() {
        let table = Table::new(TableSpec::ellipse(PlanarPoint::default(), 5.0, 0.3, 0.0)).unwrap();
        assert_eq!(check_k_convex(&table).unwrap().verdict, Verdict::NotKConvex);
        let b = brute_force_k_convex(&table, (64, 64, 1024));
        assert_eq!(b.verdict, Verdict::NotKConvex);
        let w = b.witness.unwrap();
        assert!(w.crossings.len() >= 3);
        let axis_offset = (w.apse.rem_euclid(std::f64::consts::PI) - FRAC_PI_2).abs();
        assert!(axis_offset < 1e-12, "apse {}", w.apse);
        let recheck = count_parabola_crossings(&table, w.apse, w.latus, 10_240);
        assert!(recheck.crossings.len() >= 3);
    }

    #[test]
    fn off_center_circles_follow_cassini_criterion() {
        // the lift of a circle of radius R about c is convex iff R > 2|c|
        for &(c, expected) in &[(0.3, Verdict::KConvex), (0.45, Verdict::KConvex), (0.7, Verdict::NotKConvex)] {
            let table = Table::new(TableSpec::circle(pt(c, 0.0), 1.0)).unwrap();
            let v = check_k_convex(&table).unwrap();
            assert_eq!(v.verdict, expected, "c = {c}");
            let b = brute_force_k_convex(&table, (64, 64, 1024));
            assert_eq!(b.verdict, expected, "c = {c}");
        }
    }
}
