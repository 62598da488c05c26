//! Seeded random generators for tables, launches and phase states.
//!
//! Every generator draws from a caller-supplied `ChaCha8Rng`, so a suite is
//! reproduced exactly by its seed.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use kepler_billiards::diagnostics::{check_k_convex, Verdict};
use kepler_billiards::levi_civita::PhaseState;
use kepler_billiards::planar::unit;
use kepler_billiards::{pt, PlanarPoint, Table, TableSpec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Launch angles stay this far from grazing.
pub const LAUNCH_MARGIN: f64 = 0.05;

/// Squares an odd lift `z(t) = Σ a_j e^{iπjt}` (odd `j`) into the Fourier
/// coefficients of the Kepler wall `z(t)²`.
pub fn square_lift(lift: &[(i32, PlanarPoint)]) -> TableSpec {
    let mut coeffs: BTreeMap<i32, PlanarPoint> = BTreeMap::new();
    for &(j, a) in lift {
        for &(k, b) in lift {
            *coeffs.entry((j + k) / 2).or_default() += a * b;
        }
    }
    TableSpec::fourier(coeffs)
}

/// Lift coefficients of the centered ellipse with semi-axes `a >= b`.
pub fn ellipse_lift(a: f64, b: f64) -> Vec<(i32, PlanarPoint)> {
    vec![(1, pt(0.5 * (a + b), 0.0)), (-1, pt(0.5 * (a - b), 0.0))]
}

fn random_phase(rng: &mut ChaCha8Rng, amplitude: f64) -> PlanarPoint {
    unit(rng.gen_range(0.0..TAU)) * (amplitude * rng.gen_range(0.0..1.0))
}

/// A table whose lift is the `(1.2, 0.8)` centered ellipse plus random odd
/// harmonics `±3, ±5` of size up to `1e-2`, redrawn until the curvature
/// classifier calls it K-convex.
pub fn k_convex_fourier_table(rng: &mut ChaCha8Rng) -> Table {
    loop {
        let mut lift = ellipse_lift(1.2, 0.8);
        for j in [3, -3, 5, -5] {
            lift.push((j, random_phase(rng, 1e-2)));
        }
        let Ok(table) = Table::new(square_lift(&lift)) else { continue };
        if matches!(check_k_convex(&table), Ok(v) if v.verdict == Verdict::KConvex) {
            return table;
        }
    }
}

/// Launch `(t, angle)` with `t` uniform in `[0, 1)` and the angle uniform
/// in `(δ, π − δ)`, `δ` = [`LAUNCH_MARGIN`].
pub fn random_launch(rng: &mut ChaCha8Rng) -> (f64, f64) {
    (rng.gen_range(0.0..1.0), rng.gen_range(LAUNCH_MARGIN..PI - LAUNCH_MARGIN))
}

/// Zero-energy state with `|q|` log-uniform in `[1e-3, 1e3]` and uniformly
/// random position and momentum directions.
pub fn random_zero_energy_state(rng: &mut ChaCha8Rng) -> PhaseState {
    let r = 10f64.powf(rng.gen_range(-3.0..=3.0));
    let q = unit(rng.gen_range(0.0..TAU)) * r;
    let p = unit(rng.gen_range(0.0..TAU)) * (2.0 / r).sqrt();
    PhaseState::new(q, p)
}

/// Adds the perturbation `Σ c_k e^{2πikt}` to a Fourier spec (ellipses are
/// converted first).
pub fn perturb(spec: &TableSpec, delta: &[(i32, PlanarPoint)]) -> TableSpec {
    let TableSpec::Fourier { coeffs } = spec.to_fourier() else { unreachable!("to_fourier returns Fourier") };
    let mut sum: BTreeMap<i32, PlanarPoint> = coeffs.iter().map(|c| (c.0, pt(c.1, c.2))).collect();
    for &(k, c) in delta {
        *sum.entry(k).or_default() += c;
    }
    TableSpec::fourier(sum)
}

/// Random perturbation on the modes `±2, ±3, ±4` scaled so that its `C²`
/// norm `Σ |c_k| (1 + 2π|k| + (2πk)²)` equals `size`.
pub fn c2_perturbation(rng: &mut ChaCha8Rng, size: f64) -> Vec<(i32, PlanarPoint)> {
    let raw: Vec<(i32, PlanarPoint)> = [2, -2, 3, -3, 4, -4].iter().map(|&k| (k, random_phase(rng, 1.0))).collect();
    let norm = c2_norm(&raw);
    raw.into_iter().map(|(k, c)| (k, c * (size / norm))).collect()
}

/// `Σ |c_k| (1 + 2π|k| + (2πk)²)`, an upper bound on the `C²` norm.
pub fn c2_norm(terms: &[(i32, PlanarPoint)]) -> f64 {
    terms
        .iter()
        .map(|&(k, c)| {
            let w = TAU * k.abs() as f64;
            c.norm() * (1.0 + w + w * w)
        })
        .sum()
}

/// The 50 classifier tables: 15 centered ellipses, 15 offset ellipses and
/// 20 Fourier perturbations of such ellipses with amplitude at most `1e-2`
/// of the diameter. Specs that fail validation are redrawn.
pub fn classifier_suite(rng: &mut ChaCha8Rng) -> Vec<Table> {
    let mut out = Vec::with_capacity(50);
    let ellipse = |rng: &mut ChaCha8Rng, offset: bool| loop {
        let a = rng.gen_range(1.0..5.0);
        let b = a * rng.gen_range(0.06..1.0);
        let rotation = rng.gen_range(0.0..PI);
        let center = if offset { unit(rng.gen_range(0.0..TAU)) * (b * rng.gen_range(0.0..0.9)) } else { pt(0.0, 0.0) };
        if let Ok(t) = Table::new(TableSpec::ellipse(center, a, b, rotation)) {
            return t;
        }
    };
    for _ in 0..15 {
        out.push(ellipse(rng, false));
    }
    for _ in 0..15 {
        out.push(ellipse(rng, true));
    }
    while out.len() < 50 {
        let offset = rng.gen_bool(0.5);
        let base = ellipse(rng, offset);
        let diameter = 2.0 * base.as_ellipse().map_or(1.0, |(_, a, _, _)| a);
        let amplitude = diameter * rng.gen_range(0.0..1e-2);
        let delta: Vec<(i32, PlanarPoint)> =
            [2, -2, 3, -3, 5].iter().map(|&k| (k, random_phase(rng, amplitude / 5.0))).collect();
        if let Ok(t) = Table::new(perturb(base.spec(), &delta)) {
            out.push(t);
        }
    }
    out
}
