//! Points in the plane, identified with complex numbers.
//!
//! Everything in the crate works in `ℝ² ≅ ℂ`: positions, momenta, tangents
//! and lifted coordinates are all [`PlanarPoint`]s, so the square map and its
//! inverse are plain complex arithmetic.

use num_complex::Complex64;

/// A point (or vector) `x + iy` in the plane.
pub type PlanarPoint = Complex64;

/// Builds a planar point from Cartesian components.
#[inline]
pub fn pt(x: f64, y: f64) -> PlanarPoint {
    Complex64::new(x, y)
}

/// Euclidean inner product of two planar vectors.
#[inline]
pub fn dot(a: PlanarPoint, b: PlanarPoint) -> f64 {
    a.re * b.re + a.im * b.im
}

/// Scalar cross product `a × b = a_x b_y − a_y b_x`.
#[inline]
pub fn cross(a: PlanarPoint, b: PlanarPoint) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Unit vector in the direction of `v`.
#[inline]
pub fn normalize(v: PlanarPoint) -> PlanarPoint {
    v / v.norm()
}

/// Unit vector `e^{iθ}`.
#[inline]
pub fn unit(theta: f64) -> PlanarPoint {
    let (s, c) = theta.sin_cos();
    Complex64::new(c, s)
}

/// Principal complex square root with the branch cut on the negative real
/// axis.
///
/// Uses the half-angle formulation on `|z|` rather than polar form, which
/// keeps `sqrt(z)^2 == z` to a couple of ulps. Positive reals map to positive
/// reals; on the cut the sign of the (possibly signed-zero) imaginary part
/// picks the root, so `sqrt(-1 + 0i) = i`.
pub fn principal_sqrt(z: PlanarPoint) -> PlanarPoint {
    let (x, y) = (z.re, z.im);
    if x == 0.0 && y == 0.0 {
        return Complex64::new(0.0, y);
    }
    let r = x.hypot(y);
    if x >= 0.0 {
        let s = (0.5 * (x + r)).sqrt();
        Complex64::new(s, y / (2.0 * s))
    } else {
        let s = (0.5 * (r - x)).sqrt();
        Complex64::new(y.abs() / (2.0 * s), s.copysign(y))
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut a = theta.rem_euclid(TAU);
    if a > PI {
        a -= TAU;
    }
    a
}
