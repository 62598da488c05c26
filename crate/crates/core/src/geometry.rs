//! Billiard walls: smooth closed curves with exact derivatives.
//!
//! A [`TableSpec`] is the raw description (ellipse or finite Fourier series,
//! as read from JSON). [`Table::new`] validates it and precomputes the data
//! the simulators need: derivative bounds for root isolation and a
//! cumulative arc-length table. Walls are parameterized by `t` with period 1
//! and oriented counterclockwise.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::planar::{cross, dot, normalize, pt, unit, wrap_angle, PlanarPoint};
use crate::quadrature::ArcLengthTable;

/// One term `c_k e^{2πikt}` of a Fourier wall, serialized as `[k, re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierTerm(pub i32, pub f64, pub f64);

/// Raw wall description matching the table JSON schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum TableSpec {
    Ellipse {
        center: [f64; 2],
        /// `[a, b]` with `a >= b > 0`.
        semi_axes: [f64; 2],
        #[serde(default)]
        rotation: f64,
    },
    Fourier {
        coeffs: Vec<FourierTerm>,
    },
}

impl TableSpec {
    pub fn ellipse(center: PlanarPoint, a: f64, b: f64, rotation: f64) -> Self {
        TableSpec::Ellipse { center: [center.re, center.im], semi_axes: [a, b], rotation }
    }

    pub fn circle(center: PlanarPoint, radius: f64) -> Self {
        Self::ellipse(center, radius, radius, 0.0)
    }

    /// The ellipse whose square-root lift is the centered ellipse with
    /// semi-axes `a >= b`: center `((a²−b²)/2, 0)`, semi-axes
    /// `((a²+b²)/2, ab)`, one focus at the origin.
    pub fn focused_ellipse(a: f64, b: f64) -> Self {
        Self::ellipse(pt(0.5 * (a * a - b * b), 0.0), 0.5 * (a * a + b * b), a * b, 0.0)
    }

    pub fn fourier(coeffs: impl IntoIterator<Item = (i32, PlanarPoint)>) -> Self {
        TableSpec::Fourier { coeffs: coeffs.into_iter().map(|(k, c)| FourierTerm(k, c.re, c.im)).collect() }
    }

    /// Rewrites an ellipse as the equivalent three-term Fourier series;
    /// Fourier specs are returned unchanged.
    pub fn to_fourier(&self) -> TableSpec {
        match *self {
            TableSpec::Ellipse { center, semi_axes: [a, b], rotation } => {
                let rot = unit(rotation);
                TableSpec::fourier([
                    (-1, rot * (0.5 * (a - b))),
                    (0, pt(center[0], center[1])),
                    (1, rot * (0.5 * (a + b))),
                ])
            }
            ref f @ TableSpec::Fourier { .. } => f.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, GeometryError> {
        serde_json::from_str(text).map_err(|e| GeometryError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table spec serializes")
    }
}

/// Reads and validates a table JSON file.
pub fn load_table(path: impl AsRef<Path>) -> Result<Table, GeometryError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| GeometryError::Json(format!("{}: {e}", path.display())))?;
    Table::new(TableSpec::from_json(&text)?)
}

/// Point, unit tangent, unit outward normal and signed curvature at `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryFrame {
    pub t: f64,
    pub point: PlanarPoint,
    pub tangent: PlanarPoint,
    pub normal: PlanarPoint,
    pub curvature: f64,
}

impl BoundaryFrame {
    pub(crate) fn from_derivatives(t: f64, d: [PlanarPoint; 3]) -> Result<Self, GeometryError> {
        let [p, d1, d2] = d;
        let speed = d1.norm();
        if !(speed >= 1e-12) {
            return Err(GeometryError::DegenerateParameterization { t });
        }
        let tangent = d1 / speed;
        // counterclockwise walls: the outward normal is the tangent turned clockwise
        let normal = pt(tangent.im, -tangent.re);
        Ok(Self { t, point: p, tangent, normal, curvature: cross(d1, d2) / (speed * speed * speed) })
    }

    /// Angle in `(0, π)` between the tangent and a direction pointing into
    /// the table.
    pub fn departure_angle(&self, v: PlanarPoint) -> f64 {
        cross(self.tangent, v).atan2(dot(self.tangent, v))
    }

    /// Angle in `(0, π)` between the tangent and the mirror image of an
    /// arriving direction; equals [`Self::departure_angle`] of the reflected
    /// direction.
    pub fn arrival_angle(&self, v: PlanarPoint) -> f64 {
        (-cross(self.tangent, v)).atan2(dot(self.tangent, v))
    }
}

/// Symmetric form `[[xx, xy], [xy, yy]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetricForm {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl SymmetricForm {
    pub fn diagonal(xx: f64, yy: f64) -> Self {
        Self { xx, xy: 0.0, yy }
    }

    pub fn apply(&self, z: PlanarPoint) -> PlanarPoint {
        pt(self.xx * z.re + self.xy * z.im, self.xy * z.re + self.yy * z.im)
    }

    /// `⟨Qz, v⟩`.
    pub fn pair(&self, z: PlanarPoint, v: PlanarPoint) -> f64 {
        dot(self.apply(z), v)
    }

    pub fn frobenius(&self) -> f64 {
        (self.xx * self.xx + self.yy * self.yy + 2.0 * self.xy * self.xy).sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { xx: self.xx * s, xy: self.xy * s, yy: self.yy * s }
    }

    pub fn is_positive_definite(&self) -> bool {
        self.xx > 0.0 && self.xx * self.yy - self.xy * self.xy > 0.0
    }

    /// Rotates the form: `R Q Rᵀ` with `R` the rotation by `angle`.
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let (a, b, d) = (self.xx, self.xy, self.yy);
        Self {
            xx: c * c * a - 2.0 * c * s * b + s * s * d,
            xy: c * s * (a - d) + (c * c - s * s) * b,
            yy: s * s * a + 2.0 * c * s * b + c * c * d,
        }
    }
}

/// Derivative bounds and scales of a wall, used by the root isolators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveBounds {
    /// Upper bound on `|γ'(t)|`.
    pub speed: f64,
    /// Upper bound on `|γ''(t)|`.
    pub accel: f64,
    /// Lower bound on `|γ(t)|` (distance of the wall from the origin).
    pub radius_min: f64,
    /// Upper bound on `|γ(t)|`.
    pub radius_max: f64,
    pub diameter: f64,
}

/// Which wall an orbit was computed on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "table", rename_all = "lowercase")]
pub enum OrbitTable {
    Plain(TableSpec),
    /// The square-root lift of the given table.
    Lifted(TableSpec),
}

/// Anything that can serve as the wall of a billiard: a validated
/// [`Table`] (period 1) or a lifted table (period 2).
pub trait BilliardTable {
    fn period(&self) -> f64;
    fn point(&self, t: f64) -> PlanarPoint;
    /// Point and first derivative.
    fn point_d1(&self, t: f64) -> (PlanarPoint, PlanarPoint);
    /// Point, first and second derivative.
    fn point_d2(&self, t: f64) -> [PlanarPoint; 3];
    fn bounds(&self) -> &CurveBounds;
    fn arc_length_fraction(&self, t: f64) -> f64;
    fn param_at_fraction(&self, s: f64) -> f64;
    /// The form `M` with wall `{z : ⟨Mz, z⟩ = 1}` when the wall is an
    /// origin-centered ellipse to rounding accuracy.
    fn centered_form(&self) -> Option<SymmetricForm> {
        None
    }
    /// Parameter of a point known to lie on the wall; only required when
    /// [`Self::centered_form`] is available.
    fn locate(&self, _p: PlanarPoint) -> Option<f64> {
        None
    }
    fn frame(&self, t: f64) -> Result<BoundaryFrame, GeometryError> {
        BoundaryFrame::from_derivatives(t, self.point_d2(t))
    }
    fn orbit_table(&self) -> OrbitTable;
}

#[derive(Clone, Debug)]
enum Curve {
    Ellipse { center: PlanarPoint, a: f64, b: f64, rot: PlanarPoint },
    Fourier { terms: Vec<(i32, PlanarPoint)>, kmax: usize },
}

impl Curve {
    fn eval(&self, t: f64, order: usize) -> [PlanarPoint; 3] {
        let u = t.rem_euclid(1.0);
        match *self {
            Curve::Ellipse { center, a, b, rot } => {
                let (s, c) = (TAU * u).sin_cos();
                let p = center + rot * pt(a * c, b * s);
                if order == 0 {
                    return [p, PlanarPoint::default(), PlanarPoint::default()];
                }
                let d1 = rot * pt(-a * s, b * c) * TAU;
                let d2 = if order > 1 { rot * pt(-a * c, -b * s) * (TAU * TAU) } else { d1 * 0.0 };
                [p, d1, d2]
            }
            Curve::Fourier { ref terms, kmax } => {
                let w = unit(TAU * u);
                let mut powers = [PlanarPoint::new(1.0, 0.0); 33];
                let mut heap;
                let pows: &mut [PlanarPoint] = if kmax < powers.len() {
                    &mut powers[..=kmax]
                } else {
                    heap = vec![PlanarPoint::new(1.0, 0.0); kmax + 1];
                    &mut heap[..]
                };
                for k in 1..pows.len() {
                    pows[k] = pows[k - 1] * w;
                }
                let mut out = [PlanarPoint::default(); 3];
                for &(k, c) in terms {
                    let e = if k >= 0 { pows[k as usize] } else { pows[(-k) as usize].conj() };
                    let term = c * e;
                    out[0] += term;
                    if order > 0 {
                        let kf = TAU * k as f64;
                        out[1] += term * PlanarPoint::new(0.0, kf);
                        if order > 1 {
                            out[2] -= term * (kf * kf);
                        }
                    }
                }
                out
            }
        }
    }

    /// Rigorous bounds on `max |γ'|`, `max |γ''|`, `max |γ'''|`.
    fn derivative_bounds(&self) -> [f64; 3] {
        match *self {
            Curve::Ellipse { a, .. } => [TAU * a, TAU * TAU * a, TAU * TAU * TAU * a],
            Curve::Fourier { ref terms, .. } => {
                let mut b = [0.0; 3];
                for &(k, c) in terms {
                    let w = TAU * (k as f64).abs();
                    b[0] += w * c.norm();
                    b[1] += w * w * c.norm();
                    b[2] += w * w * w * c.norm();
                }
                b
            }
        }
    }
}

/// A validated wall: closed, simple, counterclockwise, `C^∞`, with the
/// origin strictly inside.
#[derive(Clone, Debug)]
pub struct Table {
    spec: TableSpec,
    curve: Curve,
    bounds: CurveBounds,
    arc: ArcLengthTable,
}

const SIMPLICITY_GRID: usize = 2048;
const BOUND_GRID: usize = 4096;

impl Table {
    /// Validates `spec`, normalizing the orientation to counterclockwise.
    pub fn new(spec: TableSpec) -> Result<Self, GeometryError> {
        let (spec, curve) = build_curve(spec)?;
        let mut table = Self {
            spec,
            curve,
            bounds: CurveBounds { speed: 0.0, accel: 0.0, radius_min: 0.0, radius_max: 0.0, diameter: 0.0 },
            arc: ArcLengthTable::new(|_| 1.0, 1.0),
        };
        table.bounds = table.compute_bounds()?;
        table.check_simple()?;
        let diameter = table.bounds.diameter;
        match winding_number(&table, PlanarPoint::default()) {
            Ok(1) => {}
            Ok(w) => {
                return Err(GeometryError::check(
                    "origin-interior",
                    format!("the wall winds {w} times about the origin O, expected 1"),
                ))
            }
            Err(GeometryError::PointOnBoundary { distance }) => {
                return Err(GeometryError::check(
                    "origin-interior",
                    format!("the origin O lies on the wall (distance {distance:e}, diameter {diameter})"),
                ))
            }
            Err(e) => return Err(e),
        }
        if table.bounds.radius_min <= 0.0 {
            // sampling slack swallowed the gap; fall back to half the measured distance
            table.bounds.radius_min = 0.5 * distance_to_wall(&table, PlanarPoint::default());
        }
        let curve = table.curve.clone();
        table.arc = ArcLengthTable::new(move |t| curve.eval(t, 1)[1].norm(), 1.0);
        Ok(table)
    }

    pub fn spec(&self) -> &TableSpec {
        &self.spec
    }

    pub fn total_length(&self) -> f64 {
        self.arc.total()
    }

    /// `Some((center, a, b, rotation))` for ellipse walls.
    pub fn as_ellipse(&self) -> Option<(PlanarPoint, f64, f64, f64)> {
        match self.spec {
            TableSpec::Ellipse { center, semi_axes: [a, b], rotation } => {
                Some((pt(center[0], center[1]), a, b, rotation))
            }
            _ => None,
        }
    }

    fn compute_bounds(&self) -> Result<CurveBounds, GeometryError> {
        let [_, acc_rig, jerk_rig] = self.curve.derivative_bounds();
        let h = 1.0 / BOUND_GRID as f64;
        let (mut smax, mut amax, mut rmin, mut rmax) = (0.0f64, 0.0f64, f64::INFINITY, 0.0f64);
        for i in 0..BOUND_GRID {
            let t = i as f64 * h;
            let [p, d1, d2] = self.curve.eval(t, 2);
            if !(d1.norm() >= 1e-12) {
                return Err(GeometryError::check("regular-parameterization", format!("|γ'(t)| < 1e-12 at t = {t}")));
            }
            smax = smax.max(d1.norm());
            amax = amax.max(d2.norm());
            rmin = rmin.min(p.norm());
            rmax = rmax.max(p.norm());
        }
        let speed = smax + 0.5 * h * acc_rig;
        let samples: Vec<PlanarPoint> = (0..1024).map(|i| self.curve.eval(i as f64 / 1024.0, 0)[0]).collect();
        let mut diameter = 0.0f64;
        for (i, a) in samples.iter().enumerate() {
            for b in &samples[i + 1..] {
                diameter = diameter.max((a - b).norm());
            }
        }
        Ok(CurveBounds {
            speed,
            accel: amax + 0.5 * h * jerk_rig,
            radius_min: (rmin - 0.5 * h * speed).max(0.0),
            radius_max: rmax + 0.5 * h * speed,
            diameter,
        })
    }

    /// Segment-pair intersection test on a polygon through the wall samples,
    /// bucketed on a uniform grid.
    fn check_simple(&self) -> Result<(), GeometryError> {
        let n = SIMPLICITY_GRID;
        let pts: Vec<PlanarPoint> = (0..n).map(|i| self.curve.eval(i as f64 / n as f64, 0)[0]).collect();
        let seg = |i: usize| (pts[i], pts[(i + 1) % n]);
        let cell = (0..n).map(|i| (seg(i).0 - seg(i).1).norm()).fold(0.0f64, f64::max).max(1e-300);
        let key = |p: PlanarPoint| ((p.re / cell).floor() as i64, (p.im / cell).floor() as i64);
        let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for i in 0..n {
            let (a, b) = seg(i);
            let (ka, kb) = (key(a), key(b));
            for x in ka.0.min(kb.0)..=ka.0.max(kb.0) {
                for y in ka.1.min(kb.1)..=ka.1.max(kb.1) {
                    grid.entry((x, y)).or_default().push(i);
                }
            }
        }
        for members in grid.values() {
            for (ii, &i) in members.iter().enumerate() {
                for &j in &members[ii + 1..] {
                    let gap = (i as i64 - j as i64).rem_euclid(n as i64);
                    if gap <= 1 || gap >= n as i64 - 1 {
                        continue;
                    }
                    let (a, b) = seg(i);
                    let (c, d) = seg(j);
                    if segments_intersect(a, b, c, d) {
                        return Err(GeometryError::check(
                            "simple-curve",
                            format!(
                                "wall self-intersects near t = {} and t = {}",
                                i as f64 / n as f64,
                                j as f64 / n as f64
                            ),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

fn build_curve(spec: TableSpec) -> Result<(TableSpec, Curve), GeometryError> {
    match spec {
        TableSpec::Ellipse { center, semi_axes: [a, b], rotation } => {
            if !(center.iter().all(|v| v.is_finite()) && a.is_finite() && b.is_finite() && rotation.is_finite()) {
                return Err(GeometryError::check("finite-parameters", "ellipse parameters must be finite"));
            }
            if !(b > 0.0 && a >= b) {
                return Err(GeometryError::check(
                    "semi-axes",
                    format!("semi-axes must satisfy a >= b > 0, got a = {a}, b = {b}"),
                ));
            }
            let curve = Curve::Ellipse { center: pt(center[0], center[1]), a, b, rot: unit(rotation) };
            Ok((spec, curve))
        }
        TableSpec::Fourier { ref coeffs } => {
            if coeffs.is_empty() {
                return Err(GeometryError::check("fourier-coefficients", "coefficient list is empty"));
            }
            let mut terms: Vec<(i32, PlanarPoint)> = Vec::with_capacity(coeffs.len());
            for &FourierTerm(k, re, im) in coeffs {
                if !(re.is_finite() && im.is_finite()) {
                    return Err(GeometryError::check("finite-parameters", format!("coefficient {k} is not finite")));
                }
                if terms.iter().any(|(kk, _)| *kk == k) {
                    return Err(GeometryError::check("fourier-coefficients", format!("duplicate frequency {k}")));
                }
                terms.push((k, pt(re, im)));
            }
            // twice the signed area over π: Σ k |c_k|²
            let area: f64 = terms.iter().map(|(k, c)| *k as f64 * c.norm_sqr()).sum();
            if area == 0.0 {
                return Err(GeometryError::check("orientation", "wall encloses zero signed area"));
            }
            let mut spec = spec.clone();
            if area < 0.0 {
                for t in terms.iter_mut() {
                    t.0 = -t.0;
                }
                spec = TableSpec::fourier(terms.iter().copied());
            }
            terms.sort_by_key(|(k, _)| *k);
            let kmax = terms.iter().map(|(k, _)| k.unsigned_abs() as usize).max().unwrap_or(0);
            Ok((spec, Curve::Fourier { terms, kmax }))
        }
    }
}

fn segments_intersect(a: PlanarPoint, b: PlanarPoint, c: PlanarPoint, d: PlanarPoint) -> bool {
    let o1 = cross(b - a, c - a);
    let o2 = cross(b - a, d - a);
    let o3 = cross(d - c, a - c);
    let o4 = cross(d - c, b - c);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0)) {
        return true;
    }
    let on_segment = |p: PlanarPoint, q: PlanarPoint, r: PlanarPoint| {
        r.re >= p.re.min(q.re) && r.re <= p.re.max(q.re) && r.im >= p.im.min(q.im) && r.im <= p.im.max(q.im)
    };
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

impl BilliardTable for Table {
    fn period(&self) -> f64 {
        1.0
    }

    fn point(&self, t: f64) -> PlanarPoint {
        self.curve.eval(t, 0)[0]
    }

    fn point_d1(&self, t: f64) -> (PlanarPoint, PlanarPoint) {
        let [p, d1, _] = self.curve.eval(t, 1);
        (p, d1)
    }

    fn point_d2(&self, t: f64) -> [PlanarPoint; 3] {
        self.curve.eval(t, 2)
    }

    fn bounds(&self) -> &CurveBounds {
        &self.bounds
    }

    fn arc_length_fraction(&self, t: f64) -> f64 {
        self.arc.fraction(|u| self.curve.eval(u, 1)[1].norm(), t)
    }

    fn param_at_fraction(&self, s: f64) -> f64 {
        self.arc.param_at_fraction(|u| self.curve.eval(u, 1)[1].norm(), s)
    }

    fn centered_form(&self) -> Option<SymmetricForm> {
        match self.curve {
            Curve::Ellipse { center, a, b, rot } if center == PlanarPoint::default() => {
                Some(SymmetricForm::diagonal(1.0 / (a * a), 1.0 / (b * b)).rotated(rot.arg()))
            }
            _ => None,
        }
    }

    fn locate(&self, p: PlanarPoint) -> Option<f64> {
        match self.curve {
            Curve::Ellipse { center, a, b, rot } => {
                let local = rot.conj() * (p - center);
                Some(((local.im / b).atan2(local.re / a) / TAU).rem_euclid(1.0))
            }
            _ => None,
        }
    }

    fn orbit_table(&self) -> OrbitTable {
        OrbitTable::Plain(self.spec.clone())
    }
}

/// Frame of the wall at `t` (reduced modulo 1).
pub fn eval_frame(table: &Table, t: f64) -> Result<BoundaryFrame, GeometryError> {
    table.frame(t)
}

/// Arc-length fraction `s(t) ∈ [0, 1)` of the wall.
pub fn arc_length_fraction(table: &Table, t: f64) -> f64 {
    table.arc_length_fraction(t)
}

/// Winding number of the wall about `p`.
///
/// Fails with [`GeometryError::PointOnBoundary`] when `p` is within
/// `1e-10 · diameter` of the wall.
pub fn winding_number<T: BilliardTable + ?Sized>(table: &T, p: PlanarPoint) -> Result<i32, GeometryError> {
    let period = table.period();
    let diameter = table.bounds().diameter;
    let distance = distance_to_wall(table, p);
    if distance <= 1e-10 * diameter {
        return Err(GeometryError::PointOnBoundary { distance });
    }
    let mut n = 2048usize;
    loop {
        let mut total = 0.0;
        let mut prev = (table.point(0.0) - p).arg();
        let mut max_step = 0.0f64;
        for i in 1..=n {
            let a = (table.point(period * i as f64 / n as f64) - p).arg();
            let d = wrap_angle(a - prev);
            max_step = max_step.max(d.abs());
            total += d;
            prev = a;
        }
        if max_step < 1.0 || n >= 1 << 22 {
            return Ok((total / TAU).round() as i32);
        }
        n *= 2;
    }
}

/// Distance from `p` to the wall: nearest of 2048 samples, then Newton on
/// the foot-point condition.
pub fn distance_to_wall<T: BilliardTable + ?Sized>(table: &T, p: PlanarPoint) -> f64 {
    let period = table.period();
    let n = 2048;
    let (mut best_t, mut best) = (0.0, f64::INFINITY);
    for i in 0..n {
        let t = period * i as f64 / n as f64;
        let d = (table.point(t) - p).norm();
        if d < best {
            best = d;
            best_t = t;
        }
    }
    let mut t = best_t;
    let h = period / n as f64;
    for _ in 0..30 {
        let [q, d1, d2] = table.point_d2(t);
        let g = dot(q - p, d1);
        let dg = dot(d1, d1) + dot(q - p, d2);
        if dg <= 0.0 {
            break;
        }
        let step = (g / dg).clamp(-h, h);
        t -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    best.min((table.point(t) - p).norm())
}

/// Outward unit normal of the tangent direction `tangent`.
pub fn outward_normal(tangent: PlanarPoint) -> PlanarPoint {
    normalize(pt(tangent.im, -tangent.re))
}

#[cfg(test)]
mod tests {
    use super::*;
    fn circle() -> Table {
        Table::new(TableSpec::circle(PlanarPoint::default(), 1.0)).unwrap()
    }

    fn ellipse21() -> Table {
        Table::new(TableSpec::ellipse(PlanarPoint::default(), 2.0, 1.0, 0.0)).unwrap()
    }

    #[test]
    fn unit_circle_frame() {
        let f = eval_frame(&circle(), 0.0).unwrap();
        assert!((f.point - pt(1.0, 0.0)).norm() < 1e-15);
        assert!((f.tangent - pt(0.0, 1.0)).norm() < 1e-15);
        assert!((f.normal - pt(1.0, 0.0)).norm() < 1e-15);
        assert!((f.curvature - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ellipse_curvature_at_vertices() {
        let t = ellipse21();
        let f0 = eval_frame(&t, 0.0).unwrap();
        assert!((f0.point - pt(2.0, 0.0)).norm() < 1e-15);
        assert!((f0.curvature - 2.0).abs() < 1e-12);
        let f1 = eval_frame(&t, 0.25).unwrap();
        assert!((f1.point - pt(0.0, 1.0)).norm() < 1e-15);
        assert!((f1.curvature - 0.25).abs() < 1e-12);
    }

    #[test]
    fn ellipse_curvature_matches_closed_form() {
        let (a, b) = (2.0, 1.0);
        let t = ellipse21();
        for i in 0..97 {
            let u = i as f64 / 97.0;
            let th = TAU * u;
            let exact = a * b / (a * a * th.sin().powi(2) + b * b * th.cos().powi(2)).powf(1.5);
            let k = eval_frame(&t, u).unwrap().curvature;
            assert!(k > 0.0);
            assert!((k - exact).abs() < 1e-12, "u={u}: {k} vs {exact}");
        }
    }

    #[test]
    fn frame_is_orthonormal_and_periodic() {
        let t = Table::new(TableSpec::fourier([(0, pt(0.1, 0.0)), (1, pt(1.0, 0.0)), (3, pt(0.02, 0.01))])).unwrap();
        for i in 0..64 {
            let u = i as f64 / 64.0;
            let f = eval_frame(&t, u).unwrap();
            let g = eval_frame(&t, u + 1.0).unwrap();
            assert_eq!(f.point, g.point);
            assert_eq!(f.curvature, g.curvature);
            assert!((f.tangent.norm() - 1.0).abs() < 1e-14);
            assert!((f.normal.norm() - 1.0).abs() < 1e-14);
            assert!(dot(f.tangent, f.normal).abs() < 1e-14);
        }
    }

    #[test]
    fn winding_examples() {
        let c = circle();
        assert_eq!(winding_number(&c, PlanarPoint::default()).unwrap(), 1);
        assert_eq!(winding_number(&c, pt(3.0, 0.0)).unwrap(), 0);
        let focused = Table::new(TableSpec::focused_ellipse(1.2, 0.8)).unwrap();
        assert_eq!(winding_number(&focused, PlanarPoint::default()).unwrap(), 1);
        assert!(matches!(winding_number(&c, pt(1.0, 0.0)), Err(GeometryError::PointOnBoundary { .. })));
    }

    #[test]
    fn arc_length_examples() {
        assert_eq!(arc_length_fraction(&circle(), 0.0), 0.0);
        assert!((arc_length_fraction(&circle(), 0.5) - 0.5).abs() < 1e-14);
        assert!((arc_length_fraction(&ellipse21(), 0.5) - 0.5).abs() < 1e-13);
        let t = ellipse21();
        let mut prev = -1.0;
        for i in 0..200 {
            let s = arc_length_fraction(&t, i as f64 / 200.0);
            assert!(s > prev);
            prev = s;
        }
    }

    #[test]
    fn clockwise_fourier_is_reoriented() {
        let t = Table::new(TableSpec::fourier([(-1, pt(1.0, 0.0))])).unwrap();
        let f = eval_frame(&t, 0.0).unwrap();
        assert!((f.tangent - pt(0.0, 1.0)).norm() < 1e-14);
        assert!(f.curvature > 0.0);
    }

    #[test]
    fn loader_rejections_name_the_check() {
        let bad = |spec: TableSpec| match Table::new(spec) {
            Err(GeometryError::InvalidTable { check, .. }) => check,
            other => panic!("expected rejection, got {other:?}"),
        };
        assert_eq!(bad(TableSpec::circle(pt(3.0, 0.0), 1.0)), "origin-interior");
        assert_eq!(bad(TableSpec::ellipse(PlanarPoint::default(), 1.0, 2.0, 0.0)), "semi-axes");
        assert_eq!(bad(TableSpec::ellipse(PlanarPoint::default(), f64::INFINITY, 1.0, 0.0)), "finite-parameters");
        // figure-eight-like curve: c1 + c3 with |c3| large enough to self-intersect
        assert_eq!(bad(TableSpec::fourier([(1, pt(1.0, 0.0)), (-3, pt(0.9, 0.0))])), "simple-curve");
        assert_eq!(bad(TableSpec::circle(pt(1.0, 0.0), 1.0)), "origin-interior");
    }

    #[test]
    fn json_schema_round_trip() {
        let spec = TableSpec::from_json(r#"{"type":"ellipse","center":[0.4,0],"semi_axes":[1.04,0.96],"rotation":0}"#)
            .unwrap();
        let (TableSpec::Ellipse { center, semi_axes, .. }, TableSpec::Ellipse { center: c2, semi_axes: s2, .. }) =
            (&spec, &TableSpec::focused_ellipse(1.2, 0.8))
        else {
            panic!("expected ellipses")
        };
        for (u, v) in center.iter().chain(semi_axes).zip(c2.iter().chain(s2)) {
            assert!((u - v).abs() < 1e-15);
        }
        let f = TableSpec::from_json(r#"{"type":"fourier","coeffs":[[1,1.0,0.0],[2,0.01,-0.02]]}"#).unwrap();
        assert_eq!(TableSpec::from_json(&f.to_json()).unwrap(), f);
        assert!(TableSpec::from_json(r#"{"type":"halfplane","normal":[0,1]}"#).is_err());
    }

    #[test]
    fn ellipse_as_fourier_agrees() {
        let spec = TableSpec::ellipse(pt(0.3, -0.1), 1.5, 0.7, 0.4);
        let a = Table::new(spec.clone()).unwrap();
        let b = Table::new(spec.to_fourier()).unwrap();
        for i in 0..50 {
            let u = i as f64 / 50.0;
            assert!((a.point(u) - b.point(u)).norm() < 1e-14);
        }
    }
}
