use serde::Serialize;
use thiserror::Error;

/// Failures while building or querying a billiard wall.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    /// The raw table description violates one of the loader checks; `check`
    /// is the stable name of the failed check.
    #[error("table check `{check}` failed: {detail}")]
    InvalidTable { check: &'static str, detail: String },
    #[error("degenerate parameterization at t = {t}: |γ'| below 1e-12")]
    DegenerateParameterization { t: f64 },
    #[error("point lies on the wall (distance {distance:e})")]
    PointOnBoundary { distance: f64 },
    #[error("invalid table JSON: {0}")]
    Json(String),
}

impl GeometryError {
    pub(crate) fn check(check: &'static str, detail: impl Into<String>) -> Self {
        GeometryError::InvalidTable { check, detail: detail.into() }
    }
}

/// Failures of the Levi-Civita state and table maps.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LiftError {
    #[error("state at the origin (|z| or |q| = {modulus:e})")]
    OriginSingularity { modulus: f64 },
    #[error("wall passes within {distance:e} of the origin")]
    OriginOnBoundary { distance: f64 },
    #[error("wall winds {winding} times about the origin, expected 1")]
    WindingMismatch { winding: i32 },
    #[error("no lifted branch continues bounce {bounce} (mismatch {mismatch:e})")]
    BranchDiscontinuity { bounce: usize, mismatch: f64 },
    #[error("orbit does not live on a lifted table")]
    NotLifted,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Failures of a single billiard step or of the launch data.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("state is not on the zero-energy surface (|H| = {residual:e})")]
    NotZeroEnergy { residual: f64 },
    #[error("collision state (|q| = {modulus:e})")]
    CollisionState { modulus: f64 },
    #[error("anomaly {nu} outside the arc's domain")]
    DomainError { nu: f64 },
    #[error("grazing intersection with the wall at t = {t} (sin angle {sine:e})")]
    TangencyDetected { t: f64, sine: f64 },
    #[error("trajectory leaves without meeting the wall")]
    NoIntersection,
    #[error("radial arc reaches the origin before the wall")]
    CollisionReached,
    #[error("launch direction is not strictly inside the table (angle {angle})")]
    GrazingLaunch { angle: f64 },
    #[error("point is not on the ellipse (residual {residual:e})")]
    PointOffEllipse { residual: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Lift(#[from] LiftError),
}

/// Why an orbit stopped before the requested bounce count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Termination {
    /// Index of the last bounce that was completed.
    pub after_bounce: usize,
    #[serde(serialize_with = "reason_text")]
    pub reason: DynamicsError,
}

fn reason_text<S: serde::Serializer>(r: &DynamicsError, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Failures of the first-integral fit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("orbit has {got} bounces, at least {need} are required")]
    TooFewBounces { got: usize, need: usize },
    #[error("orbit data is rank deficient (singular values {singular_values:?})")]
    DegenerateOrbit { singular_values: [f64; 3] },
}
