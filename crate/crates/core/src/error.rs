use thiserror::Error;

use crate::geometry::SurfaceModel;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector has (near) zero norm under the model form")]
    NullVector,
    #[error("vector lies on the lower sheet of the hyperboloid (z <= 0)")]
    WrongSheet,
    #[error("point violates the surface constraint: <v,v> = {0}")]
    OffSurface(f64),
    #[error("vector is not tangent at its base point: <p,v> = {0}")]
    NotTangent(f64),
    #[error("invalid curve specification: {0}")]
    SpecInvalid(String),
    #[error("invalid bicycle parameters: {0}")]
    ParamsInvalid(String),
    #[error("operation requires the {expected:?} model")]
    WrongModel { expected: SurfaceModel },
    #[error("curve is not convex: min curvature {min_kappa}")]
    NotConvex { min_kappa: f64 },
    #[error("curve is not properly oriented: total curvature {total} <= 0")]
    NotProper { total: f64 },
    #[error("curve is not horocyclically convex: min |curvature| {min_abs_kappa}")]
    NotHorocyclicallyConvex { min_abs_kappa: f64 },
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("front has cusps; a smooth front is required")]
    NotSmooth,
    #[error("steering integration left the stability window at u = {u}")]
    StepUnstable { u: f64 },
    #[error("monodromy is not hyperbolic ({class})")]
    NotHyperbolic { class: String },
    #[error("monodromy has no fixed point")]
    NoFixedPoint,
    #[error("sample grids do not match ({0} vs {1})")]
    GridMismatch(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
