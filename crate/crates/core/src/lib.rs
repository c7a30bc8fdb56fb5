//! Bicycle kinematics on the unit sphere and the hyperbolic plane.
//!
//! Curves live on `x^2 + y^2 + z^2 = 1` or on the upper sheet of
//! `x^2 + y^2 - z^2 = -1`. A front track is sampled as a [`WaveFront`]; the
//! [`bicycle`] module integrates the steering angle and reconstructs rear
//! tracks, [`monodromy`] turns one traversal into a Möbius map of the circle,
//! and [`verify`] checks the isoperimetric and Menzin statements.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases fix `f64`.

pub mod bicycle;
pub mod error;
pub mod geometry;
pub mod monodromy;
pub mod numeric;
pub mod scalar;
pub mod support;
pub mod verify;
pub mod wavefront;

pub use bicycle::{front_from_rear, integrate_steering, rear_track, speed_ratio_check, steering_rhs, BicycleParams, RearTrack, SteeringSolution};
pub use error::{Error, Result};
pub use geometry::{cross, inner, project_to_surface, AmbientVector, SurfaceModel, SurfacePoint, TangentVector};
pub use monodromy::{act, closed_rear_track, compute_monodromy, fixed_points, FixedPointData, MobiusClass, MobiusMap};
pub use scalar::Real;
pub use verify::{CheckStatus, MenzinSweepReport, VerificationReport};
pub use wavefront::{build, CurveKind, CurveSpec, WaveFront};

pub type AmbientVector64 = AmbientVector<f64>;
pub type SurfacePoint64 = SurfacePoint<f64>;
pub type WaveFront64 = WaveFront<f64>;
pub type BicycleParams64 = BicycleParams<f64>;
pub type SteeringSolution64 = SteeringSolution<f64>;
pub type RearTrack64 = RearTrack<f64>;
pub type MobiusMap64 = MobiusMap<f64>;
