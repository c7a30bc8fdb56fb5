//! Ambient linear algebra for the two constant-curvature models.
//!
//! The sphere is the unit sphere in R^3 with the Euclidean form. The
//! hyperbolic plane is the upper sheet of `x^2 + y^2 - z^2 = -1` with the
//! Lorentz form `dx^2 + dy^2 - dz^2`, which is positive definite on tangent
//! spaces. Every formula in the crate is written once in terms of the model
//! trig pair `c`/`s` (cos/sin or cosh/sinh) and the sign `K = <p,p>`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceModel {
    Sphere,
    Hyperbolic,
}

impl SurfaceModel {
    /// Gaussian curvature of the model, which is also `<p,p>` for every point.
    #[inline]
    pub fn curvature<T: Real>(self) -> T {
        match self {
            SurfaceModel::Sphere => T::one(),
            SurfaceModel::Hyperbolic => -T::one(),
        }
    }

    /// `cos x` or `cosh x`.
    #[inline]
    pub fn c<T: Real>(self, x: T) -> T {
        match self {
            SurfaceModel::Sphere => x.cos(),
            SurfaceModel::Hyperbolic => x.cosh(),
        }
    }

    /// `sin x` or `sinh x`.
    #[inline]
    pub fn s<T: Real>(self, x: T) -> T {
        match self {
            SurfaceModel::Sphere => x.sin(),
            SurfaceModel::Hyperbolic => x.sinh(),
        }
    }

    /// `cot x` or `coth x`.
    #[inline]
    pub fn ct<T: Real>(self, x: T) -> T {
        self.c(x) / self.s(x)
    }

    #[inline]
    pub fn inner<T: Real>(self, u: AmbientVector<T>, w: AmbientVector<T>) -> T {
        inner(u, w, self)
    }

    #[inline]
    pub fn cross<T: Real>(self, u: AmbientVector<T>, w: AmbientVector<T>) -> AmbientVector<T> {
        cross(u, w, self)
    }

    /// Norm of a tangent vector (the form is positive there in both models).
    #[inline]
    pub fn tangent_norm<T: Real>(self, v: AmbientVector<T>) -> T {
        inner(v, v, self).max(T::zero()).sqrt()
    }

    pub fn name(self) -> &'static str {
        match self {
            SurfaceModel::Sphere => "sphere",
            SurfaceModel::Hyperbolic => "hyperbolic",
        }
    }
}

impl std::fmt::Display for SurfaceModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AmbientVector<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> AmbientVector<T> {
    #[inline]
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn e1() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }

    pub fn e2() -> Self {
        Self::new(T::zero(), T::one(), T::zero())
    }

    pub fn e3() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }

    /// Euclidean dot product.
    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    /// Euclidean cross product.
    #[inline]
    pub fn euclid_cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn max_abs(self) -> T {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl<T: Real> Add for AmbientVector<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> AddAssign for AmbientVector<T> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for AmbientVector<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Neg for AmbientVector<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul<T> for AmbientVector<T> {
    type Output = Self;
    #[inline]
    fn mul(self, k: T) -> Self {
        Self::new(self.x * k, self.y * k, self.z * k)
    }
}

/// Bilinear form of the model: Euclidean dot on the sphere, Lorentz form
/// (z-term negated) on the hyperboloid.
#[inline]
pub fn inner<T: Real>(u: AmbientVector<T>, w: AmbientVector<T>, m: SurfaceModel) -> T {
    let zz = u.z * w.z;
    match m {
        SurfaceModel::Sphere => u.x * w.x + u.y * w.y + zz,
        SurfaceModel::Hyperbolic => u.x * w.x + u.y * w.y - zz,
    }
}

/// Cross product compatible with the model form: `<u x w, u> = <u x w, w> = 0`.
///
/// On the hyperboloid this is the determinant with rows `(i, j, -k)`, `u`, `w`,
/// i.e. the Euclidean cross product with its z-component negated.
#[inline]
pub fn cross<T: Real>(u: AmbientVector<T>, w: AmbientVector<T>, m: SurfaceModel) -> AmbientVector<T> {
    let c = u.euclid_cross(w);
    match m {
        SurfaceModel::Sphere => c,
        SurfaceModel::Hyperbolic => AmbientVector::new(c.x, c.y, -c.z),
    }
}

/// A point of the surface, `<v,v> = K` (and `z > 0` on the hyperboloid).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurfacePoint<T> {
    pub v: AmbientVector<T>,
    pub model: SurfaceModel,
}

impl<T: Real> SurfacePoint<T> {
    /// Wraps `v` after checking the surface constraint to `1e-10`.
    pub fn new(v: AmbientVector<T>, model: SurfaceModel) -> Result<Self> {
        if model == SurfaceModel::Hyperbolic && v.z <= T::zero() {
            return Err(Error::WrongSheet);
        }
        let q = inner(v, v, model);
        let k: T = model.curvature();
        if (q - k).abs() > T::lit(1e-10) {
            return Err(Error::OffSurface(q.to_f64_lossy()));
        }
        Ok(Self { v, model })
    }

    /// The point (0,0,1), valid in both models.
    pub fn north_pole(model: SurfaceModel) -> Self {
        Self {
            v: AmbientVector::e3(),
            model,
        }
    }
}

/// A tangent vector at `base`: `<base, v> = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TangentVector<T> {
    pub base: SurfacePoint<T>,
    pub v: AmbientVector<T>,
}

impl<T: Real> TangentVector<T> {
    pub fn new(base: SurfacePoint<T>, v: AmbientVector<T>) -> Result<Self> {
        let d = inner(base.v, v, base.model);
        if d.abs() > T::lit(1e-10) {
            return Err(Error::NotTangent(d.to_f64_lossy()));
        }
        Ok(Self { base, v })
    }

    pub fn norm(&self) -> T {
        self.base.model.tangent_norm(self.v)
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < T::lit(1e-14) {
            return Err(Error::NullVector);
        }
        Ok(Self {
            base: self.base,
            v: self.v * n.recip(),
        })
    }
}

/// Rescales `v` so that `|<v,v>| = 1`.
pub fn project_to_surface<T: Real>(v: AmbientVector<T>, m: SurfaceModel) -> Result<SurfacePoint<T>> {
    let q = inner(v, v, m);
    if q.abs() < T::lit(1e-14) {
        return Err(Error::NullVector);
    }
    match m {
        SurfaceModel::Sphere => {
            if q <= T::zero() {
                return Err(Error::NullVector);
            }
        }
        SurfaceModel::Hyperbolic => {
            if v.z <= T::zero() {
                return Err(Error::WrongSheet);
            }
            if q >= T::zero() {
                return Err(Error::NullVector);
            }
        }
    }
    Ok(SurfacePoint {
        v: v * q.abs().sqrt().recip(),
        model: m,
    })
}

/// Renormalization used inside hot loops, where the input is known to be
/// within rounding of the surface.
#[inline]
pub(crate) fn renormalize<T: Real>(v: AmbientVector<T>, m: SurfaceModel) -> AmbientVector<T> {
    let q = inner(v, v, m).abs();
    if q > T::zero() {
        v * q.sqrt().recip()
    } else {
        v
    }
}

/// Point at distance `d` along the geodesic leaving `p` with unit velocity `t`:
/// `c(d) p + s(d) t`.
pub fn geodesic_point<T: Real>(p: &SurfacePoint<T>, t: &TangentVector<T>, d: T) -> SurfacePoint<T> {
    if d == T::zero() {
        return *p;
    }
    let m = p.model;
    let v = p.v * m.c(d) + t.v * m.s(d);
    SurfacePoint {
        v: renormalize(v, m),
        model: m,
    }
}

/// Orthonormal tangent basis `(e1, e2)` at `p`, with `cross(p, e1) = e2`.
pub fn tangent_basis<T: Real>(p: &SurfacePoint<T>) -> (AmbientVector<T>, AmbientVector<T>) {
    let m = p.model;
    let k: T = m.curvature();
    // Seed with the coordinate axis least aligned with p.
    let a = p.v.x.abs();
    let b = p.v.y.abs();
    let seed = if a <= b { AmbientVector::e1() } else { AmbientVector::e2() };
    let e1 = seed - p.v * (inner(seed, p.v, m) / k);
    let e1 = e1 * m.tangent_norm(e1).recip();
    let e2 = cross(p.v, e1, m);
    (e1, e2)
}
