//! Closed co-oriented wave fronts sampled on a uniform parameter grid.
//!
//! A front is stored through its Legendrian frame: position `p`, co-oriented
//! unit tangent `e`, co-orientation `n = cross(p, e)`, signed speed
//! `v = <p_u, e>` and turning rate `w = <e_u, n>`. The frame is smooth across
//! cusps; only `v` changes sign there. Geodesic curvature is `kappa = w / v`,
//! the signed arclength element is `v du`, and `kappa ds = w du` stays bounded
//! through cusps, so every integral below is a smooth periodic quadrature.
//!
//! Sign convention: a properly oriented convex front built by [`build`] runs
//! counterclockwise about its base point and is co-oriented toward it, so its
//! curvature and total curvature are positive, and its dual is the front at
//! distance pi/2 on the inner side.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{cross, inner, project_to_surface, renormalize, tangent_basis, AmbientVector, SurfaceModel, SurfacePoint};
use crate::numeric::simpson_periodic;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Circle,
    PolarFourier,
}

fn default_samples() -> usize {
    1024
}

/// Closed curve given in polar form about a base point:
/// `rho(u) = rho0 + sum_k cos[k] cos((k+1)u) + sin[k] sin((k+1)u)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub model: SurfaceModel,
    pub kind: CurveKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho0: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cos: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sin: Vec<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

pub const MIN_SAMPLES: usize = 64;

impl CurveSpec {
    pub fn circle(model: SurfaceModel, radius: f64, samples: usize) -> Self {
        Self {
            id: None,
            model,
            kind: CurveKind::Circle,
            base_point: None,
            radius: Some(radius),
            rho0: None,
            cos: Vec::new(),
            sin: Vec::new(),
            samples,
        }
    }

    pub fn polar_fourier(model: SurfaceModel, rho0: f64, cos: Vec<f64>, sin: Vec<f64>, samples: usize) -> Self {
        Self {
            id: None,
            model,
            kind: CurveKind::PolarFourier,
            base_point: None,
            radius: None,
            rho0: Some(rho0),
            cos,
            sin,
            samples,
        }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }

    pub fn with_base_point(mut self, p: [f64; 3]) -> Self {
        self.base_point = Some(p);
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    /// Names of kind-specific fields that are required but absent.
    pub fn missing_fields(&self) -> Vec<&'static str> {
        match self.kind {
            CurveKind::Circle if self.radius.is_none() => vec!["radius"],
            CurveKind::PolarFourier if self.rho0.is_none() => vec!["rho0"],
            _ => Vec::new(),
        }
    }

    fn mean_radius(&self) -> Option<f64> {
        match self.kind {
            CurveKind::Circle => self.radius,
            CurveKind::PolarFourier => self.rho0,
        }
    }

    fn harmonics(&self) -> (&[f64], &[f64]) {
        match self.kind {
            CurveKind::Circle => (&[], &[]),
            CurveKind::PolarFourier => (&self.cos, &self.sin),
        }
    }

    /// Radius function and its first two derivatives at `u`.
    pub fn radius_at<T: Real>(&self, u: T) -> (T, T, T) {
        let rho0 = T::lit(self.mean_radius().unwrap_or(f64::NAN));
        let (cs, ss) = self.harmonics();
        let (mut r, mut r1, mut r2) = (rho0, T::zero(), T::zero());
        let len = cs.len().max(ss.len());
        for k in 0..len {
            let nf = T::from_usize_lossy(k + 1);
            let a = T::lit(cs.get(k).copied().unwrap_or(0.0));
            let b = T::lit(ss.get(k).copied().unwrap_or(0.0));
            let (sn, cn) = (nf * u).sin_cos();
            r = r + a * cn + b * sn;
            r1 = r1 + nf * (b * cn - a * sn);
            r2 = r2 - nf * nf * (a * cn + b * sn);
        }
        (r, r1, r2)
    }

    pub fn validate(&self) -> Result<()> {
        let missing = self.missing_fields();
        if !missing.is_empty() {
            return Err(Error::SpecInvalid(format!("missing field(s): {}", missing.join(", "))));
        }
        if self.samples < MIN_SAMPLES {
            return Err(Error::SpecInvalid(format!(
                "samples = {} (need at least {MIN_SAMPLES})",
                self.samples
            )));
        }
        let all_finite = self.mean_radius().is_some_and(f64::is_finite)
            && self.cos.iter().chain(&self.sin).all(|x| x.is_finite());
        if !all_finite {
            return Err(Error::SpecInvalid("non-finite coefficient".into()));
        }
        if let Some(bp) = self.base_point {
            project_to_surface(AmbientVector::from_array(bp), self.model)
                .map_err(|e| Error::SpecInvalid(format!("base point: {e}")))?;
        }
        let check = 8 * self.samples;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..check {
            let u = std::f64::consts::TAU * i as f64 / check as f64;
            let (r, _, _) = self.radius_at(u);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if lo <= 0.0 {
            return Err(Error::SpecInvalid(format!("radius function reaches {lo} <= 0")));
        }
        if self.model == SurfaceModel::Sphere && hi >= std::f64::consts::PI {
            return Err(Error::SpecInvalid(format!("radius function reaches {hi} >= pi on the sphere")));
        }
        Ok(())
    }
}

/// Parameter of a cusp, interpolated linearly between samples `index` and
/// `index + 1` (cyclically).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cusp<T> {
    pub index: usize,
    pub param: T,
}

#[derive(Clone, Debug)]
pub struct WaveFront<T> {
    pub model: SurfaceModel,
    /// Parameter period; samples sit at `u_i = i * period / N`.
    pub period: T,
    pub positions: Vec<AmbientVector<T>>,
    /// First parameter derivative `v e`.
    pub d1: Vec<AmbientVector<T>>,
    /// Second parameter derivative, present for analytically built fronts.
    pub d2: Option<Vec<AmbientVector<T>>>,
    pub tangents: Vec<AmbientVector<T>>,
    pub normals: Vec<AmbientVector<T>>,
    pub signed_speed: Vec<T>,
    pub turning: Vec<T>,
    pub speed: Vec<T>,
    pub kappa: Vec<T>,
    pub sign: Vec<T>,
    pub cusps: Vec<Cusp<T>>,
    pub closed: bool,
}

impl<T: Real> WaveFront<T> {
    /// Assembles a front from its Legendrian frame samples.
    #[allow(clippy::too_many_arguments)]
    pub fn from_frames(
        model: SurfaceModel,
        period: T,
        positions: Vec<AmbientVector<T>>,
        tangents: Vec<AmbientVector<T>>,
        normals: Vec<AmbientVector<T>>,
        signed_speed: Vec<T>,
        turning: Vec<T>,
        d2: Option<Vec<AmbientVector<T>>>,
    ) -> Self {
        let n = positions.len();
        assert!(
            tangents.len() == n && normals.len() == n && signed_speed.len() == n && turning.len() == n,
            "frame arrays must share one length"
        );
        let d1 = tangents.iter().zip(&signed_speed).map(|(&e, &v)| e * v).collect();
        let speed = signed_speed.iter().map(|v| v.abs()).collect();
        let kappa = signed_speed
            .iter()
            .zip(&turning)
            .map(|(&v, &w)| {
                if v == T::zero() {
                    if w == T::zero() {
                        T::zero()
                    } else {
                        T::infinity() * w.signum()
                    }
                } else {
                    w / v
                }
            })
            .collect();
        let (cusps, sign) = scan_sign_changes(&signed_speed, period);
        Self {
            model,
            period,
            positions,
            d1,
            d2,
            tangents,
            normals,
            signed_speed,
            turning,
            speed,
            kappa,
            sign,
            cusps,
            closed: true,
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn step(&self) -> T {
        self.period / T::from_usize_lossy(self.len())
    }

    pub fn param(&self, i: usize) -> T {
        self.step() * T::from_usize_lossy(i)
    }

    pub fn point(&self, i: usize) -> SurfacePoint<T> {
        SurfacePoint {
            v: self.positions[i],
            model: self.model,
        }
    }

    pub fn is_smooth(&self) -> bool {
        self.cusps.is_empty() && self.speed.iter().all(|&s| s > T::lit(1e-9))
    }

    pub fn min_kappa(&self) -> T {
        self.kappa.iter().fold(T::infinity(), |m, &k| m.min(k))
    }

    /// Smallest `|kappa|` over samples that are not adjacent to a cusp.
    pub fn min_abs_kappa_off_cusps(&self) -> T {
        let n = self.len();
        let near = self.near_cusp_mask(1);
        (0..n)
            .filter(|&i| !near[i])
            .fold(T::infinity(), |m, i| m.min(self.kappa[i].abs()))
    }

    /// Marks samples within `radius` indices of a cusp.
    pub fn near_cusp_mask(&self, radius: usize) -> Vec<bool> {
        let n = self.len();
        let mut mask = vec![false; n];
        for c in &self.cusps {
            for k in 0..=(2 * radius + 1) {
                let j = (c.index + n + k - radius) % n;
                mask[j] = true;
            }
        }
        mask
    }

    /// Same front with the starting sample moved to index `k`.
    pub fn rebased(&self, k: usize) -> Self {
        let n = self.len();
        let rot = |v: &Vec<AmbientVector<T>>| -> Vec<AmbientVector<T>> { (0..n).map(|i| v[(i + k) % n]).collect() };
        let rots = |v: &Vec<T>| -> Vec<T> { (0..n).map(|i| v[(i + k) % n]).collect() };
        let mut out = Self::from_frames(
            self.model,
            self.period,
            rot(&self.positions),
            rot(&self.tangents),
            rot(&self.normals),
            rots(&self.signed_speed),
            rots(&self.turning),
            self.d2.as_ref().map(rot),
        );
        out.closed = self.closed;
        out
    }

    /// Same point set traversed backwards, with the opposite co-orientation.
    pub fn reversed(&self) -> Self {
        let n = self.len();
        let idx = |i: usize| (n - i) % n;
        let mut out = Self::from_frames(
            self.model,
            self.period,
            (0..n).map(|i| self.positions[idx(i)]).collect(),
            (0..n).map(|i| -self.tangents[idx(i)]).collect(),
            (0..n).map(|i| -self.normals[idx(i)]).collect(),
            (0..n).map(|i| self.signed_speed[idx(i)]).collect(),
            (0..n).map(|i| -self.turning[idx(i)]).collect(),
            self.d2.as_ref().map(|d| (0..n).map(|i| d[idx(i)]).collect()),
        );
        out.closed = self.closed;
        out
    }
}

/// Cusp detection on a signed speed field: zero crossings between samples,
/// ignoring a dead zone of relative size `1e-13` around zero.
fn scan_sign_changes<T: Real>(v: &[T], period: T) -> (Vec<Cusp<T>>, Vec<T>) {
    let n = v.len();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let h = period / T::from_usize_lossy(n);
    let vmax = v.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let dead = vmax * T::lit(1e-13);
    let sgn = |x: T| -> i8 {
        if x > dead {
            1
        } else if x < -dead {
            -1
        } else {
            0
        }
    };
    // sign field: zero samples inherit the last nonzero sign (cyclically)
    let mut signs: Vec<i8> = v.iter().map(|&x| sgn(x)).collect();
    if let Some(start) = signs.iter().position(|&s| s != 0) {
        let mut last = signs[start];
        for k in 1..=n {
            let j = (start + k) % n;
            if signs[j] == 0 {
                signs[j] = last;
            } else {
                last = signs[j];
            }
        }
    } else {
        signs.iter_mut().for_each(|s| *s = 1);
    }
    let mut cusps = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        if signs[i] != signs[j] {
            let (vi, vj) = (v[i], v[j]);
            let frac = if vi == vj { T::half() } else { vi / (vi - vj) };
            let frac = frac.max(T::zero()).min(T::one());
            cusps.push(Cusp {
                index: i,
                param: h * (T::from_usize_lossy(i) + frac),
            });
        }
    }
    let sign = signs.iter().map(|&s| if s < 0 { -T::one() } else { T::one() }).collect();
    (cusps, sign)
}

/// Samples a [`CurveSpec`] with analytic first and second derivatives.
///
/// With `R(u) = cos u e1 + sin u e2`, the curve is
/// `G(u) = c(rho) p0 + s(rho) R(u)`; curvature comes from the Frenet
/// decomposition `kappa = <G'', cross(G, G')> / |G'|^3`.
pub fn build<T: Real>(spec: &CurveSpec) -> Result<WaveFront<T>> {
    spec.validate()?;
    let m = spec.model;
    let p0 = match spec.base_point {
        Some(bp) => {
            let p = project_to_surface(AmbientVector::from_array(bp), m)?;
            SurfacePoint {
                v: AmbientVector::new(T::lit(p.v.x), T::lit(p.v.y), T::lit(p.v.z)),
                model: m,
            }
        }
        None => SurfacePoint::north_pole(m),
    };
    let (e1, e2) = tangent_basis(&p0);
    let k: T = m.curvature();
    let n = spec.samples;
    let period = T::TAU();
    let h = period / T::from_usize_lossy(n);

    let mut positions = Vec::with_capacity(n);
    let mut tangents = Vec::with_capacity(n);
    let mut normals = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    let mut d2 = Vec::with_capacity(n);
    for i in 0..n {
        let u = h * T::from_usize_lossy(i);
        let (rho, r1, r2) = spec.radius_at(u);
        let (c, s) = (m.c(rho), m.s(rho));
        let (su, cu) = u.sin_cos();
        let radial = e1 * cu + e2 * su;
        let around = e1 * (-su) + e2 * cu;
        let g = p0.v * c + radial * s;
        // unit radial direction (away from p0) at g
        let dir = p0.v * (-k * s) + radial * c;
        let g1 = dir * r1 + around * s;
        let g2 = dir * (r2 - s * c) + around * (T::two() * r1 * c) - g * (k * (r1 * r1 + s * s));
        let g = renormalize(g, m);
        let sp = m.tangent_norm(g1);
        let e = g1 * sp.recip();
        let nrm = cross(g, e, m);
        let kappa_num = inner(g2, cross(g, g1, m), m);
        positions.push(g);
        tangents.push(e);
        normals.push(nrm);
        v.push(sp);
        w.push(kappa_num / (sp * sp));
        d2.push(g2);
    }
    Ok(WaveFront::from_frames(m, period, positions, tangents, normals, v, w, Some(d2)))
}

/// Integral of the signed arclength element.
pub fn algebraic_length<T: Real>(w: &WaveFront<T>) -> T {
    simpson_periodic(&w.signed_speed, w.step())
}

fn signed_curvature_integral<T: Real>(w: &WaveFront<T>) -> T {
    simpson_periodic(&w.turning, w.step())
}

/// Area of the characteristic chain, via `ACC = int k ds` (signed).
pub fn acc<T: Real>(w: &WaveFront<T>) -> Result<T> {
    if w.model != SurfaceModel::Sphere {
        return Err(Error::WrongModel {
            expected: SurfaceModel::Sphere,
        });
    }
    Ok(signed_curvature_integral(w))
}

/// Area of a properly oriented convex spherical curve, `2 pi - int kappa`.
pub fn area_convex<T: Real>(w: &WaveFront<T>) -> Result<T> {
    let total = acc(w)?;
    let min_kappa = w.min_kappa();
    if !w.is_smooth() || min_kappa < T::lit(-1e-9) {
        return Err(Error::NotConvex {
            min_kappa: min_kappa.to_f64_lossy(),
        });
    }
    if total <= T::zero() {
        return Err(Error::NotProper {
            total: total.to_f64_lossy(),
        });
    }
    Ok(T::TAU() - total)
}

/// Signed total curvature of a hyperbolic front.
pub fn total_curvature<T: Real>(w: &WaveFront<T>) -> Result<T> {
    if w.model != SurfaceModel::Hyperbolic {
        return Err(Error::WrongModel {
            expected: SurfaceModel::Hyperbolic,
        });
    }
    Ok(signed_curvature_integral(w))
}

/// Area enclosed by a simple smooth hyperbolic front, `C - 2 pi`.
pub fn hyperbolic_area<T: Real>(w: &WaveFront<T>) -> Result<T> {
    Ok(total_curvature(w)? - T::TAU())
}

/// Moves every point distance `d` along its co-orientation.
///
/// With `K = <p,p>`, the moved frame is `p' = c p + s n`, `e' = e`,
/// `n' = -K s p + c n`, `v' = c v - s w`, `w' = c w + K s v`.
pub fn equidistant<T: Real>(w: &WaveFront<T>, d: T) -> WaveFront<T> {
    if d == T::zero() {
        return w.clone();
    }
    let m = w.model;
    let k: T = m.curvature();
    let (c, s) = (m.c(d), m.s(d));
    let n = w.len();
    let mut positions = Vec::with_capacity(n);
    let mut normals = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    let mut tw = Vec::with_capacity(n);
    for i in 0..n {
        let p = w.positions[i];
        let nn = w.normals[i];
        positions.push(renormalize(p * c + nn * s, m));
        normals.push(p * (-k * s) + nn * c);
        v.push(c * w.signed_speed[i] - s * w.turning[i]);
        tw.push(c * w.turning[i] + k * s * w.signed_speed[i]);
    }
    let mut out = WaveFront::from_frames(m, w.period, positions, w.tangents.clone(), normals, v, tw, None);
    out.closed = w.closed;
    out
}

/// Spherical dual: the equidistant at distance pi/2.
pub fn dual<T: Real>(w: &WaveFront<T>) -> Result<WaveFront<T>> {
    if w.model != SurfaceModel::Sphere {
        return Err(Error::WrongModel {
            expected: SurfaceModel::Sphere,
        });
    }
    Ok(equidistant(w, T::FRAC_PI_2()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CuspScan<T> {
    pub cusps: Vec<Cusp<T>>,
    pub sign: Vec<T>,
}

/// Zero crossings of the signed speed and the resulting sign field.
pub fn cusp_scan<T: Real>(w: &WaveFront<T>) -> Result<CuspScan<T>> {
    let vmax = w.speed.iter().fold(T::zero(), |m, &x| m.max(x));
    if vmax <= T::lit(1e-9) {
        return Err(Error::DegenerateCurve(format!(
            "speed vanishes along the whole curve (max {vmax:e})"
        )));
    }
    let (cusps, sign) = scan_sign_changes(&w.signed_speed, w.period);
    Ok(CuspScan { cusps, sign })
}

/// Indices `i` where the curvature changes sign between samples `i` and
/// `i + 1` through zero. Sign flips of `kappa` through infinity (cusps) are
/// not inflections and are excluded, which amounts to tracking the sign of
/// the turning rate `w`.
pub fn inflection_scan<T: Real>(w: &WaveFront<T>) -> Vec<usize> {
    let n = w.len();
    let wmax = w.turning.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let vmax = w.speed.iter().fold(T::zero(), |m, &x| m.max(x));
    let dead = wmax.max(vmax) * T::lit(1e-12);
    let sgn: Vec<i8> = w
        .turning
        .iter()
        .map(|&x| if x > dead { 1 } else if x < -dead { -1 } else { 0 })
        .collect();
    let mut out = Vec::new();
    let Some(start) = sgn.iter().position(|&s| s != 0) else {
        return out;
    };
    let mut last = sgn[start];
    let mut last_idx = start;
    for k in 1..=n {
        let j = (start + k) % n;
        if sgn[j] != 0 {
            if sgn[j] != last {
                out.push(last_idx);
            }
            last = sgn[j];
            last_idx = j;
        }
    }
    out.sort_unstable();
    out
}
