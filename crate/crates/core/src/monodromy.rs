//! Monodromy of the steering equation as a Möbius map of the circle.
//!
//! With `y = tan(alpha / 2)` the steering equation becomes the Riccati
//! equation `y' = -(kappa/2) y^2 + c0 y - kappa/2`. Writing `y = u1 / u2`
//! for a solution of the linear system `U' = A U`,
//!
//! ```text
//! A = [[ c0/2,    -kappa/2 ],
//!      [ kappa/2, -c0/2    ]]
//! ```
//!
//! gives `y' = (u1' u2 - u1 u2') / u2^2 = -(kappa/2) y^2 + c0 y - kappa/2`,
//! and `tr A = 0` keeps `det U = 1`. Integration runs in the front parameter,
//! so `A` is multiplied by `ds/du`.

use serde::{Deserialize, Serialize};

use crate::bicycle::{front_from_rear, integrate_with, rear_track, BicycleParams, RearTrack, StageCoefficients, SteeringSolution};
use crate::error::{Error, Result};
use crate::geometry::SurfaceModel;
use crate::numeric::{circular_distance, wrap_angle};
use crate::scalar::Real;
use crate::wavefront::{algebraic_length, WaveFront};

pub const DEFAULT_TOL_PARABOLIC: f64 = 1e-8;

/// Integrated matrices are divided by `sqrt(det)` only while entries stay below this.
const NORMALIZE_BELOW: f64 = 1e2;

/// Entries are rescaled, and `log_scale` bumped, once they exceed this.
const RESCALE_AT: f64 = 1e64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MobiusClass {
    Elliptic,
    Parabolic,
    Hyperbolic,
    Identity,
}

impl MobiusClass {
    pub fn name(self) -> &'static str {
        match self {
            MobiusClass::Elliptic => "elliptic",
            MobiusClass::Parabolic => "parabolic",
            MobiusClass::Hyperbolic => "hyperbolic",
            MobiusClass::Identity => "identity",
        }
    }
}

impl std::fmt::Display for MobiusClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A real Möbius map `y -> (a y + b) / (c y + d)`, stored as
/// `exp(log_scale) * [[a, b], [c, d]]`.
///
/// When `log_scale` is zero the matrix has determinant 1 and nonnegative
/// trace. A positive `log_scale` only occurs for maps so strongly hyperbolic
/// that the unit-determinant entries overflow; the stored matrix is then a
/// rescaled copy with the same action on the circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MobiusMap<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub log_scale: T,
    pub class: MobiusClass,
    pub tol_parabolic: T,
    /// Largest `|det U - 1|` seen while integrating (zero for maps built
    /// directly from entries).
    pub max_det_drift: T,
}

impl<T: Real> MobiusMap<T> {
    /// Normalizes to determinant 1 and nonnegative trace, then classifies.
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Self::from_scaled(a, b, c, d, T::zero(), T::lit(DEFAULT_TOL_PARABOLIC))
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub(crate) fn from_scaled(a: T, b: T, c: T, d: T, log_scale: T, tol: T) -> Self {
        Self::canonical(a, b, c, d, log_scale, tol, true)
    }

    fn canonical(a: T, b: T, c: T, d: T, log_scale: T, tol: T, normalize: bool) -> Self {
        let (mut a, mut b, mut c, mut d) = (a, b, c, d);
        if normalize && log_scale == T::zero() {
            let det = a * d - b * c;
            if det > T::zero() {
                let r = det.sqrt().recip();
                a = a * r;
                b = b * r;
                c = c * r;
                d = d * r;
            }
        }
        if a + d < T::zero() {
            a = -a;
            b = -b;
            c = -c;
            d = -d;
        }
        let mut m = Self {
            a,
            b,
            c,
            d,
            log_scale,
            class: MobiusClass::Identity,
            tol_parabolic: tol,
            max_det_drift: T::zero(),
        };
        m.classify_with(tol);
        m
    }

    pub fn det(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    /// Trace of the unit-determinant matrix (infinite if it overflows).
    pub fn trace(&self) -> T {
        let t = self.a + self.d;
        if self.log_scale == T::zero() {
            t
        } else {
            (t.ln() + self.log_scale).exp()
        }
    }

    /// `ln |tr|`, finite even when the trace itself overflows.
    pub fn log_trace(&self) -> T {
        (self.a + self.d).abs().ln() + self.log_scale
    }

    /// `|tr| - 2`.
    pub fn trace_gap(&self) -> T {
        self.trace().abs() - T::two()
    }

    pub fn classify_with(&mut self, tol: T) {
        self.tol_parabolic = tol;
        let gap = self.trace_gap();
        self.class = if gap < -tol {
            MobiusClass::Elliptic
        } else if gap > tol {
            MobiusClass::Hyperbolic
        } else if self.log_scale == T::zero() && self.distance_to_identity() < tol {
            MobiusClass::Identity
        } else {
            MobiusClass::Parabolic
        };
    }

    /// `|| M - I ||` in the induced infinity norm (max row sum).
    pub fn distance_to_identity(&self) -> T {
        let one = T::one();
        let r1 = (self.a - one).abs() + self.b.abs();
        let r2 = self.c.abs() + (self.d - one).abs();
        r1.max(r2)
    }

    /// `min(|| M - I ||, || M + I ||)`, infinity norm.
    pub fn distance_to_identity_up_to_sign(&self) -> T {
        let one = T::one();
        let plus = ((self.a + one).abs() + self.b.abs()).max(self.c.abs() + (self.d + one).abs());
        self.distance_to_identity().min(plus)
    }

    /// Unit-determinant entries `[[a, b], [c, d]]` (may overflow).
    pub fn matrix(&self) -> [[T; 2]; 2] {
        let k = self.log_scale.exp();
        [[self.a * k, self.b * k], [self.c * k, self.d * k]]
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let a = self.a * other.a + self.b * other.c;
        let b = self.a * other.b + self.b * other.d;
        let c = self.c * other.a + self.d * other.c;
        let d = self.c * other.b + self.d * other.d;
        let ls = self.log_scale + other.log_scale;
        Self::from_scaled(a, b, c, d, ls, self.tol_parabolic)
    }
}

/// The trace-free lift `[[c0/2, -kappa/2], [kappa/2, -c0/2]]`.
pub fn sl2_coefficients<T: Real>(kappa: T, p: &BicycleParams<T>) -> [[T; 2]; 2] {
    let h = T::half();
    let c0 = p.c0();
    [[h * c0, -h * kappa], [h * kappa, -h * c0]]
}

/// Action on the circle coordinate `theta = 2 atan(y)`, in `(-pi, pi]`.
///
/// Evaluated projectively on `(sin(theta/2), cos(theta/2))`, which covers
/// `y = infinity` and `c y + d = 0` without special cases.
pub fn act<T: Real>(m: &MobiusMap<T>, theta: T) -> T {
    let (s, c) = (theta * T::half()).sin_cos();
    let p = m.a * s + m.b * c;
    let q = m.c * s + m.d * c;
    wrap_angle(T::two() * p.atan2(q))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FixedPointData<T> {
    /// Projective coordinate; `None` is the point at infinity (`theta = pi`).
    pub y: Option<T>,
    pub theta: T,
    /// `M'(theta)`, equal to `(c y + d)^-2` for unit determinant.
    pub derivative: T,
    pub log_derivative: T,
    pub attracting: bool,
}

fn eigvec<T: Real>(m: &MobiusMap<T>, lambda: T) -> (T, T) {
    let u = (m.b, lambda - m.a);
    let w = (lambda - m.d, m.c);
    if u.0.abs() + u.1.abs() >= w.0.abs() + w.1.abs() {
        u
    } else {
        w
    }
}

fn fixed_point<T: Real>(v: (T, T), log_derivative: T) -> FixedPointData<T> {
    let theta = wrap_angle(T::two() * v.0.atan2(v.1));
    FixedPointData {
        y: if v.1 == T::zero() { None } else { Some(v.0 / v.1) },
        theta,
        derivative: log_derivative.exp(),
        log_derivative,
        attracting: log_derivative < T::zero(),
    }
}

/// Fixed points on the circle: none for elliptic maps and the identity, one
/// for parabolic maps, two for hyperbolic maps (attracting first).
pub fn fixed_points<T: Real>(m: &MobiusMap<T>) -> Vec<FixedPointData<T>> {
    match m.class {
        MobiusClass::Elliptic | MobiusClass::Identity => Vec::new(),
        MobiusClass::Parabolic => {
            let lambda = if m.log_scale == T::zero() { T::one() } else { (m.a + m.d) * T::half() };
            vec![fixed_point(eigvec(m, lambda), T::zero())]
        }
        MobiusClass::Hyperbolic => {
            let t = m.a + m.d;
            let det = if m.log_scale == T::zero() { T::one() } else { m.det() };
            let disc = (t * t - T::lit(4.0) * det).max(T::zero());
            let l1 = (t + disc.sqrt()) * T::half();
            let l2 = det / l1;
            // log of the unit-determinant dominant eigenvalue
            let log_l1 = l1.ln() + m.log_scale;
            let dominant = fixed_point(eigvec(m, l1), -T::two() * log_l1);
            let other = fixed_point(eigvec(m, l2), T::two() * log_l1);
            vec![dominant, other]
        }
    }
}

/// RK4 integration of `U' = |v| A U`, `U(0) = I`, over one period of a
/// smooth front.
pub fn compute_monodromy<T: Real>(front: &WaveFront<T>, p: &BicycleParams<T>) -> Result<MobiusMap<T>> {
    compute_monodromy_with_tol(front, p, T::lit(DEFAULT_TOL_PARABOLIC))
}

pub fn compute_monodromy_with_tol<T: Real>(front: &WaveFront<T>, p: &BicycleParams<T>, tol: T) -> Result<MobiusMap<T>> {
    let coef = StageCoefficients::new(front, p)?;
    Ok(monodromy_with(&coef, p, tol))
}

pub(crate) fn monodromy_with<T: Real>(coef: &StageCoefficients<T>, p: &BicycleParams<T>, tol: T) -> MobiusMap<T> {
    let half = T::half();
    let c0 = p.c0();
    let h = coef.h;
    let gen = |k: usize| (half * c0 * coef.speed[k], half * coef.turning[k]);
    // A U for A = [[al, -be], [be, -al]]
    let apply = |(al, be): (T, T), u: [T; 4]| -> [T; 4] {
        [
            al * u[0] - be * u[2],
            al * u[1] - be * u[3],
            be * u[0] - al * u[2],
            be * u[1] - al * u[3],
        ]
    };
    let axpy = |u: [T; 4], k: [T; 4], s: T| [u[0] + s * k[0], u[1] + s * k[1], u[2] + s * k[2], u[3] + s * k[3]];
    let mut u = [T::one(), T::zero(), T::zero(), T::one()];
    let mut log_scale = T::zero();
    let mut drift = T::zero();
    let big = T::lit(RESCALE_AT);
    let six = T::lit(6.0);
    for step in 0..coef.substeps {
        let k0 = 2 * step;
        let (g1, g2, g3) = (gen(k0), gen(k0 + 1), gen(k0 + 2));
        let k1 = apply(g1, u);
        let k2 = apply(g2, axpy(u, k1, half * h));
        let k3 = apply(g2, axpy(u, k2, half * h));
        let k4 = apply(g3, axpy(u, k3, h));
        for i in 0..4 {
            u[i] = u[i] + h * (k1[i] + T::two() * (k2[i] + k3[i]) + k4[i]) / six;
        }
        if log_scale == T::zero() {
            drift = drift.max((u[0] * u[3] - u[1] * u[2] - T::one()).abs());
        }
        let mx = u.iter().fold(T::zero(), |m, x| m.max(x.abs()));
        if mx > big {
            for x in u.iter_mut() {
                *x = *x / big;
            }
            log_scale = log_scale + big.ln();
        }
    }
    // `ad - bc` carries a rounding error of order `|U|^2 eps`; dividing by
    // its root would spoil the eigenvalues of large matrices, whose
    // determinant RK4 already keeps within `max_det_drift` of 1.
    let mx = u.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let normalize = mx <= T::lit(NORMALIZE_BELOW);
    let mut m = MobiusMap::canonical(u[0], u[1], u[2], u[3], log_scale, tol, normalize);
    m.max_det_drift = drift;
    m
}

/// A closed rear track through the attracting (or parabolic) fixed point.
#[derive(Clone, Debug)]
pub struct ClosedTrack<T> {
    pub map: MobiusMap<T>,
    pub fixed_point: FixedPointData<T>,
    pub steering: SteeringSolution<T>,
    pub rear: RearTrack<T>,
}

/// Rear track that closes up after one traversal of the front.
///
/// The fixed point from the monodromy matrix is polished by Newton steps on
/// the steering map itself, whose derivative comes from the variational
/// equation.
pub fn closed_rear_track<T: Real>(front: &WaveFront<T>, p: &BicycleParams<T>) -> Result<ClosedTrack<T>> {
    let coef = StageCoefficients::new(front, p)?;
    let map = monodromy_with(&coef, p, T::lit(DEFAULT_TOL_PARABOLIC));
    let fp = fixed_points(&map)
        .into_iter()
        .min_by(|x, y| x.log_derivative.partial_cmp(&y.log_derivative).unwrap_or(std::cmp::Ordering::Equal))
        .ok_or(Error::NoFixedPoint)?;
    let mut alpha0 = fp.theta;
    let mut sol = integrate_with(front, &coef, p, alpha0)?;
    for _ in 0..4 {
        let g = wrap_angle(sol.alpha_end - alpha0);
        if g.abs() < T::lit(1e-14) {
            break;
        }
        let slope = sol.log_map_derivative.exp() - T::one();
        if slope.abs() < T::lit(1e-6) {
            break;
        }
        let next = alpha0 - g / slope;
        let trial = integrate_with(front, &coef, p, next)?;
        if wrap_angle(trial.alpha_end - next).abs() >= g.abs() {
            break;
        }
        alpha0 = next;
        sol = trial;
    }
    let rear = rear_track(front, &sol)?;
    Ok(ClosedTrack {
        map,
        fixed_point: fp,
        steering: sol,
        rear,
    })
}

/// Fixed-point derivative and trace of a hyperbolic monodromy against the
/// algebraic length `L` of the closed rear track through the attracting
/// fixed point.
///
/// `residual` and `trace_residual` test `M' = exp(-|L|)` and
/// `|tr M| = 2 cosh(L / 2)`. Linearizing the steering equation along the
/// closed track gives instead `ln M' = c0 * L` and `|tr M| = 2 cosh(c0 L / 2)`
/// with `c0 = cot l` (`coth l`); the `corrected_*` fields test that form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DerivativeLaw<T> {
    pub derivative: T,
    pub log_derivative: T,
    /// `ln M'` along the closed track from the variational equation.
    pub steering_log_derivative: T,
    pub algebraic_length: T,
    pub coefficient: T,
    pub trace: T,
    pub residual: T,
    pub trace_residual: T,
    pub corrected_residual: T,
    pub corrected_trace_residual: T,
}

fn ln_two_cosh<T: Real>(x: T) -> T {
    let a = x.abs();
    a + (-T::two() * a).exp().ln_1p()
}

pub fn length_derivative_check<T: Real>(front: &WaveFront<T>, p: &BicycleParams<T>) -> Result<DerivativeLaw<T>> {
    let track = closed_rear_track(front, p)?;
    let m = &track.map;
    if m.class != MobiusClass::Hyperbolic {
        return Err(Error::NotHyperbolic {
            class: m.class.name().to_string(),
        });
    }
    let fp = track.fixed_point;
    let len = algebraic_length(&track.rear.track);
    let c0 = p.c0();
    let rel = |log_got: T, log_want: T| (log_got - log_want).exp_m1().abs();
    let trace = m.trace();
    Ok(DerivativeLaw {
        derivative: fp.derivative,
        log_derivative: fp.log_derivative,
        steering_log_derivative: track.steering.log_map_derivative,
        algebraic_length: len,
        coefficient: c0,
        trace,
        residual: rel(fp.log_derivative, -len.abs()),
        trace_residual: (trace - T::two() * (len * T::half()).cosh()).abs(),
        corrected_residual: rel(fp.log_derivative, c0 * len),
        corrected_trace_residual: rel(m.log_trace(), ln_two_cosh(c0 * len * T::half())),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmallLProbe<T> {
    pub map: MobiusMap<T>,
    pub fixed_points: Vec<FixedPointData<T>>,
    /// Largest distance from a fixed point to the nearer of `0` and `pi`.
    pub max_pole_distance: T,
    pub attracting_theta: Option<T>,
}

pub const SMALL_L: f64 = 1e-3;

/// Monodromy of a very short bicycle (`l = 1e-3`).
pub fn small_l_probe<T: Real>(front: &WaveFront<T>, model: SurfaceModel) -> Result<SmallLProbe<T>> {
    let p = BicycleParams::new(T::lit(SMALL_L), model)?;
    let map = compute_monodromy(front, &p)?;
    let fps = fixed_points(&map);
    let max_pole_distance = fps
        .iter()
        .map(|f| circular_distance(f.theta, T::zero()).min(circular_distance(f.theta, T::PI())))
        .fold(T::zero(), |m, x| m.max(x));
    let attracting_theta = fps.iter().find(|f| f.attracting).map(|f| f.theta);
    Ok(SmallLProbe {
        map,
        fixed_points: fps,
        max_pole_distance,
        attracting_theta,
    })
}

/// Distance from the identity (up to sign) of the monodromy of the
/// derivative curve of `rear`, the front of a bicycle of length `pi/2`.
pub fn derivative_curve_identity<T: Real>(rear: &WaveFront<T>) -> Result<T> {
    if rear.model != SurfaceModel::Sphere {
        return Err(Error::WrongModel {
            expected: SurfaceModel::Sphere,
        });
    }
    let front = front_from_rear(rear, T::FRAC_PI_2(), T::one())?;
    let m = compute_monodromy(&front, &BicycleParams::derivative_curve())?;
    Ok(m.distance_to_identity_up_to_sign())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavefront::{build, CurveSpec};
    use std::f64::consts::PI;

    fn circle(m: SurfaceModel, r: f64, n: usize) -> WaveFront<f64> {
        build(&CurveSpec::circle(m, r, n)).unwrap()
    }

    fn sphere(l: f64) -> BicycleParams<f64> {
        BicycleParams::new(l, SurfaceModel::Sphere).unwrap()
    }

    #[test]
    fn lift_examples() {
        let a = sl2_coefficients(0.0, &sphere(PI / 4.0));
        assert!((a[0][0] - 0.5).abs() < 1e-15 && (a[1][1] + 0.5).abs() < 1e-15);
        assert_eq!(a[0][1], 0.0);
        let a = sl2_coefficients(1.7, &sphere(0.3));
        assert_eq!(a[0][0] + a[1][1], 0.0);
    }

    #[test]
    fn riccati_residual() {
        for &(k, l, y) in &[(0.3, 0.5, 0.2), (-1.2, 0.1, 3.0), (2.0, 1.2, -0.7)] {
            let p = sphere(l);
            let a = sl2_coefficients(k, &p);
            let (u1, u2) = (y, 1.0);
            let d1 = a[0][0] * u1 + a[0][1] * u2;
            let d2 = a[1][0] * u1 + a[1][1] * u2;
            let dy = (d1 * u2 - u1 * d2) / (u2 * u2);
            let want = -(k / 2.0) * y * y + y / f64::tan(l) - k / 2.0;
            assert!((dy - want).abs() < 1e-12);
        }
    }

    #[test]
    fn circle_classes() {
        let p = sphere(0.5);
        assert_eq!(compute_monodromy(&circle(SurfaceModel::Sphere, 0.6, 1024), &p).unwrap().class, MobiusClass::Hyperbolic);
        assert_eq!(compute_monodromy(&circle(SurfaceModel::Sphere, 0.4, 1024), &p).unwrap().class, MobiusClass::Elliptic);
        let m = compute_monodromy(&circle(SurfaceModel::Sphere, 0.5, 4096), &p).unwrap();
        assert_eq!(m.class, MobiusClass::Parabolic);
        let fps = fixed_points(&m);
        assert_eq!(fps.len(), 1);
        assert!((fps[0].derivative - 1.0).abs() < 1e-6);
    }

    #[test]
    fn circle_fixed_points() {
        let (l, r) = (0.5f64, 1.0f64);
        let m = compute_monodromy(&circle(SurfaceModel::Sphere, r, 1024), &sphere(l)).unwrap();
        assert!(m.max_det_drift < 1e-8);
        assert!((m.det() - 1.0).abs() < 1e-9);
        let star = (l.tan() / r.tan()).asin();
        let fps = fixed_points(&m);
        assert_eq!(fps.len(), 2);
        assert!(circular_distance(fps[0].theta, PI - star) < 1e-8);
        assert!(circular_distance(fps[1].theta, star) < 1e-8);
        assert!((fps[0].log_derivative + fps[1].log_derivative).abs() < 1e-12);
        for f in &fps {
            assert!(circular_distance(act(&m, f.theta), f.theta) < 1e-9);
        }
    }

    #[test]
    fn act_basics() {
        let id = MobiusMap::<f64>::identity();
        assert_eq!(id.class, MobiusClass::Identity);
        for t in [-3.0, -1.0, 0.0, 0.5, 2.0, PI] {
            assert!(circular_distance(act(&id, t), t) < 1e-15);
        }
        // y = infinity maps to a / c
        let m = MobiusMap::new(2.0, 1.0, 1.0, 1.0);
        let got = act(&m, PI);
        assert!((got - 2.0 * (2.0f64).atan()).abs() < 1e-12);
        // c y + d = 0 maps to pi
        let m = MobiusMap::new(1.0, 0.0, 1.0, 1.0);
        assert!(circular_distance(act(&m, 2.0 * (-1.0f64).atan()), PI) < 1e-12);
    }

    #[test]
    fn rebasing_preserves_trace() {
        let spec = CurveSpec::polar_fourier(SurfaceModel::Sphere, 0.9, vec![0.0, 0.05], vec![0.0, 0.0, 0.03], 1024);
        let w = build::<f64>(&spec).unwrap();
        let p = sphere(0.4);
        let m0 = compute_monodromy(&w, &p).unwrap();
        let m1 = compute_monodromy(&w.rebased(137), &p).unwrap();
        assert!((m0.trace() - m1.trace()).abs() < 1e-9);
    }

    #[test]
    fn corrected_law_on_circle() {
        let law = length_derivative_check(&circle(SurfaceModel::Sphere, 1.0, 2048), &sphere(0.5)).unwrap();
        assert!(law.corrected_residual < 1e-8);
        assert!(law.corrected_trace_residual < 1e-8);
        assert!((law.steering_log_derivative - law.log_derivative).abs() < 1e-8);
        assert!(law.algebraic_length < 0.0);
    }

    #[test]
    fn elliptic_has_no_closed_track() {
        let r = closed_rear_track(&circle(SurfaceModel::Sphere, 0.3, 512), &sphere(0.5));
        assert!(matches!(r, Err(Error::NoFixedPoint)));
        let r = length_derivative_check(&circle(SurfaceModel::Sphere, 0.3, 512), &sphere(0.5));
        assert!(matches!(r, Err(Error::NoFixedPoint)));
    }

    #[test]
    fn small_l_rescales() {
        let w = circle(SurfaceModel::Sphere, 1.0, 512);
        let probe = small_l_probe(&w, SurfaceModel::Sphere).unwrap();
        assert_eq!(probe.map.class, MobiusClass::Hyperbolic);
        assert!(probe.map.log_scale > 0.0);
        assert!(probe.max_pole_distance < 0.05);
        let a = probe.attracting_theta.unwrap();
        assert!(circular_distance(a, PI) < 0.01);
    }

    #[test]
    fn derivative_curve_of_circles() {
        let d = derivative_curve_identity(&circle(SurfaceModel::Sphere, 0.7, 1024)).unwrap();
        assert!(d < 1e-5);
        let d = derivative_curve_identity(&circle(SurfaceModel::Sphere, PI / 2.0, 256)).unwrap();
        assert!(d < 1e-12);
        assert!(derivative_curve_identity(&circle(SurfaceModel::Hyperbolic, 0.7, 256)).is_err());
    }
}
