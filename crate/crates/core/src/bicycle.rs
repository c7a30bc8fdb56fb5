//! Steering-angle integration and front/rear track reconstruction.
//!
//! `alpha` is the angle between the front velocity and the frame direction
//! from the front wheel to the rear wheel. Along the front (arclength `s`,
//! geodesic curvature `kappa`) it obeys
//!
//! ```text
//! d alpha / ds = ct(l) sin(alpha) - kappa,      ct = cot (sphere), coth (H^2)
//! ```
//!
//! The rear wheel sits at `c(l) G + s(l) b` with `b = cos(alpha) T + sin(alpha) N`.
//! Its co-oriented tangent is the frame direction continued past the rear
//! wheel, so the rear signed speed is `cos(alpha) ds` and its turning rate is
//! `sin(alpha) ds / s(l)`, giving rear curvature `tan(alpha) / s(l)`.

use crate::error::{Error, Result};
use crate::geometry::{cross, inner, renormalize, AmbientVector, SurfaceModel};
use crate::numeric::{periodic_derivative, periodic_derivative_by, periodic_second_derivative_by, refine_periodic, wrap_angle};
use crate::scalar::Real;
use crate::wavefront::WaveFront;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BicycleParams<T> {
    pub l: T,
    pub model: SurfaceModel,
    /// RK4 substeps per front sample interval.
    pub steps_per_sample: usize,
    derivative_curve: bool,
}

pub const DEFAULT_STEPS_PER_SAMPLE: usize = 4;

impl<T: Real> BicycleParams<T> {
    pub fn new(l: T, model: SurfaceModel) -> Result<Self> {
        if l.is_nan() || l <= T::zero() || !l.is_finite() {
            return Err(Error::ParamsInvalid(format!("bicycle length {l} must be positive and finite")));
        }
        if model == SurfaceModel::Sphere && l >= T::FRAC_PI_2() {
            return Err(Error::ParamsInvalid(format!(
                "bicycle length {l} must be below pi/2 on the sphere"
            )));
        }
        Ok(Self {
            l,
            model,
            steps_per_sample: DEFAULT_STEPS_PER_SAMPLE,
            derivative_curve: false,
        })
    }

    /// Spherical bicycle of length exactly pi/2, whose front track is the
    /// derivative curve of its rear track.
    pub fn derivative_curve() -> Self {
        Self {
            l: T::FRAC_PI_2(),
            model: SurfaceModel::Sphere,
            steps_per_sample: DEFAULT_STEPS_PER_SAMPLE,
            derivative_curve: true,
        }
    }

    pub fn with_steps(mut self, steps_per_sample: usize) -> Self {
        self.steps_per_sample = steps_per_sample.max(1);
        self
    }

    /// Same model and step count, different length.
    pub fn with_length(&self, l: T) -> Result<Self> {
        Ok(Self::new(l, self.model)?.with_steps(self.steps_per_sample))
    }

    /// `cot l` or `coth l` (exactly zero for the derivative-curve bicycle).
    pub fn c0(&self) -> T {
        if self.derivative_curve {
            T::zero()
        } else {
            self.model.ct(self.l)
        }
    }

    pub fn cl(&self) -> T {
        if self.derivative_curve {
            T::zero()
        } else {
            self.model.c(self.l)
        }
    }

    pub fn sl(&self) -> T {
        if self.derivative_curve {
            T::one()
        } else {
            self.model.s(self.l)
        }
    }
}

/// Right-hand side of the steering equation, `ct(l) sin(alpha) - kappa`.
pub fn steering_rhs<T: Real>(alpha: T, kappa: T, p: &BicycleParams<T>) -> T {
    p.c0() * alpha.sin() - kappa
}

/// Speed and turning rate of a smooth front on the RK4 stage grid.
///
/// `turning` is taken in the frame of motion, where it equals the stored
/// turning rate regardless of the sign of the co-oriented speed.
pub(crate) struct StageCoefficients<T> {
    pub speed: Vec<T>,
    pub turning: Vec<T>,
    pub substeps: usize,
    pub h: T,
}

impl<T: Real> StageCoefficients<T> {
    pub fn new(front: &WaveFront<T>, p: &BicycleParams<T>) -> Result<Self> {
        if !front.is_smooth() {
            return Err(Error::NotSmooth);
        }
        let steps = stable_steps(front, p);
        let speed = refine_periodic(&front.speed, steps);
        let turning = refine_periodic(&front.turning, steps);
        let substeps = front.len() * steps;
        Ok(Self {
            speed,
            turning,
            substeps,
            h: front.period / T::from_usize_lossy(substeps),
        })
    }
}

/// Substep count: the requested one, raised until `h * ct(l) * max speed`
/// stays within 1.5 so RK4 is stable for short (stiff) bicycles.
pub(crate) fn stable_steps<T: Real>(front: &WaveFront<T>, p: &BicycleParams<T>) -> usize {
    let vmax = front.speed.iter().fold(T::zero(), |m, &x| m.max(x));
    let stiff = front.step() * p.c0().abs() * vmax / T::lit(1.5);
    let need = stiff.ceil().to_usize().unwrap_or(1).max(1);
    p.steps_per_sample.max(need)
}

#[derive(Clone, Debug)]
pub struct SteeringSolution<T> {
    /// Unwrapped steering angle at every front sample.
    pub alpha: Vec<T>,
    pub alpha_end: T,
    /// `ln d alpha(end) / d alpha(0)` from the variational equation.
    pub log_map_derivative: T,
    /// Distance of `alpha_end - alpha_0` to the nearest multiple of `2 pi`.
    pub periodicity_residual: T,
    pub params: BicycleParams<T>,
}

impl<T: Real> SteeringSolution<T> {
    pub fn alpha0(&self) -> T {
        self.alpha[0]
    }
}

/// RK4 integration of the steering equation over one period of a smooth
/// front, in the front parameter `u` (`ds = |v| du`), with speed and curvature
/// interpolated cubically between samples.
pub fn integrate_steering<T: Real>(front: &WaveFront<T>, p: &BicycleParams<T>, alpha0: T) -> Result<SteeringSolution<T>> {
    let coef = StageCoefficients::new(front, p)?;
    integrate_with(front, &coef, p, alpha0)
}

pub(crate) fn integrate_with<T: Real>(
    front: &WaveFront<T>,
    coef: &StageCoefficients<T>,
    p: &BicycleParams<T>,
    alpha0: T,
) -> Result<SteeringSolution<T>> {
    let c0 = p.c0();
    let n = front.len();
    let per = coef.substeps / n;
    let h = coef.h;
    let half = T::half();
    let window = T::lit(10.0) * T::TAU();
    let rhs = |a: T, k: usize| -> (T, T) {
        let sp = coef.speed[k];
        let (sa, ca) = a.sin_cos();
        (sp * c0 * sa - coef.turning[k], sp * c0 * ca)
    };
    let mut alpha = Vec::with_capacity(n);
    let mut a = alpha0;
    let mut lam = T::zero();
    for step in 0..coef.substeps {
        if step % per == 0 {
            alpha.push(a);
        }
        let k0 = 2 * step;
        let (a1, l1) = rhs(a, k0);
        let (a2, l2) = rhs(a + half * h * a1, k0 + 1);
        let (a3, l3) = rhs(a + half * h * a2, k0 + 1);
        let (a4, l4) = rhs(a + h * a3, k0 + 2);
        let six = T::lit(6.0);
        a = a + h * (a1 + T::two() * (a2 + a3) + a4) / six;
        lam = lam + h * (l1 + T::two() * (l2 + l3) + l4) / six;
        if !a.is_finite() || (a - alpha0).abs() > window {
            return Err(Error::StepUnstable {
                u: (h * T::from_usize_lossy(step + 1)).to_f64_lossy(),
            });
        }
    }
    let periodicity_residual = wrap_angle(a - alpha0).abs();
    Ok(SteeringSolution {
        alpha,
        alpha_end: a,
        log_map_derivative: lam,
        periodicity_residual,
        params: *p,
    })
}

#[derive(Clone, Debug)]
pub struct RearTrack<T> {
    pub track: WaveFront<T>,
    pub alpha: Vec<T>,
    /// Speed of the front at each sample, `ds/du`.
    pub front_speed: Vec<T>,
    pub params: BicycleParams<T>,
    /// Side of the rear co-oriented tangent on which the front wheel sits;
    /// `front_from_rear(track, l, sigma)` rebuilds the front.
    pub sigma: T,
}

/// Rear wheel track for a given steering solution.
pub fn rear_track<T: Real>(front: &WaveFront<T>, sol: &SteeringSolution<T>) -> Result<RearTrack<T>> {
    let n = front.len();
    if sol.alpha.len() != n {
        return Err(Error::GridMismatch(sol.alpha.len(), n));
    }
    let p = &sol.params;
    let m = front.model;
    let k: T = m.curvature();
    let (cl, sl) = (p.cl(), p.sl());
    let mut positions = Vec::with_capacity(n);
    let mut tangents = Vec::with_capacity(n);
    let mut normals = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for i in 0..n {
        let g = front.positions[i];
        let sgn = front.sign[i];
        let t = front.tangents[i] * sgn;
        let nn = front.normals[i] * sgn;
        let sp = front.speed[i];
        let (sa, ca) = sol.alpha[i].sin_cos();
        let b = t * ca + nn * sa;
        positions.push(renormalize(g * cl + b * sl, m));
        tangents.push(g * (-k * sl) + b * cl);
        normals.push(cross(g, b, m));
        v.push(ca * sp);
        w.push(sa * sp / sl);
    }
    let vmax = v.iter().fold(T::zero(), |acc, x| acc.max(x.abs()));
    if vmax <= T::lit(1e-9) {
        return Err(Error::DegenerateCurve(
            "cos(alpha) vanishes identically: the rear wheel does not move".into(),
        ));
    }
    let mut track = WaveFront::from_frames(m, front.period, positions, tangents, normals, v, w, None);
    track.closed = sol.periodicity_residual < T::lit(1e-6);
    Ok(RearTrack {
        track,
        alpha: sol.alpha.clone(),
        front_speed: front.speed.clone(),
        params: *p,
        sigma: -T::one(),
    })
}

/// Front track `c(l) g + sigma s(l) e` of a bicycle whose rear wheel follows
/// `rear`, where `e` is the rear co-oriented tangent.
///
/// The front is smooth even where the rear has cusps. Its curvature needs
/// the parameter derivatives of the rear speed and turning rate, taken by
/// eighth-order periodic differences.
pub fn front_from_rear<T: Real>(rear: &WaveFront<T>, l: T, sigma: T) -> Result<WaveFront<T>> {
    let m = rear.model;
    let valid = l > T::zero()
        && l.is_finite()
        && (m == SurfaceModel::Hyperbolic || l <= T::FRAC_PI_2() + T::lit(1e-15));
    if !valid {
        return Err(Error::ParamsInvalid(format!("bicycle length {l} out of range")));
    }
    let sigma = if sigma < T::zero() { -T::one() } else { T::one() };
    let k: T = m.curvature();
    let (c, s) = if m == SurfaceModel::Sphere && (l - T::FRAC_PI_2()).abs() <= T::lit(1e-15) {
        (T::zero(), T::one())
    } else {
        (m.c(l), m.s(l))
    };
    let h = rear.step();
    let dv = periodic_derivative(&rear.signed_speed, h);
    let dw = periodic_derivative(&rear.turning, h);
    let n = rear.len();
    let mut positions = Vec::with_capacity(n);
    let mut tangents = Vec::with_capacity(n);
    let mut normals = Vec::with_capacity(n);
    let mut speed = Vec::with_capacity(n);
    let mut turning = Vec::with_capacity(n);
    for i in 0..n {
        let (g, e, nr) = (rear.positions[i], rear.tangents[i], rear.normals[i]);
        let (v, w) = (rear.signed_speed[i], rear.turning[i]);
        let gf = renormalize(g * c + e * (sigma * s), m);
        let a = e * c - g * (sigma * k * s);
        let g1 = a * v + nr * (sigma * s * w);
        let g2 = a * dv[i]
            + (g * (-c * k * v * v) + nr * (c * v * w) - e * (sigma * k * s * v * v))
            + nr * (sigma * s * dw[i])
            - e * (sigma * s * w * w);
        let sp = m.tangent_norm(g1);
        if sp <= T::zero() {
            return Err(Error::DegenerateCurve("front speed vanishes".into()));
        }
        let et = g1 * sp.recip();
        let nt = cross(gf, et, m);
        positions.push(gf);
        tangents.push(et);
        normals.push(nt);
        speed.push(sp);
        turning.push(inner(g2, nt, m) / sp);
    }
    let mut out = WaveFront::from_frames(m, rear.period, positions, tangents, normals, speed, turning, None);
    out.closed = rear.closed;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpeedRatioCheck<T> {
    /// Max relative residual of `(ds/dt)^2 = s(l)^2 k^2 + 1`.
    pub max_speed_ratio_residual: T,
    /// Max residual of `|dt/ds| = |cos alpha|`.
    pub max_cos_alpha_residual: T,
    pub samples_used: usize,
}

/// Checks the rear/front speed relations against rear speed and curvature
/// measured directly from the rear positions (periodic differences), away
/// from rear cusps (`|cos alpha| < 0.05` is skipped).
pub fn speed_ratio_check<T: Real>(rear: &RearTrack<T>) -> SpeedRatioCheck<T> {
    let tr = &rear.track;
    let m = tr.model;
    let h = tr.step();
    let zero = AmbientVector::zero();
    let g1 = periodic_derivative_by(&tr.positions, h, |a, b| a - b, |a, k| a * k, zero);
    let g2 = periodic_second_derivative_by(&tr.positions, h, |a, b| a + b, |a, k| a * k);
    let sl = rear.params.sl();
    let mut max_ratio = T::zero();
    let mut max_cos = T::zero();
    let mut used = 0;
    for i in 0..tr.len() {
        let rear_speed = m.tangent_norm(g1[i]);
        let front_speed = rear.front_speed[i];
        let ca = rear.alpha[i].cos();
        max_cos = max_cos.max((rear_speed / front_speed - ca.abs()).abs());
        if ca.abs() < T::lit(0.05) {
            continue;
        }
        used += 1;
        let k = inner(g2[i], cross(tr.positions[i], g1[i], m), m) / (rear_speed * rear_speed * rear_speed);
        let ratio = front_speed / rear_speed;
        let predicted = sl * sl * k * k + T::one();
        max_ratio = max_ratio.max((ratio * ratio - predicted).abs() / predicted);
    }
    SpeedRatioCheck {
        max_speed_ratio_residual: max_ratio,
        max_cos_alpha_residual: max_cos,
        samples_used: used,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavefront::{algebraic_length, build, CurveSpec};
    use std::f64::consts::{PI, TAU};

    fn circle(m: SurfaceModel, r: f64, n: usize) -> WaveFront<f64> {
        build(&CurveSpec::circle(m, r, n)).unwrap()
    }

    #[test]
    fn rhs_examples() {
        let p = BicycleParams::new(0.5, SurfaceModel::Sphere).unwrap();
        assert_eq!(steering_rhs(0.0, 0.7, &p), -0.7);
        let (l, r) = (0.5f64, 0.8f64);
        let star = (l.tan() / r.tan()).asin();
        assert!(steering_rhs(star, 1.0 / r.tan(), &p).abs() < 1e-15);
        let tiny = BicycleParams::new(1e-6, SurfaceModel::Sphere).unwrap();
        assert!(steering_rhs(PI / 2.0, 1.0, &tiny) > 1e5);
    }

    #[test]
    fn params_validation() {
        assert!(BicycleParams::new(0.0, SurfaceModel::Sphere).is_err());
        assert!(BicycleParams::new(PI / 2.0, SurfaceModel::Sphere).is_err());
        assert!(BicycleParams::new(3.0, SurfaceModel::Hyperbolic).is_ok());
        assert_eq!(BicycleParams::<f64>::derivative_curve().c0(), 0.0);
    }

    #[test]
    fn fixed_point_stays_fixed() {
        let (l, r) = (0.5f64, 1.0f64);
        let front = circle(SurfaceModel::Sphere, r, 512);
        let p = BicycleParams::new(l, SurfaceModel::Sphere).unwrap();
        let star = (l.tan() / r.tan()).asin();
        let sol = integrate_steering(&front, &p, star).unwrap();
        assert!(sol.alpha.iter().all(|a| (a - star).abs() < 1e-9));
        assert!(sol.periodicity_residual < 1e-9);
    }

    #[test]
    fn other_fixed_point_attracts() {
        let (l, r) = (0.5f64, 1.0f64);
        let front = circle(SurfaceModel::Sphere, r, 512);
        let p = BicycleParams::new(l, SurfaceModel::Sphere).unwrap();
        let star = PI - (l.tan() / r.tan()).asin();
        let sol = integrate_steering(&front, &p, star + 0.1).unwrap();
        assert!((sol.alpha_end - star).abs() < 0.1 * 1e-3);
        assert!(sol.log_map_derivative < 0.0);
    }

    #[test]
    fn straight_running_bicycle() {
        let front = circle(SurfaceModel::Sphere, PI / 2.0, 256);
        let p = BicycleParams::new(0.4, SurfaceModel::Sphere).unwrap();
        let sol = integrate_steering(&front, &p, PI).unwrap();
        assert!(sol.alpha.iter().all(|a| (a - PI).abs() < 1e-12));
        let rear = rear_track(&front, &sol).unwrap();
        // rear runs along the same great circle at unit speed, backwards
        assert!(rear.track.kappa.iter().all(|k| k.abs() < 1e-12));
        assert!((algebraic_length(&rear.track) + TAU).abs() < 1e-12);
        let chk = speed_ratio_check(&rear);
        assert!(chk.max_speed_ratio_residual < 1e-10);
    }

    #[test]
    fn concentric_rear_circle() {
        let (l, r) = (0.5f64, 1.0f64);
        let front = circle(SurfaceModel::Sphere, r, 1024);
        let p = BicycleParams::new(l, SurfaceModel::Sphere).unwrap();
        let star = (l.tan() / r.tan()).asin();
        let sol = integrate_steering(&front, &p, star).unwrap();
        let rear = rear_track(&front, &sol).unwrap();
        let rho = (r.cos() / l.cos()).acos();
        for (i, pt) in rear.track.positions.iter().enumerate() {
            assert!((pt.z.acos() - rho).abs() < 1e-10);
            assert!((rear.track.kappa[i] - star.tan() / l.sin()).abs() < 1e-10);
            assert!((rear.track.kappa[i] - 1.0 / rho.tan()).abs() < 1e-8);
        }
        assert!((algebraic_length(&rear.track) - star.cos() * TAU * r.sin()).abs() < 1e-9);
        let chk = speed_ratio_check(&rear);
        assert!(chk.max_speed_ratio_residual < 1e-8);
        assert!(chk.max_cos_alpha_residual < 1e-8);
    }

    #[test]
    fn rear_of_threshold_circle_degenerates() {
        let front = circle(SurfaceModel::Sphere, 0.5, 256);
        let p = BicycleParams::new(0.5, SurfaceModel::Sphere).unwrap();
        let sol = integrate_steering(&front, &p, PI / 2.0).unwrap();
        assert!(matches!(rear_track(&front, &sol), Err(Error::DegenerateCurve(_))));
    }

    #[test]
    fn front_from_rear_circle() {
        let (l, rho) = (0.5f64, 0.7f64);
        for sigma in [1.0, -1.0] {
            let rear = circle(SurfaceModel::Sphere, rho, 512);
            let front = front_from_rear(&rear, l, sigma).unwrap();
            let r = (l.cos() * rho.cos()).acos();
            for pt in &front.positions {
                assert!((pt.z.acos() - r).abs() < 1e-12);
            }
            for &s in &front.speed {
                let k = 1.0 / rho.tan();
                assert!((s / rho.sin() - (l.sin().powi(2) * k * k + 1.0).sqrt()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn derivative_curve_is_tangent_indicatrix() {
        let spec = CurveSpec::polar_fourier(SurfaceModel::Sphere, 0.7, vec![0.0, 0.05], vec![], 256);
        let rear = build::<f64>(&spec).unwrap();
        let front = front_from_rear(&rear, PI / 2.0, 1.0).unwrap();
        for i in 0..rear.len() {
            assert!((front.positions[i] - rear.tangents[i]).max_abs() < 1e-12);
        }
    }

    #[test]
    fn round_trip_front_rear_front() {
        for m in [SurfaceModel::Sphere, SurfaceModel::Hyperbolic] {
            let spec = CurveSpec::polar_fourier(m, 1.0, vec![0.0, 0.04], vec![0.0, 0.0, 0.02], 1024);
            let front = build::<f64>(&spec).unwrap();
            let p = BicycleParams::new(0.3, m).unwrap();
            // any steering solution gives a valid rear track; use alpha0 = pi
            let sol = integrate_steering(&front, &p, PI).unwrap();
            let rear = rear_track(&front, &sol).unwrap();
            let k: f64 = m.curvature();
            for i in 0..front.len() {
                let g = rear.track.positions[i] * p.cl() + rear.track.tangents[i] * (rear.sigma * p.sl());
                assert!((g - front.positions[i]).max_abs() < 1e-12);
                assert!((inner(rear.track.positions[i], rear.track.positions[i], m) - k).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hyperbolic_concentric_rear() {
        let (l, r) = (0.5f64, 1.2f64);
        let front = circle(SurfaceModel::Hyperbolic, r, 512);
        let p = BicycleParams::new(l, SurfaceModel::Hyperbolic).unwrap();
        let star = (l.tanh() / r.tanh()).asin();
        let sol = integrate_steering(&front, &p, star).unwrap();
        assert!(sol.periodicity_residual < 1e-10);
        let rear = rear_track(&front, &sol).unwrap();
        let rho = (r.cosh() / l.cosh()).acosh();
        for (i, pt) in rear.track.positions.iter().enumerate() {
            assert!((pt.z.acosh() - rho).abs() < 1e-10);
            assert!((rear.track.kappa[i] - 1.0 / rho.tanh()).abs() < 1e-9);
        }
    }

    #[test]
    fn cusped_front_is_rejected() {
        let spec = CurveSpec::polar_fourier(SurfaceModel::Sphere, 0.8, vec![0.0, 0.15], vec![], 512);
        let w = build::<f64>(&spec).unwrap();
        let e = crate::wavefront::equidistant(&w, 0.75);
        let p = BicycleParams::new(0.3, SurfaceModel::Sphere).unwrap();
        assert!(matches!(integrate_steering(&e, &p, 0.0), Err(Error::NotSmooth)));
    }
}
