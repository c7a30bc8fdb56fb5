//! Quadrature, interpolation and differentiation on uniform periodic grids.

use crate::scalar::Real;

/// Composite Simpson rule over one period of uniformly spaced periodic
/// samples `f(u_0), ..., f(u_{N-1})`, spacing `h`.
///
/// For odd `N` the (equally spectral) trapezoid rule is used instead.
/// Summation order is fixed, so results are bitwise reproducible.
pub fn simpson_periodic<T: Real>(values: &[T], h: T) -> T {
    let n = values.len();
    if n == 0 {
        return T::zero();
    }
    if n % 2 == 1 {
        return values.iter().fold(T::zero(), |acc, &v| acc + v) * h;
    }
    let two = T::two();
    let four = T::lit(4.0);
    let mut acc = T::zero();
    for (i, &v) in values.iter().enumerate() {
        acc = acc + if i % 2 == 0 { two * v } else { four * v };
    }
    acc * h / T::lit(3.0)
}

/// Four-point (cubic Lagrange) interpolation of periodic samples at the
/// fractional index `i + frac`, `frac` in `[0, 1)`.
#[inline]
pub fn cubic_periodic<T: Real>(values: &[T], i: usize, frac: T) -> T {
    let n = values.len();
    let f0 = values[(i + n - 1) % n];
    let f1 = values[i % n];
    let f2 = values[(i + 1) % n];
    let f3 = values[(i + 2) % n];
    let t = frac;
    let one = T::one();
    let two = T::two();
    let six = T::lit(6.0);
    // Lagrange basis on nodes -1, 0, 1, 2.
    let l0 = -t * (t - one) * (t - two) / six;
    let l1 = (t + one) * (t - one) * (t - two) / two;
    let l2 = -(t + one) * t * (t - two) / two;
    let l3 = (t + one) * t * (t - one) / six;
    l0 * f0 + l1 * f1 + l2 * f2 + l3 * f3
}

/// Values of a periodic sample set on the refined grid with `2 * per_sample`
/// points per sample interval (RK4 stage points), plus the wrap-around point.
pub fn refine_periodic<T: Real>(values: &[T], per_sample: usize) -> Vec<T> {
    let n = values.len();
    let sub = 2 * per_sample;
    let mut out = Vec::with_capacity(n * sub + 1);
    for i in 0..n {
        out.push(values[i]);
        for j in 1..sub {
            let frac = T::from_usize_lossy(j) / T::from_usize_lossy(sub);
            out.push(cubic_periodic(values, i, frac));
        }
    }
    out.push(values[0]);
    out
}

const D1_STENCIL: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
const D2_CENTER: f64 = -205.0 / 72.0;
const D2_STENCIL: [f64; 4] = [8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];

/// Eighth-order central first derivative of periodic samples.
pub fn periodic_derivative<T: Real>(values: &[T], h: T) -> Vec<T> {
    periodic_derivative_by(values, h, |a, b| a - b, |a, k| a * k, T::zero())
}

/// Eighth-order central second derivative of periodic samples.
pub fn periodic_second_derivative<T: Real>(values: &[T], h: T) -> Vec<T> {
    periodic_second_derivative_by(values, h, |a, b| a + b, |a, k| a * k)
}

pub(crate) fn periodic_derivative_by<V, T, D, S>(values: &[V], h: T, diff: D, scale: S, zero: V) -> Vec<V>
where
    V: Copy + std::ops::Add<Output = V>,
    T: Real,
    D: Fn(V, V) -> V,
    S: Fn(V, T) -> V,
{
    let n = values.len();
    let inv_h = h.recip();
    (0..n)
        .map(|i| {
            let mut acc = zero;
            for (k, &c) in D1_STENCIL.iter().enumerate() {
                let j = k + 1;
                let fwd = values[(i + j) % n];
                let bwd = values[(i + n * 8 - j) % n];
                acc = acc + scale(diff(fwd, bwd), T::lit(c));
            }
            scale(acc, inv_h)
        })
        .collect()
}

pub(crate) fn periodic_second_derivative_by<V, T, A, S>(values: &[V], h: T, add: A, scale: S) -> Vec<V>
where
    V: Copy,
    T: Real,
    A: Fn(V, V) -> V,
    S: Fn(V, T) -> V,
{
    let n = values.len();
    let inv_h2 = (h * h).recip();
    (0..n)
        .map(|i| {
            let mut acc = scale(values[i], T::lit(D2_CENTER));
            for (k, &c) in D2_STENCIL.iter().enumerate() {
                let j = k + 1;
                let pair = add(values[(i + j) % n], values[(i + n * 8 - j) % n]);
                acc = add(acc, scale(pair, T::lit(c)));
            }
            scale(acc, inv_h2)
        })
        .collect()
}

/// Representative of `x` in `(-pi, pi]`.
pub fn wrap_angle<T: Real>(x: T) -> T {
    let two_pi = T::TAU();
    let mut y = x % two_pi;
    if y <= -T::PI() {
        y = y + two_pi;
    } else if y > T::PI() {
        y = y - two_pi;
    }
    y
}

/// Distance between two angles on the circle.
pub fn circular_distance<T: Real>(a: T, b: T) -> T {
    wrap_angle(a - b).abs()
}
