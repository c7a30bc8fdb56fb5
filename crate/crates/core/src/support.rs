//! Hyperbolic support functions of horocyclically convex fronts and the
//! curvature they determine.

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// `H(phi) = mean + offset + sum_k cos[k] cos((k+1)phi) + sin[k] sin((k+1)phi)`.
///
/// Adding to `offset` produces the support function of an equidistant front.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportFunction<T> {
    pub mean: T,
    pub cos: Vec<T>,
    pub sin: Vec<T>,
    pub offset: T,
}

impl<T: Real> SupportFunction<T> {
    pub fn constant(r: T) -> Self {
        Self {
            mean: r,
            cos: Vec::new(),
            sin: Vec::new(),
            offset: T::zero(),
        }
    }

    pub fn with_offset(mut self, offset: T) -> Self {
        self.offset = offset;
        self
    }

    /// `(H, H', H'')` at `phi`.
    pub fn eval(&self, phi: T) -> (T, T, T) {
        let (mut h, mut h1, mut h2) = (self.mean + self.offset, T::zero(), T::zero());
        let len = self.cos.len().max(self.sin.len());
        for k in 0..len {
            let nf = T::from_usize_lossy(k + 1);
            let a = self.cos.get(k).copied().unwrap_or_else(T::zero);
            let b = self.sin.get(k).copied().unwrap_or_else(T::zero);
            let (sn, cn) = (nf * phi).sin_cos();
            h = h + a * cn + b * sn;
            h1 = h1 + nf * (b * cn - a * sn);
            h2 = h2 - nf * nf * (a * cn + b * sn);
        }
        (h, h1, h2)
    }

    /// The offset-invariant pair `a = H'' + 1 + H'^2`, `b = H'' - 1 - H'^2`.
    pub fn invariants(&self, phi: T) -> (T, T) {
        let (_, h1, h2) = self.eval(phi);
        let q = T::one() + h1 * h1;
        (h2 + q, h2 - q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupportCurvature<T> {
    pub numerator: T,
    pub denominator: T,
    /// `numerator / denominator`; infinite at a cusp.
    pub signed: T,
    pub magnitude: T,
    /// Denominator within `1e-12` of zero.
    pub cusp: bool,
}

/// Curvature of the front with support function `h` at direction `phi`:
/// `(H'' sinh H + (1 + H'^2) cosh H) / (H'' cosh H + (1 + H'^2) sinh H)`.
pub fn support_curvature<T: Real>(h: &SupportFunction<T>, phi: T) -> SupportCurvature<T> {
    let (hv, h1, h2) = h.eval(phi);
    let q = T::one() + h1 * h1;
    let (sh, ch) = (hv.sinh(), hv.cosh());
    let numerator = h2 * sh + q * ch;
    let denominator = h2 * ch + q * sh;
    let cusp = denominator.abs() < T::lit(1e-12);
    let signed = if denominator == T::zero() {
        T::infinity() * numerator.signum()
    } else {
        numerator / denominator
    };
    SupportCurvature {
        numerator,
        denominator,
        signed,
        magnitude: signed.abs(),
        cusp,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_support_is_a_circle() {
        for r in [0.2, 0.7, 1.5, 3.0] {
            let h = SupportFunction::constant(r);
            let k = support_curvature(&h, 0.3);
            assert!((k.signed - 1.0 / f64::tanh(r)).abs() < 1e-12);
            assert!(!k.cusp);
            let k = support_curvature(&h.clone().with_offset(0.4), 1.1);
            assert!((k.signed - 1.0 / f64::tanh(r + 0.4)).abs() < 1e-12);
        }
    }

    #[test]
    fn invariants_ignore_offset() {
        let h = SupportFunction {
            mean: 0.1,
            cos: vec![0.0, 0.3],
            sin: vec![0.1],
            offset: 0.0,
        };
        let g = h.clone().with_offset(2.5);
        for i in 0..20 {
            let phi = i as f64 * 0.31;
            let (a, b) = h.invariants(phi);
            let (a2, b2) = g.invariants(phi);
            assert_eq!((a, b), (a2, b2));
            assert!(a != 0.0 || b != 0.0);
        }
    }

    #[test]
    fn large_offset_removes_cusps() {
        let h = SupportFunction {
            mean: 0.02,
            cos: vec![0.0, 0.06],
            sin: vec![],
            offset: 0.0,
        };
        let grid: Vec<f64> = (0..2000).map(|i| i as f64 * std::f64::consts::TAU / 2000.0).collect();
        // with no offset the denominator changes sign: the front has cusps
        let dens: Vec<f64> = grid.iter().map(|&p| support_curvature(&h, p).denominator).collect();
        assert!(dens.iter().any(|&d| d > 0.0) && dens.iter().any(|&d| d < 0.0));
        // a and b have opposite signs everywhere here
        assert!(grid.iter().all(|&p| {
            let (a, b) = h.invariants(p);
            a > 0.0 && b < 0.0
        }));
        let shifted = h.with_offset(2.0);
        for &p in &grid {
            let k = support_curvature(&shifted, p);
            assert!(!k.cusp);
            assert!(k.signed.is_finite() && k.signed > 0.0);
        }
    }
}
