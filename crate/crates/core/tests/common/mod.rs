//! Seeded random test fronts.
#![allow(dead_code)]

use bikefront::wavefront::inflection_scan;
use bikefront::{build, CurveSpec, SurfaceModel, WaveFront64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A polar Fourier front about a random base point that is convex (sphere,
/// curvature >= 0.05) or horocyclically convex (hyperbolic, curvature >=
/// 1.001), with no inflections.
pub fn random_convex(model: SurfaceModel, rng: &mut ChaCha8Rng, rho: (f64, f64), samples: usize) -> (CurveSpec, WaveFront64) {
    loop {
        let rho0 = rng.gen_range(rho.0..rho.1);
        let amp = 0.08 * rho0.min(1.0);
        let mut cos = Vec::new();
        let mut sin = Vec::new();
        for k in 0..4 {
            let scale = amp / ((k + 1) * (k + 1)) as f64;
            cos.push(rng.gen_range(-1.0..1.0) * scale);
            sin.push(rng.gen_range(-1.0..1.0) * scale);
        }
        let base = random_base_point(model, rng);
        let spec = CurveSpec::polar_fourier(model, rho0, cos, sin, samples).with_base_point(base);
        let Ok(w) = build::<f64>(&spec) else { continue };
        let floor = match model {
            SurfaceModel::Sphere => 0.05,
            SurfaceModel::Hyperbolic => 1.001,
        };
        if w.min_kappa() >= floor && inflection_scan(&w).is_empty() {
            return (spec, w);
        }
    }
}

pub fn random_base_point(model: SurfaceModel, rng: &mut ChaCha8Rng) -> [f64; 3] {
    let x: f64 = rng.gen_range(-0.5..0.5);
    let y: f64 = rng.gen_range(-0.5..0.5);
    match model {
        SurfaceModel::Sphere => {
            let z = (1.0 - x * x - y * y).sqrt();
            [x, y, z]
        }
        SurfaceModel::Hyperbolic => [x, y, (1.0 + x * x + y * y).sqrt()],
    }
}

/// Least-squares slope of `ln err` against `ln h`.
pub fn fitted_order(h: &[f64], err: &[f64]) -> f64 {
    let xs: Vec<f64> = h.iter().map(|x| x.ln()).collect();
    let ys: Vec<f64> = err.iter().map(|x| x.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
