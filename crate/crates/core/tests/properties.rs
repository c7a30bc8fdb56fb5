use bikefront::monodromy::act;
use bikefront::numeric::{circular_distance, wrap_angle};
use bikefront::wavefront::{algebraic_length, equidistant};
use bikefront::{build, cross, inner, project_to_surface, AmbientVector, CurveSpec, MobiusMap, SurfaceModel};
use proptest::prelude::*;

fn model() -> impl Strategy<Value = SurfaceModel> {
    prop_oneof![Just(SurfaceModel::Sphere), Just(SurfaceModel::Hyperbolic)]
}

fn vec3() -> impl Strategy<Value = AmbientVector<f64>> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y, z)| AmbientVector::new(x, y, z))
}

fn sl2() -> impl Strategy<Value = MobiusMap<f64>> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64)
        .prop_filter("positive determinant", |(a, b, c, d)| a * d - b * c > 0.05)
        .prop_map(|(a, b, c, d)| MobiusMap::new(a, b, c, d))
}

proptest! {
    #[test]
    fn cross_is_orthogonal(m in model(), u in vec3(), w in vec3()) {
        let c = cross(u, w, m);
        let scale = 1.0 + u.max_abs() * u.max_abs() * w.max_abs();
        prop_assert!(inner(c, u, m).abs() < 1e-12 * scale);
        prop_assert!(inner(c, w, m).abs() < 1e-12 * scale);
    }

    #[test]
    fn trig_pair_identity(m in model(), x in -3.0..3.0f64) {
        let k: f64 = m.curvature();
        let (c, s) = (m.c(x), m.s(x));
        prop_assert!((c * c + k * s * s - 1.0).abs() < 1e-12 * (c * c + s * s));
    }

    #[test]
    fn projection_lands_on_surface(m in model(), u in vec3()) {
        if let Ok(p) = project_to_surface(u, m) {
            let k: f64 = m.curvature();
            prop_assert!((inner(p.v, p.v, m) - k).abs() < 1e-12);
        }
    }

    #[test]
    fn action_composes(m1 in sl2(), m2 in sl2(), t in -3.1..3.1f64) {
        let lhs = act(&m2, act(&m1, t));
        let rhs = act(&m2.compose(&m1), t);
        prop_assert!(circular_distance(lhs, rhs) < 1e-10);
    }

    #[test]
    fn wrap_range(x in -100.0..100.0f64) {
        let y = wrap_angle(x);
        prop_assert!(y > -std::f64::consts::PI && y <= std::f64::consts::PI);
        prop_assert!(circular_distance(x, y) < 1e-12);
    }

    #[test]
    fn equidistants_compose(r in 0.3..1.2f64, a in -0.4..0.4f64, b in -0.4..0.4f64, m in model()) {
        let w = build::<f64>(&CurveSpec::polar_fourier(m, r, vec![0.0, 0.02], vec![0.01], 128)).unwrap();
        let two = equidistant(&equidistant(&w, a), b);
        let one = equidistant(&w, a + b);
        for i in 0..w.len() {
            prop_assert!((two.positions[i] - one.positions[i]).max_abs() < 1e-12);
        }
        prop_assert!((algebraic_length(&two) - algebraic_length(&one)).abs() < 1e-11);
    }
}
