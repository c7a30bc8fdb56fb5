//! Identity and inequality checks, and the Menzin sweep.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bicycle::{speed_ratio_check, BicycleParams};
use crate::error::{Error, Result};
use crate::geometry::SurfaceModel;
use crate::monodromy::{closed_rear_track, compute_monodromy, derivative_curve_identity, length_derivative_check, MobiusClass};
use crate::numeric::simpson_periodic;
use crate::scalar::Real;
use crate::wavefront::{
    acc, algebraic_length, area_convex, build, cusp_scan, dual, equidistant, hyperbolic_area, inflection_scan,
    total_curvature, CurveSpec, WaveFront,
};

pub const TOL_IDENTITY: f64 = 1e-6;
pub const TOL_DERIVATIVE_CURVE: f64 = 1e-4;
pub const TOL_PARABOLIC_LENGTH: f64 = 1e-4;
pub const HOROCYCLIC_MARGIN: f64 = 1e-6;
/// Areas within this (relative) band of the threshold count as on it.
pub const AREA_MARGIN: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The hypothesis of the statement does not hold; the inequality is
    /// reported but not asserted.
    HypothesisViolated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// For identities the mismatch; for inequalities `max(0, -margin)`.
    pub residual: f64,
    pub tolerance: f64,
    /// `lhs - rhs` for inequalities of the form `lhs >= rhs`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    pub pass: bool,
    pub status: CheckStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub inputs: serde_json::Value,
}

impl VerificationReport {
    pub fn identity(name: &str, lhs: f64, rhs: f64, residual: f64, tolerance: f64, inputs: serde_json::Value) -> Self {
        let pass = residual <= tolerance;
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            residual,
            tolerance,
            margin: None,
            pass,
            status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
            note: None,
            inputs,
        }
    }

    /// Report for `lhs >= rhs`, passing when the margin is at least `-tolerance`.
    pub fn inequality(name: &str, lhs: f64, rhs: f64, tolerance: f64, inputs: serde_json::Value) -> Self {
        let margin = lhs - rhs;
        let residual = (-margin).max(0.0);
        let mut r = Self::identity(name, lhs, rhs, residual, tolerance, inputs);
        r.margin = Some(margin);
        r
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

fn f<T: Real>(x: T) -> f64 {
    x.to_f64_lossy()
}

fn relative(lhs: f64, rhs: f64) -> f64 {
    let d = (lhs - rhs).abs();
    if lhs.abs() >= 1e-3 {
        d / lhs.abs()
    } else {
        d
    }
}

/// `int kappa ds = c(l) int k dt` along the closed rear track through the
/// attracting fixed point. The residual is relative to `|int kappa ds|`
/// (absolute when that is below `1e-3`).
pub fn check_curvature_relation<T: Real>(front: &WaveFront<T>, p: &BicycleParams<T>) -> Result<VerificationReport> {
    let track = closed_rear_track(front, p)?;
    let lhs = f(simpson_periodic(&front.turning, front.step()));
    let rear = &track.rear.track;
    let rhs = f(p.cl() * simpson_periodic(&rear.turning, rear.step()));
    let name = match front.model {
        SurfaceModel::Sphere => "curvature_relation_sphere",
        SurfaceModel::Hyperbolic => "curvature_relation_hyperbolic",
    };
    Ok(VerificationReport::identity(
        name,
        lhs,
        rhs,
        relative(lhs, rhs),
        TOL_IDENTITY,
        json!({"model": front.model, "l": f(p.l), "samples": front.len()}),
    ))
}

/// `ACC^2 + L^2 >= 4 pi^2` for spherical fronts without inflections.
pub fn check_spherical_isoperimetric<T: Real>(w: &WaveFront<T>) -> Result<VerificationReport> {
    let a = f(acc(w)?);
    let l = f(algebraic_length(w));
    let infl = inflection_scan(w);
    let rhs = 4.0 * std::f64::consts::PI.powi(2);
    let mut r = VerificationReport::inequality(
        "spherical_isoperimetric",
        a * a + l * l,
        rhs,
        TOL_IDENTITY,
        json!({"model": w.model, "acc": a, "length": l, "cusps": w.cusps.len(), "inflections": infl.len(), "samples": w.len()}),
    );
    if !infl.is_empty() {
        r.status = CheckStatus::HypothesisViolated;
        r = r.with_note(format!("front has {} inflection points; inequality not asserted", infl.len()));
    }
    Ok(r)
}

/// `L^2 + 4 pi^2 >= C^2` for horocyclically convex hyperbolic fronts.
pub fn check_hyperbolic_isoperimetric<T: Real>(w: &WaveFront<T>) -> Result<VerificationReport> {
    let c = f(total_curvature(w)?);
    let min_abs = f(w.min_abs_kappa_off_cusps());
    if min_abs < 1.0 - HOROCYCLIC_MARGIN {
        return Err(Error::NotHorocyclicallyConvex { min_abs_kappa: min_abs });
    }
    let l = f(algebraic_length(w));
    Ok(VerificationReport::inequality(
        "hyperbolic_isoperimetric",
        l * l + 4.0 * std::f64::consts::PI.powi(2),
        c * c,
        TOL_IDENTITY,
        json!({"model": w.model, "total_curvature": c, "length": l, "cusps": w.cusps.len(), "samples": w.len()}),
    ))
}

/// `ACC(dual) = L` and `L(dual) = -ACC`; the residual is the larger mismatch.
pub fn check_duality<T: Real>(w: &WaveFront<T>) -> Result<VerificationReport> {
    let d = dual(w)?;
    let (a, l) = (f(acc(w)?), f(algebraic_length(w)));
    let (da, dl) = (f(acc(&d)?), f(algebraic_length(&d)));
    let residual = (da - l).abs().max((a + dl).abs());
    Ok(VerificationReport::identity(
        "duality",
        da,
        l,
        residual,
        TOL_IDENTITY,
        json!({"acc": a, "length": l, "dual_acc": da, "dual_length": dl, "samples": w.len()}),
    ))
}

/// Outward equidistant at distance `t`: `L(t) = L cosh t + C sinh t`,
/// `C(t) = L sinh t + C cosh t`. Residual is the larger absolute mismatch.
pub fn check_equidistant_evolution<T: Real>(w: &WaveFront<T>, t: T) -> Result<VerificationReport> {
    let (l0, c0) = (algebraic_length(w), total_curvature(w)?);
    let e = equidistant(w, -t);
    let (lt, ct) = (f(algebraic_length(&e)), f(total_curvature(&e)?));
    let pl = f(l0 * t.cosh() + c0 * t.sinh());
    let pc = f(l0 * t.sinh() + c0 * t.cosh());
    let residual = (lt - pl).abs().max((ct - pc).abs());
    Ok(VerificationReport::identity(
        "equidistant_evolution",
        lt,
        pl,
        residual,
        TOL_IDENTITY,
        json!({"t": f(t), "length0": f(l0), "curvature0": f(c0), "length_t": lt, "curvature_t": ct, "predicted_curvature_t": pc}),
    ))
}

/// `M'(theta0) = exp(-|L|)` at the attracting fixed point, relative residual.
pub fn check_derivative_law<T: Real>(front: &WaveFront<T>, p: &BicycleParams<T>) -> Result<VerificationReport> {
    let law = length_derivative_check(front, p)?;
    let len = f(law.algebraic_length);
    Ok(VerificationReport::identity(
        "derivative_law",
        f(law.derivative),
        (-len.abs()).exp(),
        f(law.residual),
        TOL_IDENTITY,
        json!({
            "model": front.model, "l": f(p.l), "algebraic_length": len,
            "log_derivative": f(law.log_derivative), "trace": f(law.trace),
            "trace_residual": f(law.trace_residual),
            "coefficient": f(law.coefficient),
            "corrected_residual": f(law.corrected_residual),
            "corrected_trace_residual": f(law.corrected_trace_residual),
        }),
    )
    .with_note(format!(
        "ln M' = {:.6e}; ct(l) * L = {:.6e}",
        f(law.log_derivative),
        f(law.coefficient) * len
    )))
}

/// `ln M' = ct(l) * L` and `|tr M| = 2 cosh(ct(l) L / 2)`.
pub fn check_corrected_derivative_law<T: Real>(front: &WaveFront<T>, p: &BicycleParams<T>) -> Result<VerificationReport> {
    let law = length_derivative_check(front, p)?;
    let len = f(law.algebraic_length);
    let c0 = f(law.coefficient);
    Ok(VerificationReport::identity(
        "corrected_derivative_law",
        f(law.log_derivative),
        c0 * len,
        f(law.corrected_residual).max(f(law.corrected_trace_residual)),
        TOL_IDENTITY,
        json!({"model": front.model, "l": f(p.l), "algebraic_length": len, "coefficient": c0, "trace": f(law.trace)}),
    ))
}

pub fn check_derivative_curve<T: Real>(rear: &WaveFront<T>) -> Result<VerificationReport> {
    let dev = f(derivative_curve_identity(rear)?);
    Ok(VerificationReport::identity(
        "derivative_curve_identity",
        dev,
        0.0,
        dev,
        TOL_DERIVATIVE_CURVE,
        json!({"samples": rear.len()}),
    ))
}

/// Rear/front speed relations on the closed rear track.
pub fn check_speed_ratio<T: Real>(front: &WaveFront<T>, p: &BicycleParams<T>) -> Result<VerificationReport> {
    let track = closed_rear_track(front, p)?;
    let chk = speed_ratio_check(&track.rear);
    let residual = f(chk.max_speed_ratio_residual).max(f(chk.max_cos_alpha_residual));
    Ok(VerificationReport::identity(
        "speed_ratio",
        residual,
        0.0,
        residual,
        TOL_IDENTITY,
        json!({"model": front.model, "l": f(p.l), "samples_used": chk.samples_used}),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParabolicLength<T> {
    pub l: T,
    /// `|tr M| - 2` at `l` (nonnegative: `l` is on the hyperbolic side).
    pub trace_gap: T,
    pub iterations: usize,
}

pub const BISECTION_T_LOW: f64 = 1e-3;
pub const BISECTION_MAX_ITER: usize = 80;
pub const BISECTION_GAP_TOL: f64 = 1e-10;

/// Largest length `l' <= l_max` with parabolic monodromy, by bisection of
/// `|tr M(t l_max)| - 2` over `t in [1e-3, 1]`. `None` when the map is still
/// hyperbolic at `l_max`.
pub fn find_parabolic_length<T: Real>(front: &WaveFront<T>, l_max: T, model: SurfaceModel) -> Result<Option<ParabolicLength<T>>> {
    let base = BicycleParams::new(l_max, model)?;
    let gap = |t: T| -> Result<T> { Ok(compute_monodromy(front, &base.with_length(t * l_max)?)?.trace_gap()) };
    if gap(T::one())? > T::zero() {
        return Ok(None);
    }
    let mut lo = T::lit(BISECTION_T_LOW);
    let g_lo = gap(lo)?;
    if g_lo.is_nan() || g_lo <= T::zero() {
        return Err(Error::DegenerateCurve(format!(
            "monodromy is not hyperbolic at the bracket start (|tr| - 2 = {g_lo:e})"
        )));
    }
    let mut hi = T::one();
    let mut best = (lo, g_lo);
    let tol = T::lit(BISECTION_GAP_TOL);
    let mut iterations = 0;
    for _ in 0..BISECTION_MAX_ITER {
        iterations += 1;
        let mid = (lo + hi) * T::half();
        if mid <= lo || mid >= hi {
            break;
        }
        let g = gap(mid)?;
        if g > T::zero() {
            lo = mid;
            best = (mid, g);
            if g <= tol {
                break;
            }
        } else {
            hi = mid;
        }
    }
    Ok(Some(ParabolicLength {
        l: best.0 * l_max,
        trace_gap: best.1,
        iterations,
    }))
}

/// Menzin thresholds `2 pi (1 - cos l)` and `2 pi (cosh l - 1)`.
pub fn menzin_threshold(model: SurfaceModel, l: f64) -> f64 {
    match model {
        SurfaceModel::Sphere => std::f64::consts::TAU * (1.0 - l.cos()),
        SurfaceModel::Hyperbolic => std::f64::consts::TAU * (l.cosh() - 1.0),
    }
}

/// Rear tracks whose `|cos alpha|` stays below this are treated as
/// degenerate (a circle traversed by a rear wheel that barely moves).
pub const DEGENERATE_REAR_COS: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MenzinSweepRow {
    pub curve_id: String,
    pub model: SurfaceModel,
    pub l: f64,
    pub area: f64,
    pub threshold: f64,
    pub above_threshold: bool,
    pub class: Option<MobiusClass>,
    pub trace: f64,
    pub l_parabolic: Option<f64>,
    pub rear_length_at_parabolic: Option<f64>,
    pub rear_cusps: Option<usize>,
    pub rear_inflections: Option<usize>,
    pub rear_min_abs_curvature: Option<f64>,
    /// At `l'`: `|L| < 1e-4`, even cusp count `>= 2`, no inflections.
    /// `None` when no `l'` was found or the rear track is degenerate.
    pub parabolic_signature: Option<bool>,
    pub degenerate_rear: bool,
    pub counterexample: bool,
    pub error: Option<String>,
}

impl MenzinSweepRow {
    fn empty(spec: &CurveSpec, l: f64, model: SurfaceModel) -> Self {
        Self {
            curve_id: spec.id.clone().unwrap_or_default(),
            model,
            l,
            area: f64::NAN,
            threshold: menzin_threshold(model, l),
            above_threshold: false,
            class: None,
            trace: f64::NAN,
            l_parabolic: None,
            rear_length_at_parabolic: None,
            rear_cusps: None,
            rear_inflections: None,
            rear_min_abs_curvature: None,
            parabolic_signature: None,
            degenerate_rear: false,
            counterexample: false,
            error: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MenzinSweepReport {
    pub model: SurfaceModel,
    pub rows: Vec<MenzinSweepRow>,
    pub counterexamples: usize,
    pub signature_failures: usize,
    pub errors: usize,
}

impl MenzinSweepReport {
    pub fn passed(&self) -> bool {
        self.counterexamples == 0 && self.signature_failures == 0
    }
}

fn sweep_row(spec: &CurveSpec, l: f64, model: SurfaceModel) -> MenzinSweepRow {
    let mut row = MenzinSweepRow::empty(spec, l, model);
    if let Err(e) = fill_row(&mut row, spec, l, model) {
        row.error = Some(e.to_string());
    }
    row
}

fn fill_row(row: &mut MenzinSweepRow, spec: &CurveSpec, l: f64, model: SurfaceModel) -> Result<()> {
    if spec.model != model {
        return Err(Error::WrongModel { expected: model });
    }
    let front = build::<f64>(spec)?;
    row.area = match model {
        SurfaceModel::Sphere => area_convex(&front)?,
        SurfaceModel::Hyperbolic => {
            let min = front.min_kappa();
            if min < 1.0 - HOROCYCLIC_MARGIN {
                return Err(Error::NotHorocyclicallyConvex { min_abs_kappa: min });
            }
            hyperbolic_area(&front)?
        }
    };
    row.above_threshold = row.area - row.threshold > AREA_MARGIN * row.threshold.max(1.0);
    let p = BicycleParams::new(l, model)?;
    let m = compute_monodromy(&front, &p)?;
    row.class = Some(m.class);
    row.trace = m.trace();
    row.counterexample = row.above_threshold && m.class != MobiusClass::Hyperbolic;

    let at = match find_parabolic_length(&front, l, model)? {
        Some(pl) => {
            row.l_parabolic = Some(pl.l);
            pl.l
        }
        None => l,
    };
    let track = closed_rear_track(&front, &p.with_length(at)?);
    let track = match track {
        Ok(t) => t,
        Err(Error::DegenerateCurve(_)) => {
            row.degenerate_rear = true;
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let max_cos = track.steering.alpha.iter().fold(0.0f64, |m, a| m.max(a.cos().abs()));
    let rear = &track.rear.track;
    row.rear_min_abs_curvature = Some(rear.min_abs_kappa_off_cusps());
    if row.l_parabolic.is_none() {
        return Ok(());
    }
    if max_cos < DEGENERATE_REAR_COS {
        row.degenerate_rear = true;
        return Ok(());
    }
    let len = algebraic_length(rear);
    let cusps = cusp_scan(rear)?.cusps.len();
    let infl = inflection_scan(rear).len();
    row.rear_length_at_parabolic = Some(len);
    row.rear_cusps = Some(cusps);
    row.rear_inflections = Some(infl);
    row.parabolic_signature = Some(len.abs() < TOL_PARABOLIC_LENGTH && cusps >= 2 && cusps % 2 == 0 && infl == 0);
    Ok(())
}

/// Runs every `(curve, l)` pair; rows are independent and evaluated in
/// parallel, and appear in input order (curves outer, lengths inner).
pub fn menzin_sweep(curves: &[CurveSpec], ls: &[f64], model: SurfaceModel) -> MenzinSweepReport {
    let jobs: Vec<(&CurveSpec, f64)> = curves.iter().flat_map(|c| ls.iter().map(move |&l| (c, l))).collect();
    let rows: Vec<MenzinSweepRow> = jobs.par_iter().map(|&(c, l)| sweep_row(c, l, model)).collect();
    let counterexamples = rows.iter().filter(|r| r.counterexample).count();
    let signature_failures = rows.iter().filter(|r| r.parabolic_signature == Some(false)).count();
    let errors = rows.iter().filter(|r| r.error.is_some()).count();
    MenzinSweepReport {
        model,
        rows,
        counterexamples,
        signature_failures,
        errors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn circle(m: SurfaceModel, r: f64, n: usize) -> WaveFront<f64> {
        build(&CurveSpec::circle(m, r, n)).unwrap()
    }

    #[test]
    fn curvature_relation_on_circles() {
        let r = check_curvature_relation(&circle(SurfaceModel::Sphere, 1.0, 1024), &BicycleParams::new(0.5, SurfaceModel::Sphere).unwrap()).unwrap();
        assert!((r.lhs - TAU * 1f64.cos()).abs() < 1e-10);
        assert!(r.pass, "{r:?}");
        let p = BicycleParams::new(0.5, SurfaceModel::Hyperbolic).unwrap();
        let r = check_curvature_relation(&circle(SurfaceModel::Hyperbolic, 1.0, 1024), &p).unwrap();
        assert!(r.residual < 1e-7, "{r:?}");
        let p = BicycleParams::new(1e-3, SurfaceModel::Sphere).unwrap();
        let r = check_curvature_relation(&circle(SurfaceModel::Sphere, 1.0, 1024), &p).unwrap();
        assert!(r.residual < 1e-4, "{r:?}");
    }

    #[test]
    fn isoperimetric_equality_on_circles() {
        for rad in [0.3f64, 1.0, 2.0] {
            let r = check_spherical_isoperimetric(&circle(SurfaceModel::Sphere, rad.min(3.0), 512)).unwrap();
            assert!(r.margin.unwrap().abs() < 1e-6);
            let r = check_hyperbolic_isoperimetric(&circle(SurfaceModel::Hyperbolic, rad, 512)).unwrap();
            assert!(r.margin.unwrap().abs() < 1e-6, "{r:?}");
        }
    }

    #[test]
    fn inflections_gate_the_spherical_inequality() {
        let spec = CurveSpec::polar_fourier(SurfaceModel::Sphere, 0.6, vec![0.0, 0.0, 0.12], vec![], 512);
        let r = check_spherical_isoperimetric(&build::<f64>(&spec).unwrap()).unwrap();
        assert_eq!(r.status, CheckStatus::HypothesisViolated);
        assert!(!r.failed());
    }

    #[test]
    fn hyperbolic_check_rejects_flat_fronts() {
        let spec = CurveSpec::polar_fourier(SurfaceModel::Hyperbolic, 1.0, vec![0.0, 0.0, 0.15], vec![], 512);
        let w = build::<f64>(&spec).unwrap();
        assert!(matches!(check_hyperbolic_isoperimetric(&w), Err(Error::NotHorocyclicallyConvex { .. })));
    }

    #[test]
    fn duality_and_equidistants() {
        assert!(check_duality(&circle(SurfaceModel::Sphere, 0.8, 512)).unwrap().pass);
        let w = circle(SurfaceModel::Hyperbolic, 0.8, 512);
        for t in [0.25, 0.5, 1.0] {
            let r = check_equidistant_evolution(&w, t).unwrap();
            assert!(r.pass, "{r:?}");
            assert!((r.lhs - TAU * (0.8f64 + t).sinh()).abs() < 1e-9);
        }
    }

    #[test]
    fn parabolic_length_of_circles() {
        let w = circle(SurfaceModel::Sphere, 0.7, 1024);
        let pl = find_parabolic_length(&w, 1.5, SurfaceModel::Sphere).unwrap().unwrap();
        assert!((pl.l - 0.7).abs() < 1e-6, "{pl:?}");
        assert!(find_parabolic_length(&w, 0.6, SurfaceModel::Sphere).unwrap().is_none());
        let g = circle(SurfaceModel::Sphere, PI / 2.0, 256);
        assert!(find_parabolic_length(&g, 1.5, SurfaceModel::Sphere).unwrap().is_none());
        let h = circle(SurfaceModel::Hyperbolic, 0.7, 1024);
        let pl = find_parabolic_length(&h, 2.0, SurfaceModel::Hyperbolic).unwrap().unwrap();
        assert!((pl.l - 0.7).abs() < 1e-6, "{pl:?}");
    }

    #[test]
    fn sweep_on_circle_family() {
        for model in [SurfaceModel::Sphere, SurfaceModel::Hyperbolic] {
            let specs: Vec<CurveSpec> = (3..=12)
                .map(|i| CurveSpec::circle(model, i as f64 * 0.1, 512).with_id(format!("c{i}")))
                .collect();
            let rep = menzin_sweep(&specs, &[0.5], model);
            assert_eq!(rep.counterexamples, 0, "{:#?}", rep.rows.iter().filter(|r| r.counterexample).collect::<Vec<_>>());
            assert_eq!(rep.errors, 0, "{:?}", rep.rows);
            for (row, spec) in rep.rows.iter().zip(&specs) {
                let r = spec.radius.unwrap();
                if (r - 0.5).abs() > 1e-9 {
                    assert_eq!(row.class == Some(MobiusClass::Hyperbolic), r > 0.5, "{row:?}");
                }
            }
        }
    }

    #[test]
    fn sweep_flags_parabolic_signature() {
        let spec = CurveSpec::polar_fourier(SurfaceModel::Sphere, 0.7, vec![0.0, 0.05], vec![0.0, 0.0, 0.02], 1024).with_id("pf");
        let rep = menzin_sweep(&[spec], &[1.2], SurfaceModel::Sphere);
        let row = &rep.rows[0];
        assert!(row.error.is_none(), "{row:?}");
        assert!(row.l_parabolic.is_some());
        assert_eq!(row.parabolic_signature, Some(true), "{row:?}");
    }

    #[test]
    fn report_serializes() {
        let r = VerificationReport::inequality("x", 1.0, 2.0, 0.1, json!({}));
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"status\":\"fail\""));
        assert!(s.contains("\"margin\":-1.0"));
    }
}
