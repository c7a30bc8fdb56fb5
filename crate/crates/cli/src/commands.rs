use std::collections::BTreeMap;
use std::path::PathBuf;

use bikefront::monodromy::{compute_monodromy_with_tol, fixed_points};
use bikefront::verify::{
    check_corrected_derivative_law, check_curvature_relation, check_derivative_curve, check_derivative_law, check_duality,
    check_equidistant_evolution, check_hyperbolic_isoperimetric, check_speed_ratio, check_spherical_isoperimetric,
    menzin_sweep, MenzinSweepRow, TOL_IDENTITY,
};
use bikefront::wavefront::{dual, equidistant};
use bikefront::{
    closed_rear_track, integrate_steering, rear_track, BicycleParams64, CheckStatus, CurveSpec, Error, MenzinSweepReport,
    MobiusClass, SurfaceModel, VerificationReport, WaveFront64,
};
use serde::Serialize;

use crate::config::{parse_curve_file, Check, Command, CurveInput, Format, RunConfig};
use crate::error::CliError;
use crate::output::{curve_csv, num, opt_num, svg, to_json, write_atomic, Layer, Projection, Table};

/// Whether any verification, sweep row or domain computation failed.
#[derive(Debug, Default)]
pub struct Outcome {
    pub failed: bool,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let curves = parse_curve_file(&cfg.curve_file, cfg.samples)?;
    if curves.is_empty() {
        return Err(CliError::Schema {
            path: cfg.curve_file.clone(),
            msg: "no curves".into(),
        });
    }
    if let Some(m) = cfg.model {
        if let Some((i, c)) = curves.iter().enumerate().find(|(_, c)| c.model() != m) {
            return Err(CliError::SpecInvalid {
                path: cfg.curve_file.clone(),
                msg: format!("curve {i} is on the {} model; {} was requested", c.model(), m),
            });
        }
    }
    let sink = Sink::new(cfg, curves.len())?;
    match cfg.command {
        Command::Simulate => simulate(cfg, &curves, &sink),
        Command::Monodromy => monodromy(cfg, &curves, &sink),
        Command::Verify => verify(cfg, &curves, &sink),
        Command::Sweep => sweep(cfg, &curves, &sink),
        Command::Dual | Command::Equidistant => transform(cfg, &curves, &sink),
    }
}

/// Where results go: `<prefix>.<ext>` files, or standard output when no
/// prefix is given and a single document is produced.
struct Sink {
    prefix: Option<PathBuf>,
    formats: Vec<Format>,
    per_curve: bool,
}

impl Sink {
    fn new(cfg: &RunConfig, n_curves: usize) -> Result<Self, CliError> {
        let default = match cfg.command {
            Command::Monodromy | Command::Verify => Format::Json,
            _ => Format::Csv,
        };
        let formats = cfg.formats_or(default);
        let per_curve = matches!(cfg.command, Command::Simulate | Command::Dual | Command::Equidistant)
            && (n_curves > 1 || cfg.lengths().len() > 1 && cfg.command == Command::Simulate);
        if cfg.output.is_none() && (formats.len() > 1 || per_curve) {
            return Err(CliError::Usage(
                "several output documents; give --out <prefix> to write them to files".into(),
            ));
        }
        Ok(Self {
            prefix: cfg.output.clone(),
            formats,
            per_curve,
        })
    }

    fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    fn path(&self, tag: Option<&str>, ext: &str) -> Option<PathBuf> {
        let prefix = self.prefix.as_ref()?;
        let mut name = prefix.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        if let (true, Some(tag)) = (self.per_curve, tag) {
            name.push('_');
            name.push_str(tag);
        }
        name.push('.');
        name.push_str(ext);
        Some(prefix.with_file_name(name))
    }

    fn emit(&self, tag: Option<&str>, format: Format, body: &str) -> Result<(), CliError> {
        let ext = match format {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
        };
        match self.path(tag, ext) {
            Some(p) => write_atomic(&p, body.as_bytes()),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }

    fn unsupported(&self, cmd: &str, supported: &[Format]) {
        for f in &self.formats {
            if !supported.contains(f) {
                eprintln!("warning: {cmd} has no {f:?} output; skipped");
            }
        }
    }
}

fn warn(msg: impl std::fmt::Display) {
    eprintln!("warning: {msg}");
}

fn params(l: f64, model: SurfaceModel) -> Result<BicycleParams64, CliError> {
    BicycleParams64::new(l, model).map_err(|e| CliError::Usage(format!("--l {l}: {e}")))
}

fn require_lengths(cfg: &RunConfig, cmd: &str) -> Result<Vec<f64>, CliError> {
    let ls = cfg.lengths();
    if ls.is_empty() {
        return Err(CliError::Usage(format!("{cmd} needs --l or --l-list")));
    }
    Ok(ls)
}

fn tag(id: &str, l: Option<(usize, f64)>, n_ls: usize) -> String {
    match l {
        Some((k, _)) if n_ls > 1 => format!("{id}_l{k}"),
        _ => id.to_string(),
    }
}

fn cumulative(speed: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(speed.len());
    let mut acc = 0.0;
    for i in 0..speed.len() {
        out.push(acc);
        acc += 0.5 * h * (speed[i] + speed[(i + 1) % speed.len()]);
    }
    out
}

fn simulate(cfg: &RunConfig, curves: &[CurveInput], sink: &Sink) -> Result<Outcome, CliError> {
    sink.unsupported("simulate", &[Format::Csv, Format::Svg]);
    let ls = require_lengths(cfg, "simulate")?;
    for (i, curve) in curves.iter().enumerate() {
        let id = curve.id(i);
        let front = curve.front()?;
        for (k, &l) in ls.iter().enumerate() {
            let p = params(l, front.model)?;
            let rear = match cfg.alpha0 {
                Some(a0) => rear_track(&front, &integrate_steering(&front, &p, a0)?)?,
                None => match closed_rear_track(&front, &p) {
                    Ok(t) => t.rear,
                    Err(Error::NoFixedPoint) => {
                        warn(format!("{id}, l = {l}: monodromy is elliptic; rear track from alpha0 = pi does not close"));
                        rear_track(&front, &integrate_steering(&front, &p, std::f64::consts::PI)?)?
                    }
                    Err(e) => return Err(e.into()),
                },
            };
            let name = tag(&id, Some((k, l)), ls.len());
            if sink.wants(Format::Csv) {
                sink.emit(Some(&name), Format::Csv, &track_csv(&front, &rear))?;
            }
            if sink.wants(Format::Svg) {
                let proj = Projection::new(front.model, curve.base_point(), &front);
                let layers = [
                    Layer { label: "front", color: "steelblue", curve: &front },
                    Layer { label: "rear", color: "firebrick", curve: &rear.track },
                ];
                sink.emit(Some(&name), Format::Svg, &svg(&proj, &layers))?;
            }
        }
    }
    Ok(Outcome::default())
}

const TRACK_COLUMNS: [&str; 13] = [
    "u", "s", "t", "alpha", "front_x", "front_y", "front_z", "rear_x", "rear_y", "rear_z", "kappa", "k", "sign",
];

fn track_csv(front: &WaveFront64, rear: &bikefront::RearTrack64) -> String {
    let h = front.step();
    let s = cumulative(&front.speed, h);
    let t = cumulative(&rear.track.speed, h);
    let mut table = Table::new(&TRACK_COLUMNS);
    for i in 0..front.len() {
        let (f, r) = (front.positions[i], rear.track.positions[i]);
        table.row(
            [
                front.param(i),
                s[i],
                t[i],
                rear.alpha[i],
                f.x,
                f.y,
                f.z,
                r.x,
                r.y,
                r.z,
                front.kappa[i],
                rear.track.kappa[i],
                rear.track.sign[i],
            ]
            .map(num),
        );
    }
    table.finish()
}

#[derive(Serialize)]
struct FixedPointOut {
    theta: f64,
    derivative: f64,
    attracting: bool,
}

#[derive(Serialize)]
struct MonodromyOut {
    curve_id: String,
    model: SurfaceModel,
    l: f64,
    matrix: [[f64; 2]; 2],
    log_scale: f64,
    trace: f64,
    class: MobiusClass,
    fixed_points: Vec<FixedPointOut>,
}

fn monodromy(cfg: &RunConfig, curves: &[CurveInput], sink: &Sink) -> Result<Outcome, CliError> {
    sink.unsupported("monodromy", &[Format::Json]);
    let ls = require_lengths(cfg, "monodromy")?;
    let mut out = Vec::new();
    for (i, curve) in curves.iter().enumerate() {
        let front = curve.front()?;
        for &l in &ls {
            let p = params(l, front.model)?;
            let m = compute_monodromy_with_tol(&front, &p, cfg.tolerances.tol_parabolic)?;
            out.push(MonodromyOut {
                curve_id: curve.id(i),
                model: front.model,
                l,
                matrix: m.matrix(),
                log_scale: m.log_scale,
                trace: m.trace(),
                class: m.class,
                fixed_points: fixed_points(&m)
                    .into_iter()
                    .map(|f| FixedPointOut {
                        theta: f.theta,
                        derivative: f.derivative,
                        attracting: f.attracting,
                    })
                    .collect(),
            });
        }
    }
    if sink.wants(Format::Json) {
        let body = if out.len() == 1 { to_json(&out[0]) } else { to_json(&out) };
        sink.emit(None, Format::Json, &body)?;
    }
    Ok(Outcome::default())
}

const NEEDS_L: [Check; 4] = [Check::CurvatureRelation, Check::DerivativeLaw, Check::DerivativeLawCorrected, Check::SpeedRatio];
const DEFAULT_DISTANCE: f64 = 1.0;

fn check_name(c: Check) -> &'static str {
    match c {
        Check::All => "all",
        Check::CurvatureRelation => "curvature_relation",
        Check::SphericalIso => "spherical_iso",
        Check::HyperbolicIso => "hyperbolic_iso",
        Check::Duality => "duality",
        Check::Equidistant => "equidistant",
        Check::DerivativeLaw => "derivative_law",
        Check::DerivativeLawCorrected => "derivative_law_corrected",
        Check::DerivativeCurve => "derivative_curve",
        Check::SpeedRatio => "speed_ratio",
    }
}

fn model_of(c: Check) -> Option<SurfaceModel> {
    match c {
        Check::SphericalIso | Check::Duality | Check::DerivativeCurve => Some(SurfaceModel::Sphere),
        Check::HyperbolicIso | Check::Equidistant => Some(SurfaceModel::Hyperbolic),
        _ => None,
    }
}

fn checks_for(check: Check, model: SurfaceModel, have_l: bool) -> Vec<Check> {
    use Check::*;
    let all = [
        SphericalIso,
        HyperbolicIso,
        Duality,
        Equidistant,
        DerivativeCurve,
        CurvatureRelation,
        SpeedRatio,
        DerivativeLaw,
        DerivativeLawCorrected,
    ];
    if check != All {
        return vec![check];
    }
    all.into_iter()
        .filter(|c| model_of(*c).is_none_or(|m| m == model))
        .filter(|c| have_l || !NEEDS_L.contains(c))
        .collect()
}

/// Errors meaning the statement does not apply to this input.
fn is_hypothesis(e: &Error) -> bool {
    matches!(
        e,
        Error::NotHyperbolic { .. }
            | Error::NoFixedPoint
            | Error::NotSmooth
            | Error::NotConvex { .. }
            | Error::NotProper { .. }
            | Error::NotHorocyclicallyConvex { .. }
    )
}

fn run_check(c: Check, front: &WaveFront64, p: Option<&BicycleParams64>, distance: f64) -> bikefront::Result<VerificationReport> {
    let p = || p.expect("length checked by caller");
    match c {
        Check::All => unreachable!("expanded by checks_for"),
        Check::CurvatureRelation => check_curvature_relation(front, p()),
        Check::SphericalIso => check_spherical_isoperimetric(front),
        Check::HyperbolicIso => check_hyperbolic_isoperimetric(front),
        Check::Duality => check_duality(front),
        Check::Equidistant => check_equidistant_evolution(front, distance),
        Check::DerivativeLaw => check_derivative_law(front, p()),
        Check::DerivativeLawCorrected => check_corrected_derivative_law(front, p()),
        Check::DerivativeCurve => check_derivative_curve(front),
        Check::SpeedRatio => check_speed_ratio(front, p()),
    }
}

fn not_applicable(c: Check, e: &Error, inputs: serde_json::Value) -> VerificationReport {
    let mut r = VerificationReport::identity(check_name(c), f64::NAN, f64::NAN, f64::NAN, TOL_IDENTITY, inputs);
    r.pass = false;
    r.status = CheckStatus::HypothesisViolated;
    r.with_note(e.to_string())
}

fn verify(cfg: &RunConfig, curves: &[CurveInput], sink: &Sink) -> Result<Outcome, CliError> {
    sink.unsupported("verify", &[Format::Json]);
    let check = cfg.check.unwrap_or(Check::All);
    let ls = cfg.lengths();
    if NEEDS_L.contains(&check) && ls.is_empty() {
        return Err(CliError::Usage(format!("check {} needs --l or --l-list", check_name(check))));
    }
    let distance = cfg.distance.unwrap_or(DEFAULT_DISTANCE);
    let mut reports = Vec::new();
    for (i, curve) in curves.iter().enumerate() {
        let id = curve.id(i);
        let front = curve.front()?;
        if let Some(m) = model_of(check).filter(|&m| m != front.model) {
            return Err(CliError::Usage(format!("check {} applies to {m} curves; {id} is {}", check_name(check), front.model)));
        }
        for c in checks_for(check, front.model, !ls.is_empty()) {
            let lens: Vec<Option<f64>> = if NEEDS_L.contains(&c) { ls.iter().copied().map(Some).collect() } else { vec![None] };
            for l in lens {
                let p = l.map(|l| params(l, front.model)).transpose()?;
                let mut report = match run_check(c, &front, p.as_ref(), distance) {
                    Ok(r) => r,
                    Err(e) if is_hypothesis(&e) => not_applicable(c, &e, serde_json::json!({"model": front.model, "l": l})),
                    Err(e) => return Err(e.into()),
                };
                if let serde_json::Value::Object(map) = &mut report.inputs {
                    map.insert("curve_id".into(), id.clone().into());
                }
                if report.status == CheckStatus::HypothesisViolated {
                    warn(format!(
                        "{id}: {} hypothesis not met ({}); not asserted",
                        report.name,
                        report.note.as_deref().unwrap_or("")
                    ));
                } else if report.failed() {
                    eprintln!("{id}: {} FAILED (residual {:e}, tolerance {:e})", report.name, report.residual, report.tolerance);
                }
                reports.push(report);
            }
        }
    }
    let failed = reports.iter().any(|r| r.failed());
    if sink.wants(Format::Json) {
        sink.emit(None, Format::Json, &to_json(&reports))?;
    }
    Ok(Outcome { failed })
}

const SWEEP_COLUMNS: [&str; 17] = [
    "curve_id",
    "model",
    "l",
    "area",
    "threshold",
    "above_threshold",
    "class",
    "trace",
    "l_parabolic",
    "rear_length_at_parabolic",
    "rear_cusps",
    "rear_inflections",
    "rear_min_abs_curvature",
    "parabolic_signature",
    "degenerate_rear",
    "counterexample",
    "error",
];

fn sweep_row(t: &mut Table, r: &MenzinSweepRow) {
    let opt_usize = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
    t.row([
        r.curve_id.clone(),
        r.model.to_string(),
        num(r.l),
        num(r.area),
        num(r.threshold),
        r.above_threshold.to_string(),
        r.class.map(|c| c.name().to_string()).unwrap_or_default(),
        num(r.trace),
        opt_num(r.l_parabolic),
        opt_num(r.rear_length_at_parabolic),
        opt_usize(r.rear_cusps),
        opt_usize(r.rear_inflections),
        opt_num(r.rear_min_abs_curvature),
        r.parabolic_signature.map(|b| b.to_string()).unwrap_or_default(),
        r.degenerate_rear.to_string(),
        r.counterexample.to_string(),
        r.error.clone().unwrap_or_default(),
    ]);
}

fn sweep(cfg: &RunConfig, curves: &[CurveInput], sink: &Sink) -> Result<Outcome, CliError> {
    sink.unsupported("sweep", &[Format::Json, Format::Csv]);
    let ls = require_lengths(cfg, "sweep")?;
    let mut by_model: BTreeMap<&'static str, (SurfaceModel, Vec<CurveSpec>)> = BTreeMap::new();
    for (i, c) in curves.iter().enumerate() {
        let CurveInput::Spec(spec) = c else {
            return Err(CliError::Usage("sweep needs curve specifications, not sampled curves".into()));
        };
        let mut spec = spec.clone();
        spec.id.get_or_insert_with(|| c.id(i));
        by_model.entry(spec.model.name()).or_insert_with(|| (spec.model, Vec::new())).1.push(spec);
    }
    let reports: Vec<MenzinSweepReport> = by_model.values().map(|(m, specs)| menzin_sweep(specs, &ls, *m)).collect();
    let mut failed = false;
    for rep in &reports {
        for r in &rep.rows {
            if r.counterexample {
                eprintln!("{} l = {}: counterexample (area {:e} above {:e}, class {:?})", r.curve_id, r.l, r.area, r.threshold, r.class);
            }
            if r.parabolic_signature == Some(false) {
                eprintln!("{} l = {}: rear track at l' lacks the parabolic signature", r.curve_id, r.l);
            }
            if let Some(e) = &r.error {
                eprintln!("{} l = {}: {e}", r.curve_id, r.l);
            }
        }
        failed |= !rep.passed() || rep.errors > 0;
    }
    if sink.wants(Format::Csv) {
        let mut t = Table::new(&SWEEP_COLUMNS);
        for r in reports.iter().flat_map(|rep| &rep.rows) {
            sweep_row(&mut t, r);
        }
        sink.emit(None, Format::Csv, &t.finish())?;
    }
    if sink.wants(Format::Json) {
        sink.emit(None, Format::Json, &to_json(&reports))?;
    }
    Ok(Outcome { failed })
}

fn transform(cfg: &RunConfig, curves: &[CurveInput], sink: &Sink) -> Result<Outcome, CliError> {
    let cmd = if cfg.command == Command::Dual { "dual" } else { "equidistant" };
    sink.unsupported(cmd, &[Format::Csv, Format::Svg]);
    for (i, curve) in curves.iter().enumerate() {
        let id = curve.id(i);
        let front = curve.front()?;
        let image = match cfg.command {
            Command::Dual => dual(&front)?,
            _ => {
                let d = cfg
                    .distance
                    .ok_or_else(|| CliError::Usage("equidistant needs --distance".into()))?;
                equidistant(&front, d)
            }
        };
        if sink.wants(Format::Csv) {
            sink.emit(Some(&id), Format::Csv, &curve_csv(&image))?;
        }
        if sink.wants(Format::Svg) {
            let proj = Projection::new(front.model, curve.base_point(), &front);
            let layers = [
                Layer { label: "curve", color: "steelblue", curve: &front },
                Layer { label: cmd, color: "seagreen", curve: &image },
            ];
            sink.emit(Some(&id), Format::Svg, &svg(&proj, &layers))?;
        }
    }
    Ok(Outcome::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_expands_by_model() {
        let s = checks_for(Check::All, SurfaceModel::Sphere, false);
        assert!(s.contains(&Check::SphericalIso) && s.contains(&Check::Duality));
        assert!(!s.contains(&Check::HyperbolicIso) && !s.contains(&Check::CurvatureRelation));
        let h = checks_for(Check::All, SurfaceModel::Hyperbolic, true);
        assert!(h.contains(&Check::Equidistant) && h.contains(&Check::SpeedRatio));
        assert!(!h.contains(&Check::DerivativeCurve));
    }

    #[test]
    fn cumulative_length_of_constant_speed() {
        let s = cumulative(&[2.0; 8], 0.5);
        assert_eq!(s[0], 0.0);
        assert!((s[7] - 7.0).abs() < 1e-15);
    }
}
