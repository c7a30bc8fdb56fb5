use std::fs;
use std::path::{Path, PathBuf};

use bikefront::{build, CurveKind, CurveSpec, SurfaceModel, WaveFront64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Simulate,
    Monodromy,
    Verify,
    Sweep,
    Dual,
    Equidistant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    All,
    #[value(name = "curvature_relation")]
    CurvatureRelation,
    #[value(name = "spherical_iso")]
    SphericalIso,
    #[value(name = "hyperbolic_iso")]
    HyperbolicIso,
    Duality,
    Equidistant,
    #[value(name = "derivative_law")]
    DerivativeLaw,
    #[value(name = "derivative_law_corrected")]
    DerivativeLawCorrected,
    #[value(name = "derivative_curve")]
    DerivativeCurve,
    #[value(name = "speed_ratio")]
    SpeedRatio,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_tol_parabolic")]
    pub tol_parabolic: f64,
}

fn default_tol_parabolic() -> f64 {
    bikefront::monodromy::DEFAULT_TOL_PARABOLIC
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_parabolic: default_tol_parabolic(),
        }
    }
}

/// Everything one invocation needs. Readable from a JSON file with
/// `--config`; unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub curve_file: PathBuf,
    /// When set, every curve must use this model.
    #[serde(default)]
    pub model: Option<SurfaceModel>,
    #[serde(default)]
    pub l: Option<f64>,
    #[serde(default)]
    pub l_list: Vec<f64>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub formats: Vec<Format>,
    #[serde(default)]
    pub check: Option<Check>,
    #[serde(default)]
    pub distance: Option<f64>,
    #[serde(default)]
    pub alpha0: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = read(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::from_json(path, e))
    }

    /// Bicycle lengths: `l_list` if given, else `l`.
    pub fn lengths(&self) -> Vec<f64> {
        if self.l_list.is_empty() {
            self.l.into_iter().collect()
        } else {
            self.l_list.clone()
        }
    }

    pub fn formats_or(&self, default: Format) -> Vec<Format> {
        let mut f = if self.formats.is_empty() { vec![default] } else { self.formats.clone() };
        f.sort();
        f.dedup();
        f
    }
}

/// A curve read from disk: an analytic specification or a sampled front
/// (curve CSV as written by `dual` and `equidistant`).
#[derive(Clone, Debug)]
pub enum CurveInput {
    Spec(CurveSpec),
    Sampled { id: String, front: WaveFront64 },
}

impl CurveInput {
    pub fn id(&self, index: usize) -> String {
        match self {
            CurveInput::Spec(s) => s.id.clone().unwrap_or_else(|| format!("curve{index}")),
            CurveInput::Sampled { id, .. } => id.clone(),
        }
    }

    pub fn model(&self) -> SurfaceModel {
        match self {
            CurveInput::Spec(s) => s.model,
            CurveInput::Sampled { front, .. } => front.model,
        }
    }

    pub fn front(&self) -> Result<WaveFront64, CliError> {
        match self {
            CurveInput::Spec(s) => Ok(build(s)?),
            CurveInput::Sampled { front, .. } => Ok(front.clone()),
        }
    }

    /// Center used for display projections.
    pub fn base_point(&self) -> Option<[f64; 3]> {
        match self {
            CurveInput::Spec(s) => Some(s.base_point.unwrap_or([0.0, 0.0, 1.0])),
            CurveInput::Sampled { .. } => None,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    Many(Vec<CurveSpec>),
    One(Box<CurveSpec>),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Reads curve specifications from a JSON file (one object or an array),
/// or a single sampled curve from a `.csv` file.
pub fn parse_curve_file(path: &Path, samples: Option<usize>) -> Result<Vec<CurveInput>, CliError> {
    if path.extension().and_then(|e| e.to_str()) == Some("csv") {
        let front = crate::output::read_curve_csv(path)?;
        let id = path.file_stem().and_then(|s| s.to_str()).unwrap_or("curve").to_string();
        return Ok(vec![CurveInput::Sampled { id, front }]);
    }
    let text = read(path)?;
    let specs = parse_curve_json(&text).map_err(|e| match e {
        CliError::Schema { msg, .. } => CliError::Schema {
            path: path.to_path_buf(),
            msg,
        },
        CliError::Parse { line, column, msg, .. } => CliError::Parse {
            path: path.to_path_buf(),
            line,
            column,
            msg,
        },
        CliError::SpecInvalid { msg, .. } => CliError::SpecInvalid {
            path: path.to_path_buf(),
            msg,
        },
        other => other,
    })?;
    Ok(specs
        .into_iter()
        .map(|mut s| {
            if let Some(n) = samples {
                s.samples = n;
            }
            CurveInput::Spec(s)
        })
        .collect())
}

pub fn parse_curve_json(text: &str) -> Result<Vec<CurveSpec>, CliError> {
    let nowhere = PathBuf::new();
    // Parse once untyped to tell syntax errors from schema errors and to
    // report which entry failed.
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::from_json(&nowhere, e))?;
    let specs = match serde_json::from_value::<OneOrMany>(value.clone()) {
        Ok(OneOrMany::Many(v)) => v,
        Ok(OneOrMany::One(s)) => vec![*s],
        Err(_) => {
            // re-run on each entry for a precise message
            let entries = match value {
                serde_json::Value::Array(v) => v,
                other => vec![other],
            };
            for (i, entry) in entries.into_iter().enumerate() {
                if let Err(e) = serde_json::from_value::<CurveSpec>(entry) {
                    return Err(CliError::Schema {
                        path: nowhere,
                        msg: format!("curve {i}: {e}"),
                    });
                }
            }
            return Err(CliError::Schema {
                path: nowhere,
                msg: "expected a curve object or an array of curve objects".into(),
            });
        }
    };
    for (i, s) in specs.iter().enumerate() {
        let missing = s.missing_fields();
        if !missing.is_empty() {
            let kind = match s.kind {
                CurveKind::Circle => "circle",
                CurveKind::PolarFourier => "polar_fourier",
            };
            return Err(CliError::Schema {
                path: nowhere,
                msg: format!("curve {i}: kind {kind} requires field(s) {}", missing.join(", ")),
            });
        }
        if let Err(e) = s.validate() {
            return Err(CliError::SpecInvalid {
                path: nowhere,
                msg: format!("curve {i}: {e}"),
            });
        }
    }
    Ok(specs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_circle() {
        let v = parse_curve_json(r#"{"model":"sphere","kind":"circle","radius":0.8,"samples":1024}"#).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, CurveKind::Circle);
        assert_eq!(v[0].samples, 1024);
    }

    #[test]
    fn missing_model_is_schema_error() {
        assert!(matches!(parse_curve_json(r#"{"kind":"circle"}"#), Err(CliError::Schema { .. })));
        let e = parse_curve_json(r#"{"kind":"circle","model":"sphere"}"#).unwrap_err();
        assert!(matches!(e, CliError::Schema { .. }));
        assert!(e.to_string().contains("radius"), "{e}");
    }

    #[test]
    fn unknown_key_is_schema_error() {
        let e = parse_curve_json(r#"[{"model":"sphere","kind":"circle","radius":0.5,"colour":1}]"#).unwrap_err();
        assert!(matches!(e, CliError::Schema { .. }), "{e}");
    }

    #[test]
    fn syntax_error_has_position() {
        match parse_curve_json("{\n  \"model\": \"sphere\",\n  oops\n}") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_radius_is_spec_invalid() {
        let e = parse_curve_json(r#"{"model":"sphere","kind":"polar_fourier","rho0":0.1,"cos":[0.3]}"#).unwrap_err();
        assert!(matches!(e, CliError::SpecInvalid { .. }), "{e}");
    }

    #[test]
    fn strict_config() {
        let ok: Result<RunConfig, _> = serde_json::from_str(r#"{"command":"monodromy","curve_file":"c.json","l":0.5}"#);
        assert!(ok.is_ok());
        let bad: Result<RunConfig, _> = serde_json::from_str(r#"{"command":"monodromy","curve_file":"c.json","lenght":0.5}"#);
        assert!(bad.is_err());
    }
}
