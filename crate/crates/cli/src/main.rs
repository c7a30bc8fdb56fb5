use std::path::PathBuf;
use std::process::ExitCode;

use bikefront::SurfaceModel;
use clap::Parser;

mod commands;
mod config;
mod error;
mod output;

use config::{Check, Command, Format, RunConfig, Tolerances};
use error::CliError;

/// Bicycle tracks, monodromy maps and isoperimetric checks on the sphere
/// and the hyperbolic plane.
///
/// Exit status: 0 on success, 1 when a check or sweep fails or a
/// computation is impossible for the input, 2 on usage or input errors.
#[derive(Parser, Debug)]
#[command(version, about, long_about = None)]
struct Cli {
    /// What to compute. Optional when --config names it.
    command: Option<Command>,

    /// JSON run configuration; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Curve file: JSON specification(s) or a sampled curve CSV.
    #[arg(long)]
    curve: Option<PathBuf>,

    /// Require every curve to be on this model.
    #[arg(long, value_parser = parse_model)]
    model: Option<SurfaceModel>,

    /// Bicycle length.
    #[arg(long)]
    l: Option<f64>,

    /// Comma-separated bicycle lengths.
    #[arg(long, value_delimiter = ',')]
    l_list: Vec<f64>,

    /// Override the sample count of every curve specification.
    #[arg(long)]
    samples: Option<usize>,

    /// Trace gap below which a monodromy counts as parabolic.
    #[arg(long)]
    tol_parabolic: Option<f64>,

    /// Output path prefix; extensions are appended. Standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Comma-separated output formats.
    #[arg(long, value_delimiter = ',', value_enum)]
    format: Vec<Format>,

    /// Check to run with `verify`.
    #[arg(long, value_enum)]
    check: Option<Check>,

    /// Signed distance for `equidistant`, and the evolution time of the
    /// equidistant check.
    #[arg(long, allow_hyphen_values = true)]
    distance: Option<f64>,

    /// Initial steering angle for `simulate`; by default the closed track
    /// through the attracting fixed point.
    #[arg(long, allow_hyphen_values = true)]
    alpha0: Option<f64>,
}

fn parse_model(s: &str) -> Result<SurfaceModel, String> {
    match s {
        "sphere" => Ok(SurfaceModel::Sphere),
        "hyperbolic" => Ok(SurfaceModel::Hyperbolic),
        _ => Err(format!("unknown model {s:?}; expected sphere or hyperbolic")),
    }
}

impl Cli {
    fn into_config(self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig {
                command: self.command.ok_or_else(|| CliError::Usage("missing command (or --config)".into()))?,
                curve_file: self.curve.clone().ok_or_else(|| CliError::Usage("missing --curve".into()))?,
                model: None,
                l: None,
                l_list: Vec::new(),
                samples: None,
                tolerances: Tolerances::default(),
                output: None,
                formats: Vec::new(),
                check: None,
                distance: None,
                alpha0: None,
            },
        };
        if let Some(c) = self.command {
            cfg.command = c;
        }
        if let Some(c) = self.curve {
            cfg.curve_file = c;
        }
        if self.model.is_some() {
            cfg.model = self.model;
        }
        if self.l.is_some() {
            cfg.l = self.l;
            cfg.l_list.clear();
        }
        if !self.l_list.is_empty() {
            cfg.l_list = self.l_list;
        }
        if self.samples.is_some() {
            cfg.samples = self.samples;
        }
        if let Some(t) = self.tol_parabolic {
            cfg.tolerances.tol_parabolic = t;
        }
        if self.out.is_some() {
            cfg.output = self.out;
        }
        if !self.format.is_empty() {
            cfg.formats = self.format;
        }
        if self.check.is_some() {
            cfg.check = self.check;
        }
        if self.distance.is_some() {
            cfg.distance = self.distance;
        }
        if self.alpha0.is_some() {
            cfg.alpha0 = self.alpha0;
        }
        if cfg.tolerances.tol_parabolic.is_nan() || cfg.tolerances.tol_parabolic <= 0.0 {
            return Err(CliError::Usage("tol_parabolic must be positive".into()));
        }
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.into_config().and_then(|cfg| commands::run(&cfg));
    match result {
        Ok(outcome) if outcome.failed => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
