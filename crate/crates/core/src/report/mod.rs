//! Command implementations behind the `frenet-lift` binary.
//!
//! Every command writes its report to a caller-supplied sink and returns a
//! process exit code: [`SUCCESS`], [`VERIFY_FAILED`], [`INPUT_ERROR`] or
//! [`DEGENERATE`].

mod builtin;
mod commands;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error as ThisError;

use crate::error::Error;
use crate::frenet::ToleranceConfig;

pub use builtin::{builtin_curve, circle, helix345, line, unit_speed_helix, BUILTIN_NAMES};
pub use commands::{cmd_fields, cmd_frenet, cmd_lift, frenet_rows, write_frenet, write_lift};
pub use verify::{cmd_verify, run_checks, Check, Relation};

pub const SUCCESS: i32 = 0;
pub const VERIFY_FAILED: i32 = 1;
pub const INPUT_ERROR: i32 = 2;
pub const DEGENERATE: i32 = 3;

/// Default number of grid points.
pub const DEFAULT_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KindArg {
    Vertical,
    Complete,
    Horizontal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Frenet,
    Lift,
    Fields,
    Verify,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub curve: Option<PathBuf>,
    /// Vector field files: `X`, then optionally `Y`.
    pub fields: Vec<PathBuf>,
    /// Scalar function files: `f`, then optionally `g`.
    pub scalars: Vec<PathBuf>,
    /// `None` means the flat connection.
    pub connection: Option<PathBuf>,
    pub kind: Option<KindArg>,
    pub anchor: Option<[f64; 3]>,
    pub w0: Option<[f64; 3]>,
    /// Points of TR³ as six comma-separated numbers.
    pub points: Vec<String>,
    /// File with one point per line.
    pub points_file: Option<PathBuf>,
    pub samples: usize,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    /// `NAME=VALUE` overrides of [`ToleranceConfig`].
    pub tolerances: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            curve: None,
            fields: Vec::new(),
            scalars: Vec::new(),
            connection: None,
            kind: None,
            anchor: None,
            w0: None,
            points: Vec::new(),
            points_file: None,
            samples: DEFAULT_SAMPLES,
            format: OutputFormat::Csv,
            out: None,
            tolerances: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn tolerance_config(&self) -> Result<ToleranceConfig, RunError> {
        let mut cfg = ToleranceConfig::default();
        for item in &self.tolerances {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| RunError::Input(format!("tolerance '{item}' is not NAME=VALUE")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| RunError::Input(format!("tolerance '{item}': '{value}' is not a number")))?;
            cfg.set(name.trim(), value).map_err(|e| RunError::Input(e.to_string()))?;
        }
        Ok(cfg)
    }

    pub(crate) fn checked_samples(&self) -> Result<usize, RunError> {
        if self.samples < 2 {
            return Err(RunError::Input(format!("--samples must be at least 2, got {}", self.samples)));
        }
        Ok(self.samples)
    }
}

/// Failure of a command, classified by exit code.
#[derive(Debug, ThisError)]
pub enum RunError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Degenerate(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Input(_) => INPUT_ERROR,
            RunError::Degenerate(_) => DEGENERATE,
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::DegenerateCurvature { .. } | Error::ZeroSpeed { .. } | Error::RankDeficient { .. } => {
                RunError::Degenerate(e.to_string())
            }
            _ => RunError::Input(e.to_string()),
        }
    }
}

impl From<io::Error> for RunError {
    fn from(e: io::Error) -> Self {
        RunError::Input(format!("write failed: {e}"))
    }
}

pub(crate) fn read_input(path: &Path) -> Result<String, RunError> {
    std::fs::read_to_string(path).map_err(|e| RunError::Input(format!("{}: {e}", path.display())))
}

/// Formats `x` with 17 significant digits. Negative zero prints as zero.
pub fn csv_number(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

pub(crate) fn write_csv_row(out: &mut dyn Write, values: &[f64]) -> io::Result<()> {
    let row: Vec<String> = values.iter().map(|&v| csv_number(v)).collect();
    writeln!(out, "{}", row.join(","))
}

pub(crate) fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), RunError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| RunError::Input(format!("write failed: {e}")))?;
    writeln!(out)?;
    Ok(())
}

/// Runs `command` against `out`, reporting failures on `err`.
pub fn run_to(command: Command, cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match command {
        Command::Frenet => cmd_frenet(cfg, out),
        Command::Lift => cmd_lift(cfg, out),
        Command::Fields => cmd_fields(cfg, out),
        Command::Verify => cmd_verify(cfg, out),
    };
    let result = result.and_then(|code| {
        out.flush()?;
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let label = match e {
                RunError::Input(_) => "error",
                RunError::Degenerate(_) => "degenerate geometry",
            };
            let _ = writeln!(err, "frenet-lift: {label}: {e}");
            e.exit_code()
        }
    }
}

/// Runs `command`, writing to `cfg.out` or standard output.
pub fn run(command: Command, cfg: &RunConfig) -> i32 {
    let stderr = io::stderr();
    let mut err = stderr.lock();
    match &cfg.out {
        Some(path) => match File::create(path) {
            Ok(file) => run_to(command, cfg, &mut BufWriter::new(file), &mut err),
            Err(e) => {
                let _ = writeln!(err, "frenet-lift: error: {}: {e}", path.display());
                INPUT_ERROR
            }
        },
        None => {
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            run_to(command, cfg, &mut out, &mut err)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(csv_number(0.12), "1.2000000000000000e-1");
        assert_eq!(csv_number(-0.0), "0.0000000000000000e0");
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23] {
            assert_eq!(csv_number(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn tolerance_overrides() {
        let cfg = RunConfig { tolerances: vec!["residual_tol=1e-16".into()], ..Default::default() };
        assert_eq!(cfg.tolerance_config().unwrap().residual_tol, 1e-16);
        for bad in ["residual_tol", "nope=1", "ortho_tol=x"] {
            let cfg = RunConfig { tolerances: vec![bad.into()], ..Default::default() };
            assert!(cfg.tolerance_config().is_err(), "{bad}");
        }
    }

    #[test]
    fn error_classes() {
        assert_eq!(RunError::from(Error::DegenerateCurvature { t: 0.0, kappa: 0.0 }).exit_code(), DEGENERATE);
        assert_eq!(RunError::from(Error::Config("x".into())).exit_code(), INPUT_ERROR);
    }
}
