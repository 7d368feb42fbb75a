use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use frenet_lift::report::{self, Command, KindArg, OutputFormat, RunConfig, DEFAULT_SAMPLES};

/// Frenet apparatus of space curves and of their lifts to the tangent bundle.
#[derive(Parser)]
#[command(name = "frenet-lift", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Frame, curvature, torsion and Frenet-formula residuals along a curve.
    Frenet {
        #[arg(long, value_name = "PATH")]
        curve: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Frenet data of a vertical, complete or horizontal lift of a curve.
    Lift {
        #[arg(long, value_name = "PATH")]
        curve: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_name = "PATH")]
        connection: Option<PathBuf>,
        /// Fiber point of a vertical lift (default: start of the curve).
        #[arg(long, value_name = "a,b,c", value_parser = parse_triple)]
        anchor: Option<[f64; 3]>,
        /// Initial fiber vector of a horizontal lift.
        #[arg(long, value_name = "a,b,c", value_parser = parse_triple)]
        w0: Option<[f64; 3]>,
        #[command(flatten)]
        common: Common,
    },
    /// Lifted vector fields and lift-identity residuals at points of TR³.
    Fields {
        /// Vector field X; a second occurrence gives Y.
        #[arg(long, value_name = "PATH", required = true)]
        field: Vec<PathBuf>,
        /// Scalar function f; a second occurrence gives g.
        #[arg(long, value_name = "PATH", required = true)]
        scalar: Vec<PathBuf>,
        #[arg(long, value_name = "PATH")]
        connection: Option<PathBuf>,
        /// A point x1,x2,x3,y1,y2,y3 (repeatable).
        #[arg(long, value_name = "x1,x2,x3,y1,y2,y3", allow_hyphen_values = true)]
        point: Vec<String>,
        /// File with one point per line.
        #[arg(long, value_name = "PATH")]
        points: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the built-in invariant suite.
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (default: standard output).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Tolerance override, e.g. residual_tol=1e-12 (repeatable).
    #[arg(long, value_name = "NAME=VALUE")]
    tol: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    V,
    C,
    H,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got {}", parts.len()));
    }
    let mut out = [0.0; 3];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|_| format!("'{p}' is not a number"))?;
    }
    Ok(out)
}

fn apply_common(cfg: &mut RunConfig, common: Common) {
    cfg.samples = common.samples;
    cfg.format = match common.format {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
    };
    cfg.out = common.out;
    cfg.tolerances = common.tol;
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = RunConfig::default();
    let command = match cli.command {
        Cmd::Frenet { curve, common } => {
            cfg.curve = Some(curve);
            apply_common(&mut cfg, common);
            Command::Frenet
        }
        Cmd::Lift { curve, kind, connection, anchor, w0, common } => {
            cfg.curve = Some(curve);
            cfg.kind = Some(match kind {
                Kind::V => KindArg::Vertical,
                Kind::C => KindArg::Complete,
                Kind::H => KindArg::Horizontal,
            });
            cfg.connection = connection;
            cfg.anchor = anchor;
            cfg.w0 = w0;
            apply_common(&mut cfg, common);
            Command::Lift
        }
        Cmd::Fields { field, scalar, connection, point, points, common } => {
            cfg.fields = field;
            cfg.scalars = scalar;
            cfg.connection = connection;
            cfg.points = point;
            cfg.points_file = points;
            apply_common(&mut cfg, common);
            Command::Fields
        }
        Cmd::Verify { common } => {
            apply_common(&mut cfg, common);
            Command::Verify
        }
    };
    ExitCode::from(report::run(command, &cfg) as u8)
}
