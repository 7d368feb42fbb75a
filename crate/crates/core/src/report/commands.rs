use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::{
    builtin_curve, csv_number, read_input, write_csv_row, write_json, KindArg, OutputFormat, RunConfig, RunError, SUCCESS,
};
use crate::expr::{parse_curve_file, parse_field_file, CurveSpec, FieldKind, FieldSpec};
use crate::frenet::{frenet_apparatus, FrenetData, ToleranceConfig};
use crate::lift::{
    lift_curve, lift_field, lift_function, parse_connection_file, prop21_check, Connection, FieldLift, LiftKind,
    LiftedField, Prop21Residuals, TangentPoint,
};
use crate::lift_frenet::{theorem_residuals, LiftReport};

fn load_curve(cfg: &RunConfig) -> Result<CurveSpec, RunError> {
    let path = cfg.curve.as_deref().ok_or_else(|| RunError::Input("--curve is required".into()))?;
    if let Some(name) = path.to_str().and_then(|s| s.strip_prefix("builtin:")) {
        return builtin_curve(name).ok_or_else(|| RunError::Input(format!("no built-in curve named '{name}'")));
    }
    parse_curve_file(&read_input(path)?).map_err(|e| RunError::Input(format!("{}: {e}", path.display())))
}

fn load_field(path: &Path, want: FieldKind) -> Result<FieldSpec, RunError> {
    let spec =
        parse_field_file(&read_input(path)?).map_err(|e| RunError::Input(format!("{}: {e}", path.display())))?;
    if spec.kind != want {
        let what = if want == FieldKind::Vector { "a vector field (X1, X2, X3)" } else { "a scalar function (f)" };
        return Err(RunError::Input(format!("{}: expected {what}", path.display())));
    }
    Ok(spec)
}

fn load_connection(cfg: &RunConfig) -> Result<Connection, RunError> {
    match &cfg.connection {
        None => Ok(Connection::flat()),
        Some(path) => parse_connection_file(&read_input(path)?)
            .map_err(|e| RunError::Input(format!("{}: {e}", path.display()))),
    }
}

/// Frenet data at every grid point, in grid order. The first failure in
/// grid order is returned.
pub fn frenet_rows(curve: &CurveSpec, grid: &[f64], tol: &ToleranceConfig) -> Result<Vec<FrenetData>, RunError> {
    let rows: Vec<_> = grid.par_iter().map(|&t| frenet_apparatus(curve, t, tol)).collect();
    Ok(rows.into_iter().collect::<Result<Vec<_>, _>>()?)
}

const FRENET_HEADER: &str = "t,x1,x2,x3,T1,T2,T3,N1,N2,N3,B1,B2,B3,kappa,tau,res_T,res_N,res_B";

#[derive(Serialize)]
struct FrenetJson<'a> {
    curve: &'a str,
    rows: &'a [FrenetData],
}

/// Writes the Frenet report for `curve` on an `n`-point grid.
pub fn write_frenet(
    curve: &CurveSpec,
    n: usize,
    tol: &ToleranceConfig,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<(), RunError> {
    let rows = frenet_rows(curve, &curve.grid(n), tol)?;
    match format {
        OutputFormat::Csv => {
            writeln!(out, "{FRENET_HEADER}")?;
            for r in &rows {
                let mut v = vec![r.t];
                for part in [r.point, r.tangent, r.normal, r.binormal] {
                    v.extend(part);
                }
                v.extend([r.kappa, r.tau]);
                v.extend(r.residuals);
                write_csv_row(out, &v)?;
            }
        }
        OutputFormat::Json => write_json(out, &FrenetJson { curve: &curve.name, rows: &rows })?,
    }
    Ok(())
}

pub fn cmd_frenet(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, RunError> {
    let n = cfg.checked_samples()?;
    let tol = cfg.tolerance_config()?;
    let curve = load_curve(cfg)?;
    write_frenet(&curve, n, &tol, cfg.format, out)?;
    Ok(SUCCESS)
}

fn lift_kind(cfg: &RunConfig, g: &Connection) -> Result<LiftKind, RunError> {
    let kind = cfg.kind.ok_or_else(|| RunError::Input("--kind v|c|h is required".into()))?;
    if cfg.anchor.is_some() && kind != KindArg::Vertical {
        return Err(RunError::Input("--anchor applies only to vertical lifts".into()));
    }
    if cfg.w0.is_some() && kind != KindArg::Horizontal {
        return Err(RunError::Input("--w0 applies only to horizontal lifts".into()));
    }
    Ok(match kind {
        KindArg::Vertical => LiftKind::Vertical { anchor: cfg.anchor },
        KindArg::Complete => LiftKind::Complete,
        KindArg::Horizontal => match cfg.w0 {
            Some(w0) => LiftKind::Horizontal { w0 },
            None if g.is_flat() => LiftKind::Horizontal { w0: [0.0; 3] },
            None => return Err(RunError::Input("w0 required for a horizontal lift with a non-flat connection".into())),
        },
    })
}

#[derive(Serialize)]
struct LiftSummary {
    max_residual: f64,
    max_discrepancy: f64,
    max_tau_discrepancy: f64,
    kappa_variation: f64,
    frame_ortho_max: f64,
    skew_max: f64,
}

#[derive(Serialize)]
struct LiftRow {
    t: f64,
    point: [f64; 6],
    tangent: [f64; 6],
    normal: [f64; 6],
    binormal: [f64; 6],
    kappa_lift: f64,
    tau_lift: f64,
    residuals: [f64; 3],
    oracle_kappa: f64,
    oracle_tau: f64,
}

#[derive(Serialize)]
struct LiftJson<'a> {
    curve: &'a str,
    kind: &'a str,
    rows: Vec<LiftRow>,
    summary: LiftSummary,
}

fn lift_header() -> String {
    let mut cols = vec!["t".to_string()];
    for prefix in ["p", "T", "N", "B"] {
        cols.extend((1..=6).map(|i| format!("{prefix}{i}")));
    }
    for c in ["kappa_lift", "tau_lift", "res1", "res2", "res3", "oracle_kappa", "oracle_tau"] {
        cols.push(c.to_string());
    }
    cols.join(",")
}

pub fn write_lift(report: &LiftReport, format: OutputFormat, out: &mut dyn Write) -> Result<(), RunError> {
    let summary = LiftSummary {
        max_residual: report.max_residual,
        max_discrepancy: report.max_discrepancy,
        max_tau_discrepancy: report.max_tau_discrepancy,
        kappa_variation: report.kappa_variation,
        frame_ortho_max: report.frame_ortho_max,
        skew_max: report.skew_max,
    };
    match format {
        OutputFormat::Csv => {
            writeln!(out, "{}", lift_header())?;
            for i in 0..report.grid.len() {
                let mut v = vec![report.grid[i]];
                v.extend(report.points[i]);
                for e in &report.frames[i] {
                    v.extend(e);
                }
                v.extend([report.kappa_lift[i], report.tau_lift[i]]);
                v.extend(report.theorem_residuals[i]);
                v.extend([report.oracle_kappa[i], report.oracle_tau[i]]);
                write_csv_row(out, &v)?;
            }
            writeln!(
                out,
                "# max_residual={},max_discrepancy={},max_tau_discrepancy={},kappa_variation={},frame_ortho_max={},skew_max={}",
                csv_number(summary.max_residual),
                csv_number(summary.max_discrepancy),
                csv_number(summary.max_tau_discrepancy),
                csv_number(summary.kappa_variation),
                csv_number(summary.frame_ortho_max),
                csv_number(summary.skew_max)
            )?;
        }
        OutputFormat::Json => {
            let rows = (0..report.grid.len())
                .map(|i| LiftRow {
                    t: report.grid[i],
                    point: report.points[i],
                    tangent: report.frames[i][0],
                    normal: report.frames[i][1],
                    binormal: report.frames[i][2],
                    kappa_lift: report.kappa_lift[i],
                    tau_lift: report.tau_lift[i],
                    residuals: report.theorem_residuals[i],
                    oracle_kappa: report.oracle_kappa[i],
                    oracle_tau: report.oracle_tau[i],
                })
                .collect();
            write_json(out, &LiftJson { curve: &report.curve, kind: report.kind, rows, summary })?;
        }
    }
    Ok(())
}

pub fn cmd_lift(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, RunError> {
    let n = cfg.checked_samples()?;
    let tol = cfg.tolerance_config()?;
    let curve = load_curve(cfg)?;
    let g = load_connection(cfg)?;
    let kind = lift_kind(cfg, &g)?;
    let lifted = lift_curve(&curve, kind, &g)?;
    let report = theorem_residuals(&lifted, &curve.grid(n), &tol)?;
    write_lift(&report, cfg.format, out)?;
    Ok(SUCCESS)
}

fn parse_point(text: &str, origin: &str) -> Result<TangentPoint, RunError> {
    let parts: Vec<&str> = text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
    let mut values = Vec::with_capacity(parts.len());
    for p in &parts {
        values.push(
            p.parse::<f64>()
                .map_err(|_| RunError::Input(format!("{origin}: '{p}' is not a number")))?,
        );
    }
    if values.len() != 6 {
        return Err(RunError::Input(format!(
            "{origin}: a point of TR³ needs 6 numbers (x1,x2,x3,y1,y2,y3), got {}",
            values.len()
        )));
    }
    TangentPoint::from_slice(&values).map_err(|e| RunError::Input(format!("{origin}: {e}")))
}

fn load_points(cfg: &RunConfig) -> Result<Vec<TangentPoint>, RunError> {
    let mut points = Vec::new();
    for (i, p) in cfg.points.iter().enumerate() {
        points.push(parse_point(p, &format!("--point #{}", i + 1))?);
    }
    if let Some(path) = &cfg.points_file {
        for (i, line) in read_input(path)?.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                points.push(parse_point(line, &format!("{}: line {}", path.display(), i + 1))?);
            }
        }
    }
    if points.is_empty() {
        return Err(RunError::Input("no points given (use --point or --points)".into()));
    }
    Ok(points)
}

#[derive(Serialize)]
struct FieldRow {
    point: TangentPoint,
    vertical: [f64; 6],
    complete: [f64; 6],
    horizontal: [f64; 6],
    f_vertical: f64,
    f_complete: f64,
    residuals: Prop21Residuals,
}

fn field_row(
    x: &FieldSpec,
    y: &FieldSpec,
    f: &FieldSpec,
    g_fn: &FieldSpec,
    g: &Connection,
    p: &TangentPoint,
) -> Result<FieldRow, RunError> {
    let lifted = |kind| -> Result<LiftedField, RunError> { Ok(lift_field(x, kind, g, p)?) };
    Ok(FieldRow {
        point: *p,
        vertical: lifted(FieldLift::Vertical)?.components(),
        complete: lifted(FieldLift::Complete)?.components(),
        horizontal: lifted(FieldLift::Horizontal)?.components(),
        f_vertical: lift_function(f, FieldLift::Vertical, p)?,
        f_complete: lift_function(f, FieldLift::Complete, p)?,
        residuals: prop21_check(x, y, f, g_fn, g, p)?,
    })
}

pub fn cmd_fields(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, RunError> {
    cfg.tolerance_config()?;
    let (x, y) = match cfg.fields.as_slice() {
        [x] => {
            let x = load_field(x, FieldKind::Vector)?;
            (x.clone(), x)
        }
        [x, y] => (load_field(x, FieldKind::Vector)?, load_field(y, FieldKind::Vector)?),
        _ => return Err(RunError::Input("give one or two --field files (X, then Y)".into())),
    };
    let (f, g_fn) = match cfg.scalars.as_slice() {
        [f] => {
            let f = load_field(f, FieldKind::Scalar)?;
            (f.clone(), f)
        }
        [f, g] => (load_field(f, FieldKind::Scalar)?, load_field(g, FieldKind::Scalar)?),
        _ => return Err(RunError::Input("give one or two --scalar files (f, then g)".into())),
    };
    let g = load_connection(cfg)?;
    let points = load_points(cfg)?;
    let rows = points
        .iter()
        .map(|p| field_row(&x, &y, &f, &g_fn, &g, p))
        .collect::<Result<Vec<_>, _>>()?;
    match cfg.format {
        OutputFormat::Csv => {
            let mut cols: Vec<String> = ["x1", "x2", "x3", "y1", "y2", "y3"].map(String::from).to_vec();
            for tag in ["v", "c", "h"] {
                cols.extend((1..=6).map(|i| format!("X{tag}{i}")));
            }
            cols.extend(["fv".to_string(), "fc".to_string()]);
            cols.extend(rows[0].residuals.entries().iter().map(|(name, _)| format!("res_{name}")));
            writeln!(out, "{}", cols.join(","))?;
            for r in &rows {
                let mut v: Vec<f64> = r.point.x.iter().chain(&r.point.y).copied().collect();
                v.extend(r.vertical);
                v.extend(r.complete);
                v.extend(r.horizontal);
                v.extend([r.f_vertical, r.f_complete]);
                v.extend(r.residuals.entries().iter().map(|(_, x)| *x));
                write_csv_row(out, &v)?;
            }
        }
        OutputFormat::Json => write_json(out, &rows)?,
    }
    Ok(SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{helix345, DEGENERATE, INPUT_ERROR};

    #[test]
    fn helix_csv_has_header_and_rows() {
        let mut buf = Vec::new();
        write_frenet(&helix345(), 3, &ToleranceConfig::default(), OutputFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], FRENET_HEADER);
        for l in &lines[1..] {
            let kappa: f64 = l.split(',').nth(13).unwrap().parse().unwrap();
            assert!((kappa - 0.12).abs() < 1e-12);
        }
        assert!(text.ends_with('\n') && !text.contains('\r'));
    }

    #[test]
    fn builtin_prefix_and_missing_curve() {
        let cfg = RunConfig { curve: Some("builtin:line".into()), ..Default::default() };
        assert_eq!(cmd_frenet(&cfg, &mut Vec::new()).unwrap_err().exit_code(), DEGENERATE);
        let cfg = RunConfig { curve: Some("/nonexistent/curve.txt".into()), ..Default::default() };
        assert_eq!(cmd_frenet(&cfg, &mut Vec::new()).unwrap_err().exit_code(), INPUT_ERROR);
    }

    #[test]
    fn horizontal_needs_w0_on_curved_connection() {
        let mut g = Connection::flat();
        g.set(0, 0, 0, 1.0);
        let cfg = RunConfig { kind: Some(KindArg::Horizontal), ..Default::default() };
        let err = lift_kind(&cfg, &g).unwrap_err();
        assert!(err.to_string().contains("w0 required"));
        assert_eq!(lift_kind(&cfg, &Connection::flat()).unwrap(), LiftKind::Horizontal { w0: [0.0; 3] });
    }

    #[test]
    fn point_arity() {
        assert!(parse_point("1,2,3,0,0,0", "p").is_ok());
        assert!(parse_point("1 2 3 0 0 0", "p").is_ok());
        assert_eq!(parse_point("1,2,3,0,0", "p").unwrap_err().exit_code(), INPUT_ERROR);
        assert!(parse_point("1,2,3,0,0,x", "p").is_err());
    }
}
