//! The built-in invariant suite run by `frenet-lift verify`.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    circle, frenet_rows, helix345, line, unit_speed_helix, write_frenet, write_json, OutputFormat, RunConfig,
    RunError, SUCCESS, VERIFY_FAILED,
};
use crate::error::Error;
use crate::expr::random::{random_ast, random_composite, random_polynomial};
use crate::expr::{parse_expr, CurveSpec, FieldSpec, BASE_VARS};
use crate::fd::{default_step, fd_oracle};
use crate::frenet::{speed_check, ToleranceConfig};
use crate::jet::Jet;
use crate::lift::{lift_curve, parallel_transport, prop21_check, Connection, LiftKind, TangentPoint};
use crate::lift_frenet::{theorem_residuals, LiftReport};
use crate::vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "==")]
    Equal,
    /// Measured and reported, with no bound.
    #[serde(rename = "info")]
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: Option<f64>,
    pub relation: Relation,
    /// `None` for informational entries.
    pub pass: Option<bool>,
}

impl Check {
    fn new(name: &str, value: f64, relation: Relation, bound: f64) -> Check {
        let pass = match relation {
            Relation::AtMost => value <= bound,
            Relation::AtLeast => value >= bound,
            Relation::Equal => value == bound,
            Relation::Info => unreachable!("informational checks have no bound"),
        };
        Check { name: name.to_string(), value, bound: Some(bound), relation, pass: Some(pass) }
    }

    pub fn at_most(name: &str, value: f64, bound: f64) -> Check {
        Check::new(name, value, Relation::AtMost, bound)
    }

    pub fn at_least(name: &str, value: f64, bound: f64) -> Check {
        Check::new(name, value, Relation::AtLeast, bound)
    }

    pub fn equal(name: &str, value: f64, bound: f64) -> Check {
        Check::new(name, value, Relation::Equal, bound)
    }

    pub fn info(name: &str, value: f64) -> Check {
        Check { name: name.to_string(), value, bound: None, relation: Relation::Info, pass: None }
    }

    fn errored(name: &str) -> Check {
        Check { name: name.to_string(), value: f64::NAN, bound: None, relation: Relation::AtMost, pass: Some(false) }
    }

    pub fn failed(&self) -> bool {
        self.pass == Some(false)
    }

    pub fn line(&self) -> String {
        let (op, status) = match (self.relation, self.pass) {
            (Relation::AtMost, _) => ("<=", ""),
            (Relation::AtLeast, _) => (">=", ""),
            (Relation::Equal, _) => ("==", ""),
            (Relation::Info, _) => ("", "INFO"),
        };
        let status = match self.pass {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => status,
        };
        let bound = match self.bound {
            Some(b) => format!("{op}{b:e}"),
            None => "-".to_string(),
        };
        format!("{:<34} {:>11.3e} {:>10} {}", self.name, self.value, bound, status)
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

/// Runs `group`; a computation error becomes one failing entry named
/// after the group, with the message on standard error.
fn guarded(name: &str, group: impl FnOnce() -> Result<Vec<Check>, Error>) -> Vec<Check> {
    group().unwrap_or_else(|e| {
        eprintln!("frenet-lift: verify {name}: {e}");
        vec![Check::errored(name)]
    })
}

/// Curvature and torsion from finite differences of the component
/// expressions, independent of the jet path.
fn fd_apparatus(curve: &CurveSpec, t: f64) -> (f64, f64) {
    let d = |k: usize| -> [f64; 3] {
        std::array::from_fn(|i| {
            let e = &curve.components[i];
            fd_oracle(&|u| e.eval_real(&[("t", u)]), t, k, default_step(k))
        })
    };
    let (d1, d2, d3) = (d(1), d(2), d(3));
    let c = vector::cross(&d1, &d2);
    let cn = vector::norm(&c);
    (cn / vector::norm(&d1).powi(3), vector::dot(&c, &d3) / (cn * cn))
}

fn frenet_checks(tol: &ToleranceConfig, n: usize, ortho: &mut f64, skew: &mut f64) -> Result<Vec<Check>, Error> {
    let mut checks = Vec::new();
    let helix = helix345();
    let grid = helix.grid(n);
    let rows = frenet_rows(&helix, &grid, tol).map_err(|e| Error::Config(e.to_string()))?;
    checks.push(Check::at_most("helix345_kappa", max_of(rows.iter().map(|r| (r.kappa - 0.12).abs())), 1e-10));
    checks.push(Check::at_most("helix345_tau", max_of(rows.iter().map(|r| (r.tau - 0.16).abs())), 1e-10));
    let fd_gap = max_of(rows.par_iter().map(|r| {
        let (k, t) = fd_apparatus(&helix, r.t);
        (k - r.kappa).abs().max((t - r.tau).abs())
    }).collect::<Vec<_>>());
    checks.push(Check::at_most("helix345_fd_crosscheck", fd_gap, 1e-6));

    for curve in [helix, unit_speed_helix(), circle()] {
        let rows = frenet_rows(&curve, &curve.grid(n), tol).map_err(|e| Error::Config(e.to_string()))?;
        let res = max_of(rows.iter().flat_map(|r| r.residuals));
        checks.push(Check::at_most(&format!("frenet_residual_{}", curve.name), res, tol.residual_tol));
        *ortho = rows.iter().map(|r| r.orthonormality_defect()).fold(*ortho, f64::max);
        *skew = rows.iter().map(|r| r.skew_defect()).fold(*skew, f64::max);
    }
    let unit = unit_speed_helix();
    let speed = speed_check(&unit, &unit.grid(n), tol)?;
    checks.push(Check::at_most("unit_helix_speed", speed.max_deviation, tol.unit_speed_tol));
    Ok(checks)
}

fn lift_report(curve: &CurveSpec, kind: LiftKind, n: usize, tol: &ToleranceConfig) -> Result<LiftReport, Error> {
    theorem_residuals(&lift_curve(curve, kind, &Connection::flat())?, &curve.grid(n), tol)
}

fn apparatus_gap(r: &LiftReport, kappa: f64, tau: f64) -> f64 {
    max_of(
        r.kappa_lift
            .iter()
            .zip(&r.tau_lift)
            .map(|(k, t)| (k - kappa).abs().max((t - tau).abs())),
    )
}

fn lift_checks(tol: &ToleranceConfig, n: usize, ortho: &mut f64, skew: &mut f64) -> Result<Vec<Check>, Error> {
    let mut checks = Vec::new();
    let unit = unit_speed_helix();
    let v1 = lift_report(&unit, LiftKind::Vertical { anchor: None }, n, tol)?;
    let v2 = lift_report(&unit, LiftKind::Vertical { anchor: Some([-7.0, 2.0, 11.5]) }, n, tol)?;
    checks.push(Check::at_most("vertical_lift_residual", v1.max_residual.max(v2.max_residual), tol.residual_tol));
    checks.push(Check::at_most("vertical_lift_apparatus", apparatus_gap(&v1, 0.12, 0.16), 1e-10));
    let anchor_gap = max_of(
        v1.kappa_lift
            .iter()
            .zip(&v2.kappa_lift)
            .chain(v1.tau_lift.iter().zip(&v2.tau_lift))
            .map(|(a, b)| (a - b).abs()),
    );
    checks.push(Check::at_most("vertical_lift_anchor_independence", anchor_gap, 1e-12));
    checks.push(Check::at_most(
        "vertical_lift_oracle",
        v1.max_discrepancy.max(v1.max_tau_discrepancy),
        1e-9,
    ));

    let helix = helix345();
    let mut h_res: f64 = 0.0;
    let mut h_gap: f64 = 0.0;
    let mut h_oracle: f64 = 0.0;
    for w0 in [[1.0, 0.0, 0.0], [-2.0, 0.5, 3.0]] {
        let h = lift_report(&helix, LiftKind::Horizontal { w0 }, n, tol)?;
        h_res = h_res.max(h.max_residual);
        h_gap = h_gap.max(apparatus_gap(&h, 0.12, 0.16));
        h_oracle = h_oracle.max(h.max_discrepancy.max(h.max_tau_discrepancy));
        *ortho = ortho.max(h.frame_ortho_max);
        *skew = skew.max(h.skew_max);
    }
    checks.push(Check::at_most("horizontal_flat_residual", h_res, tol.residual_tol));
    checks.push(Check::at_most("horizontal_flat_apparatus", h_gap, 1e-10));
    checks.push(Check::at_most("horizontal_flat_oracle", h_oracle, 1e-9));
    *ortho = ortho.max(v1.frame_ortho_max).max(v2.frame_ortho_max);
    *skew = skew.max(v1.skew_max).max(v2.skew_max);

    let c = lift_report(&unit, LiftKind::Complete, n, tol)?;
    let chi1 = 5.0 * 234f64.sqrt() / 634.0;
    let chi2 = 100.0 / 634.0;
    checks.push(Check::at_most("complete_oracle_chi1", max_of(c.oracle_kappa.iter().map(|k| (k - chi1).abs())), 1e-9));
    checks.push(Check::at_most("complete_oracle_chi2", max_of(c.oracle_tau.iter().map(|t| (t - chi2).abs())), 1e-9));
    let tangent_norm = max_of(c.frames.iter().map(|f| (vector::dot(&f[0], &f[0]) - (1.0 + 0.12 * 0.12)).abs()));
    checks.push(Check::at_most("complete_tangent_norm", tangent_norm, 1e-12));
    checks.push(Check::info("complete_frenet_residual", c.max_residual));
    checks.push(Check::info("complete_frame_ortho", c.frame_ortho_max));
    checks.push(Check::info("complete_kappa_vs_oracle", c.max_discrepancy));
    checks.push(Check::info("complete_tau_vs_oracle", c.max_tau_discrepancy));
    Ok(checks)
}

/// A connection with every Christoffel symbol nonzero.
pub(crate) fn test_connection(seed: u64) -> Connection {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Connection::flat();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                g.set(a, b, c, rng.gen_range(-1.0..1.0));
            }
        }
    }
    g
}

fn random_vector_field(rng: &mut ChaCha8Rng) -> FieldSpec {
    FieldSpec::vector(std::array::from_fn(|_| random_polynomial(rng, &BASE_VARS)))
}

fn identity_max(g: &Connection, seed: u64, quadruples: usize, points: usize) -> Result<f64, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..quadruples {
        let x = random_vector_field(&mut rng);
        let y = random_vector_field(&mut rng);
        let f = FieldSpec::scalar(random_polynomial(&mut rng, &BASE_VARS));
        let h = FieldSpec::scalar(random_polynomial(&mut rng, &BASE_VARS));
        let pts: Vec<[f64; 6]> = (0..points).map(|_| std::array::from_fn(|_| rng.gen_range(-2.0..2.0))).collect();
        let results: Vec<Result<f64, Error>> = pts
            .par_iter()
            .map(|c| Ok(prop21_check(&x, &y, &f, &h, g, &TangentPoint::from_slice(c)?)?.max()))
            .collect();
        for r in results {
            worst = worst.max(r?);
        }
    }
    Ok(worst)
}

fn identity_checks() -> Result<Vec<Check>, Error> {
    Ok(vec![
        Check::at_most("lift_identities_flat", identity_max(&Connection::flat(), 21, 20, 100)?, 1e-10),
        Check::at_most("lift_identities_nonflat", identity_max(&test_connection(5), 22, 20, 100)?, 1e-10),
    ])
}

fn transport_checks() -> Result<Vec<Check>, Error> {
    let helix = helix345();
    let w0 = [0.3, -1.7, 2.2];
    let flat = parallel_transport(&Connection::flat(), &helix, w0, helix.t_max, 1)?;
    let flat_gap = max_of((0..3).map(|i| (flat[i] - w0[i]).abs()));

    let line = CurveSpec::new("x-axis", ["t", "0", "0"], 0.0, 1.0)?;
    let mut g = Connection::flat();
    g.set(0, 0, 0, 1.0);
    let exact = (-1.0f64).exp();
    let err = |steps| -> Result<f64, Error> {
        Ok((parallel_transport(&g, &line, [1.0, 0.0, 0.0], 1.0, steps)?[0] - exact).abs())
    };
    let (e100, e200) = (err(100)?, err(200)?);
    Ok(vec![
        Check::equal("transport_flat_identity", flat_gap, 0.0),
        Check::at_most("transport_line_exp", e100, 1e-9),
        Check::at_least("transport_convergence_ratio", e100 / e200, 12.0),
    ])
}

/// Nesting depth of the random composites in the autodiff check.
pub const COMPOSITE_DEPTH: usize = 3;

/// Largest relative gap `|jet - fd| / max(|fd|, 1)` over derivative orders
/// 1 to 3 of random composite expressions.
pub(crate) fn autodiff_gap(seed: u64, count: usize) -> Result<f64, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<_> = (0..count).map(|_| (random_composite(&mut rng, COMPOSITE_DEPTH), rng.gen_range(-2.0..2.0))).collect();
    let gaps: Vec<Result<f64, Error>> = cases
        .par_iter()
        .map(|(e, t0)| {
            let jet = e.eval_jet(&[("t", Jet::var(*t0, 3))])?;
            let mut worst: f64 = 0.0;
            for k in 1..=3 {
                let a = jet.derivative(k)?;
                let b = fd_oracle(&|u| e.eval_real(&[("t", u)]), *t0, k, default_step(k));
                worst = worst.max((a - b).abs() / b.abs().max(1.0));
            }
            Ok(worst)
        })
        .collect();
    gaps.into_iter().try_fold(0.0, |m: f64, g| Ok(m.max(g?)))
}

/// Number of random trees whose printed form does not parse back to the
/// same tree.
pub(crate) fn roundtrip_failures(seed: u64, count: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .filter(|_| {
            let ast = random_ast(&mut rng, &["t", "x1"], 6);
            parse_expr(&ast.to_string(), &["t", "x1"]).map_or(true, |back| back != ast)
        })
        .count()
}

fn cli_checks(tol: &ToleranceConfig) -> Vec<Check> {
    let code = match write_frenet(&line(), 10, tol, OutputFormat::Csv, &mut io::sink()) {
        Ok(()) => SUCCESS,
        Err(e) => e.exit_code(),
    };
    let golden = |out: &mut Vec<u8>| write_frenet(&helix345(), 1000, tol, OutputFormat::Csv, out);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    let differing = match (golden(&mut a), golden(&mut b)) {
        (Ok(()), Ok(())) => a.iter().zip(&b).filter(|(x, y)| x != y).count() + a.len().abs_diff(b.len()),
        _ => usize::MAX,
    };
    vec![
        Check::equal("degenerate_line_exit_code", code as f64, 3.0),
        Check::equal("golden_csv_differing_bytes", differing as f64, 0.0),
    ]
}

/// Every check of the suite, in a fixed order.
pub fn run_checks(tol: &ToleranceConfig, n: usize) -> Vec<Check> {
    let mut checks = Vec::new();
    let (mut ortho, mut skew) = (0.0, 0.0);
    checks.extend(guarded("frenet", || frenet_checks(tol, n, &mut ortho, &mut skew)));
    checks.extend(guarded("lift", || lift_checks(tol, n, &mut ortho, &mut skew)));
    checks.push(Check::at_most("frame_orthonormality", ortho, tol.ortho_tol));
    checks.push(Check::at_most("derivative_matrix_skew", skew, tol.residual_tol));
    checks.extend(guarded("lift_identities", identity_checks));
    checks.extend(guarded("transport", transport_checks));
    checks.extend(guarded("autodiff", || Ok(vec![Check::at_most("autodiff_fd", autodiff_gap(8, 1000)?, 1e-6)])));
    checks.push(Check::at_most("parser_roundtrip_failures", roundtrip_failures(10, 500) as f64, 0.0));
    checks.extend(cli_checks(tol));
    checks
}

pub fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, RunError> {
    let tol = cfg.tolerance_config()?;
    let n = cfg.checked_samples()?;
    let checks = run_checks(&tol, n);
    let failed = checks.iter().filter(|c| c.failed()).count();
    match cfg.format {
        OutputFormat::Csv => {
            for c in &checks {
                writeln!(out, "{}", c.line())?;
            }
            let passed = checks.iter().filter(|c| c.pass == Some(true)).count();
            writeln!(out, "# {passed} passed, {failed} failed")?;
        }
        OutputFormat::Json => write_json(out, &checks)?,
    }
    Ok(if failed == 0 { SUCCESS } else { VERIFY_FAILED })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_lines() {
        assert!(Check::at_most("a", 1e-12, 1e-9).line().ends_with("PASS"));
        assert!(Check::at_least("b", 3.0, 12.0).line().ends_with("FAIL"));
        assert!(Check::info("c", 0.5).line().ends_with("INFO"));
        assert!(Check::at_most("nan", f64::NAN, 1.0).failed());
    }

    #[test]
    fn autodiff_and_roundtrip_small() {
        assert!(autodiff_gap(1, 50).unwrap() <= 1e-6);
        assert_eq!(roundtrip_failures(2, 50), 0);
    }
}
