//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line with the
//! measured quantities before asserting; run with `--nocapture` to see
//! them all.

use std::path::PathBuf;
use std::process::Command;

use frenet_lift::expr::random::{random_ast, random_composite, random_polynomial};
use frenet_lift::expr::{parse_expr, CurveSpec, FieldSpec, BASE_VARS};
use frenet_lift::fd::{default_step, fd_oracle};
use frenet_lift::frenet::{frenet_apparatus, FrenetData, ToleranceConfig};
use frenet_lift::jet::Jet;
use frenet_lift::lift::{lift_curve, parallel_transport, prop21_check, Connection, LiftKind, TangentPoint};
use frenet_lift::lift_frenet::{theorem_residuals, LiftReport};
use frenet_lift::vector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: usize = 1000;

fn report(id: u32, name: &str, pass: bool, details: &str) {
    println!("criterion {id:>2} {name:<28} {} {details}", if pass { "PASS" } else { "FAIL" });
}

fn helix345() -> CurveSpec {
    CurveSpec::new("helix345", ["3*cos(t)", "3*sin(t)", "4*t"], 0.0, std::f64::consts::TAU).unwrap()
}

fn unit_helix() -> CurveSpec {
    CurveSpec::new("unit_helix", ["3*cos(t/5)", "3*sin(t/5)", "4*t/5"], 0.0, 10.0 * std::f64::consts::PI).unwrap()
}

fn circle() -> CurveSpec {
    CurveSpec::new("circle2", ["2*cos(t)", "2*sin(t)", "0"], 0.0, std::f64::consts::TAU).unwrap()
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_frenet-lift"))
}

fn frenet_grid(curve: &CurveSpec) -> Vec<FrenetData> {
    let cfg = ToleranceConfig::default();
    curve.grid(N).iter().map(|&t| frenet_apparatus(curve, t, &cfg).unwrap()).collect()
}

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, f64::max)
}

/// κ and τ from finite differences of the component expressions.
fn fd_kappa_tau(curve: &CurveSpec, t: f64) -> (f64, f64) {
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

#[test]
fn criterion_01_helix_apparatus() {
    // κ = a/(a²+b²), τ = b/(a²+b²) for (a cos t, a sin t, b t)
    let (a, b) = (3.0, 4.0);
    let (kappa, tau) = (a / (a * a + b * b), b / (a * a + b * b));
    let curve = helix345();
    let rows = frenet_grid(&curve);
    let k_err = max_of(rows.iter().map(|r| (r.kappa - kappa).abs()));
    let t_err = max_of(rows.iter().map(|r| (r.tau - tau).abs()));
    let fd_err = max_of(rows.iter().map(|r| {
        let (k, t) = fd_kappa_tau(&curve, r.t);
        (k - r.kappa).abs().max((t - r.tau).abs())
    }));
    let pass = k_err <= 1e-10 && t_err <= 1e-10 && fd_err <= 1e-6;
    report(1, "helix apparatus", pass, &format!("kappa_err={k_err:.2e} tau_err={t_err:.2e} fd_err={fd_err:.2e}"));
    assert!(pass);
}

#[test]
fn criterion_02_frenet_identity() {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for curve in [helix345(), unit_helix(), circle()] {
        let m = max_of(frenet_grid(&curve).iter().flat_map(|r| r.residuals));
        parts.push(format!("{}={m:.2e}", curve.name));
        worst = worst.max(m);
    }
    let pass = worst <= 1e-9;
    report(2, "frenet identity", pass, &parts.join(" "));
    assert!(pass);
}

fn lifted(curve: &CurveSpec, kind: LiftKind) -> LiftReport {
    let lc = lift_curve(curve, kind, &Connection::flat()).unwrap();
    theorem_residuals(&lc, &curve.grid(N), &ToleranceConfig::default()).unwrap()
}

fn apparatus_gap(r: &LiftReport, base: &[FrenetData]) -> f64 {
    max_of(
        (0..base.len()).map(|i| (r.kappa_lift[i] - base[i].kappa).abs().max((r.tau_lift[i] - base[i].tau).abs())),
    )
}

#[test]
fn criterion_03_vertical_lift() {
    let curve = unit_helix();
    let base = frenet_grid(&curve);
    let a = lifted(&curve, LiftKind::Vertical { anchor: None });
    let b = lifted(&curve, LiftKind::Vertical { anchor: Some([5.0, -3.0, 0.25]) });
    let residual = a.max_residual.max(b.max_residual);
    let gap = apparatus_gap(&a, &base);
    let anchors = max_of(
        (0..N).map(|i| (a.kappa_lift[i] - b.kappa_lift[i]).abs().max((a.tau_lift[i] - b.tau_lift[i]).abs())),
    );
    let pass = residual <= 1e-9 && gap <= 1e-10 && anchors <= 1e-12;
    report(
        3,
        "vertical lift",
        pass,
        &format!("max_residual={residual:.2e} apparatus_gap={gap:.2e} anchor_gap={anchors:.2e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_04_horizontal_flat_lift() {
    let curve = helix345();
    let base = frenet_grid(&curve);
    let mut residual: f64 = 0.0;
    let mut gap: f64 = 0.0;
    for w0 in [[1.0, 0.0, 0.0], [-0.5, 2.0, 7.0]] {
        let r = lifted(&curve, LiftKind::Horizontal { w0 });
        residual = residual.max(r.max_residual);
        gap = gap.max(apparatus_gap(&r, &base));
    }
    let pass = residual <= 1e-9 && gap <= 1e-10;
    report(4, "horizontal lift, flat", pass, &format!("max_residual={residual:.2e} apparatus_gap={gap:.2e}"));
    assert!(pass);
}

#[test]
fn criterion_05_complete_lift_oracle() {
    // (3cos(t/5), 3sin(t/5), 4t/5, -(3/5)sin(t/5), (3/5)cos(t/5), 4/5) is a
    // circular helix in R⁶: radius R = √(9 + 9/25), rate ω = 1/5 and
    // constant drift c = 4/5 along (0,0,1,0,0,0).
    let (r, w, c) = ((9.0f64 + 9.0 / 25.0).sqrt(), 0.2, 0.8);
    let denom = r * r * w * w + c * c;
    let (chi1, chi2) = (r * w * w / denom, c * w / denom);
    assert!((chi1 - 5.0 * 234f64.sqrt() / 634.0).abs() < 1e-15 && (chi2 - 100.0 / 634.0).abs() < 1e-15);

    let curve = unit_helix();
    let rep = lifted(&curve, LiftKind::Complete);
    let e1 = max_of(rep.oracle_kappa.iter().map(|k| (k - chi1).abs()));
    let e2 = max_of(rep.oracle_tau.iter().map(|t| (t - chi2).abs()));
    let kappa = 0.12;
    let norm = max_of(rep.frames.iter().map(|f| (vector::dot(&f[0], &f[0]) - (1.0 + kappa * kappa)).abs()));
    let pass = e1 <= 1e-9 && e2 <= 1e-9 && norm <= 1e-12;
    report(
        5,
        "complete lift oracle",
        pass,
        &format!(
            "chi1_err={e1:.2e} chi2_err={e2:.2e} tangent_norm_err={norm:.2e} measured_frenet_residual={:.3e}",
            rep.max_residual
        ),
    );
    assert!(pass);
}

fn random_connection(rng: &mut ChaCha8Rng) -> Connection {
    let mut g = Connection::flat();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                g.set(a, b, c, rng.gen_range(-1.5..1.5));
            }
        }
    }
    g
}

#[test]
fn criterion_06_lift_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let field = |rng: &mut ChaCha8Rng| FieldSpec::vector(std::array::from_fn(|_| random_polynomial(rng, &BASE_VARS)));
    let mut worst = [0.0f64; 2];
    let curved = random_connection(&mut rng);
    for (slot, g) in [Connection::flat(), curved].iter().enumerate() {
        for _ in 0..20 {
            let (x, y) = (field(&mut rng), field(&mut rng));
            let f = FieldSpec::scalar(random_polynomial(&mut rng, &BASE_VARS));
            let h = FieldSpec::scalar(random_polynomial(&mut rng, &BASE_VARS));
            for _ in 0..100 {
                let c: Vec<f64> = (0..6).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let p = TangentPoint::from_slice(&c).unwrap();
                worst[slot] = worst[slot].max(prop21_check(&x, &y, &f, &h, g, &p).unwrap().max());
            }
        }
    }
    let pass = worst[0] <= 1e-10 && worst[1] <= 1e-10;
    report(6, "lift identities", pass, &format!("flat={:.2e} nonflat={:.2e}", worst[0], worst[1]));
    assert!(pass);
}

#[test]
fn criterion_07_parallel_transport() {
    let helix = helix345();
    let w0 = [0.7, -1.1, 3.0];
    let flat_exact = [0.5, 3.0, helix.t_max].iter().all(|&t| {
        parallel_transport(&Connection::flat(), &helix, w0, t, 17).unwrap() == w0
    });
    let line = CurveSpec::new("x1-axis", ["t", "0", "0"], 0.0, 1.0).unwrap();
    let mut g = Connection::flat();
    g.set(0, 0, 0, 1.0);
    let exact = (-1.0f64).exp();
    let err = |steps| (parallel_transport(&g, &line, [1.0, 0.0, 0.0], 1.0, steps).unwrap()[0] - exact).abs();
    let (e100, e200) = (err(100), err(200));
    let ratio = e100 / e200;
    let pass = flat_exact && e100 <= 1e-9 && ratio >= 12.0;
    report(
        7,
        "parallel transport",
        pass,
        &format!("flat_identity={flat_exact} err100={e100:.2e} ratio={ratio:.2}"),
    );
    assert!(pass);
}

#[test]
fn criterion_08_autodiff() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let e = random_composite(&mut rng, 3);
        let t0 = rng.gen_range(-2.0..2.0);
        let jet = e.eval_jet(&[("t", Jet::var(t0, 3))]).unwrap();
        for k in 1..=3 {
            let a = jet.derivative(k).unwrap();
            let b = fd_oracle(&|u| e.eval_real(&[("t", u)]), t0, k, default_step(k));
            worst = worst.max((a - b).abs() / b.abs().max(1.0));
        }
    }
    let pass = worst <= 1e-6;
    report(8, "autodiff vs finite diff", pass, &format!("max_rel_err={worst:.2e}"));
    assert!(pass);
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn criterion_09_frame_structure() {
    let mut ortho: f64 = 0.0;
    let mut skew: f64 = 0.0;
    for name in ["helix345.curve", "unit_helix.curve", "circle2.curve"] {
        let out = bin().args(["frenet", "--curve"]).arg(data(name)).output().unwrap();
        assert!(out.status.success());
        let (header, rows) = parse_csv(std::str::from_utf8(&out.stdout).unwrap());
        let col = |n: &str| header.iter().position(|h| h == n).unwrap();
        let (t1, n1, b1) = (col("T1"), col("N1"), col("B1"));
        for r in &rows {
            let frame: Vec<Vec<f64>> = [t1, n1, b1].iter().map(|&c| r[c..c + 3].to_vec()).collect();
            ortho = ortho.max(vector::orthonormality_defect(&frame));
        }
    }
    for curve in [helix345(), unit_helix(), circle()] {
        skew = skew.max(max_of(frenet_grid(&curve).iter().map(FrenetData::skew_defect)));
    }
    for kind in [LiftKind::Vertical { anchor: None }, LiftKind::Horizontal { w0: [1.0, 2.0, 3.0] }] {
        let r = lifted(&helix345(), kind);
        ortho = ortho.max(r.frame_ortho_max);
        skew = skew.max(r.skew_max);
    }
    let code = bin().args(["frenet", "--curve"]).arg(data("line.curve")).output().unwrap().status.code();
    let pass = ortho <= 1e-12 && skew <= 1e-9 && code == Some(3);
    report(9, "frame structure", pass, &format!("ortho={ortho:.2e} skew={skew:.2e} line_exit={code:?}"));
    assert!(pass);
}

#[test]
fn criterion_10_parser_and_golden_csv() {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let vars = ["t", "x1", "y2"];
    let failures = (0..500)
        .filter(|_| {
            let ast = random_ast(&mut rng, &vars, 7);
            parse_expr(&ast.to_string(), &vars).map_or(true, |back| back != ast)
        })
        .count();
    let run = || bin().args(["frenet", "--curve"]).arg(data("helix345.curve")).output().unwrap();
    let (a, b) = (run(), run());
    let identical = a.status.success() && b.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
    let pass = failures == 0 && identical;
    report(
        10,
        "parser and golden csv",
        pass,
        &format!("roundtrip_failures={failures} csv_bytes={} identical={identical}", a.stdout.len()),
    );
    assert!(pass);
}
