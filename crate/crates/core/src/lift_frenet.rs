//! Frenet frames carried along lifted curves in TR³ = R⁶.
//!
//! For a base frame vector `V(t)` the lifted frame vector is
//!
//! ```text
//! vertical    (0, V)
//! complete    (V, dV/dt)
//! horizontal  (V, -Γ(w, V))    w = transported fiber vector
//! ```
//!
//! Lifted curvature and torsion are `|dT/ds|` and `-N·dB/ds` with `s` the
//! arc length of the lifted curve under the Euclidean product on R⁶.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::frenet::{
    arc_derivatives, curve_point_jets, derivative_matrix, frame_jets, frenet_formula_residuals, generalized_frenet,
    skew_defect, FrameJets, ToleranceConfig, SPEED_FLOOR,
};
use crate::jet::DEFAULT_ORDER;
use crate::lift::{transport_along_grid, LiftKind, LiftedCurve};
use crate::vector::{self, JetVec};

/// Jet order of the base expansion used for lifted frames. The complete
/// lift and the frame construction each consume derivatives.
pub const LIFT_ORDER: usize = DEFAULT_ORDER + 2;

/// Lifted point and frame at one parameter value, as jets in `t`.
#[derive(Debug, Clone)]
pub struct LiftedFrame {
    pub point: JetVec,
    pub tangent: JetVec,
    pub normal: JetVec,
    pub binormal: JetVec,
    pub base: FrameJets,
}

impl LiftedFrame {
    pub fn vectors(&self) -> [&JetVec; 3] {
        [&self.tangent, &self.normal, &self.binormal]
    }
}

fn lift_vector(curve: &LiftedCurve, v: &JetVec, fiber: &JetVec) -> JetVec {
    match curve.kind {
        LiftKind::Vertical { .. } => JetVec::zeros(3, v.order()).concat(v),
        LiftKind::Complete => v.concat(&v.differentiate()),
        LiftKind::Horizontal { .. } => v.concat(&curve.connection.contract_jets(fiber, v).scale_real(-1.0)),
    }
}

/// Lifted frame at `t`. For horizontal lifts `fiber` is the transported
/// vector at `t`; `None` transports it from `t_min`.
pub fn lifted_frame_with_fiber(
    curve: &LiftedCurve,
    t: f64,
    fiber: Option<[f64; 3]>,
    cfg: &ToleranceConfig,
) -> Result<LiftedFrame, Error> {
    let base_point = curve_point_jets(&curve.base, t, LIFT_ORDER)?;
    let base = frame_jets(&base_point, t, cfg)?;
    let fiber = match (curve.kind, fiber) {
        (LiftKind::Horizontal { .. }, None) => Some(curve.transported_fiber(t)?),
        _ => fiber,
    };
    let point = curve.point_jets_with_fiber(t, LIFT_ORDER, fiber)?;
    let (_, w) = point.split_at(3);
    let [tangent, normal, binormal] = base.vectors().map(|v| lift_vector(curve, v, &w));
    Ok(LiftedFrame { point, tangent, normal, binormal, base })
}

pub fn lifted_frame(curve: &LiftedCurve, t: f64, cfg: &ToleranceConfig) -> Result<LiftedFrame, Error> {
    lifted_frame_with_fiber(curve, t, None, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiftedApparatus {
    pub t: f64,
    pub point: [f64; 6],
    /// Rows `T`, `N`, `B`.
    pub frame: [[f64; 6]; 3],
    /// Speed of the lifted curve.
    pub speed: f64,
    pub kappa: f64,
    pub tau: f64,
    /// Norms of `T' - κN`, `N' + κT - τB`, `B' + τN`, primes in lifted arc length.
    pub residuals: [f64; 3],
    /// `max |E_i·E_j - δ_ij|` in R⁶.
    pub ortho_defect: f64,
    pub derivative_matrix: [[f64; 3]; 3],
}

fn arr6(v: &[f64]) -> [f64; 6] {
    std::array::from_fn(|i| v[i])
}

impl LiftedApparatus {
    pub fn skew_defect(&self) -> f64 {
        let a: Vec<Vec<f64>> = self.derivative_matrix.iter().map(|r| r.to_vec()).collect();
        skew_defect(&a)
    }
}

pub fn apparatus_of(frame: &LiftedFrame, t: f64) -> Result<LiftedApparatus, Error> {
    let speed = vector::norm(&frame.point.differentiate().value());
    if speed < SPEED_FLOOR {
        return Err(Error::ZeroSpeed { t });
    }
    let vectors = frame.vectors();
    let values: Vec<Vec<f64>> = vectors.iter().map(|v| v.value()).collect();
    let derivs = arc_derivatives(&vectors, speed);
    let kappa = vector::norm(&derivs[0]);
    let tau = -vector::dot(&values[1], &derivs[2]);
    let a = derivative_matrix(&values, &derivs);
    Ok(LiftedApparatus {
        t,
        point: arr6(&frame.point.value()),
        frame: [arr6(&values[0]), arr6(&values[1]), arr6(&values[2])],
        speed,
        kappa,
        tau,
        residuals: frenet_formula_residuals(&values, &derivs, kappa, tau),
        ortho_defect: vector::orthonormality_defect(&values),
        derivative_matrix: std::array::from_fn(|i| std::array::from_fn(|j| a[i][j])),
    })
}

pub fn lifted_apparatus(curve: &LiftedCurve, t: f64, cfg: &ToleranceConfig) -> Result<LiftedApparatus, Error> {
    apparatus_of(&lifted_frame(curve, t, cfg)?, t)
}

/// `(χ₁, χ₂)` of the lifted curve from the Gram–Schmidt frame of its
/// derivatives. `χ₂` is nonnegative in R⁶; a curve confined to a plane
/// reports `χ₂ = 0`.
pub fn oracle_apparatus(point: &JetVec, cfg: &ToleranceConfig) -> Result<(f64, f64), Error> {
    match generalized_frenet(point, 3, cfg) {
        Ok(g) => Ok((g.curvatures[0], g.curvatures[1])),
        Err(Error::RankDeficient { index: 2 }) => Ok((generalized_frenet(point, 2, cfg)?.curvatures[0], 0.0)),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiftReport {
    pub curve: String,
    pub kind: &'static str,
    pub grid: Vec<f64>,
    pub points: Vec<[f64; 6]>,
    pub frames: Vec<[[f64; 6]; 3]>,
    pub kappa_lift: Vec<f64>,
    pub tau_lift: Vec<f64>,
    pub theorem_residuals: Vec<[f64; 3]>,
    pub oracle_kappa: Vec<f64>,
    pub oracle_tau: Vec<f64>,
    pub frame_ortho_max: f64,
    /// Largest entry of `|A + Aᵀ|` over the lifted derivative matrices.
    pub skew_max: f64,
    pub max_residual: f64,
    /// `max |kappa_lift - oracle_kappa|`.
    pub max_discrepancy: f64,
    /// `max ||tau_lift| - oracle_tau|`.
    pub max_tau_discrepancy: f64,
    /// `max - min` of `kappa_lift` over the grid.
    pub kappa_variation: f64,
}

struct Sample {
    app: LiftedApparatus,
    oracle: (f64, f64),
}

fn sample(curve: &LiftedCurve, t: f64, fiber: Option<[f64; 3]>, cfg: &ToleranceConfig) -> Result<Sample, Error> {
    let frame = lifted_frame_with_fiber(curve, t, fiber, cfg)?;
    let app = apparatus_of(&frame, t)?;
    let oracle = oracle_apparatus(&frame.point, cfg)?;
    Ok(Sample { app, oracle })
}

/// Lifted apparatus, Frenet-formula residuals and oracle values over `grid`.
/// Horizontal lifts transport the fiber once along the whole grid.
pub fn theorem_residuals(curve: &LiftedCurve, grid: &[f64], cfg: &ToleranceConfig) -> Result<LiftReport, Error> {
    if let Some(&t) = grid.iter().find(|&&t| !curve.base.contains(t)) {
        return Err(Error::OutsideDomain { t, t_min: curve.base.t_min, t_max: curve.base.t_max });
    }
    let fibers: Vec<Option<[f64; 3]>> = match curve.kind {
        LiftKind::Horizontal { w0 } => transport_along_grid(&curve.connection, &curve.base, w0, grid)?
            .into_iter()
            .map(Some)
            .collect(),
        _ => vec![None; grid.len()],
    };
    let results: Vec<Result<Sample, Error>> = grid
        .par_iter()
        .zip(fibers.par_iter())
        .map(|(&t, &fiber)| sample(curve, t, fiber, cfg))
        .collect();
    let samples = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let n = samples.len();
    let mut report = LiftReport {
        curve: curve.base.name.clone(),
        kind: curve.kind.tag(),
        grid: grid.to_vec(),
        points: Vec::with_capacity(n),
        frames: Vec::with_capacity(n),
        kappa_lift: Vec::with_capacity(n),
        tau_lift: Vec::with_capacity(n),
        theorem_residuals: Vec::with_capacity(n),
        oracle_kappa: Vec::with_capacity(n),
        oracle_tau: Vec::with_capacity(n),
        frame_ortho_max: 0.0,
        skew_max: 0.0,
        max_residual: 0.0,
        max_discrepancy: 0.0,
        max_tau_discrepancy: 0.0,
        kappa_variation: 0.0,
    };
    let (mut kmin, mut kmax) = (f64::INFINITY, f64::NEG_INFINITY);
    for Sample { app, oracle } in samples {
        report.frame_ortho_max = report.frame_ortho_max.max(app.ortho_defect);
        report.skew_max = report.skew_max.max(app.skew_defect());
        report.max_residual = app.residuals.iter().fold(report.max_residual, |m, &r| m.max(r));
        report.max_discrepancy = report.max_discrepancy.max((app.kappa - oracle.0).abs());
        report.max_tau_discrepancy = report.max_tau_discrepancy.max((app.tau.abs() - oracle.1).abs());
        kmin = kmin.min(app.kappa);
        kmax = kmax.max(app.kappa);
        report.points.push(app.point);
        report.frames.push(app.frame);
        report.kappa_lift.push(app.kappa);
        report.tau_lift.push(app.tau);
        report.theorem_residuals.push(app.residuals);
        report.oracle_kappa.push(oracle.0);
        report.oracle_tau.push(oracle.1);
    }
    if n > 0 {
        report.kappa_variation = kmax - kmin;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::CurveSpec;
    use crate::lift::{lift_curve, Connection};

    fn helix345() -> CurveSpec {
        CurveSpec::new("helix345", ["3*cos(t)", "3*sin(t)", "4*t"], 0.0, 6.283185307).unwrap()
    }

    fn unit_helix() -> CurveSpec {
        CurveSpec::new("unit", ["3*cos(t/5)", "3*sin(t/5)", "4*t/5"], 0.0, 31.4159).unwrap()
    }

    fn lifted(curve: CurveSpec, kind: LiftKind) -> LiftedCurve {
        lift_curve(&curve, kind, &Connection::flat()).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn vertical_frame_at_zero() {
        let c = lifted(helix345(), LiftKind::Vertical { anchor: None });
        let f = lifted_frame(&c, 0.0, &ToleranceConfig::default()).unwrap();
        close(&f.tangent.value(), &[0.0, 0.0, 0.0, 0.0, 0.6, 0.8], 1e-15);
    }

    #[test]
    fn horizontal_flat_frame_at_zero() {
        let c = lifted(helix345(), LiftKind::Horizontal { w0: [2.0, -1.0, 5.0] });
        let f = lifted_frame(&c, 0.0, &ToleranceConfig::default()).unwrap();
        close(&f.tangent.value(), &[0.0, 0.6, 0.8, 0.0, 0.0, 0.0], 1e-15);
    }

    #[test]
    fn complete_tangent_carries_the_curvature() {
        let c = lifted(unit_helix(), LiftKind::Complete);
        let f = lifted_frame(&c, 0.0, &ToleranceConfig::default()).unwrap();
        let v = f.tangent.value();
        assert!((vector::norm(&v[3..]) - 0.12).abs() < 1e-14);
        assert!((vector::dot(&v, &v) - 1.0144).abs() < 1e-12);
    }

    #[test]
    fn vertical_and_flat_horizontal_copy_the_base() {
        let cfg = ToleranceConfig::default();
        for kind in [
            LiftKind::Vertical { anchor: None },
            LiftKind::Vertical { anchor: Some([10.0, -4.0, 2.5]) },
            LiftKind::Horizontal { w0: [1.0, 0.0, 0.0] },
        ] {
            let c = lifted(helix345(), kind);
            let r = theorem_residuals(&c, &helix345().grid(50), &cfg).unwrap();
            assert!(r.max_residual <= 1e-9, "{kind:?}: {}", r.max_residual);
            assert!(r.frame_ortho_max <= 1e-12);
            assert!(r.max_discrepancy <= 1e-9 && r.max_tau_discrepancy <= 1e-9);
            for (k, t) in r.kappa_lift.iter().zip(&r.tau_lift) {
                assert!((k - 0.12).abs() <= 1e-10 && (t - 0.16).abs() <= 1e-10, "{k} {t}");
            }
        }
    }

    #[test]
    fn complete_lift_oracle_matches_closed_form() {
        let c = lifted(unit_helix(), LiftKind::Complete);
        let r = theorem_residuals(&c, &unit_helix().grid(20), &ToleranceConfig::default()).unwrap();
        let chi1 = 5.0 * 234f64.sqrt() / 634.0;
        let chi2 = 100.0 / 634.0;
        for (k, t) in r.oracle_kappa.iter().zip(&r.oracle_tau) {
            assert!((k - chi1).abs() <= 1e-9 && (t - chi2).abs() <= 1e-9, "{k} {t}");
        }
        assert!(r.frame_ortho_max > 1e-3);
        // |d(T, T')/dt| = κ√(1+κ²+τ²) over the lifted speed √(1+κ²)
        let (k, t) = (0.12f64, 0.16f64);
        let expected = k * (1.0 + k * k + t * t).sqrt() / (1.0 + k * k).sqrt();
        assert!(r.kappa_lift.iter().all(|x| (x - expected).abs() < 1e-12));
    }

    #[test]
    fn planar_curve_oracle_falls_back() {
        let circle = CurveSpec::new("circle", ["2*cos(t)", "2*sin(t)", "0"], 0.0, 6.0).unwrap();
        let c = lifted(circle.clone(), LiftKind::Vertical { anchor: None });
        let r = theorem_residuals(&c, &circle.grid(10), &ToleranceConfig::default()).unwrap();
        assert!(r.oracle_tau.iter().all(|&t| t == 0.0));
        assert!(r.max_discrepancy <= 1e-9);
    }

    #[test]
    fn nonflat_horizontal_lift_runs() {
        let mut g = Connection::flat();
        g.set(0, 2, 1, 0.05);
        g.set(1, 0, 2, -0.05);
        let c = lift_curve(&helix345(), LiftKind::Horizontal { w0: [1.0, 1.0, 0.0] }, &g).unwrap();
        let grid = helix345().grid(5);
        let r = theorem_residuals(&c, &grid, &ToleranceConfig::default()).unwrap();
        let direct = lifted_apparatus(&c, grid[3], &ToleranceConfig::default()).unwrap();
        close(&r.points[3], &direct.point, 1e-12);
        assert!(r.kappa_lift.iter().all(|k| k.is_finite()));
    }

    #[test]
    fn outside_domain_is_rejected() {
        let c = lifted(helix345(), LiftKind::Complete);
        assert!(matches!(
            theorem_residuals(&c, &[0.0, 9.0], &ToleranceConfig::default()),
            Err(Error::OutsideDomain { .. })
        ));
    }
}
