//! Frenet apparatus of space curves.
//!
//! Everything is computed for an arbitrary regular parameter: arc-length
//! derivatives are `d/ds = (1/|β'|) d/dt`, so unit speed is a property to
//! check ([`speed_check`]) rather than an assumption. The torsion sign
//! follows `τ = -N · dB/ds`.

use serde::Serialize;

use crate::error::Error;
use crate::expr::CurveSpec;
use crate::jet::{Jet, JetError, DEFAULT_ORDER};
use crate::vector::{self, JetVec};

/// Speeds below this are treated as a stationary point.
pub const SPEED_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToleranceConfig {
    /// Curvatures below this leave the normal undefined.
    pub kappa_floor: f64,
    pub ortho_tol: f64,
    pub residual_tol: f64,
    pub unit_speed_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig { kappa_floor: 1e-9, ortho_tol: 1e-12, residual_tol: 1e-9, unit_speed_tol: 1e-8 }
    }
}

impl ToleranceConfig {
    pub const NAMES: [&'static str; 4] = ["kappa_floor", "ortho_tol", "residual_tol", "unit_speed_tol"];

    /// Overrides one tolerance by name.
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), Error> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::Config(format!("tolerance {name} must be positive, got {value}")));
        }
        let slot = match name {
            "kappa_floor" => &mut self.kappa_floor,
            "ortho_tol" => &mut self.ortho_tol,
            "residual_tol" => &mut self.residual_tol,
            "unit_speed_tol" => &mut self.unit_speed_tol,
            _ => {
                return Err(Error::Config(format!(
                    "unknown tolerance '{name}' (expected one of {})",
                    Self::NAMES.join(", ")
                )))
            }
        };
        *slot = value;
        Ok(())
    }
}

/// Frenet apparatus of a curve in R³ at one parameter value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrenetData {
    pub t: f64,
    pub point: [f64; 3],
    pub speed: f64,
    pub tangent: [f64; 3],
    pub normal: [f64; 3],
    pub binormal: [f64; 3],
    pub kappa: f64,
    pub tau: f64,
    /// `|T' - κN|`, `|N' + κT - τB|`, `|B' + τN|` with `'` = d/ds.
    pub residuals: [f64; 3],
    /// `A[i][j] = (dE_i/ds) · E_j` for `(E_1, E_2, E_3) = (T, N, B)`.
    pub derivative_matrix: [[f64; 3]; 3],
}

/// Jets of the three component functions at `t`, of the given order.
pub fn curve_point_jets(curve: &CurveSpec, t: f64, order: usize) -> Result<JetVec, Error> {
    if !curve.contains(t) {
        return Err(Error::OutsideDomain { t, t_min: curve.t_min, t_max: curve.t_max });
    }
    let var = Jet::var(t, order);
    let mut entries = Vec::with_capacity(3);
    for (index, c) in curve.components.iter().enumerate() {
        let j = c
            .eval_jet(&[("t", var.clone())])
            .map_err(|source| Error::Component { index, source })?;
        entries.push(j);
    }
    Ok(JetVec::new(entries))
}

/// Jet-valued Frenet frame along a curve in R³, so that the frame itself
/// can be differentiated.
#[derive(Debug, Clone)]
pub struct FrameJets {
    pub tangent: JetVec,
    pub normal: JetVec,
    pub binormal: JetVec,
    pub speed: f64,
    pub kappa: f64,
    pub tau: f64,
}

impl FrameJets {
    pub fn vectors(&self) -> [&JetVec; 3] {
        [&self.tangent, &self.normal, &self.binormal]
    }
}

/// Builds `T = β'/|β'|`, `B = β'×β''/|β'×β''|`, `N = B×T` with
/// `κ = |β'×β''|/|β'|³` and `τ = (β'×β'')·β'''/|β'×β''|²`.
pub fn frame_jets(point: &JetVec, t: f64, cfg: &ToleranceConfig) -> Result<FrameJets, Error> {
    if point.order() < 3 {
        return Err(JetError::OrderExceeded { k: 3, order: point.order() }.into());
    }
    let d1 = point.differentiate();
    let d2 = d1.differentiate();
    let d3 = d2.differentiate();
    let speed = vector::norm(&d1.value());
    if speed < SPEED_FLOOR {
        return Err(Error::ZeroSpeed { t });
    }
    let cross = d1.cross(&d2)?;
    let cross_norm = vector::norm(&cross.value());
    let kappa = cross_norm / speed.powi(3);
    if !(kappa >= cfg.kappa_floor) {
        return Err(Error::DegenerateCurvature { t, kappa });
    }
    let tau = vector::dot(&cross.value(), &d3.value()) / (cross_norm * cross_norm);
    let tangent = d1.normalized()?;
    let binormal = cross.normalized()?;
    let normal = binormal.cross(&tangent)?;
    Ok(FrameJets { tangent, normal, binormal, speed, kappa, tau })
}

/// Arc-length derivatives of a jet-valued frame, given the speed of the
/// curve it moves along.
pub(crate) fn arc_derivatives(frame: &[&JetVec], speed: f64) -> Vec<Vec<f64>> {
    frame
        .iter()
        .map(|e| e.differentiate().value().iter().map(|x| x / speed).collect())
        .collect()
}

pub(crate) fn derivative_matrix(frame: &[Vec<f64>], derivs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    derivs
        .iter()
        .map(|d| frame.iter().map(|e| vector::dot(d, e)).collect())
        .collect()
}

/// Residuals of `T' = κN`, `N' = -κT + τB`, `B' = -τN`.
pub(crate) fn frenet_formula_residuals(frame: &[Vec<f64>], derivs: &[Vec<f64>], kappa: f64, tau: f64) -> [f64; 3] {
    let (t, n, b) = (&frame[0], &frame[1], &frame[2]);
    let r_t: Vec<f64> = vector::axpy(&derivs[0], -kappa, n);
    let r_n: Vec<f64> = vector::axpy(&vector::axpy(&derivs[1], kappa, t), -tau, b);
    let r_b: Vec<f64> = vector::axpy(&derivs[2], tau, n);
    [vector::norm(&r_t), vector::norm(&r_n), vector::norm(&r_b)]
}

/// Largest entry of `|A + Aᵀ|`.
pub fn skew_defect(a: &[Vec<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..a.len() {
        for j in 0..a.len() {
            worst = worst.max((a[i][j] + a[j][i]).abs());
        }
    }
    worst
}

fn arr3(v: &[f64]) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

pub fn frenet_apparatus(curve: &CurveSpec, t: f64, cfg: &ToleranceConfig) -> Result<FrenetData, Error> {
    let point = curve_point_jets(curve, t, DEFAULT_ORDER)?;
    let fj = frame_jets(&point, t, cfg)?;
    let frame: Vec<Vec<f64>> = fj.vectors().iter().map(|v| v.value()).collect();
    let derivs = arc_derivatives(&fj.vectors(), fj.speed);
    let a = derivative_matrix(&frame, &derivs);
    Ok(FrenetData {
        t,
        point: arr3(&point.value()),
        speed: fj.speed,
        tangent: arr3(&frame[0]),
        normal: arr3(&frame[1]),
        binormal: arr3(&frame[2]),
        kappa: fj.kappa,
        tau: fj.tau,
        residuals: frenet_formula_residuals(&frame, &derivs, fj.kappa, fj.tau),
        derivative_matrix: [arr3(&a[0]), arr3(&a[1]), arr3(&a[2])],
    })
}

pub fn frenet_residuals(curve: &CurveSpec, t: f64, cfg: &ToleranceConfig) -> Result<[f64; 3], Error> {
    Ok(frenet_apparatus(curve, t, cfg)?.residuals)
}

impl FrenetData {
    /// `max |E_i·E_j - δ_ij|` over the frame.
    pub fn orthonormality_defect(&self) -> f64 {
        vector::orthonormality_defect(&[
            self.tangent.to_vec(),
            self.normal.to_vec(),
            self.binormal.to_vec(),
        ])
    }

    pub fn skew_defect(&self) -> f64 {
        let a: Vec<Vec<f64>> = self.derivative_matrix.iter().map(|r| r.to_vec()).collect();
        skew_defect(&a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpeedReport {
    pub max_deviation: f64,
    pub unit_speed: bool,
}

/// Largest `| |β'(t)| - 1 |` over `grid`.
pub fn speed_check(curve: &CurveSpec, grid: &[f64], cfg: &ToleranceConfig) -> Result<SpeedReport, Error> {
    let mut max_deviation: f64 = 0.0;
    for &t in grid {
        let v = curve_point_jets(curve, t, 1)?.differentiate().value();
        max_deviation = max_deviation.max((vector::norm(&v) - 1.0).abs());
    }
    Ok(SpeedReport { max_deviation, unit_speed: max_deviation <= cfg.unit_speed_tol })
}

/// Frame obtained by orthonormalizing successive derivatives.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralizedFrame {
    pub frame: Vec<Vec<f64>>,
    /// `χ_i = (dE_i/ds) · E_{i+1}`, `i = 1..m-1`.
    pub curvatures: Vec<f64>,
    pub derivative_matrix: Vec<Vec<f64>>,
    pub speed: f64,
}

/// Gram–Schmidt frame `E_1..E_m` of `(β', …, β^(m))` in any dimension.
///
/// When `m` equals the dimension and that is 3, the last vector is
/// `E_1 × E_2`, which gives the signed torsion convention. Otherwise the
/// last curvature is nonnegative: without an orientation on the ambient
/// space its sign is not defined.
///
/// The point jets must have order at least `m + 1`.
pub fn generalized_frenet(point: &JetVec, m: usize, cfg: &ToleranceConfig) -> Result<GeneralizedFrame, Error> {
    let dim = point.dim();
    if m == 0 || m > dim {
        return Err(Error::Config(format!("frame size {m} must lie in 1..={dim}")));
    }
    if point.order() < m + 1 {
        return Err(JetError::OrderExceeded { k: m + 1, order: point.order() }.into());
    }
    let mut derivs = Vec::with_capacity(m);
    let mut d = point.differentiate();
    for _ in 0..m {
        let next = d.differentiate();
        derivs.push(d);
        d = next;
    }
    let speed = vector::norm(&derivs[0].value());
    if speed < SPEED_FLOOR {
        return Err(Error::RankDeficient { index: 0 });
    }
    let mut frame: Vec<JetVec> = Vec::with_capacity(m);
    for (k, dk) in derivs.iter().enumerate() {
        if k == 2 && m == 3 && dim == 3 {
            let e = frame[0].cross(&frame[1])?;
            frame.push(e);
            continue;
        }
        let mut u = dk.clone();
        for e in &frame {
            let c = u.dot(e)?;
            u = u.sub(&e.scale(&c))?;
        }
        if !(vector::norm(&u.value()) >= cfg.kappa_floor) {
            return Err(Error::RankDeficient { index: k });
        }
        frame.push(u.normalized().map_err(|_| Error::RankDeficient { index: k })?);
    }
    let refs: Vec<&JetVec> = frame.iter().collect();
    let values: Vec<Vec<f64>> = frame.iter().map(JetVec::value).collect();
    let arc = arc_derivatives(&refs, speed);
    let a = derivative_matrix(&values, &arc);
    let curvatures = (0..m.saturating_sub(1)).map(|i| a[i][i + 1]).collect();
    Ok(GeneralizedFrame { frame: values, curvatures, derivative_matrix: a, speed })
}
