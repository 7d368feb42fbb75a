//! Lifts of a base curve `β(t)` in R³ to curves in TR³:
//!
//! - vertical: `t ↦ (anchor, β(t))`, a copy of the curve in one fiber
//! - complete: `t ↦ (β(t), β'(t))`, the natural lift
//! - horizontal: `t ↦ (β(t), w(t))` with `w` parallel along `β`

use serde::Serialize;

use super::transport::{default_steps, parallel_transport};
use super::Connection;
use crate::error::Error;
use crate::expr::CurveSpec;
use crate::frenet::curve_point_jets;
use crate::jet::Jet;
use crate::vector::JetVec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LiftKind {
    /// `None` anchors the copy at `β(t_min)`.
    Vertical { anchor: Option<[f64; 3]> },
    Complete,
    Horizontal { w0: [f64; 3] },
}

impl LiftKind {
    pub fn tag(&self) -> &'static str {
        match self {
            LiftKind::Vertical { .. } => "v",
            LiftKind::Complete => "c",
            LiftKind::Horizontal { .. } => "h",
        }
    }
}

/// A base curve together with the lift applied to it.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedCurve {
    pub base: CurveSpec,
    pub kind: LiftKind,
    pub connection: Connection,
}

pub fn lift_curve(curve: &CurveSpec, kind: LiftKind, g: &Connection) -> Result<LiftedCurve, Error> {
    let finite = |v: &[f64; 3]| v.iter().all(|x| x.is_finite());
    match &kind {
        LiftKind::Vertical { anchor: Some(a) } if !finite(a) => {
            return Err(Error::Config("anchor must be finite".into()))
        }
        LiftKind::Horizontal { w0 } if !finite(w0) => return Err(Error::Config("w0 must be finite".into())),
        _ => {}
    }
    Ok(LiftedCurve { base: curve.clone(), kind, connection: *g })
}

/// Taylor coefficients of the transported vector about `t`, from its value
/// there: `(k+1) w_{k+1} = -Σ_j Γ(β'_j, w_{k-j})`.
fn fiber_jets(g: &Connection, velocity: &JetVec, w: [f64; 3], order: usize) -> JetVec {
    let vel: Vec<Vec<f64>> = velocity.entries().iter().map(|j| j.coeffs().to_vec()).collect();
    let mut coeffs: Vec<[f64; 3]> = vec![w];
    for k in 0..order {
        let mut next = [0.0; 3];
        for j in 0..=k {
            let dir = [vel[0][j], vel[1][j], vel[2][j]];
            let c = g.contract(&dir, &coeffs[k - j]);
            for a in 0..3 {
                next[a] -= c[a];
            }
        }
        coeffs.push(next.map(|x| x / (k + 1) as f64));
    }
    JetVec::new((0..3).map(|a| Jet::from_coeffs(coeffs.iter().map(|c| c[a]).collect())).collect())
}

impl LiftedCurve {
    pub fn anchor(&self) -> Result<[f64; 3], Error> {
        match self.kind {
            LiftKind::Vertical { anchor: Some(a) } => Ok(a),
            _ => {
                let p = curve_point_jets(&self.base, self.base.t_min, 0)?.value();
                Ok([p[0], p[1], p[2]])
            }
        }
    }

    /// Fiber vector of the horizontal lift at `t`, transported from `t_min`.
    pub fn transported_fiber(&self, t: f64) -> Result<[f64; 3], Error> {
        match self.kind {
            LiftKind::Horizontal { w0 } => {
                parallel_transport(&self.connection, &self.base, w0, t, default_steps(self.base.t_min, t))
            }
            _ => Err(Error::Config("only horizontal lifts transport a fiber vector".into())),
        }
    }

    /// Jets of the six coordinates of the lifted curve at `t`, with the base
    /// curve expanded to `order`. The complete lift loses one order.
    pub fn point_jets(&self, t: f64, order: usize) -> Result<JetVec, Error> {
        let fiber = match self.kind {
            LiftKind::Horizontal { .. } => Some(self.transported_fiber(t)?),
            _ => None,
        };
        self.point_jets_with_fiber(t, order, fiber)
    }

    /// As [`LiftedCurve::point_jets`], with the horizontal fiber value at `t`
    /// supplied by the caller (e.g. from a single transport pass over a grid).
    pub fn point_jets_with_fiber(&self, t: f64, order: usize, fiber: Option<[f64; 3]>) -> Result<JetVec, Error> {
        let base = curve_point_jets(&self.base, t, order)?;
        Ok(match self.kind {
            LiftKind::Vertical { .. } => JetVec::constant(&self.anchor()?, order).concat(&base),
            LiftKind::Complete => base.concat(&base.differentiate()),
            LiftKind::Horizontal { w0 } => {
                let w = fiber.unwrap_or(w0);
                let w = fiber_jets(&self.connection, &base.differentiate(), w, order);
                base.concat(&w)
            }
        })
    }

    pub fn point(&self, t: f64) -> Result<[f64; 6], Error> {
        let v = self.point_jets(t, 1)?.value();
        Ok(std::array::from_fn(|i| v[i]))
    }
}
