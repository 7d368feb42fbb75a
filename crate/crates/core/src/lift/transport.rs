//! Parallel transport of a fiber vector along a base curve,
//! `w'^α = -Γ^α_{βγ} β'^β w^γ`, by the classical Runge–Kutta method.

use super::Connection;
use crate::error::Error;
use crate::expr::CurveSpec;
use crate::frenet::curve_point_jets;

/// Default integration density.
pub const STEPS_PER_UNIT: f64 = 1000.0;

/// Step count for transporting from `t_min` to `t` at the default density.
pub fn default_steps(t_min: f64, t: f64) -> usize {
    ((t - t_min).abs() * STEPS_PER_UNIT).ceil().max(1.0) as usize
}

fn velocity(curve: &CurveSpec, u: f64) -> Result<[f64; 3], Error> {
    // stage points can round a hair past the domain end
    let u = u.clamp(curve.t_min, curve.t_max);
    let v = curve_point_jets(curve, u, 1)?.differentiate().value();
    Ok([v[0], v[1], v[2]])
}

fn rhs(g: &Connection, curve: &CurveSpec, u: f64, w: &[f64; 3]) -> Result<[f64; 3], Error> {
    Ok(g.contract(&velocity(curve, u)?, w).map(|x| -x))
}

fn rk4(g: &Connection, curve: &CurveSpec, mut w: [f64; 3], from: f64, to: f64, steps: usize) -> Result<[f64; 3], Error> {
    let h = (to - from) / steps as f64;
    for i in 0..steps {
        let u = from + h * i as f64;
        let k1 = rhs(g, curve, u, &w)?;
        let k2 = rhs(g, curve, u + h / 2.0, &std::array::from_fn(|a| w[a] + h / 2.0 * k1[a]))?;
        let k3 = rhs(g, curve, u + h / 2.0, &std::array::from_fn(|a| w[a] + h / 2.0 * k2[a]))?;
        let k4 = rhs(g, curve, u + h, &std::array::from_fn(|a| w[a] + h * k3[a]))?;
        for a in 0..3 {
            w[a] += h / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
        }
    }
    Ok(w)
}

/// Transports `w0` from `curve.t_min` to `t` in `steps` fixed steps.
///
/// A flat connection returns `w0` unchanged without integrating.
pub fn parallel_transport(
    g: &Connection,
    curve: &CurveSpec,
    w0: [f64; 3],
    t: f64,
    steps: usize,
) -> Result<[f64; 3], Error> {
    if !curve.contains(t) {
        return Err(Error::OutsideDomain { t, t_min: curve.t_min, t_max: curve.t_max });
    }
    if steps == 0 {
        return Err(Error::Config("transport needs at least one step".into()));
    }
    if g.is_flat() {
        return Ok(w0);
    }
    rk4(g, curve, w0, curve.t_min, t, steps)
}

/// Transported vectors at every point of an ascending grid, in one pass.
/// Each interval gets `default_steps` of its own length.
pub fn transport_along_grid(
    g: &Connection,
    curve: &CurveSpec,
    w0: [f64; 3],
    grid: &[f64],
) -> Result<Vec<[f64; 3]>, Error> {
    if let Some(&t) = grid.iter().find(|&&t| !curve.contains(t)) {
        return Err(Error::OutsideDomain { t, t_min: curve.t_min, t_max: curve.t_max });
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Config("transport grid must be ascending".into()));
    }
    if g.is_flat() {
        return Ok(vec![w0; grid.len()]);
    }
    let mut out = Vec::with_capacity(grid.len());
    let (mut at, mut w) = (curve.t_min, w0);
    for &t in grid {
        if t > at {
            w = rk4(g, curve, w, at, t, default_steps(at, t))?;
            at = t;
        }
        out.push(w);
    }
    Ok(out)
}
