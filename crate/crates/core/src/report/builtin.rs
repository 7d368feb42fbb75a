use std::f64::consts::{PI, TAU};

use crate::expr::CurveSpec;

pub const BUILTIN_NAMES: [&str; 4] = ["helix345", "unit_helix", "circle2", "line"];

fn curve(name: &str, components: [&str; 3], t_max: f64) -> CurveSpec {
    CurveSpec::new(name, components, 0.0, t_max).expect("built-in curve parses")
}

/// `(3 cos t, 3 sin t, 4t)`: speed 5, `κ = 0.12`, `τ = 0.16`.
pub fn helix345() -> CurveSpec {
    curve("helix345", ["3*cos(t)", "3*sin(t)", "4*t"], TAU)
}

/// The same helix by arc length.
pub fn unit_speed_helix() -> CurveSpec {
    curve("unit_helix", ["3*cos(t/5)", "3*sin(t/5)", "4*t/5"], 10.0 * PI)
}

/// Circle of radius 2 in the `x1 x2` plane.
pub fn circle() -> CurveSpec {
    curve("circle2", ["2*cos(t)", "2*sin(t)", "0"], TAU)
}

/// A straight line, which has no Frenet frame.
pub fn line() -> CurveSpec {
    curve("line", ["t", "2*t", "2*t"], 1.0)
}

pub fn builtin_curve(name: &str) -> Option<CurveSpec> {
    match name {
        "helix345" => Some(helix345()),
        "unit_helix" => Some(unit_speed_helix()),
        "circle2" => Some(circle()),
        "line" => Some(line()),
        _ => None,
    }
}
