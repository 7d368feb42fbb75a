//! Vertical, complete and horizontal lifts from R³ to TR³ = R⁶.
//!
//! Points of TR³ carry base coordinates `x^α` and fiber coordinates `y^α`.
//! In these coordinates, for a vector field `X = X^α ∂/∂x^α`:
//!
//! ```text
//! X^v = X^α ∂/∂y^α
//! X^c = X^α ∂/∂x^α + y^β ∂_β X^α ∂/∂y^α
//! X^H = X^α ∂/∂x^α - y^β Γ^α_{βγ} X^γ ∂/∂y^α
//! ```
//!
//! and for a function `f`, `f^v = f(x)` and `f^c = y^α ∂_α f(x)`.

mod connection;
mod curve;
mod prop21;
mod transport;

use serde::Serialize;

use crate::error::Error;
use crate::expr::{BinOp, ExprAst, FieldKind, FieldSpec, BASE_VARS};
use crate::jet::Jet;

pub use connection::{parse_connection_file, Connection};
pub use curve::{lift_curve, LiftKind, LiftedCurve};
pub use prop21::{prop21_check, Prop21Residuals};
pub use transport::{default_steps, parallel_transport, transport_along_grid, STEPS_PER_UNIT};

pub const FIBER_VARS: [&str; 3] = ["y1", "y2", "y3"];
pub const TANGENT_VARS: [&str; 6] = ["x1", "x2", "x3", "y1", "y2", "y3"];

/// A point of TR³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentPoint {
    pub x: [f64; 3],
    pub y: [f64; 3],
}

impl TangentPoint {
    pub fn new(x: [f64; 3], y: [f64; 3]) -> Result<Self, Error> {
        if x.iter().chain(&y).all(|v| v.is_finite()) {
            Ok(TangentPoint { x, y })
        } else {
            Err(Error::Config("tangent point coordinates must be finite".into()))
        }
    }

    pub fn from_slice(v: &[f64]) -> Result<Self, Error> {
        if v.len() != 6 {
            return Err(Error::Config(format!("a point of TR³ has 6 coordinates, got {}", v.len())));
        }
        TangentPoint::new([v[0], v[1], v[2]], [v[3], v[4], v[5]])
    }
}

/// Which lift to apply to a function or vector field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FieldLift {
    Vertical,
    Complete,
    Horizontal,
}

impl FieldLift {
    pub const ALL: [FieldLift; 3] = [FieldLift::Vertical, FieldLift::Complete, FieldLift::Horizontal];

    pub fn tag(self) -> &'static str {
        match self {
            FieldLift::Vertical => "v",
            FieldLift::Complete => "c",
            FieldLift::Horizontal => "h",
        }
    }
}

/// A lifted vector field evaluated at one point of TR³:
/// `base^α ∂/∂x^α + fiber^α ∂/∂y^α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiftedField {
    pub base: [f64; 3],
    pub fiber: [f64; 3],
    pub kind: FieldLift,
}

impl LiftedField {
    pub fn components(&self) -> [f64; 6] {
        let (b, f) = (self.base, self.fiber);
        [b[0], b[1], b[2], f[0], f[1], f[2]]
    }

    /// Largest componentwise difference.
    pub fn distance(&self, other: &LiftedField) -> f64 {
        self.components()
            .iter()
            .zip(other.components())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn add(&self, other: &LiftedField) -> LiftedField {
        LiftedField {
            base: std::array::from_fn(|i| self.base[i] + other.base[i]),
            fiber: std::array::from_fn(|i| self.fiber[i] + other.fiber[i]),
            kind: self.kind,
        }
    }

    pub fn scale(&self, s: f64) -> LiftedField {
        LiftedField { base: self.base.map(|v| v * s), fiber: self.fiber.map(|v| v * s), kind: self.kind }
    }
}

/// Order-1 jets for `x1, x2, x3`, seeding `∂/∂x^seed` when given.
fn base_bindings(x: &[f64; 3], seed: Option<usize>) -> Vec<(&'static str, Jet)> {
    BASE_VARS
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let j = if seed == Some(i) { Jet::var(x[i], 1) } else { Jet::constant(x[i], 1) };
            (n, j)
        })
        .collect()
}

/// Values of each component of `spec` at `x`, and its Jacobian
/// `jac[a][b] = ∂F^a/∂x^b`, from three seeded jet evaluations.
fn values_and_jacobian(spec: &FieldSpec, x: &[f64; 3]) -> Result<(Vec<f64>, Vec<[f64; 3]>), Error> {
    let n = spec.components.len();
    let mut values = vec![0.0; n];
    let mut jac = vec![[0.0; 3]; n];
    for b in 0..3 {
        let bind = base_bindings(x, Some(b));
        for (a, comp) in spec.components.iter().enumerate() {
            let j = comp.eval_jet(&bind).map_err(|source| Error::Component { index: a, source })?;
            values[a] = j.value();
            jac[a][b] = j.coeffs()[1];
        }
    }
    Ok((values, jac))
}

fn require_kind(spec: &FieldSpec, kind: FieldKind) -> Result<(), Error> {
    if spec.kind != kind {
        return Err(Error::Config(format!("expected a {kind:?} field, got {:?}", spec.kind)));
    }
    Ok(())
}

/// `f^v(p) = f(x)` or `f^c(p) = y^α ∂_α f(x)`.
///
/// Functions have no horizontal lift of their own; `Horizontal` is rejected.
pub fn lift_function(f: &FieldSpec, kind: FieldLift, p: &TangentPoint) -> Result<f64, Error> {
    require_kind(f, FieldKind::Scalar)?;
    match kind {
        FieldLift::Vertical => {
            let bind = base_bindings(&p.x, None);
            Ok(f.components[0].eval_jet(&bind)?.value())
        }
        FieldLift::Complete => {
            let (_, jac) = values_and_jacobian(f, &p.x)?;
            Ok((0..3).map(|a| p.y[a] * jac[0][a]).sum())
        }
        FieldLift::Horizontal => Err(Error::Config("functions lift vertically or completely".into())),
    }
}

/// Evaluates the lift of the vector field `x` at `p`.
pub fn lift_field(x: &FieldSpec, kind: FieldLift, g: &Connection, p: &TangentPoint) -> Result<LiftedField, Error> {
    require_kind(x, FieldKind::Vector)?;
    let (values, jac) = values_and_jacobian(x, &p.x)?;
    let xv = [values[0], values[1], values[2]];
    let (base, fiber) = match kind {
        FieldLift::Vertical => ([0.0; 3], xv),
        FieldLift::Complete => {
            let fiber = std::array::from_fn(|a| (0..3).map(|b| p.y[b] * jac[a][b]).sum());
            (xv, fiber)
        }
        FieldLift::Horizontal => (xv, g.contract(&p.y, &xv).map(|v| -v)),
    };
    Ok(LiftedField { base, fiber, kind })
}

/// A function on TR³ that a lifted field can act on.
#[derive(Debug, Clone, PartialEq)]
pub enum TangentScalar {
    /// `f^v` of a scalar field on R³.
    Vertical(FieldSpec),
    /// `f^c` of a scalar field on R³.
    Complete(FieldSpec),
    /// Any expression in `x1, x2, x3, y1, y2, y3`.
    Raw(ExprAst),
}

impl TangentScalar {
    /// The function as an expression in the six coordinates of TR³.
    pub fn to_expr(&self) -> Result<ExprAst, Error> {
        match self {
            TangentScalar::Vertical(f) => {
                require_kind(f, FieldKind::Scalar)?;
                Ok(f.components[0].clone())
            }
            TangentScalar::Complete(f) => {
                require_kind(f, FieldKind::Scalar)?;
                let f = &f.components[0];
                let mut acc: Option<ExprAst> = None;
                for (xa, ya) in BASE_VARS.iter().zip(FIBER_VARS) {
                    let term = ExprAst::binary(BinOp::Mul, ExprAst::var(ya), f.derivative(xa));
                    acc = Some(match acc {
                        None => term,
                        Some(a) => ExprAst::binary(BinOp::Add, a, term),
                    });
                }
                Ok(acc.expect("three terms"))
            }
            TangentScalar::Raw(e) => Ok(e.clone()),
        }
    }
}

/// `F(g)(p) = a^α ∂g/∂x^α + b^α ∂g/∂y^α`, as one directional jet
/// derivative along `(a, b)`.
pub fn apply_field(field: &LiftedField, g: &TangentScalar, p: &TangentPoint) -> Result<f64, Error> {
    let expr = g.to_expr()?;
    let coords = [p.x[0], p.x[1], p.x[2], p.y[0], p.y[1], p.y[2]];
    let dir = field.components();
    let bind: Vec<(&str, Jet)> = TANGENT_VARS
        .iter()
        .enumerate()
        .map(|(i, &n)| (n, Jet::from_coeffs(vec![coords[i], dir[i]])))
        .collect();
    Ok(expr.eval_jet(&bind)?.coeffs()[1])
}

/// The function `Xf = X^α ∂f/∂x^α` on R³, built symbolically.
pub fn directional_derivative(x: &FieldSpec, f: &FieldSpec) -> Result<FieldSpec, Error> {
    require_kind(x, FieldKind::Vector)?;
    require_kind(f, FieldKind::Scalar)?;
    let mut acc: Option<ExprAst> = None;
    for (xa, comp) in BASE_VARS.iter().zip(&x.components) {
        let term = ExprAst::binary(BinOp::Mul, comp.clone(), f.components[0].derivative(xa));
        acc = Some(match acc {
            None => term,
            Some(a) => ExprAst::binary(BinOp::Add, a, term),
        });
    }
    Ok(FieldSpec::scalar(acc.expect("three terms")))
}

/// `X + Y` as a field specification.
pub fn field_sum(x: &FieldSpec, y: &FieldSpec) -> Result<FieldSpec, Error> {
    require_kind(x, FieldKind::Vector)?;
    require_kind(y, FieldKind::Vector)?;
    let comps = std::array::from_fn(|i| ExprAst::binary(BinOp::Add, x.components[i].clone(), y.components[i].clone()));
    Ok(FieldSpec::vector(comps))
}

/// `f X` as a field specification.
pub fn field_scaled(f: &FieldSpec, x: &FieldSpec) -> Result<FieldSpec, Error> {
    require_kind(f, FieldKind::Scalar)?;
    require_kind(x, FieldKind::Vector)?;
    let comps = std::array::from_fn(|i| ExprAst::binary(BinOp::Mul, f.components[0].clone(), x.components[i].clone()));
    Ok(FieldSpec::vector(comps))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: [f64; 3], y: [f64; 3]) -> TangentPoint {
        TangentPoint::new(x, y).unwrap()
    }

    fn vec_field(c: [&str; 3]) -> FieldSpec {
        FieldSpec::parse_vector(c).unwrap()
    }

    fn scalar(f: &str) -> FieldSpec {
        FieldSpec::parse_scalar(f).unwrap()
    }

    #[test]
    fn function_lifts() {
        let f = scalar("x1+2*x2");
        assert_eq!(lift_function(&f, FieldLift::Vertical, &pt([1.0, 1.0, 0.0], [9.0; 3])).unwrap(), 3.0);
        let f = scalar("x1*x2");
        assert_eq!(lift_function(&f, FieldLift::Complete, &pt([2.0, 3.0, 0.0], [1.0, 1.0, 0.0])).unwrap(), 5.0);
        let one = scalar("1");
        assert_eq!(lift_function(&one, FieldLift::Complete, &pt([4.0, -2.0, 7.0], [3.0, 1.0, 5.0])).unwrap(), 0.0);
        assert!(lift_function(&one, FieldLift::Horizontal, &pt([0.0; 3], [0.0; 3])).is_err());
    }

    #[test]
    fn complete_function_lift_two_routes() {
        // seeded jets vs. the symbolic expression y^α ∂_α f
        let f = scalar("sin(x1*x2) + x3^3/(1 + x1^2)");
        let p = pt([0.3, -1.2, 0.8], [1.5, -0.5, 2.0]);
        let a = lift_function(&f, FieldLift::Complete, &p).unwrap();
        let e = TangentScalar::Complete(f).to_expr().unwrap();
        let vars: Vec<(&str, f64)> = TANGENT_VARS.iter().copied().zip([0.3, -1.2, 0.8, 1.5, -0.5, 2.0]).collect();
        let b = e.eval_real(&vars);
        assert!((a - b).abs() < 1e-14, "{a} {b}");
    }

    #[test]
    fn vector_field_lifts() {
        let flat = Connection::flat();
        let x = vec_field(["x2", "0", "0"]);
        let v = lift_field(&x, FieldLift::Vertical, &flat, &pt([1.0, 2.0, 3.0], [7.0, -1.0, 0.5])).unwrap();
        assert_eq!(v.base, [0.0; 3]);
        assert_eq!(v.fiber, [2.0, 0.0, 0.0]);

        let d1 = vec_field(["1", "0", "0"]);
        let h = lift_field(&d1, FieldLift::Horizontal, &flat, &pt([1.0, 2.0, 3.0], [4.0, 5.0, 6.0])).unwrap();
        assert_eq!(h.base, [1.0, 0.0, 0.0]);
        assert_eq!(h.fiber, [0.0; 3]);

        let id = vec_field(["x1", "x2", "x3"]);
        let c = lift_field(&id, FieldLift::Complete, &flat, &pt([1.0, 2.0, 3.0], [1.0, 0.0, 0.0])).unwrap();
        assert_eq!(c.base, [1.0, 2.0, 3.0]);
        assert_eq!(c.fiber, [1.0, 0.0, 0.0]);
    }

    #[test]
    fn horizontal_lift_of_coordinate_field() {
        // (∂/∂x^1)^H = ∂/∂x^1 - y^β Γ^α_{β1} ∂/∂y^α
        let mut g = Connection::flat();
        g.set(0, 1, 0, 2.0);
        g.set(2, 0, 0, -1.0);
        let d1 = vec_field(["1", "0", "0"]);
        let p = pt([0.0; 3], [3.0, 5.0, 7.0]);
        let h = lift_field(&d1, FieldLift::Horizontal, &g, &p).unwrap();
        assert_eq!(h.base, [1.0, 0.0, 0.0]);
        assert_eq!(h.fiber, [-10.0, 0.0, 3.0]);
    }

    #[test]
    fn applying_lifted_fields() {
        let flat = Connection::flat();
        let d1 = vec_field(["1", "0", "0"]);
        let p = pt([0.4, -3.0, 2.0], [1.0, 8.0, -2.0]);
        let xv = lift_field(&d1, FieldLift::Vertical, &flat, &p).unwrap();
        let fc = TangentScalar::Complete(scalar("x1"));
        assert_eq!(apply_field(&xv, &fc, &p).unwrap(), 1.0);

        let x = vec_field(["x2*x3", "sin(x1)", "x1^2"]);
        let xv = lift_field(&x, FieldLift::Vertical, &flat, &p).unwrap();
        let fv = TangentScalar::Vertical(scalar("x1*x2 + cos(x3)"));
        assert_eq!(apply_field(&xv, &fv, &p).unwrap(), 0.0);

        let p = pt([3.0, 0.0, 0.0], [0.0; 3]);
        let xh = lift_field(&d1, FieldLift::Horizontal, &flat, &p).unwrap();
        let fv = TangentScalar::Vertical(scalar("x1^2"));
        assert_eq!(apply_field(&xh, &fv, &p).unwrap(), 6.0);
    }

    #[test]
    fn raw_functions_on_the_tangent_bundle() {
        let g = TangentScalar::Raw(crate::expr::parse_expr("x1*y2 + y3^2", &TANGENT_VARS).unwrap());
        let f = LiftedField { base: [1.0, 0.0, 0.0], fiber: [0.0, 2.0, 1.0], kind: FieldLift::Complete };
        let p = pt([1.0, 1.0, 1.0], [0.0, 3.0, 4.0]);
        // ∂g/∂x1 = y2 = 3, ∂g/∂y2 = x1 = 1, ∂g/∂y3 = 2 y3 = 8
        assert_eq!(apply_field(&f, &g, &p).unwrap(), 3.0 + 2.0 + 8.0);
    }

    #[test]
    fn vertical_lift_has_no_base_part() {
        let x = vec_field(["exp(x1)", "x2*x3", "sqrt(1+x1^2)"]);
        let g = Connection::flat();
        for p in [pt([0.1, 0.2, 0.3], [1.0; 3]), pt([-4.0, 2.0, 9.0], [0.0, -3.0, 1.0])] {
            assert_eq!(lift_field(&x, FieldLift::Vertical, &g, &p).unwrap().base, [0.0; 3]);
        }
    }

    #[test]
    fn kind_mismatch_is_reported() {
        let f = scalar("x1");
        let g = Connection::flat();
        assert!(lift_field(&f, FieldLift::Vertical, &g, &pt([0.0; 3], [0.0; 3])).is_err());
        assert!(TangentPoint::from_slice(&[1.0; 5]).is_err());
    }
}
