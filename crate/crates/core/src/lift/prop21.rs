//! Residuals of the algebraic lift identities at one point of TR³.
//!
//! Field identities compare lifted vectors componentwise, which is the same
//! as comparing their action on the six coordinate functions. Function
//! identities evaluate both sides independently: the left through
//! [`apply_field`], the right by lifting the symbolically built function
//! `Xf`.

use serde::Serialize;

use super::{
    apply_field, directional_derivative, field_scaled, field_sum, lift_field, lift_function, Connection,
    FieldLift, TangentPoint, TangentScalar,
};
use crate::error::Error;
use crate::expr::FieldSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prop21Residuals {
    /// `(X+Y)^v = X^v + Y^v`
    pub sum_vertical: f64,
    /// `(X+Y)^c = X^c + Y^c`
    pub sum_complete: f64,
    /// `(X+Y)^H = X^H + Y^H`
    pub sum_horizontal: f64,
    /// `(fX)^v = f^v X^v`
    pub scaled_vertical: f64,
    /// `(fX)^c = f^c X^v + f^v X^c`
    pub scaled_complete: f64,
    /// `(fX)^H = f^v X^H`
    pub scaled_horizontal: f64,
    /// `X^v(f^v) = 0`
    pub vertical_on_vertical: f64,
    /// `X^c(f^v) = (Xf)^v`
    pub complete_on_vertical: f64,
    /// `X^v(f^c) = (Xf)^v`
    pub vertical_on_complete: f64,
    /// `X^c(f^c) = (Xf)^c`
    pub complete_on_complete: f64,
    /// `X^H(f^v) = (Xf)^v`
    pub horizontal_on_vertical: f64,
}

impl Prop21Residuals {
    pub fn entries(&self) -> [(&'static str, f64); 11] {
        [
            ("sum_v", self.sum_vertical),
            ("sum_c", self.sum_complete),
            ("sum_h", self.sum_horizontal),
            ("scaled_v", self.scaled_vertical),
            ("scaled_c", self.scaled_complete),
            ("scaled_h", self.scaled_horizontal),
            ("xv_fv", self.vertical_on_vertical),
            ("xc_fv", self.complete_on_vertical),
            ("xv_fc", self.vertical_on_complete),
            ("xc_fc", self.complete_on_complete),
            ("xh_fv", self.horizontal_on_vertical),
        ]
    }

    pub fn max(&self) -> f64 {
        self.entries().iter().map(|(_, v)| *v).fold(0.0, f64::max)
    }

    fn merge(self, o: Prop21Residuals) -> Prop21Residuals {
        let m = |a: f64, b: f64| a.max(b);
        Prop21Residuals {
            sum_vertical: m(self.sum_vertical, o.sum_vertical),
            sum_complete: m(self.sum_complete, o.sum_complete),
            sum_horizontal: m(self.sum_horizontal, o.sum_horizontal),
            scaled_vertical: m(self.scaled_vertical, o.scaled_vertical),
            scaled_complete: m(self.scaled_complete, o.scaled_complete),
            scaled_horizontal: m(self.scaled_horizontal, o.scaled_horizontal),
            vertical_on_vertical: m(self.vertical_on_vertical, o.vertical_on_vertical),
            complete_on_vertical: m(self.complete_on_vertical, o.complete_on_vertical),
            vertical_on_complete: m(self.vertical_on_complete, o.vertical_on_complete),
            complete_on_complete: m(self.complete_on_complete, o.complete_on_complete),
            horizontal_on_vertical: m(self.horizontal_on_vertical, o.horizontal_on_vertical),
        }
    }
}

/// Module and function identities for one (field, function) pair; the sum
/// identities are filled in by the caller.
fn pair_residuals(x: &FieldSpec, f: &FieldSpec, g: &Connection, p: &TangentPoint) -> Result<Prop21Residuals, Error> {
    let lift = |spec: &FieldSpec, kind| lift_field(spec, kind, g, p);
    let xv = lift(x, FieldLift::Vertical)?;
    let xc = lift(x, FieldLift::Complete)?;
    let xh = lift(x, FieldLift::Horizontal)?;
    let fv = lift_function(f, FieldLift::Vertical, p)?;
    let fc = lift_function(f, FieldLift::Complete, p)?;

    let fx = field_scaled(f, x)?;
    let scaled_vertical = lift(&fx, FieldLift::Vertical)?.distance(&xv.scale(fv));
    let rhs_c = xv.scale(fc).add(&xc.scale(fv));
    let scaled_complete = lift(&fx, FieldLift::Complete)?.distance(&rhs_c);
    let scaled_horizontal = lift(&fx, FieldLift::Horizontal)?.distance(&xh.scale(fv));

    let f_v = TangentScalar::Vertical(f.clone());
    let f_c = TangentScalar::Complete(f.clone());
    let xf = directional_derivative(x, f)?;
    let xf_v = lift_function(&xf, FieldLift::Vertical, p)?;
    let xf_c = lift_function(&xf, FieldLift::Complete, p)?;

    Ok(Prop21Residuals {
        sum_vertical: 0.0,
        sum_complete: 0.0,
        sum_horizontal: 0.0,
        scaled_vertical,
        scaled_complete,
        scaled_horizontal,
        vertical_on_vertical: apply_field(&xv, &f_v, p)?.abs(),
        complete_on_vertical: (apply_field(&xc, &f_v, p)? - xf_v).abs(),
        vertical_on_complete: (apply_field(&xv, &f_c, p)? - xf_v).abs(),
        complete_on_complete: (apply_field(&xc, &f_c, p)? - xf_c).abs(),
        horizontal_on_vertical: (apply_field(&xh, &f_v, p)? - xf_v).abs(),
    })
}

/// Absolute residuals of every identity at `p`. Module and function
/// identities are checked for both pairs `(X, f)` and `(Y, g)`; each
/// entry holds the larger of the two.
pub fn prop21_check(
    x: &FieldSpec,
    y: &FieldSpec,
    f: &FieldSpec,
    g_fn: &FieldSpec,
    conn: &Connection,
    p: &TangentPoint,
) -> Result<Prop21Residuals, Error> {
    let xy = field_sum(x, y)?;
    let mut sums = [0.0; 3];
    for (slot, kind) in sums.iter_mut().zip(FieldLift::ALL) {
        let lhs = lift_field(&xy, kind, conn, p)?;
        let rhs = lift_field(x, kind, conn, p)?.add(&lift_field(y, kind, conn, p)?);
        *slot = lhs.distance(&rhs);
    }
    let mut out = pair_residuals(x, f, conn, p)?.merge(pair_residuals(y, g_fn, conn, p)?);
    out.sum_vertical = sums[0];
    out.sum_complete = sums[1];
    out.sum_horizontal = sums[2];
    Ok(out)
}
