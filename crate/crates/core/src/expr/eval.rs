use super::{BinOp, ExprAst, ExprError, ExprKind, Func};
use crate::jet::{Jet, JetError};

fn lookup<'a, T>(bindings: &'a [(&str, T)], name: &str) -> Option<&'a T> {
    bindings.iter().find(|(n, _)| *n == name).map(|(_, v)| v)
}

impl ExprAst {
    /// Evaluates to a jet. The result order is the smallest order among the
    /// bindings (zero when there are none).
    pub fn eval_jet(&self, bindings: &[(&str, Jet)]) -> Result<Jet, ExprError> {
        let order = bindings.iter().map(|(_, j)| j.order()).min().unwrap_or(0);
        self.eval_jet_at(bindings, order)
    }

    fn eval_jet_at(&self, bindings: &[(&str, Jet)], order: usize) -> Result<Jet, ExprError> {
        let at = |source: JetError| ExprError::Eval { span: self.span, source };
        let out = match &self.kind {
            ExprKind::Number(v) => Jet::constant(*v, order),
            ExprKind::Var(name) => lookup(bindings, name)
                .map(|j| j.truncate(order))
                .ok_or_else(|| ExprError::Unbound { name: name.clone(), offset: self.span.start })?,
            ExprKind::Neg(a) => -a.eval_jet_at(bindings, order)?,
            ExprKind::Binary(op, a, b) => {
                let a = a.eval_jet_at(bindings, order)?;
                let b = b.eval_jet_at(bindings, order)?;
                match op {
                    BinOp::Add => &a + &b,
                    BinOp::Sub => &a - &b,
                    BinOp::Mul => &a * &b,
                    BinOp::Div => a.try_div(&b).map_err(at)?,
                }
            }
            ExprKind::Pow(a, r) => a.eval_jet_at(bindings, order)?.powf(*r).map_err(at)?,
            ExprKind::Call(f, a) => {
                let a = a.eval_jet_at(bindings, order)?;
                match f {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Tan => a.tan().map_err(at)?,
                    Func::Exp => a.exp().map_err(at)?,
                    Func::Log => a.ln().map_err(at)?,
                    Func::Sqrt => a.sqrt().map_err(at)?,
                    Func::Sinh => a.sinh_cosh().map_err(at)?.0,
                    Func::Cosh => a.sinh_cosh().map_err(at)?.1,
                }
            }
        };
        if !out.is_finite() {
            return Err(at(JetError::NonFinite("expression")));
        }
        Ok(out)
    }

    /// Plain floating-point evaluation with `std` functions.
    ///
    /// Out-of-domain arguments and unbound variables yield NaN. This path
    /// shares no code with the jet evaluator and serves as its check.
    pub fn eval_real(&self, bindings: &[(&str, f64)]) -> f64 {
        match &self.kind {
            ExprKind::Number(v) => *v,
            ExprKind::Var(name) => lookup(bindings, name).copied().unwrap_or(f64::NAN),
            ExprKind::Neg(a) => -a.eval_real(bindings),
            ExprKind::Binary(op, a, b) => {
                let (a, b) = (a.eval_real(bindings), b.eval_real(bindings));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                }
            }
            ExprKind::Pow(a, r) => {
                let a = a.eval_real(bindings);
                if r.fract() == 0.0 && r.abs() <= 64.0 {
                    a.powi(*r as i32)
                } else if a > 0.0 {
                    a.powf(*r)
                } else {
                    f64::NAN
                }
            }
            ExprKind::Call(f, a) => {
                let a = a.eval_real(bindings);
                match f {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Tan => a.tan(),
                    Func::Exp => a.exp(),
                    Func::Log if a > 0.0 => a.ln(),
                    Func::Sqrt if a > 0.0 => a.sqrt(),
                    Func::Log | Func::Sqrt => f64::NAN,
                    Func::Sinh => a.sinh(),
                    Func::Cosh => a.cosh(),
                }
            }
        }
    }
}
