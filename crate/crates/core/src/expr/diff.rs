use super::{BinOp, ExprAst, ExprKind, Func};

fn is_num(e: &ExprAst, v: f64) -> bool {
    matches!(e.kind, ExprKind::Number(x) if x == v)
}

fn signed(v: f64) -> ExprAst {
    if v.is_sign_negative() {
        ExprAst::neg(ExprAst::number(-v))
    } else {
        ExprAst::number(v)
    }
}

// Constructors that fold the trivial zeros and ones symbolic
// differentiation produces.

pub(crate) fn add(a: ExprAst, b: ExprAst) -> ExprAst {
    if is_num(&a, 0.0) {
        b
    } else if is_num(&b, 0.0) {
        a
    } else {
        ExprAst::binary(BinOp::Add, a, b)
    }
}

pub(crate) fn sub(a: ExprAst, b: ExprAst) -> ExprAst {
    if is_num(&b, 0.0) {
        a
    } else if is_num(&a, 0.0) {
        neg(b)
    } else {
        ExprAst::binary(BinOp::Sub, a, b)
    }
}

pub(crate) fn mul(a: ExprAst, b: ExprAst) -> ExprAst {
    if is_num(&a, 0.0) || is_num(&b, 0.0) {
        ExprAst::number(0.0)
    } else if is_num(&a, 1.0) {
        b
    } else if is_num(&b, 1.0) {
        a
    } else {
        ExprAst::binary(BinOp::Mul, a, b)
    }
}

pub(crate) fn div(a: ExprAst, b: ExprAst) -> ExprAst {
    if is_num(&a, 0.0) {
        ExprAst::number(0.0)
    } else if is_num(&b, 1.0) {
        a
    } else {
        ExprAst::binary(BinOp::Div, a, b)
    }
}

pub(crate) fn neg(a: ExprAst) -> ExprAst {
    match a.kind {
        ExprKind::Number(v) if v == 0.0 => ExprAst::number(0.0),
        ExprKind::Neg(inner) => *inner,
        _ => ExprAst::neg(a),
    }
}

impl ExprAst {
    /// Symbolic partial derivative with respect to `var`.
    pub fn derivative(&self, var: &str) -> ExprAst {
        match &self.kind {
            ExprKind::Number(_) => ExprAst::number(0.0),
            ExprKind::Var(n) => ExprAst::number(if n == var { 1.0 } else { 0.0 }),
            ExprKind::Neg(a) => neg(a.derivative(var)),
            ExprKind::Binary(op, a, b) => {
                let (da, db) = (a.derivative(var), b.derivative(var));
                let (a, b) = ((**a).clone(), (**b).clone());
                match op {
                    BinOp::Add => add(da, db),
                    BinOp::Sub => sub(da, db),
                    BinOp::Mul => add(mul(da, b.clone()), mul(a, db)),
                    BinOp::Div => sub(
                        div(da, b.clone()),
                        div(mul(a, db), ExprAst::pow(b, 2.0)),
                    ),
                }
            }
            ExprKind::Pow(a, r) => {
                let da = a.derivative(var);
                if is_num(&da, 0.0) {
                    return ExprAst::number(0.0);
                }
                let reduced = if *r - 1.0 == 1.0 {
                    (**a).clone()
                } else if *r - 1.0 == 0.0 {
                    ExprAst::number(1.0)
                } else {
                    ExprAst::pow((**a).clone(), r - 1.0)
                };
                mul(mul(signed(*r), reduced), da)
            }
            ExprKind::Call(f, a) => {
                let da = a.derivative(var);
                if is_num(&da, 0.0) {
                    return ExprAst::number(0.0);
                }
                let a = (**a).clone();
                let outer = match f {
                    Func::Sin => ExprAst::call(Func::Cos, a),
                    Func::Cos => neg(ExprAst::call(Func::Sin, a)),
                    Func::Tan => div(ExprAst::number(1.0), ExprAst::pow(ExprAst::call(Func::Cos, a), 2.0)),
                    Func::Exp => ExprAst::call(Func::Exp, a),
                    Func::Log => div(ExprAst::number(1.0), a),
                    Func::Sqrt => div(
                        ExprAst::number(1.0),
                        mul(ExprAst::number(2.0), ExprAst::call(Func::Sqrt, a)),
                    ),
                    Func::Sinh => ExprAst::call(Func::Cosh, a),
                    Func::Cosh => ExprAst::call(Func::Sinh, a),
                };
                mul(outer, da)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_expr;
    use crate::jet::Jet;

    #[test]
    fn symbolic_matches_jet_partials() {
        let vars = ["x1", "x2", "x3"];
        let cases = [
            "x1*x2 + x3^3",
            "sin(x1*x2)/(2 + cos(x3))",
            "exp(-x1^2) * sqrt(1 + x2^2) - log(3 + x3)",
            "tan(x1/5) + sinh(x2) * cosh(x3) - x1/x2",
            "(x1 + x2)^-2 + (1 + x3^2)^0.5",
        ];
        let at = [0.7, -1.3, 0.4];
        for src in cases {
            let e = parse_expr(src, &vars).unwrap();
            for (i, v) in vars.iter().enumerate() {
                let d = e.derivative(v);
                let symbolic = d.eval_real(&[("x1", at[0]), ("x2", at[1]), ("x3", at[2])]);
                let bindings: Vec<(&str, Jet)> = vars
                    .iter()
                    .enumerate()
                    .map(|(k, n)| {
                        let j = if k == i { Jet::var(at[k], 1) } else { Jet::constant(at[k], 1) };
                        (*n, j)
                    })
                    .collect();
                let jet = e.eval_jet(&bindings).unwrap().coeffs()[1];
                assert!((symbolic - jet).abs() < 1e-13 * jet.abs().max(1.0), "{src} d/{v}: {symbolic} vs {jet}");
            }
        }
    }

    #[test]
    fn constants_fold_away() {
        let e = parse_expr("3*x1 + 7", &["x1", "x2"]).unwrap();
        assert_eq!(e.derivative("x1").pretty_print(), "3");
        assert_eq!(e.derivative("x2").pretty_print(), "0");
    }
}
