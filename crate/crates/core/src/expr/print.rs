use super::{BinOp, ExprAst, ExprKind};

// Binding levels: sums < products < negation < powers < atoms.
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const NEG: u8 = 3;
const POW: u8 = 4;
const ATOM: u8 = 5;

/// Shortest decimal that parses back to `v` exactly; exponent notation
/// outside `[1e-4, 1e16)`.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-4..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn level(e: &ExprAst) -> u8 {
    match &e.kind {
        ExprKind::Number(v) if v.is_sign_negative() => NEG,
        ExprKind::Number(_) | ExprKind::Var(_) | ExprKind::Call(..) => ATOM,
        ExprKind::Neg(_) => NEG,
        ExprKind::Pow(..) => POW,
        ExprKind::Binary(BinOp::Add | BinOp::Sub, ..) => SUM,
        ExprKind::Binary(BinOp::Mul | BinOp::Div, ..) => PRODUCT,
    }
}

fn write_wrapped(e: &ExprAst, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
        write(e, out);
        out.push(')');
    } else {
        write(e, out);
    }
}

fn write(e: &ExprAst, out: &mut String) {
    match &e.kind {
        ExprKind::Number(v) => {
            if v.is_sign_negative() {
                // only reachable for programmatically built trees
                out.push_str("(-");
                out.push_str(&format_number(-v));
                out.push(')');
            } else {
                out.push_str(&format_number(*v));
            }
        }
        ExprKind::Var(n) => out.push_str(n),
        ExprKind::Neg(a) => {
            out.push('-');
            write_wrapped(a, level(a) < NEG, out);
        }
        ExprKind::Binary(op, a, b) => {
            let p = level(e);
            write_wrapped(a, level(a) < p, out);
            out.push(op.symbol());
            write_wrapped(b, level(b) <= p, out);
        }
        ExprKind::Pow(a, r) => {
            write_wrapped(a, level(a) < ATOM, out);
            out.push('^');
            if r.is_sign_negative() {
                out.push('-');
            }
            out.push_str(&format_number(r.abs()));
        }
        ExprKind::Call(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write(a, out);
            out.push(')');
        }
    }
}

impl ExprAst {
    /// Canonical text with minimal parentheses; parses back to an equal tree.
    pub fn pretty_print(&self) -> String {
        let mut out = String::new();
        write(self, &mut out);
        out
    }
}
