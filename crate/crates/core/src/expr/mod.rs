//! The small expression language used for curves and fields.
//!
//! Grammar (whitespace insignificant, `-` may also be written `−`):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' factor)?          exponent must fold to a constant
//! base   := number | var | func '(' expr ')' | '(' expr ')' | '-' factor
//! func   := sin | cos | tan | exp | log | sqrt | sinh | cosh
//! ```
//!
//! `-t^2` therefore reads as `-(t^2)`, and `t^2^3` as `t^(2^3)`.

mod diff;
mod eval;
pub(crate) mod files;
mod parse;
mod print;
pub mod random;

use std::fmt;

use thiserror::Error;

use crate::jet::JetError;

pub use files::{parse_curve_file, parse_field_file, CurveSpec, FieldKind, FieldSpec, FormatError, BASE_VARS};
pub use parse::parse_expr;
pub use print::format_number;

/// Byte range of a node in its source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Sinh,
        Func::Cosh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    /// Literals are nonnegative; negation is a separate node.
    Number(f64),
    Var(String),
    Neg(Box<ExprAst>),
    Binary(BinOp, Box<ExprAst>, Box<ExprAst>),
    /// Base raised to an exponent folded at parse time.
    Pow(Box<ExprAst>, f64),
    Call(Func, Box<ExprAst>),
}

/// Expression tree. Equality is structural and ignores source spans.
#[derive(Debug, Clone)]
pub struct ExprAst {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for ExprAst {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty_print())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("parse error at byte {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },
    #[error("unknown variable '{name}' at byte {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("unknown function '{name}' at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("variable '{name}' at byte {offset} has no binding")]
    Unbound { name: String, offset: usize },
    #[error("evaluation failed at bytes {}..{}: {source}", span.start, span.end)]
    Eval {
        span: Span,
        #[source]
        source: JetError,
    },
}

impl ExprAst {
    pub fn new(kind: ExprKind) -> Self {
        ExprAst { kind, span: Span::default() }
    }

    pub fn number(v: f64) -> Self {
        ExprAst::new(ExprKind::Number(v))
    }

    pub fn var(name: &str) -> Self {
        ExprAst::new(ExprKind::Var(name.to_string()))
    }

    pub fn neg(a: ExprAst) -> Self {
        ExprAst::new(ExprKind::Neg(Box::new(a)))
    }

    pub fn binary(op: BinOp, a: ExprAst, b: ExprAst) -> Self {
        ExprAst::new(ExprKind::Binary(op, Box::new(a), Box::new(b)))
    }

    pub fn pow(a: ExprAst, r: f64) -> Self {
        ExprAst::new(ExprKind::Pow(Box::new(a), r))
    }

    pub fn call(f: Func, a: ExprAst) -> Self {
        ExprAst::new(ExprKind::Call(f, Box::new(a)))
    }

    /// Replaces every variable with an expression; used to re-express a
    /// field in other coordinates. Spans of the substituted nodes are kept.
    pub fn substitute(&self, map: &dyn Fn(&str) -> Option<ExprAst>) -> ExprAst {
        let kind = match &self.kind {
            ExprKind::Number(v) => ExprKind::Number(*v),
            ExprKind::Var(n) => match map(n) {
                Some(e) => return e,
                None => ExprKind::Var(n.clone()),
            },
            ExprKind::Neg(a) => ExprKind::Neg(Box::new(a.substitute(map))),
            ExprKind::Binary(op, a, b) => {
                ExprKind::Binary(*op, Box::new(a.substitute(map)), Box::new(b.substitute(map)))
            }
            ExprKind::Pow(a, r) => ExprKind::Pow(Box::new(a.substitute(map)), *r),
            ExprKind::Call(f, a) => ExprKind::Call(*f, Box::new(a.substitute(map))),
        };
        ExprAst { kind, span: self.span }
    }

    /// Names of all variables referenced, in first-occurrence order.
    pub fn variables(&self) -> Vec<String> {
        fn walk(e: &ExprAst, out: &mut Vec<String>) {
            match &e.kind {
                ExprKind::Number(_) => {}
                ExprKind::Var(n) => {
                    if !out.contains(n) {
                        out.push(n.clone());
                    }
                }
                ExprKind::Neg(a) | ExprKind::Pow(a, _) | ExprKind::Call(_, a) => walk(a, out),
                ExprKind::Binary(_, a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn depth(&self) -> usize {
        match &self.kind {
            ExprKind::Number(_) | ExprKind::Var(_) => 1,
            ExprKind::Neg(a) | ExprKind::Pow(a, _) | ExprKind::Call(_, a) => 1 + a.depth(),
            ExprKind::Binary(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}
