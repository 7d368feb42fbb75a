use super::{BinOp, ExprAst, ExprError, ExprKind, Func, Span};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
}

fn lex(text: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < text.len() {
        let c = text[i..].chars().next().unwrap_or(' ');
        let start = i;
        let single = |tok| Token { tok, span: Span::new(start, start + c.len_utf8()) };
        match c {
            c if c.is_whitespace() => {
                i += c.len_utf8();
                continue;
            }
            '+' => out.push(single(Tok::Plus)),
            '-' | '\u{2212}' => out.push(single(Tok::Minus)),
            '*' => out.push(single(Tok::Star)),
            '/' => out.push(single(Tok::Slash)),
            '^' => out.push(single(Tok::Caret)),
            '(' => out.push(single(Tok::LParen)),
            ')' => out.push(single(Tok::RParen)),
            '0'..='9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j < bytes.len() && bytes[j] == b'.' {
                    j += 1;
                    let frac = j;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == frac {
                        return Err(ExprError::Parse { offset: j, expected: "digit".into() });
                    }
                }
                if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                    j += 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    let digits = j;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == digits {
                        return Err(ExprError::Parse {
                            offset: j,
                            expected: "exponent digits".into(),
                        });
                    }
                }
                let value: f64 = text[i..j].parse().map_err(|_| ExprError::Parse {
                    offset: i,
                    expected: "number".into(),
                })?;
                out.push(Token { tok: Tok::Num(value), span: Span::new(i, j) });
                i = j;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                out.push(Token { tok: Tok::Ident(text[i..j].to_string()), span: Span::new(i, j) });
                i = j;
                continue;
            }
            _ => {
                return Err(ExprError::Parse { offset: i, expected: "expression".into() });
            }
        }
        i += c.len_utf8();
    }
    out.push(Token { tok: Tok::End, span: Span::new(text.len(), text.len()) });
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    allowed: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ExprError> {
        Err(ExprError::Parse { offset: self.peek().span.start, expected: expected.to_string() })
    }

    fn expr(&mut self) -> Result<ExprAst, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            let span = Span::new(lhs.span.start, rhs.span.end);
            lhs = ExprAst { kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span };
        }
    }

    fn term(&mut self) -> Result<ExprAst, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            let span = Span::new(lhs.span.start, rhs.span.end);
            lhs = ExprAst { kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span };
        }
    }

    fn factor(&mut self) -> Result<ExprAst, ExprError> {
        let base = self.base()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let exp_start = self.peek().span.start;
        let exponent = self.factor()?;
        if !exponent.variables().is_empty() {
            return Err(ExprError::Parse { offset: exp_start, expected: "constant exponent".into() });
        }
        let value = exponent.eval_real(&[]);
        if !value.is_finite() {
            return Err(ExprError::Parse {
                offset: exp_start,
                expected: "finite constant exponent".into(),
            });
        }
        let span = Span::new(base.span.start, exponent.span.end);
        Ok(ExprAst { kind: ExprKind::Pow(Box::new(base), value), span })
    }

    fn base(&mut self) -> Result<ExprAst, ExprError> {
        let tok = self.peek().clone();
        match tok.tok {
            Tok::Num(v) => {
                self.bump();
                Ok(ExprAst { kind: ExprKind::Number(v), span: tok.span })
            }
            Tok::Minus => {
                self.bump();
                let inner = self.factor()?;
                let span = Span::new(tok.span.start, inner.span.end);
                Ok(ExprAst { kind: ExprKind::Neg(Box::new(inner)), span })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if self.peek().tok != Tok::RParen {
                    return self.fail("')'");
                }
                let close = self.bump();
                Ok(ExprAst { kind: inner.kind, span: Span::new(tok.span.start, close.span.end) })
            }
            Tok::Ident(name) => {
                self.bump();
                if self.peek().tok == Tok::LParen {
                    let func = Func::from_name(&name).ok_or_else(|| ExprError::UnknownFunction {
                        name: name.clone(),
                        offset: tok.span.start,
                    })?;
                    self.bump();
                    let arg = self.expr()?;
                    if self.peek().tok != Tok::RParen {
                        return self.fail("')'");
                    }
                    let close = self.bump();
                    return Ok(ExprAst {
                        kind: ExprKind::Call(func, Box::new(arg)),
                        span: Span::new(tok.span.start, close.span.end),
                    });
                }
                if Func::from_name(&name).is_some() {
                    return self.fail("'('");
                }
                if !self.allowed.contains(&name.as_str()) {
                    return Err(ExprError::UnknownVariable { name, offset: tok.span.start });
                }
                Ok(ExprAst { kind: ExprKind::Var(name), span: tok.span })
            }
            _ => self.fail("expression"),
        }
    }
}

/// Parses `text` into an expression over the variables in `allowed_vars`.
pub fn parse_expr(text: &str, allowed_vars: &[&str]) -> Result<ExprAst, ExprError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0, allowed: allowed_vars };
    let e = p.expr()?;
    if p.peek().tok != Tok::End {
        return p.fail("operator or end of input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_cosine() {
        let e = parse_expr("3*cos(t)", &["t"]).unwrap();
        let expected =
            ExprAst::binary(BinOp::Mul, ExprAst::number(3.0), ExprAst::call(Func::Cos, ExprAst::var("t")));
        assert_eq!(e, expected);
        assert_eq!(e.span, Span::new(0, 8));
    }

    #[test]
    fn unclosed_call() {
        assert_eq!(
            parse_expr("sin(", &["t"]),
            Err(ExprError::Parse { offset: 4, expected: "expression".into() })
        );
    }

    #[test]
    fn context_mismatch() {
        assert_eq!(
            parse_expr("x1*x2", &["t"]),
            Err(ExprError::UnknownVariable { name: "x1".into(), offset: 0 })
        );
    }

    #[test]
    fn unknown_function() {
        assert_eq!(
            parse_expr("2 + foo(t)", &["t"]),
            Err(ExprError::UnknownFunction { name: "foo".into(), offset: 4 })
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let t = || ExprAst::var("t");
        let n = ExprAst::number;
        assert_eq!(
            parse_expr("-t^2", &["t"]).unwrap(),
            ExprAst::neg(ExprAst::pow(t(), 2.0))
        );
        assert_eq!(
            parse_expr("1 - t - 2", &["t"]).unwrap(),
            ExprAst::binary(BinOp::Sub, ExprAst::binary(BinOp::Sub, n(1.0), t()), n(2.0))
        );
        assert_eq!(
            parse_expr("1 + t * 2", &["t"]).unwrap(),
            ExprAst::binary(BinOp::Add, n(1.0), ExprAst::binary(BinOp::Mul, t(), n(2.0)))
        );
        assert_eq!(parse_expr("t^2^3", &["t"]).unwrap(), ExprAst::pow(t(), 8.0));
        assert_eq!(parse_expr("t^(1/2)", &["t"]).unwrap(), ExprAst::pow(t(), 0.5));
        assert_eq!(parse_expr("t^-1", &["t"]).unwrap(), ExprAst::pow(t(), -1.0));
    }

    #[test]
    fn unicode_minus() {
        let a = parse_expr("1/(1−t)", &["t"]).unwrap();
        let b = parse_expr("1/(1-t)", &["t"]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn numbers() {
        for (s, v) in [("1", 1.0), ("0.5", 0.5), ("1e-3", 1e-3), ("2.5E+2", 250.0)] {
            assert_eq!(parse_expr(s, &[]).unwrap(), ExprAst::number(v));
        }
        assert!(matches!(parse_expr("1.", &[]), Err(ExprError::Parse { offset: 2, .. })));
        assert!(matches!(parse_expr("2e", &[]), Err(ExprError::Parse { offset: 2, .. })));
        assert!(matches!(parse_expr("0x10", &[]), Err(ExprError::UnknownVariable { .. }) | Err(ExprError::Parse { .. })));
    }

    #[test]
    fn non_constant_exponent() {
        assert_eq!(
            parse_expr("t^t", &["t"]),
            Err(ExprError::Parse { offset: 2, expected: "constant exponent".into() })
        );
        assert!(matches!(parse_expr("t^(1/0)", &["t"]), Err(ExprError::Parse { .. })));
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(parse_expr("(t", &["t"]), Err(ExprError::Parse { offset: 2, .. })));
        assert!(matches!(parse_expr("t t", &["t"]), Err(ExprError::Parse { offset: 2, .. })));
        assert!(matches!(parse_expr("sin t", &["t"]), Err(ExprError::Parse { offset: 4, .. })));
        assert!(matches!(parse_expr("", &["t"]), Err(ExprError::Parse { offset: 0, .. })));
        assert!(matches!(parse_expr("t $", &["t"]), Err(ExprError::Parse { offset: 2, .. })));
    }
}
