//! Random expression generators for property checks.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{BinOp, ExprAst, Func};

const LITERALS: [f64; 10] = [0.0, 1.0, 2.0, 3.0, 0.5, 0.25, 1e-3, 12.75, 6.02e23, 2.5e-7];

fn literal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.gen_bool(0.5) {
        *LITERALS.choose(rng).expect("non-empty")
    } else {
        rng.gen_range(0.0..100.0)
    }
}

fn exponent<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    match rng.gen_range(0..4) {
        0 => rng.gen_range(-4..=4) as f64,
        1 => rng.gen_range(-3.0..3.0),
        2 => 0.5,
        _ => 2.0,
    }
}

/// Any syntactically valid tree of depth at most `max_depth`, with
/// variables drawn from `vars`.
pub fn random_ast<R: Rng + ?Sized>(rng: &mut R, vars: &[&str], max_depth: usize) -> ExprAst {
    if max_depth <= 1 || rng.gen_bool(0.2) {
        return if vars.is_empty() || rng.gen_bool(0.4) {
            ExprAst::number(literal(rng))
        } else {
            ExprAst::var(vars.choose(rng).expect("non-empty"))
        };
    }
    let d = max_depth - 1;
    match rng.gen_range(0..10) {
        0 => ExprAst::neg(random_ast(rng, vars, d)),
        1 => ExprAst::pow(random_ast(rng, vars, d), exponent(rng)),
        2 | 3 => {
            let f = *Func::ALL.choose(rng).expect("non-empty");
            ExprAst::call(f, random_ast(rng, vars, d))
        }
        k => {
            let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div][k % 4];
            ExprAst::binary(op, random_ast(rng, vars, d), random_ast(rng, vars, d))
        }
    }
}

fn coefficient<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    (rng.gen_range(-8..=8) as f64) * 0.25
}

fn scaled(c: f64, e: ExprAst) -> ExprAst {
    let mag = ExprAst::binary(BinOp::Mul, ExprAst::number(c.abs()), e);
    if c < 0.0 {
        ExprAst::neg(mag)
    } else {
        mag
    }
}

/// A smooth composite of polynomial, trigonometric, exponential and
/// logarithmic pieces in `t`, defined for every real `t` and of moderate
/// size on `[-2, 2]`.
pub fn random_composite<R: Rng + ?Sized>(rng: &mut R, max_depth: usize) -> ExprAst {
    let t = || ExprAst::var("t");
    if max_depth <= 1 || rng.gen_bool(0.15) {
        let c = coefficient(rng);
        let shift = rng.gen_range(-1.0..1.0_f64);
        return ExprAst::binary(BinOp::Add, scaled(if c == 0.0 { 1.0 } else { c }, t()), ExprAst::number(shift.abs()));
    }
    let d = max_depth - 1;
    let sub = |rng: &mut R| random_composite(rng, d);
    match rng.gen_range(0..10) {
        0 => ExprAst::call(Func::Sin, sub(rng)),
        1 => ExprAst::call(Func::Cos, sub(rng)),
        2 => ExprAst::call(Func::Exp, ExprAst::call(Func::Sin, sub(rng))),
        3 => ExprAst::binary(BinOp::Add, sub(rng), sub(rng)),
        4 => ExprAst::binary(
            BinOp::Mul,
            ExprAst::call(Func::Cos, sub(rng)),
            sub(rng),
        ),
        5 => ExprAst::call(
            Func::Sqrt,
            ExprAst::binary(BinOp::Add, ExprAst::number(1.0), ExprAst::pow(sub(rng), 2.0)),
        ),
        6 => ExprAst::call(
            Func::Log,
            ExprAst::binary(BinOp::Add, ExprAst::number(2.0), ExprAst::call(Func::Sin, sub(rng))),
        ),
        7 => ExprAst::binary(
            BinOp::Div,
            sub(rng),
            ExprAst::binary(BinOp::Add, ExprAst::number(2.0), ExprAst::call(Func::Cos, sub(rng))),
        ),
        8 => ExprAst::pow(ExprAst::call(Func::Sin, sub(rng)), rng.gen_range(2..=3) as f64),
        _ => ExprAst::call(Func::Sinh, ExprAst::call(Func::Cos, sub(rng))),
    }
}

/// Sum of up to four monomials of degree at most two in each of `vars`,
/// with quarter-integer coefficients.
pub fn random_polynomial<R: Rng + ?Sized>(rng: &mut R, vars: &[&str]) -> ExprAst {
    let terms = rng.gen_range(1..=4);
    let mut acc: Option<ExprAst> = None;
    for _ in 0..terms {
        let mut mono = ExprAst::number(coefficient(rng).abs().max(0.25));
        for v in vars {
            match rng.gen_range(0..4) {
                1 => mono = ExprAst::binary(BinOp::Mul, mono, ExprAst::var(v)),
                2 => mono = ExprAst::binary(BinOp::Mul, mono, ExprAst::pow(ExprAst::var(v), 2.0)),
                _ => {}
            }
        }
        acc = Some(match acc {
            None => mono,
            Some(a) if rng.gen_bool(0.5) => ExprAst::binary(BinOp::Sub, a, mono),
            Some(a) => ExprAst::binary(BinOp::Add, a, mono),
        });
    }
    acc.expect("at least one term")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn depth_is_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            assert!(random_ast(&mut rng, &["t"], 6).depth() <= 6);
        }
    }

    #[test]
    fn composites_are_finite_on_the_sample_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let e = random_composite(&mut rng, 4);
            for t in [-2.0, -0.5, 0.0, 1.3, 2.0] {
                assert!(e.eval_real(&[("t", t)]).is_finite(), "{e}");
            }
        }
    }
}
