//! Truncated Taylor arithmetic in one variable.
//!
//! A [`Jet`] of order `K` stores the normalized Taylor coefficients
//! `c_k = f^(k)(t0) / k!` for `k = 0..=K`. Arithmetic on jets propagates
//! these coefficients exactly (up to rounding), so derivatives of any
//! expression built from jets come out without step-size error.
//!
//! Binary operations on jets of different orders truncate to the smaller
//! order: the higher coefficients of the result are not determined by the
//! inputs.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Denominators with `|c0|` below this are treated as zero.
pub const DIVISION_FLOOR: f64 = 1e-300;

/// Default truncation order for curve evaluation.
pub const DEFAULT_ORDER: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("division by a jet with zero constant term")]
    DivisionByZero,
    #[error("{func} is undefined at {value}")]
    Domain { func: &'static str, value: f64 },
    #[error("derivative of order {k} requested from a jet of order {order}")]
    OrderExceeded { k: usize, order: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("cannot normalize a vector of (near) zero length")]
    ZeroNorm,
    #[error("vector {0} is linearly dependent on its predecessors")]
    RankDeficient(usize),
    #[error("non-finite Taylor coefficient produced by {0}")]
    NonFinite(&'static str),
}

/// Truncated Taylor expansion of a scalar function of one variable.
#[derive(Clone, PartialEq)]
pub struct Jet {
    coeffs: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet{:?}", self.coeffs)
    }
}

impl Jet {
    /// Jet of the identity function `t ↦ t` about `t0`.
    pub fn var(t0: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = t0;
        if order >= 1 {
            coeffs[1] = 1.0;
        }
        Jet { coeffs }
    }

    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Jet { coeffs }
    }

    /// Builds a jet from normalized Taylor coefficients.
    ///
    /// Panics if `coeffs` is empty.
    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Jet { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// The `k`-th derivative, `k! * c_k`.
    pub fn derivative(&self, k: usize) -> Result<f64, JetError> {
        if k > self.order() {
            return Err(JetError::OrderExceeded { k, order: self.order() });
        }
        let factorial: f64 = (1..=k).map(|i| i as f64).product();
        Ok(factorial * self.coeffs[k])
    }

    /// Jet of the derivative function, one order lower.
    ///
    /// A zeroth-order jet differentiates to the zero jet of order zero
    /// (the derivative is unknown, not zero; callers must track orders).
    pub fn differentiate(&self) -> Jet {
        if self.coeffs.len() == 1 {
            return Jet::constant(0.0, 0);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(k, c)| (k + 1) as f64 * c)
            .collect();
        Jet { coeffs }
    }

    pub fn truncate(&self, order: usize) -> Jet {
        let order = order.min(self.order());
        Jet { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add_scalar(&self, s: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    /// Evaluates the truncated polynomial at offset `h` from the expansion point.
    pub fn eval_at(&self, h: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * h + c)
    }

    pub fn try_div(&self, rhs: &Jet) -> Result<Jet, JetError> {
        let b = &rhs.coeffs;
        if b[0].abs() < DIVISION_FLOOR {
            return Err(JetError::DivisionByZero);
        }
        let n = self.order().min(rhs.order());
        let a = &self.coeffs;
        let mut q = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut s = a[k];
            for j in 1..=k {
                s -= b[j] * q[k - j];
            }
            q.push(s / b[0]);
        }
        finite(Jet { coeffs: q }, "division")
    }

    pub fn recip(&self) -> Result<Jet, JetError> {
        Jet::constant(1.0, self.order()).try_div(self)
    }

    pub fn exp(&self) -> Result<Jet, JetError> {
        let a = &self.coeffs;
        let mut b = Vec::with_capacity(a.len());
        b.push(a[0].exp());
        for k in 1..a.len() {
            let s: f64 = (1..=k).map(|j| j as f64 * a[j] * b[k - j]).sum();
            b.push(s / k as f64);
        }
        finite(Jet { coeffs: b }, "exp")
    }

    pub fn ln(&self) -> Result<Jet, JetError> {
        let a = &self.coeffs;
        if !(a[0] > 0.0) {
            return Err(JetError::Domain { func: "log", value: a[0] });
        }
        let mut b = Vec::with_capacity(a.len());
        b.push(a[0].ln());
        for k in 1..a.len() {
            let s: f64 = (1..k).map(|j| j as f64 * b[j] * a[k - j]).sum();
            b.push((a[k] - s / k as f64) / a[0]);
        }
        finite(Jet { coeffs: b }, "log")
    }

    pub fn sqrt(&self) -> Result<Jet, JetError> {
        let a = &self.coeffs;
        if !(a[0] > 0.0) {
            return Err(JetError::Domain { func: "sqrt", value: a[0] });
        }
        let mut b = Vec::with_capacity(a.len());
        b.push(a[0].sqrt());
        for k in 1..a.len() {
            let s: f64 = (1..k).map(|j| b[j] * b[k - j]).sum();
            b.push((a[k] - s) / (2.0 * b[0]));
        }
        finite(Jet { coeffs: b }, "sqrt")
    }

    /// Sine and cosine together; their recurrences are coupled.
    pub fn sin_cos(&self) -> (Jet, Jet) {
        let a = &self.coeffs;
        let mut s = Vec::with_capacity(a.len());
        let mut c = Vec::with_capacity(a.len());
        s.push(a[0].sin());
        c.push(a[0].cos());
        for k in 1..a.len() {
            let (mut ds, mut dc) = (0.0, 0.0);
            for j in 1..=k {
                let ja = j as f64 * a[j];
                ds += ja * c[k - j];
                dc -= ja * s[k - j];
            }
            s.push(ds / k as f64);
            c.push(dc / k as f64);
        }
        (Jet { coeffs: s }, Jet { coeffs: c })
    }

    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    pub fn tan(&self) -> Result<Jet, JetError> {
        let (s, c) = self.sin_cos();
        if c.value().abs() < 1e-15 {
            return Err(JetError::Domain { func: "tan", value: self.value() });
        }
        s.try_div(&c).map_err(|_| JetError::Domain { func: "tan", value: self.value() })
    }

    pub fn sinh_cosh(&self) -> Result<(Jet, Jet), JetError> {
        let a = &self.coeffs;
        let mut sh = Vec::with_capacity(a.len());
        let mut ch = Vec::with_capacity(a.len());
        sh.push(a[0].sinh());
        ch.push(a[0].cosh());
        for k in 1..a.len() {
            let (mut ds, mut dc) = (0.0, 0.0);
            for j in 1..=k {
                let ja = j as f64 * a[j];
                ds += ja * ch[k - j];
                dc += ja * sh[k - j];
            }
            sh.push(ds / k as f64);
            ch.push(dc / k as f64);
        }
        let sh = finite(Jet { coeffs: sh }, "sinh")?;
        let ch = finite(Jet { coeffs: ch }, "cosh")?;
        Ok((sh, ch))
    }

    /// `self^r` for a constant real exponent.
    ///
    /// Integer exponents accept any base (negative powers need a nonzero
    /// base); fractional exponents need a positive base.
    pub fn powf(&self, r: f64) -> Result<Jet, JetError> {
        if r == 0.0 {
            return Ok(Jet::constant(1.0, self.order()));
        }
        if r.fract() == 0.0 && r.abs() <= 64.0 {
            let p = self.powi(r.abs() as u32);
            return if r < 0.0 { p.recip() } else { finite(p, "pow") };
        }
        let a = &self.coeffs;
        if !(a[0] > 0.0) {
            return Err(JetError::Domain { func: "pow", value: a[0] });
        }
        let mut b = Vec::with_capacity(a.len());
        b.push(a[0].powf(r));
        for k in 1..a.len() {
            let s: f64 = (1..=k)
                .map(|j| (r * j as f64 - (k - j) as f64) * a[j] * b[k - j])
                .sum();
            b.push(s / (k as f64 * a[0]));
        }
        finite(Jet { coeffs: b }, "pow")
    }

    fn powi(&self, mut n: u32) -> Jet {
        let mut base = self.clone();
        let mut acc = Jet::constant(1.0, self.order());
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

fn finite(j: Jet, op: &'static str) -> Result<Jet, JetError> {
    if j.is_finite() {
        Ok(j)
    } else {
        Err(JetError::NonFinite(op))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Applies a binary arithmetic operation to two jets.
pub fn jet_arith(a: &Jet, b: &Jet, op: ArithOp) -> Result<Jet, JetError> {
    match op {
        ArithOp::Add => Ok(a + b),
        ArithOp::Sub => Ok(a - b),
        ArithOp::Mul => Ok(a * b),
        ArithOp::Div => a.try_div(b),
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let n = self.order().min(rhs.order());
        Jet { coeffs: (0..=n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect() }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let n = self.order().min(rhs.order());
        Jet { coeffs: (0..=n).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect() }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let n = self.order().min(rhs.order());
        let (a, b) = (&self.coeffs, &rhs.coeffs);
        let coeffs = (0..=n)
            .map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum())
            .collect();
        Jet { coeffs }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}
