//! Line-oriented `key = value` files describing curves and fields.
//!
//! ```text
//! # a circular helix
//! name = helix345
//! x1 = 3*cos(t)
//! x2 = 3*sin(t)
//! x3 = 4*t
//! t_min = 0
//! t_max = 6.283185307
//! ```
//!
//! Field files use the keys `f` (scalar) or `X1`, `X2`, `X3` (vector),
//! written over `x1`, `x2`, `x3`.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{parse_expr, ExprAst};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    /// 1-based line number; 0 when the problem concerns the whole file.
    pub line: usize,
    pub message: String,
}

impl FormatError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        FormatError { line, message: message.into() }
    }
}

/// Key/value pairs with the line each came from.
pub(crate) fn read_entries(text: &str) -> Result<BTreeMap<String, (usize, String)>, FormatError> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| FormatError::new(line_no, "expected 'key = value'"))?;
        let key = key.split_whitespace().collect::<Vec<_>>().join(" ");
        let value = value.trim().to_string();
        if key.is_empty() {
            return Err(FormatError::new(line_no, "missing key"));
        }
        if value.is_empty() {
            return Err(FormatError::new(line_no, format!("missing value for '{key}'")));
        }
        if map.insert(key.clone(), (line_no, value)).is_some() {
            return Err(FormatError::new(line_no, format!("duplicate key '{key}'")));
        }
    }
    Ok(map)
}

fn expr_entry(line: usize, text: &str, vars: &[&str]) -> Result<ExprAst, FormatError> {
    parse_expr(text, vars).map_err(|e| FormatError::new(line, e.to_string()))
}

fn constant_entry(line: usize, key: &str, text: &str) -> Result<f64, FormatError> {
    let v = expr_entry(line, text, &[])?.eval_real(&[]);
    if !v.is_finite() {
        return Err(FormatError::new(line, format!("'{key}' must be finite")));
    }
    Ok(v)
}

/// A parametric curve `t ↦ (x1(t), x2(t), x3(t))` on a closed interval.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub name: String,
    pub components: [ExprAst; 3],
    pub t_min: f64,
    pub t_max: f64,
}

impl CurveSpec {
    /// Parses three component expressions in `t`.
    pub fn new(name: &str, components: [&str; 3], t_min: f64, t_max: f64) -> Result<Self, FormatError> {
        if !(t_min.is_finite() && t_max.is_finite() && t_min < t_max) {
            return Err(FormatError::new(0, format!("invalid domain [{t_min}, {t_max}]")));
        }
        let mut parsed = Vec::with_capacity(3);
        for c in components {
            parsed.push(expr_entry(0, c, &["t"])?);
        }
        let components: [ExprAst; 3] = parsed.try_into().expect("three components");
        Ok(CurveSpec { name: name.to_string(), components, t_min, t_max })
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.t_min && t <= self.t_max
    }

    /// `n` uniformly spaced parameters covering the domain, endpoints included.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        uniform_grid(self.t_min, self.t_max, n)
    }
}

pub(crate) fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| if i == n - 1 { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

pub fn parse_curve_file(text: &str) -> Result<CurveSpec, FormatError> {
    let mut entries = read_entries(text)?;
    let mut take = |key: &str| {
        entries
            .remove(key)
            .ok_or_else(|| FormatError::new(0, format!("missing key '{key}'")))
    };
    let (_, name) = take("name")?;
    let mut comps = Vec::with_capacity(3);
    for key in ["x1", "x2", "x3"] {
        let (line, text) = take(key)?;
        comps.push(expr_entry(line, &text, &["t"])?);
    }
    let (lmin, tmin) = take("t_min")?;
    let (lmax, tmax) = take("t_max")?;
    let t_min = constant_entry(lmin, "t_min", &tmin)?;
    let t_max = constant_entry(lmax, "t_max", &tmax)?;
    if let Some((key, (line, _))) = entries.into_iter().next() {
        let msg = if key.starts_with('x') {
            format!("a curve has exactly 3 components; unexpected '{key}'")
        } else {
            format!("unknown key '{key}'")
        };
        return Err(FormatError::new(line, msg));
    }
    if t_min >= t_max {
        return Err(FormatError::new(lmax, format!("empty domain: t_min = {t_min} is not below t_max = {t_max}")));
    }
    Ok(CurveSpec {
        name,
        components: comps.try_into().expect("three components"),
        t_min,
        t_max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Scalar,
    Vector,
}

/// A scalar function or vector field on R³ in coordinates `x1, x2, x3`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpec {
    pub name: String,
    pub kind: FieldKind,
    pub components: Vec<ExprAst>,
}

pub const BASE_VARS: [&str; 3] = ["x1", "x2", "x3"];

impl FieldSpec {
    pub fn scalar(f: ExprAst) -> Self {
        FieldSpec { name: String::new(), kind: FieldKind::Scalar, components: vec![f] }
    }

    pub fn vector(components: [ExprAst; 3]) -> Self {
        FieldSpec { name: String::new(), kind: FieldKind::Vector, components: components.to_vec() }
    }

    pub fn parse_scalar(f: &str) -> Result<Self, FormatError> {
        Ok(FieldSpec::scalar(expr_entry(0, f, &BASE_VARS)?))
    }

    pub fn parse_vector(components: [&str; 3]) -> Result<Self, FormatError> {
        let mut parsed = Vec::with_capacity(3);
        for c in components {
            parsed.push(expr_entry(0, c, &BASE_VARS)?);
        }
        Ok(FieldSpec::vector(parsed.try_into().expect("three components")))
    }
}

pub fn parse_field_file(text: &str) -> Result<FieldSpec, FormatError> {
    let mut entries = read_entries(text)?;
    let name = entries.remove("name").map(|(_, v)| v).unwrap_or_default();
    let spec = if let Some((line, f)) = entries.remove("f") {
        FieldSpec { name, kind: FieldKind::Scalar, components: vec![expr_entry(line, &f, &BASE_VARS)?] }
    } else {
        let mut comps = Vec::with_capacity(3);
        for key in ["X1", "X2", "X3"] {
            let (line, text) = entries
                .remove(key)
                .ok_or_else(|| FormatError::new(0, format!("missing key '{key}' (or 'f' for a scalar)")))?;
            comps.push(expr_entry(line, &text, &BASE_VARS)?);
        }
        FieldSpec { name, kind: FieldKind::Vector, components: comps }
    };
    if let Some((key, (line, _))) = entries.into_iter().next() {
        return Err(FormatError::new(line, format!("unexpected key '{key}'")));
    }
    Ok(spec)
}
