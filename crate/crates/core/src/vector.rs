//! Jet-valued vectors in R³ and R⁶, plus plain real-vector helpers.

use crate::jet::{Jet, JetError};

/// Norms whose constant term falls below this cannot be normalized.
pub const ZERO_NORM_FLOOR: f64 = 1e-12;

/// A vector whose entries are jets of a common order.
#[derive(Debug, Clone, PartialEq)]
pub struct JetVec {
    entries: Vec<Jet>,
}

impl JetVec {
    /// Panics if `entries` is empty; mixed orders are truncated to the
    /// smallest one.
    pub fn new(entries: Vec<Jet>) -> Self {
        assert!(!entries.is_empty(), "a jet vector needs at least one entry");
        let order = entries.iter().map(Jet::order).min().unwrap_or(0);
        let entries = entries.into_iter().map(|e| e.truncate(order)).collect();
        JetVec { entries }
    }

    pub fn constant(values: &[f64], order: usize) -> Self {
        JetVec::new(values.iter().map(|&v| Jet::constant(v, order)).collect())
    }

    pub fn zeros(dim: usize, order: usize) -> Self {
        JetVec::new(vec![Jet::constant(0.0, order); dim])
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn order(&self) -> usize {
        self.entries[0].order()
    }

    pub fn entries(&self) -> &[Jet] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Jet {
        &self.entries[i]
    }

    /// Value parts of each entry.
    pub fn value(&self) -> Vec<f64> {
        self.entries.iter().map(Jet::value).collect()
    }

    pub fn differentiate(&self) -> JetVec {
        JetVec::new(self.entries.iter().map(Jet::differentiate).collect())
    }

    pub fn truncate(&self, order: usize) -> JetVec {
        JetVec::new(self.entries.iter().map(|e| e.truncate(order)).collect())
    }

    /// Concatenates two vectors, e.g. base and fiber parts of a point of TR³.
    pub fn concat(&self, other: &JetVec) -> JetVec {
        JetVec::new(self.entries.iter().chain(other.entries.iter()).cloned().collect())
    }

    pub fn split_at(&self, mid: usize) -> (JetVec, JetVec) {
        let (a, b) = self.entries.split_at(mid);
        (JetVec::new(a.to_vec()), JetVec::new(b.to_vec()))
    }

    fn check_dim(&self, other: &JetVec) -> Result<(), JetError> {
        if self.dim() != other.dim() {
            return Err(JetError::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(())
    }

    pub fn dot(&self, other: &JetVec) -> Result<Jet, JetError> {
        self.check_dim(other)?;
        let mut acc = &self.entries[0] * &other.entries[0];
        for (a, b) in self.entries.iter().zip(&other.entries).skip(1) {
            acc = &acc + &(a * b);
        }
        Ok(acc)
    }

    pub fn cross(&self, other: &JetVec) -> Result<JetVec, JetError> {
        self.check_dim(other)?;
        if self.dim() != 3 {
            return Err(JetError::DimensionMismatch { left: self.dim(), right: 3 });
        }
        let (a, b) = (&self.entries, &other.entries);
        Ok(JetVec::new(vec![
            &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
            &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
            &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
        ]))
    }

    pub fn norm(&self) -> Result<Jet, JetError> {
        let sq = self.dot(self)?;
        if sq.value().sqrt() < ZERO_NORM_FLOOR {
            return Err(JetError::ZeroNorm);
        }
        sq.sqrt()
    }

    /// Multiplies every entry by a jet-valued factor.
    pub fn scale(&self, s: &Jet) -> JetVec {
        JetVec::new(self.entries.iter().map(|e| e * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> JetVec {
        JetVec::new(self.entries.iter().map(|e| e.scale(s)).collect())
    }

    pub fn add(&self, other: &JetVec) -> Result<JetVec, JetError> {
        self.check_dim(other)?;
        Ok(JetVec::new(self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &JetVec) -> Result<JetVec, JetError> {
        self.check_dim(other)?;
        Ok(JetVec::new(self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect()))
    }

    pub fn normalized(&self) -> Result<JetVec, JetError> {
        let inv = self.norm()?.recip()?;
        Ok(self.scale(&inv))
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `a + s * b`
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

/// Largest `|G_ij - δ_ij|` over the Gram matrix of `vs`.
pub fn orthonormality_defect(vs: &[Vec<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in vs.iter().enumerate() {
        for (j, b) in vs.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot(a, b) - target).abs());
        }
    }
    worst
}

/// Orthonormalizes real vectors in order, preserving the flag they span.
///
/// Each vector is projected against its accepted predecessors twice
/// (modified Gram–Schmidt with one reorthogonalization pass). A vector
/// whose residual norm drops below `tol` is reported as
/// [`JetError::RankDeficient`] with its index.
pub fn gram_schmidt(vs: &[Vec<f64>], tol: f64) -> Result<Vec<Vec<f64>>, JetError> {
    let Some(first) = vs.first() else {
        return Ok(Vec::new());
    };
    let dim = first.len();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(vs.len());
    for (idx, v) in vs.iter().enumerate() {
        if v.len() != dim {
            return Err(JetError::DimensionMismatch { left: dim, right: v.len() });
        }
        let mut u = v.clone();
        for _ in 0..2 {
            for e in &out {
                let c = dot(&u, e);
                u = axpy(&u, -c, e);
            }
        }
        let n = norm(&u);
        if !(n >= tol) {
            return Err(JetError::RankDeficient(idx));
        }
        out.push(u.iter().map(|x| x / n).collect());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_vector_algebra() {
        let a = JetVec::constant(&[1.0, 2.0, 3.0], 2);
        let b = JetVec::constant(&[4.0, 5.0, 6.0], 2);
        assert_eq!(a.dot(&b).unwrap().value(), 32.0);
        let e1 = JetVec::constant(&[1.0, 0.0, 0.0], 1);
        let e2 = JetVec::constant(&[0.0, 1.0, 0.0], 1);
        assert_eq!(e1.cross(&e2).unwrap().value(), vec![0.0, 0.0, 1.0]);
        let v = JetVec::constant(&[0.0, 3.0, 4.0], 1);
        assert_eq!(v.norm().unwrap().value(), 5.0);
    }

    #[test]
    fn dimension_checks() {
        let a = JetVec::constant(&[1.0; 3], 1);
        let b = JetVec::constant(&[1.0; 6], 1);
        assert!(matches!(a.dot(&b), Err(JetError::DimensionMismatch { .. })));
        assert!(matches!(b.cross(&b), Err(JetError::DimensionMismatch { .. })));
    }

    #[test]
    fn zero_norm_is_rejected() {
        let z = JetVec::zeros(3, 2);
        assert_eq!(z.norm(), Err(JetError::ZeroNorm));
        assert_eq!(z.normalized(), Err(JetError::ZeroNorm));
    }

    #[test]
    fn gram_schmidt_examples() {
        let g = gram_schmidt(&[vec![1.0, 0.0, 0.0], vec![1.0, 1.0, 0.0]], 1e-12).unwrap();
        assert_eq!(g, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
        let g = gram_schmidt(&[vec![2.0, 0.0, 0.0]], 1e-12).unwrap();
        assert_eq!(g, vec![vec![1.0, 0.0, 0.0]]);
        let e = gram_schmidt(&[vec![1.0, 0.0, 0.0], vec![2.0, 0.0, 0.0]], 1e-12);
        assert_eq!(e, Err(JetError::RankDeficient(1)));
    }

    #[test]
    fn rotating_unit_vector_differentiates() {
        // (cos t, sin t, 0) at t = 0.3: derivative is (-sin, cos, 0)
        let t = Jet::var(0.3, 2);
        let (s, c) = t.sin_cos();
        let v = JetVec::new(vec![c, s, Jet::constant(0.0, 2)]);
        let d = v.differentiate().value();
        assert!((d[0] + 0.3f64.sin()).abs() < 1e-15);
        assert!((d[1] - 0.3f64.cos()).abs() < 1e-15);
        let n = v.norm().unwrap();
        assert!((n.coeffs()[1]).abs() < 1e-15);
    }
}
