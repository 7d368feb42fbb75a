use serde::Serialize;

use crate::expr::files::read_entries;
use crate::expr::FormatError;
use crate::jet::Jet;
use crate::vector::JetVec;

/// Constant Christoffel symbols `Γ^α_{βγ}`, stored as `gamma[α][β][γ]`
/// with zero-based indices. `α` is the output (fiber) index, `β` the
/// direction being moved along, `γ` the transported component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Connection {
    pub gamma: [[[f64; 3]; 3]; 3],
}

impl Default for Connection {
    fn default() -> Self {
        Connection::flat()
    }
}

impl Connection {
    pub fn flat() -> Self {
        Connection { gamma: [[[0.0; 3]; 3]; 3] }
    }

    pub fn is_flat(&self) -> bool {
        self.gamma.iter().flatten().flatten().all(|&g| g == 0.0)
    }

    /// Sets `Γ^alpha_{beta gamma}` (zero-based).
    pub fn set(&mut self, alpha: usize, beta: usize, gamma: usize, value: f64) {
        self.gamma[alpha][beta][gamma] = value;
    }

    /// `out^α = Σ_{β,γ} dir^β Γ^α_{βγ} v^γ`.
    pub fn contract(&self, dir: &[f64; 3], v: &[f64; 3]) -> [f64; 3] {
        std::array::from_fn(|a| {
            let mut s = 0.0;
            for b in 0..3 {
                for c in 0..3 {
                    s += dir[b] * self.gamma[a][b][c] * v[c];
                }
            }
            s
        })
    }

    /// Jet-valued version of [`Connection::contract`].
    pub fn contract_jets(&self, dir: &JetVec, v: &JetVec) -> JetVec {
        let order = dir.order().min(v.order());
        let entries = (0..3)
            .map(|a| {
                let mut s = Jet::constant(0.0, order);
                for b in 0..3 {
                    for c in 0..3 {
                        let g = self.gamma[a][b][c];
                        if g != 0.0 {
                            s = &s + &(dir.get(b) * v.get(c)).scale(g);
                        }
                    }
                }
                s
            })
            .collect();
        JetVec::new(entries)
    }
}

/// Reads `gamma a b c = value` lines (1-based indices) or `flat = true`.
pub fn parse_connection_file(text: &str) -> Result<Connection, FormatError> {
    let entries = read_entries(text)?;
    let mut conn = Connection::flat();
    let mut declared_flat = false;
    let mut any_gamma = false;
    for (key, (line, value)) in entries {
        if key == "flat" {
            declared_flat = match value.as_str() {
                "true" => true,
                "false" => false,
                _ => return Err(FormatError::new(line, "flat must be 'true' or 'false'")),
            };
            continue;
        }
        let parts: Vec<&str> = key.split_whitespace().collect();
        if parts.len() != 4 || parts[0] != "gamma" {
            return Err(FormatError::new(line, format!("unexpected key '{key}'")));
        }
        let mut idx = [0usize; 3];
        for (slot, p) in idx.iter_mut().zip(&parts[1..]) {
            *slot = match p.parse::<usize>() {
                Ok(i @ 1..=3) => i - 1,
                _ => return Err(FormatError::new(line, format!("index '{p}' must be 1, 2 or 3"))),
            };
        }
        let v: f64 = value
            .parse()
            .map_err(|_| FormatError::new(line, format!("'{value}' is not a number")))?;
        if !v.is_finite() {
            return Err(FormatError::new(line, "Christoffel symbols must be finite"));
        }
        conn.set(idx[0], idx[1], idx[2], v);
        any_gamma = true;
    }
    if declared_flat && any_gamma && !conn.is_flat() {
        return Err(FormatError::new(0, "'flat = true' conflicts with nonzero gamma entries"));
    }
    Ok(conn)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_entries() {
        let c = parse_connection_file("# line case\ngamma 1 1 1 = 1.0\ngamma 2 3 1 = -0.5\n").unwrap();
        assert_eq!(c.gamma[0][0][0], 1.0);
        assert_eq!(c.gamma[1][2][0], -0.5);
        assert!(!c.is_flat());
        assert!(parse_connection_file("flat = true\n").unwrap().is_flat());
        assert!(parse_connection_file("").unwrap().is_flat());
    }

    #[test]
    fn rejects_malformed_entries() {
        assert_eq!(parse_connection_file("gamma 1 4 1 = 1\n").unwrap_err().line, 1);
        assert_eq!(parse_connection_file("gamma 1 1 = 1\n").unwrap_err().line, 1);
        assert_eq!(parse_connection_file("\ngamma 1 1 1 = x\n").unwrap_err().line, 2);
        assert!(parse_connection_file("flat = true\ngamma 1 1 1 = 2\n").is_err());
        assert!(parse_connection_file("flat = maybe\n").is_err());
    }

    #[test]
    fn contraction_matches_jets() {
        let mut c = Connection::flat();
        c.set(0, 1, 2, 2.0);
        c.set(2, 0, 0, -1.5);
        let dir = [1.0, 2.0, 3.0];
        let v = [-1.0, 0.5, 4.0];
        let plain = c.contract(&dir, &v);
        assert_eq!(plain, [16.0, 0.0, 1.5]);
        let jets = c.contract_jets(&JetVec::constant(&dir, 2), &JetVec::constant(&v, 2));
        assert_eq!(jets.value(), plain.to_vec());
    }
}
