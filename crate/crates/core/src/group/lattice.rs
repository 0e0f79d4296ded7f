use smallvec::SmallVec;

use super::{Group, GroupError};

/// Point of ℤᵈ; the derived `Ord` is numeric lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint(SmallVec<[i64; 4]>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(SmallVec::from_vec(coords))
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

/// The free abelian group ℤᵈ with generators ±e_i.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
}

impl Lattice {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "lattice dimension must be positive");
        Self { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, coords: &[i64]) -> LatticePoint {
        assert_eq!(coords.len(), self.dim, "wrong dimension");
        LatticePoint(SmallVec::from_slice(coords))
    }
}

impl Group for Lattice {
    type Element = LatticePoint;

    fn label(&self) -> String {
        format!("Z{}", self.dim)
    }

    fn identity(&self) -> LatticePoint {
        LatticePoint(SmallVec::from_elem(0, self.dim))
    }

    fn mul(&self, a: &LatticePoint, b: &LatticePoint) -> LatticePoint {
        LatticePoint(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    fn inv(&self, a: &LatticePoint) -> LatticePoint {
        LatticePoint(a.0.iter().map(|x| -x).collect())
    }

    fn generators(&self) -> Vec<LatticePoint> {
        let mut gens = Vec::with_capacity(2 * self.dim);
        for i in 0..self.dim {
            for s in [1, -1] {
                let mut v = SmallVec::from_elem(0, self.dim);
                v[i] = s;
                gens.push(LatticePoint(v));
            }
        }
        gens
    }

    fn word_length(&self, a: &LatticePoint) -> usize {
        a.0.iter().map(|x| x.unsigned_abs() as usize).sum()
    }

    fn is_member(&self, a: &LatticePoint) -> bool {
        a.0.len() == self.dim
    }

    fn encode(&self, a: &LatticePoint) -> String {
        let parts: Vec<String> = a.0.iter().map(|x| x.to_string()).collect();
        parts.join(",")
    }

    fn decode(&self, text: &str) -> Result<LatticePoint, GroupError> {
        let coords = parse_int_list(text).map_err(|reason| GroupError::Parse {
            text: text.to_string(),
            group: self.label(),
            reason,
        })?;
        if coords.len() != self.dim {
            return Err(GroupError::Parse {
                text: text.to_string(),
                group: self.label(),
                reason: format!("expected {} coordinates, got {}", self.dim, coords.len()),
            });
        }
        Ok(LatticePoint(SmallVec::from_vec(coords)))
    }

    fn key_bytes(&self, a: &LatticePoint, out: &mut Vec<u8>) {
        for x in &a.0 {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }

    fn is_icc(&self) -> bool {
        false
    }

    fn is_abelian(&self) -> bool {
        true
    }
}

pub(super) fn parse_int_list(text: &str) -> Result<Vec<i64>, String> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| format!("`{t}` is not an integer: {e}"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn additive_law() {
        let z = Lattice::new(1);
        assert_eq!(z.mul(&z.point(&[2]), &z.point(&[3])), z.point(&[5]));
        assert_eq!(z.inv(&z.point(&[5])), z.point(&[-5]));
    }

    #[test]
    fn encoding_round_trips() {
        let z3 = Lattice::new(3);
        let p = z3.point(&[-4, 0, 17]);
        assert_eq!(z3.encode(&p), "-4,0,17");
        assert_eq!(z3.decode("-4,0,17").unwrap(), p);
        assert!(z3.decode("1,2").is_err());
        assert!(z3.decode("1,x,2").is_err());
    }
}
