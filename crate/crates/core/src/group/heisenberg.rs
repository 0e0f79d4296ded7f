use std::sync::{Arc, RwLock};

use rustc_hash::FxHashMap;

use super::lattice::parse_int_list;
use super::{Group, GroupError};

/// `(x, y, z)` standing for the unitriangular matrix
/// `[[1, x, z], [0, 1, y], [0, 0, 1]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HeisenbergElement {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl HeisenbergElement {
    pub const fn new(x: i64, y: i64, z: i64) -> Self {
        Self { x, y, z }
    }
}

/// Discrete Heisenberg group with generators x, y; `[x, y] = z` is central.
///
/// Word length has no cheap closed form here, so it is read off a BFS
/// that grows on demand and is shared between clones.
#[derive(Debug, Clone, Default)]
pub struct Heisenberg {
    lengths: Arc<RwLock<LengthTable>>,
}

#[derive(Debug)]
struct LengthTable {
    len: FxHashMap<HeisenbergElement, usize>,
    frontier: Vec<HeisenbergElement>,
    radius: usize,
}

impl Default for LengthTable {
    fn default() -> Self {
        let e = HeisenbergElement::new(0, 0, 0);
        let mut len = FxHashMap::default();
        len.insert(e, 0);
        Self {
            len,
            frontier: vec![e],
            radius: 0,
        }
    }
}

const GENERATORS: [HeisenbergElement; 4] = [
    HeisenbergElement::new(-1, 0, 0),
    HeisenbergElement::new(0, -1, 0),
    HeisenbergElement::new(0, 1, 0),
    HeisenbergElement::new(1, 0, 0),
];

fn product(a: &HeisenbergElement, b: &HeisenbergElement) -> HeisenbergElement {
    HeisenbergElement::new(a.x + b.x, a.y + b.y, a.z + b.z + a.x * b.y)
}

impl Heisenberg {
    pub fn new() -> Self {
        Self::default()
    }

    /// The central generator `z = [x, y]`.
    pub fn central(&self) -> HeisenbergElement {
        HeisenbergElement::new(0, 0, 1)
    }

    pub fn gen_x(&self) -> HeisenbergElement {
        HeisenbergElement::new(1, 0, 0)
    }

    pub fn gen_y(&self) -> HeisenbergElement {
        HeisenbergElement::new(0, 1, 0)
    }
}

impl Group for Heisenberg {
    type Element = HeisenbergElement;

    fn label(&self) -> String {
        "H3".to_string()
    }

    fn identity(&self) -> HeisenbergElement {
        HeisenbergElement::new(0, 0, 0)
    }

    fn mul(&self, a: &HeisenbergElement, b: &HeisenbergElement) -> HeisenbergElement {
        product(a, b)
    }

    fn inv(&self, a: &HeisenbergElement) -> HeisenbergElement {
        HeisenbergElement::new(-a.x, -a.y, a.x * a.y - a.z)
    }

    fn generators(&self) -> Vec<HeisenbergElement> {
        GENERATORS.to_vec()
    }

    fn word_length(&self, a: &HeisenbergElement) -> usize {
        if let Some(&l) = self.lengths.read().unwrap().len.get(a) {
            return l;
        }
        let mut table = self.lengths.write().unwrap();
        loop {
            if let Some(&l) = table.len.get(a) {
                return l;
            }
            let r = table.radius + 1;
            let mut next = Vec::new();
            for g in std::mem::take(&mut table.frontier) {
                for s in &GENERATORS {
                    let h = product(&g, s);
                    if let std::collections::hash_map::Entry::Vacant(v) = table.len.entry(h) {
                        v.insert(r);
                        next.push(h);
                    }
                }
            }
            table.frontier = next;
            table.radius = r;
        }
    }

    fn is_member(&self, _a: &HeisenbergElement) -> bool {
        true
    }

    fn encode(&self, a: &HeisenbergElement) -> String {
        format!("{},{},{}", a.x, a.y, a.z)
    }

    fn decode(&self, text: &str) -> Result<HeisenbergElement, GroupError> {
        let err = |reason: String| GroupError::Parse {
            text: text.to_string(),
            group: self.label(),
            reason,
        };
        let v = parse_int_list(text).map_err(err)?;
        match v.as_slice() {
            [x, y, z] => Ok(HeisenbergElement::new(*x, *y, *z)),
            _ => Err(err(format!("expected 3 coordinates, got {}", v.len()))),
        }
    }

    fn key_bytes(&self, a: &HeisenbergElement, out: &mut Vec<u8>) {
        for c in [a.x, a.y, a.z] {
            out.extend_from_slice(&c.to_le_bytes());
        }
    }

    fn is_icc(&self) -> bool {
        false
    }

    fn is_abelian(&self) -> bool {
        false
    }
}
