use super::lattice::parse_int_list;
use super::{Group, GroupError};

/// Element of ℤ/2 ≀ ℤ: finite set of lit lamps (sorted) and a cursor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LampState {
    lamps: Vec<i64>,
    cursor: i64,
}

impl LampState {
    pub fn new(mut lamps: Vec<i64>, cursor: i64) -> Self {
        lamps.sort_unstable();
        lamps.dedup();
        Self { lamps, cursor }
    }

    pub fn lamps(&self) -> &[i64] {
        &self.lamps
    }

    pub fn cursor(&self) -> i64 {
        self.cursor
    }
}

/// Lamplighter group with generators `a` (toggle at cursor), `t`, `T`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Lamplighter;

impl Lamplighter {
    pub fn new() -> Self {
        Self
    }
}

fn symmetric_difference(a: &[i64], b: &[i64]) -> Vec<i64> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl Group for Lamplighter {
    type Element = LampState;

    fn label(&self) -> String {
        "L2".to_string()
    }

    fn identity(&self) -> LampState {
        LampState::default()
    }

    // (S, m)(S', m') = (S Δ (S' + m), m + m')
    fn mul(&self, a: &LampState, b: &LampState) -> LampState {
        let shifted: Vec<i64> = b.lamps.iter().map(|l| l + a.cursor).collect();
        LampState {
            lamps: symmetric_difference(&a.lamps, &shifted),
            cursor: a.cursor + b.cursor,
        }
    }

    fn inv(&self, a: &LampState) -> LampState {
        LampState {
            lamps: a.lamps.iter().map(|l| l - a.cursor).collect(),
            cursor: -a.cursor,
        }
    }

    fn generators(&self) -> Vec<LampState> {
        vec![
            LampState::new(vec![0], 0),
            LampState::new(vec![], 1),
            LampState::new(vec![], -1),
        ]
    }

    // toggles plus the shortest cursor tour from 0 over all lamps ending at m
    fn word_length(&self, a: &LampState) -> usize {
        let m = a.cursor;
        let lo = a.lamps.first().map_or(0, |&l| l.min(0)).min(m);
        let hi = a.lamps.last().map_or(0, |&l| l.max(0)).max(m);
        a.lamps.len() + (2 * (hi - lo) - m.abs()) as usize
    }

    fn is_member(&self, a: &LampState) -> bool {
        a.lamps.windows(2).all(|w| w[0] < w[1])
    }

    fn encode(&self, a: &LampState) -> String {
        let lamps: Vec<String> = a.lamps.iter().map(|l| l.to_string()).collect();
        format!("lamps:{};cursor:{}", lamps.join(","), a.cursor)
    }

    fn decode(&self, text: &str) -> Result<LampState, GroupError> {
        let err = |reason: String| GroupError::Parse {
            text: text.to_string(),
            group: self.label(),
            reason,
        };
        let (lamps, cursor) = text
            .strip_prefix("lamps:")
            .and_then(|rest| rest.split_once(";cursor:"))
            .ok_or_else(|| err("expected `lamps:i,j,…;cursor:k`".to_string()))?;
        let lamps = parse_int_list(lamps).map_err(err)?;
        let cursor = cursor
            .trim()
            .parse::<i64>()
            .map_err(|e| err(format!("bad cursor: {e}")))?;
        let state = LampState::new(lamps.clone(), cursor);
        if state.lamps != lamps {
            return Err(err("lamps must be strictly increasing".to_string()));
        }
        Ok(state)
    }

    fn key_bytes(&self, a: &LampState, out: &mut Vec<u8>) {
        out.extend_from_slice(&a.cursor.to_le_bytes());
        for l in &a.lamps {
            out.extend_from_slice(&l.to_le_bytes());
        }
    }

    fn is_icc(&self) -> bool {
        true
    }

    fn is_abelian(&self) -> bool {
        false
    }
}
