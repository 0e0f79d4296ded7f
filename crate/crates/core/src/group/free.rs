use smallvec::SmallVec;

use super::{Group, GroupError};

/// Largest supported rank; keeps the letter `e` free for the identity.
pub const MAX_FREE_RANK: u8 = 4;

/// Freely reduced word. Letter `i < rank` is the i-th generator (`a`, `b`,
/// …) and `rank + i` its inverse (`A`, `B`, …), so the derived `Ord` is the
/// lexicographic order with lowercase before uppercase.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FreeWord(SmallVec<[u8; 16]>);

impl FreeWord {
    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeGroup {
    rank: u8,
}

impl FreeGroup {
    pub fn new(rank: u8) -> Self {
        assert!(
            (1..=MAX_FREE_RANK).contains(&rank),
            "free group rank must be in 1..={MAX_FREE_RANK}"
        );
        Self { rank }
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    fn inverse_letter(&self, l: u8) -> u8 {
        if l < self.rank {
            l + self.rank
        } else {
            l - self.rank
        }
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce(&self, letters: impl IntoIterator<Item = u8>) -> FreeWord {
        let mut buf: SmallVec<[u8; 16]> = SmallVec::new();
        for l in letters {
            if buf.last().is_some_and(|&last| last == self.inverse_letter(l)) {
                buf.pop();
            } else {
                buf.push(l);
            }
        }
        FreeWord(buf)
    }

    pub fn parse_word(&self, text: &str) -> Result<FreeWord, GroupError> {
        let err = |reason: &str| GroupError::Parse {
            text: text.to_string(),
            group: self.label(),
            reason: reason.to_string(),
        };
        if text == "e" {
            return Ok(FreeWord::default());
        }
        if text.is_empty() {
            return Err(err("empty word (write `e` for the identity)"));
        }
        let mut letters = Vec::with_capacity(text.len());
        for c in text.chars() {
            let l = match c {
                'a'..='z' if (c as u8 - b'a') < self.rank => c as u8 - b'a',
                'A'..='Z' if (c as u8 - b'A') < self.rank => c as u8 - b'A' + self.rank,
                _ => return Err(err(&format!("letter `{c}` is not a generator"))),
            };
            letters.push(l);
        }
        let w = self.reduce(letters.iter().copied());
        if w.len() != letters.len() {
            return Err(err("word is not freely reduced"));
        }
        Ok(w)
    }
}

impl Group for FreeGroup {
    type Element = FreeWord;

    fn label(&self) -> String {
        format!("F{}", self.rank)
    }

    fn identity(&self) -> FreeWord {
        FreeWord::default()
    }

    fn mul(&self, a: &FreeWord, b: &FreeWord) -> FreeWord {
        let (x, y) = (a.letters(), b.letters());
        let mut k = 0;
        while k < x.len() && k < y.len() && x[x.len() - 1 - k] == self.inverse_letter(y[k]) {
            k += 1;
        }
        let mut out: SmallVec<[u8; 16]> = SmallVec::with_capacity(x.len() + y.len() - 2 * k);
        out.extend_from_slice(&x[..x.len() - k]);
        out.extend_from_slice(&y[k..]);
        FreeWord(out)
    }

    fn inv(&self, a: &FreeWord) -> FreeWord {
        FreeWord(a.0.iter().rev().map(|&l| self.inverse_letter(l)).collect())
    }

    fn generators(&self) -> Vec<FreeWord> {
        (0..2 * self.rank)
            .map(|l| FreeWord(SmallVec::from_slice(&[l])))
            .collect()
    }

    fn word_length(&self, a: &FreeWord) -> usize {
        a.len()
    }

    fn is_member(&self, a: &FreeWord) -> bool {
        let l = a.letters();
        l.iter().all(|&c| c < 2 * self.rank)
            && l.windows(2).all(|w| w[1] != self.inverse_letter(w[0]))
    }

    fn encode(&self, a: &FreeWord) -> String {
        if a.is_empty() {
            return "e".to_string();
        }
        a.letters()
            .iter()
            .map(|&l| {
                if l < self.rank {
                    (b'a' + l) as char
                } else {
                    (b'A' + l - self.rank) as char
                }
            })
            .collect()
    }

    fn decode(&self, text: &str) -> Result<FreeWord, GroupError> {
        self.parse_word(text)
    }

    fn key_bytes(&self, a: &FreeWord, out: &mut Vec<u8>) {
        out.extend_from_slice(a.letters());
    }

    fn is_icc(&self) -> bool {
        self.rank >= 2
    }

    fn is_abelian(&self) -> bool {
        self.rank == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::ball;

    fn w(f: &FreeGroup, s: &str) -> FreeWord {
        f.parse_word(s).unwrap()
    }

    #[test]
    fn free_reduction_in_products() {
        let f = FreeGroup::new(2);
        assert_eq!(f.encode(&f.mul(&w(&f, "ab"), &w(&f, "Ba"))), "aa");
        assert_eq!(f.encode(&f.mul(&w(&f, "ab"), &w(&f, "BA"))), "e");
    }

    #[test]
    fn inverse_reverses_and_flips_case() {
        let f = FreeGroup::new(2);
        assert_eq!(f.encode(&f.inv(&w(&f, "ab"))), "BA");
    }

    #[test]
    fn parse_rejects_unreduced_and_foreign_letters() {
        let f = FreeGroup::new(2);
        assert!(f.parse_word("aA").is_err());
        assert!(f.parse_word("c").is_err());
        assert!(f.parse_word("").is_err());
        assert_eq!(f.parse_word("e").unwrap(), f.identity());
    }

    #[test]
    fn multiplication_matches_concatenate_then_reduce() {
        let f = FreeGroup::new(2);
        let b = ball(&f, 3);
        for x in b.iter() {
            for y in b.iter() {
                let naive = f.reduce(x.letters().iter().chain(y.letters()).copied());
                assert_eq!(f.mul(x, y), naive);
            }
        }
    }
}
