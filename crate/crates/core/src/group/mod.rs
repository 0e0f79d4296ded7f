//! Group backends and the finite-set algebra built on top of them.
//!
//! Every backend exposes a unique normal form for its elements. The
//! canonical order on elements is BFS by word length with ties broken by
//! the normal-form order (`Ord` on the element type), so `enumerate(n)`,
//! window listings and file output all agree.

mod free;
mod heisenberg;
mod lamplighter;
mod lattice;
mod sets;

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;

use rustc_hash::FxHashSet;
use thiserror::Error;

pub use free::{FreeGroup, FreeWord, MAX_FREE_RANK};
pub use heisenberg::{Heisenberg, HeisenbergElement};
pub use lamplighter::{LampState, Lamplighter};
pub use lattice::{Lattice, LatticePoint};
pub use sets::{ElementSet, SymmetricSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("element {0} does not belong to group {1}")]
    BackendMismatch(String, String),
    #[error("cannot parse `{text}` as an element of {group}: {reason}")]
    Parse {
        text: String,
        group: String,
        reason: String,
    },
    #[error("set is not closed under inverses: {0} has no inverse in the set")]
    NotSymmetric(String),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
}

/// A finitely generated group with solvable word problem.
pub trait Group: Clone + Send + Sync + fmt::Debug {
    type Element: Clone + Eq + Ord + Hash + fmt::Debug + Send + Sync;

    /// Short label used in file headers, e.g. `F2`, `Z1`, `H3`, `L2`.
    fn label(&self) -> String;
    fn identity(&self) -> Self::Element;
    fn mul(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn inv(&self, a: &Self::Element) -> Self::Element;
    /// Symmetric generating set, listed in the backend's symbol order.
    fn generators(&self) -> Vec<Self::Element>;
    /// Word length with respect to [`Group::generators`].
    fn word_length(&self, a: &Self::Element) -> usize;
    /// Whether `a` is a well-formed element of this particular backend
    /// instance (dimension, rank).
    fn is_member(&self, a: &Self::Element) -> bool;
    fn encode(&self, a: &Self::Element) -> String;
    fn decode(&self, text: &str) -> Result<Self::Element, GroupError>;
    /// Stable byte string of the normal form; feeds the keyed hash.
    fn key_bytes(&self, a: &Self::Element, out: &mut Vec<u8>);
    /// Declared from known mathematics, not computed.
    fn is_icc(&self) -> bool;
    fn is_abelian(&self) -> bool;

    fn is_identity(&self, a: &Self::Element) -> bool {
        *a == self.identity()
    }

    fn checked_mul(
        &self,
        a: &Self::Element,
        b: &Self::Element,
    ) -> Result<Self::Element, GroupError> {
        for x in [a, b] {
            if !self.is_member(x) {
                return Err(GroupError::BackendMismatch(format!("{x:?}"), self.label()));
            }
        }
        Ok(self.mul(a, b))
    }

    /// `h⁻¹·g·h`.
    fn conjugate(&self, g: &Self::Element, h: &Self::Element) -> Self::Element {
        self.mul(&self.mul(&self.inv(h), g), h)
    }

    fn canonical_cmp(&self, a: &Self::Element, b: &Self::Element) -> Ordering {
        self.word_length(a)
            .cmp(&self.word_length(b))
            .then_with(|| a.cmp(b))
    }
}

/// Sorts elements into canonical order (word length, then normal form).
pub fn sort_canonical<G: Group>(group: &G, items: &mut [G::Element]) {
    items.sort_by_cached_key(|e| (group.word_length(e), e.clone()));
}

/// Sphere layers `S_0, …, S_r` of the Cayley graph, each in normal-form order.
pub fn sphere_layers<G: Group>(group: &G, r: usize) -> Vec<Vec<G::Element>> {
    let gens = group.generators();
    let mut seen: FxHashSet<G::Element> = FxHashSet::default();
    let e = group.identity();
    seen.insert(e.clone());
    let mut layers = vec![vec![e]];
    for _ in 0..r {
        let mut next = Vec::new();
        for g in layers.last().unwrap() {
            for s in &gens {
                let h = group.mul(g, s);
                if seen.insert(h.clone()) {
                    next.push(h);
                }
            }
        }
        next.sort();
        layers.push(next);
    }
    layers
}

/// All elements of word length at most `r`.
pub fn ball<G: Group>(group: &G, r: usize) -> SymmetricSet<G::Element> {
    let items: Vec<_> = sphere_layers(group, r).into_iter().flatten().collect();
    SymmetricSet::from_canonical_unchecked(ElementSet::from_canonical(items), true)
}

/// The first `n` elements of the canonical enumeration `g_1, g_2, …`.
pub fn enumerate<G: Group>(group: &G, n: usize) -> Vec<G::Element> {
    CanonicalOrder::new(group).take(n).collect()
}

/// Lazy iterator over the whole group in canonical order.
pub struct CanonicalOrder<'g, G: Group> {
    group: &'g G,
    gens: Vec<G::Element>,
    seen: FxHashSet<G::Element>,
    layer: Vec<G::Element>,
    pos: usize,
}

impl<'g, G: Group> CanonicalOrder<'g, G> {
    pub fn new(group: &'g G) -> Self {
        let e = group.identity();
        let mut seen = FxHashSet::default();
        seen.insert(e.clone());
        Self {
            group,
            gens: group.generators(),
            seen,
            layer: vec![e],
            pos: 0,
        }
    }
}

impl<G: Group> Iterator for CanonicalOrder<'_, G> {
    type Item = G::Element;

    fn next(&mut self) -> Option<Self::Item> {
        if self.pos == self.layer.len() {
            let mut next = Vec::new();
            for g in &self.layer {
                for s in &self.gens {
                    let h = self.group.mul(g, s);
                    if self.seen.insert(h.clone()) {
                        next.push(h);
                    }
                }
            }
            // finite groups are not among the backends, but stay total anyway
            if next.is_empty() {
                return None;
            }
            next.sort();
            self.layer = next;
            self.pos = 0;
        }
        let item = self.layer[self.pos].clone();
        self.pos += 1;
        Some(item)
    }
}

/// `{p·q : p ∈ P, q ∈ Q}` in canonical order.
pub fn set_product<G: Group>(
    group: &G,
    p: &ElementSet<G::Element>,
    q: &ElementSet<G::Element>,
) -> ElementSet<G::Element> {
    let mut out: FxHashSet<G::Element> = FxHashSet::default();
    for a in p.iter() {
        for b in q.iter() {
            out.insert(group.mul(a, b));
        }
    }
    ElementSet::from_iter_in(group, out)
}

/// `P⁻¹`, in canonical order.
pub fn set_inverse<G: Group>(group: &G, p: &ElementSet<G::Element>) -> ElementSet<G::Element> {
    ElementSet::from_iter_in(group, p.iter().map(|a| group.inv(a)))
}

/// `Pⁿ` for `n ≥ 1`.
pub fn set_power<G: Group>(
    group: &G,
    p: &ElementSet<G::Element>,
    n: usize,
) -> ElementSet<G::Element> {
    assert!(n >= 1, "set_power needs a positive exponent");
    let mut acc = p.clone();
    for _ in 1..n {
        acc = set_product(group, &acc, p);
    }
    acc
}

/// `g` and `h` are X-apart iff `g⁻¹h ∉ X`.
pub fn is_x_apart<G: Group>(
    group: &G,
    g: &G::Element,
    h: &G::Element,
    x: &SymmetricSet<G::Element>,
) -> bool {
    !x.contains(&group.mul(&group.inv(g), h))
}

/// `{h⁻¹·g·h : h ∈ ball(r)}`.
pub fn truncated_conjugates<G: Group>(
    group: &G,
    g: &G::Element,
    r: usize,
) -> ElementSet<G::Element> {
    let b = ball(group, r);
    ElementSet::from_iter_in(group, b.iter().map(|h| group.conjugate(g, h)))
}
