use std::hash::Hash;
use std::ops::Deref;

use rustc_hash::FxHashMap;

use super::{sort_canonical, Group, GroupError};

/// Finite set of group elements kept in canonical order, with O(1)
/// membership and position lookup.
#[derive(Debug, Clone)]
pub struct ElementSet<E> {
    items: Vec<E>,
    index: FxHashMap<E, usize>,
}

impl<E: Clone + Eq + Hash> ElementSet<E> {
    /// Builds a set from items already in canonical order and free of
    /// duplicates.
    pub fn from_canonical(items: Vec<E>) -> Self {
        let index = items
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect::<FxHashMap<_, _>>();
        debug_assert_eq!(index.len(), items.len(), "duplicate elements");
        Self { items, index }
    }

    pub fn empty() -> Self {
        Self {
            items: Vec::new(),
            index: FxHashMap::default(),
        }
    }

    pub fn from_iter_in<G, I>(group: &G, iter: I) -> Self
    where
        G: Group<Element = E>,
        I: IntoIterator<Item = E>,
    {
        let mut items: Vec<E> = iter.into_iter().collect();
        sort_canonical(group, &mut items);
        items.dedup();
        Self::from_canonical(items)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, e: &E) -> bool {
        self.index.contains_key(e)
    }

    pub fn position(&self, e: &E) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, E> {
        self.items.iter()
    }

    pub fn as_slice(&self) -> &[E] {
        &self.items
    }

    pub fn get(&self, i: usize) -> Option<&E> {
        self.items.get(i)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.items.iter().all(|e| other.contains(e))
    }

    pub fn union_in<G: Group<Element = E>>(&self, group: &G, other: &Self) -> Self {
        Self::from_iter_in(group, self.iter().chain(other.iter()).cloned())
    }

    pub fn translate<G: Group<Element = E>>(&self, group: &G, g: &E) -> Self {
        Self::from_iter_in(group, self.iter().map(|w| group.mul(g, w)))
    }
}

impl<E: PartialEq> PartialEq for ElementSet<E> {
    fn eq(&self, other: &Self) -> bool {
        self.items == other.items
    }
}

impl<E: Eq> Eq for ElementSet<E> {}

impl<'a, E> IntoIterator for &'a ElementSet<E> {
    type Item = &'a E;
    type IntoIter = std::slice::Iter<'a, E>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

/// Finite subset closed under inverses. Houses X, Y, U, V and friends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricSet<E> {
    set: ElementSet<E>,
    contains_identity: bool,
}

impl<E: Clone + Eq + Hash> SymmetricSet<E> {
    pub fn new<G, I>(group: &G, elements: I) -> Result<Self, GroupError>
    where
        G: Group<Element = E>,
        I: IntoIterator<Item = E>,
    {
        let set = ElementSet::from_iter_in(group, elements);
        if let Some(bad) = set.iter().find(|g| !set.contains(&group.inv(g))) {
            return Err(GroupError::NotSymmetric(group.encode(bad)));
        }
        let contains_identity = set.contains(&group.identity());
        Ok(Self {
            set,
            contains_identity,
        })
    }

    /// `S ∪ S⁻¹`.
    pub fn symmetrize<G, I>(group: &G, elements: I) -> Self
    where
        G: Group<Element = E>,
        I: IntoIterator<Item = E>,
    {
        let mut all: Vec<E> = elements.into_iter().collect();
        let inverses: Vec<E> = all.iter().map(|g| group.inv(g)).collect();
        all.extend(inverses);
        Self::new(group, all).expect("union with inverses is symmetric")
    }

    pub(crate) fn from_canonical_unchecked(set: ElementSet<E>, contains_identity: bool) -> Self {
        Self {
            set,
            contains_identity,
        }
    }

    pub fn contains_identity(&self) -> bool {
        self.contains_identity
    }

    pub fn as_set(&self) -> &ElementSet<E> {
        &self.set
    }

    pub fn into_set(self) -> ElementSet<E> {
        self.set
    }

    /// Non-identity elements, canonical order.
    pub fn non_identity<'a, G: Group<Element = E>>(
        &'a self,
        group: &'a G,
    ) -> impl Iterator<Item = &'a E> + 'a {
        self.set.iter().filter(move |x| !group.is_identity(x))
    }
}

impl<E> Deref for SymmetricSet<E> {
    type Target = ElementSet<E>;
    fn deref(&self) -> &ElementSet<E> {
        &self.set
    }
}
