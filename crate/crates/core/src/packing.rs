//! Packings of translated shapes on finite windows.
//!
//! A packing assigns to each center of a window either nothing or a shape
//! `Z`; the block at `g` is `g·Z`. Blocks must be pairwise disjoint.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::group::{set_inverse, set_product, ElementSet, Group};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PackingError {
    #[error("shape `{0}` has no cells")]
    EmptyShape(String),
    #[error("blocks at {0} and {1} overlap")]
    Overlap(String, String),
    #[error("center {0} is outside the packing window")]
    CenterOutsideWindow(String),
    #[error("interior site {0} is not padded: some conflicting center lies outside the window")]
    InteriorNotPadded(String),
    #[error("separation violated: E1·X³ and E2·X³ share {0}")]
    NotSeparated(String),
    #[error("packings disagree on {0}")]
    Mismatch(&'static str),
    #[error("shape index {0} out of range")]
    BadShapeIndex(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape<E> {
    id: String,
    cells: ElementSet<E>,
}

impl<E: Clone + Eq + std::hash::Hash> Shape<E> {
    pub fn new(id: impl Into<String>, cells: ElementSet<E>) -> Result<Self, PackingError> {
        let id = id.into();
        if cells.is_empty() {
            return Err(PackingError::EmptyShape(id));
        }
        Ok(Self { id, cells })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn cells(&self) -> &ElementSet<E> {
        &self.cells
    }
}

/// Order in which the greedy scan visits centers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanOrder {
    Canonical,
    /// Seeded shuffle of the canonical order.
    Shuffled(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingWindow<E> {
    window: ElementSet<E>,
    shapes: Vec<Shape<E>>,
    assignment: Vec<Option<usize>>,
}

impl<E: Clone + Eq + std::hash::Hash + Ord + std::fmt::Debug> PackingWindow<E> {
    pub fn empty(window: ElementSet<E>, shapes: Vec<Shape<E>>) -> Self {
        let assignment = vec![None; window.len()];
        Self {
            window,
            shapes,
            assignment,
        }
    }

    /// Builds a packing from explicit blocks and checks disjointness.
    pub fn from_blocks<G: Group<Element = E>>(
        group: &G,
        window: ElementSet<E>,
        shapes: Vec<Shape<E>>,
        blocks: impl IntoIterator<Item = (E, usize)>,
    ) -> Result<Self, PackingError> {
        let mut p = Self::empty(window, shapes);
        for (c, s) in blocks {
            p.assign(group, &c, s)?;
        }
        p.check_disjoint(group)?;
        Ok(p)
    }

    fn assign<G: Group<Element = E>>(
        &mut self,
        group: &G,
        center: &E,
        shape: usize,
    ) -> Result<(), PackingError> {
        if shape >= self.shapes.len() {
            return Err(PackingError::BadShapeIndex(shape));
        }
        let i = self
            .window
            .position(center)
            .ok_or_else(|| PackingError::CenterOutsideWindow(group.encode(center)))?;
        self.assignment[i] = Some(shape);
        Ok(())
    }

    pub fn window(&self) -> &ElementSet<E> {
        &self.window
    }

    pub fn shapes(&self) -> &[Shape<E>] {
        &self.shapes
    }

    pub fn shape_at(&self, center: &E) -> Option<usize> {
        self.window.position(center).and_then(|i| self.assignment[i])
    }

    /// `(center, shape index)` for every nonempty center, canonical order.
    pub fn blocks(&self) -> impl Iterator<Item = (&E, usize)> {
        self.window
            .iter()
            .zip(&self.assignment)
            .filter_map(|(c, a)| a.map(|s| (c, s)))
    }

    pub fn block_count(&self) -> usize {
        self.assignment.iter().flatten().count()
    }

    pub fn block_cells<'a, G: Group<Element = E>>(
        &'a self,
        group: &'a G,
        center: &'a E,
        shape: usize,
    ) -> impl Iterator<Item = E> + 'a {
        self.shapes[shape].cells.iter().map(move |z| group.mul(center, z))
    }

    /// `W·(Z₁ ∪ … ∪ Zₙ)`, where every block lives.
    pub fn padded_window<G: Group<Element = E>>(&self, group: &G) -> ElementSet<E> {
        set_product(group, &self.window, &all_cells(group, &self.shapes))
    }

    fn occupancy<G: Group<Element = E>>(&self, group: &G) -> Result<FxHashSet<E>, PackingError> {
        let mut occupied = FxHashSet::default();
        let mut owner: rustc_hash::FxHashMap<E, E> = Default::default();
        for (c, s) in self.blocks() {
            for cell in self.block_cells(group, c, s) {
                if let Some(other) = owner.get(&cell) {
                    return Err(PackingError::Overlap(group.encode(other), group.encode(c)));
                }
                owner.insert(cell.clone(), c.clone());
                occupied.insert(cell);
            }
        }
        Ok(occupied)
    }

    pub fn check_disjoint<G: Group<Element = E>>(&self, group: &G) -> Result<(), PackingError> {
        self.occupancy(group).map(|_| ())
    }

    /// `g·p`: the block at `c` moves to `g·c`.
    pub fn translate<G: Group<Element = E>>(&self, group: &G, g: &E) -> Self {
        let window = self.window.translate(group, g);
        let gi = group.inv(g);
        let assignment = window
            .iter()
            .map(|c| self.assignment[self.window.position(&group.mul(&gi, c)).unwrap()])
            .collect();
        Self {
            window,
            shapes: self.shapes.clone(),
            assignment,
        }
    }

    /// Assignment restricted to `sites` (all must be in the window).
    pub fn restrict(&self, sites: &ElementSet<E>) -> Option<Vec<Option<usize>>> {
        sites
            .iter()
            .map(|c| self.window.position(c).map(|i| self.assignment[i]))
            .collect()
    }
}

fn all_cells<G: Group>(group: &G, shapes: &[Shape<G::Element>]) -> ElementSet<G::Element> {
    ElementSet::from_iter_in(group, shapes.iter().flat_map(|s| s.cells.iter().cloned()))
}

fn scan_order(len: usize, order: ScanOrder) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..len).collect();
    if let ScanOrder::Shuffled(seed) = order {
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    idx
}

/// Greedy saturation: visit centers in `order`, try shapes in listed order
/// (coarsest first) and place every block that fits.
pub fn greedy_saturate<G: Group>(
    group: &G,
    window: &ElementSet<G::Element>,
    shapes: &[Shape<G::Element>],
    preplaced: &[(G::Element, usize)],
    order: ScanOrder,
) -> Result<PackingWindow<G::Element>, PackingError> {
    let mut p = PackingWindow::from_blocks(
        group,
        window.clone(),
        shapes.to_vec(),
        preplaced.iter().cloned(),
    )?;
    let mut occupied = p.occupancy(group)?;
    let mut cells: Vec<G::Element> = Vec::new();
    for i in scan_order(window.len(), order) {
        if p.assignment[i].is_some() {
            continue;
        }
        let c = &window.as_slice()[i];
        for (s, shape) in shapes.iter().enumerate() {
            cells.clear();
            let mut fits = true;
            for z in shape.cells.iter() {
                let cell = group.mul(c, z);
                if occupied.contains(&cell) {
                    fits = false;
                    break;
                }
                cells.push(cell);
            }
            if fits {
                occupied.extend(cells.drain(..));
                p.assignment[i] = Some(s);
                break;
            }
        }
    }
    Ok(p)
}

/// Centers `c` with `c·Zᵢ·Zⱼ⁻¹ ⊆ W` for all shape pairs: every block that
/// could conflict with a block at `c` has its center inside the window.
pub fn saturation_interior<G: Group>(
    group: &G,
    window: &ElementSet<G::Element>,
    shapes: &[Shape<G::Element>],
) -> ElementSet<G::Element> {
    let reach = conflict_offsets(group, shapes);
    let items = window
        .iter()
        .filter(|c| reach.iter().all(|d| window.contains(&group.mul(c, d))))
        .cloned()
        .collect();
    ElementSet::from_canonical(items)
}

fn conflict_offsets<G: Group>(group: &G, shapes: &[Shape<G::Element>]) -> ElementSet<G::Element> {
    let cells = all_cells(group, shapes);
    set_product(group, &cells, &set_inverse(group, &cells))
}

/// First `(center, shape)` in `interior` at which a block could be added.
pub fn addable_block<G: Group>(
    group: &G,
    p: &PackingWindow<G::Element>,
    interior: &ElementSet<G::Element>,
) -> Result<Option<(G::Element, usize)>, PackingError> {
    let reach = conflict_offsets(group, &p.shapes);
    for c in interior.iter() {
        if let Some(d) = reach.iter().find(|d| !p.window.contains(&group.mul(c, d))) {
            return Err(PackingError::InteriorNotPadded(
                group.encode(&group.mul(c, d)),
            ));
        }
    }
    let occupied = p.occupancy(group)?;
    for c in interior.iter() {
        if p.shape_at(c).is_some() {
            continue;
        }
        for (s, shape) in p.shapes.iter().enumerate() {
            if shape.cells.iter().all(|z| !occupied.contains(&group.mul(c, z))) {
                return Ok(Some((c.clone(), s)));
            }
        }
    }
    Ok(None)
}

pub fn is_saturated<G: Group>(
    group: &G,
    p: &PackingWindow<G::Element>,
    interior: &ElementSet<G::Element>,
) -> Result<bool, PackingError> {
    Ok(addable_block(group, p, interior)?.is_none())
}

/// Packing agreeing with `p1` on `E1` and with `p2` on `E2`.
///
/// Blocks of `p1` centered in `E1·X²` and of `p2` centered in `E2·X²` are
/// kept (`X = ∪ Zᵢ ∪ Zᵢ⁻¹`), the rest is filled greedily. Requires
/// `E1·X³ ∩ E2·X³ = ∅` so the kept blocks cannot collide.
pub fn glue_packings<G: Group>(
    group: &G,
    p1: &PackingWindow<G::Element>,
    p2: &PackingWindow<G::Element>,
    e1: &ElementSet<G::Element>,
    e2: &ElementSet<G::Element>,
    order: ScanOrder,
) -> Result<PackingWindow<G::Element>, PackingError> {
    if p1.window != p2.window {
        return Err(PackingError::Mismatch("window"));
    }
    if p1.shapes != p2.shapes {
        return Err(PackingError::Mismatch("shapes"));
    }
    for e in e1.iter().chain(e2.iter()) {
        if !p1.window.contains(e) {
            return Err(PackingError::CenterOutsideWindow(group.encode(e)));
        }
    }
    let cells = all_cells(group, &p1.shapes);
    let x = cells.union_in(group, &set_inverse(group, &cells));
    let x2 = set_product(group, &x, &x);
    let x3 = set_product(group, &x2, &x);
    let far1 = set_product(group, e1, &x3);
    let far2 = set_product(group, e2, &x3);
    if let Some(shared) = far1.iter().find(|g| far2.contains(g)) {
        return Err(PackingError::NotSeparated(group.encode(shared)));
    }
    let near1 = set_product(group, e1, &x2);
    let near2 = set_product(group, e2, &x2);
    let preplaced: Vec<_> = p1
        .blocks()
        .filter(|(c, _)| near1.contains(c))
        .chain(p2.blocks().filter(|(c, _)| near2.contains(c)))
        .map(|(c, s)| (c.clone(), s))
        .collect();
    greedy_saturate(group, &p1.window, &p1.shapes, &preplaced, order)
}

/// φ: all blocks of the coarse packing, plus the fine blocks disjoint from
/// every coarse block. Output shapes are `[coarse, fine]`.
pub fn merge_phi<G: Group>(
    group: &G,
    coarse: &PackingWindow<G::Element>,
    fine: &PackingWindow<G::Element>,
) -> Result<PackingWindow<G::Element>, PackingError> {
    if coarse.shapes.len() != 1 || fine.shapes.len() != 1 {
        return Err(PackingError::Mismatch("shape count (expected one shape each)"));
    }
    if coarse.window != fine.window {
        return Err(PackingError::Mismatch("window"));
    }
    let occupied = coarse.occupancy(group)?;
    let shapes = vec![coarse.shapes[0].clone(), fine.shapes[0].clone()];
    let mut out = PackingWindow::empty(coarse.window.clone(), shapes);
    for (i, c) in coarse.window.iter().enumerate() {
        out.assignment[i] = match (coarse.assignment[i], fine.assignment[i]) {
            (Some(_), _) => Some(0),
            (None, Some(_)) => fine.shapes[0]
                .cells
                .iter()
                .all(|z| !occupied.contains(&group.mul(c, z)))
                .then_some(1),
            (None, None) => None,
        };
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{ball, FreeGroup, Lattice, LatticePoint};

    fn int_window(z: &Lattice, lo: i64, hi: i64) -> ElementSet<LatticePoint> {
        ElementSet::from_iter_in(z, (lo..=hi).map(|i| z.point(&[i])))
    }

    fn domino(z: &Lattice) -> Shape<LatticePoint> {
        Shape::new("d", int_window(z, 0, 1)).unwrap()
    }

    fn centers(p: &PackingWindow<LatticePoint>) -> Vec<i64> {
        let mut v: Vec<i64> = p.blocks().map(|(c, _)| c.coords()[0]).collect();
        v.sort();
        v
    }

    #[test]
    fn greedy_on_integers() {
        let z = Lattice::new(1);
        let w = int_window(&z, 0, 5);
        let p = greedy_saturate(&z, &w, &[domino(&z)], &[], ScanOrder::Canonical).unwrap();
        assert_eq!(centers(&p), vec![0, 2, 4]);
        let p = greedy_saturate(&z, &w, &[domino(&z)], &[(z.point(&[1]), 0)], ScanOrder::Canonical)
            .unwrap();
        assert_eq!(centers(&p), vec![1, 3, 5]);
        let empty = greedy_saturate(&z, &ElementSet::empty(), &[domino(&z)], &[], ScanOrder::Canonical)
            .unwrap();
        assert_eq!(empty.block_count(), 0);
    }

    #[test]
    fn overlapping_preplacement_is_rejected() {
        let z = Lattice::new(1);
        let w = int_window(&z, 0, 5);
        let pre = [(z.point(&[1]), 0), (z.point(&[2]), 0)];
        assert!(matches!(
            greedy_saturate(&z, &w, &[domino(&z)], &pre, ScanOrder::Canonical),
            Err(PackingError::Overlap(_, _))
        ));
    }

    #[test]
    fn saturation_checks() {
        let z = Lattice::new(1);
        let w = int_window(&z, -10, 10);
        let shapes = [domino(&z)];
        let interior = saturation_interior(&z, &w, &shapes);
        assert_eq!(interior, int_window(&z, -9, 9));
        let p = greedy_saturate(&z, &w, &shapes, &[], ScanOrder::Shuffled(3)).unwrap();
        assert!(is_saturated(&z, &p, &interior).unwrap());

        let (c, s) = p.blocks().find(|(c, _)| interior.contains(c)).map(|(c, s)| (c.clone(), s)).unwrap();
        let kept: Vec<_> = p.blocks().filter(|(d, _)| **d != c).map(|(d, t)| (d.clone(), t)).collect();
        let holed = PackingWindow::from_blocks(&z, w.clone(), shapes.to_vec(), kept).unwrap();
        assert!(!is_saturated(&z, &holed, &interior).unwrap());
        assert_eq!(s, 0);

        let sparse = PackingWindow::from_blocks(&z, w.clone(), shapes.to_vec(), [(z.point(&[0]), 0), (z.point(&[4]), 0)])
            .unwrap();
        // canonical scan: 0 is taken, -1 and 1 collide, -2 is free
        assert_eq!(
            addable_block(&z, &sparse, &interior).unwrap(),
            Some((z.point(&[-2]), 0))
        );
        assert!(!is_saturated(&z, &sparse, &interior).unwrap());
        assert!(matches!(
            is_saturated(&z, &p, &w),
            Err(PackingError::InteriorNotPadded(_))
        ));
    }

    #[test]
    fn glue_on_integers() {
        let z = Lattice::new(1);
        let w = int_window(&z, -20, 30);
        let shapes = [domino(&z)];
        let p1 = greedy_saturate(&z, &w, &shapes, &[], ScanOrder::Shuffled(1)).unwrap();
        let p2 = greedy_saturate(&z, &w, &shapes, &[], ScanOrder::Shuffled(2)).unwrap();
        let e1 = int_window(&z, 0, 0);
        let e2 = int_window(&z, 10, 10);
        let g = glue_packings(&z, &p1, &p2, &e1, &e2, ScanOrder::Canonical).unwrap();
        assert_eq!(g.restrict(&e1), p1.restrict(&e1));
        assert_eq!(g.restrict(&e2), p2.restrict(&e2));
        let interior = saturation_interior(&z, &w, &shapes);
        assert!(is_saturated(&z, &g, &interior).unwrap());
        let adjacent = int_window(&z, 1, 1);
        assert!(matches!(
            glue_packings(&z, &p1, &p2, &e1, &adjacent, ScanOrder::Canonical),
            Err(PackingError::NotSeparated(_))
        ));
    }

    #[test]
    fn merge_cases() {
        let z = Lattice::new(1);
        let w = int_window(&z, 0, 9);
        let coarse = Shape::new("c", int_window(&z, 0, 2)).unwrap();
        let fine = domino(&z);
        let p1 = PackingWindow::from_blocks(&z, w.clone(), vec![coarse.clone()], [(z.point(&[0]), 0)]).unwrap();
        let p2 = PackingWindow::from_blocks(
            &z,
            w.clone(),
            vec![fine.clone()],
            [(z.point(&[2]), 0), (z.point(&[5]), 0)],
        )
        .unwrap();
        let m = merge_phi(&z, &p1, &p2).unwrap();
        assert_eq!(m.shape_at(&z.point(&[0])), Some(0));
        assert_eq!(m.shape_at(&z.point(&[2])), None);
        assert_eq!(m.shape_at(&z.point(&[5])), Some(1));

        let none = PackingWindow::empty(w.clone(), vec![coarse]);
        let m = merge_phi(&z, &none, &p2).unwrap();
        assert_eq!(centers(&m), centers(&p2));
        assert!(merge_phi(&z, &m, &p2).is_err());
    }

    #[test]
    fn merge_commutes_with_translation_on_free_group() {
        let f = FreeGroup::new(2);
        let w = ball(&f, 4).into_set();
        let coarse = Shape::new("c", ball(&f, 1).into_set()).unwrap();
        let fine = Shape::new("f", ElementSet::from_iter_in(&f, [f.identity(), f.parse_word("a").unwrap()]))
            .unwrap();
        let p1 = greedy_saturate(&f, &w, &[coarse], &[], ScanOrder::Shuffled(4)).unwrap();
        let p2 = greedy_saturate(&f, &w, &[fine], &[], ScanOrder::Shuffled(5)).unwrap();
        let m = merge_phi(&f, &p1, &p2).unwrap();
        m.check_disjoint(&f).unwrap();
        for g in ball(&f, 2).iter() {
            let lhs = merge_phi(&f, &p1.translate(&f, g), &p2.translate(&f, g)).unwrap();
            assert_eq!(lhs, m.translate(&f, g));
        }
    }
}
