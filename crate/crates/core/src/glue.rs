//! Stamping witness patterns into packings (ψ) and sampling windows of the
//! resulting strongly irreducible witness shift.

use thiserror::Error;

use crate::configuration::{Alphabet, WindowConfiguration};
use crate::group::{set_product, ElementSet, Group, SymmetricSet};
use crate::packing::{greedy_saturate, merge_phi, PackingError, PackingWindow, ScanOrder, Shape};
use crate::witness::{WitnessError, WitnessPlan};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GlueError {
    #[error(transparent)]
    Packing(#[from] PackingError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error("pattern does not cover {0}")]
    NotCovered(String),
    #[error("packing shapes do not match the plan: {0}")]
    ShapeMismatch(String),
}

/// `{g ∈ W : g·X ⊆ W}`.
pub fn x_interior<G: Group>(
    group: &G,
    w: &ElementSet<G::Element>,
    x: &SymmetricSet<G::Element>,
) -> ElementSet<G::Element> {
    let items = w
        .iter()
        .filter(|g| x.iter().all(|s| w.contains(&group.mul(g, s))))
        .cloned()
        .collect();
    ElementSet::from_canonical(items)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    /// Shape `YᵏX`, interior `Yᵏ`.
    Coarse,
    /// Shape `YX`, interior `Y`.
    Fine,
}

impl BlockKind {
    fn from_index(i: usize) -> Self {
        if i == 0 {
            BlockKind::Coarse
        } else {
            BlockKind::Fine
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockStamp<E> {
    pub center: E,
    pub kind: BlockKind,
}

/// The two shapes and their stamped interiors, derived from a witness plan.
#[derive(Debug, Clone, PartialEq)]
pub struct StampGeometry<E> {
    x: SymmetricSet<E>,
    coarse: Shape<E>,
    fine: Shape<E>,
    coarse_interior: ElementSet<E>,
    fine_interior: ElementSet<E>,
}

impl<E: Clone + Eq + std::hash::Hash + Ord + std::fmt::Debug> StampGeometry<E> {
    pub fn new<G: Group<Element = E>>(
        group: &G,
        plan: &WitnessPlan<E>,
    ) -> Result<Self, GlueError> {
        let x = plan.params().x().clone();
        let yk = plan.y_pow_k()?.clone();
        let y = plan.y().as_set().clone();
        Ok(Self {
            coarse: Shape::new("coarse", set_product(group, &yk, &x))?,
            fine: Shape::new("fine", set_product(group, &y, &x))?,
            coarse_interior: yk,
            fine_interior: y,
            x,
        })
    }

    pub fn x(&self) -> &SymmetricSet<E> {
        &self.x
    }

    pub fn coarse(&self) -> &Shape<E> {
        &self.coarse
    }

    pub fn fine(&self) -> &Shape<E> {
        &self.fine
    }

    pub fn interior(&self, kind: BlockKind) -> &ElementSet<E> {
        match kind {
            BlockKind::Coarse => &self.coarse_interior,
            BlockKind::Fine => &self.fine_interior,
        }
    }

    fn check_shapes(&self, p: &PackingWindow<E>) -> Result<(), GlueError> {
        let expected = [&self.coarse, &self.fine];
        if p.shapes().len() > 2 {
            return Err(GlueError::ShapeMismatch(format!("{} shapes", p.shapes().len())));
        }
        for (got, want) in p.shapes().iter().zip(expected) {
            if got.cells() != want.cells() {
                return Err(GlueError::ShapeMismatch(format!("shape `{}`", got.id())));
            }
        }
        Ok(())
    }
}

pub fn block_stamps<E: Clone + Eq + std::hash::Hash + Ord + std::fmt::Debug>(
    p: &PackingWindow<E>,
) -> Vec<BlockStamp<E>> {
    p.blocks()
        .map(|(c, s)| BlockStamp {
            center: c.clone(),
            kind: BlockKind::from_index(s),
        })
        .collect()
}

/// ψ: `t(g) = s(h⁻¹g)` on the interior `h·Yᵏ` or `h·Y` of each block, 0
/// elsewhere. The output lives on the packing's center window.
pub fn stamp_psi<G: Group>(
    group: &G,
    p: &PackingWindow<G::Element>,
    s: &WindowConfiguration<G::Element>,
    geometry: &StampGeometry<G::Element>,
) -> Result<WindowConfiguration<G::Element>, GlueError> {
    geometry.check_shapes(p)?;
    let window = p.window();
    let mut values = vec![0u8; window.len()];
    for stamp in block_stamps(p) {
        for y in geometry.interior(stamp.kind).iter() {
            let site = group.mul(&stamp.center, y);
            if let Some(i) = window.position(&site) {
                values[i] = s
                    .get(y)
                    .ok_or_else(|| GlueError::NotCovered(group.encode(y)))?;
            }
        }
    }
    Ok(WindowConfiguration::new(window.clone(), values, Alphabet::binary())
        .expect("stamped values are binary"))
}

/// One window of the witness shift with the packing that produced it.
#[derive(Debug, Clone)]
pub struct ShiftSample<E> {
    pub packing: PackingWindow<E>,
    pub config: WindowConfiguration<E>,
}

/// Coarse and fine saturated packings from shuffled greedy scans, merged by
/// φ, then stamped by ψ.
pub fn sample_witness_shift_config<G: Group>(
    group: &G,
    geometry: &StampGeometry<G::Element>,
    s: &WindowConfiguration<G::Element>,
    seeds: (u64, u64),
    window: &ElementSet<G::Element>,
) -> Result<ShiftSample<G::Element>, GlueError> {
    let coarse = greedy_saturate(
        group,
        window,
        std::slice::from_ref(&geometry.coarse),
        &[],
        ScanOrder::Shuffled(seeds.0),
    )?;
    let fine = greedy_saturate(
        group,
        window,
        std::slice::from_ref(&geometry.fine),
        &[],
        ScanOrder::Shuffled(seeds.1),
    )?;
    let packing = merge_phi(group, &coarse, &fine)?;
    let config = stamp_psi(group, &packing, s, geometry)?;
    Ok(ShiftSample { packing, config })
}

/// Pairs of 1's that are not X-apart, each listed once.
pub fn check_ones_apart<G: Group>(
    group: &G,
    t: &WindowConfiguration<G::Element>,
    x: &SymmetricSet<G::Element>,
) -> Vec<(G::Element, G::Element)> {
    let mut out = Vec::new();
    for a in t.ones() {
        for step in x.non_identity(group) {
            let b = group.mul(a, step);
            if t.window().contains(&b) && t.is_one(&b) && group.canonical_cmp(a, &b).is_lt() {
                out.push((a.clone(), b));
            }
        }
    }
    out.sort_by(|p, q| {
        group
            .canonical_cmp(&p.0, &q.0)
            .then_with(|| group.canonical_cmp(&p.1, &q.1))
    });
    out
}

/// First `a` of `search` (canonical order) with `t1(a) = t2(a) = 1`.
pub fn find_common_one<E: Clone + Eq + std::hash::Hash>(
    t1: &WindowConfiguration<E>,
    t2: &WindowConfiguration<E>,
    search: &ElementSet<E>,
) -> Option<E> {
    search
        .iter()
        .find(|a| t1.is_one(a) && t2.is_one(a))
        .cloned()
}

/// Search region around the first coarse block `a₁` of `first`: the union
/// of `b·Y` over case points `b` of `second` with `a₁⁻¹b ∈ Y⁴`. Case points
/// are fine-block centers and the points `k·w`, `w ∈ Y^{k−1}`, of coarse
/// blocks at `k`. Clipped to the common window.
pub fn locator_region<G: Group>(
    group: &G,
    plan: &WitnessPlan<G::Element>,
    first: &PackingWindow<G::Element>,
    second: &PackingWindow<G::Element>,
) -> Result<ElementSet<G::Element>, GlueError> {
    let Some((a1, _)) = first.blocks().find(|(_, s)| *s == 0) else {
        return Ok(ElementSet::empty());
    };
    let y = plan.y();
    let y2 = set_product(group, y, y);
    let reach = 4 * y.iter().map(|g| group.word_length(g)).max().unwrap_or(0);
    let in_y4 = |d: &G::Element| {
        group.word_length(d) <= reach
            && y2
                .iter()
                .any(|u| y2.contains(&group.mul(&group.inv(u), d)))
    };
    let k = plan.params().k() as usize;
    let coarse_offsets = if k == 1 {
        ElementSet::from_canonical(vec![group.identity()])
    } else {
        crate::group::set_power(group, y, k - 1)
    };
    let a1_inv = group.inv(a1);
    let window = first.window();
    let mut region = Vec::new();
    for (c, s) in second.blocks() {
        let points: Vec<G::Element> = if s == 0 {
            coarse_offsets.iter().map(|w| group.mul(c, w)).collect()
        } else {
            vec![c.clone()]
        };
        for b in points {
            if in_y4(&group.mul(&a1_inv, &b)) {
                region.extend(
                    y.iter()
                        .map(|v| group.mul(&b, v))
                        .filter(|g| window.contains(g) && second.window().contains(g)),
                );
            }
        }
    }
    Ok(ElementSet::from_iter_in(group, region))
}

/// Where a common 1 of two samples was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommonOne<E> {
    InLocator(E),
    Fallback(E),
    Missing,
}

impl<E> CommonOne<E> {
    pub fn is_found(&self) -> bool {
        !matches!(self, CommonOne::Missing)
    }
}

/// Locator region first, then the whole common window.
pub fn locate_common_one<G: Group>(
    group: &G,
    plan: &WitnessPlan<G::Element>,
    first: &ShiftSample<G::Element>,
    second: &ShiftSample<G::Element>,
) -> Result<CommonOne<G::Element>, GlueError> {
    let region = locator_region(group, plan, &first.packing, &second.packing)?;
    if let Some(a) = find_common_one(&first.config, &second.config, &region) {
        return Ok(CommonOne::InLocator(a));
    }
    let common = ElementSet::from_canonical(
        first
            .config
            .window()
            .iter()
            .filter(|g| second.config.window().contains(g))
            .cloned()
            .collect(),
    );
    Ok(match find_common_one(&first.config, &second.config, &common) {
        Some(a) => CommonOne::Fallback(a),
        None => CommonOne::Missing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{ball, FreeGroup, Lattice};
    use crate::witness::{build_plan, sample_witness_config, WitnessParams};

    #[test]
    fn interior_examples() {
        let z = Lattice::new(1);
        let w = ElementSet::from_iter_in(&z, (0..=10).map(|i| z.point(&[i])));
        let got = x_interior(&z, &w, &ball(&z, 1));
        let want = ElementSet::from_iter_in(&z, (1..=9).map(|i| z.point(&[i])));
        assert_eq!(got, want);
        assert_eq!(
            x_interior(&z, ball(&z, 1).as_set(), &ball(&z, 1)),
            ElementSet::from_canonical(vec![z.point(&[0])])
        );
        assert!(x_interior(&z, &ElementSet::from_canonical(vec![z.point(&[0])]), &ball(&z, 1)).is_empty());
    }

    fn f2_setup() -> (
        FreeGroup,
        WitnessPlan<crate::group::FreeWord>,
        WindowConfiguration<crate::group::FreeWord>,
        StampGeometry<crate::group::FreeWord>,
    ) {
        let f = FreeGroup::new(2);
        let x = SymmetricSet::symmetrize(&f, [f.identity(), f.parse_word("a").unwrap()]);
        let plan = build_plan(&f, WitnessParams::new(&f, x, 1).unwrap(), 24, 4).unwrap();
        let s = sample_witness_config(&f, &plan, 1, 100, true).unwrap().config;
        let geom = StampGeometry::new(&f, &plan).unwrap();
        (f, plan, s, geom)
    }

    #[test]
    fn interiors_contain_stamp_sets() {
        let (f, _, _, geom) = f2_setup();
        let x = geom.x().clone();
        assert!(geom
            .interior(BlockKind::Fine)
            .is_subset(&x_interior(&f, geom.fine().cells(), &x)));
        assert!(geom
            .interior(BlockKind::Coarse)
            .is_subset(&x_interior(&f, geom.coarse().cells(), &x)));
    }

    #[test]
    fn stamping_basics() {
        let (f, _, s, geom) = f2_setup();
        let w = ball(&f, 5).into_set();
        let shapes = vec![geom.coarse().clone(), geom.fine().clone()];
        let empty = PackingWindow::empty(w.clone(), shapes.clone());
        let t = stamp_psi(&f, &empty, &s, &geom).unwrap();
        assert_eq!(t.ones().count(), 0);

        let single = PackingWindow::from_blocks(&f, w.clone(), shapes, [(f.identity(), 0)]).unwrap();
        let t = stamp_psi(&f, &single, &s, &geom).unwrap();
        let yk = geom.interior(BlockKind::Coarse);
        for (g, v) in t.iter() {
            if yk.contains(g) {
                assert_eq!(Some(v), s.get(g));
            } else {
                assert_eq!(v, 0);
            }
        }
    }

    #[test]
    fn samples_have_apart_ones_and_share_a_one() {
        let (f, plan, s, geom) = f2_setup();
        let w = ball(&f, 6).into_set();
        let t1 = sample_witness_shift_config(&f, &geom, &s, (1, 2), &w).unwrap();
        let t2 = sample_witness_shift_config(&f, &geom, &s, (3, 4), &w).unwrap();
        assert!(check_ones_apart(&f, &t1.config, geom.x()).is_empty());
        assert!(check_ones_apart(&f, &t2.config, geom.x()).is_empty());
        assert!(locate_common_one(&f, &plan, &t1, &t2).unwrap().is_found());
        let again = sample_witness_shift_config(&f, &geom, &s, (1, 2), &w).unwrap();
        assert_eq!(again.config, t1.config);
        for (c, kind) in t1.packing.blocks() {
            let interior = geom.interior(BlockKind::from_index(kind));
            for y in interior.iter() {
                let site = f.mul(c, y);
                if let Some(v) = t1.config.get(&site) {
                    assert_eq!(Some(v), s.get(y));
                }
            }
        }
    }

    #[test]
    fn stamping_commutes_with_translation() {
        let (f, _, s, geom) = f2_setup();
        let w = ball(&f, 5).into_set();
        let t = sample_witness_shift_config(&f, &geom, &s, (7, 8), &w).unwrap();
        for g in ball(&f, 2).iter() {
            let moved = stamp_psi(&f, &t.packing.translate(&f, g), &s, &geom).unwrap();
            assert_eq!(moved, t.config.translate(&f, g));
        }
    }

    #[test]
    fn ones_apart_examples() {
        let z = Lattice::new(1);
        let x = ball(&z, 1);
        let t = WindowConfiguration::finite_support(&z, [z.point(&[0]), z.point(&[2])]);
        assert!(check_ones_apart(&z, &t, &x).is_empty());
        let t = WindowConfiguration::finite_support(&z, [z.point(&[0]), z.point(&[1])]);
        assert_eq!(check_ones_apart(&z, &t, &x).len(), 1);
    }

    #[test]
    fn common_one_examples() {
        let z = Lattice::new(1);
        let search = ball(&z, 3).into_set();
        let t = WindowConfiguration::finite_support(&z, [z.point(&[0])]);
        assert_eq!(find_common_one(&t, &t, &search), Some(z.point(&[0])));
        let u = WindowConfiguration::finite_support(&z, [z.point(&[1])]);
        assert_eq!(find_common_one(&t, &u, &search), None);
    }
}
