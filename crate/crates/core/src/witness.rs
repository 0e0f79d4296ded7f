//! Witness configurations on finite sets: switching elements, the set Y,
//! distancing subsets, the failure bound and the sampling loop.

use rayon::prelude::*;
use thiserror::Error;

use crate::configuration::WindowConfiguration;
use crate::field::{derive_seed, local_max_config, RandomField};
use crate::group::{ball, is_x_apart, set_power, set_product, ElementSet, Group, SymmetricSet};

/// Products larger than this are not materialized; bounds then fall back to
/// `|Y|^k` as the cardinality of `Yᵏ`.
pub const MAX_MATERIALIZED_POWER: f64 = 4.0e6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WitnessError {
    #[error("invalid witness parameters: {0}")]
    InvalidParams(String),
    #[error("no switching element within radius {0}")]
    NoSwitchingElement(usize),
    #[error("distancing subset needs g != h")]
    EqualPair,
    #[error("no distancing elements for the pair")]
    EmptyDistancing,
    #[error("|Y| = {y} is smaller than |X| = {x}")]
    SmallY { y: usize, x: usize },
    #[error("Y must contain X: {0} is missing")]
    MissingX(String),
    #[error("Y^k is too large to materialize (about {0:.3e} elements)")]
    PowerTooLarge(f64),
    #[error("plan is not admissible (failure bound {0:.6e} >= 1)")]
    Inadmissible(f64),
    #[error("no witness configuration after {0} attempts")]
    Exhausted(u64),
    #[error("configuration does not cover required site {0}")]
    WindowTooSmall(String),
}

/// Scalars entering the failure bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    pub x_size: usize,
    pub k: u32,
    pub c_exp: u32,
    pub c_den: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessParams<E> {
    x: SymmetricSet<E>,
    x2: SymmetricSet<E>,
    k: u32,
    c_den: u64,
    frac: u64,
}

impl<E: Clone + Eq + std::hash::Hash + Ord> WitnessParams<E> {
    /// Default constants: `c_den = 10|X²| + 5`, `frac = 5`.
    pub fn new<G: Group<Element = E>>(
        group: &G,
        x: SymmetricSet<E>,
        k: u32,
    ) -> Result<Self, WitnessError> {
        let x2 = square(group, &x);
        let c_den = 10 * x2.len() as u64 + 5;
        Self::with_constants(group, x, k, c_den, 5)
    }

    pub fn with_constants<G: Group<Element = E>>(
        group: &G,
        x: SymmetricSet<E>,
        k: u32,
        c_den: u64,
        frac: u64,
    ) -> Result<Self, WitnessError> {
        if !x.contains_identity() {
            return Err(WitnessError::InvalidParams("X must contain the identity".into()));
        }
        if k == 0 {
            return Err(WitnessError::InvalidParams("k must be at least 1".into()));
        }
        let x2 = square(group, &x);
        if c_den < 2 * x2.len() as u64 + 1 {
            return Err(WitnessError::InvalidParams(format!(
                "c_den = {c_den} is below 2|X^2|+1 = {}",
                2 * x2.len() + 1
            )));
        }
        if frac < 2 {
            return Err(WitnessError::InvalidParams("frac must be at least 2".into()));
        }
        Ok(Self { x, x2, k, c_den, frac })
    }

    pub fn x(&self) -> &SymmetricSet<E> {
        &self.x
    }

    pub fn x2(&self) -> &SymmetricSet<E> {
        &self.x2
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn c_exp(&self) -> u32 {
        2 * self.k
    }

    pub fn c_den(&self) -> u64 {
        self.c_den
    }

    pub fn frac(&self) -> u64 {
        self.frac
    }

    pub fn constants(&self) -> BoundConstants {
        BoundConstants {
            x_size: self.x.len(),
            k: self.k,
            c_exp: self.c_exp(),
            c_den: self.c_den,
        }
    }
}

fn square<G: Group>(group: &G, x: &SymmetricSet<G::Element>) -> SymmetricSet<G::Element> {
    let p = set_product(group, x, x);
    SymmetricSet::new(group, p.iter().cloned()).expect("square of a symmetric set is symmetric")
}

/// Both forms of the union bound, kept in log domain since the loose form
/// overflows `f64` long before it drops below 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FailureBound {
    /// `ln(|Yᵏ|² · (1 − |X|⁻²)^{|Y|/c_den})`
    pub exact_ln: f64,
    /// `ln(|Y|^{c_exp} · (1 − |X|⁻²)^{|Y|/c_den})`
    pub loose_ln: f64,
}

impl FailureBound {
    pub fn exact(&self) -> f64 {
        self.exact_ln.exp()
    }

    pub fn loose(&self) -> f64 {
        self.loose_ln.exp()
    }

    pub fn admissible(&self) -> bool {
        self.exact_ln < 0.0
    }
}

pub fn failure_bound(
    c: &BoundConstants,
    y_size: u64,
    y_pow_k_size: f64,
) -> Result<FailureBound, WitnessError> {
    if (y_size as usize) < c.x_size {
        return Err(WitnessError::SmallY {
            y: y_size as usize,
            x: c.x_size,
        });
    }
    let per_pair = y_size as f64 / c.c_den as f64 * log_miss(c.x_size);
    Ok(FailureBound {
        exact_ln: 2.0 * y_pow_k_size.ln() + per_pair,
        loose_ln: c.c_exp as f64 * (y_size as f64).ln() + per_pair,
    })
}

// ln(1 − |X|⁻²)
fn log_miss(x_size: usize) -> f64 {
    let x = x_size as f64;
    (-1.0 / (x * x)).ln_1p()
}

/// Smallest `|Y|` past which the loose bound stays below 1.
///
/// `ln f(n) = c_exp·ln n + n·ln(1−|X|⁻²)/c_den` is unimodal, so the search
/// starts at its maximum and bisects the decreasing branch.
pub fn min_admissible_size(c: &BoundConstants) -> u64 {
    let slope = log_miss(c.x_size) / c.c_den as f64;
    if slope == f64::NEG_INFINITY {
        return c.x_size as u64;
    }
    let ln_f = |n: u64| c.c_exp as f64 * (n as f64).ln() + n as f64 * slope;
    let peak = ((c.c_exp as f64 / -slope).ceil() as u64).max(c.x_size as u64).max(1);
    if ln_f(peak) < 0.0 {
        // bound below 1 already at the peak: it is below 1 everywhere from |X| on
        let mut n = c.x_size.max(1) as u64;
        while ln_f(n) >= 0.0 {
            n += 1;
        }
        return n;
    }
    let mut lo = peak;
    let mut hi = peak.max(2);
    while ln_f(hi) >= 0.0 {
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ln_f(mid) < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// First `g` in canonical order of `ball(radius)` with `g⁻¹xg ∉ X²` for every
/// non-identity `x ∈ X²`.
pub fn find_switching_element<G: Group>(
    group: &G,
    x: &SymmetricSet<G::Element>,
    radius: usize,
) -> Option<G::Element> {
    let x2 = square(group, x);
    let targets: Vec<_> = x2.non_identity(group).cloned().collect();
    ball(group, radius).iter().find_map(|g| {
        targets
            .iter()
            .all(|t| !x2.contains(&group.conjugate(t, g)))
            .then(|| g.clone())
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessPlan<E> {
    params: WitnessParams<E>,
    g_s: Option<E>,
    y1: ElementSet<E>,
    y: SymmetricSet<E>,
    y_pow_k: Option<ElementSet<E>>,
    y_pow_k_size: f64,
    bound: FailureBound,
}

impl<E: Clone + Eq + std::hash::Hash + Ord + std::fmt::Debug> WitnessPlan<E> {
    /// Plan around a caller-supplied `Y`, bypassing the switching element.
    pub fn with_y<G: Group<Element = E>>(
        group: &G,
        params: WitnessParams<E>,
        y: SymmetricSet<E>,
    ) -> Result<Self, WitnessError> {
        Self::assemble(group, params, None, ElementSet::empty(), y)
    }

    /// Reassembles a stored plan, checking `Y₁ ∩ Y₁g_s = ∅` and
    /// `Y₁ ∪ Y₁g_s ⊆ Y`.
    pub fn from_parts<G: Group<Element = E>>(
        group: &G,
        params: WitnessParams<E>,
        g_s: Option<E>,
        y1: ElementSet<E>,
        y: SymmetricSet<E>,
    ) -> Result<Self, WitnessError> {
        match &g_s {
            Some(gs) => {
                let shifted: Vec<E> = y1.iter().map(|a| group.mul(a, gs)).collect();
                if shifted.iter().any(|b| y1.contains(b)) {
                    return Err(WitnessError::InvalidParams("Y1 meets Y1*g_s".into()));
                }
                if let Some(m) = y1.iter().chain(&shifted).find(|a| !y.contains(a)) {
                    return Err(WitnessError::InvalidParams(format!(
                        "{} lies in Y1 or Y1*g_s but not in Y",
                        group.encode(m)
                    )));
                }
            }
            None if !y1.is_empty() => {
                return Err(WitnessError::InvalidParams("Y1 given without g_s".into()));
            }
            None => {}
        }
        Self::assemble(group, params, g_s, y1, y)
    }

    fn assemble<G: Group<Element = E>>(
        group: &G,
        params: WitnessParams<E>,
        g_s: Option<E>,
        y1: ElementSet<E>,
        y: SymmetricSet<E>,
    ) -> Result<Self, WitnessError> {
        if let Some(missing) = params.x().iter().find(|x| !y.contains(x)) {
            return Err(WitnessError::MissingX(group.encode(missing)));
        }
        let estimate = (y.len() as f64).powi(params.k() as i32);
        let y_pow_k = (estimate <= MAX_MATERIALIZED_POWER)
            .then(|| set_power(group, &y, params.k() as usize));
        let y_pow_k_size = y_pow_k.as_ref().map_or(estimate, |p| p.len() as f64);
        let bound = failure_bound(&params.constants(), y.len() as u64, y_pow_k_size)?;
        Ok(Self {
            params,
            g_s,
            y1,
            y,
            y_pow_k,
            y_pow_k_size,
            bound,
        })
    }

    pub fn params(&self) -> &WitnessParams<E> {
        &self.params
    }

    pub fn switching_element(&self) -> Option<&E> {
        self.g_s.as_ref()
    }

    pub fn y1(&self) -> &ElementSet<E> {
        &self.y1
    }

    pub fn y(&self) -> &SymmetricSet<E> {
        &self.y
    }

    pub fn y_pow_k(&self) -> Result<&ElementSet<E>, WitnessError> {
        self.y_pow_k
            .as_ref()
            .ok_or(WitnessError::PowerTooLarge(self.y_pow_k_size))
    }

    /// `|Yᵏ|`, exact when materialized, otherwise `|Y|^k`.
    pub fn y_pow_k_size(&self) -> f64 {
        self.y_pow_k_size
    }

    pub fn bound(&self) -> &FailureBound {
        &self.bound
    }

    pub fn is_admissible(&self) -> bool {
        self.bound.admissible()
    }

    /// `Yᵏ·Y`, the window a witness configuration must cover.
    pub fn sample_window<G: Group<Element = E>>(
        &self,
        group: &G,
    ) -> Result<ElementSet<E>, WitnessError> {
        Ok(set_product(group, self.y_pow_k()?, &self.y))
    }
}

/// Greedy `Y₁` with `Y₁ ∩ Y₁g_s = ∅`, then
/// `Y = (Y₁ ∪ Y₁g_s) ∪ (Y₁ ∪ Y₁g_s)⁻¹ ∪ X`.
pub fn build_plan<G: Group>(
    group: &G,
    params: WitnessParams<G::Element>,
    size_floor: usize,
    search_radius: usize,
) -> Result<WitnessPlan<G::Element>, WitnessError> {
    let g_s = find_switching_element(group, params.x(), search_radius)
        .ok_or(WitnessError::NoSwitchingElement(search_radius))?;
    let target = size_floor.max(params.x().len());
    let g_s_inv = group.inv(&g_s);
    let mut chosen: Vec<G::Element> = Vec::with_capacity(target);
    let mut members = rustc_hash::FxHashSet::default();
    for y in crate::group::CanonicalOrder::new(group) {
        if chosen.len() == target {
            break;
        }
        let clash = members.contains(&group.mul(&y, &g_s))
            || members.contains(&group.mul(&y, &g_s_inv))
            || group.is_identity(&g_s);
        if !clash {
            members.insert(y.clone());
            chosen.push(y);
        }
    }
    let y1 = ElementSet::from_canonical(chosen);
    let shifted = y1.iter().map(|y| group.mul(y, &g_s));
    let y = SymmetricSet::symmetrize(
        group,
        y1.iter()
            .cloned()
            .chain(shifted)
            .chain(params.x().iter().cloned()),
    );
    WitnessPlan::assemble(group, params, Some(g_s), y1, y)
}

/// `Y′_{g,h} = {y ∈ Y : gy and hy are X²-apart}`.
pub fn distancing_subset<G: Group>(
    group: &G,
    g: &G::Element,
    h: &G::Element,
    plan: &WitnessPlan<G::Element>,
) -> Result<ElementSet<G::Element>, WitnessError> {
    if g == h {
        return Err(WitnessError::EqualPair);
    }
    let x2 = plan.params().x2();
    let items = plan
        .y()
        .iter()
        .filter(|y| is_x_apart(group, &group.mul(g, y), &group.mul(h, y), x2))
        .cloned()
        .collect();
    Ok(ElementSet::from_canonical(items))
}

/// Greedy independent set in the conflict graph on `Y′_{g,h}`: `y₁ ~ y₂`
/// when `gy₁, hy₂` or `gy₂, hy₁` fail to be X²-apart.
pub fn independent_distancing_subset<G: Group>(
    group: &G,
    g: &G::Element,
    h: &G::Element,
    plan: &WitnessPlan<G::Element>,
) -> Result<ElementSet<G::Element>, WitnessError> {
    let candidates = distancing_subset(group, g, h, plan)?;
    if candidates.is_empty() {
        return Err(WitnessError::EmptyDistancing);
    }
    let x2 = plan.params().x2();
    let mut chosen: Vec<(G::Element, G::Element, G::Element)> = Vec::new();
    for y in candidates.iter() {
        let gy = group.mul(g, y);
        let hy = group.mul(h, y);
        let free = chosen.iter().all(|(_, gz, hz)| {
            is_x_apart(group, &gy, hz, x2) && is_x_apart(group, gz, &hy, x2)
        });
        if free {
            chosen.push((y.clone(), gy, hy));
        }
    }
    Ok(ElementSet::from_canonical(
        chosen.into_iter().map(|(y, _, _)| y).collect(),
    ))
}

/// Bit `i` of row `g` is `s(g·y_i)`.
fn coverage_rows<G: Group>(
    group: &G,
    s: &WindowConfiguration<G::Element>,
    rows: &ElementSet<G::Element>,
    y: &ElementSet<G::Element>,
) -> Result<Vec<Vec<u64>>, WitnessError> {
    let words = y.len().div_ceil(64);
    rows.as_slice()
        .par_iter()
        .map(|g| {
            let mut bits = vec![0u64; words];
            for (i, yi) in y.iter().enumerate() {
                let site = group.mul(g, yi);
                match s.get(&site) {
                    Some(1) => bits[i / 64] |= 1 << (i % 64),
                    Some(_) => {}
                    None => return Err(WitnessError::WindowTooSmall(group.encode(&site))),
                }
            }
            Ok(bits)
        })
        .collect()
}

fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

/// Ordered pairs `(i, j)` of rows with no common set bit.
fn uncovered_pairs(rows: &[Vec<u64>]) -> Vec<(usize, usize)> {
    (0..rows.len())
        .into_par_iter()
        .map(|i| {
            (0..rows.len())
                .filter(|&j| !intersects(&rows[i], &rows[j]))
                .map(|j| (i, j))
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect()
}

fn all_pairs_covered(rows: &[Vec<u64>]) -> bool {
    (0..rows.len())
        .into_par_iter()
        .all(|i| rows.iter().all(|r| intersects(&rows[i], r)))
}

/// One draw of `u` on `Yᵏ·Y` from the given field seed.
#[derive(Debug, Clone)]
pub struct Attempt<E> {
    pub field_seed: u64,
    pub config: WindowConfiguration<E>,
    pub covered: bool,
}

pub fn attempt_witness<G: Group>(
    group: &G,
    plan: &WitnessPlan<G::Element>,
    field_seed: u64,
) -> Result<Attempt<G::Element>, WitnessError> {
    let window = plan.sample_window(group)?;
    let config = local_max_config(group, &RandomField::new(field_seed), plan.params().x(), &window);
    let rows = coverage_rows(group, &config, plan.y_pow_k()?, plan.y())?;
    Ok(Attempt {
        field_seed,
        covered: all_pairs_covered(&rows),
        config,
    })
}

#[derive(Debug, Clone)]
pub struct SampleOutcome<E> {
    pub config: WindowConfiguration<E>,
    pub field_seed: u64,
    pub attempts: u64,
}

/// Draws `u` for field seeds `derive_seed(seed, 0), derive_seed(seed, 1), …`
/// until every ordered pair of `Yᵏ` shares a 1 on `gY ∩ hY` translates.
pub fn sample_witness_config<G: Group>(
    group: &G,
    plan: &WitnessPlan<G::Element>,
    seed: u64,
    max_attempts: u64,
    allow_inadmissible: bool,
) -> Result<SampleOutcome<G::Element>, WitnessError> {
    if !allow_inadmissible && !plan.is_admissible() {
        return Err(WitnessError::Inadmissible(plan.bound().exact()));
    }
    for attempt in 0..max_attempts {
        let a = attempt_witness(group, plan, derive_seed(seed, attempt))?;
        if a.covered {
            return Ok(SampleOutcome {
                config: a.config,
                field_seed: a.field_seed,
                attempts: attempt + 1,
            });
        }
    }
    Err(WitnessError::Exhausted(max_attempts))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WitnessReport<E> {
    /// Pairs of 1's that are not X-apart, each listed once.
    pub close_ones: Vec<(E, E)>,
    /// Ordered pairs `(g, h)` of `Yᵏ` with no `a ∈ Y`, `s(ga) = s(ha) = 1`.
    pub uncovered: Vec<(E, E)>,
}

impl<E> WitnessReport<E> {
    pub fn passes(&self) -> bool {
        self.close_ones.is_empty() && self.uncovered.is_empty()
    }
}

pub fn verify_witness_properties<G: Group>(
    group: &G,
    s: &WindowConfiguration<G::Element>,
    plan: &WitnessPlan<G::Element>,
) -> Result<WitnessReport<G::Element>, WitnessError> {
    let yk = plan.y_pow_k()?;
    let rows = coverage_rows(group, s, yk, plan.y())?;
    let x = plan.params().x();
    let mut close_ones = Vec::new();
    for a in s.ones() {
        for step in x.non_identity(group) {
            let b = group.mul(a, step);
            if s.window().contains(&b) && s.is_one(&b) && group.canonical_cmp(a, &b).is_lt() {
                close_ones.push((a.clone(), b));
            }
        }
    }
    close_ones.sort_by(|p, q| {
        group
            .canonical_cmp(&p.0, &q.0)
            .then_with(|| group.canonical_cmp(&p.1, &q.1))
    });
    let uncovered = uncovered_pairs(&rows)
        .into_iter()
        .map(|(i, j)| (yk.as_slice()[i].clone(), yk.as_slice()[j].clone()))
        .collect();
    Ok(WitnessReport {
        close_ones,
        uncovered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configuration::Alphabet;
    use crate::group::{FreeGroup, Heisenberg, Lattice};

    fn f2_plan(size_floor: usize) -> (FreeGroup, WitnessPlan<crate::group::FreeWord>) {
        let f = FreeGroup::new(2);
        let params = WitnessParams::new(&f, ball(&f, 1), 1).unwrap();
        let plan = build_plan(&f, params, size_floor, 4).unwrap();
        (f, plan)
    }

    #[test]
    fn switching_element_in_free_group() {
        let f = FreeGroup::new(2);
        let x = ball(&f, 1);
        let g = find_switching_element(&f, &x, 4).expect("found");
        assert!(f.word_length(&g) <= 4);
        let x2 = ball(&f, 2);
        assert_eq!(x2.non_identity(&f).count(), 16);
        for t in x2.non_identity(&f) {
            assert!(!x2.contains(&f.conjugate(t, &g)));
        }
    }

    #[test]
    fn no_switching_element_when_conjugation_fixes_x() {
        let z = Lattice::new(1);
        assert_eq!(find_switching_element(&z, &ball(&z, 1), 8), None);
        let h = Heisenberg::new();
        let x = SymmetricSet::symmetrize(&h, ball(&h, 1).iter().cloned().chain([h.central()]));
        assert_eq!(find_switching_element(&h, &x, 5), None);
    }

    #[test]
    fn plan_shape() {
        let (f, plan) = f2_plan(10);
        let g_s = plan.switching_element().unwrap().clone();
        assert_eq!(plan.y1().len(), 10);
        for y in plan.y1().iter() {
            assert!(!plan.y1().contains(&f.mul(y, &g_s)));
        }
        assert!(plan.params().x().is_subset(plan.y()));
        for y in plan.y().iter() {
            assert!(plan.y().contains(&f.inv(y)));
        }
        assert!(!plan.is_admissible());
    }

    #[test]
    fn abelian_plan_fails() {
        let z = Lattice::new(1);
        let params = WitnessParams::new(&z, ball(&z, 1), 1).unwrap();
        assert_eq!(
            build_plan(&z, params, 10, 6),
            Err(WitnessError::NoSwitchingElement(6))
        );
    }

    #[test]
    fn params_validation() {
        let z = Lattice::new(1);
        assert!(WitnessParams::new(&z, ball(&z, 1), 0).is_err());
        assert!(WitnessParams::with_constants(&z, ball(&z, 1), 1, 10, 5).is_err());
        assert!(WitnessParams::with_constants(&z, ball(&z, 1), 1, 11, 1).is_err());
        let no_e = SymmetricSet::new(&z, [z.point(&[1]), z.point(&[-1])]).unwrap();
        assert!(WitnessParams::new(&z, no_e, 1).is_err());
        let p = WitnessParams::new(&z, ball(&z, 1), 100).unwrap();
        assert_eq!((p.c_exp(), p.c_den(), p.frac()), (200, 55, 5));
    }

    #[test]
    fn bound_spot_value() {
        let c = BoundConstants {
            x_size: 3,
            k: 1,
            c_exp: 2,
            c_den: 55,
        };
        let b = failure_bound(&c, 55, 55.0).unwrap();
        let expected = 55.0f64 * 55.0 * (8.0 / 9.0);
        assert!((b.exact() - expected).abs() / expected < 1e-12);
        assert!(failure_bound(&c, 2, 2.0).is_err());
    }

    #[test]
    fn bound_decreases_in_y() {
        let c = BoundConstants {
            x_size: 5,
            k: 1,
            c_exp: 2,
            c_den: 175,
        };
        let mut prev = f64::INFINITY;
        for n in 5..2000 {
            let b = failure_bound(&c, n, 100.0).unwrap().exact_ln;
            assert!(b < prev);
            prev = b;
        }
    }

    #[test]
    fn min_admissible_size_matches_scan() {
        for (x_size, k, c_den) in [(3usize, 1u32, 55u64), (3, 3, 55), (5, 2, 175), (3, 100, 55)] {
            let c = BoundConstants {
                x_size,
                k,
                c_exp: 2 * k,
                c_den,
            };
            let n = min_admissible_size(&c);
            let ln_f = |m: u64| {
                2.0 * k as f64 * (m as f64).ln()
                    + m as f64 / c_den as f64 * (1.0 - 1.0 / (x_size * x_size) as f64).ln()
            };
            assert!(ln_f(n) < 0.0);
            assert!(ln_f(n - 1) >= 0.0, "{x_size} {k} {c_den}: {n}");
            // the loose form agrees with failure_bound
            let b = failure_bound(&c, n, 1.0).unwrap();
            assert!((b.loose_ln - ln_f(n)).abs() < 1e-9);
        }
    }

    #[test]
    fn distancing_examples() {
        let (f, plan) = f2_plan(12);
        let a = f.parse_word("a").unwrap();
        let b = f.parse_word("b").unwrap();
        let d = distancing_subset(&f, &a, &b, &plan).unwrap();
        assert!(d.len() * 5 >= plan.y().len());
        assert_eq!(distancing_subset(&f, &a, &a, &plan), Err(WitnessError::EqualPair));

        let z = Lattice::new(1);
        let params = WitnessParams::new(&z, ball(&z, 1), 1).unwrap();
        let synthetic = WitnessPlan::with_y(&z, params, ball(&z, 4)).unwrap();
        let d = distancing_subset(&z, &z.point(&[0]), &z.point(&[1]), &synthetic).unwrap();
        assert!(d.is_empty());
        assert_eq!(
            independent_distancing_subset(&z, &z.point(&[0]), &z.point(&[1]), &synthetic),
            Err(WitnessError::EmptyDistancing)
        );
    }

    #[test]
    fn independent_subset_is_independent() {
        let (f, plan) = f2_plan(12);
        let x2 = plan.params().x2().clone();
        let b3 = ball(&f, 3);
        for g in b3.iter().take(20) {
            for h in b3.iter().skip(7).take(20) {
                if g == h {
                    continue;
                }
                let d = distancing_subset(&f, g, h, &plan).unwrap();
                let ind = independent_distancing_subset(&f, g, h, &plan).unwrap();
                assert!(ind.len() * (2 * x2.len() + 1) >= d.len());
                for y1 in ind.iter() {
                    for y2 in ind.iter() {
                        assert!(is_x_apart(&f, &f.mul(g, y1), &f.mul(h, y2), &x2));
                    }
                }
            }
        }
    }

    #[test]
    fn sampled_witness_verifies() {
        let f = FreeGroup::new(2);
        let x = SymmetricSet::symmetrize(&f, [f.identity(), f.parse_word("a").unwrap()]);
        let plan = build_plan(&f, WitnessParams::new(&f, x, 1).unwrap(), 24, 4).unwrap();
        let out = sample_witness_config(&f, &plan, 5, 50, true).unwrap();
        let report = verify_witness_properties(&f, &out.config, &plan).unwrap();
        assert!(report.passes());
        assert!(matches!(
            sample_witness_config(&f, &plan, 5, 50, false),
            Err(WitnessError::Inadmissible(_))
        ));
    }

    #[test]
    fn abelian_synthetic_plan_is_exhausted() {
        let z = Lattice::new(1);
        let params = WitnessParams::new(&z, ball(&z, 1), 1).unwrap();
        let plan = WitnessPlan::with_y(&z, params, ball(&z, 3)).unwrap();
        assert_eq!(
            sample_witness_config(&z, &plan, 1, 200, true).unwrap_err(),
            WitnessError::Exhausted(200)
        );
    }

    #[test]
    fn zeros_leave_every_pair_uncovered() {
        let (f, plan) = f2_plan(6);
        let window = plan.sample_window(&f).unwrap();
        let zeros = WindowConfiguration::constant(window, 0, Alphabet::binary());
        let report = verify_witness_properties(&f, &zeros, &plan).unwrap();
        let n = plan.y_pow_k().unwrap().len();
        assert_eq!(report.uncovered.len(), n * n);
        assert!(report.close_ones.is_empty());

        let small = WindowConfiguration::constant(ball(&f, 1).into_set(), 0, Alphabet::binary());
        assert!(matches!(
            verify_witness_properties(&f, &small, &plan),
            Err(WitnessError::WindowTooSmall(_))
        ));
    }

    #[test]
    fn adjacent_ones_are_reported() {
        let z = Lattice::new(1);
        let params = WitnessParams::new(&z, ball(&z, 1), 1).unwrap();
        let plan = WitnessPlan::with_y(&z, params, ball(&z, 1)).unwrap();
        let window = plan.sample_window(&z).unwrap();
        let s = WindowConfiguration::from_fn(window, Alphabet::binary(), |p| {
            matches!(p.coords()[0], 0 | 1) as u8
        });
        let report = verify_witness_properties(&z, &s, &plan).unwrap();
        assert_eq!(report.close_ones, vec![(z.point(&[0]), z.point(&[1]))]);
    }
}
