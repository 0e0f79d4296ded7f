//! Metrics on configurations and shift windows, the ε-proximal
//! approximation `T′` of a shift, and checkers for proximality, minimality,
//! the abelian obstruction and faithfulness.
//!
//! `ε` is always `1/m`. Two configurations are `ε`-close iff they agree on
//! the first `m` elements of the canonical enumeration.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::configuration::{Alphabet, Symbol, WindowConfiguration};
use crate::glue::check_ones_apart;
use crate::group::{ball, enumerate, truncated_conjugates, ElementSet, Group, SymmetricSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProxError {
    #[error("configuration does not cover {0}")]
    Coverage(String),
    #[error("shift windows are not comparable: {0}")]
    Incomparable(&'static str),
    #[error("shift window needs at least one pattern, each total on the window")]
    BadPatterns,
    #[error("the shift family has no constructive extension rule")]
    NonConstructive,
    #[error("1's of s at {0} and {1} are not Z-apart")]
    NotZApart(String, String),
    #[error("s must be finitely supported (declared background symbol)")]
    Padding,
    #[error("depth {depth} is smaller than m = {m}")]
    ShallowDepth { depth: usize, m: usize },
    #[error("epsilon must be 1/m with m >= 1")]
    BadEpsilon,
    #[error("pair {0} has no witness within the search radius")]
    PairFailed(usize),
    #[error("X misses the conjugate {0}")]
    MissingConjugate(String),
    #[error("window site {0} lies beyond the conjugator radius {1}")]
    ConjugatorRadius(String, usize),
    #[error("too many X-patterns to enumerate ({0})")]
    TooManyPatterns(f64),
}

/// Value of `d(s, t)` as far as it was observed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distance {
    /// First disagreement at `g_index` (1-based): `d = 1/index`.
    Exact(usize),
    /// Agreement on the first `depth` sites: `d ≤ 1/(depth+1)`.
    Within(usize),
}

impl Distance {
    /// Observed value; 0 when no disagreement was seen.
    pub fn value(&self) -> f64 {
        match *self {
            Distance::Exact(k) => 1.0 / k as f64,
            Distance::Within(_) => 0.0,
        }
    }

    pub fn upper(&self) -> f64 {
        match *self {
            Distance::Exact(k) => 1.0 / k as f64,
            Distance::Within(d) => 1.0 / (d + 1) as f64,
        }
    }

    /// `d < 1/m`.
    pub fn below_inv(&self, m: usize) -> bool {
        match *self {
            Distance::Exact(k) => k > m,
            Distance::Within(d) => d >= m,
        }
    }

    pub fn is_bound(&self) -> bool {
        matches!(self, Distance::Within(_))
    }
}

fn lookup<E: Clone + Eq + std::hash::Hash, G: Group<Element = E>>(
    group: &G,
    c: &WindowConfiguration<E>,
    g: &E,
) -> Result<Symbol, ProxError> {
    c.get(g).ok_or_else(|| ProxError::Coverage(group.encode(g)))
}

fn first_disagreement<G: Group>(
    sites: &[G::Element],
    mut left: impl FnMut(&G::Element) -> Result<Symbol, ProxError>,
    mut right: impl FnMut(&G::Element) -> Result<Symbol, ProxError>,
) -> Result<Distance, ProxError> {
    for (n, g) in sites.iter().enumerate() {
        if left(g)? != right(g)? {
            return Ok(Distance::Exact(n + 1));
        }
    }
    Ok(Distance::Within(sites.len()))
}

/// `d(s, t) = 1/k` for the first disagreement `g_k`, searched up to `depth`.
pub fn config_metric<G: Group>(
    group: &G,
    s: &WindowConfiguration<G::Element>,
    t: &WindowConfiguration<G::Element>,
    depth: usize,
) -> Result<Distance, ProxError> {
    let sites = enumerate(group, depth);
    first_disagreement::<G>(&sites, |g| lookup(group, s, g), |g| lookup(group, t, g))
}

/// Finite window `enumerate(n)` with the set of patterns a shift shows there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftWindow<E> {
    window: Vec<E>,
    patterns: BTreeSet<Vec<Symbol>>,
    alphabet: Alphabet,
}

impl<E: Clone + Eq + std::hash::Hash> ShiftWindow<E> {
    pub fn new<G: Group<Element = E>>(
        group: &G,
        depth: usize,
        patterns: BTreeSet<Vec<Symbol>>,
        alphabet: Alphabet,
    ) -> Result<Self, ProxError> {
        let ok = !patterns.is_empty()
            && patterns.iter().all(|p| {
                p.len() == depth && p.iter().all(|&v| (v as usize) < alphabet.len())
            });
        if !ok {
            return Err(ProxError::BadPatterns);
        }
        Ok(Self {
            window: enumerate(group, depth),
            patterns,
            alphabet,
        })
    }

    /// Patterns of `c` read at every position `g` with `g·window` covered.
    pub fn observe<G: Group<Element = E>>(
        group: &G,
        depth: usize,
        configs: &[WindowConfiguration<E>],
        positions: &ElementSet<E>,
    ) -> Result<Self, ProxError> {
        let window = enumerate(group, depth);
        let mut patterns = BTreeSet::new();
        let mut alphabet = None;
        for c in configs {
            alphabet.get_or_insert_with(|| c.alphabet().clone());
            for g in positions.iter() {
                let p: Option<Vec<Symbol>> =
                    window.iter().map(|w| c.get(&group.mul(g, w))).collect();
                if let Some(p) = p {
                    patterns.insert(p);
                }
            }
        }
        Self::new(group, depth, patterns, alphabet.ok_or(ProxError::BadPatterns)?)
    }

    pub fn depth(&self) -> usize {
        self.window.len()
    }

    pub fn patterns(&self) -> &BTreeSet<Vec<Symbol>> {
        &self.patterns
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn window(&self) -> &[E] {
        &self.window
    }

    /// Pattern set restricted to `enumerate(m)`.
    pub fn prefix(&self, m: usize) -> BTreeSet<Vec<Symbol>> {
        self.patterns.iter().map(|p| p[..m].to_vec()).collect()
    }
}

/// Distance between shifts: `1/(n+1)` for the largest `n` with equal
/// pattern sets on `enumerate(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftDistance {
    pub agree: usize,
    /// Agreement reached the end of the window, so the distance is only an
    /// upper bound.
    pub bound: bool,
}

impl ShiftDistance {
    pub fn value(&self) -> f64 {
        1.0 / (self.agree + 1) as f64
    }
}

pub fn shift_window_metric<E: Clone + Eq + std::hash::Hash>(
    a: &ShiftWindow<E>,
    b: &ShiftWindow<E>,
) -> Result<ShiftDistance, ProxError> {
    if a.alphabet != b.alphabet {
        return Err(ProxError::Incomparable("alphabets differ"));
    }
    if a.window != b.window {
        return Err(ProxError::Incomparable("windows differ"));
    }
    let depth = a.depth();
    // prefix agreement is monotone: agreement on n sites implies it on fewer
    let agree = (1..=depth)
        .take_while(|&m| a.prefix(m) == b.prefix(m))
        .last()
        .unwrap_or(0);
    Ok(ShiftDistance {
        agree,
        bound: agree == depth,
    })
}

/// A shift family that patterns can be drawn from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShiftFamily<E> {
    /// `A^G`: every pattern occurs and any partial pattern extends.
    Full(Alphabet),
    /// Only observed windows, with no way to extend patterns.
    Observed(ShiftWindow<E>),
}

impl<E> ShiftFamily<E> {
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            ShiftFamily::Full(a) => a,
            ShiftFamily::Observed(w) => &w.alphabet,
        }
    }
}

/// Every map `X → A`, in lexicographic order; `X` in canonical order.
pub fn full_patterns(alphabet: &Alphabet, x_size: usize) -> Result<Vec<Vec<Symbol>>, ProxError> {
    let n = alphabet.len();
    let count = (n as f64).powi(x_size as i32);
    if count > 1.0e6 {
        return Err(ProxError::TooManyPatterns(count));
    }
    let mut out = vec![Vec::with_capacity(x_size)];
    for _ in 0..x_size {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |v| {
                    let mut q = p.clone();
                    q.push(v as Symbol);
                    q
                })
            })
            .collect();
    }
    Ok(out)
}

/// X-patterns `(c(g·x))_{x ∈ X}` at every `g ∈ positions` where the whole
/// translate is covered. Errors if no position is covered.
pub fn all_x_patterns<G: Group>(
    group: &G,
    configs: &[WindowConfiguration<G::Element>],
    positions: &ElementSet<G::Element>,
    x: &SymmetricSet<G::Element>,
) -> Result<BTreeSet<Vec<Symbol>>, ProxError> {
    let mut out = BTreeSet::new();
    let mut seen_any = false;
    for c in configs {
        for g in positions.iter() {
            let p: Option<Vec<Symbol>> = x.iter().map(|s| c.get(&group.mul(g, s))).collect();
            if let Some(p) = p {
                seen_any = true;
                out.insert(p);
            }
        }
    }
    if !seen_any {
        return Err(ProxError::Coverage("no fully covered X-translate".into()));
    }
    Ok(out)
}

/// A configuration on `V` showing every X-pattern of the shift.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternLibrary<E> {
    pub u: WindowConfiguration<E>,
    pub v_radius: usize,
    /// `(slot q, pattern p)` with `u(q·x) = p(x)`.
    pub slots: Vec<(E, Vec<Symbol>)>,
}

/// Lays out all X-patterns at pairwise `XX⁻¹`-apart slots taken greedily in
/// canonical order, padding with the least symbol. `V` is the smallest ball
/// containing `slots·X` and `enumerate(m)`.
pub fn build_pattern_library<G: Group>(
    group: &G,
    family: &ShiftFamily<G::Element>,
    x: &SymmetricSet<G::Element>,
    m: usize,
) -> Result<PatternLibrary<G::Element>, ProxError> {
    let ShiftFamily::Full(alphabet) = family else {
        return Err(ProxError::NonConstructive);
    };
    let patterns = full_patterns(alphabet, x.len())?;
    let xx = crate::group::set_product(group, x, &crate::group::set_inverse(group, x));
    let mut slots: Vec<G::Element> = Vec::with_capacity(patterns.len());
    for q in crate::group::CanonicalOrder::new(group) {
        if slots.len() == patterns.len() {
            break;
        }
        let qi = group.inv(&q);
        if slots.iter().all(|p| !xx.contains(&group.mul(&qi, p))) {
            slots.push(q);
        }
    }
    let x_radius = x.iter().map(|g| group.word_length(g)).max().unwrap_or(0);
    let slot_radius = slots.iter().map(|g| group.word_length(g)).max().unwrap_or(0);
    let prefix_radius = enumerate(group, m)
        .iter()
        .map(|g| group.word_length(g))
        .max()
        .unwrap_or(0);
    // slots·X lies in ball(slot_radius + x_radius); take the tightest radius
    let stamped: Vec<G::Element> = slots
        .iter()
        .flat_map(|q| x.iter().map(move |s| group.mul(q, s)))
        .collect();
    let reach = stamped.iter().map(|g| group.word_length(g)).max().unwrap_or(0);
    debug_assert!(reach <= slot_radius + x_radius);
    let v_radius = reach.max(prefix_radius);
    let v = ball(group, v_radius).into_set();
    let mut values = vec![0 as Symbol; v.len()];
    for (q, p) in slots.iter().zip(&patterns) {
        for (s, &val) in x.iter().zip(p) {
            values[v.position(&group.mul(q, s)).expect("slot inside V")] = val;
        }
    }
    let u = WindowConfiguration::new(v, values, alphabet.clone()).expect("library symbols in range");
    Ok(PatternLibrary {
        u,
        v_radius,
        slots: slots.into_iter().zip(patterns).collect(),
    })
}

/// A finite subset of the group, kept implicit when it is a ball.
#[derive(Debug, Clone, PartialEq)]
pub enum FiniteRegion<E> {
    Ball(usize),
    Set(ElementSet<E>),
}

impl<E: Clone + Eq + std::hash::Hash> FiniteRegion<E> {
    pub fn contains<G: Group<Element = E>>(&self, group: &G, g: &E) -> bool {
        match self {
            FiniteRegion::Ball(r) => group.word_length(g) <= *r,
            FiniteRegion::Set(s) => s.contains(g),
        }
    }
}

/// Data for the approximation `T′` of a shift `T` (full shift only).
#[derive(Debug, Clone, PartialEq)]
pub struct ProximalPlan<E> {
    pub epsilon_inv: usize,
    pub x_radius: usize,
    /// Gap of strong irreducibility of `T`; 0 (`U = {e}`) for the full shift.
    pub u_radius: usize,
    pub library: PatternLibrary<E>,
    /// `Z = (VU²X)(VU²X)⁻¹`; a ball because products of balls are balls.
    pub z: FiniteRegion<E>,
}

impl<E: Clone + Eq + std::hash::Hash + Ord + std::fmt::Debug> ProximalPlan<E> {
    /// `X = ball(|g_m|) ⊇ enumerate(m)`, `U = {e}`.
    pub fn full_shift<G: Group<Element = E>>(
        group: &G,
        alphabet: Alphabet,
        epsilon_inv: usize,
    ) -> Result<Self, ProxError> {
        if epsilon_inv == 0 {
            return Err(ProxError::BadEpsilon);
        }
        let last = enumerate(group, epsilon_inv).pop().expect("m >= 1");
        let x_radius = group.word_length(&last);
        let x = ball(group, x_radius);
        let library = build_pattern_library(group, &ShiftFamily::Full(alphabet), &x, epsilon_inv)?;
        let u_radius = 0;
        let z = FiniteRegion::Ball(2 * (library.v_radius + 2 * u_radius + x_radius));
        Ok(Self {
            epsilon_inv,
            x_radius,
            u_radius,
            library,
            z,
        })
    }

    pub fn v_radius(&self) -> usize {
        self.library.v_radius
    }

    /// Radius of `V·U²·X`.
    pub fn reach(&self) -> usize {
        self.library.v_radius + 2 * self.u_radius + self.x_radius
    }

    pub fn x<G: Group<Element = E>>(&self, group: &G) -> SymmetricSet<E> {
        ball(group, self.x_radius)
    }
}

/// Checks that the 1's of a finitely supported `s` are pairwise Z-apart.
pub fn check_z_apart<G: Group>(
    group: &G,
    plan: &ProximalPlan<G::Element>,
    s: &WindowConfiguration<G::Element>,
) -> Result<(), ProxError> {
    let ones: Vec<_> = s.ones().collect();
    for (i, a) in ones.iter().enumerate() {
        let ai = group.inv(a);
        for b in &ones[i + 1..] {
            if plan.z.contains(group, &group.mul(&ai, b)) {
                return Err(ProxError::NotZApart(group.encode(a), group.encode(b)));
            }
        }
    }
    Ok(())
}

/// `t′` on the window of `t`:
/// on `k·V` (with `s(k) = 1`) copy the library, on `k·(VU² ∖ V)` write the
/// least symbol, elsewhere keep `t`.
pub fn build_t_prime<G: Group>(
    group: &G,
    plan: &ProximalPlan<G::Element>,
    s: &WindowConfiguration<G::Element>,
    t: &WindowConfiguration<G::Element>,
) -> Result<WindowConfiguration<G::Element>, ProxError> {
    if s.background() != Some(0) {
        return Err(ProxError::Padding);
    }
    check_z_apart(group, plan, s)?;
    let centers: Vec<(G::Element, G::Element)> =
        s.ones().map(|k| (k.clone(), group.inv(k))).collect();
    let v_r = plan.v_radius();
    let gap_r = v_r + 2 * plan.u_radius;
    let u = &plan.library.u;
    let mut out = Vec::with_capacity(t.window().len());
    for (g, tg) in t.iter() {
        let mut value = tg;
        for (_, ki) in &centers {
            let local = group.mul(ki, g);
            let d = group.word_length(&local);
            if d <= v_r {
                value = u.get(&local).expect("library covers V");
                break;
            } else if d <= gap_r {
                value = 0;
                break;
            }
        }
        out.push(value);
    }
    Ok(WindowConfiguration::new(t.window().clone(), out, t.alphabet().clone())
        .expect("t' symbols in range"))
}

/// Uniform random element of `A^W`.
pub fn random_full_shift_config<G: Group>(
    window: &ElementSet<G::Element>,
    alphabet: &Alphabet,
    seed: u64,
) -> WindowConfiguration<G::Element> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = alphabet.len();
    let values = (0..window.len()).map(|_| rng.gen_range(0..n) as Symbol).collect();
    WindowConfiguration::new(window.clone(), values, alphabet.clone()).expect("in range")
}

/// Random element of `ball(radius)` by a random walk of random length.
pub fn random_element<G: Group, R: Rng>(group: &G, radius: usize, rng: &mut R) -> G::Element {
    let gens = group.generators();
    let steps = rng.gen_range(0..=radius);
    let mut g = group.identity();
    for _ in 0..steps {
        g = group.mul(&g, &gens[rng.gen_range(0..gens.len())]);
    }
    g
}

/// Finitely supported `s` with a 1 at `forced` and up to `extra` further
/// random centers from `ball(spread)`, all pairwise Z-apart.
pub fn sample_s_config<G: Group>(
    group: &G,
    plan: &ProximalPlan<G::Element>,
    forced: &G::Element,
    extra: usize,
    spread: usize,
    seed: u64,
) -> WindowConfiguration<G::Element> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = vec![forced.clone()];
    for _ in 0..extra {
        let c = random_element(group, spread, &mut rng);
        let ci = group.inv(&c);
        if centers.iter().all(|k| !plan.z.contains(group, &group.mul(&ci, k))) {
            centers.push(c);
        }
    }
    WindowConfiguration::finite_support(group, centers)
}

/// Result of a truncated search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Search<E> {
    Found { g: E, distance: Distance },
    NotFound { radius: usize, depth: usize },
}

impl<E> Search<E> {
    pub fn witness(&self) -> Option<&E> {
        match self {
            Search::Found { g, .. } => Some(g),
            Search::NotFound { .. } => None,
        }
    }
}

fn search<G: Group>(
    group: &G,
    t1: &WindowConfiguration<G::Element>,
    t2: &WindowConfiguration<G::Element>,
    m: usize,
    radius: usize,
    depth: usize,
    move_both: bool,
) -> Result<Search<G::Element>, ProxError> {
    if m == 0 {
        return Err(ProxError::BadEpsilon);
    }
    if depth < m {
        return Err(ProxError::ShallowDepth { depth, m });
    }
    let sites = enumerate(group, depth);
    for g in ball(group, radius).iter() {
        let gi = group.inv(g);
        // (g·c)(a) = c(g⁻¹a)
        let moved = |c: &WindowConfiguration<G::Element>, a: &G::Element| {
            lookup(group, c, &group.mul(&gi, a))
        };
        let head = first_disagreement::<G>(
            &sites[..m],
            |a| moved(t1, a),
            |a| if move_both { moved(t2, a) } else { lookup(group, t2, a) },
        )?;
        if head.below_inv(m) {
            let distance = first_disagreement::<G>(
                &sites,
                |a| moved(t1, a),
                |a| if move_both { moved(t2, a) } else { lookup(group, t2, a) },
            )?;
            return Ok(Search::Found {
                g: g.clone(),
                distance,
            });
        }
    }
    Ok(Search::NotFound { radius, depth })
}

/// First `g ∈ ball(radius)` with `d(g·t1, g·t2) < 1/m`.
pub fn check_eps_proximal<G: Group>(
    group: &G,
    t1: &WindowConfiguration<G::Element>,
    t2: &WindowConfiguration<G::Element>,
    m: usize,
    radius: usize,
    depth: usize,
) -> Result<Search<G::Element>, ProxError> {
    search(group, t1, t2, m, radius, depth, true)
}

/// First `g ∈ ball(radius)` with `d(g·t1, t2) < 1/m`.
pub fn check_eps_minimal<G: Group>(
    group: &G,
    t1: &WindowConfiguration<G::Element>,
    t2: &WindowConfiguration<G::Element>,
    m: usize,
    radius: usize,
    depth: usize,
) -> Result<Search<G::Element>, ProxError> {
    search(group, t1, t2, m, radius, depth, false)
}

/// Union of proximality witnesses over all pairs; fails on the first pair
/// (by index) without one.
pub fn proximality_witness_set<G: Group>(
    group: &G,
    pairs: &[(WindowConfiguration<G::Element>, WindowConfiguration<G::Element>)],
    m: usize,
    radius: usize,
    depth: usize,
) -> Result<ElementSet<G::Element>, ProxError> {
    let found: Vec<Result<Search<G::Element>, ProxError>> = pairs
        .par_iter()
        .map(|(a, b)| check_eps_proximal(group, a, b, m, radius, depth))
        .collect();
    let mut witnesses = Vec::with_capacity(found.len());
    for (i, r) in found.into_iter().enumerate() {
        match r? {
            Search::Found { g, .. } => witnesses.push(g),
            Search::NotFound { .. } => return Err(ProxError::PairFailed(i)),
        }
    }
    Ok(ElementSet::from_iter_in(group, witnesses))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction<E> {
    /// No `a` has `u(a) = (g·u)(a) = 1`: for each 1 of `u` at `a`, the
    /// conjugate `a⁻¹ga` lies in `X`, so `g⁻¹a` and `a` are not X-apart.
    Certificate { ones_checked: usize },
    /// `u` already has two 1's that are not X-apart.
    Refutation { pair: (E, E) },
}

/// Certificate that `u` and `g·u` share no 1 on the window of `u`, for any
/// `u` whose 1's are X-apart, provided `X` holds the conjugates of `g` by
/// `ball(conj_radius)` and the window sits inside that ball.
pub fn obstruction_certificate<G: Group>(
    group: &G,
    g: &G::Element,
    x: &SymmetricSet<G::Element>,
    u: &WindowConfiguration<G::Element>,
    conj_radius: usize,
) -> Result<Obstruction<G::Element>, ProxError> {
    if let Some(far) = u.window().iter().find(|a| group.word_length(a) > conj_radius) {
        return Err(ProxError::ConjugatorRadius(group.encode(far), conj_radius));
    }
    if let Some(c) = truncated_conjugates(group, g, conj_radius)
        .iter()
        .find(|c| !x.contains(c))
    {
        return Err(ProxError::MissingConjugate(group.encode(c)));
    }
    if let Some(pair) = check_ones_apart(group, u, x).into_iter().next() {
        return Ok(Obstruction::Refutation { pair });
    }
    let mut ones_checked = 0;
    for a in u.ones() {
        let conj = group.conjugate(g, a);
        debug_assert!(x.contains(&conj));
        ones_checked += 1;
    }
    Ok(Obstruction::Certificate { ones_checked })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Faithfulness<E> {
    /// `(g·s)(site) ≠ s(site)` for sample `sample`.
    Moved { sample: usize, site: E },
    /// Every sample is `g`-invariant on its observed window.
    Inconclusive,
}

/// Looks for a sample moved by `g` on the sites where both `s` and `g·s`
/// are known.
pub fn faithfulness_check<G: Group>(
    group: &G,
    g: &G::Element,
    samples: &[WindowConfiguration<G::Element>],
) -> Result<Faithfulness<G::Element>, ProxError> {
    let gi = group.inv(g);
    let mut compared = false;
    for (i, s) in samples.iter().enumerate() {
        let sites = s.window().union_in(group, &s.window().translate(group, g));
        for a in sites.iter() {
            let (Some(moved), Some(here)) = (s.get(&group.mul(&gi, a)), s.get(a)) else {
                continue;
            };
            compared = true;
            if moved != here {
                return Ok(Faithfulness::Moved {
                    sample: i,
                    site: a.clone(),
                });
            }
        }
    }
    if !compared && !samples.is_empty() {
        return Err(ProxError::Coverage("no site known in both s and g·s".into()));
    }
    Ok(Faithfulness::Inconclusive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FreeGroup, Heisenberg, Lattice, LatticePoint};

    fn int_config(z: &Lattice, lo: i64, vals: &[u8]) -> WindowConfiguration<LatticePoint> {
        let w = ElementSet::from_iter_in(z, (0..vals.len() as i64).map(|i| z.point(&[lo + i])));
        WindowConfiguration::from_fn(w, Alphabet::binary(), |p| vals[(p.coords()[0] - lo) as usize])
    }

    #[test]
    fn metric_examples() {
        let z = Lattice::new(1);
        // canonical order 0, -1, 1, -2, 2
        let s = int_config(&z, -2, &[0, 0, 0, 0, 0]);
        assert_eq!(config_metric(&z, &s, &s, 5).unwrap(), Distance::Within(5));
        let t = int_config(&z, -2, &[0, 0, 0, 0, 1]);
        assert!(config_metric(&z, &s, &t, 5).unwrap() == Distance::Exact(5));
        let t = int_config(&z, -2, &[0, 0, 0, 1, 0]);
        assert_eq!(config_metric(&z, &s, &t, 5).unwrap(), Distance::Exact(3));
        assert_eq!(config_metric(&z, &s, &t, 5).unwrap().value(), 1.0 / 3.0);
        let t = int_config(&z, -2, &[0, 0, 1, 0, 0]);
        assert_eq!(config_metric(&z, &s, &t, 5).unwrap().value(), 1.0);
        assert!(config_metric(&z, &s, &t, 6).is_ok());
        let short = int_config(&z, 0, &[0]);
        assert!(matches!(config_metric(&z, &short, &short, 2), Err(ProxError::Coverage(_))));
    }

    #[test]
    fn shift_metric_examples() {
        let z = Lattice::new(1);
        let all: BTreeSet<Vec<u8>> = full_patterns(&Alphabet::binary(), 10).unwrap().into_iter().collect();
        let a = ShiftWindow::new(&z, 10, all.clone(), Alphabet::binary()).unwrap();
        let d = shift_window_metric(&a, &a).unwrap();
        assert!(d.bound && (d.value() - 1.0 / 11.0).abs() < 1e-15);

        let zeros = ShiftWindow::new(&z, 10, [vec![0; 10]].into(), Alphabet::binary()).unwrap();
        let ones = ShiftWindow::new(&z, 10, [vec![1; 10]].into(), Alphabet::binary()).unwrap();
        assert_eq!(shift_window_metric(&zeros, &ones).unwrap().value(), 1.0);

        let mut p = vec![0u8; 10];
        p[4] = 1;
        let other = ShiftWindow::new(&z, 10, [vec![0; 10], p].into(), Alphabet::binary()).unwrap();
        assert_eq!(shift_window_metric(&zeros, &other).unwrap().value(), 1.0 / 5.0);
        assert!(ShiftWindow::new(&z, 3, BTreeSet::new(), Alphabet::binary()).is_err());
    }

    #[test]
    fn pattern_counts() {
        let z = Lattice::new(1);
        assert_eq!(full_patterns(&Alphabet::binary(), 3).unwrap().len(), 8);
        let c = WindowConfiguration::constant(ball(&z, 5).into_set(), 1, Alphabet::binary());
        let pats = all_x_patterns(&z, &[c], ball(&z, 4).as_set(), &ball(&z, 1)).unwrap();
        assert_eq!(pats.len(), 1);
    }

    #[test]
    fn integer_library() {
        let z = Lattice::new(1);
        let x = ball(&z, 1);
        let lib = build_pattern_library(&z, &ShiftFamily::Full(Alphabet::binary()), &x, 3).unwrap();
        assert_eq!(lib.slots.len(), 8);
        assert!(lib.v_radius <= 24);
        let v = ball(&z, lib.v_radius).into_set();
        let interior = crate::glue::x_interior(&z, &v, &x);
        let seen = all_x_patterns(&z, std::slice::from_ref(&lib.u), &interior, &x).unwrap();
        assert_eq!(seen.len(), 8);

        let unary = Alphabet::numeric(1);
        let lib = build_pattern_library(&z, &ShiftFamily::Full(unary), &x, 3).unwrap();
        assert_eq!(lib.slots.len(), 1);
        assert_eq!(ball(&z, lib.v_radius), x);

        let observed = ShiftWindow::new(&z, 1, [vec![0]].into(), Alphabet::binary()).unwrap();
        assert_eq!(
            build_pattern_library(&z, &ShiftFamily::Observed(observed), &x, 3),
            Err(ProxError::NonConstructive)
        );
    }

    #[test]
    fn z_is_a_ball_product() {
        let z = Lattice::new(1);
        let plan = ProximalPlan::full_shift(&z, Alphabet::binary(), 2).unwrap();
        let vux = ball(&z, plan.reach());
        let prod = crate::group::set_product(&z, &vux, &crate::group::set_inverse(&z, &vux));
        assert_eq!(prod, ball(&z, 2 * plan.reach()).into_set());
        assert_eq!(plan.z, FiniteRegion::Ball(2 * plan.reach()));
    }

    #[test]
    fn t_prime_cases() {
        let z = Lattice::new(1);
        let plan = ProximalPlan::full_shift(&z, Alphabet::binary(), 4).unwrap();
        let w = ball(&z, plan.reach() + 30).into_set();
        let t = random_full_shift_config::<Lattice>(&w, &Alphabet::binary(), 9);
        let zero_s = WindowConfiguration::finite_support(&z, []);
        assert_eq!(build_t_prime(&z, &plan, &zero_s, &t).unwrap(), t);

        let s = WindowConfiguration::finite_support(&z, [z.point(&[3])]);
        let tp = build_t_prime(&z, &plan, &s, &t).unwrap();
        for (g, v) in tp.iter() {
            let local = z.mul(&z.point(&[-3]), g);
            if z.word_length(&local) <= plan.v_radius() {
                assert_eq!(Some(v), plan.library.u.get(&local));
            } else {
                assert_eq!(Some(v), t.get(g));
            }
        }
        let close = WindowConfiguration::finite_support(&z, [z.point(&[0]), z.point(&[5])]);
        assert!(matches!(build_t_prime(&z, &plan, &close, &t), Err(ProxError::NotZApart(_, _))));
        assert_eq!(build_t_prime(&z, &plan, &t, &t), Err(ProxError::Padding));
    }

    #[test]
    fn proximal_and_minimal_on_free_group() {
        let f = FreeGroup::new(2);
        let m = 4;
        let plan = ProximalPlan::full_shift(&f, Alphabet::binary(), m).unwrap();
        let w = ball(&f, plan.v_radius() + plan.x_radius + 2).into_set();
        let g0 = f.parse_word("ab").unwrap();
        let mk = |seed: u64| {
            let s = sample_s_config(&f, &plan, &g0, 4, 12, seed);
            let t = random_full_shift_config::<FreeGroup>(&w, &Alphabet::binary(), seed);
            build_t_prime(&f, &plan, &s, &t).unwrap()
        };
        let (t1, t2) = (mk(1), mk(2));
        let found = check_eps_proximal(&f, &t1, &t2, m, 2, m).unwrap();
        assert!(found.witness().is_some());
        let radius = plan.v_radius() - plan.x_radius + 2;
        assert!(check_eps_minimal(&f, &t1, &t2, m, radius, m).unwrap().witness().is_some());
        assert!(check_eps_minimal(&f, &t2, &t1, m, radius, m).unwrap().witness().is_some());
    }

    #[test]
    fn trivial_search_cases() {
        let z = Lattice::new(1);
        let w = ball(&z, 10).into_set();
        let t = random_full_shift_config::<Lattice>(&w, &Alphabet::binary(), 4);
        let found = check_eps_proximal(&z, &t, &t, 3, 2, 3).unwrap();
        assert_eq!(found.witness(), Some(&z.identity()));
        assert_eq!(check_eps_minimal(&z, &t, &t, 3, 2, 3).unwrap().witness(), Some(&z.identity()));
        let zeros = WindowConfiguration::constant(w.clone(), 0, Alphabet::binary());
        let ones = WindowConfiguration::constant(w.clone(), 1, Alphabet::binary());
        assert_eq!(
            check_eps_proximal(&z, &zeros, &ones, 3, 5, 3).unwrap(),
            Search::NotFound { radius: 5, depth: 3 }
        );
        assert!(check_eps_minimal(&z, &zeros, &ones, 3, 5, 3).unwrap().witness().is_none());
        assert!(check_eps_proximal(&z, &t, &t, 3, 2, 2).is_err());
    }

    #[test]
    fn witness_sets() {
        let z = Lattice::new(1);
        let w = ball(&z, 10).into_set();
        let t = random_full_shift_config::<Lattice>(&w, &Alphabet::binary(), 4);
        let pairs = vec![(t.clone(), t.clone()); 3];
        let set = proximality_witness_set(&z, &pairs, 2, 2, 2).unwrap();
        assert_eq!(set.as_slice(), &[z.identity()]);
        assert!(proximality_witness_set(&z, &[], 2, 2, 2).unwrap().is_empty());
        let zeros = WindowConfiguration::constant(w.clone(), 0, Alphabet::binary());
        let ones = WindowConfiguration::constant(w, 1, Alphabet::binary());
        assert_eq!(
            proximality_witness_set(&z, &[(t.clone(), t), (zeros, ones)], 2, 2, 2),
            Err(ProxError::PairFailed(1))
        );
    }

    #[test]
    fn obstruction_examples() {
        let z = Lattice::new(1);
        let x = ball(&z, 1);
        let one = z.point(&[1]);
        let u = int_config(&z, -3, &[1, 0, 1, 0, 0, 1, 0]);
        assert_eq!(
            obstruction_certificate(&z, &one, &x, &u, 3).unwrap(),
            Obstruction::Certificate { ones_checked: 3 }
        );
        let bad = int_config(&z, 0, &[1, 1, 0]);
        assert_eq!(
            obstruction_certificate(&z, &one, &x, &bad, 3).unwrap(),
            Obstruction::Refutation {
                pair: (z.point(&[0]), z.point(&[1]))
            }
        );
        assert!(matches!(
            obstruction_certificate(&z, &z.point(&[2]), &x, &u, 3),
            Err(ProxError::MissingConjugate(_))
        ));

        let h = Heisenberg::new();
        let c = h.central();
        let xh = SymmetricSet::symmetrize(&h, ball(&h, 1).iter().cloned().chain([c]));
        let w = ball(&h, 2).into_set();
        let field = crate::field::RandomField::new(3);
        let uh = crate::field::local_max_config(&h, &field, &xh, &w);
        assert!(matches!(
            obstruction_certificate(&h, &c, &xh, &uh, 2).unwrap(),
            Obstruction::Certificate { .. }
        ));
    }

    #[test]
    fn faithfulness_examples() {
        let z = Lattice::new(1);
        let one = z.point(&[1]);
        let s = WindowConfiguration::finite_support(&z, [z.identity()]);
        assert!(matches!(
            faithfulness_check(&z, &one, &[s]).unwrap(),
            Faithfulness::Moved { sample: 0, .. }
        ));
        let c = WindowConfiguration::constant(ball(&z, 4).into_set(), 1, Alphabet::binary());
        assert_eq!(faithfulness_check(&z, &one, &[c]).unwrap(), Faithfulness::Inconclusive);
    }
}
