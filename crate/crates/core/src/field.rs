//! Keyed-hash random field and the local-maximum configuration.
//!
//! Each site gets a 64-bit value `xxh3(seed ‖ normal form)`; a site is 1 when
//! its value beats every other site of its X-neighbourhood. Hash ties are
//! broken by the normal-form order (larger element wins).

use rayon::prelude::*;
use thiserror::Error;
use xxhash_rust::xxh3::xxh3_64_with_seed;

use crate::configuration::{Alphabet, WindowConfiguration};
use crate::group::{ElementSet, Group, SymmetricSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("event estimate needs at least one site")]
    EmptySites,
    #[error("event estimate needs at least one trial")]
    NoTrials,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Source {
    Hashed,
    Constant(u64),
}

/// The i.i.d. field `V_a`, realized as a pure function of `(seed, a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomField {
    seed: u64,
    source: Source,
}

impl RandomField {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            source: Source::Hashed,
        }
    }

    /// Every site gets the same value; only the tie-break decides.
    pub fn constant(value: u64) -> Self {
        Self {
            seed: 0,
            source: Source::Constant(value),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn raw<G: Group>(&self, group: &G, a: &G::Element, buf: &mut Vec<u8>) -> u64 {
        match self.source {
            Source::Constant(v) => v,
            Source::Hashed => {
                // the seed goes into the input as well: xxh3's seeded path for
                // 4..=8 byte keys folds them so that a⁴ and a⁵ barely differ
                buf.clear();
                buf.extend_from_slice(&self.seed.to_le_bytes());
                group.key_bytes(a, buf);
                xxh3_64_with_seed(buf, self.seed)
            }
        }
    }

    /// `V_a ∈ [0, 1)`.
    pub fn value<G: Group>(&self, group: &G, a: &G::Element) -> f64 {
        let mut buf = Vec::with_capacity(32);
        (self.raw(group, a, &mut buf) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// `u(a) = 1` iff `V_a > V_{ax}` for all `x ∈ X \ {e}`.
    pub fn is_local_max<G: Group>(
        &self,
        group: &G,
        x: &SymmetricSet<G::Element>,
        a: &G::Element,
        buf: &mut Vec<u8>,
    ) -> bool {
        let va = self.raw(group, a, buf);
        for step in x.non_identity(group) {
            let b = group.mul(a, step);
            let vb = self.raw(group, &b, buf);
            if vb == va {
                log::debug!("field tie between {a:?} and {b:?} (seed {})", self.seed);
                if b > *a {
                    return false;
                }
            } else if vb > va {
                return false;
            }
        }
        true
    }
}

/// Seed of the `i`-th trial derived from a base seed (splitmix64 finalizer).
pub fn derive_seed(base: u64, i: u64) -> u64 {
    let mut z = base ^ i.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Binary configuration `u` on `window`; reads the field on `window·X`.
pub fn local_max_config<G: Group>(
    group: &G,
    field: &RandomField,
    x: &SymmetricSet<G::Element>,
    window: &ElementSet<G::Element>,
) -> WindowConfiguration<G::Element> {
    let mut buf = Vec::with_capacity(32);
    WindowConfiguration::from_fn(window.clone(), Alphabet::binary(), |a| {
        field.is_local_max(group, x, a, &mut buf) as u8
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub hits: u64,
    pub trials: u64,
}

impl Estimate {
    pub fn probability(&self) -> f64 {
        self.hits as f64 / self.trials as f64
    }

    pub fn std_error(&self) -> f64 {
        let p = self.probability();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// Monte Carlo estimate of `Pr[u(c) = 1 for every listed site c]` over
/// `trials` seeds derived from `base_seed`.
pub fn event_probability_estimate<G: Group>(
    group: &G,
    x: &SymmetricSet<G::Element>,
    sites: &[G::Element],
    trials: u64,
    base_seed: u64,
) -> Result<Estimate, FieldError> {
    if sites.is_empty() {
        return Err(FieldError::EmptySites);
    }
    if trials == 0 {
        return Err(FieldError::NoTrials);
    }
    let hits = (0..trials)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(32),
            |buf, i| {
                let field = RandomField::new(derive_seed(base_seed, i));
                sites.iter().all(|c| field.is_local_max(group, x, c, buf)) as u64
            },
        )
        .sum();
    Ok(Estimate { hits, trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{ball, is_x_apart, FreeGroup, Lattice};

    #[test]
    fn values_are_deterministic_and_in_range() {
        let f = FreeGroup::new(2);
        let field = RandomField::new(42);
        for g in ball(&f, 3).iter() {
            let v = field.value(&f, g);
            assert_eq!(v, field.value(&f, g));
            assert!((0.0..1.0).contains(&v));
        }
    }

    #[test]
    fn seeds_give_distinct_values() {
        let z = Lattice::new(1);
        let window = ball(&z, 499);
        let mut collisions = 0;
        let mut buf = Vec::new();
        for s in 0..1000u64 {
            let f1 = RandomField::new(derive_seed(1, s));
            let f2 = RandomField::new(derive_seed(2, s));
            for a in window.iter() {
                if f1.raw(&z, a, &mut buf) == f2.raw(&z, a, &mut buf) {
                    collisions += 1;
                }
            }
        }
        assert_eq!(collisions, 0);
    }

    #[test]
    fn field_mean_is_one_half() {
        let f = FreeGroup::new(2);
        let field = RandomField::new(7);
        let b = ball(&f, 6);
        let mean: f64 = b.iter().map(|g| field.value(&f, g)).sum::<f64>() / b.len() as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn no_adjacent_maxima_on_integers() {
        let z = Lattice::new(1);
        let x = ball(&z, 1);
        let w = ball(&z, 50);
        for seed in 0..50 {
            let u = local_max_config(&z, &RandomField::new(seed), &x, &w);
            for a in u.ones() {
                assert!(!u.is_one(&z.mul(a, &z.point(&[1]))));
            }
        }
    }

    #[test]
    fn ones_are_x_apart_in_free_group() {
        let f = FreeGroup::new(2);
        let x = ball(&f, 1);
        let w = ball(&f, 4);
        let u = local_max_config(&f, &RandomField::new(3), &x, &w);
        let ones: Vec<_> = u.ones().cloned().collect();
        for (i, a) in ones.iter().enumerate() {
            for b in &ones[i + 1..] {
                assert!(is_x_apart(&f, a, b, &x));
            }
        }
    }

    #[test]
    fn density_near_one_third() {
        let z = Lattice::new(1);
        let x = ball(&z, 1);
        let w = ball(&z, 50);
        let mut total = 0.0;
        for seed in 0..1000 {
            let u = local_max_config(&z, &RandomField::new(derive_seed(99, seed)), &x, &w);
            let frac = u.ones().count() as f64 / w.len() as f64;
            if seed == 0 {
                assert!((frac - 1.0 / 3.0).abs() < 0.15, "single window {frac}");
            }
            total += frac;
        }
        let avg = total / 1000.0;
        assert!((avg - 1.0 / 3.0).abs() < 0.01, "average {avg}");
    }

    #[test]
    fn window_extension_is_consistent() {
        let f = FreeGroup::new(2);
        let x = ball(&f, 1);
        let field = RandomField::new(11);
        let small = local_max_config(&f, &field, &x, &ball(&f, 2));
        let large = local_max_config(&f, &field, &x, &ball(&f, 4));
        for (g, v) in small.iter() {
            assert_eq!(large.get(g), Some(v));
        }
    }

    #[test]
    fn constant_field_falls_back_to_normal_form_order() {
        // every site ties, so a site is 1 iff it exceeds all X-neighbours
        let f = FreeGroup::new(2);
        let x = ball(&f, 1);
        let w = ball(&f, 3);
        let u = local_max_config(&f, &RandomField::constant(5), &x, &w);
        for (a, v) in u.iter() {
            let expected = x.non_identity(&f).all(|s| f.mul(a, s) < *a);
            assert_eq!(v == 1, expected);
        }
        let z = Lattice::new(1);
        let uz = local_max_config(&z, &RandomField::constant(5), &ball(&z, 1), &ball(&z, 20));
        assert_eq!(uz.ones().count(), 0);
    }

    #[test]
    fn adjacent_sites_never_both_maxima() {
        let z = Lattice::new(1);
        let x = ball(&z, 1);
        let est = event_probability_estimate(&z, &x, &[z.point(&[0]), z.point(&[1])], 2000, 1)
            .unwrap();
        assert_eq!(est.hits, 0);
    }

    #[test]
    fn estimate_rejects_empty_sites() {
        let z = Lattice::new(1);
        assert_eq!(
            event_probability_estimate(&z, &ball(&z, 1), &[], 10, 0),
            Err(FieldError::EmptySites)
        );
    }
}
