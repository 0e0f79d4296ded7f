use proptest::prelude::*;

use proxshift::configuration::{Alphabet, WindowConfiguration};
use proxshift::field::{event_probability_estimate, local_max_config, RandomField};
use proxshift::format::{
    decode_configuration, decode_packing, encode_configuration, encode_packing, Report,
};
use proxshift::group::{
    ball, is_x_apart, set_product, ElementSet, FreeGroup, FreeWord, Group, Heisenberg, Lattice,
};
use proxshift::packing::{greedy_saturate, is_saturated, saturation_interior, ScanOrder, Shape};
use proxshift::prox::{config_metric, random_full_shift_config};

fn word() -> impl Strategy<Value = FreeWord> {
    prop::collection::vec(prop::sample::select(vec!['a', 'A', 'b', 'B']), 0..8).prop_map(|w| {
        let f = FreeGroup::new(2);
        w.into_iter()
            .map(|c| f.parse_word(&c.to_string()).unwrap())
            .fold(f.identity(), |acc, g| f.mul(&acc, &g))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_metric_is_an_ultrametric(seed in any::<u64>(), flips in prop::collection::vec((0usize..25, 0usize..25), 0..6)) {
        let z = Lattice::new(2);
        let window = ball(&z, 3).into_set();
        let s = random_full_shift_config::<Lattice>(&window, &Alphabet::binary(), seed);
        let flip = |c: &WindowConfiguration<_>, at: &[usize]| {
            let mut v = c.values().to_vec();
            for &i in at {
                v[i] ^= 1;
            }
            WindowConfiguration::new(c.window().clone(), v, c.alphabet().clone()).unwrap()
        };
        let t = flip(&s, &flips.iter().map(|p| p.0).collect::<Vec<_>>());
        let u = flip(&t, &flips.iter().map(|p| p.1).collect::<Vec<_>>());
        let d = |a, b| config_metric(&z, a, b, window.len()).unwrap().value();
        prop_assert!(d(&s, &u) <= d(&s, &t).max(d(&t, &u)));
        prop_assert_eq!(d(&s, &t), d(&t, &s));
        prop_assert_eq!(d(&s, &s), 0.0);
    }

    #[test]
    fn x_apartness_is_symmetric(g in word(), h in word(), r in 0usize..3) {
        let f = FreeGroup::new(2);
        let x = ball(&f, r);
        prop_assert_eq!(is_x_apart(&f, &g, &h, &x), is_x_apart(&f, &h, &g, &x));
        prop_assert!(!is_x_apart(&f, &g, &g, &x));
    }

    #[test]
    fn field_window_extension_is_consistent(seed in any::<u64>(), r in 1usize..4) {
        let f = FreeGroup::new(2);
        let x = ball(&f, 1);
        let field = RandomField::new(seed);
        let big = local_max_config(&f, &field, &x, &ball(&f, r + 1).into_set());
        let small = local_max_config(&f, &field, &x, &ball(&f, r).into_set());
        prop_assert_eq!(big.restrict(&f, small.window()), Some(small.clone()));
        let ones: Vec<_> = big.ones().cloned().collect();
        for (i, a) in ones.iter().enumerate() {
            for b in &ones[i + 1..] {
                prop_assert!(is_x_apart(&f, a, b, &x));
            }
        }
    }

    #[test]
    fn packings_are_disjoint_and_translate(seed in any::<u64>(), g in word(), cells in prop::collection::btree_set(word(), 1..4)) {
        let f = FreeGroup::new(2);
        let shape = Shape::new("s", ElementSet::from_iter_in(&f, cells)).unwrap();
        let window = ball(&f, 3).into_set();
        let shapes = [shape];
        let p = greedy_saturate(&f, &window, &shapes, &[], ScanOrder::Shuffled(seed)).unwrap();
        prop_assert!(p.check_disjoint(&f).is_ok());
        let moved = p.translate(&f, &g);
        prop_assert!(moved.check_disjoint(&f).is_ok());
        prop_assert_eq!(moved.translate(&f, &f.inv(&g)), p.clone());
        let interior = saturation_interior(&f, moved.window(), &shapes);
        prop_assert!(is_saturated(&f, &moved, &interior).unwrap());
    }

    #[test]
    fn configurations_round_trip(seed in any::<u64>(), r in 0usize..4, symbols in 2usize..5, bg in prop::option::of(0u8..2)) {
        let h = Heisenberg::new();
        let window = ball(&h, r).into_set();
        let c = random_full_shift_config::<Heisenberg>(&window, &Alphabet::numeric(symbols), seed);
        let c = match bg {
            Some(b) => c.with_background(b),
            None => c,
        };
        let meta = vec![("seed".to_string(), seed.to_string())];
        let text = encode_configuration(&h, &c, &meta);
        let (back, m) = decode_configuration(&h, &text).unwrap();
        prop_assert_eq!(encode_configuration(&h, &back, &m), text);
        prop_assert_eq!(back, c);
    }

    #[test]
    fn packings_round_trip(seed in any::<u64>(), width in 1i64..4) {
        let z = Lattice::new(2);
        let cells = ElementSet::from_iter_in(&z, (0..width).map(|i| z.point(&[i, 0])));
        let shapes = [Shape::new("bar", cells).unwrap(), Shape::new("dot", ElementSet::from_iter_in(&z, [z.identity()])).unwrap()];
        let p = greedy_saturate(&z, &ball(&z, 4).into_set(), &shapes, &[], ScanOrder::Shuffled(seed)).unwrap();
        let text = encode_packing(&z, &p, &vec![]);
        let (back, _) = decode_packing(&z, &text).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn reports_round_trip(entries in prop::collection::vec(("[a-z_]{1,8}", "[ -~]{0,12}"), 0..10)) {
        let mut r = Report::new("prop");
        for (k, v) in &entries {
            r.push(k.clone(), v);
        }
        prop_assert_eq!(Report::decode(&r.encode()).unwrap(), r);
    }
}

#[test]
fn ball_products_are_balls() {
    fn check<G: Group>(group: &G, max: usize) {
        for r in 0..=max {
            for s in 0..=max - r {
                let prod = set_product(group, &ball(group, r), &ball(group, s));
                assert_eq!(prod, ball(group, r + s).into_set(), "{} r={r} s={s}", group.label());
            }
        }
    }
    check(&Lattice::new(2), 4);
    check(&FreeGroup::new(2), 4);
    check(&Heisenberg::new(), 3);
}

/// Joint hit rate at pairwise X²-apart sites stays within 3 standard errors
/// of `|X|^{-n}`.
#[test]
fn apart_sites_are_independent() {
    fn check<G: Group>(group: &G, sites: Vec<G::Element>, seed: u64) {
        let x = ball(group, 1);
        let n = sites.len() as i32;
        let want = (1.0 / x.len() as f64).powi(n);
        let est = event_probability_estimate(group, &x, &sites, 200_000, seed).unwrap();
        let se = (want * (1.0 - want) / est.trials as f64).sqrt();
        assert!(
            (est.probability() - want).abs() <= 3.0 * se,
            "{} n={n}: {} vs {want}",
            group.label(),
            est.probability()
        );
    }
    let z = Lattice::new(1);
    check(&z, vec![z.point(&[0]), z.point(&[7])], 1);
    check(&z, vec![z.point(&[-9]), z.point(&[0]), z.point(&[9])], 2);
    let f = FreeGroup::new(2);
    let w = |s: &str| f.parse_word(s).unwrap();
    check(&f, vec![w("e"), w("aaaaa")], 3);
    check(&f, vec![w("e"), w("bbbbb"), w("AAAAA")], 4);
    check(&f, vec![w("a"), w("aaaa"), w("aaaaaaa")], 5);
}
