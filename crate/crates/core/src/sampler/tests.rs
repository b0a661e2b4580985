use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;
use rand::Rng;

use super::*;
use crate::caps::Caps;
use crate::fraisse::{CanonicalOrder, GraphPrefix};
use crate::measure::mu_exact;
use crate::orders::{EventExpr, OrderPrefix, OrderPresentation};
use crate::testutil::{permutations, rng};
use crate::ExactRational;

fn q(n: i64, d: i64) -> ExactRational {
    ExactRational::new(n.into(), d.into())
}

fn within_4se(hits: usize, trials: usize, p: f64) -> bool {
    let freq = hits as f64 / trials as f64;
    (freq - p).abs() <= 4.0 * (p * (1.0 - p) / trials as f64).sqrt()
}

#[test]
fn single_element_prefix() {
    assert_eq!(sample_prefix(7, 1).unwrap(), OrderPrefix::identity(1));
    assert!(sample_prefix(7, 0).unwrap().is_empty());
}

#[test]
fn prefixes_are_consistent_and_deterministic() {
    for seed in 0..100 {
        let ten = sample_prefix(seed, 10).unwrap();
        assert_eq!(ten.restrict(5).unwrap(), sample_prefix(seed, 5).unwrap());
        assert_eq!(ten, sample_prefix(seed, 10).unwrap());
    }
    assert_ne!(sample_prefix(1, 10).unwrap(), sample_prefix(2, 10).unwrap());
}

#[test]
fn stream_order_agrees_with_its_prefixes() {
    let s = RandomOrderStream::new(99);
    let p = s.prefix(30).unwrap();
    for a in 0..30 {
        assert!(!s.less(a, a));
        for b in 0..30 {
            if a != b {
                assert_eq!(s.less(a, b), p.less(a, b));
                assert_ne!(s.less(a, b), s.less(b, a));
            }
        }
    }
    assert_eq!(s.id(), "stream-99");
}

#[test]
fn keys_are_revealed_lazily() {
    let s = RandomOrderStream::new(3);
    assert_eq!(s.revealed(), 0);
    s.less(2, 5);
    assert_eq!(s.revealed(), 6);
    s.less(0, 1);
    assert_eq!(s.revealed(), 6);
}

#[test]
fn no_tie_breaks_in_ordinary_samples() {
    let r = sample_prefix_with_report(5, 10_000).unwrap();
    assert!(r.tie_cap_hits.is_empty());
    assert_eq!(r.prefix.len(), 10_000);
}

#[test]
fn sample_length_cap() {
    assert!(sample_prefix(0, MAX_SAMPLE_LEN + 1)
        .unwrap_err()
        .is_cap_exceeded());
}

#[test]
fn three_element_orders_are_uniform() {
    let trials = 30_000;
    let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for seed in 0..trials as u64 {
        *counts
            .entry(sample_prefix(seed, 3).unwrap().sequence())
            .or_default() += 1;
    }
    assert_eq!(counts.len(), 6);
    for (order, &c) in &counts {
        assert!(within_4se(c, trials, 1.0 / 6.0), "{order:?}: {c}");
    }
}

#[test]
fn cylinder_frequencies_inside_a_longer_prefix() {
    // ord(4<1<7) inside prefixes of length 9.
    let trials = 30_000;
    let hits = (0..trials as u64)
        .filter(|&s| {
            let p = sample_prefix(s, 9).unwrap();
            p.less(4, 1) && p.less(1, 7)
        })
        .count();
    assert!(within_4se(hits, trials, 1.0 / 6.0));
}

#[test]
fn density_levels() {
    let f = MLTestFamily::density(0, 1).unwrap();
    let l1 = f.level(1).unwrap();
    assert_eq!((l1.size, l1.exact_mu.clone()), (8, q(1, 4)));
    let l3 = f.level(3).unwrap();
    assert_eq!((l3.size, l3.exact_mu.clone()), (32, q(2, 32)));
    assert_eq!(f.level(2).unwrap().size, 16);
    let far = MLTestFamily::density(5, 2).unwrap().level(1).unwrap();
    assert_eq!(far.size, 24);
    for k in 1..=5 {
        assert!(level_bound_holds(&f.level(k).unwrap()));
    }
    assert!(matches!(
        MLTestFamily::density(3, 3),
        Err(crate::Error::Precondition(_))
    ));
    assert_eq!(f.name(), "density(0,1)");
}

#[test]
fn density_level_expression_has_the_level_measure() {
    let l = MLTestFamily::density(0, 1).unwrap().level(1).unwrap();
    let e = l.to_expr().unwrap();
    assert_eq!(
        mu_exact::<ExactRational>(&e, &Caps::default()).unwrap(),
        l.exact_mu
    );
    for perm in permutations(&(0..8).collect::<Vec<_>>())
        .into_iter()
        .step_by(97)
    {
        let o = OrderPrefix::from_sequence(perm).unwrap();
        assert_eq!(l.member(&o), crate::orders::evaluate(&e, &o).unwrap());
    }
}

#[test]
fn density_failure_rate_matches_level_measure() {
    let f = MLTestFamily::density(0, 1).unwrap();
    for k in 1..=3 {
        let l = f.level(k).unwrap();
        let p = l.exact_mu.to_f64().unwrap();
        let fails = (0..1000)
            .filter(|&s| l.member(&RandomOrderStream::new(s)))
            .count();
        assert!(within_4se(fails, 1000, p), "k = {k}: {fails}");
    }
}

#[test]
fn least_element_probability() {
    // "0 is least among {0,…,N}" has measure 1/(N+1).
    for n in 1..=6usize {
        let e = EventExpr::all((1..=n).map(|j| EventExpr::atom(vec![0, j]).unwrap()));
        let mu: ExactRational = mu_exact(&e, &Caps::default()).unwrap();
        assert_eq!(mu, q(1, n as i64 + 1));
    }
}

#[test]
fn unbounded_levels() {
    let f = MLTestFamily::unbounded(0);
    for k in 1..=5 {
        let l = f.level(k).unwrap();
        assert_eq!(l.size, 1 << (k + 1));
        assert_eq!(l.exact_mu, q(1, 1 << k));
        assert!(level_bound_holds(&l));
    }
    let late = MLTestFamily::unbounded(40).level(2).unwrap();
    assert_eq!(late.size, 41);
    assert!(level_bound_holds(&late));
    for n in [0, 3, 6] {
        for k in 1..=2 {
            let l = MLTestFamily::unbounded(n).level(k).unwrap();
            if l.size <= 8 {
                let e = l.to_expr().unwrap();
                assert_eq!(
                    mu_exact::<ExactRational>(&e, &Caps::default()).unwrap(),
                    l.exact_mu
                );
            }
        }
    }
}

#[test]
fn unbounded_level_five_is_rarely_failed() {
    let l = MLTestFamily::unbounded(0).level(5).unwrap();
    let passes = (0..1000)
        .filter(|&s| !l.member(&RandomOrderStream::new(s)))
        .count();
    assert!(passes >= 950, "{passes}");
}

#[test]
fn canonical_prefix_extends_every_stage() {
    let caps = Caps::default();
    let canon = CanonicalOrder::new(64, 64).unwrap();
    let prefix = OrderPrefix::from_presentation(&canon, 64);
    for n in 0..=64 {
        assert!(poset_extension_test(&prefix, n, &caps).unwrap());
    }
    assert!(poset_extension_test(&prefix, 65, &caps)
        .unwrap_err()
        .is_cap_exceeded());
    assert!(poset_extension_test(&prefix.restrict(3).unwrap(), 5, &caps).is_err());
}

#[test]
fn poset_levels() {
    let caps = Caps::default();
    let f = MLTestFamily::poset(&caps);
    for k in 1..=5 {
        let l = f.level(k).unwrap();
        assert!(level_bound_holds(&l));
        assert_eq!(l.exact_mu, poset_level_measure(l.size, &caps).unwrap());
        if l.size > 1 {
            assert!(poset_level_measure(l.size - 1, &caps).unwrap() > q(1, 1 << k));
        }
        let e = l.to_expr().unwrap();
        let mu: ExactRational = crate::measure::mu_weight(&e, &caps).unwrap();
        assert_eq!(mu, l.exact_mu);
    }
    let tight = Caps { poset: 3, ..caps };
    assert!(MLTestFamily::poset(&tight)
        .level(5)
        .unwrap_err()
        .is_cap_exceeded());
}

#[test]
fn poset_extension_frequency_matches_count() {
    let caps = Caps::default();
    for n in [4, 5, 6] {
        let p = poset_level_measure(n, &caps).unwrap().to_f64().unwrap();
        let hits = (0..10_000)
            .filter(|&s| poset_extension_test(&sample_prefix(s, n).unwrap(), n, &caps).unwrap())
            .count();
        assert!(within_4se(hits, 10_000, p), "N = {n}: {hits}");
    }
}

#[test]
fn depth_zero_passes_vacuously() {
    let s = RandomOrderStream::new(1);
    let families = [
        MLTestFamily::density(0, 1).unwrap(),
        MLTestFamily::unbounded(0),
    ];
    let r = run_ml_tests(&s, &families, 0);
    assert_eq!(r.len(), 2);
    for f in &r {
        assert!(f.levels.is_empty());
        assert_eq!(f.verdict, Verdict::Pass { depth: 0 });
    }
    assert_eq!(s.revealed(), 0);
}

#[test]
fn report_json_shape() {
    let s = RandomOrderStream::new(11);
    let r = run_ml_tests(&s, &[MLTestFamily::density(0, 1).unwrap()], 2);
    let v = r[0].to_json();
    assert_eq!(v["family"], "density(0,1)");
    assert_eq!(v["levels"][0]["k"], 1);
    assert_eq!(v["levels"][0]["exact_mu"], "1/4");
    assert_eq!(v["levels"][1]["exact_mu"], "1/8");
    assert!(v["levels"][0]["member"].is_boolean());
    assert!(["pass", "fail"].contains(&v["verdict"]["status"].as_str().unwrap()));
}

#[test]
fn verdict_is_greatest_failed_level() {
    // The identity order on ℕ has 0 and 1 adjacent, and 0 least, at every level.
    let id = crate::fraisse::NaturalOrder;
    let r = run_ml_tests(
        &id,
        &[
            MLTestFamily::density(0, 1).unwrap(),
            MLTestFamily::unbounded(0),
        ],
        4,
    );
    for f in &r {
        assert_eq!(f.verdict, Verdict::Fail { level: 4 });
        assert!(f.levels.iter().all(|l| l.member));
    }
    let failing_mu = &r[0].levels[3].exact_mu;
    assert!(*failing_mu <= q(1, 16));
}

#[test]
fn canonical_extension_fails_every_poset_level() {
    let caps = Caps::default();
    let canon = CanonicalOrder::new(64, 64).unwrap();
    let r = run_ml_tests(&canon, &[MLTestFamily::poset(&caps)], 8);
    assert_eq!(r[0].verdict, Verdict::Fail { level: 8 });
    assert!(r[0].levels.iter().all(|l| l.member));
}

#[test]
fn finite_domain_exhausts_the_budget() {
    let small = OrderPrefix::from_sequence(vec![0, 9, 1, 3, 2, 4, 5, 6, 7, 8]).unwrap();
    let r = run_ml_tests(&small, &[MLTestFamily::unbounded(3)], 4);
    // Level 1 needs 4 points, level 2 needs 8, level 3 needs 16.
    assert_eq!(r[0].levels.len(), 2);
    assert!(matches!(r[0].verdict, Verdict::Budget { level: 3, .. }));
}

struct Recording<'a> {
    inner: &'a RandomOrderStream,
    largest: Cell<usize>,
}

impl OrderPresentation for Recording<'_> {
    fn less(&self, a: usize, b: usize) -> bool {
        self.largest.set(self.largest.get().max(a).max(b));
        self.inner.less(a, b)
    }
}

#[test]
fn tests_read_only_the_level_support() {
    let caps = Caps::default();
    let families = [
        MLTestFamily::density(2, 9).unwrap(),
        MLTestFamily::unbounded(5),
        MLTestFamily::poset(&caps),
    ];
    for seed in 0..20 {
        let s = RandomOrderStream::new(seed);
        for f in &families {
            for k in 1..=5 {
                let l = f.level(k).unwrap();
                let rec = Recording {
                    inner: &s,
                    largest: Cell::new(0),
                };
                l.member(&rec);
                assert!(rec.largest.get() < l.size, "{} level {k}", f.name());
            }
        }
    }
}

#[test]
fn pair_ranking_is_a_bijection() {
    let mut seen = BTreeSet::new();
    for j in 1..60 {
        for i in 0..j {
            let r = pair_rank(i, j);
            assert_eq!(pair_unrank(r), (i, j));
            assert_eq!(pair_rank(j, i), r);
            seen.insert(r);
        }
    }
    assert_eq!(seen, (0..59 * 60 / 2).collect());
    assert_eq!(pair_rank(0, 1), 0);
    assert_eq!(pair_rank(1, 2), 2);
}

#[test]
fn codec_examples() {
    let g = graph_from_bits(&[false; 45]);
    assert_eq!(g.vertex_count(), 10);
    assert_eq!(g.edges().count(), 0);
    assert_eq!(graph_from_bits(&[]), GraphPrefix::empty(1));
    let g = graph_from_bits(&[true, false, true]);
    assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    // Four bits need four vertices; the padding reads as absent edges.
    let g = graph_from_bits(&[false, false, false, true]);
    assert_eq!(g.vertex_count(), 4);
    assert_eq!(
        bits_from_graph(&g),
        vec![false, false, false, true, false, false]
    );
}

#[test]
fn bits_round_trip() {
    let mut r = rng(45);
    for _ in 0..100 {
        let bits: Vec<bool> = (0..45).map(|_| r.random()).collect();
        assert_eq!(bits_from_graph(&graph_from_bits(&bits)), bits);
    }
}

#[test]
fn graphs_round_trip() {
    let mut r = rng(20);
    for n in 1..=20 {
        for _ in 0..5 {
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|j| (0..j).map(move |i| (i, j)))
                .filter(|_| r.random_bool(0.5))
                .collect();
            let g = GraphPrefix::from_edges(n, edges).unwrap();
            assert_eq!(graph_from_bits(&bits_from_graph(&g)), g);
        }
    }
}

#[test]
fn bit_text_formats() {
    assert_eq!(
        parse_bits("1011\n01").unwrap(),
        vec![true, false, true, true, false, true]
    );
    assert_eq!(parse_bits("0xA3").unwrap(), parse_bits("10100011").unwrap());
    assert_eq!(parse_bits("f").unwrap(), vec![true; 4]);
    assert_eq!(parse_bits("").unwrap(), Vec::<bool>::new());
    assert!(parse_bits("0xg1").unwrap_err().is_parse());
    let bits = sample_bits(4, 77);
    assert_eq!(parse_bits(&format_bits(&bits)).unwrap(), bits);
}

#[test]
fn sampled_bits_are_deterministic_and_balanced() {
    assert_eq!(sample_bits(8, 190), sample_bits(8, 190));
    assert_eq!(sample_bits(8, 190)[..100], sample_bits(8, 100)[..]);
    let ones = sample_bits(9, 100_000).into_iter().filter(|&b| b).count();
    assert!(within_4se(ones, 100_000, 0.5));
}

#[test]
fn random_graphs_mostly_satisfy_small_extension_demands() {
    // On 20 vertices with fair-coin edges, a demand (A, B) with |A ∪ B| = s
    // fails exactly when none of the other 20 − s vertices works, each
    // independently with probability 2^{−s}.
    let draws = 1000;
    let graphs: Vec<GraphPrefix> = (0..draws)
        .map(|s| graph_from_bits(&sample_bits(s, 190)))
        .collect();
    let mut demands = Vec::new();
    for code in 0..3usize.pow(5) {
        let (mut a, mut b) = (BTreeSet::new(), BTreeSet::new());
        let mut c = code;
        for v in 0..5 {
            match c % 3 {
                1 => a.insert(v),
                2 => b.insert(v),
                _ => false,
            };
            c /= 3;
        }
        let s = a.len() + b.len();
        if (1..=3).contains(&s) {
            demands.push((a, b, s));
        }
    }
    for size in 1..=3 {
        let of_size: Vec<_> = demands.iter().filter(|d| d.2 == size).collect();
        let fails: usize = of_size
            .iter()
            .map(|(a, b, _)| {
                graphs
                    .iter()
                    .filter(|g| g.extension_witness(a, b).is_none())
                    .count()
            })
            .sum();
        let p = (1.0 - 0.5f64.powi(size as i32)).powi(20 - size as i32);
        let freq = fails as f64 / (draws as usize * of_size.len()) as f64;
        // Demands sharing a graph are dependent; compare against a looser band.
        assert!(
            (freq - p).abs() < 0.02 + 4.0 * (p * (1.0 - p) / draws as f64).sqrt(),
            "size {size}: {freq} vs {p}"
        );
        assert!(freq < 0.15);
    }
}

#[test]
fn key_fractions_follow_the_order() {
    let s = RandomOrderStream::new(17);
    for a in 0..40 {
        for b in 0..40 {
            let (ka, kb) = (s.key_fraction(a), s.key_fraction(b));
            assert!((0.0..1.0).contains(&ka));
            if ka < kb {
                assert!(s.less(a, b));
            }
        }
    }
}
