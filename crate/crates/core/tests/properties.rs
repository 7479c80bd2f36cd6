use std::collections::BTreeSet;

use jlfiltration_core::filtration::{
    build_inner_filtration, build_split_partition, correspondence_report, PartTag,
};
use jlfiltration_core::oracle;
use jlfiltration_core::poset::{
    check_layering_properties, compare_points, embed_blocks, expand_by_degree, layer_antichains,
    longest_chain_length, Comparison, ExponentPoint,
};
use jlfiltration_core::rational::{rat, Rational};
use jlfiltration_core::segments::{
    enumerate_progression_partitions, greedy_decompose_fixed_length, segment_exponents, Segment,
};
use jlfiltration_core::support::{
    parse_support, ExponentMultiset, LabelTable, RawFactor, RawLabel, RawProblem, Side, Support,
};
use jlfiltration_core::transfer::{
    invert_support, preimage_triple, transfer_support, transfer_triple, triple_in_image,
};
use jlfiltration_core::triples::{canonicalize_triple, enumerate_triples, Triple};
use proptest::prelude::*;

const BOUND: usize = 8;

fn divisors(d: i64) -> Vec<i64> {
    (1..=d).filter(|k| d % k == 0).collect()
}

/// `(degree, labels)` with `k | d` and small inner sizes.
fn label_tables() -> impl Strategy<Value = (i64, Vec<RawLabel>)> {
    prop::sample::select(vec![1i64, 2, 3, 4]).prop_flat_map(|d| {
        let label = (prop::sample::select(divisors(d)), 1i64..=2);
        prop::collection::vec(label, 1..=3).prop_map(move |ls| {
            let labels = ls
                .into_iter()
                .enumerate()
                .map(|(i, (k, m))| RawLabel { name: format!("r{i}"), inner_size: m, k })
                .collect();
            (d, labels)
        })
    })
}

fn half(n: i64) -> String {
    rat(n, 2).to_string()
}

/// Inner supports satisfying the center condition, either symmetric
/// (every `ρν^s` paired with `ρν^{-s}`) or balanced by a final factor.
fn inner_supports() -> impl Strategy<Value = Support> {
    label_tables()
        .prop_flat_map(|(d, labels)| {
            let n = labels.len();
            let symmetric = (
                prop::collection::vec((0..n, 1i64..=4), 0..=3),
                prop::collection::vec(0..n, 0..=2),
            )
                .prop_map(|(pairs, zeros)| {
                    let mut f: Vec<(usize, String)> = Vec::new();
                    for (l, e) in pairs {
                        f.push((l, half(e)));
                        f.push((l, half(-e)));
                    }
                    f.extend(zeros.into_iter().map(|l| (l, "0".to_string())));
                    f
                });
            let labels_for_balance = labels.clone();
            let balanced = (prop::collection::vec((0..n, -4i64..=4), 1..=4), 0..n).prop_map(
                move |(free, last)| {
                    let sum: Rational = free
                        .iter()
                        .map(|&(l, e)| rat(e, 2) * Rational::from(labels_for_balance[l].inner_size))
                        .sum();
                    let mut f: Vec<(usize, String)> =
                        free.iter().map(|&(l, e)| (l, half(e))).collect();
                    let s = -sum / Rational::from(labels_for_balance[last].inner_size);
                    f.push((last, s.to_string()));
                    f
                },
            );
            (Just(d), Just(labels), prop_oneof![symmetric, balanced])
        })
        .prop_flat_map(|(d, labels, factors)| (Just(d), Just(labels), Just(factors).prop_shuffle()))
        .prop_filter_map("within bounds", |(d, labels, factors)| {
            if factors.is_empty() {
                return None;
            }
            let raw = RawProblem {
                degree: d,
                factors: factors
                    .iter()
                    .map(|(l, e)| RawFactor { label: labels[*l].name.clone(), exponent: e.clone() })
                    .collect(),
                labels,
                side: Side::Inner,
            };
            let s = parse_support(&raw).ok()?;
            let split_count: u32 = s.factors().iter().map(|f| s.table().get(f.label).k()).sum();
            (split_count as usize <= BOUND).then_some(s)
        })
}

/// Sum-zero integer points of a fixed length.
fn points(len: usize, max: usize) -> impl Strategy<Value = BTreeSet<ExponentPoint>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, len - 1), 1..=max).prop_map(
        move |rows| {
            rows.into_iter()
                .map(|mut r| {
                    let last: i64 = -r.iter().sum::<i64>();
                    r.push(last);
                    ExponentPoint::new(r.into_iter().map(Rational::from).collect())
                })
                .collect()
        },
    )
}

/// Sorts `raw / denom` descending and shifts it onto the center condition.
fn weakly_decreasing_centered(sizes: &[u32], raw: &[i64], denom: i64) -> Vec<Rational> {
    let mut z: Vec<Rational> = raw.iter().map(|&n| rat(n, denom)).collect();
    z.sort_unstable_by(|a, b| b.cmp(a));
    let total: u32 = sizes.iter().sum();
    let shift: Rational =
        sizes.iter().zip(&z).map(|(&n, &c)| c * Rational::from(n as i64)).sum::<Rational>()
            / Rational::from(total as i64);
    z.into_iter().map(|c| c - shift).collect()
}

fn test_label() -> jlfiltration_core::LabelId {
    LabelTable::new(1, &[RawLabel { name: "x".into(), inner_size: 1, k: 1 }])
        .unwrap()
        .lookup("x")
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn normalize_is_idempotent_and_order_blind(s in inner_supports(), seed in any::<u64>()) {
        let n = s.normalize().unwrap();
        prop_assert!(n.is_normalized());
        prop_assert_eq!(&n.normalize().unwrap(), &n);
        let mut factors = s.factors().to_vec();
        // deterministic rotation + reversal keyed by the seed
        let shift = (seed as usize) % factors.len();
        factors.rotate_left(shift);
        if seed % 2 == 0 { factors.reverse(); }
        let permuted = Support::new(Side::Inner, s.table().clone(), factors);
        prop_assert_eq!(permuted.normalize().unwrap(), n);
        let per_label: usize = s.table().ids().map(|l| s.exponent_multiset(l).len()).sum();
        prop_assert_eq!(per_label, s.len());
    }

    #[test]
    fn order_is_a_strict_partial_order(set in points(4, 7)) {
        let pts: Vec<_> = set.iter().collect();
        for a in &pts {
            prop_assert_eq!(compare_points(a, a).unwrap(), Comparison::Equal);
            for b in &pts {
                let ab = compare_points(a, b).unwrap();
                prop_assert_eq!(ab.reverse(), compare_points(b, a).unwrap());
                for c in &pts {
                    if ab == Comparison::Succeeds && compare_points(b, c).unwrap() == Comparison::Succeeds {
                        prop_assert_eq!(compare_points(a, c).unwrap(), Comparison::Succeeds);
                    }
                }
            }
        }
    }

    #[test]
    fn embeddings_are_linear(
        sizes in prop::collection::vec(1u32..=3, 1..=5),
        xs in prop::collection::vec(-12i64..=12, 5),
        ys in prop::collection::vec(-12i64..=12, 5),
        a in -3i64..=3, b in -3i64..=3, d in 1u32..=4,
    ) {
        let r = sizes.len();
        let x = weakly_decreasing_centered(&sizes, &xs[..r], 12);
        let y = weakly_decreasing_centered(&sizes, &ys[..r], 12);
        let (a, b) = (Rational::from(a), Rational::from(b));
        let combo: Vec<Rational> = x.iter().zip(&y).map(|(&p, &q)| a * p + b * q).collect();
        let ex = embed_blocks(&sizes, &x).unwrap();
        let ey = embed_blocks(&sizes, &y).unwrap();
        let lin: Vec<Rational> =
            ex.coords().iter().zip(ey.coords()).map(|(&p, &q)| a * p + b * q).collect();
        prop_assert_eq!(embed_blocks(&sizes, &combo).unwrap(), ExponentPoint::new(lin.clone()));
        let dx = expand_by_degree(&ex, d);
        let dy = expand_by_degree(&ey, d);
        let dl: Vec<Rational> =
            dx.coords().iter().zip(dy.coords()).map(|(&p, &q)| a * p + b * q).collect();
        prop_assert_eq!(expand_by_degree(&ExponentPoint::new(lin), d), ExponentPoint::new(dl));
    }

    #[test]
    fn expansion_preserves_the_order(
        sizes in prop::collection::vec(1u32..=3, 1..=6),
        xs in prop::collection::vec(-12i64..=12, 6),
        ys in prop::collection::vec(-12i64..=12, 6),
        denom in 1i64..=12,
        d in prop::sample::select(vec![1u32, 2, 3, 5]),
    ) {
        let r = sizes.len();
        let x = embed_blocks(&sizes, &weakly_decreasing_centered(&sizes, &xs[..r], denom)).unwrap();
        let y = embed_blocks(&sizes, &weakly_decreasing_centered(&sizes, &ys[..r], denom)).unwrap();
        prop_assert_eq!(
            compare_points(&x, &y).unwrap(),
            compare_points(&expand_by_degree(&x, d), &expand_by_degree(&y, d)).unwrap()
        );
    }

    #[test]
    fn layering_is_admissible_shortest_and_unique(set in points(4, 6)) {
        let layering = layer_antichains(&set).unwrap();
        prop_assert!(check_layering_properties(&set, layering.layers()).unwrap().passed());
        prop_assert_eq!(layering.len(), longest_chain_length(&set).unwrap());
        prop_assert_eq!(layering.len(), oracle::longest_chain_by_subsets(&set));
        let all = oracle::admissible_layerings(&set).unwrap();
        prop_assert_eq!(all.len(), 1);
        prop_assert_eq!(&all[0][..], layering.layers());
    }

    #[test]
    fn segments_round_trip(len in 1u32..=5, num in -6i64..=6, step in 1u32..=3) {
        let r = test_label();
        let seg = Segment::new(r, len, rat(num, 2), step);
        let e = segment_exponents(&seg);
        let parts = enumerate_progression_partitions(&e, step, r, 12).unwrap();
        prop_assert!(parts.contains(&vec![seg]));
        if step == 1 {
            prop_assert_eq!(greedy_decompose_fixed_length(&e, len, r).unwrap(), vec![seg]);
        }
        let (lo, hi) = seg.endpoints();
        prop_assert_eq!(hi - lo, Rational::from(len as i64 - 1));
    }

    #[test]
    fn greedy_agrees_with_exhaustive_fixed_length_search(
        raw in prop::collection::vec(-3i64..=3, 1..=8),
        k in 1u32..=4,
    ) {
        let r = test_label();
        let e: ExponentMultiset = raw.iter().map(|&n| Rational::from(n)).collect();
        let found = oracle::fixed_length_partitions_by_set_partitions(&e, k, r);
        prop_assert!(found.len() <= 1);
        match greedy_decompose_fixed_length(&e, k, r) {
            Ok(mut segs) => {
                segs.sort();
                prop_assert_eq!(found, vec![segs]);
            }
            Err(_) => prop_assert!(found.is_empty()),
        }
    }

    #[test]
    fn progression_enumeration_matches_set_partition_filter(
        raw in prop::collection::vec(-4i64..=4, 1..=7),
        step in 1u32..=2,
    ) {
        let r = test_label();
        let e: ExponentMultiset = raw.iter().map(|&n| rat(n, 2)).collect();
        let fast = enumerate_progression_partitions(&e, step, r, 12).unwrap();
        prop_assert_eq!(&fast, &oracle::progression_partitions_by_set_partitions(&e, step, r));
        for p in &fast {
            let union: ExponentMultiset = p.iter().flat_map(|s| s.exponents()).collect();
            prop_assert_eq!(&union, &e);
        }
    }

    #[test]
    fn triples_are_well_formed_and_counted(s in inner_supports()) {
        for side_support in [s.normalize().unwrap(), transfer_support(&s).unwrap().sigma] {
            let orbits = enumerate_triples(&side_support, BOUND).unwrap();
            let expected: usize = side_support
                .labels_present()
                .into_iter()
                .map(|l| {
                    let step = side_support.table().get(l).step_on(side_support.side());
                    enumerate_progression_partitions(&side_support.exponent_multiset(l), step, l, BOUND)
                        .unwrap()
                        .len()
                })
                .product();
            prop_assert_eq!(orbits.len(), expected);
            for o in &orbits {
                let t = &o.canonical;
                prop_assert!(t.is_chamber_dominant());
                prop_assert_eq!(t.center_sum(side_support.table()), Rational::from(0));
                for l in side_support.labels_present() {
                    let from_blocks: ExponentMultiset = t
                        .blocks()
                        .iter()
                        .filter(|b| b.label == l)
                        .flat_map(|b| b.exponents())
                        .collect();
                    prop_assert_eq!(from_blocks, side_support.exponent_multiset(l));
                }
                // permuting equal-center blocks does not change the class
                let mut blocks = t.blocks().to_vec();
                let mut i = 0;
                while i < blocks.len() {
                    let j = blocks[i..].iter().take_while(|b| b.center == blocks[i].center).count();
                    blocks[i..i + j].reverse();
                    i += j;
                }
                let shuffled = Triple::new(t.side(), blocks);
                prop_assert_eq!(&canonicalize_triple(&shuffled), t);
                prop_assert_eq!(canonicalize_triple(t), t.clone());
            }
        }
    }

    #[test]
    fn support_transfer_round_trips(s in inner_supports()) {
        let n = s.normalize().unwrap();
        let t = transfer_support(&s).unwrap();
        prop_assert_eq!(invert_support(&t.sigma).unwrap(), n.clone());
        prop_assert_eq!(t.sigma.ambient_rank(), n.ambient_rank() * u64::from(n.degree()));
        prop_assert_eq!(t.sigma.block_sizes(), t.q_partition.clone());
        prop_assert_eq!(transfer_support(&n).unwrap().normalized_sigma(), t.normalized_sigma());
    }

    #[test]
    fn triple_transfer_is_injective_and_lands_in_the_image(s in inner_supports()) {
        let table = s.table().clone();
        let inner = enumerate_triples(&s.normalize().unwrap(), BOUND).unwrap();
        let mut images = BTreeSet::new();
        for o in &inner {
            let t = transfer_triple(&o.canonical, &table).unwrap();
            prop_assert!(triple_in_image(&t, &table));
            prop_assert_eq!(preimage_triple(&t, &table), Some(o.canonical.clone()));
            let mut reversed = o.canonical.blocks().to_vec();
            reversed.reverse();
            let scrambled = Triple::new(Side::Inner, reversed);
            prop_assert_eq!(transfer_triple(&scrambled, &table).unwrap(), t.clone());
            images.insert(t);
        }
        prop_assert_eq!(images.len(), inner.len());
        let sigma = transfer_support(&s).unwrap().sigma;
        for o in enumerate_triples(&sigma, BOUND).unwrap() {
            prop_assert_eq!(o.in_image, images.contains(&o.canonical));
            let back = preimage_triple(&o.canonical, &table);
            prop_assert_eq!(back.is_some(), o.in_image);
        }
    }

    #[test]
    fn filtrations_satisfy_the_structure_theorems(s in inner_supports()) {
        let inner = build_inner_filtration(&s, BOUND).unwrap();
        let inner_points: BTreeSet<ExponentPoint> =
            inner.layers.iter().flat_map(|l| l.points.iter().cloned()).collect();
        if inner_points.len() <= 6 {
            let all = oracle::admissible_layerings(&inner_points).unwrap();
            prop_assert_eq!(all.len(), 1);
            let built: Vec<_> = inner.layers.iter().map(|l| l.points.clone()).collect();
            prop_assert_eq!(&all[0], &built);
        }

        let sigma = transfer_support(&s).unwrap().sigma;
        let part = build_split_partition(&sigma, BOUND).unwrap();
        let complement: BTreeSet<ExponentPoint> = part.complement.iter().flatten().cloned().collect();
        if complement.len() <= 5 {
            let found = oracle::admissible_complement_partitions(&complement, &part.image_layers);
            prop_assert_eq!(found, vec![part.complement.clone()]);
        }
        let naive_points: usize = part.sequence.iter().map(|p| p.points.len()).sum();
        let all_points: BTreeSet<_> = part.orbits.iter().map(|o| o.point.clone()).collect();
        prop_assert_eq!(naive_points, all_points.len());
        prop_assert_eq!(
            part.sequence.iter().filter(|p| matches!(p.tag, PartTag::Image(_))).count(),
            inner.len()
        );

        let report = correspondence_report(&s, BOUND).unwrap();
        prop_assert_eq!(report.refined.orbit_count(), part.orbits.len());
        prop_assert!(report.quotient_map.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1));
        prop_assert_eq!(report.quotient_map.len() + report.unmatched.len(), report.refined.len());
    }
}

#[test]
fn expansion_preserves_order_on_small_integer_grids() {
    // every pair of weakly decreasing integer vectors in [-2, 2]^n with
    // unit blocks and zero sum, n ≤ 4
    for n in 1..=4usize {
        let mut vectors = Vec::new();
        let total = 5usize.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let v: Vec<i64> = (0..n)
                .map(|_| {
                    let x = (c % 5) as i64 - 2;
                    c /= 5;
                    x
                })
                .collect();
            if v.windows(2).all(|w| w[0] >= w[1]) && v.iter().sum::<i64>() == 0 {
                vectors.push(ExponentPoint::new(v.into_iter().map(Rational::from).collect()));
            }
        }
        for x in &vectors {
            for y in &vectors {
                for d in [1, 2, 3, 5] {
                    assert_eq!(
                        compare_points(x, y).unwrap(),
                        compare_points(&expand_by_degree(x, d), &expand_by_degree(y, d)).unwrap()
                    );
                }
            }
        }
    }
}
