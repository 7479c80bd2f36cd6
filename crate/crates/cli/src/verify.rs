//! The verification harness: randomized and exhaustive oracle suites.
//!
//! Each suite owns a ChaCha8 stream seeded from the run seed and its own
//! position, so suites can run on separate threads and still produce the
//! same report byte for byte.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use jlfiltration_core::filtration::{build_split_partition, correspondence_report, PartTag};
use jlfiltration_core::oracle;
use jlfiltration_core::poset::{
    check_layering_properties, compare_points, embed_blocks, expand_by_degree, layer_antichains,
    longest_chain_length, Comparison, ExponentPoint,
};
use jlfiltration_core::rational::{rat, Rational};
use jlfiltration_core::segments::{enumerate_progression_partitions, greedy_decompose_fixed_length};
use jlfiltration_core::support::{
    parse_support, ExponentMultiset, LabelId, LabelTable, RawFactor, RawLabel, RawProblem, Side,
    Support,
};
use jlfiltration_core::transfer::{
    invert_support, preimage_triple, transfer_support, transfer_triple, triple_in_image,
};
use jlfiltration_core::triples::{canonicalize_triple, enumerate_triples, Triple};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Largest inner exponent set handed to the exhaustive layering search.
pub const LAYERING_ORACLE_LIMIT: usize = 7;
/// Largest complement handed to the exhaustive coarse-partition search.
pub const COMPLEMENT_ORACLE_LIMIT: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Enumeration bound; also caps the split size of generated supports.
    pub max_size: usize,
    /// Randomized cases for each single-property suite. The heavier structural
    /// suites run two fifths of this.
    pub cases: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 0, max_size: 8, cases: 500 }
    }
}

impl VerifyConfig {
    fn heavy_cases(&self) -> usize {
        self.cases * 2 / 5
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: u64,
    pub passed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    /// Coverage counters, e.g. how many instances had a given feature.
    #[serde(default)]
    pub stats: BTreeMap<String, u64>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.into(),
            cases: 0,
            passed: 0,
            counterexample: None,
            stats: BTreeMap::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.cases == self.passed
    }

    fn record(&mut self, outcome: Result<(), String>) {
        self.cases += 1;
        match outcome {
            Ok(()) => self.passed += 1,
            Err(witness) => {
                self.counterexample.get_or_insert(witness);
            }
        }
    }

    fn bump(&mut self, stat: &str) {
        *self.stats.entry(stat.into()).or_default() += 1;
    }

    fn raise(&mut self, stat: &str, value: u64) {
        let e = self.stats.entry(stat.into()).or_default();
        *e = (*e).max(value);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub max_size: usize,
    pub cases: usize,
    pub suites: Vec<SuiteReport>,
    pub all_passed: bool,
}

impl VerifyReport {
    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn failures(&self) -> Vec<&SuiteReport> {
        self.suites.iter().filter(|s| !s.ok()).collect()
    }

    pub fn write_text(&self, w: &mut String) {
        let _ = writeln!(w, "verify: seed {}  max size {}  cases {}", self.seed, self.max_size, self.cases);
        let width = self.suites.iter().map(|s| s.name.len()).max().unwrap_or(0);
        for s in &self.suites {
            let status = if s.ok() { "ok  " } else { "FAIL" };
            let _ = write!(w, "  {status} {:width$}  {:>6}/{}", s.name, s.passed, s.cases);
            let stats: Vec<String> = s.stats.iter().map(|(k, v)| format!("{k}={v}")).collect();
            if !stats.is_empty() {
                let _ = write!(w, "  {}", stats.join(" "));
            }
            let _ = writeln!(w);
            if let Some(c) = &s.counterexample {
                let _ = writeln!(w, "       counterexample: {c}");
            }
        }
        let _ = writeln!(w, "result: {}", if self.all_passed { "all suites passed" } else { "FAILED" });
    }
}

type Suite = fn(&mut ChaCha8Rng, &VerifyConfig) -> SuiteReport;

pub const SUITES: &[(&str, Suite)] = &[
    ("normalize_idempotent", suite_normalize),
    ("strict_partial_order", suite_partial_order),
    ("order_preserved_by_degree_expansion", suite_order_preservation),
    ("support_transfer_round_trip", suite_support_round_trip),
    ("greedy_matches_exhaustive_fixed_length", suite_greedy),
    ("progression_enumeration_matches_oracle", suite_progressions),
    ("inner_layering_unique_and_shortest", suite_layering),
    ("complement_partition_unique", suite_complement),
    ("triple_invariants", suite_triples),
    ("triple_transfer_injective", suite_triple_transfer),
    ("filtration_structure", suite_structure),
];

fn suite_seed(seed: u64, position: usize) -> u64 {
    seed ^ (position as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Runs every suite, one thread each, and assembles them in fixed order.
pub fn run_verify(cfg: &VerifyConfig) -> VerifyReport {
    let suites: Vec<SuiteReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = SUITES
            .iter()
            .enumerate()
            .map(|(i, &(name, suite))| {
                scope.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(suite_seed(cfg.seed, i));
                    let mut report = suite(&mut rng, cfg);
                    report.name = name.into();
                    report
                })
            })
            .collect();
        handles
            .into_iter()
            .zip(SUITES)
            .map(|(h, &(name, _))| {
                h.join().unwrap_or_else(|_| {
                    let mut r = SuiteReport::new(name);
                    r.record(Err("suite panicked".into()));
                    r
                })
            })
            .collect()
    });
    VerifyReport {
        seed: cfg.seed,
        max_size: cfg.max_size,
        cases: cfg.cases,
        all_passed: suites.iter().all(SuiteReport::ok),
        suites,
    }
}

// ---------------------------------------------------------------- generators

fn describe(s: &Support) -> String {
    let table = s.table();
    let labels: Vec<String> = table
        .ids()
        .map(|id| {
            let l = table.get(id);
            format!("{}(m'={},k={})", l.name(), l.inner_size(), l.k())
        })
        .collect();
    let factors: Vec<String> =
        s.factors().iter().map(|f| format!("{}@{}", table.name(f.label), f.exponent)).collect();
    format!("d={} labels [{}] {} support [{}]", s.degree(), labels.join(" "), s.side().as_str(), factors.join(" "))
}

/// Labels for a random problem. `mixed` forces `d > 1` with one label of
/// full `k = d` next to one with `k = 1` and the same split-side size: the
/// shape where non-image orbits share exponent points with image ones.
fn random_labels(rng: &mut ChaCha8Rng, mixed: bool) -> (i64, Vec<RawLabel>) {
    let d = if mixed { *[2i64, 2, 3, 4].choose(rng).unwrap() } else { *[1i64, 2, 3, 4].choose(rng).unwrap() };
    let divisors: Vec<i64> = (1..=d).filter(|k| d % k == 0).collect();
    let count = rng.random_range(if mixed { 2..=3 } else { 1..=3 });
    let mut labels: Vec<RawLabel> = (0..count)
        .map(|i| RawLabel {
            name: format!("r{i}"),
            inner_size: rng.random_range(1..=2),
            k: match (mixed, i) {
                (true, 0) => d,
                (true, 1) => 1,
                _ => *divisors.choose(rng).unwrap(),
            },
        })
        .collect();
    if mixed {
        // equal split-side block sizes for the first two labels
        labels[0].inner_size = d * labels[1].inner_size;
    }
    (d, labels)
}

/// An inner support with at most `max_factors` factors on at most three
/// labels, satisfying the center condition; its split side has at most
/// `split_bound` factors when a bound is given.
fn random_inner_support(rng: &mut ChaCha8Rng, max_factors: usize, split_bound: Option<usize>) -> Support {
    let mixed = rng.random_bool(0.5);
    loop {
        let (d, labels) = random_labels(rng, mixed);
        let n = labels.len();
        let mut factors: Vec<(usize, Rational)> = Vec::new();
        if mixed && rng.random_bool(0.5) {
            // mirror: the k = 1 label fills exactly the segment the k = d
            // label expands to, plus possibly one symmetric pair
            factors.push((0, Rational::from(0)));
            factors.extend((0..d).map(|j| (1, rat(d - 1 - 2 * j, 2))));
            if rng.random_bool(0.5) {
                let (l, e) = (rng.random_range(0..n), rat(rng.random_range(1..=4), 2));
                factors.extend([(l, e), (l, -e)]);
            }
        } else if rng.random_bool(0.5) {
            // symmetric: ρν^s paired with ρν^{-s}, plus some ρν^0
            let pairs = rng.random_range(0..=max_factors / 2);
            for _ in 0..pairs {
                let (l, e) = (rng.random_range(0..n), rat(rng.random_range(1..=4), 2));
                factors.push((l, e));
                factors.push((l, -e));
            }
            let zeros = rng.random_range(0..=(max_factors - 2 * pairs).min(2));
            factors.extend((0..zeros).map(|_| (rng.random_range(0..n), Rational::from(0))));
        } else {
            // free exponents, the last factor restores the center condition
            let free = rng.random_range(1..max_factors.max(2));
            for _ in 0..free {
                factors.push((rng.random_range(0..n), rat(rng.random_range(-4..=4), 2)));
            }
            let sum: Rational =
                factors.iter().map(|&(l, e)| e * Rational::from(labels[l].inner_size)).sum();
            let last = rng.random_range(0..n);
            factors.push((last, -sum / Rational::from(labels[last].inner_size)));
        }
        if factors.is_empty() || factors.len() > max_factors {
            continue;
        }
        factors.shuffle(rng);
        let raw = RawProblem {
            degree: d,
            factors: factors
                .iter()
                .map(|(l, e)| RawFactor { label: labels[*l].name.clone(), exponent: e.to_string() })
                .collect(),
            labels,
            side: Side::Inner,
        };
        let Ok(s) = parse_support(&raw) else { continue };
        let split: usize = s.factors().iter().map(|f| s.table().get(f.label).k() as usize).sum();
        if split_bound.is_none_or(|b| split <= b) {
            return s;
        }
    }
}

/// Weakly decreasing rationals `num / denom`, shifted onto the center
/// condition for the given block sizes.
fn centered_exponents(rng: &mut ChaCha8Rng, sizes: &[u32], denom: i64) -> Vec<Rational> {
    let mut z: Vec<Rational> = sizes.iter().map(|_| rat(rng.random_range(-12..=12), denom)).collect();
    z.sort_unstable_by(|a, b| b.cmp(a));
    let total: u32 = sizes.iter().sum();
    let shift: Rational = sizes.iter().zip(&z).map(|(&n, &c)| c * Rational::from(i64::from(n))).sum::<Rational>()
        / Rational::from(i64::from(total));
    z.into_iter().map(|c| c - shift).collect()
}

/// A composition of `total` into at most `max_parts` positive parts.
fn random_composition(rng: &mut ChaCha8Rng, total: u32, max_parts: usize) -> Vec<u32> {
    loop {
        let mut parts = Vec::new();
        let mut left = total;
        while left > 0 {
            let p = rng.random_range(1..=left.min(3));
            parts.push(p);
            left -= p;
        }
        if parts.len() <= max_parts {
            return parts;
        }
    }
}

/// A set of sum-zero integer points of length `len` with entries near 0.
fn random_point_set(rng: &mut ChaCha8Rng, len: usize, count: usize) -> BTreeSet<ExponentPoint> {
    (0..count)
        .map(|_| {
            let mut c: Vec<i64> = (0..len - 1).map(|_| rng.random_range(-2..=2)).collect();
            c.push(-c.iter().sum::<i64>());
            ExponentPoint::new(c.into_iter().map(Rational::from).collect())
        })
        .collect()
}

fn unit_label() -> LabelId {
    LabelTable::new(1, &[RawLabel { name: "x".into(), inner_size: 1, k: 1 }])
        .and_then(|t| t.lookup("x"))
        .expect("fixed label table")
}

fn show_points<'a>(pts: impl IntoIterator<Item = &'a ExponentPoint>) -> String {
    let parts: Vec<String> = pts
        .into_iter()
        .map(|p| format!("({})", p.coords().iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    format!("{{{}}}", parts.join(" "))
}

fn show_multiset(e: &ExponentMultiset) -> String {
    e.entries().iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn core<T>(r: jlfiltration_core::Result<T>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

// -------------------------------------------------------------------- suites

fn suite_normalize(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new("");
    for _ in 0..cfg.cases {
        let s = random_inner_support(rng, 6, None);
        let mut factors = s.factors().to_vec();
        factors.shuffle(rng);
        let shuffled = Support::new(s.side(), s.table().clone(), factors);
        report.record((|| {
            let n = core(s.normalize(), "normalize")?;
            ensure!(n.is_normalized(), "{}: normalize output not normalized", describe(&s));
            ensure!(core(n.normalize(), "normalize")? == n, "{}: not idempotent", describe(&s));
            ensure!(core(shuffled.normalize(), "normalize")? == n, "{}: depends on factor order", describe(&s));
            Ok(())
        })());
    }
    report
}

fn suite_partial_order(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new("");
    for _ in 0..cfg.cases {
        let len = rng.random_range(2..=5);
        let count = rng.random_range(1..=6);
        let set = random_point_set(rng, len, count);
        report.record((|| {
            let pts: Vec<_> = set.iter().collect();
            for a in &pts {
                ensure!(core(compare_points(a, a), "compare")? == Comparison::Equal, "{} not equal to itself", show_points([*a]));
                for b in &pts {
                    let ab = core(compare_points(a, b), "compare")?;
                    ensure!(ab.reverse() == core(compare_points(b, a), "compare")?, "asymmetric verdict on {}", show_points([*a, *b]));
                    for c in &pts {
                        if ab == Comparison::Succeeds && core(compare_points(b, c), "compare")? == Comparison::Succeeds {
                            ensure!(
                                core(compare_points(a, c), "compare")? == Comparison::Succeeds,
                                "not transitive on {}",
                                show_points([*a, *b, *c])
                            );
                        }
                    }
                }
            }
            Ok(())
        })());
    }
    report
}

fn suite_order_preservation(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new("");
    let check = |x: &ExponentPoint, y: &ExponentPoint, d: u32| -> Result<Comparison, String> {
        let before = core(compare_points(x, y), "compare")?;
        let after = core(compare_points(&expand_by_degree(x, d), &expand_by_degree(y, d)), "compare")?;
        ensure!(
            before == after,
            "{} compare {before:?} but {after:?} after expanding by {d}",
            show_points([x, y])
        );
        Ok(before)
    };
    for _ in 0..cfg.cases {
        let total_len = rng.random_range(1..=12);
        let sizes_x = random_composition(rng, total_len, 6);
        let total = sizes_x.iter().sum();
        let sizes_y = random_composition(rng, total, 6);
        let denom = rng.random_range(1..=12);
        let d = *[1u32, 2, 3, 5].choose(rng).unwrap();
        let zx = centered_exponents(rng, &sizes_x, denom);
        let zy = centered_exponents(rng, &sizes_y, denom);
        let outcome = (|| {
            let x = core(embed_blocks(&sizes_x, &zx), "embed")?;
            let y = core(embed_blocks(&sizes_y, &zy), "embed")?;
            check(&x, &y, d)
        })();
        if let Ok(c) = &outcome {
            if *c != Comparison::Incomparable {
                report.bump("comparable_pairs");
            }
        }
        report.record(outcome.map(drop));
    }
    // every pair of weakly decreasing integer vectors in [-2, 2]^n with zero
    // sum, n ≤ 4
    for n in 1..=4u32 {
        let vectors: Vec<ExponentPoint> = (0..5usize.pow(n))
            .filter_map(|code| {
                let v: Vec<i64> = (0..n).map(|j| (code / 5usize.pow(j) % 5) as i64 - 2).collect();
                (v.windows(2).all(|w| w[0] >= w[1]) && v.iter().sum::<i64>() == 0)
                    .then(|| ExponentPoint::new(v.into_iter().map(Rational::from).collect()))
            })
            .collect();
        for x in &vectors {
            for y in &vectors {
                for d in [1, 2, 3, 5] {
                    report.bump("grid_pairs");
                    report.record(check(x, y, d).map(drop));
                }
            }
        }
    }
    report
}

fn suite_support_round_trip(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new("");
    for _ in 0..cfg.cases {
        let p = random_inner_support(rng, 6, None);
        report.record((|| {
            let n = core(p.normalize(), "normalize")?;
            let t = core(transfer_support(&p), "transfer")?;
            let back = core(invert_support(&t.sigma), "invert")?;
            ensure!(back == n, "{}: inverse gave {}", describe(&p), describe(&back));
            ensure!(t.sigma.block_sizes() == t.q_partition, "{}: block sizes differ from Q", describe(&p));
            ensure!(
                t.sigma.ambient_rank() == n.ambient_rank() * u64::from(n.degree()),
                "{}: rank not multiplied by d",
                describe(&p)
            );
            Ok(())
        })());
    }
    report
}

fn suite_greedy(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new("");
    let label = unit_label();
    let max_len = cfg.max_size.clamp(1, 8);
    for _ in 0..cfg.heavy_cases() {
        let k = rng.random_range(1..=4u32);
        let mut entries: Vec<Rational> = Vec::new();
        if rng.random_bool(0.5) && k as usize <= max_len {
            // a union of k-segments, sometimes with one entry moved
            let pieces = rng.random_range(1..=max_len / k as usize);
            for _ in 0..pieces {
                let top = rat(rng.random_range(-4..=4), 2);
                entries.extend((0..k).map(|j| top - Rational::from(i64::from(j))));
            }
            if rng.random_bool(0.5) {
                let i = rng.random_range(0..entries.len());
                entries[i] += Rational::from(rng.random_range(-1..=1));
            }
        } else {
            let len = rng.random_range(1..=max_len);
            entries.extend((0..len).map(|_| Rational::from(rng.random_range(-3..=3))));
        }
        let e = ExponentMultiset::new(entries);
        let found = oracle::fixed_length_partitions_by_set_partitions(&e, k, label);
        let greedy = greedy_decompose_fixed_length(&e, k, label);
        if greedy.is_ok() {
            report.bump("decomposable");
        }
        report.record((|| {
            ensure!(found.len() <= 1, "[{}] k={k}: {} distinct decompositions", show_multiset(&e), found.len());
            match greedy {
                Ok(mut segs) => {
                    segs.sort();
                    ensure!(found == vec![segs], "[{}] k={k}: greedy disagrees with search", show_multiset(&e));
                }
                Err(_) => ensure!(found.is_empty(), "[{}] k={k}: greedy missed a decomposition", show_multiset(&e)),
            }
            Ok(())
        })());
    }
    report
}

fn suite_progressions(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new("");
    let label = unit_label();
    for _ in 0..cfg.cases {
        let len = rng.random_range(1..=cfg.max_size.clamp(1, 7));
        let step = rng.random_range(1..=2u32);
        let e: ExponentMultiset = (0..len).map(|_| rat(rng.random_range(-4..=4), 2)).collect();
        report.record((|| {
            let fast = core(enumerate_progression_partitions(&e, step, label, cfg.max_size), "enumerate")?;
            let slow = oracle::progression_partitions_by_set_partitions(&e, step, label);
            ensure!(
                fast == slow,
                "[{}] step {step}: {} partitions enumerated, {} by exhaustive search",
                show_multiset(&e),
                fast.len(),
                slow.len()
            );
            Ok(())
        })());
    }
    report
}

fn check_layering(set: &BTreeSet<ExponentPoint>, report: &mut SuiteReport) -> Result<(), String> {
    let layering = core(layer_antichains(set), "layering")?;
    ensure!(
        core(check_layering_properties(set, layering.layers()), "check")?.passed(),
        "{}: constructed layering is not admissible",
        show_points(set)
    );
    let chain = core(longest_chain_length(set), "chain")?;
    ensure!(chain == layering.len(), "{}: {} layers but longest chain {chain}", show_points(set), layering.len());
    ensure!(
        oracle::longest_chain_by_subsets(set) == chain,
        "{}: chain length disagrees with subset search",
        show_points(set)
    );
    if set.len() <= LAYERING_ORACLE_LIMIT {
        report.raise("largest_exhaustive_set", set.len() as u64);
        let all = core(oracle::admissible_layerings(set), "oracle")?;
        ensure!(all.len() == 1, "{}: {} admissible layerings", show_points(set), all.len());
        ensure!(all[0] == layering.layers(), "{}: search found a different layering", show_points(set));
    }
    Ok(())
}

fn suite_layering(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new("");
    // inner exponent sets of generated supports
    for _ in 0..cfg.heavy_cases() {
        let p = random_inner_support(rng, 6, Some(cfg.max_size));
        let outcome = (|| {
            let orbits = core(enumerate_triples(&core(p.normalize(), "normalize")?, cfg.max_size), "triples")?;
            let set: BTreeSet<ExponentPoint> = orbits.into_iter().map(|o| o.point).collect();
            check_layering(&set, &mut report).map_err(|e| format!("{}: {e}", describe(&p)))
        })();
        report.record(outcome);
    }
    // bare point sets, to reach the size limit more often
    for _ in 0..cfg.heavy_cases() {
        let count = rng.random_range(1..=LAYERING_ORACLE_LIMIT);
        let set = random_point_set(rng, 4, count);
        let outcome = check_layering(&set, &mut report);
        report.record(outcome);
    }
    report
}

fn suite_complement(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new("");
    for _ in 0..cfg.heavy_cases() {
        let p = random_inner_support(rng, 6, Some(cfg.max_size));
        let part = match transfer_support(&p).and_then(|t| build_split_partition(&t.sigma, cfg.max_size)) {
            Ok(part) => part,
            Err(e) => {
                report.record(Err(format!("{}: {e}", describe(&p))));
                continue;
            }
        };
        let complement: BTreeSet<ExponentPoint> = part.complement.iter().flatten().cloned().collect();
        if complement.len() > COMPLEMENT_ORACLE_LIMIT {
            report.bump("skipped_large");
            continue;
        }
        if !complement.is_empty() {
            report.bump("nonempty_complement");
        }
        report.record((|| {
            let found = oracle::admissible_complement_partitions(&complement, &part.image_layers);
            ensure!(found.len() == 1, "{}: {} admissible coarse partitions", describe(&p), found.len());
            ensure!(found[0] == part.complement, "{}: search found a different coarse partition", describe(&p));
            for (block, layers) in part.complement.iter().zip(&part.complement_layers) {
                let all = core(oracle::admissible_layerings(block), "oracle")?;
                ensure!(
                    all.len() == 1 && all[0] == layers.layers(),
                    "{}: complement block {} is not uniquely layered",
                    describe(&p),
                    show_points(block)
                );
            }
            Ok(())
        })());
    }
    report
}

fn suite_triples(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new("");
    for _ in 0..cfg.heavy_cases() {
        let p = random_inner_support(rng, 6, Some(cfg.max_size));
        report.record((|| {
            let sides = [core(p.normalize(), "normalize")?, core(transfer_support(&p), "transfer")?.sigma];
            for s in &sides {
                let table = s.table();
                let orbits = core(enumerate_triples(s, cfg.max_size), "triples")?;
                let expected: usize = s
                    .labels_present()
                    .into_iter()
                    .map(|l| {
                        let step = table.get(l).step_on(s.side());
                        oracle::progression_partitions_by_set_partitions(&s.exponent_multiset(l), step, l).len()
                    })
                    .product();
                ensure!(orbits.len() == expected, "{}: {} orbits, search finds {expected}", describe(s), orbits.len());
                for o in &orbits {
                    let t = &o.canonical;
                    ensure!(t.is_canonical() && t.is_chamber_dominant(), "{}: {t:?} not canonical", describe(s));
                    ensure!(t.center_sum(table) == Rational::from(0), "{}: {t:?} off center", describe(s));
                    let mut reversed = t.blocks().to_vec();
                    reversed.reverse();
                    ensure!(
                        canonicalize_triple(&Triple::new(t.side(), reversed)) == *t,
                        "{}: reordering {t:?} changes its class",
                        describe(s)
                    );
                    let point = core(embed_blocks(&t.block_sizes(table), &t.centers()), "embed")?;
                    ensure!(point == o.point, "{}: point of {t:?} is off", describe(s));
                }
            }
            Ok(())
        })());
    }
    report
}

fn suite_triple_transfer(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new("");
    for _ in 0..cfg.heavy_cases() {
        let p = random_inner_support(rng, 6, Some(cfg.max_size));
        report.record((|| {
            let table = p.table();
            let inner = core(enumerate_triples(&core(p.normalize(), "normalize")?, cfg.max_size), "triples")?;
            let mut images = BTreeSet::new();
            for o in &inner {
                let t = core(transfer_triple(&o.canonical, table), "transfer")?;
                ensure!(triple_in_image(&t, table), "{}: transfer of {:?} not in image", describe(&p), o.canonical);
                ensure!(
                    preimage_triple(&t, table).as_ref() == Some(&o.canonical),
                    "{}: preimage of {t:?} is off",
                    describe(&p)
                );
                images.insert(t);
            }
            ensure!(images.len() == inner.len(), "{}: triple transfer not injective", describe(&p));
            let sigma = core(transfer_support(&p), "transfer")?.sigma;
            let split = core(enumerate_triples(&sigma, cfg.max_size), "triples")?;
            let in_image: BTreeSet<Triple> =
                split.iter().filter(|o| o.in_image).map(|o| o.canonical.clone()).collect();
            ensure!(in_image == images, "{}: image orbits differ from transferred orbits", describe(&p));
            Ok(())
        })());
    }
    report
}

fn suite_structure(rng: &mut ChaCha8Rng, cfg: &VerifyConfig) -> SuiteReport {
    let mut report = SuiteReport::new("");
    for _ in 0..cfg.heavy_cases() {
        let p = random_inner_support(rng, 6, Some(cfg.max_size));
        let outcome = structure_case(&p, cfg.max_size, &mut report).map_err(|e| format!("{}: {e}", describe(&p)));
        report.record(outcome);
    }
    report
}

fn structure_case(p: &Support, bound: usize, report: &mut SuiteReport) -> Result<(), String> {
    let table = p.table();
    let sigma = core(transfer_support(p), "transfer")?.sigma;
    let part = core(build_split_partition(&sigma, bound), "partition")?;
    let c = core(correspondence_report(p, bound), "correspondence")?;
    let idx = &part.indices;
    let ell_prime = c.inner.len() - 1;
    ensure!(c.inner.ell_prime == ell_prime && part.ell_prime() == ell_prime, "ell' disagrees");

    // layers partition the orbit sets, on both sides
    let all_split: Vec<Triple> =
        core(enumerate_triples(&sigma, bound), "triples")?.into_iter().map(|o| o.canonical).collect();
    let mut seen: Vec<Triple> = c.refined.layers.iter().flat_map(|l| l.orbits.iter().map(|o| o.canonical.clone())).collect();
    seen.sort();
    ensure!(seen == all_split, "refined layers do not partition the split orbits");
    let all_inner: Vec<Triple> = core(enumerate_triples(&core(p.normalize(), "normalize")?, bound), "triples")?
        .into_iter()
        .map(|o| o.canonical)
        .collect();
    let mut seen: Vec<Triple> = c.inner.layers.iter().flat_map(|l| l.orbits.iter().map(|o| o.canonical.clone())).collect();
    seen.sort();
    ensure!(seen == all_inner, "inner layers do not partition the inner orbits");

    // ℓ_j from the complement layerings, ε_i from its definition
    let ell_list: Vec<i64> = part.complement_layers.iter().map(|l| l.len() as i64 - 1).collect();
    ensure!(idx.ell_list == ell_list, "ell_j {:?}, complement layerings give {ell_list:?}", idx.ell_list);
    let epsilons: Vec<u8> = part
        .image_layers
        .iter()
        .map(|layer| u8::from(part.orbits.iter().any(|o| !o.in_image && layer.contains(&o.point))))
        .collect();
    ensure!(idx.epsilons == epsilons, "epsilon {:?}, definition gives {epsilons:?}", idx.epsilons);
    if epsilons.contains(&1) {
        report.bump("instances_with_epsilon_1");
    }
    if ell_list.iter().any(|&l| l >= 0) {
        report.bump("instances_with_complement");
    }

    // the closed index formulas
    let sum_to = |i: usize| ell_list[..=i].iter().sum::<i64>();
    for i in 0..=ell_prime {
        let l = 1 + 2 * i as i64 + sum_to(i);
        ensure!(idx.l_indices[i] as i64 == l, "L_{i} = {} but formula gives {l}", idx.l_indices[i]);
        let before: i64 = epsilons[..i].iter().map(|&e| i64::from(e)).sum();
        ensure!(idx.lhat_indices[i] as i64 == l + before, "Lhat_{i} = {} off", idx.lhat_indices[i]);
    }
    let total = 3 + 2 * ell_prime as i64 + sum_to(ell_prime + 1);
    ensure!(idx.total_length as i64 == total, "L+1 = {} but formula gives {total}", idx.total_length);
    let eps: usize = epsilons.iter().map(|&e| usize::from(e)).sum();
    ensure!(idx.refined_length == idx.total_length + eps, "Lhat+1 = {} off", idx.refined_length);
    ensure!(c.refined.len() == idx.refined_length, "{} refined layers, expected {}", c.refined.len(), idx.refined_length);
    ensure!(part.naive_filtration().len() == idx.total_length, "naive length off");
    ensure!(
        part.sequence.iter().filter(|s| matches!(s.tag, PartTag::Image(_))).count() == ell_prime + 1,
        "image parts miscounted"
    );
    report.raise("longest_refined_filtration", c.refined.len() as u64);

    // image-only layers at Ĺ_i, non-image-only right after when ε_i = 1
    for (i, &eps) in epsilons.iter().enumerate() {
        let at = &c.refined.layers[idx.lhat_indices[i]];
        ensure!(at.orbits.iter().all(|o| o.in_image), "layer Lhat_{i} carries a non-image orbit");
        if eps == 1 {
            let next = &c.refined.layers[idx.lhat_indices[i] + 1];
            ensure!(next.orbits.iter().all(|o| !o.in_image), "layer Lhat_{i}+1 carries an image orbit");
        }
        // transfer_triple maps inner layer i onto layer Ĺ_i bijectively
        let mut images = BTreeSet::new();
        for o in &c.inner.layers[i].orbits {
            images.insert(core(transfer_triple(&o.canonical, table), "transfer")?);
        }
        let target: BTreeSet<Triple> = at.orbits.iter().map(|o| o.canonical.clone()).collect();
        ensure!(
            images.len() == c.inner.layers[i].orbits.len() && images == target,
            "inner layer {i} does not map onto layer Lhat_{i}"
        );
    }
    let mapped: Vec<(usize, usize)> = idx.lhat_indices.iter().copied().enumerate().collect();
    ensure!(c.quotient_map == mapped, "quotient map {:?} differs from Lhat", c.quotient_map);
    for &k in &c.unmatched {
        ensure!(c.refined.layers[k].orbits.iter().all(|o| !o.in_image), "unmatched layer {k} has an image orbit");
    }
    Ok(())
}
