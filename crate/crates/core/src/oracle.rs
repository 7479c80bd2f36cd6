//! Exhaustive reference computations.
//!
//! These share nothing with the constructive code paths beyond the order
//! relation itself: they enumerate set partitions, ordered partitions and
//! subsets outright and filter them by the defining properties. They are
//! exponential and meant for small inputs only.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::poset::{check_layering_indices, succeeds, succession_matrix, ExponentPoint};
use crate::rational::Rational;
use crate::segments::Segment;
use crate::support::{ExponentMultiset, LabelId};

/// All set partitions of `0..n`, via restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn go(i: usize, max: usize, rgs: &mut [usize], out: &mut Vec<Vec<Vec<usize>>>) {
        if i == rgs.len() {
            let blocks = if rgs.is_empty() { 0 } else { max + 1 };
            let mut parts = vec![Vec::new(); blocks];
            for (x, &b) in rgs.iter().enumerate() {
                parts[b].push(x);
            }
            out.push(parts);
            return;
        }
        let limit = if i == 0 { 0 } else { max + 1 };
        for b in 0..=limit {
            rgs[i] = b;
            go(i + 1, max.max(b), rgs, out);
        }
    }
    go(0, 0, &mut rgs, &mut out);
    out
}

fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// All ordered partitions of `0..n` into non-empty parts.
pub fn ordered_set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    set_partitions(n).iter().flat_map(|p| permutations(p)).collect()
}

/// Every ordered partition of `points` that passes the three layering
/// properties.
pub fn admissible_layerings(
    points: &BTreeSet<ExponentPoint>,
) -> Result<Vec<Vec<BTreeSet<ExponentPoint>>>> {
    let pts: Vec<ExponentPoint> = points.iter().cloned().collect();
    let succ = succession_matrix(&pts)?;
    Ok(ordered_set_partitions(pts.len())
        .into_iter()
        .filter(|parts| check_layering_indices(&succ, parts).is_none())
        .map(|parts| {
            parts.iter().map(|part| part.iter().map(|&i| pts[i].clone()).collect()).collect()
        })
        .collect())
}

/// Every assignment of `complement` to `image_layers.len() + 1` possibly
/// empty blocks that satisfies the two defining properties of the coarse
/// complement partition.
pub fn admissible_complement_partitions(
    complement: &BTreeSet<ExponentPoint>,
    image_layers: &[BTreeSet<ExponentPoint>],
) -> Vec<Vec<BTreeSet<ExponentPoint>>> {
    let pts: Vec<&ExponentPoint> = complement.iter().collect();
    let blocks = image_layers.len() + 1;
    let total = blocks.checked_pow(pts.len() as u32).expect("small instance");
    let mut out = Vec::new();
    for code in 0..total {
        let mut parts = vec![BTreeSet::new(); blocks];
        let mut c = code;
        for p in &pts {
            parts[c % blocks].insert((*p).clone());
            c /= blocks;
        }
        if crate::filtration::coarse_violation(&parts, image_layers, false).is_none() {
            out.push(parts);
        }
    }
    out
}

/// Longest `≻`-chain by checking every subset for being totally ordered.
pub fn longest_chain_by_subsets(points: &BTreeSet<ExponentPoint>) -> usize {
    let pts: Vec<&ExponentPoint> = points.iter().collect();
    assert!(pts.len() < 20, "subset search is for small sets");
    let mut best = 0;
    for mask in 0u32..(1 << pts.len()) {
        let chosen: Vec<&ExponentPoint> =
            (0..pts.len()).filter(|i| mask & (1 << i) != 0).map(|i| pts[i]).collect();
        if chosen.len() <= best {
            continue;
        }
        let chain = chosen.iter().enumerate().all(|(i, a)| {
            chosen[i + 1..].iter().all(|b| succeeds(a, b) || succeeds(b, a))
        });
        if chain {
            best = chosen.len();
        }
    }
    best
}

/// A block of exponents, sorted descending, forms a progression with
/// difference `step`; returns it as a segment.
fn as_progression(values: &mut [Rational], step: u32, label: LabelId) -> Option<Segment> {
    values.sort_unstable_by(|a, b| b.cmp(a));
    let delta = Rational::from_integer(i64::from(step));
    if values.windows(2).any(|w| w[0] - w[1] != delta) {
        return None;
    }
    let len = values.len() as i64;
    let mean = values.iter().copied().sum::<Rational>() / Rational::from_integer(len);
    Some(Segment::new(label, values.len() as u32, mean, step))
}

/// All distinct partitions of `e` into progressions with difference
/// `step`, found by filtering every set partition of the entries.
pub fn progression_partitions_by_set_partitions(
    e: &ExponentMultiset,
    step: u32,
    label: LabelId,
) -> Vec<Vec<Segment>> {
    let entries = e.entries();
    let mut out = BTreeSet::new();
    'outer: for partition in set_partitions(entries.len()) {
        let mut segs = Vec::with_capacity(partition.len());
        for block in partition {
            let mut values: Vec<Rational> = block.iter().map(|&i| entries[i]).collect();
            match as_progression(&mut values, step, label) {
                Some(s) => segs.push(s),
                None => continue 'outer,
            }
        }
        segs.sort();
        out.insert(segs);
    }
    out.into_iter().collect()
}

/// The distinct partitions of `e` into step-1 segments all of length `k`.
pub fn fixed_length_partitions_by_set_partitions(
    e: &ExponentMultiset,
    k: u32,
    label: LabelId,
) -> Vec<Vec<Segment>> {
    progression_partitions_by_set_partitions(e, 1, label)
        .into_iter()
        .filter(|p| p.iter().all(|s| s.length == k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::support::{LabelTable, RawLabel};

    fn label() -> LabelId {
        LabelTable::new(1, &[RawLabel { name: "x".into(), inner_size: 1, k: 1 }])
            .unwrap()
            .lookup("x")
            .unwrap()
    }

    #[test]
    fn partition_counts_are_bell_and_fubini_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203];
        let fubini = [1, 1, 3, 13, 75, 541, 4683];
        for n in 0..7 {
            assert_eq!(set_partitions(n).len(), bell[n]);
            assert_eq!(ordered_set_partitions(n).len(), fubini[n]);
        }
    }

    #[test]
    fn progression_oracle_examples() {
        let r = label();
        let e = ExponentMultiset::new(vec![rat(1, 2), rat(-1, 2)]);
        assert_eq!(progression_partitions_by_set_partitions(&e, 1, r).len(), 2);
        assert_eq!(progression_partitions_by_set_partitions(&e, 2, r).len(), 1);
        let bad = ExponentMultiset::new(vec![rat(1, 2), rat(1, 2), rat(-1, 2)]);
        assert!(fixed_length_partitions_by_set_partitions(&bad, 2, r).is_empty());
    }

    #[test]
    fn chain_oracle_small_sets() {
        let a = ExponentPoint::new(vec![int(1), int(0), int(-1)]);
        let b = ExponentPoint::zero(3);
        let set: BTreeSet<_> = [a, b].into_iter().collect();
        assert_eq!(longest_chain_by_subsets(&set), 2);
        assert_eq!(longest_chain_by_subsets(&BTreeSet::new()), 0);
    }
}
