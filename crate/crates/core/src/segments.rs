//! Segments: arithmetic progressions of exponents attached to one label.
//!
//! A segment of length `ℓ`, center `c` and step `δ` has exponents
//! `c + δ(ℓ-1)/2, c + δ(ℓ-3)/2, …, c - δ(ℓ-1)/2`. On the split side `δ = 1`
//! and the segment is the cuspidal support of `MW(ρ, ℓ) ν^c`; on the inner
//! side `δ = k_ρ` and it supports `MW'(ρ', ℓ) ν^c`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::support::{ExponentMultiset, LabelId};

/// Default cap on the number of exponents fed to exhaustive enumeration.
pub const DEFAULT_ENUMERATION_BOUND: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment {
    pub label: LabelId,
    pub length: u32,
    pub center: Rational,
    pub step: u32,
}

impl Segment {
    pub fn new(label: LabelId, length: u32, center: Rational, step: u32) -> Self {
        assert!(length >= 1 && step >= 1, "segments have positive length and step");
        Segment { label, length, center, step }
    }

    fn half_span(&self) -> Rational {
        Rational::new(i64::from(self.step) * (i64::from(self.length) - 1), 2)
    }

    pub fn top(&self) -> Rational {
        self.center + self.half_span()
    }

    pub fn bottom(&self) -> Rational {
        self.center - self.half_span()
    }

    /// Exponents in descending order.
    pub fn exponents(&self) -> Vec<Rational> {
        let step = Rational::from_integer(i64::from(self.step));
        let top = self.top();
        (0..self.length).map(|j| top - step * Rational::from_integer(i64::from(j))).collect()
    }

    /// Endpoints `(a, b)` with the exponents equal to `step·a, …, step·b`.
    pub fn endpoints(&self) -> (Rational, Rational) {
        let step = Rational::from_integer(i64::from(self.step));
        (self.bottom() / step, self.top() / step)
    }
}

/// Canonical block order: center descending, label name ascending, length
/// descending.
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .center
            .cmp(&self.center)
            .then(self.label.cmp(&other.label))
            .then(other.length.cmp(&self.length))
            .then(self.step.cmp(&other.step))
    }
}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn segment_exponents(seg: &Segment) -> ExponentMultiset {
    ExponentMultiset::new(seg.exponents())
}

/// The greedy peeling of [`greedy_decompose_fixed_length`] got stuck.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotDecomposable {
    /// The first exponent that should have been present but was not.
    pub missing: Rational,
}

fn counts(e: &ExponentMultiset) -> BTreeMap<Rational, usize> {
    let mut map = BTreeMap::new();
    for &x in e.entries() {
        *map.entry(x).or_insert(0) += 1;
    }
    map
}

fn take(map: &mut BTreeMap<Rational, usize>, x: Rational) -> bool {
    match map.get_mut(&x) {
        Some(c) if *c > 0 => {
            *c -= 1;
            if *c == 0 {
                map.remove(&x);
            }
            true
        }
        _ => false,
    }
}

fn put(map: &mut BTreeMap<Rational, usize>, x: Rational) {
    *map.entry(x).or_insert(0) += 1;
}

/// Splits `e` into step-1 segments all of length exactly `k`.
///
/// Repeatedly takes the largest remaining exponent `t` and removes
/// `t, t-1, …, t-k+1`. When this succeeds the decomposition is the only one.
pub fn greedy_decompose_fixed_length(
    e: &ExponentMultiset,
    k: u32,
    label: LabelId,
) -> core::result::Result<Vec<Segment>, NotDecomposable> {
    assert!(k >= 1);
    let mut remaining = counts(e);
    let mut out = Vec::with_capacity(e.len() / k as usize);
    while let Some((&top, _)) = remaining.iter().next_back() {
        for j in 0..k {
            let x = top - Rational::from_integer(i64::from(j));
            if !take(&mut remaining, x) {
                return Err(NotDecomposable { missing: x });
            }
        }
        let center = top - Rational::new(i64::from(k) - 1, 2);
        out.push(Segment::new(label, k, center, 1));
    }
    Ok(out)
}

/// Every partition of `e` into progressions with common difference `step`,
/// each written as a segment of `label`.
///
/// Partitions are multisets of segments; each is returned with its segments
/// in canonical order, and the list of partitions is sorted and free of
/// duplicates.
pub fn enumerate_progression_partitions(
    e: &ExponentMultiset,
    step: u32,
    label: LabelId,
    bound: usize,
) -> Result<Vec<Vec<Segment>>> {
    assert!(step >= 1);
    if e.len() > bound {
        return Err(Error::BoundExceeded { size: e.len(), bound });
    }
    let mut remaining = counts(e);
    let mut out = BTreeSet::new();
    let mut current = Vec::new();
    peel(&mut remaining, step, label, &mut current, &mut out);
    Ok(out.into_iter().collect())
}

// The largest remaining exponent must be the top of its progression, so
// branch on how far down that progression runs.
fn peel(
    remaining: &mut BTreeMap<Rational, usize>,
    step: u32,
    label: LabelId,
    current: &mut Vec<Segment>,
    out: &mut BTreeSet<Vec<Segment>>,
) {
    let Some((&top, _)) = remaining.iter().next_back() else {
        let mut partition = current.clone();
        partition.sort();
        out.insert(partition);
        return;
    };
    let delta = Rational::from_integer(i64::from(step));
    let half = Rational::new(i64::from(step), 2);
    take(remaining, top);
    let mut length = 1u32;
    loop {
        let center = top - half * Rational::from_integer(i64::from(length) - 1);
        current.push(Segment::new(label, length, center, step));
        peel(remaining, step, label, current, out);
        current.pop();
        let next = top - delta * Rational::from_integer(i64::from(length));
        if !take(remaining, next) {
            break;
        }
        length += 1;
    }
    for j in 0..length {
        put(remaining, top - delta * Rational::from_integer(i64::from(j)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::support::{LabelTable, RawLabel};
    use alloc::vec;

    fn label() -> LabelId {
        let table = LabelTable::new(1, &[RawLabel { name: "rho".into(), inner_size: 1, k: 1 }])
            .unwrap();
        table.lookup("rho").unwrap()
    }

    fn ms(v: &[Rational]) -> ExponentMultiset {
        ExponentMultiset::new(v.to_vec())
    }

    #[test]
    fn exponents_of_segments() {
        let r = label();
        assert_eq!(Segment::new(r, 2, int(0), 1).exponents(), vec![rat(1, 2), rat(-1, 2)]);
        assert_eq!(Segment::new(r, 1, rat(1, 2), 1).exponents(), vec![rat(1, 2)]);
        assert_eq!(Segment::new(r, 2, int(0), 2).exponents(), vec![int(1), int(-1)]);
        assert_eq!(segment_exponents(&Segment::new(r, 3, int(1), 1)).entries(), &[
            int(2),
            int(1),
            int(0)
        ]);
    }

    #[test]
    fn endpoints_recover_segment_bounds() {
        let r = label();
        assert_eq!(Segment::new(r, 3, int(1), 1).endpoints(), (int(0), int(2)));
        // Δ'(ρ'; -1/2, 1/2) with k = 2 has exponents 1, -1
        assert_eq!(Segment::new(r, 2, int(0), 2).endpoints(), (rat(-1, 2), rat(1, 2)));
    }

    #[test]
    fn greedy_examples() {
        let r = label();
        let e = ms(&[rat(1, 2), rat(-1, 2)]);
        assert_eq!(greedy_decompose_fixed_length(&e, 2, r).unwrap(), vec![Segment::new(
            r,
            2,
            int(0),
            1
        )]);
        assert_eq!(greedy_decompose_fixed_length(&e, 1, r).unwrap(), vec![
            Segment::new(r, 1, rat(1, 2), 1),
            Segment::new(r, 1, rat(-1, 2), 1),
        ]);
        let bad = ms(&[rat(1, 2), rat(1, 2), rat(-1, 2)]);
        assert_eq!(
            greedy_decompose_fixed_length(&bad, 2, r).unwrap_err(),
            NotDecomposable { missing: rat(-1, 2) }
        );
        assert!(greedy_decompose_fixed_length(&ms(&[]), 3, r).unwrap().is_empty());
    }

    #[test]
    fn enumeration_examples() {
        let r = label();
        let e = ms(&[rat(1, 2), rat(-1, 2)]);
        let parts = enumerate_progression_partitions(&e, 1, r, DEFAULT_ENUMERATION_BOUND).unwrap();
        // canonical sort puts the partition led by the higher center first
        assert_eq!(parts, vec![
            vec![Segment::new(r, 1, rat(1, 2), 1), Segment::new(r, 1, rat(-1, 2), 1)],
            vec![Segment::new(r, 2, int(0), 1)],
        ]);

        let parts = enumerate_progression_partitions(&ms(&[int(0)]), 2, r, 12).unwrap();
        assert_eq!(parts, vec![vec![Segment::new(r, 1, int(0), 2)]]);

        let parts = enumerate_progression_partitions(&e, 2, r, 12).unwrap();
        assert_eq!(parts, vec![vec![
            Segment::new(r, 1, rat(1, 2), 2),
            Segment::new(r, 1, rat(-1, 2), 2)
        ]]);
    }

    #[test]
    fn enumeration_deduplicates_repeated_exponents() {
        // {1,1,0}: [1][1][0] and [1][1,0] only
        let r = label();
        let parts =
            enumerate_progression_partitions(&ms(&[int(1), int(1), int(0)]), 1, r, 12).unwrap();
        assert_eq!(parts.len(), 2);
    }

    #[test]
    fn enumeration_respects_bound() {
        let r = label();
        let e = ms(&[int(0); 13]);
        assert_eq!(
            enumerate_progression_partitions(&e, 1, r, DEFAULT_ENUMERATION_BOUND).unwrap_err(),
            Error::BoundExceeded { size: 13, bound: 12 }
        );
    }

    #[test]
    fn canonical_segment_order() {
        let table = LabelTable::new(2, &[
            RawLabel { name: "rho".into(), inner_size: 2, k: 2 },
            RawLabel { name: "tau".into(), inner_size: 1, k: 1 },
        ])
        .unwrap();
        let (rho, tau) = (table.lookup("rho").unwrap(), table.lookup("tau").unwrap());
        let mut v = vec![
            Segment::new(tau, 2, int(0), 1),
            Segment::new(rho, 1, int(0), 1),
            Segment::new(tau, 1, rat(1, 2), 1),
            Segment::new(rho, 3, int(0), 1),
        ];
        v.sort();
        assert_eq!(v, vec![
            Segment::new(tau, 1, rat(1, 2), 1),
            Segment::new(rho, 3, int(0), 1),
            Segment::new(rho, 1, int(0), 1),
            Segment::new(tau, 2, int(0), 1),
        ]);
    }
}
