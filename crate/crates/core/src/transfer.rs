//! The Jacquet-Langlands transfer on supports and on triples.
//!
//! On supports, `ρ'ν^s` becomes the segment `ρν^{s+(k-1)/2} … ρν^{s-(k-1)/2}`.
//! On triples, the block `MW'(ρ', ℓ)ν^c` becomes `MW(ρ, kℓ)ν^c`: centers are
//! untouched and block sizes scale by `d`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::segments::{greedy_decompose_fixed_length, Segment};
use crate::support::{Factor, LabelTable, Side, Support};
use crate::triples::Triple;

/// The transferred support together with the parabolic partition `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportTransfer {
    /// `σ`, listed factor by factor as the inner factors expand, so that
    /// its block sizes are exactly `q_partition`.
    pub sigma: Support,
    /// `Q = (m_1, …, m_1, m_2, …)`, each `m_j` repeated `k_j` times, in the
    /// order of the normalized inner factors.
    pub q_partition: Vec<u32>,
}

pub fn transfer_support(inner: &Support) -> Result<SupportTransfer> {
    if inner.side() != Side::Inner {
        return Err(Error::WrongSide { expected: "inner" });
    }
    let inner = inner.normalize()?;
    let table = inner.table();
    let mut factors = Vec::new();
    let mut q_partition = Vec::new();
    for f in inner.factors() {
        let label = table.get(f.label);
        let seg = Segment::new(f.label, label.k(), f.exponent, 1);
        factors.extend(seg.exponents().into_iter().map(|e| Factor { label: f.label, exponent: e }));
        q_partition.extend(core::iter::repeat_n(label.split_size(), label.k() as usize));
    }
    let sigma = Support::new(Side::Split, Arc::clone(table), factors);
    // the center condition carries over: m k s summed equals d m' s summed
    sigma.normalize()?;
    Ok(SupportTransfer { sigma, q_partition })
}

impl SupportTransfer {
    /// `σ` in canonical factor order.
    pub fn normalized_sigma(&self) -> Support {
        self.sigma.normalize().expect("transfer preserves the center condition")
    }
}

/// Recovers the inner support whose transfer is `split`, if there is one.
pub fn invert_support(split: &Support) -> Result<Support> {
    if split.side() != Side::Split {
        return Err(Error::WrongSide { expected: "split" });
    }
    let table = split.table();
    let mut factors = Vec::new();
    for label in split.labels_present() {
        let k = table.get(label).k();
        let segments = greedy_decompose_fixed_length(&split.exponent_multiset(label), k, label)
            .map_err(|e| Error::NotInImage { label: table.name(label).into(), k, missing: e.missing })?;
        factors.extend(segments.into_iter().map(|s| Factor { label, exponent: s.center }));
    }
    Support::new(Side::Inner, Arc::clone(table), factors).normalize()
}

/// `(ρ', ℓ, c) ↦ (ρ, k_ρ ℓ, c)` block by block; the result is canonical.
pub fn transfer_triple(t: &Triple, table: &LabelTable) -> Result<Triple> {
    if t.side() != Side::Inner {
        return Err(Error::WrongSide { expected: "inner" });
    }
    let blocks = t
        .blocks()
        .iter()
        .map(|b| Segment::new(b.label, table.get(b.label).k() * b.length, b.center, 1))
        .collect();
    Ok(Triple::new(Side::Split, blocks).canonical())
}

/// A split triple is a transfer iff every block length is a multiple of
/// its label's `k`.
pub fn triple_in_image(t: &Triple, table: &LabelTable) -> bool {
    t.side() == Side::Split && t.blocks().iter().all(|b| b.length % table.get(b.label).k() == 0)
}

/// The inner triple mapping to `t`, built by cutting each split block into
/// its chain of length-`k` segments and regrouping their centers into one
/// inner segment of step `k`. `None` when `t` is not in the image.
pub fn preimage_triple(t: &Triple, table: &LabelTable) -> Option<Triple> {
    if !triple_in_image(t, table) {
        return None;
    }
    let mut blocks = Vec::with_capacity(t.len());
    for b in t.blocks() {
        let k = table.get(b.label).k();
        let pieces =
            greedy_decompose_fixed_length(&crate::segments::segment_exponents(b), k, b.label).ok()?;
        let count = pieces.len() as i64;
        let mean: Rational =
            pieces.iter().map(|p| p.center).sum::<Rational>() / Rational::from_integer(count);
        blocks.push(Segment::new(b.label, pieces.len() as u32, mean, k));
    }
    Some(Triple::new(Side::Inner, blocks).canonical())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::support::{parse_support, RawFactor, RawLabel, RawProblem};
    use crate::triples::enumerate_triples;
    use alloc::vec;

    fn problem(degree: i64, labels: &[(&str, i64, i64)], factors: &[(&str, &str)], side: Side) -> Support {
        let raw = RawProblem {
            degree,
            labels: labels
                .iter()
                .map(|&(n, m, k)| RawLabel { name: n.into(), inner_size: m, k })
                .collect(),
            factors: factors
                .iter()
                .map(|(l, e)| RawFactor { label: (*l).into(), exponent: (*e).into() })
                .collect(),
            side,
        };
        parse_support(&raw).unwrap()
    }

    const QUATERNION: &[(&str, i64, i64)] = &[("rho", 2, 2), ("tau", 1, 1)];

    fn listing(s: &Support) -> Vec<(&str, Rational)> {
        s.factors().iter().map(|f| (s.table().name(f.label), f.exponent)).collect()
    }

    #[test]
    fn quaternion_support_transfer() {
        let p = problem(2, QUATERNION, &[("tau", "1/2"), ("rho", "0"), ("tau", "-1/2")], Side::Inner);
        let t = transfer_support(&p).unwrap();
        assert_eq!(listing(&t.sigma), vec![
            ("tau", rat(1, 2)),
            ("rho", rat(1, 2)),
            ("rho", rat(-1, 2)),
            ("tau", rat(-1, 2)),
        ]);
        assert_eq!(t.q_partition, vec![2, 2, 2, 2]);
        assert_eq!(t.sigma.ambient_rank(), p.ambient_rank() * 2);
        assert_eq!(invert_support(&t.sigma).unwrap(), p.normalize().unwrap());
    }

    #[test]
    fn single_factor_stretches() {
        let p = problem(2, &[("rho", 2, 2)], &[("rho", "0")], Side::Inner);
        let t = transfer_support(&p).unwrap();
        assert_eq!(listing(&t.sigma), vec![("rho", rat(1, 2)), ("rho", rat(-1, 2))]);
        assert_eq!(t.q_partition, vec![2, 2]);
    }

    #[test]
    fn split_case_is_identity() {
        let factors = [("a", "1"), ("b", "0"), ("a", "-1")];
        let p = problem(1, &[("a", 1, 1), ("b", 1, 1)], &factors, Side::Inner);
        let t = transfer_support(&p).unwrap();
        assert_eq!(listing(&t.sigma), listing(&p));
        let back = invert_support(&t.sigma).unwrap();
        assert_eq!(listing(&back), listing(&p));
    }

    #[test]
    fn inversion_failure_names_missing_exponent() {
        let sigma = problem(
            2,
            QUATERNION,
            &[("tau", "1/2"), ("rho", "1/2"), ("rho", "1/2"), ("tau", "-1/2"), ("tau", "-1/2"), ("tau", "-1/2")],
            Side::Split,
        );
        assert_eq!(invert_support(&sigma).unwrap_err(), Error::NotInImage {
            label: "rho".into(),
            k: 2,
            missing: rat(-1, 2)
        });
    }

    #[test]
    fn sides_are_checked() {
        let p = problem(2, QUATERNION, &[("rho", "0")], Side::Inner);
        assert_eq!(invert_support(&p).unwrap_err(), Error::WrongSide { expected: "split" });
        let s = problem(2, QUATERNION, &[("rho", "0")], Side::Split);
        assert_eq!(transfer_support(&s).unwrap_err(), Error::WrongSide { expected: "inner" });
    }

    #[test]
    fn quaternion_triple_transfer() {
        let p = problem(2, QUATERNION, &[("tau", "1/2"), ("rho", "0"), ("tau", "-1/2")], Side::Inner);
        let table = p.table();
        let (rho, tau) = (table.lookup("rho").unwrap(), table.lookup("tau").unwrap());
        let inner = Triple::new(Side::Inner, vec![
            Segment::new(tau, 1, rat(1, 2), 1),
            Segment::new(rho, 1, int(0), 2),
            Segment::new(tau, 1, rat(-1, 2), 1),
        ]);
        let split = transfer_triple(&inner, table).unwrap();
        assert_eq!(split, Triple::new(Side::Split, vec![
            Segment::new(tau, 1, rat(1, 2), 1),
            Segment::new(rho, 2, int(0), 1),
            Segment::new(tau, 1, rat(-1, 2), 1),
        ]));
        assert_eq!(split.block_sizes(table), vec![2, 4, 2]);
        assert!(triple_in_image(&split, table));
        assert_eq!(preimage_triple(&split, table), Some(inner.canonical()));

        let other = Triple::new(Side::Split, vec![
            Segment::new(rho, 1, rat(1, 2), 1),
            Segment::new(tau, 2, int(0), 1),
            Segment::new(rho, 1, rat(-1, 2), 1),
        ]);
        assert!(!triple_in_image(&other, table));
        assert_eq!(preimage_triple(&other, table), None);

        let single = Triple::new(Side::Inner, vec![Segment::new(rho, 1, int(0), 2)]);
        assert_eq!(
            transfer_triple(&single, table).unwrap().blocks(),
            &[Segment::new(rho, 2, int(0), 1)]
        );
    }

    #[test]
    fn image_orbits_have_preimages_among_inner_orbits() {
        let p = problem(2, QUATERNION, &[("tau", "1/2"), ("rho", "0"), ("tau", "-1/2")], Side::Inner);
        let inner: Vec<_> = enumerate_triples(&p, 12).unwrap();
        let sigma = transfer_support(&p).unwrap().sigma;
        for orbit in enumerate_triples(&sigma, 12).unwrap() {
            let pre = preimage_triple(&orbit.canonical, sigma.table());
            assert_eq!(pre.is_some(), orbit.in_image);
            if let Some(pre) = pre {
                assert!(inner.iter().any(|o| o.canonical == pre));
                assert_eq!(transfer_triple(&pre, sigma.table()).unwrap(), orbit.canonical);
            }
        }
    }
}
