//! Cuspidal labels, supports and exponent multisets.
//!
//! A support is an ordered tensor product `ρ_1 ν^{s_1} ⊗ … ⊗ ρ_l ν^{s_l}` of
//! labelled cuspidal factors, living either on the inner form `G'_n` or on the
//! split group `G_{nd}`. Labels are opaque; only their sizes and the transfer
//! integer `k` matter.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

/// Which group a support, triple or layer belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    /// The inner form `G'_n` (units of `M_n(D)`).
    Inner,
    /// The split group `G_{nd} = GL_{nd}`.
    Split,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Inner => "inner",
            Side::Split => "split",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Index of a label in its [`LabelTable`].
///
/// Tables are sorted by name, so comparing ids compares names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(u16);

impl LabelId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A cuspidal representation `ρ'` of `G'_{m'}` together with its transfer
/// data: `G(ρ') = MW(ρ, k)` with `ρ` cuspidal on `G_m`, and `m' d = m k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CuspidalLabel {
    name: String,
    inner_size: u32,
    k: u32,
    split_size: u32,
}

impl CuspidalLabel {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// `m'`, the rank of the inner group carrying `ρ'`.
    pub fn inner_size(&self) -> u32 {
        self.inner_size
    }

    /// `k_ρ`.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// `m = m' d / k_ρ`.
    pub fn split_size(&self) -> u32 {
        self.split_size
    }

    pub fn size_on(&self, side: Side) -> u32 {
        match side {
            Side::Inner => self.inner_size,
            Side::Split => self.split_size,
        }
    }

    /// Common difference of segments on the given side.
    pub fn step_on(&self, side: Side) -> u32 {
        match side {
            Side::Inner => self.k,
            Side::Split => 1,
        }
    }
}

/// Unvalidated label record, as read from a problem file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawLabel {
    pub name: String,
    pub inner_size: i64,
    pub k: i64,
}

/// Unvalidated support factor: a label reference and an exponent string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawFactor {
    pub label: String,
    pub exponent: String,
}

/// Unvalidated problem instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawProblem {
    pub degree: i64,
    pub labels: Vec<RawLabel>,
    pub factors: Vec<RawFactor>,
    pub side: Side,
}

/// The labels of one problem instance plus the degree `d` of the division
/// algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelTable {
    degree: u32,
    labels: Vec<CuspidalLabel>,
}

impl LabelTable {
    /// Validates and sorts the labels by name.
    pub fn new(degree: i64, raw: &[RawLabel]) -> Result<Self> {
        if degree <= 0 {
            return Err(Error::NonPositiveDegree(degree));
        }
        let degree = u32::try_from(degree).map_err(|_| Error::NonPositiveDegree(degree))?;
        let mut labels = Vec::with_capacity(raw.len());
        for entry in raw {
            let name = entry.name.trim();
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(Error::InvalidLabelName(entry.name.clone()));
            }
            let positive = |field, value: i64| -> Result<u32> {
                if value <= 0 {
                    return Err(Error::NonPositiveSize { label: name.into(), field, value });
                }
                u32::try_from(value)
                    .map_err(|_| Error::NonPositiveSize { label: name.into(), field, value })
            };
            let inner_size = positive("inner_size", entry.inner_size)?;
            let k = positive("k", entry.k)?;
            if degree % k != 0 {
                return Err(Error::KDoesNotDivideDegree { label: name.into(), k, degree });
            }
            let scaled = u64::from(inner_size) * u64::from(degree);
            if scaled % u64::from(k) != 0 {
                return Err(Error::SplitSizeNotIntegral {
                    label: name.into(),
                    inner_size,
                    k,
                    degree,
                });
            }
            let split_size = u32::try_from(scaled / u64::from(k)).map_err(|_| {
                Error::SplitSizeNotIntegral { label: name.into(), inner_size, k, degree }
            })?;
            labels.push(CuspidalLabel { name: name.into(), inner_size, k, split_size });
        }
        labels.sort_by(|a, b| a.name.cmp(&b.name));
        if let Some(pair) = labels.windows(2).find(|w| w[0].name == w[1].name) {
            return Err(Error::DuplicateLabel(pair[0].name.clone()));
        }
        if labels.len() > usize::from(u16::MAX) {
            return Err(Error::Internal("too many labels".into()));
        }
        Ok(LabelTable { degree, labels })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, id: LabelId) -> &CuspidalLabel {
        &self.labels[id.index()]
    }

    pub fn lookup(&self, name: &str) -> Result<LabelId> {
        self.labels
            .binary_search_by(|l| l.name.as_str().cmp(name))
            .map(|i| LabelId(i as u16))
            .map_err(|_| Error::UnknownLabel(name.into()))
    }

    pub fn ids(&self) -> impl Iterator<Item = LabelId> + '_ {
        (0..self.labels.len()).map(|i| LabelId(i as u16))
    }

    pub fn name(&self, id: LabelId) -> &str {
        self.get(id).name()
    }
}

/// One factor `ρ ν^s` of a support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Factor {
    pub label: LabelId,
    pub exponent: Rational,
}

/// A multiset of exact rationals, stored sorted in descending order.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentMultiset {
    entries: Vec<Rational>,
}

impl ExponentMultiset {
    pub fn new(mut entries: Vec<Rational>) -> Self {
        entries.sort_unstable_by_key(|&e| Reverse(e));
        ExponentMultiset { entries }
    }

    /// Entries in descending order, with multiplicity.
    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn multiplicity(&self, value: Rational) -> usize {
        self.entries.iter().filter(|&&e| e == value).count()
    }

    /// Multiset sum.
    pub fn union(&self, other: &ExponentMultiset) -> ExponentMultiset {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        ExponentMultiset::new(entries)
    }
}

impl FromIterator<Rational> for ExponentMultiset {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        ExponentMultiset::new(iter.into_iter().collect())
    }
}

/// A cuspidal support on one side, bound to its label table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Support {
    side: Side,
    table: Arc<LabelTable>,
    factors: Vec<Factor>,
}

impl Support {
    /// Wraps factors without validation or reordering.
    pub fn new(side: Side, table: Arc<LabelTable>, factors: Vec<Factor>) -> Self {
        Support { side, table, factors }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn table(&self) -> &Arc<LabelTable> {
        &self.table
    }

    pub fn degree(&self) -> u32 {
        self.table.degree()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factor_size(&self, factor: &Factor) -> u32 {
        self.table.get(factor.label).size_on(self.side)
    }

    /// The block sizes of the parabolic subgroup the support lives on.
    pub fn block_sizes(&self) -> Vec<u32> {
        self.factors.iter().map(|f| self.factor_size(f)).collect()
    }

    /// `n` on the inner side, `n d` on the split side.
    pub fn ambient_rank(&self) -> u64 {
        self.factors.iter().map(|f| u64::from(self.factor_size(f))).sum()
    }

    /// `Σ size_j · s_j`, which must vanish.
    pub fn center_sum(&self) -> Rational {
        self.factors
            .iter()
            .map(|f| f.exponent * Rational::from_integer(i64::from(self.factor_size(f))))
            .sum()
    }

    /// Labels that occur in the support, in name order.
    pub fn labels_present(&self) -> BTreeSet<LabelId> {
        self.factors.iter().map(|f| f.label).collect()
    }

    pub fn exponents(&self) -> ExponentMultiset {
        self.factors.iter().map(|f| f.exponent).collect()
    }

    /// `E_ρ`: the exponents of the factors carrying `label`.
    pub fn exponent_multiset(&self, label: LabelId) -> ExponentMultiset {
        self.factors.iter().filter(|f| f.label == label).map(|f| f.exponent).collect()
    }

    pub fn is_normalized(&self) -> bool {
        self.factors.windows(2).all(|w| canonical_key(&w[0]) <= canonical_key(&w[1]))
    }

    /// Checks the center condition and sorts the factors into canonical
    /// order: exponent descending, then label name ascending.
    pub fn normalize(&self) -> Result<Support> {
        if self.factors.is_empty() {
            return Err(Error::EmptySupport);
        }
        let sum = self.center_sum();
        if !sum.is_zero() {
            return Err(Error::CenterConditionViolated { sum });
        }
        let mut factors = self.factors.clone();
        factors.sort_by_key(canonical_key);
        Ok(Support { side: self.side, table: Arc::clone(&self.table), factors })
    }
}

fn canonical_key(f: &Factor) -> (Reverse<Rational>, LabelId) {
    (Reverse(f.exponent), f.label)
}

/// Validates a raw problem into an (unnormalized) support. Factor order is
/// preserved.
pub fn parse_support(raw: &RawProblem) -> Result<Support> {
    let table = Arc::new(LabelTable::new(raw.degree, &raw.labels)?);
    let factors = raw
        .factors
        .iter()
        .map(|f| {
            Ok(Factor { label: table.lookup(f.label.trim())?, exponent: parse_rational(&f.exponent)? })
        })
        .collect::<Result<Vec<_>>>()?;
    if factors.is_empty() {
        return Err(Error::EmptySupport);
    }
    Ok(Support::new(raw.side, table, factors))
}

pub fn normalize_support(s: &Support) -> Result<Support> {
    s.normalize()
}

pub fn exponent_multiset(s: &Support, label: LabelId) -> ExponentMultiset {
    s.exponent_multiset(label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use alloc::string::ToString;
    use alloc::vec;

    fn quaternion_raw(factors: &[(&str, &str)]) -> RawProblem {
        RawProblem {
            degree: 2,
            labels: vec![
                RawLabel { name: "rho".into(), inner_size: 2, k: 2 },
                RawLabel { name: "tau".into(), inner_size: 1, k: 1 },
            ],
            factors: factors
                .iter()
                .map(|(l, e)| RawFactor { label: (*l).into(), exponent: (*e).into() })
                .collect(),
            side: Side::Inner,
        }
    }

    fn quaternion() -> Support {
        parse_support(&quaternion_raw(&[("tau", "1/2"), ("rho", "0"), ("tau", "-1/2")])).unwrap()
    }

    #[test]
    fn parses_quaternion_example() {
        let s = quaternion();
        assert_eq!(s.len(), 3);
        assert_eq!(s.ambient_rank(), 4);
        let rho = s.table().get(s.table().lookup("rho").unwrap());
        assert_eq!((rho.inner_size(), rho.k(), rho.split_size()), (2, 2, 2));
        let tau = s.table().get(s.table().lookup("tau").unwrap());
        assert_eq!((tau.inner_size(), tau.k(), tau.split_size()), (1, 1, 2));
    }

    #[test]
    fn single_factor_support() {
        let raw = RawProblem {
            degree: 2,
            labels: vec![RawLabel { name: "rho".into(), inner_size: 2, k: 2 }],
            factors: vec![RawFactor { label: "rho".into(), exponent: "0".into() }],
            side: Side::Inner,
        };
        let s = parse_support(&raw).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.ambient_rank(), 2);
    }

    #[test]
    fn parse_errors() {
        let err = parse_support(&quaternion_raw(&[("tau", "1/0")])).unwrap_err();
        assert!(err.to_string().contains("malformed rational"));

        let err = parse_support(&quaternion_raw(&[("sigma", "0")])).unwrap_err();
        assert_eq!(err, Error::UnknownLabel("sigma".into()));

        let mut raw = quaternion_raw(&[("tau", "0")]);
        raw.labels.push(RawLabel { name: "tau".into(), inner_size: 1, k: 1 });
        assert_eq!(parse_support(&raw).unwrap_err(), Error::DuplicateLabel("tau".into()));

        let mut raw = quaternion_raw(&[("tau", "0")]);
        raw.labels[0].inner_size = 0;
        assert!(matches!(parse_support(&raw), Err(Error::NonPositiveSize { .. })));

        let mut raw = quaternion_raw(&[("tau", "0")]);
        raw.labels[0].k = 3;
        assert!(matches!(parse_support(&raw), Err(Error::KDoesNotDivideDegree { .. })));

        let mut raw = quaternion_raw(&[("tau", "0")]);
        raw.degree = 0;
        assert_eq!(parse_support(&raw).unwrap_err(), Error::NonPositiveDegree(0));
    }

    #[test]
    fn sizes_satisfy_transfer_relation() {
        let s = quaternion();
        for id in s.table().ids() {
            let l = s.table().get(id);
            assert_eq!(l.inner_size() * s.degree(), l.split_size() * l.k());
        }
    }

    #[test]
    fn normalize_sorts_by_exponent_then_name() {
        let s = parse_support(&quaternion_raw(&[("tau", "-1/2"), ("tau", "1/2"), ("rho", "0")]))
            .unwrap();
        let n = s.normalize().unwrap();
        assert_eq!(n, quaternion());
        assert!(n.is_normalized());
        assert_eq!(n.normalize().unwrap(), n);
    }

    #[test]
    fn normalize_ties_break_on_name() {
        let s = parse_support(&quaternion_raw(&[("tau", "0"), ("rho", "0")])).unwrap();
        let n = s.normalize().unwrap();
        let names: Vec<_> = n.factors().iter().map(|f| n.table().name(f.label)).collect();
        assert_eq!(names, ["rho", "tau"]);
    }

    #[test]
    fn normalize_rejects_off_center_support() {
        let raw = RawProblem {
            degree: 1,
            labels: vec![RawLabel { name: "tau".into(), inner_size: 1, k: 1 }],
            factors: vec![
                RawFactor { label: "tau".into(), exponent: "1/2".into() },
                RawFactor { label: "tau".into(), exponent: "1/2".into() },
            ],
            side: Side::Inner,
        };
        let err = parse_support(&raw).unwrap().normalize().unwrap_err();
        assert_eq!(err, Error::CenterConditionViolated { sum: int(1) });
        assert!(err.to_string().contains("center condition violated"));
    }

    #[test]
    fn exponent_multisets_per_label() {
        let s = quaternion();
        let tau = s.table().lookup("tau").unwrap();
        let rho = s.table().lookup("rho").unwrap();
        assert_eq!(s.exponent_multiset(tau).entries(), &[rat(1, 2), rat(-1, 2)]);
        assert_eq!(s.exponent_multiset(rho).entries(), &[int(0)]);

        let lonely = parse_support(&quaternion_raw(&[("rho", "0")])).unwrap();
        assert!(lonely.exponent_multiset(tau).is_empty());
    }

    #[test]
    fn split_center_sum_uses_split_sizes() {
        let s = quaternion();
        let split = Support::new(Side::Split, Arc::clone(s.table()), s.factors().to_vec());
        assert_eq!(split.ambient_rank(), 6);
        assert_eq!(split.center_sum(), int(0));
        assert_eq!(Side::Split.to_string(), "split");
    }
}
