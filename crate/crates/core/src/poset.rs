//! The dominance order on exponent points and antichain layerings.
//!
//! For points `s, t` of the same length, `s ≻ t` iff `s ≠ t` and every
//! proper prefix sum of `s` is at most the corresponding prefix sum of `t`.
//! Points are images of Weyl-chamber coordinates under the block embedding
//! (each coordinate repeated by its block size), so the zero vector sits on
//! top and "spread out" points sit below it.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A point of `ǎ_{P_0}`, written in the standard coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentPoint(Vec<Rational>);

impl ExponentPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        ExponentPoint(coords)
    }

    pub fn zero(len: usize) -> Self {
        ExponentPoint(vec![Rational::zero(); len])
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> Rational {
        self.0.iter().copied().sum()
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }
}

impl fmt::Display for ExponentPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Outcome of comparing two points in the dominance order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparison {
    /// `s ≻ t`.
    Succeeds,
    /// `s ≺ t`.
    Precedes,
    Equal,
    Incomparable,
}

impl Comparison {
    pub fn reverse(self) -> Comparison {
        match self {
            Comparison::Succeeds => Comparison::Precedes,
            Comparison::Precedes => Comparison::Succeeds,
            other => other,
        }
    }
}

/// Compares `s` and `t` in the dominance order.
///
/// Both points must have the same length and the same coordinate total (the
/// points handled here all sum to zero).
pub fn compare_points(s: &ExponentPoint, t: &ExponentPoint) -> Result<Comparison> {
    if s.len() != t.len() {
        return Err(Error::LengthMismatch { left: s.len(), right: t.len() });
    }
    let (ts, tt) = (s.total(), t.total());
    if ts != tt {
        return Err(Error::UnequalTotals { left: ts, right: tt });
    }
    if s == t {
        return Ok(Comparison::Equal);
    }
    let mut s_below = true;
    let mut t_below = true;
    let (mut ps, mut pt) = (Rational::zero(), Rational::zero());
    for (a, b) in s.0.iter().zip(&t.0).take(s.len().saturating_sub(1)) {
        ps += a;
        pt += b;
        s_below &= ps <= pt;
        t_below &= pt <= ps;
        if !s_below && !t_below {
            return Ok(Comparison::Incomparable);
        }
    }
    Ok(match (s_below, t_below) {
        (true, false) => Comparison::Succeeds,
        (false, true) => Comparison::Precedes,
        // equal totals and equal proper prefix sums force s == t
        (true, true) => return Err(Error::Internal("distinct points with equal prefix sums".into())),
        (false, false) => Comparison::Incomparable,
    })
}

/// `s ≻ t`. Panics on shape mismatch; for points of one instance.
pub(crate) fn succeeds(s: &ExponentPoint, t: &ExponentPoint) -> bool {
    compare_points(s, t).expect("points of one instance share shape") == Comparison::Succeeds
}

/// The embedding `ι`: repeats `z_j` exactly `block_sizes_j` times.
pub fn embed_blocks(block_sizes: &[u32], z: &[Rational]) -> Result<ExponentPoint> {
    if block_sizes.len() != z.len() {
        return Err(Error::LengthMismatch { left: block_sizes.len(), right: z.len() });
    }
    let sum: Rational = block_sizes
        .iter()
        .zip(z)
        .map(|(&n, &c)| c * Rational::from_integer(i64::from(n)))
        .sum();
    if !sum.is_zero() {
        return Err(Error::CenterConditionViolated { sum });
    }
    let mut coords = Vec::with_capacity(block_sizes.iter().map(|&n| n as usize).sum());
    for (&n, &c) in block_sizes.iter().zip(z) {
        coords.extend(core::iter::repeat_n(c, n as usize));
    }
    Ok(ExponentPoint(coords))
}

/// Repeats every coordinate `d` times in place: `ι'(z') ↦ ι(G(z'))`.
pub fn expand_by_degree(p: &ExponentPoint, d: u32) -> ExponentPoint {
    let mut coords = Vec::with_capacity(p.len() * d as usize);
    for &c in &p.0 {
        coords.extend(core::iter::repeat_n(c, d as usize));
    }
    ExponentPoint(coords)
}

/// An ordered partition of a finite point set into antichains.
///
/// Layer 0 is the bottom; the last layer holds the maximal elements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Layering {
    layers: Vec<BTreeSet<ExponentPoint>>,
}

impl Layering {
    pub fn new(layers: Vec<BTreeSet<ExponentPoint>>) -> Self {
        Layering { layers }
    }

    pub fn layers(&self) -> &[BTreeSet<ExponentPoint>] {
        &self.layers
    }

    pub fn into_layers(self) -> Vec<BTreeSet<ExponentPoint>> {
        self.layers
    }

    /// Number of layers (`ℓ + 1`); zero for the empty set.
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    /// `ℓ`, with the convention `ℓ = -1` for the empty layering.
    pub fn top_index(&self) -> i64 {
        self.layers.len() as i64 - 1
    }

    pub fn layer_of(&self, p: &ExponentPoint) -> Option<usize> {
        self.layers.iter().position(|l| l.contains(p))
    }
}

/// Dense `≻` matrix: `m[i][j]` iff `points[i] ≻ points[j]`.
pub(crate) fn succession_matrix(points: &[ExponentPoint]) -> Result<Vec<Vec<bool>>> {
    let n = points.len();
    let mut m = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            match compare_points(&points[i], &points[j])? {
                Comparison::Succeeds => m[i][j] = true,
                Comparison::Precedes => m[j][i] = true,
                _ => {}
            }
        }
    }
    Ok(m)
}

/// Strips all maximal elements repeatedly, then reverses the order so that
/// the first-stripped maxima form the last layer.
///
/// The empty set gives the empty layering.
pub fn layering_of(points: &BTreeSet<ExponentPoint>) -> Result<Layering> {
    let pts: Vec<ExponentPoint> = points.iter().cloned().collect();
    let succ = succession_matrix(&pts)?;
    let mut remaining: Vec<usize> = (0..pts.len()).collect();
    let mut stripped: Vec<BTreeSet<ExponentPoint>> = Vec::new();
    while !remaining.is_empty() {
        let (maximal, rest): (Vec<usize>, Vec<usize>) = remaining
            .iter()
            .partition(|&&x| !remaining.iter().any(|&y| succ[y][x]));
        debug_assert!(!maximal.is_empty());
        stripped.push(maximal.into_iter().map(|i| pts[i].clone()).collect());
        remaining = rest;
    }
    stripped.reverse();
    Ok(Layering { layers: stripped })
}

/// Like [`layering_of`], but rejects the empty set.
pub fn layer_antichains(points: &BTreeSet<ExponentPoint>) -> Result<Layering> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    layering_of(points)
}

/// Number of elements in a longest `≻`-chain, by dynamic programming over
/// the comparability DAG.
pub fn longest_chain_length(points: &BTreeSet<ExponentPoint>) -> Result<usize> {
    let pts: Vec<ExponentPoint> = points.iter().cloned().collect();
    let succ = succession_matrix(&pts)?;
    let n = pts.len();
    let mut memo: Vec<Option<usize>> = vec![None; n];
    fn chain_below(i: usize, succ: &[Vec<bool>], memo: &mut [Option<usize>]) -> usize {
        if let Some(v) = memo[i] {
            return v;
        }
        let mut best = 0;
        for j in 0..succ.len() {
            if succ[i][j] {
                best = best.max(chain_below(j, succ, memo));
            }
        }
        memo[i] = Some(best + 1);
        best + 1
    }
    Ok((0..n).map(|i| chain_below(i, &succ, &mut memo)).max().unwrap_or(0))
}

/// Why an ordered partition fails to be the antichain layering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayeringWitness {
    /// Two comparable points share a layer.
    ComparableInLayer { layer: usize, greater: ExponentPoint, lesser: ExponentPoint },
    /// A point in a higher layer lies strictly below a point in a lower one.
    Inverted {
        lower_layer: usize,
        upper_layer: usize,
        lower: ExponentPoint,
        upper: ExponentPoint,
    },
    /// No point of `missing_layer` lies strictly above `point`.
    Uncovered { point: ExponentPoint, layer: usize, missing_layer: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayeringVerdict {
    Pass,
    Fail(LayeringWitness),
}

impl LayeringVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, LayeringVerdict::Pass)
    }
}

/// Index-level witness, resolved to points by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum IndexWitness {
    ComparableInLayer { layer: usize, greater: usize, lesser: usize },
    Inverted { lower_layer: usize, upper_layer: usize, lower: usize, upper: usize },
    Uncovered { point: usize, layer: usize, missing_layer: usize },
}

/// Checks antichain layers, upward-only order across layers, and that every
/// point is covered from every higher layer. `parts` holds indices into the
/// matrix.
pub(crate) fn check_layering_indices(
    succ: &[Vec<bool>],
    parts: &[Vec<usize>],
) -> Option<IndexWitness> {
    for (layer, part) in parts.iter().enumerate() {
        for &a in part {
            for &b in part {
                if succ[a][b] {
                    return Some(IndexWitness::ComparableInLayer { layer, greater: a, lesser: b });
                }
            }
        }
    }
    for (lo, lower_part) in parts.iter().enumerate() {
        for (hi, upper_part) in parts.iter().enumerate().skip(lo + 1) {
            for &y in lower_part {
                for &x in upper_part {
                    if succ[y][x] {
                        return Some(IndexWitness::Inverted {
                            lower_layer: lo,
                            upper_layer: hi,
                            lower: y,
                            upper: x,
                        });
                    }
                }
            }
        }
    }
    for (lo, lower_part) in parts.iter().enumerate() {
        for &y in lower_part {
            for (hi, upper_part) in parts.iter().enumerate().skip(lo + 1) {
                if !upper_part.iter().any(|&x| succ[x][y]) {
                    return Some(IndexWitness::Uncovered { point: y, layer: lo, missing_layer: hi });
                }
            }
        }
    }
    None
}

/// Verifies a candidate ordered partition of `points` literally against the
/// three layering properties.
pub fn check_layering_properties(
    points: &BTreeSet<ExponentPoint>,
    candidate: &[BTreeSet<ExponentPoint>],
) -> Result<LayeringVerdict> {
    if candidate.iter().any(BTreeSet::is_empty) {
        return Err(Error::NotAPartition("empty part"));
    }
    let total: usize = candidate.iter().map(BTreeSet::len).sum();
    let union: BTreeSet<&ExponentPoint> = candidate.iter().flatten().collect();
    if union.len() != total {
        return Err(Error::NotAPartition("parts overlap"));
    }
    if union.len() != points.len() || !points.iter().all(|p| union.contains(p)) {
        return Err(Error::NotAPartition("union differs from the point set"));
    }
    let pts: Vec<ExponentPoint> = points.iter().cloned().collect();
    let succ = succession_matrix(&pts)?;
    let index = |p: &ExponentPoint| pts.binary_search(p).expect("point in set");
    let parts: Vec<Vec<usize>> =
        candidate.iter().map(|part| part.iter().map(index).collect()).collect();
    Ok(match check_layering_indices(&succ, &parts) {
        None => LayeringVerdict::Pass,
        Some(w) => LayeringVerdict::Fail(match w {
            IndexWitness::ComparableInLayer { layer, greater, lesser } => {
                LayeringWitness::ComparableInLayer {
                    layer,
                    greater: pts[greater].clone(),
                    lesser: pts[lesser].clone(),
                }
            }
            IndexWitness::Inverted { lower_layer, upper_layer, lower, upper } => {
                LayeringWitness::Inverted {
                    lower_layer,
                    upper_layer,
                    lower: pts[lower].clone(),
                    upper: pts[upper].clone(),
                }
            }
            IndexWitness::Uncovered { point, layer, missing_layer } => {
                LayeringWitness::Uncovered { point: pts[point].clone(), layer, missing_layer }
            }
        }),
    })
}
