//! Triples `(R, Π, z)` and their isomorphism classes.
//!
//! A triple is recorded as its blocks: one segment per Levi factor, giving
//! the label and length of the discrete-spectrum block `MW(ρ, ℓ)` and its
//! twist `z_j` (the segment center). Isomorphisms only permute blocks with
//! equal centers, so sorting blocks canonically decides isomorphism.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poset::{embed_blocks, ExponentPoint};
use crate::rational::Rational;
use crate::segments::{enumerate_progression_partitions, Segment};
use crate::support::{LabelTable, Side, Support};
use crate::transfer::triple_in_image;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    side: Side,
    blocks: Vec<Segment>,
}

impl Triple {
    pub fn new(side: Side, blocks: Vec<Segment>) -> Self {
        Triple { side, blocks }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn blocks(&self) -> &[Segment] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn centers(&self) -> Vec<Rational> {
        self.blocks.iter().map(|b| b.center).collect()
    }

    /// `R`: block `j` has size `size(label) · ℓ_j`.
    pub fn block_sizes(&self, table: &LabelTable) -> Vec<u32> {
        self.blocks.iter().map(|b| table.get(b.label).size_on(self.side) * b.length).collect()
    }

    /// Centers weakly decreasing (the closed positive chamber).
    pub fn is_chamber_dominant(&self) -> bool {
        self.blocks.windows(2).all(|w| w[0].center >= w[1].center)
    }

    pub fn center_sum(&self, table: &LabelTable) -> Rational {
        self.block_sizes(table)
            .iter()
            .zip(&self.blocks)
            .map(|(&n, b)| b.center * Rational::from_integer(i64::from(n)))
            .sum()
    }

    pub fn is_canonical(&self) -> bool {
        self.blocks.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn canonical(&self) -> Triple {
        let mut blocks = self.blocks.clone();
        blocks.sort();
        Triple { side: self.side, blocks }
    }

    /// Dimension `r - 1` of `ǎ^G_R`, the rank of the symmetric-algebra
    /// factor attached to the triple.
    pub fn symmetric_algebra_rank(&self) -> usize {
        self.blocks.len().saturating_sub(1)
    }
}

pub fn canonicalize_triple(t: &Triple) -> Triple {
    t.canonical()
}

/// Product of `m!` over the multiplicities `m` of identical blocks.
pub fn automorphism_count(t: &Triple) -> u64 {
    let canonical = t.canonical();
    let mut count = 1u64;
    let mut run = 0u64;
    for (i, b) in canonical.blocks.iter().enumerate() {
        run = if i > 0 && canonical.blocks[i - 1] == *b { run + 1 } else { 1 };
        count *= run;
    }
    count
}

/// `ι(z)` for the triple's block sizes and centers.
pub fn triple_point(t: &Triple, table: &LabelTable) -> Result<ExponentPoint> {
    embed_blocks(&t.block_sizes(table), &t.centers())
}

/// One isomorphism class of triples, represented by its canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TripleOrbit {
    pub canonical: Triple,
    pub automorphisms: u64,
    /// Whether the orbit lies in the image of the transfer. Always true on
    /// the inner side.
    pub in_image: bool,
    pub point: ExponentPoint,
}

impl TripleOrbit {
    pub fn new(t: &Triple, table: &LabelTable) -> Result<Self> {
        let canonical = t.canonical();
        let in_image = match canonical.side {
            Side::Inner => true,
            Side::Split => triple_in_image(&canonical, table),
        };
        Ok(TripleOrbit {
            automorphisms: automorphism_count(&canonical),
            in_image,
            point: triple_point(&canonical, table)?,
            canonical,
        })
    }
}

/// All isomorphism classes of triples whose cuspidal support is `s`, in
/// canonical order.
///
/// Per label, the exponents are partitioned into progressions with the
/// side's step; every cross-label combination is one orbit.
pub fn enumerate_triples(s: &Support, bound: usize) -> Result<Vec<TripleOrbit>> {
    if s.is_empty() {
        return Err(Error::EmptySupport);
    }
    if s.len() > bound {
        return Err(Error::BoundExceeded { size: s.len(), bound });
    }
    let table = s.table();
    let mut combos: Vec<Vec<Segment>> = alloc::vec![Vec::new()];
    for label in s.labels_present() {
        let step = table.get(label).step_on(s.side());
        let parts = enumerate_progression_partitions(&s.exponent_multiset(label), step, label, bound)?;
        let mut next = Vec::with_capacity(combos.len() * parts.len());
        for prefix in &combos {
            for part in &parts {
                let mut blocks = prefix.clone();
                blocks.extend_from_slice(part);
                next.push(blocks);
            }
        }
        combos = next;
    }
    let mut orbits = BTreeSet::new();
    for blocks in combos {
        let t = Triple::new(s.side(), blocks);
        if !t.center_sum(table).is_zero() {
            // only possible when the support itself is off-center
            return Err(Error::CenterConditionViolated { sum: t.center_sum(table) });
        }
        orbits.insert(TripleOrbit::new(&t, table)?);
    }
    Ok(orbits.into_iter().collect())
}
