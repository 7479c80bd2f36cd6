//! The inner Franke filtration, its naive and refined counterparts on the
//! split side, and the layer-by-layer correspondence between them.
//!
//! Every builder re-checks the structural properties it relies on and
//! reports a violation as [`Error::Internal`] with the offending data.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poset::{
    check_layering_indices, expand_by_degree, layer_antichains, layering_of,
    longest_chain_length, succeeds, ExponentPoint, Layering,
};
use crate::support::{Side, Support};
use crate::transfer::{invert_support, transfer_support, transfer_triple};
use crate::triples::{enumerate_triples, Triple, TripleOrbit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LayerKind {
    Inner,
    SplitMixed,
    SplitImageOnly,
    SplitNonimageOnly,
}

impl LayerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LayerKind::Inner => "inner",
            LayerKind::SplitMixed => "split_mixed",
            LayerKind::SplitImageOnly => "split_image_only",
            LayerKind::SplitNonimageOnly => "split_nonimage_only",
        }
    }

    fn of_split(orbits: &[TripleOrbit]) -> LayerKind {
        let image = orbits.iter().filter(|o| o.in_image).count();
        if image == orbits.len() {
            LayerKind::SplitImageOnly
        } else if image == 0 {
            LayerKind::SplitNonimageOnly
        } else {
            LayerKind::SplitMixed
        }
    }
}

/// One quotient of a filtration: its exponent points and the triple orbits
/// contributing to it, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationLayer {
    pub index: usize,
    pub points: BTreeSet<ExponentPoint>,
    pub orbits: Vec<TripleOrbit>,
    pub kind: LayerKind,
}

/// Index bookkeeping of a split-side filtration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndices {
    /// `ℓ_0, …, ℓ_{ℓ'+1}`; `-1` for an empty complement block.
    pub ell_list: Vec<i64>,
    /// `ε_0, …, ε_{ℓ'}`.
    pub epsilons: Vec<u8>,
    /// `L_i`: position of the `i`-th image layer in the naive order.
    pub l_indices: Vec<usize>,
    /// `Ĺ_i`: position of the `i`-th image layer in the refined order.
    pub lhat_indices: Vec<usize>,
    /// `L + 1`.
    pub total_length: usize,
    /// `Ĺ + 1`.
    pub refined_length: usize,
}

impl SplitIndices {
    fn compute(ell_prime: usize, ell_list: Vec<i64>, epsilons: Vec<u8>) -> Self {
        let mut l_indices = Vec::with_capacity(ell_prime + 1);
        let mut lhat_indices = Vec::with_capacity(ell_prime + 1);
        let (mut run, mut eps) = (0i64, 0usize);
        for i in 0..=ell_prime {
            // (ℓ_0+1) + … + (ℓ_i+1) + i
            run += ell_list[i] + 1;
            let l = (run + i as i64) as usize;
            l_indices.push(l);
            lhat_indices.push(l + eps);
            eps += usize::from(epsilons[i]);
        }
        let total_length =
            (ell_prime as i64 + 1 + ell_list.iter().map(|l| l + 1).sum::<i64>()) as usize;
        SplitIndices {
            refined_length: total_length + eps,
            ell_list,
            epsilons,
            l_indices,
            lhat_indices,
            total_length,
        }
    }

    /// Re-derives every index from the closed formulas and compares.
    pub fn check_identities(&self, ell_prime: usize) -> Result<()> {
        let ell_sum = |upto: usize| self.ell_list[..=upto].iter().sum::<i64>();
        for i in 0..=ell_prime {
            let l = 1 + 2 * i as i64 + ell_sum(i);
            if self.l_indices[i] as i64 != l {
                return Err(Error::Internal(format!("L_{i} is {}, formula gives {l}", self.l_indices[i])));
            }
            let eps_before: usize = self.epsilons[..i].iter().map(|&e| usize::from(e)).sum();
            if self.lhat_indices[i] != self.l_indices[i] + eps_before {
                return Err(Error::Internal(format!("Lhat_{i} = {} breaks the formula", self.lhat_indices[i])));
            }
        }
        let total = 3 + 2 * ell_prime as i64 + ell_sum(ell_prime + 1);
        if self.total_length as i64 != total {
            return Err(Error::Internal(format!("L+1 is {}, formula gives {total}", self.total_length)));
        }
        let eps_total: usize = self.epsilons.iter().map(|&e| usize::from(e)).sum();
        if self.refined_length != self.total_length + eps_total {
            return Err(Error::Internal("Lhat+1 breaks the formula".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationReport {
    pub side: Side,
    pub layers: Vec<FiltrationLayer>,
    /// `ℓ'`: the inner filtration has `ℓ' + 1` layers.
    pub ell_prime: usize,
    /// Present on split-side reports only.
    pub indices: Option<SplitIndices>,
}

impl FiltrationReport {
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn orbit_count(&self) -> usize {
        self.layers.iter().map(|l| l.orbits.len()).sum()
    }
}

/// Where a part of the split ordered partition comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartTag {
    /// Antichain `layer` of complement block `block`.
    Complement { block: usize, layer: usize },
    /// The transported inner layer `i`.
    Image(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionPart {
    pub tag: PartTag,
    pub points: BTreeSet<ExponentPoint>,
}

/// The ordered partition of all split exponent points, with everything
/// needed to derive the naive and refined filtrations from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPartition {
    pub inner: Support,
    pub inner_filtration: FiltrationReport,
    pub sigma: Support,
    pub q_partition: Vec<u32>,
    /// All split orbits, canonical order.
    pub orbits: Vec<TripleOrbit>,
    /// Image points, layered by transport of the inner layering.
    pub image_layers: Vec<BTreeSet<ExponentPoint>>,
    /// The coarse blocks of the complement, `ℓ' + 2` of them, possibly empty.
    pub complement: Vec<BTreeSet<ExponentPoint>>,
    /// Antichain refinement of each complement block.
    pub complement_layers: Vec<Layering>,
    /// Complement block 0, image layer 0, complement block 1, …, image
    /// layer `ℓ'`, complement block `ℓ'+1`, empty parts skipped.
    pub sequence: Vec<PartitionPart>,
    pub indices: SplitIndices,
}

fn orbits_by_point(orbits: &[TripleOrbit]) -> BTreeMap<&ExponentPoint, Vec<&TripleOrbit>> {
    let mut map: BTreeMap<&ExponentPoint, Vec<&TripleOrbit>> = BTreeMap::new();
    for o in orbits {
        map.entry(&o.point).or_default().push(o);
    }
    map
}

fn collect_orbits(
    by_point: &BTreeMap<&ExponentPoint, Vec<&TripleOrbit>>,
    points: &BTreeSet<ExponentPoint>,
    keep: impl Fn(&TripleOrbit) -> bool,
) -> Vec<TripleOrbit> {
    let mut out: Vec<TripleOrbit> = points
        .iter()
        .flat_map(|p| by_point.get(p).into_iter().flatten())
        .filter(|o| keep(o))
        .map(|&o| o.clone())
        .collect();
    out.sort();
    out
}

/// The inner Franke filtration: antichain layers of the inner exponent
/// points, bottom layer first.
pub fn build_inner_filtration(p: &Support, bound: usize) -> Result<FiltrationReport> {
    if p.side() != Side::Inner {
        return Err(Error::WrongSide { expected: "inner" });
    }
    let p = p.normalize()?;
    let orbits = enumerate_triples(&p, bound)?;
    let points: BTreeSet<ExponentPoint> = orbits.iter().map(|o| o.point.clone()).collect();
    let layering = layer_antichains(&points)?;
    let chain = longest_chain_length(&points)?;
    if chain != layering.len() {
        return Err(Error::Internal(format!(
            "inner filtration has {} layers but the longest chain has {chain} points",
            layering.len()
        )));
    }
    let by_point = orbits_by_point(&orbits);
    let layers = layering
        .layers()
        .iter()
        .enumerate()
        .map(|(index, pts)| FiltrationLayer {
            index,
            points: pts.clone(),
            orbits: collect_orbits(&by_point, pts, |_| true),
            kind: LayerKind::Inner,
        })
        .collect();
    Ok(FiltrationReport { side: Side::Inner, layers, ell_prime: layering.len() - 1, indices: None })
}

/// Splits the complement points into `ℓ' + 2` blocks, top block first: a
/// point goes to block `i` when it lies below no point of image layer `i-1`.
fn coarse_complement(
    complement: &BTreeSet<ExponentPoint>,
    image_layers: &[BTreeSet<ExponentPoint>],
) -> Vec<BTreeSet<ExponentPoint>> {
    let top = image_layers.len();
    let mut blocks = alloc::vec![BTreeSet::new(); top + 1];
    let mut remaining = complement.clone();
    for i in (1..=top).rev() {
        let (taken, rest): (BTreeSet<_>, BTreeSet<_>) = remaining
            .into_iter()
            .partition(|zeta| !image_layers[i - 1].iter().any(|z| succeeds(z, zeta)));
        blocks[i] = taken;
        remaining = rest;
    }
    blocks[0] = remaining;
    blocks
}

/// Checks properties (i)-(iii) of the coarse complement partition against
/// the image layers. Returns a description of the first violation.
pub(crate) fn coarse_violation(
    blocks: &[BTreeSet<ExponentPoint>],
    image_layers: &[BTreeSet<ExponentPoint>],
    with_upward_only: bool,
) -> Option<alloc::string::String> {
    let top = image_layers.len();
    // (i) nothing in a higher block sits below an image point of a lower layer
    for (i, block) in blocks.iter().enumerate() {
        for (i0, layer) in image_layers.iter().enumerate().take(i) {
            for zeta in block {
                if let Some(z) = layer.iter().find(|z| succeeds(z, zeta)) {
                    return Some(format!("block {i} point {zeta} lies below image layer {i0} point {z}"));
                }
            }
        }
    }
    // (ii) every point is covered by every image layer from its own index up
    for (i0, block) in blocks.iter().enumerate() {
        for zeta in block {
            for (i, layer) in image_layers.iter().enumerate().take(top).skip(i0) {
                if !layer.iter().any(|z| succeeds(z, zeta)) {
                    return Some(format!("block {i0} point {zeta} has nothing above it in image layer {i}"));
                }
            }
        }
    }
    if with_upward_only {
        // (iii) comparabilities across blocks point upward
        for (i0, lower) in blocks.iter().enumerate() {
            for (i, upper) in blocks.iter().enumerate().skip(i0 + 1) {
                for zeta in upper {
                    if let Some(z0) = lower.iter().find(|z0| succeeds(z0, zeta)) {
                        return Some(format!(
                            "block {i} point {zeta} lies below block {i0} point {z0}"
                        ));
                    }
                }
            }
        }
    }
    None
}

/// Builds the ordered partition of the split exponent points for `sigma`,
/// which must be the transfer of some inner support.
pub fn build_split_partition(sigma: &Support, bound: usize) -> Result<SplitPartition> {
    if sigma.side() != Side::Split {
        return Err(Error::WrongSide { expected: "split" });
    }
    let normalized = sigma.normalize()?;
    let inner = invert_support(&normalized)?;
    let transfer = transfer_support(&inner)?;
    if transfer.normalized_sigma() != normalized {
        return Err(Error::Internal("transfer of the inverted support differs from the input".into()));
    }
    let sigma = transfer.sigma;
    let degree = sigma.degree();
    let inner_filtration = build_inner_filtration(&inner, bound)?;
    let ell_prime = inner_filtration.ell_prime;
    let orbits = enumerate_triples(&sigma, bound)?;

    let image_layers: Vec<BTreeSet<ExponentPoint>> = inner_filtration
        .layers
        .iter()
        .map(|l| l.points.iter().map(|p| expand_by_degree(p, degree)).collect())
        .collect();
    let image_points: BTreeSet<ExponentPoint> = image_layers.iter().flatten().cloned().collect();
    let from_orbits: BTreeSet<ExponentPoint> =
        orbits.iter().filter(|o| o.in_image).map(|o| o.point.clone()).collect();
    if image_points != from_orbits {
        return Err(Error::Internal(
            "expanded inner points differ from the points of image triples".into(),
        ));
    }
    let image_total: usize = image_layers.iter().map(BTreeSet::len).sum();
    if image_total != image_points.len() {
        return Err(Error::Internal("transported image layers overlap".into()));
    }

    // the transported layering must still be the antichain layering
    let flat: Vec<ExponentPoint> = image_points.iter().cloned().collect();
    let succ = crate::poset::succession_matrix(&flat)?;
    let parts: Vec<Vec<usize>> = image_layers
        .iter()
        .map(|l| l.iter().map(|p| flat.binary_search(p).expect("image point")).collect())
        .collect();
    if let Some(w) = check_layering_indices(&succ, &parts) {
        return Err(Error::Internal(format!("transported image layering fails: {w:?}")));
    }

    let all_points: BTreeSet<ExponentPoint> = orbits.iter().map(|o| o.point.clone()).collect();
    let complement: BTreeSet<ExponentPoint> =
        all_points.difference(&image_points).cloned().collect();

    // a complement point never sits both above and below one image layer
    for zeta in &complement {
        for (i, layer) in image_layers.iter().enumerate() {
            let above = layer.iter().any(|z| succeeds(zeta, z));
            let below = layer.iter().any(|z| succeeds(z, zeta));
            if above && below {
                return Err(Error::Internal(format!(
                    "complement point {zeta} is both above and below image layer {i}"
                )));
            }
        }
    }

    let blocks = coarse_complement(&complement, &image_layers);
    if let Some(v) = coarse_violation(&blocks, &image_layers, true) {
        return Err(Error::Internal(format!("complement partition: {v}")));
    }
    let complement_layers =
        blocks.iter().map(layering_of).collect::<Result<Vec<Layering>>>()?;

    let mut sequence = Vec::new();
    for (i, layering) in complement_layers.iter().enumerate() {
        for (j, pts) in layering.layers().iter().enumerate() {
            sequence.push(PartitionPart { tag: PartTag::Complement { block: i, layer: j }, points: pts.clone() });
        }
        if i <= ell_prime {
            sequence.push(PartitionPart { tag: PartTag::Image(i), points: image_layers[i].clone() });
        }
    }

    let ell_list: Vec<i64> = complement_layers.iter().map(Layering::top_index).collect();
    let epsilons: Vec<u8> = image_layers
        .iter()
        .map(|layer| {
            u8::from(orbits.iter().any(|o| !o.in_image && layer.contains(&o.point)))
        })
        .collect();
    let indices = SplitIndices::compute(ell_prime, ell_list, epsilons);
    indices.check_identities(ell_prime)?;
    if indices.total_length != sequence.len() {
        return Err(Error::Internal(format!(
            "ordered partition has {} parts, index formula gives {}",
            sequence.len(),
            indices.total_length
        )));
    }
    for (i, &l) in indices.l_indices.iter().enumerate() {
        if sequence[l].tag != PartTag::Image(i) {
            return Err(Error::Internal(format!("part {l} is not image layer {i}")));
        }
    }

    Ok(SplitPartition {
        inner,
        inner_filtration,
        q_partition: transfer.q_partition,
        sigma,
        orbits,
        image_layers,
        complement: blocks,
        complement_layers,
        sequence,
        indices,
    })
}

impl SplitPartition {
    pub fn ell_prime(&self) -> usize {
        self.inner_filtration.ell_prime
    }

    /// One layer per part of the ordered partition, holding every orbit at
    /// its points.
    pub fn naive_filtration(&self) -> FiltrationReport {
        let by_point = orbits_by_point(&self.orbits);
        let layers = self
            .sequence
            .iter()
            .enumerate()
            .map(|(index, part)| {
                let orbits = collect_orbits(&by_point, &part.points, |_| true);
                FiltrationLayer { index, points: part.points.clone(), kind: LayerKind::of_split(&orbits), orbits }
            })
            .collect();
        FiltrationReport {
            side: Side::Split,
            layers,
            ell_prime: self.ell_prime(),
            indices: Some(self.indices.clone()),
        }
    }

    /// Image layers whose point set also carries non-image orbits — the
    /// layers the refinement has to split.
    pub fn mixed_image_layers(&self) -> Vec<usize> {
        (0..self.image_layers.len()).filter(|&i| self.indices.epsilons[i] == 1).collect()
    }

    /// The refinement: each image layer keeps only image orbits, followed,
    /// when it also carried non-image orbits, by a copy holding those.
    pub fn refined_filtration(&self) -> Result<FiltrationReport> {
        let by_point = orbits_by_point(&self.orbits);
        let mut layers: Vec<FiltrationLayer> = Vec::with_capacity(self.indices.refined_length);
        let mut push = |points: &BTreeSet<ExponentPoint>, orbits: Vec<TripleOrbit>| {
            let index = layers.len();
            layers.push(FiltrationLayer {
                index,
                points: points.clone(),
                kind: LayerKind::of_split(&orbits),
                orbits,
            });
        };
        for part in &self.sequence {
            match part.tag {
                PartTag::Complement { .. } => {
                    push(&part.points, collect_orbits(&by_point, &part.points, |_| true));
                }
                PartTag::Image(i) => {
                    push(&part.points, collect_orbits(&by_point, &part.points, |o| o.in_image));
                    if self.indices.epsilons[i] == 1 {
                        push(&part.points, collect_orbits(&by_point, &part.points, |o| !o.in_image));
                    }
                }
            }
        }
        let report = FiltrationReport {
            side: Side::Split,
            layers,
            ell_prime: self.ell_prime(),
            indices: Some(self.indices.clone()),
        };
        self.check_refined(&report)?;
        Ok(report)
    }

    fn check_refined(&self, report: &FiltrationReport) -> Result<()> {
        let idx = &self.indices;
        if report.layers.len() != idx.refined_length {
            return Err(Error::Internal(format!(
                "refined filtration has {} layers, index formula gives {}",
                report.layers.len(),
                idx.refined_length
            )));
        }
        let mut seen: BTreeSet<&TripleOrbit> = BTreeSet::new();
        for layer in &report.layers {
            if layer.orbits.is_empty() {
                return Err(Error::Internal(format!("refined layer {} is empty", layer.index)));
            }
            for o in &layer.orbits {
                if !layer.points.contains(&o.point) {
                    return Err(Error::Internal(format!("orbit point {} outside its layer", o.point)));
                }
                if !seen.insert(o) {
                    return Err(Error::Internal(format!("orbit at {} appears twice", o.point)));
                }
            }
        }
        if seen.len() != self.orbits.len() {
            return Err(Error::Internal("refined layers miss some orbits".into()));
        }
        for (i, &lhat) in idx.lhat_indices.iter().enumerate() {
            let layer = &report.layers[lhat];
            if layer.kind != LayerKind::SplitImageOnly || layer.points != self.image_layers[i] {
                return Err(Error::Internal(format!("refined layer {lhat} is not image-only layer {i}")));
            }
            if idx.epsilons[i] == 1 {
                let extra = &report.layers[lhat + 1];
                if extra.kind != LayerKind::SplitNonimageOnly {
                    return Err(Error::Internal(format!("refined layer {} is not non-image only", lhat + 1)));
                }
                // the two layers split the orbits over one point set
                let at_points = self.orbits.iter().filter(|o| layer.points.contains(&o.point)).count();
                if layer.orbits.len() + extra.orbits.len() != at_points {
                    return Err(Error::Internal(format!("layers {lhat} and {} do not split image layer {i}", lhat + 1)));
                }
            }
        }
        Ok(())
    }
}

pub fn build_refined_filtration(sigma: &Support, bound: usize) -> Result<FiltrationReport> {
    build_split_partition(sigma, bound)?.refined_filtration()
}

/// Inner quotient `i` against refined split quotient `Ĺ_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub inner: FiltrationReport,
    pub refined: FiltrationReport,
    /// `(i, Ĺ_i)`, strictly increasing in both coordinates.
    pub quotient_map: Vec<(usize, usize)>,
    /// Refined layers outside the image of the transfer.
    pub unmatched: Vec<usize>,
    /// Per entry of `quotient_map`: inner orbit paired with its transfer.
    pub orbit_bijections: Vec<Vec<(Triple, Triple)>>,
}

pub fn correspondence_report(p: &Support, bound: usize) -> Result<CorrespondenceReport> {
    if p.side() != Side::Inner {
        return Err(Error::WrongSide { expected: "inner" });
    }
    let sigma = transfer_support(p)?.sigma;
    let partition = build_split_partition(&sigma, bound)?;
    let refined = partition.refined_filtration()?;
    let inner = partition.inner_filtration;
    let table = sigma.table();
    let lhat = &partition.indices.lhat_indices;

    let mut quotient_map = Vec::with_capacity(inner.layers.len());
    let mut orbit_bijections = Vec::with_capacity(inner.layers.len());
    for (i, layer) in inner.layers.iter().enumerate() {
        let target = &refined.layers[lhat[i]];
        let pairs = layer
            .orbits
            .iter()
            .map(|o| Ok((o.canonical.clone(), transfer_triple(&o.canonical, table)?)))
            .collect::<Result<Vec<_>>>()?;
        let images: BTreeSet<&Triple> = pairs.iter().map(|(_, t)| t).collect();
        let expected: BTreeSet<&Triple> = target.orbits.iter().map(|o| &o.canonical).collect();
        if images.len() != pairs.len() || images != expected {
            return Err(Error::Internal(format!(
                "transfer of inner layer {i} does not match refined layer {}",
                lhat[i]
            )));
        }
        quotient_map.push((i, lhat[i]));
        orbit_bijections.push(pairs);
    }
    let matched: BTreeSet<usize> = lhat.iter().copied().collect();
    let unmatched: Vec<usize> = (0..refined.layers.len()).filter(|k| !matched.contains(k)).collect();
    for &k in &unmatched {
        if refined.layers[k].orbits.iter().any(|o| o.in_image) {
            return Err(Error::Internal(format!("unmatched layer {k} carries an image orbit")));
        }
    }
    Ok(CorrespondenceReport { inner, refined, quotient_map, unmatched, orbit_bijections })
}
