//! Serializable report documents and their text rendering.
//!
//! Every command builds one [`Document`]; `--format json` prints it with
//! serde, `--format text` walks the same fields. Rationals are strings.

use std::fmt::Write as _;

use jlfiltration_core::filtration::{CorrespondenceReport, FiltrationLayer, FiltrationReport};
use jlfiltration_core::poset::ExponentPoint;
use jlfiltration_core::segments::Segment;
use jlfiltration_core::support::{LabelTable, Support};
use jlfiltration_core::triples::{Triple, TripleOrbit};
use serde::{Deserialize, Serialize};

use crate::verify::VerifyReport;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRecord {
    pub label: String,
    pub exponent: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockRecord {
    pub label: String,
    pub length: u32,
    pub center: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub blocks: Vec<BlockRecord>,
    pub block_sizes: Vec<u32>,
    pub automorphisms: u64,
    pub in_image: bool,
    pub point: Vec<String>,
    pub symmetric_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerRecord {
    pub index: usize,
    pub kind: String,
    pub points: Vec<Vec<String>>,
    pub orbits: Vec<Vec<BlockRecord>>,
    /// Aligned with `orbits`.
    pub in_image: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitPair {
    pub inner: Vec<BlockRecord>,
    pub split: Vec<BlockRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionRecord {
    pub inner_layer: usize,
    pub split_layer: usize,
    pub pairs: Vec<OrbitPair>,
}

/// The union of everything any command reports; absent fields are omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_d: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<FactorRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_rank: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner_support: Option<Vec<FactorRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<FactorRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_normalized: Option<Vec<FactorRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_partition: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triples: Option<Vec<OrbitRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner_layers: Option<Vec<LayerRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<Vec<LayerRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell_prime: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell_list: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<u8>>,
    #[serde(default, rename = "L_indices", skip_serializing_if = "Option::is_none")]
    pub l_indices: Option<Vec<usize>>,
    #[serde(default, rename = "Lhat_indices", skip_serializing_if = "Option::is_none")]
    pub lhat_indices: Option<Vec<usize>>,
    /// `L`, the last index of the naive split filtration.
    #[serde(default, rename = "L", skip_serializing_if = "Option::is_none")]
    pub l_last: Option<usize>,
    /// `Ĺ`, the last index of the refined split filtration.
    #[serde(default, rename = "Lhat", skip_serializing_if = "Option::is_none")]
    pub lhat_last: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient_map: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unmatched: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_bijections: Option<Vec<BijectionRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyReport>,
}

pub fn factors(s: &Support) -> Vec<FactorRecord> {
    s.factors()
        .iter()
        .map(|f| FactorRecord { label: s.table().name(f.label).into(), exponent: f.exponent.to_string() })
        .collect()
}

pub fn point(p: &ExponentPoint) -> Vec<String> {
    p.coords().iter().map(ToString::to_string).collect()
}

fn block(table: &LabelTable, s: &Segment) -> BlockRecord {
    BlockRecord { label: table.name(s.label).into(), length: s.length, center: s.center.to_string() }
}

pub fn blocks(table: &LabelTable, t: &Triple) -> Vec<BlockRecord> {
    t.blocks().iter().map(|b| block(table, b)).collect()
}

pub fn orbit(table: &LabelTable, o: &TripleOrbit) -> OrbitRecord {
    OrbitRecord {
        blocks: blocks(table, &o.canonical),
        block_sizes: o.canonical.block_sizes(table),
        automorphisms: o.automorphisms,
        in_image: o.in_image,
        point: point(&o.point),
        symmetric_rank: o.canonical.symmetric_algebra_rank(),
    }
}

fn layer(table: &LabelTable, l: &FiltrationLayer) -> LayerRecord {
    LayerRecord {
        index: l.index,
        kind: l.kind.as_str().into(),
        points: l.points.iter().map(point).collect(),
        orbits: l.orbits.iter().map(|o| blocks(table, &o.canonical)).collect(),
        in_image: l.orbits.iter().map(|o| o.in_image).collect(),
    }
}

pub fn layers(table: &LabelTable, r: &FiltrationReport) -> Vec<LayerRecord> {
    r.layers.iter().map(|l| layer(table, l)).collect()
}

impl Document {
    pub fn new(command: &str) -> Self {
        Document { command: command.into(), ..Document::default() }
    }

    /// Fills the layer list and, for split reports, the index bookkeeping.
    pub fn with_filtration(mut self, table: &LabelTable, r: &FiltrationReport) -> Self {
        self.side = Some(r.side.as_str().into());
        self.layers = Some(layers(table, r));
        self.ell_prime = Some(r.ell_prime);
        if let Some(idx) = &r.indices {
            self.ell_list = Some(idx.ell_list.clone());
            self.epsilons = Some(idx.epsilons.clone());
            self.l_indices = Some(idx.l_indices.clone());
            self.lhat_indices = Some(idx.lhat_indices.clone());
            self.l_last = Some(idx.total_length - 1);
            self.lhat_last = Some(idx.refined_length - 1);
        }
        self
    }

    pub fn with_correspondence(self, table: &LabelTable, c: &CorrespondenceReport) -> Self {
        let mut doc = self.with_filtration(table, &c.refined);
        doc.inner_layers = Some(layers(table, &c.inner));
        doc.quotient_map = Some(c.quotient_map.iter().map(|&(i, k)| [i, k]).collect());
        doc.unmatched = Some(c.unmatched.clone());
        doc.orbit_bijections = Some(
            c.quotient_map
                .iter()
                .zip(&c.orbit_bijections)
                .map(|(&(i, k), pairs)| BijectionRecord {
                    inner_layer: i,
                    split_layer: k,
                    pairs: pairs
                        .iter()
                        .map(|(a, b)| OrbitPair { inner: blocks(table, a), split: blocks(table, b) })
                        .collect(),
                })
                .collect(),
        );
        doc
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "command: {}", self.command);
        if let Some(d) = self.degree_d {
            let _ = writeln!(w, "degree d: {d}");
        }
        if let Some(side) = &self.side {
            let _ = writeln!(w, "side: {side}");
        }
        if let Some(f) = &self.support {
            let _ = writeln!(w, "support: {}", tensor(f));
        }
        if let Some(n) = self.ambient_rank {
            let _ = writeln!(w, "ambient rank: {n}");
        }
        if let Some(f) = &self.inner_support {
            let _ = writeln!(w, "inner support: {}", tensor(f));
        }
        if let Some(f) = &self.sigma {
            let _ = writeln!(w, "sigma: {}", tensor(f));
        }
        if let Some(f) = &self.sigma_normalized {
            let _ = writeln!(w, "sigma (normalized): {}", tensor(f));
        }
        if let Some(q) = &self.q_partition {
            let _ = writeln!(w, "Q = ({})", join(q));
        }
        if let Some(ts) = &self.triples {
            let _ = writeln!(w, "triples: {}", ts.len());
            for (i, t) in ts.iter().enumerate() {
                let _ = writeln!(
                    w,
                    "  [{i}] {}  sizes ({})  at ({})  aut {}  {}",
                    block_list(&t.blocks),
                    join(&t.block_sizes),
                    t.point.join(","),
                    t.automorphisms,
                    if t.in_image { "image" } else { "not-image" }
                );
            }
        }
        if let Some(ls) = &self.inner_layers {
            let _ = writeln!(w, "inner layers: {}", ls.len());
            write_layers(w, ls);
        }
        if let Some(ls) = &self.layers {
            let _ = writeln!(w, "layers: {}", ls.len());
            write_layers(w, ls);
        }
        if let Some(l) = self.ell_prime {
            let _ = writeln!(w, "ell': {l}");
        }
        if let Some(v) = &self.ell_list {
            let _ = writeln!(w, "ell_i: ({})", join(v));
        }
        if let Some(v) = &self.epsilons {
            let _ = writeln!(w, "epsilon_i: ({})", join(v));
        }
        if let Some(v) = &self.l_indices {
            let _ = writeln!(w, "L_i: ({})  L = {}", join(v), self.l_last.unwrap_or_default());
        }
        if let Some(v) = &self.lhat_indices {
            let _ = writeln!(w, "Lhat_i: ({})  Lhat = {}", join(v), self.lhat_last.unwrap_or_default());
        }
        if let Some(m) = &self.quotient_map {
            let pairs: Vec<String> = m.iter().map(|[i, k]| format!("{i} -> {k}")).collect();
            let _ = writeln!(w, "quotient map: {}", pairs.join(", "));
        }
        if let Some(u) = &self.unmatched {
            let _ = writeln!(w, "not in image: {{{}}}", join(u));
        }
        if let Some(bs) = &self.orbit_bijections {
            for b in bs {
                for p in &b.pairs {
                    let _ = writeln!(
                        w,
                        "  {} -> {}: {}  |->  {}",
                        b.inner_layer,
                        b.split_layer,
                        block_list(&p.inner),
                        block_list(&p.split)
                    );
                }
            }
        }
        if let Some(v) = &self.verify {
            v.write_text(w);
        }
        out
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn tensor(f: &[FactorRecord]) -> String {
    f.iter().map(|f| format!("{}@{}", f.label, f.exponent)).collect::<Vec<_>>().join(" x ")
}

fn block_list(b: &[BlockRecord]) -> String {
    let parts: Vec<String> = b
        .iter()
        .map(|b| if b.length == 1 { format!("{}@{}", b.label, b.center) } else { format!("{}[{}]@{}", b.label, b.length, b.center) })
        .collect();
    format!("({})", parts.join(", "))
}

fn write_layers(w: &mut String, ls: &[LayerRecord]) {
    for l in ls {
        let pts: Vec<String> = l.points.iter().map(|p| format!("({})", p.join(","))).collect();
        let _ = writeln!(w, "  layer {} [{}] points {}", l.index, l.kind, pts.join(" "));
        for (o, img) in l.orbits.iter().zip(&l.in_image) {
            let _ = writeln!(w, "    {}{}", block_list(o), if *img { "" } else { "  (not in image)" });
        }
    }
}
