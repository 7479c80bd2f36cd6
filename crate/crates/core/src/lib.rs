//! Exact combinatorics of the Franke filtration for inner forms of `GL(n)`
//! and its Jacquet-Langlands transfer to the split group `GL(nd)`.
//!
//! Everything here works on symbolic data: cuspidal labels, exponent
//! supports, segments, triples and exponent points. All arithmetic is exact.
//!
//! The crate is `no_std` (with `alloc`); file formats and the command line
//! live in the companion `jlfiltration` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod filtration;
pub mod oracle;
pub mod poset;
pub mod rational;
pub mod segments;
pub mod support;
pub mod transfer;
pub mod triples;

pub use error::{Error, Result};
pub use filtration::{
    build_inner_filtration, build_refined_filtration, build_split_partition,
    correspondence_report, CorrespondenceReport, FiltrationLayer, FiltrationReport, LayerKind,
    SplitIndices, SplitPartition,
};
pub use poset::{compare_points, Comparison, ExponentPoint, Layering};
pub use rational::{parse_rational, Rational};
pub use segments::{Segment, DEFAULT_ENUMERATION_BOUND};
pub use support::{
    CuspidalLabel, ExponentMultiset, Factor, LabelId, LabelTable, RawFactor, RawLabel,
    RawProblem, Side, Support,
};
pub use transfer::{SupportTransfer, transfer_support, invert_support, transfer_triple, triple_in_image};
pub use triples::{Triple, TripleOrbit};
