use alloc::string::String;

use crate::rational::Rational;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Every failure the core library can report.
///
/// Messages name the violated invariant and carry the witness.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("malformed rational {text:?}: {reason}")]
    MalformedRational { text: String, reason: &'static str },

    #[error("unknown label reference {0:?}")]
    UnknownLabel(String),

    #[error("duplicate label name {0:?}")]
    DuplicateLabel(String),

    #[error("invalid label name {0:?}")]
    InvalidLabelName(String),

    #[error("non-positive size: {field} of {label:?} is {value}")]
    NonPositiveSize { label: String, field: &'static str, value: i64 },

    #[error("non-positive degree d = {0}")]
    NonPositiveDegree(i64),

    #[error("k does not divide d: label {label:?} has k = {k}, d = {degree}")]
    KDoesNotDivideDegree { label: String, k: u32, degree: u32 },

    #[error("split size not integral: label {label:?} has m'd/k = {inner_size}*{degree}/{k}")]
    SplitSizeNotIntegral { label: String, inner_size: u32, k: u32, degree: u32 },

    #[error("center condition violated: weighted exponent sum is {sum}, expected 0")]
    CenterConditionViolated { sum: Rational },

    #[error("empty support")]
    EmptySupport,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("points have different coordinate totals ({left} vs {right})")]
    UnequalTotals { left: Rational, right: Rational },

    #[error("empty input set")]
    EmptyInput,

    #[error("candidate is not a partition: {0}")]
    NotAPartition(&'static str),

    #[error("enumeration bound exceeded: {size} factors, bound {bound}")]
    BoundExceeded { size: usize, bound: usize },

    #[error("expected a support on the {expected} side")]
    WrongSide { expected: &'static str },

    #[error("not in image of the transfer: exponents of label {label:?} do not split into segments of length {k}; missing exponent {missing}")]
    NotInImage { label: String, k: u32, missing: Rational },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedRational { .. } => "malformed_rational",
            Error::UnknownLabel(_) => "unknown_label",
            Error::DuplicateLabel(_) => "duplicate_label",
            Error::InvalidLabelName(_) => "invalid_label_name",
            Error::NonPositiveSize { .. } => "non_positive_size",
            Error::NonPositiveDegree(_) => "non_positive_degree",
            Error::KDoesNotDivideDegree { .. } => "k_does_not_divide_degree",
            Error::SplitSizeNotIntegral { .. } => "split_size_not_integral",
            Error::CenterConditionViolated { .. } => "center_condition_violated",
            Error::EmptySupport => "empty_support",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::UnequalTotals { .. } => "unequal_totals",
            Error::EmptyInput => "empty_input",
            Error::NotAPartition(_) => "not_a_partition",
            Error::BoundExceeded { .. } => "bound_exceeded",
            Error::WrongSide { .. } => "wrong_side",
            Error::NotInImage { .. } => "not_in_image",
            Error::Internal(_) => "internal",
        }
    }
}
