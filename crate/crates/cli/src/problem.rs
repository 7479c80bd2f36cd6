//! The JSON problem file.
//!
//! ```json
//! { "degree_d": 2,
//!   "cuspidals": [{ "name": "rho", "inner_size": 2, "k": 2 }],
//!   "support": [{ "cuspidal": "rho", "exponent": "0" }],
//!   "side": "inner" }
//! ```
//!
//! Exponents are strings (`"p/q"` or `"p"`) so that nothing ever passes
//! through floating point. `side` is optional and defaults to `inner`.

use jlfiltration_core::support::{parse_support, RawFactor, RawLabel, RawProblem, Side, Support};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub degree_d: i64,
    pub cuspidals: Vec<CuspidalEntry>,
    pub support: Vec<FactorEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<SideTag>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuspidalEntry {
    pub name: String,
    pub inner_size: i64,
    pub k: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorEntry {
    pub cuspidal: String,
    pub exponent: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideTag {
    Inner,
    Split,
}

impl From<SideTag> for Side {
    fn from(tag: SideTag) -> Side {
        match tag {
            SideTag::Inner => Side::Inner,
            SideTag::Split => Side::Split,
        }
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(CliError::Json)
    }

    pub fn to_raw(&self) -> RawProblem {
        RawProblem {
            degree: self.degree_d,
            labels: self
                .cuspidals
                .iter()
                .map(|c| RawLabel { name: c.name.clone(), inner_size: c.inner_size, k: c.k })
                .collect(),
            factors: self
                .support
                .iter()
                .map(|f| RawFactor { label: f.cuspidal.clone(), exponent: f.exponent.clone() })
                .collect(),
            side: self.side.map_or(Side::Inner, Side::from),
        }
    }

    /// Validated support in file order, not yet normalized.
    pub fn support(&self) -> Result<Support, CliError> {
        Ok(parse_support(&self.to_raw())?)
    }
}
