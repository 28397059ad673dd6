use std::fmt;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

/// Where a reported value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Evaluated from a closed form or exact count.
    Computed,
    /// A numerical estimate (Monte Carlo, regression).
    Estimated,
    /// Quoted from the literature; not computed here.
    Cited,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Computed => "computed",
            Provenance::Estimated => "estimated",
            Provenance::Cited => "cited",
        })
    }
}

/// A dimension value: exact when a closed form exists, always with a float.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub kind: String,
    #[serde(with = "crate::serde_rational::option")]
    pub exact: Option<BigRational>,
    pub numeric: f64,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl DimensionReport {
    pub fn exact(kind: impl Into<String>, value: BigRational, provenance: Provenance) -> Self {
        let numeric = value.to_f64().unwrap_or(f64::NAN);
        DimensionReport { kind: kind.into(), exact: Some(value), numeric, provenance, note: None }
    }

    pub fn numeric(kind: impl Into<String>, value: f64, provenance: Provenance) -> Self {
        DimensionReport { kind: kind.into(), exact: None, numeric: value, provenance, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}
