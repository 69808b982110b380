//! Three-valued truth domain ordered `False < Undef < True`.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A Łukasiewicz truth value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TruthValue {
    False,
    Undef,
    True,
}

impl TruthValue {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TruthValue::True
        } else {
            TruthValue::False
        }
    }

    /// Order reversal: swaps `True` and `False`, fixes `Undef`.
    pub fn not(self) -> Self {
        match self {
            TruthValue::False => TruthValue::True,
            TruthValue::Undef => TruthValue::Undef,
            TruthValue::True => TruthValue::False,
        }
    }

    pub fn is_defined(self) -> bool {
        self != TruthValue::Undef
    }

    /// `Some(b)` for defined values.
    pub fn as_bool(self) -> Option<bool> {
        match self {
            TruthValue::False => Some(false),
            TruthValue::Undef => None,
            TruthValue::True => Some(true),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TruthValue::False => "false",
            TruthValue::Undef => "undef",
            TruthValue::True => "true",
        }
    }
}

/// Three-valued conjunction (minimum).
pub fn tv_and(a: TruthValue, b: TruthValue) -> TruthValue {
    a.min(b)
}

/// Three-valued disjunction (maximum).
pub fn tv_or(a: TruthValue, b: TruthValue) -> TruthValue {
    a.max(b)
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
