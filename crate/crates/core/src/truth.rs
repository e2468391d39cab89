//! The five-valued robustness lattice.
//!
//! Each value is a quadruple of bits read left to right as "always",
//! "eventually always", "always eventually" and "eventually". Only the five
//! quadruples `1111 ≻ 0111 ≻ 0011 ≻ 0001 ≻ 0000` are truth values; the total
//! order coincides with reading the quadruple as a binary number.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A truth value. Variants are declared in ascending order so the derived
/// `Ord` is the lattice order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TruthValue {
    /// `0000`: the invariant never holds.
    Never,
    /// `0001`: holds at least once.
    Once,
    /// `0011`: holds infinitely often.
    InfinitelyOften,
    /// `0111`: holds at all but finitely many positions.
    AlmostAlways,
    /// `1111`: holds everywhere.
    Always,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TruthValueError {
    #[error("bit index {0} out of range 1..=4")]
    BitIndex(usize),
    #[error("`{0}` is not a truth value (expected one of 1111, 0111, 0011, 0001, 0000)")]
    Invalid(String),
}

impl TruthValue {
    pub const TOP: TruthValue = TruthValue::Always;
    pub const BOTTOM: TruthValue = TruthValue::Never;

    /// All values in ascending order.
    pub const ALL: [TruthValue; 5] = [
        TruthValue::Never,
        TruthValue::Once,
        TruthValue::InfinitelyOften,
        TruthValue::AlmostAlways,
        TruthValue::Always,
    ];

    /// The four non-trivial thresholds in ascending order.
    pub const NONTRIVIAL: [TruthValue; 4] = [
        TruthValue::Once,
        TruthValue::InfinitelyOften,
        TruthValue::AlmostAlways,
        TruthValue::Always,
    ];

    /// Position in ascending order, `0` for `0000` up to `4` for `1111`.
    pub fn rank(self) -> usize {
        self as usize
    }

    pub fn from_rank(rank: usize) -> Option<TruthValue> {
        Self::ALL.get(rank).copied()
    }

    pub fn from_bool(b: bool) -> TruthValue {
        if b {
            TruthValue::Always
        } else {
            TruthValue::Never
        }
    }

    /// The bit quadruple `(b1, b2, b3, b4)`.
    pub fn bits(self) -> [bool; 4] {
        // b_k is set iff rank >= 5 - k
        let r = self.rank();
        [r >= 4, r >= 3, r >= 2, r >= 1]
    }

    /// The `k`-th bit, `k` in `1..=4`.
    pub fn bit(self, k: usize) -> Result<bool, TruthValueError> {
        match k {
            1..=4 => Ok(self.bits()[k - 1]),
            _ => Err(TruthValueError::BitIndex(k)),
        }
    }

    /// Builds a value from a bit quadruple, rejecting the eleven quadruples
    /// that are not of the form `0..01..1`.
    pub fn from_bits(bits: [bool; 4]) -> Option<TruthValue> {
        Self::ALL.into_iter().find(|v| v.bits() == bits)
    }

    pub fn join(self, other: TruthValue) -> TruthValue {
        self.max(other)
    }

    pub fn meet(self, other: TruthValue) -> TruthValue {
        self.min(other)
    }

    /// Every value below `1111` is a shade of false and negates to `1111`.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> TruthValue {
        if self == TruthValue::Always {
            TruthValue::Never
        } else {
            TruthValue::Always
        }
    }

    /// Residuated implication: the greatest `c` with `meet(self, c) ≼ other`.
    pub fn implies(self, other: TruthValue) -> TruthValue {
        if self <= other {
            TruthValue::Always
        } else {
            other
        }
    }

    pub fn is_true(self) -> bool {
        self == TruthValue::Always
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TruthValue::Never => "0000",
            TruthValue::Once => "0001",
            TruthValue::InfinitelyOften => "0011",
            TruthValue::AlmostAlways => "0111",
            TruthValue::Always => "1111",
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TruthValue {
    type Err = TruthValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let chars: Vec<char> = t.chars().collect();
        if chars.len() != 4 || chars.iter().any(|c| *c != '0' && *c != '1') {
            return Err(TruthValueError::Invalid(t.to_string()));
        }
        let bits = [chars[0] == '1', chars[1] == '1', chars[2] == '1', chars[3] == '1'];
        TruthValue::from_bits(bits).ok_or_else(|| TruthValueError::Invalid(t.to_string()))
    }
}

impl Serialize for TruthValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for TruthValue {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
