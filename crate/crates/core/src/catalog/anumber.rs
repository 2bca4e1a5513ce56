use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Catalog identifier: `A` followed by six digits, 1 ..= 999999.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ANumber(u32);

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid A-number {0:?}")]
pub struct ANumberError(pub String);

impl ANumber {
    pub const MAX: u32 = 999_999;

    pub fn new(index: u32) -> Option<ANumber> {
        (1..=Self::MAX).contains(&index).then_some(ANumber(index))
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for ANumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{:06}", self.0)
    }
}

impl FromStr for ANumber {
    type Err = ANumberError;

    /// Accepts short forms such as `A1003`; the output form is always padded.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ANumberError(s.to_string());
        let digits = s.strip_prefix('A').ok_or_else(err)?;
        if digits.is_empty() || digits.len() > 6 || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        digits.parse().ok().and_then(ANumber::new).ok_or_else(err)
    }
}

impl Serialize for ANumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ANumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
