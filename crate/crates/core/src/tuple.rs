use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A finite sequence of unbounded integers, the `x_m..x_n` windows.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntTuple(Vec<BigInt>);

impl IntTuple {
    pub fn new(elements: Vec<BigInt>) -> Self {
        IntTuple(elements)
    }

    pub fn empty() -> Self {
        IntTuple(Vec::new())
    }

    pub fn as_slice(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<BigInt> {
        self.0
    }

    /// `(x_n, .., x_m)`.
    pub fn reversed(&self) -> Self {
        IntTuple(self.0.iter().rev().cloned().collect())
    }

    pub fn push(&mut self, x: BigInt) {
        self.0.push(x);
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &[BigInt]) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        IntTuple(v)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(ToString::to_string).collect()
    }
}

impl Deref for IntTuple {
    type Target = [BigInt];

    fn deref(&self) -> &[BigInt] {
        &self.0
    }
}

impl From<Vec<BigInt>> for IntTuple {
    fn from(v: Vec<BigInt>) -> Self {
        IntTuple(v)
    }
}

impl From<&[BigInt]> for IntTuple {
    fn from(v: &[BigInt]) -> Self {
        IntTuple(v.to_vec())
    }
}

impl From<&[i64]> for IntTuple {
    fn from(v: &[i64]) -> Self {
        IntTuple(v.iter().map(|&x| BigInt::from(x)).collect())
    }
}

impl<const N: usize> From<[i64; N]> for IntTuple {
    fn from(v: [i64; N]) -> Self {
        IntTuple(v.iter().map(|&x| BigInt::from(x)).collect())
    }
}

impl FromIterator<BigInt> for IntTuple {
    fn from_iter<I: IntoIterator<Item = BigInt>>(iter: I) -> Self {
        IntTuple(iter.into_iter().collect())
    }
}

impl fmt::Display for IntTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Accepts `"0,2,8"`, `"(0,2,8)"`, whitespace-separated values, or `"()"`.
impl FromStr for IntTuple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|part| !part.is_empty())
            .map(|part| {
                part.parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("bad integer {part:?}: {e}")))
            })
            .collect()
    }
}

impl Serialize for IntTuple {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntTuple {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let parts = Vec::<String>::deserialize(deserializer)?;
        parts
            .iter()
            .map(|p| p.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect()
    }
}
