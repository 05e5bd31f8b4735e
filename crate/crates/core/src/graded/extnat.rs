//! Natural numbers extended by a countably-infinite marker.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A cardinal that is either finite or countably infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtNat {
    Finite(u64),
    Infinite,
}

impl ExtNat {
    pub const ZERO: ExtNat = ExtNat::Finite(0);
    pub const ONE: ExtNat = ExtNat::Finite(1);

    pub fn is_zero(self) -> bool {
        self == ExtNat::ZERO
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Finite(n) => Some(n),
            ExtNat::Infinite => None,
        }
    }

    /// Truncated subtraction; `None` when the result would be negative or
    /// when an infinite amount is removed.
    pub fn checked_sub(self, other: ExtNat) -> Option<ExtNat> {
        match (self, other) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => a.checked_sub(b).map(ExtNat::Finite),
            (ExtNat::Infinite, ExtNat::Finite(_)) => Some(ExtNat::Infinite),
            (_, ExtNat::Infinite) => None,
        }
    }
}

impl Default for ExtNat {
    fn default() -> Self {
        ExtNat::ZERO
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        ExtNat::Finite(n)
    }
}

impl Add for ExtNat {
    type Output = ExtNat;
    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a + b),
            _ => ExtNat::Infinite,
        }
    }
}

impl Mul for ExtNat {
    type Output = ExtNat;
    fn mul(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a * b),
            (ExtNat::Finite(0), _) | (_, ExtNat::Finite(0)) => ExtNat::ZERO,
            _ => ExtNat::Infinite,
        }
    }
}

impl std::iter::Sum for ExtNat {
    fn sum<I: Iterator<Item = ExtNat>>(iter: I) -> ExtNat {
        iter.fold(ExtNat::ZERO, |a, b| a + b)
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => a.cmp(b),
            (ExtNat::Finite(_), ExtNat::Infinite) => Ordering::Less,
            (ExtNat::Infinite, ExtNat::Finite(_)) => Ordering::Greater,
            (ExtNat::Infinite, ExtNat::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(n) => write!(f, "{n}"),
            ExtNat::Infinite => write!(f, "inf"),
        }
    }
}

// Serialized as a plain integer, or the string "inf".
impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtNat::Finite(n) => s.serialize_u64(*n),
            ExtNat::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = ExtNat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a non-negative integer or \"inf\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtNat, E> {
                Ok(ExtNat::Finite(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtNat, E> {
                u64::try_from(v).map(ExtNat::Finite).map_err(|_| E::custom("negative cardinal"))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtNat, E> {
                match v {
                    "inf" | "infinite" => Ok(ExtNat::Infinite),
                    _ => Err(E::custom(format!("bad cardinal `{v}`"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinal_arithmetic() {
        assert_eq!(ExtNat::Infinite + ExtNat::Finite(3), ExtNat::Infinite);
        assert_eq!(ExtNat::Infinite * ExtNat::ZERO, ExtNat::ZERO);
        assert_eq!(ExtNat::Finite(2) * ExtNat::Finite(3), ExtNat::Finite(6));
        assert!(ExtNat::Finite(10) < ExtNat::Infinite);
        assert_eq!(ExtNat::Infinite.checked_sub(ExtNat::Finite(4)), Some(ExtNat::Infinite));
        assert_eq!(ExtNat::Finite(1).checked_sub(ExtNat::Finite(4)), None);
    }

    #[test]
    fn json_roundtrip() {
        let v = vec![ExtNat::Finite(7), ExtNat::Infinite];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[7,\"inf\"]");
        let back: Vec<ExtNat> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
