//! Sparse bigraded charts of abelian groups.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::extnat::ExtNat;
use super::group::{AbGroupDesc, Coefficients};
use super::weight::WeightFunction;
use crate::error::{CoreError, Result};

/// A bidegree `(i, j)`, ordered by `j` first and then `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bidegree {
    pub i: i64,
    pub j: i64,
}

impl Bidegree {
    pub fn new(i: i64, j: i64) -> Self {
        Bidegree { i, j }
    }
}

impl Ord for Bidegree {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.j, self.i).cmp(&(other.j, other.i))
    }
}

impl PartialOrd for Bidegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Chow degree `i - 2j` of a bidegree.
pub fn chow_degree(i: i64, j: i64) -> i64 {
    i - 2 * j
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruncationMode {
    Ge,
    Lt,
    Eq,
}

impl std::str::FromStr for TruncationMode {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ge" => Ok(TruncationMode::Ge),
            "lt" => Ok(TruncationMode::Lt),
            "eq" => Ok(TruncationMode::Eq),
            other => Err(CoreError::UnknownName(other.into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineOp {
    DirectSum,
    Shift(i64, i64),
}

/// Map from bidegrees to groups. Zero groups are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BigradedChart {
    pub label: String,
    pub prime: Option<u64>,
    entries: BTreeMap<Bidegree, AbGroupDesc>,
}

impl BigradedChart {
    pub fn new(label: impl Into<String>, prime: Option<u64>) -> Self {
        BigradedChart { label: label.into(), prime, entries: BTreeMap::new() }
    }

    /// The chart with a single ℤ at the origin.
    pub fn unit() -> Self {
        let mut c = Self::new("unit", None);
        c.set(0, 0, AbGroupDesc::free(1));
        c
    }

    /// Stores `g` at `(i, j)`, replacing what was there; zero removes the entry.
    pub fn set(&mut self, i: i64, j: i64, g: AbGroupDesc) {
        let key = Bidegree::new(i, j);
        if g.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, g);
        }
    }

    /// Adds `g` to the group at `(i, j)`.
    pub fn accumulate(&mut self, i: i64, j: i64, g: &AbGroupDesc) -> Result<()> {
        let cur = self.get(i, j);
        let sum = cur.direct_sum(g)?;
        self.set(i, j, sum);
        Ok(())
    }

    pub fn get(&self, i: i64, j: i64) -> AbGroupDesc {
        self.entries.get(&Bidegree::new(i, j)).cloned().unwrap_or_default()
    }

    pub fn entry(&self, i: i64, j: i64) -> Option<&AbGroupDesc> {
        self.entries.get(&Bidegree::new(i, j))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Bidegree, &AbGroupDesc)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Smallest box containing every entry, as ((i_min, i_max), (j_min, j_max)).
    pub fn bounding_box(&self) -> Option<((i64, i64), (i64, i64))> {
        let mut it = self.entries.keys();
        let first = it.next()?;
        let mut b = ((first.i, first.i), (first.j, first.j));
        for k in it {
            b.0 .0 = b.0 .0.min(k.i);
            b.0 .1 = b.0 .1.max(k.i);
            b.1 .0 = b.1 .0.min(k.j);
            b.1 .1 = b.1 .1.max(k.j);
        }
        Some(b)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn shift(&self, di: i64, dj: i64) -> BigradedChart {
        BigradedChart {
            label: self.label.clone(),
            prime: self.prime,
            entries: self.entries.iter().map(|(k, v)| (Bidegree::new(k.i + di, k.j + dj), v.clone())).collect(),
        }
    }

    pub fn direct_sum(&self, other: &BigradedChart) -> Result<BigradedChart> {
        let prime = match (self.prime, other.prime) {
            (Some(p), Some(q)) if p != q => return Err(CoreError::PrimeMismatch(p, q)),
            (p, q) => p.or(q),
        };
        let mut out = BigradedChart { label: self.label.clone(), prime, entries: self.entries.clone() };
        for (k, v) in &other.entries {
            out.accumulate(k.i, k.j, v)?;
        }
        Ok(out)
    }

    pub fn combine(&self, other: Option<&BigradedChart>, op: CombineOp) -> Result<BigradedChart> {
        match op {
            CombineOp::Shift(di, dj) => Ok(self.shift(di, dj)),
            CombineOp::DirectSum => {
                let other = other.ok_or_else(|| CoreError::Precondition("direct sum needs two charts".into()))?;
                self.direct_sum(other)
            }
        }
    }

    /// Keeps `(i, j)` iff `i - f(j)` compares with `threshold` as `mode` asks.
    pub fn truncate(&self, f: &dyn WeightFunction, threshold: i64, mode: TruncationMode) -> Result<BigradedChart> {
        let mut out = BigradedChart::new(self.label.clone(), self.prime);
        for (k, v) in &self.entries {
            let x = k.i - f.eval(k.j)?;
            let keep = match mode {
                TruncationMode::Ge => x >= threshold,
                TruncationMode::Lt => x < threshold,
                TruncationMode::Eq => x == threshold,
            };
            if keep {
                out.entries.insert(*k, v.clone());
            }
        }
        Ok(out)
    }

    /// Degreewise naive p-completion.
    pub fn complete(&self, p: u64) -> Result<BigradedChart> {
        let mut out = BigradedChart::new(self.label.clone(), Some(p));
        for (k, v) in &self.entries {
            out.set(k.i, k.j, v.complete(p)?);
        }
        Ok(out)
    }

    /// Applies `f` to the coordinates of every entry (collisions are summed).
    pub fn reindex(&self, f: impl Fn(i64, i64) -> (i64, i64)) -> Result<BigradedChart> {
        let mut out = BigradedChart::new(self.label.clone(), self.prime);
        for (k, v) in &self.entries {
            let (i, j) = f(k.i, k.j);
            out.accumulate(i, j, v)?;
        }
        Ok(out)
    }

    /// Entries agree as abstract groups, ignoring precision annotations.
    pub fn same_groups(&self, other: &BigradedChart) -> bool {
        self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .all(|(k, v)| other.entries.get(k).map(|w| v.same_group(w)).unwrap_or(false))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("chart serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| CoreError::Parse(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    i: i64,
    j: i64,
    free_rank: ExtNat,
    torsion: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    torsion_infinite: Vec<u64>,
    #[serde(default, skip_serializing_if = "is_integral")]
    coefficients: Coefficients,
    #[serde(default, skip_serializing_if = "ExtNat::is_zero_ref")]
    divisible_rank: ExtNat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unlisted_torsion_outside: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modulus_precision: Option<u32>,
}

fn is_integral(c: &Coefficients) -> bool {
    *c == Coefficients::Integral
}

impl ExtNat {
    fn is_zero_ref(&self) -> bool {
        self.is_zero()
    }
}

#[derive(Serialize, Deserialize)]
struct ChartJson {
    label: String,
    prime: Option<u64>,
    entries: Vec<EntryJson>,
}

impl Serialize for BigradedChart {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self
            .entries
            .iter()
            .map(|(k, g)| EntryJson {
                i: k.i,
                j: k.j,
                free_rank: g.free_rank,
                torsion: g.torsion_list(),
                torsion_infinite: g
                    .torsion
                    .iter()
                    .filter(|(_, m)| !m.is_finite())
                    .map(|(&o, _)| o)
                    .collect(),
                coefficients: g.coefficients,
                divisible_rank: g.divisible_rank,
                unlisted_torsion_outside: g.unlisted_torsion_outside.clone(),
                modulus_precision: g.modulus_precision,
            })
            .collect();
        ChartJson { label: self.label.clone(), prime: self.prime, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BigradedChart {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = ChartJson::deserialize(d)?;
        let mut chart = BigradedChart::new(raw.label, raw.prime);
        for e in raw.entries {
            let mut g = AbGroupDesc {
                free_rank: e.free_rank,
                coefficients: e.coefficients,
                divisible_rank: e.divisible_rank,
                unlisted_torsion_outside: e.unlisted_torsion_outside,
                modulus_precision: e.modulus_precision,
                ..AbGroupDesc::default()
            };
            for o in e.torsion {
                if crate::arith::prime_power(o).is_none() {
                    return Err(D::Error::custom(format!("torsion order {o} is not a prime power")));
                }
                g.add_torsion(o, ExtNat::ONE);
            }
            for o in e.torsion_infinite {
                if crate::arith::prime_power(o).is_none() {
                    return Err(D::Error::custom(format!("torsion order {o} is not a prime power")));
                }
                g.add_torsion(o, ExtNat::Infinite);
            }
            chart.set(e.i, e.j, g);
        }
        Ok(chart)
    }
}
