//! Synthetic stems: Adams–Novikov E₂ reindexed, from the engine or a table.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::graded::{AbGroupDesc, BigradedChart, Coefficients, ExtNat};
use crate::hopf::{build_algebroid, ext_chart, AlgebroidKind, DEFAULT_PRECISION};
use crate::registry::Registry;

/// Largest stem through which the computed E₂ is taken as the answer.
pub fn degeneration_range(p: u64) -> Option<i64> {
    match p {
        2 => None,
        3 => Some(20),
        p if crate::arith::is_prime(p) => Some(2 * (p as i64) * (p as i64 - 1) - 3),
        _ => None,
    }
}

/// Largest filtration that can be nonzero in a stem: the normalized cobar
/// complex vanishes for `t < s (2p - 2)`.
pub fn filtration_bound(p: u64, stem: i64) -> i64 {
    stem / (2 * p as i64 - 3)
}

/// Group order of a table entry: `free` for ℤ_p, else a power of p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableOrder {
    Free,
    Cyclic(u64),
}

impl Serialize for TableOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TableOrder::Free => s.serialize_str("free"),
            TableOrder::Cyclic(n) => s.serialize_u64(*n),
        }
    }
}

impl<'de> Deserialize<'de> for TableOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) if s == "free" => Ok(TableOrder::Free),
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(TableOrder::Cyclic)
                .ok_or_else(|| serde::de::Error::custom("order must be a positive integer")),
            other => Err(serde::de::Error::custom(format!("bad order {other}"))),
        }
    }
}

impl TableOrder {
    fn group(self, p: u64) -> AbGroupDesc {
        match self {
            TableOrder::Free => AbGroupDesc::free_over(ExtNat::ONE, Coefficients::Complete(p)),
            TableOrder::Cyclic(n) => AbGroupDesc::cyclic(n),
        }
    }
}

/// Which part of the chart a table lists exhaustively.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coverage {
    All,
    /// Only the rows with `stem - weight` in the list.
    MilnorWittStems(Vec<i64>),
}

/// On-disk table: per stem, a list of `(weight, filtration, order)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticTable {
    pub prime: u64,
    pub stem_max: i64,
    pub coverage: Coverage,
    pub stems: BTreeMap<i64, Vec<(i64, u32, TableOrder)>>,
}

impl SyntheticTable {
    pub fn from_json(s: &str) -> Result<Self> {
        let t: SyntheticTable = serde_json::from_str(s).map_err(|e| CoreError::Parse(e.to_string()))?;
        t.validate()?;
        Ok(t)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| CoreError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&s)
    }

    pub fn builtin(p: u64) -> Option<Self> {
        let raw = match p {
            2 => include_str!("../../data/synthetic_p2.json"),
            3 => include_str!("../../data/synthetic_p3.json"),
            _ => return None,
        };
        Some(Self::from_json(raw).expect("bundled table is valid"))
    }

    pub fn validate(&self) -> Result<()> {
        if !crate::arith::is_prime(self.prime) {
            return Err(CoreError::Parse(format!("{} is not prime", self.prime)));
        }
        for (&n, entries) in &self.stems {
            if n < 0 || n > self.stem_max {
                return Err(CoreError::Parse(format!("stem {n} outside 0..={}", self.stem_max)));
            }
            for &(w, s, order) in entries {
                if 2 * w - n != s as i64 {
                    return Err(CoreError::Parse(format!("stem {n}, weight {w}: filtration must be {}", 2 * w - n)));
                }
                if s as i64 > filtration_bound(self.prime, n) && n > 0 {
                    return Err(CoreError::Parse(format!("stem {n}: filtration {s} above the vanishing line")));
                }
                if let TableOrder::Cyclic(o) = order {
                    if crate::arith::prime_power(o).map(|(q, _)| q) != Some(self.prime) {
                        return Err(CoreError::Parse(format!("order {o} is not a power of {}", self.prime)));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationNote {
    pub stem: i64,
    pub weight: i64,
    pub filtration: u32,
}

/// Synthetic stems indexed by `(stem, weight)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticChart {
    pub chart: BigradedChart,
    pub prime: u64,
    pub stem_max: i64,
    /// Stems through which the chart is taken to be E₂ = E∞.
    pub degeneration_range: i64,
    pub source: String,
    pub coverage: Coverage,
    pub filtrations: Vec<FiltrationNote>,
}

impl SyntheticChart {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("synthetic chart serializes")
    }

    pub fn filtration(&self, stem: i64, weight: i64) -> Option<u32> {
        self.filtrations.iter().find(|f| f.stem == stem && f.weight == weight).map(|f| f.filtration)
    }

    /// Whether the chart lists `(stem, weight)` authoritatively.
    pub fn covers(&self, stem: i64, weight: i64) -> bool {
        stem <= self.stem_max
            && match &self.coverage {
                Coverage::All => true,
                Coverage::MilnorWittStems(rows) => rows.contains(&(stem - weight)),
            }
    }
}

pub trait SyntheticSource: Send + Sync {
    fn name(&self) -> String;
    fn chart(&self, p: u64, stem_max: i64) -> Result<SyntheticChart>;
}

/// Ext over the p-typical algebroid, reindexed.
pub struct Computed;

impl SyntheticSource for Computed {
    fn name(&self) -> String {
        "computed".into()
    }

    fn chart(&self, p: u64, stem_max: i64) -> Result<SyntheticChart> {
        let range = degeneration_range(p).ok_or_else(|| {
            CoreError::Precondition(format!("no computed synthetic stems at p={p}; use a table"))
        })?;
        if stem_max > range {
            return Err(CoreError::Precondition(format!(
                "stem {stem_max} beyond the degeneration range {range} at p={p}"
            )));
        }
        let stem_max = stem_max.max(0);
        let s_max = filtration_bound(p, stem_max) as u32;
        let t_max = stem_max as u32 + s_max;
        let bound = t_max.div_ceil(2).max(1);
        let h = build_algebroid(AlgebroidKind::PTypical(p), bound)?;
        let ext = ext_chart(&h, p, DEFAULT_PRECISION, s_max, t_max)?;
        let mut chart = BigradedChart::new(format!("synthetic stems at p={p}"), Some(p));
        let mut filtrations = Vec::new();
        for (n, s, g) in ext.by_stem() {
            if n > stem_max {
                continue;
            }
            let w = (n + s) / 2;
            chart.set(n, w, g.complete(p)?);
            filtrations.push(FiltrationNote { stem: n, weight: w, filtration: s as u32 });
        }
        Ok(SyntheticChart {
            chart,
            prime: p,
            stem_max,
            degeneration_range: range,
            source: self.name(),
            coverage: Coverage::All,
            filtrations,
        })
    }
}

/// A fixed table, either bundled or loaded from a file.
pub struct Table {
    pub label: String,
    pub table: Option<SyntheticTable>,
}

impl SyntheticSource for Table {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn chart(&self, p: u64, stem_max: i64) -> Result<SyntheticChart> {
        let table = match &self.table {
            Some(t) => t.clone(),
            None => SyntheticTable::builtin(p)
                .ok_or_else(|| CoreError::Precondition(format!("no bundled synthetic table at p={p}")))?,
        };
        if table.prime != p {
            return Err(CoreError::PrimeMismatch(table.prime, p));
        }
        if stem_max > table.stem_max {
            return Err(CoreError::Precondition(format!("table only reaches stem {}", table.stem_max)));
        }
        let mut chart = BigradedChart::new(format!("synthetic stems at p={p}"), Some(p));
        let mut filtrations = Vec::new();
        for (&n, entries) in table.stems.range(..=stem_max) {
            for &(w, s, order) in entries {
                chart.accumulate(n, w, &order.group(p))?;
                filtrations.push(FiltrationNote { stem: n, weight: w, filtration: s });
            }
        }
        Ok(SyntheticChart {
            chart,
            prime: p,
            stem_max,
            degeneration_range: table.stem_max,
            source: self.name(),
            coverage: table.coverage,
            filtrations,
        })
    }
}

pub fn stem_sources() -> Registry<dyn SyntheticSource> {
    let mut r: Registry<dyn SyntheticSource> = Registry::new();
    r.register("computed", Arc::new(Computed));
    r.register("table", Arc::new(Table { label: "table".into(), table: None }));
    r
}

pub fn synthetic_stems(p: u64, stem_max: i64, source: &dyn SyntheticSource) -> Result<SyntheticChart> {
    source.chart(p, stem_max)
}

/// Entries with `stem - weight = row`, keyed by stem.
pub fn milnor_witt_row(chart: &BigradedChart, row: i64) -> BTreeMap<i64, AbGroupDesc> {
    chart.iter().filter(|(b, _)| b.i - b.j == row).map(|(b, g)| (b.i, g.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_primary_low_stems() {
        let c = synthetic_stems(3, 12, &Computed).unwrap();
        assert!(c.chart.get(0, 0).same_group(&AbGroupDesc::free_over(ExtNat::ONE, Coefficients::Complete(3))));
        assert!(c.chart.get(3, 2).same_group(&AbGroupDesc::cyclic(3)));
        assert_eq!(c.filtration(3, 2), Some(1));
        assert!(c.chart.get(11, 6).same_group(&AbGroupDesc::cyclic(9)));
        assert!(synthetic_stems(3, 21, &Computed).unwrap_err().is_precondition());
        assert!(synthetic_stems(2, 4, &Computed).unwrap_err().is_precondition());
    }

    #[test]
    fn computed_matches_table_at_three() {
        let computed = synthetic_stems(3, 20, &Computed).unwrap();
        let table = synthetic_stems(3, 20, &Table { label: "table".into(), table: None }).unwrap();
        assert!(computed.chart.same_groups(&table.chart));
        let mut a = computed.filtrations.clone();
        let mut b = table.filtrations.clone();
        a.sort_by_key(|f| (f.stem, f.weight));
        b.sort_by_key(|f| (f.stem, f.weight));
        assert_eq!(a, b);
    }

    #[test]
    fn five_primary_range() {
        let c = synthetic_stems(5, 37, &Computed).unwrap();
        let stems: Vec<i64> = c.chart.iter().map(|(b, _)| b.i).collect();
        // α_t in stems 8t - 1; β_1 first appears in stem 38.
        assert_eq!(stems, vec![0, 7, 15, 23, 31]);
    }

    #[test]
    fn zero_rows() {
        let t = Table { label: "table".into(), table: None };
        let c2 = synthetic_stems(2, 5, &t).unwrap();
        let row = milnor_witt_row(&c2.chart, 0);
        assert_eq!(row[&0], AbGroupDesc::free_over(ExtNat::ONE, Coefficients::Complete(2)));
        for k in 1..=5 {
            assert_eq!(row[&k], AbGroupDesc::cyclic(2));
        }
        let c3 = synthetic_stems(3, 20, &t).unwrap();
        assert_eq!(milnor_witt_row(&c3.chart, 0).len(), 1);
    }

    #[test]
    fn table_json_roundtrip_and_validation() {
        let t = SyntheticTable::builtin(3).unwrap();
        let again = SyntheticTable::from_json(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(again, t);
        let bad = r#"{"prime":3,"stem_max":5,"coverage":"all","stems":{"3":[[1,1,3]]}}"#;
        assert!(SyntheticTable::from_json(bad).is_err());
    }
}
