//! Adams–Novikov Ext charts from the cobar complex over `ℤ/p^K`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::algebroid::{AlgebroidKind, HopfAlgebroid};
use super::cobar::{CobarComplex, CobarSlice};
use super::linalg::{local_divisors, rational_rank};
use crate::error::{CoreError, Result};
use crate::graded::{AbGroupDesc, BigradedChart, Coefficients, ExtNat};

pub const DEFAULT_PRECISION: u32 = 10;

/// Ext groups with `i = s` (filtration) and `j = t` (internal degree).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtChart {
    pub chart: BigradedChart,
    pub prime: u64,
    pub precision: u32,
    pub s_max: u32,
    pub t_max: u32,
}

impl ExtChart {
    pub fn get(&self, s: u32, t: u32) -> AbGroupDesc {
        self.chart.get(s as i64, t as i64)
    }

    /// Nonzero entries as `(stem, s, group)`.
    pub fn by_stem(&self) -> Vec<(i64, i64, AbGroupDesc)> {
        self.chart.iter().map(|(b, g)| (b.j - b.i, b.i, g.clone())).collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ExtOptions {
    pub normalized: bool,
    pub parallel: bool,
}

impl Default for ExtOptions {
    fn default() -> Self {
        ExtOptions { normalized: true, parallel: true }
    }
}

fn slice_groups(sl: &CobarSlice, p: u64, k: u32) -> Result<Vec<AbGroupDesc>> {
    let s_top = sl.differentials.len();
    let mut ranks = Vec::with_capacity(s_top);
    let mut divisors = Vec::with_capacity(s_top);
    for (s, d) in sl.differentials.iter().enumerate() {
        let r = rational_rank(d).ok_or_else(|| CoreError::Internal("no certifying prime for a cobar differential".into()))?;
        let div = local_divisors(d, p, k).ok_or_else(|| CoreError::Internal("cobar differential is not p-integral".into()))?;
        if div.len() < r {
            return Err(CoreError::PrecisionExhausted { s: s as u32 + 1, t: sl.t, k });
        }
        if div.len() > r {
            return Err(CoreError::Internal(format!("local rank exceeds rational rank at s={s}, t={}", sl.t)));
        }
        ranks.push(r);
        divisors.push(div);
    }
    let mut out = Vec::with_capacity(s_top);
    for s in 0..s_top {
        let n = sl.bases[s].len();
        let incoming = if s == 0 { 0 } else { ranks[s - 1] };
        let free = n - ranks[s] - incoming;
        let mut g = AbGroupDesc::free_over(ExtNat::Finite(free as u64), Coefficients::Local(p));
        if s > 0 {
            for &v in divisors[s - 1].iter().filter(|&&v| v > 0) {
                g.add_torsion(p.pow(v), ExtNat::ONE);
            }
        }
        out.push(g.with_precision(Some(k)));
    }
    Ok(out)
}

/// Ext^{s,t} for `s ≤ s_max`, even `t ≤ t_max`, computed with coefficients mod `p^k`.
pub fn ext_chart_with(h: &HopfAlgebroid, p: u64, k: u32, s_max: u32, t_max: u32, opts: ExtOptions) -> Result<ExtChart> {
    if k < 2 {
        return Err(CoreError::Precondition("precision must be at least 2".into()));
    }
    if !crate::arith::is_prime(p) {
        return Err(CoreError::Precondition(format!("{p} is not prime")));
    }
    if let AlgebroidKind::PTypical(q) = h.kind {
        if q != p {
            return Err(CoreError::PrimeMismatch(q, p));
        }
    }
    if p.checked_pow(k).is_none() {
        return Err(CoreError::Precondition(format!("{p}^{k} does not fit in a machine word")));
    }
    let complex = CobarComplex::new(h, s_max, t_max, opts.normalized)?;
    let ts: Vec<u32> = (0..=t_max).step_by(2).collect();
    let work = |t: &u32| -> Result<(u32, Vec<AbGroupDesc>)> {
        let sl = complex.slice(*t)?;
        Ok((*t, slice_groups(&sl, p, k)?))
    };
    let rows: Vec<Result<(u32, Vec<AbGroupDesc>)>> =
        if opts.parallel { ts.par_iter().map(work).collect() } else { ts.iter().map(work).collect() };
    let mut chart = BigradedChart::new(format!("Ext {} p={p}", h.kind), Some(p));
    for row in rows {
        let (t, groups) = row?;
        for (s, g) in groups.into_iter().enumerate() {
            if !g.is_zero() {
                chart.set(s as i64, t as i64, g);
            }
        }
    }
    Ok(ExtChart { chart, prime: p, precision: k, s_max, t_max })
}

pub fn ext_chart(h: &HopfAlgebroid, p: u64, k: u32, s_max: u32, t_max: u32) -> Result<ExtChart> {
    ext_chart_with(h, p, k, s_max, t_max, ExtOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::build_algebroid;

    fn group(free: u64, torsion: &[u64], p: u64, k: u32) -> AbGroupDesc {
        let mut g = AbGroupDesc::free_over(ExtNat::Finite(free), Coefficients::Local(p));
        for &o in torsion {
            g.add_torsion(o, ExtNat::ONE);
        }
        g.with_precision(Some(k))
    }

    #[test]
    fn three_primary_low_stems() {
        let h = build_algebroid(AlgebroidKind::PTypical(3), 8).unwrap();
        let e = ext_chart(&h, 3, 10, 3, 16).unwrap();
        assert_eq!(e.get(0, 0), group(1, &[], 3, 10));
        assert_eq!(e.get(1, 4), group(0, &[3], 3, 10));
        assert_eq!(e.get(1, 8), group(0, &[3], 3, 10));
        assert_eq!(e.get(1, 12), group(0, &[9], 3, 10));
        assert_eq!(e.get(2, 12), group(0, &[3], 3, 10));
        assert!(e.get(1, 6).is_zero());
    }

    #[test]
    fn normalized_and_unnormalized_agree() {
        let h = build_algebroid(AlgebroidKind::PTypical(3), 6).unwrap();
        let a = ext_chart(&h, 3, 6, 3, 12).unwrap();
        let b = ext_chart_with(&h, 3, 6, 3, 12, ExtOptions { normalized: false, parallel: false }).unwrap();
        assert_eq!(a.chart.to_json(), b.chart.to_json());
    }

    #[test]
    fn universal_matches_p_typical_locally() {
        let u = build_algebroid(AlgebroidKind::Universal, 4).unwrap();
        let t = build_algebroid(AlgebroidKind::PTypical(3), 4).unwrap();
        let a = ext_chart(&u, 3, 4, 2, 8).unwrap();
        let b = ext_chart(&t, 3, 4, 2, 8).unwrap();
        assert!(a.chart.same_groups(&b.chart));
    }

    #[test]
    fn low_precision_is_reported() {
        let h = build_algebroid(AlgebroidKind::PTypical(3), 6).unwrap();
        let err = ext_chart(&h, 3, 2, 2, 12).unwrap_err();
        assert!(matches!(err, CoreError::PrecisionExhausted { .. }));
        assert!(matches!(ext_chart(&h, 5, 4, 2, 12), Err(CoreError::PrimeMismatch(3, 5))));
    }
}
