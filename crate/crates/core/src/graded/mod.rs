//! Bigraded abelian-group charts, weight functions and truncations.

pub mod chart;
pub mod extnat;
pub mod group;
pub mod weight;

pub use chart::{chow_degree, Bidegree, BigradedChart, CombineOp, TruncationMode};
pub use extnat::ExtNat;
pub use group::{AbGroupDesc, Coefficients};
pub use weight::{parse_weight, Chow, Fd, TableWeight, WeightFunction};

/// Evaluates a weight function.
pub fn weight_eval(f: &dyn WeightFunction, n: i64) -> crate::error::Result<i64> {
    f.eval(n)
}

/// Keeps entry `(i, j)` iff `i - f(j)` satisfies `mode` against `threshold`.
pub fn truncate_chart(
    c: &BigradedChart,
    f: &dyn WeightFunction,
    threshold: i64,
    mode: TruncationMode,
) -> crate::error::Result<BigradedChart> {
    c.truncate(f, threshold, mode)
}

pub fn chart_combine(a: &BigradedChart, b: &BigradedChart, op: CombineOp) -> crate::error::Result<BigradedChart> {
    a.combine(Some(b), op)
}

pub fn complete_desc(g: &AbGroupDesc, p: u64) -> crate::error::Result<AbGroupDesc> {
    g.complete(p)
}
