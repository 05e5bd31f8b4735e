//! Weight functions `f: ℤ → ℤ` used by weighted truncations.

use std::sync::Arc;

use crate::error::{pre, CoreError, Result};
use crate::registry::Registry;

pub trait WeightFunction: Send + Sync {
    fn name(&self) -> String;
    fn eval(&self, n: i64) -> Result<i64>;

    /// Domain on which the function is defined, `None` meaning all of ℤ.
    fn window(&self) -> Option<(i64, i64)> {
        None
    }

    /// First pair `(a, b)` with `|a|, |b| <= radius` (and inside the window)
    /// violating `f(a) + f(b) >= f(a + b)`, or `f(0) != 0` reported as `(0, 0)`.
    fn superadditivity_violation(&self, radius: i64) -> Result<Option<(i64, i64)>> {
        let inside = |n: i64| self.window().map(|(lo, hi)| lo <= n && n <= hi).unwrap_or(true);
        if inside(0) && self.eval(0)? != 0 {
            return Ok(Some((0, 0)));
        }
        for a in -radius..=radius {
            for b in -radius..=radius {
                if !(inside(a) && inside(b) && inside(a + b)) {
                    continue;
                }
                if self.eval(a)? + self.eval(b)? < self.eval(a + b)? {
                    return Ok(Some((a, b)));
                }
            }
        }
        Ok(None)
    }
}

/// `f(n) = 2n`.
#[derive(Debug, Clone, Copy)]
pub struct Chow;

impl WeightFunction for Chow {
    fn name(&self) -> String {
        "chow".into()
    }
    fn eval(&self, n: i64) -> Result<i64> {
        Ok(2 * n)
    }
}

/// `f_d(n) = 2n + ε_d(n)` with `ε_d(n)` the representative of `-n` in `0..d`.
#[derive(Debug, Clone, Copy)]
pub struct Fd {
    d: i64,
}

impl Fd {
    pub fn new(d: i64) -> Result<Self> {
        if d <= 0 {
            return pre(format!("f_d needs d > 0, got {d}"));
        }
        Ok(Fd { d })
    }

    pub fn epsilon(&self, n: i64) -> i64 {
        (-n).rem_euclid(self.d)
    }
}

impl WeightFunction for Fd {
    fn name(&self) -> String {
        format!("fd:{}", self.d)
    }
    fn eval(&self, n: i64) -> Result<i64> {
        Ok(2 * n + self.epsilon(n))
    }
}

/// Explicit values on a window `lo..lo+len`.
#[derive(Debug, Clone)]
pub struct TableWeight {
    lo: i64,
    values: Vec<i64>,
}

impl TableWeight {
    pub fn new(lo: i64, values: Vec<i64>) -> Self {
        TableWeight { lo, values }
    }

    pub fn from_fn(lo: i64, hi: i64, f: impl Fn(i64) -> i64) -> Self {
        TableWeight { lo, values: (lo..=hi).map(f).collect() }
    }
}

impl WeightFunction for TableWeight {
    fn name(&self) -> String {
        format!("table:{}:{}", self.lo, self.values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
    }
    fn eval(&self, n: i64) -> Result<i64> {
        let idx = n - self.lo;
        if idx < 0 || idx as usize >= self.values.len() {
            return Err(CoreError::OutsideWindow(n));
        }
        Ok(self.values[idx as usize])
    }
    fn window(&self) -> Option<(i64, i64)> {
        Some((self.lo, self.lo + self.values.len() as i64 - 1))
    }
}

/// Builds a weight function from an optional textual argument.
pub trait WeightFamily: Send + Sync {
    fn build(&self, arg: Option<&str>) -> Result<Box<dyn WeightFunction>>;
}

struct ChowFamily;
struct FdFamily;
struct TableFamily;

impl WeightFamily for ChowFamily {
    fn build(&self, _arg: Option<&str>) -> Result<Box<dyn WeightFunction>> {
        Ok(Box::new(Chow))
    }
}

impl WeightFamily for FdFamily {
    fn build(&self, arg: Option<&str>) -> Result<Box<dyn WeightFunction>> {
        let d = arg
            .ok_or_else(|| CoreError::Parse("fd needs a modulus, e.g. fd:2".into()))?
            .parse::<i64>()
            .map_err(|e| CoreError::Parse(e.to_string()))?;
        Ok(Box::new(Fd::new(d)?))
    }
}

impl WeightFamily for TableFamily {
    // "lo:v0,v1,..."
    fn build(&self, arg: Option<&str>) -> Result<Box<dyn WeightFunction>> {
        let arg = arg.ok_or_else(|| CoreError::Parse("table needs `lo:v0,v1,..`".into()))?;
        let (lo, vals) = arg.split_once(':').ok_or_else(|| CoreError::Parse(arg.into()))?;
        let lo = lo.parse::<i64>().map_err(|e| CoreError::Parse(e.to_string()))?;
        let values = vals
            .split(',')
            .map(|v| v.trim().parse::<i64>().map_err(|e| CoreError::Parse(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Box::new(TableWeight::new(lo, values)))
    }
}

pub fn weight_families() -> Registry<dyn WeightFamily> {
    let mut r: Registry<dyn WeightFamily> = Registry::new();
    r.register("chow", Arc::new(ChowFamily));
    r.register("fd", Arc::new(FdFamily));
    r.register("table", Arc::new(TableFamily));
    r
}

/// Parses `chow`, `fd:<d>` or `table:<lo>:<v0,v1,..>`.
pub fn parse_weight(desc: &str) -> Result<Box<dyn WeightFunction>> {
    let (name, arg) = match desc.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (desc, None),
    };
    weight_families().get(name)?.build(arg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fd_case_table() {
        let f2 = Fd::new(2).unwrap();
        assert_eq!(f2.eval(0).unwrap(), 0);
        assert_eq!(f2.eval(-1).unwrap(), -1);
        assert_eq!(Chow.eval(3).unwrap(), 6);
        let f4 = Fd::new(4).unwrap();
        assert_eq!(f4.epsilon(-3), 3);
        assert_eq!(f4.epsilon(1), 3);
        assert_eq!(f4.epsilon(5), f4.epsilon(1));
        assert!(Fd::new(0).is_err());
    }

    #[test]
    fn descriptors_parse() {
        assert_eq!(parse_weight("fd:3").unwrap().eval(-2).unwrap(), -2);
        let t = parse_weight("table:-1:-1,0,5").unwrap();
        assert_eq!(t.eval(1).unwrap(), 5);
        assert_eq!(t.eval(2), Err(CoreError::OutsideWindow(2)));
        assert!(parse_weight("nope").is_err());
    }

    #[test]
    fn table_violation_detected() {
        let t = TableWeight::new(0, vec![0, 1, 5]);
        assert_eq!(t.superadditivity_violation(2).unwrap(), Some((1, 1)));
    }
}
