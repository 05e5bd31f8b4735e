//! Torsion 𝔽_p[[t]]-modules of finite length, given by a nilpotent `t`.

use serde::{Deserialize, Serialize};

use super::linalg::{Mat, Subspace, Vector};
use crate::arith::is_prime;
use crate::error::{CoreError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FptModule {
    pub p: u64,
    pub dim: usize,
    pub t: Mat,
}

#[derive(Serialize, Deserialize)]
struct ModuleJson {
    p: u64,
    dim: usize,
    /// Row-major action of `t` on column vectors.
    t: Vec<Vec<u64>>,
}

impl Serialize for FptModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ModuleJson { p: self.p, dim: self.dim, t: self.t.to_rows() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FptModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ModuleJson::deserialize(d)?;
        FptModule::from_rows(j.p, j.dim, j.t).map_err(serde::de::Error::custom)
    }
}

impl FptModule {
    pub fn new(t: Mat) -> Result<Self> {
        if !is_prime(t.p) {
            return Err(CoreError::Precondition(format!("{} is not prime", t.p)));
        }
        if t.rows != t.cols {
            return Err(CoreError::Precondition("t-matrix is not square".into()));
        }
        if !t.pow(t.rows as u64).is_zero() {
            return Err(CoreError::Precondition("t-matrix is not nilpotent".into()));
        }
        Ok(FptModule { p: t.p, dim: t.rows, t })
    }

    pub fn from_rows(p: u64, dim: usize, rows: Vec<Vec<u64>>) -> Result<Self> {
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(CoreError::Parse(format!("t-matrix must be {dim}x{dim}")));
        }
        if p < 2 {
            return Err(CoreError::Precondition(format!("{p} is not prime")));
        }
        Self::new(Mat::from_rows(p, &rows, dim))
    }

    pub fn zero(p: u64) -> Self {
        FptModule { p, dim: 0, t: Mat::zeros(p, 0, 0) }
    }

    /// `⊕ (𝔽_p[t]/t^i)^{r}` with basis `g, tg, …, t^{i-1}g` per summand.
    pub fn from_profile(p: u64, profile: &[(u32, u32)]) -> Self {
        let dim: usize = profile.iter().map(|&(i, r)| (i * r) as usize).sum();
        let mut t = Mat::zeros(p, dim, dim);
        let mut at = 0;
        for &(i, r) in profile {
            for _ in 0..r {
                for k in 0..i as usize - 1 {
                    t.set(at + k + 1, at + k, 1);
                }
                at += i as usize;
            }
        }
        FptModule { p, dim, t }
    }

    /// A single Jordan block of size `n`.
    pub fn cyclic(p: u64, n: u32) -> Self {
        Self::from_profile(p, &[(n, 1)])
    }

    pub fn direct_sum(&self, other: &FptModule) -> FptModule {
        let dim = self.dim + other.dim;
        let mut t = Mat::zeros(self.p, dim, dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.set(i, j, self.t.get(i, j));
            }
        }
        for i in 0..other.dim {
            for j in 0..other.dim {
                t.set(self.dim + i, self.dim + j, other.t.get(i, j));
            }
        }
        FptModule { p: self.p, dim, t }
    }

    /// Same module in the basis given by the columns of `g`.
    pub fn conjugate(&self, g: &Mat) -> Result<FptModule> {
        let cols = g.columns();
        let mut image = Vec::new();
        for c in &cols {
            let tc = self.t.apply(c);
            image.push(super::linalg::coordinates(self.p, &cols, &tc).ok_or_else(|| {
                CoreError::Precondition("change of basis is not invertible".into())
            })?);
        }
        if Subspace::span(self.p, self.dim, &cols).dim() != self.dim {
            return Err(CoreError::Precondition("change of basis is not invertible".into()));
        }
        Ok(FptModule { p: self.p, dim: self.dim, t: Mat::from_columns(self.p, self.dim, &image) })
    }

    pub fn t_power(&self, e: u64) -> Mat {
        self.t.pow(e)
    }

    /// `M[t^e]`.
    pub fn torsion(&self, e: u64) -> Subspace {
        Subspace::span(self.p, self.dim, &self.t_power(e).kernel())
    }

    /// `t^e M`.
    pub fn divisible_by(&self, e: u64) -> Subspace {
        Subspace::span(self.p, self.dim, &self.t_power(e).columns())
    }

    pub fn whole(&self) -> Subspace {
        Subspace::span(self.p, self.dim, &super::linalg::standard_basis(self.dim))
    }

    /// Restriction of `t` to a `t`-stable subspace with the given basis.
    pub fn submodule(&self, basis: &[Vector]) -> Result<FptModule> {
        let mut image = Vec::new();
        for b in basis {
            let tb = self.t.apply(b);
            image.push(super::linalg::coordinates(self.p, basis, &tb).ok_or_else(|| {
                CoreError::Internal("subspace is not t-stable".into())
            })?);
        }
        Ok(FptModule { p: self.p, dim: basis.len(), t: Mat::from_columns(self.p, basis.len(), &image) })
    }

    /// `M / N` for a `t`-stable `N`, with the quotient map and a section.
    pub fn quotient(&self, n: &Subspace) -> Quotient {
        let (complement, _) = n.complete_with(&super::linalg::standard_basis(self.dim));
        let q = complement.len();
        let mut proj = Mat::zeros(self.p, q, self.dim);
        let mut all = n.basis();
        all.extend(complement.iter().cloned());
        for j in 0..self.dim {
            let mut e = vec![0; self.dim];
            e[j] = 1;
            let c = super::linalg::coordinates(self.p, &all, &e).expect("basis of the whole space");
            for i in 0..q {
                proj.set(i, j, c[n.dim() + i]);
            }
        }
        let section = Mat::from_columns(self.p, self.dim, &complement);
        let t = proj.mul(&self.t).mul(&section);
        Quotient { module: FptModule { p: self.p, dim: q, t }, proj, section }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("module serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| CoreError::Parse(e.to_string()))
    }

    /// Jordan type read off from the ranks of powers of `t`: pairs `(size, count)`.
    pub fn rank_profile(&self) -> Vec<(u32, u32)> {
        let ranks: Vec<usize> = (0..=self.dim as u64 + 1).map(|e| self.t_power(e).rank()).collect();
        let mut out = Vec::new();
        for i in 1..=self.dim {
            let c = ranks[i - 1] + ranks[i + 1] - 2 * ranks[i];
            if c > 0 {
                out.push((i as u32, c as u32));
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Quotient {
    pub module: FptModule,
    pub proj: Mat,
    pub section: Mat,
}

/// How an ind-system continues past its explicit prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stabilization {
    /// The structure maps are isomorphisms from the last stage on.
    Stationary,
    /// The socle is constant from the last two stages on; socle vectors whose
    /// height grew past every height of the penultimate stage keep growing,
    /// all other heights stay put.
    HeightGrowth,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndFptModule {
    pub p: u64,
    pub stages: Vec<FptModule>,
    /// `maps[k]` goes from stage `k` to stage `k + 1`, row-major.
    #[serde(with = "mat_list")]
    pub maps: Vec<Mat>,
    pub tail: Stabilization,
}

mod mat_list {
    use super::Mat;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Raw {
        p: u64,
        rows: usize,
        cols: usize,
        entries: Vec<Vec<u64>>,
    }

    pub fn serialize<S: Serializer>(m: &[Mat], s: S) -> Result<S::Ok, S::Error> {
        m.iter()
            .map(|m| Raw { p: m.p, rows: m.rows, cols: m.cols, entries: m.to_rows() })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Mat>, D::Error> {
        let raw = Vec::<Raw>::deserialize(d)?;
        raw.into_iter()
            .map(|r| {
                if r.p < 2 || r.entries.len() != r.rows || r.entries.iter().any(|x| x.len() != r.cols) {
                    return Err(serde::de::Error::custom("malformed structure map"));
                }
                Ok(Mat::from_rows(r.p, &r.entries, r.cols))
            })
            .collect()
    }
}

impl IndFptModule {
    pub fn new(p: u64, stages: Vec<FptModule>, maps: Vec<Mat>, tail: Stabilization) -> Result<Self> {
        let s = IndFptModule { p, stages, maps, tail };
        s.validate()?;
        Ok(s)
    }

    pub fn constant(m: FptModule) -> Self {
        IndFptModule { p: m.p, stages: vec![m], maps: Vec::new(), tail: Stabilization::Stationary }
    }

    /// `𝔽_p[t]/t ↪ 𝔽_p[t]/t² ↪ …` through `len` stages, each map multiplying by `t`.
    pub fn t_power_inclusions(p: u64, len: u32) -> Self {
        let stages: Vec<FptModule> = (1..=len).map(|n| FptModule::cyclic(p, n)).collect();
        let maps = (1..len)
            .map(|n| {
                let mut m = Mat::zeros(p, n as usize + 1, n as usize);
                for k in 0..n as usize {
                    m.set(k + 1, k, 1);
                }
                m
            })
            .collect();
        IndFptModule { p, stages, maps, tail: Stabilization::HeightGrowth }
    }

    pub fn validate(&self) -> Result<()> {
        if self.stages.is_empty() {
            if self.maps.is_empty() {
                return Ok(());
            }
            return Err(CoreError::Precondition("structure maps without stages".into()));
        }
        if self.maps.len() + 1 != self.stages.len() {
            return Err(CoreError::Precondition("need one structure map between consecutive stages".into()));
        }
        for (k, f) in self.maps.iter().enumerate() {
            let (a, b) = (&self.stages[k], &self.stages[k + 1]);
            if a.p != self.p || b.p != self.p || f.p != self.p {
                return Err(CoreError::PrimeMismatch(a.p, self.p));
            }
            if f.rows != b.dim || f.cols != a.dim {
                return Err(CoreError::Precondition(format!("structure map {k} has the wrong shape")));
            }
            if f.rank() != a.dim {
                return Err(CoreError::Precondition(format!("structure map {k} is not injective")));
            }
            if f.mul(&a.t) != b.t.mul(f) {
                return Err(CoreError::Precondition(format!("structure map {k} does not commute with t")));
            }
        }
        if self.tail == Stabilization::Stationary && self.stages.len() >= 2 {
            let last = self.maps.last().unwrap();
            if last.rows != last.cols {
                return Err(CoreError::Precondition("declared stationary but the last map is not onto".into()));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ind-system serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: IndFptModule = serde_json::from_str(s).map_err(|e| CoreError::Parse(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }
}
