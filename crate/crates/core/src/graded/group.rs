//! Descriptors of (not necessarily finitely generated) abelian groups.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::extnat::ExtNat;
use crate::arith::prime_power;
use crate::error::{CoreError, Result};

/// What the free summands are free over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "prime")]
pub enum Coefficients {
    #[default]
    Integral,
    /// ℤ localized at p.
    Local(u64),
    /// p-adic integers.
    Complete(u64),
}

/// An abelian group of the shape
/// `R^free_rank ⊕ (⊕ ℤ/order) ⊕ D^divisible_rank ⊕ (unlisted torsion)`.
///
/// `R` is selected by `coefficients`. `D` stands for a divisible group; it
/// vanishes under p-completion and modulo p for every p. When
/// `unlisted_torsion_outside` is `Some(primes)`, the group may carry further
/// torsion at primes *not* in that list; at listed primes the torsion map
/// is exhaustive.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AbGroupDesc {
    pub free_rank: ExtNat,
    #[serde(default)]
    pub coefficients: Coefficients,
    /// Prime-power order -> multiplicity.
    #[serde(default)]
    pub torsion: BTreeMap<u64, ExtNat>,
    #[serde(default)]
    pub divisible_rank: ExtNat,
    #[serde(default)]
    pub unlisted_torsion_outside: Option<Vec<u64>>,
    /// Orders are certified only below p^K.
    #[serde(default)]
    pub modulus_precision: Option<u32>,
}

impl AbGroupDesc {
    pub fn zero() -> Self {
        Self::default()
    }

    /// ℤ^r.
    pub fn free(r: u64) -> Self {
        AbGroupDesc { free_rank: ExtNat::Finite(r), ..Self::default() }
    }

    pub fn free_over(r: ExtNat, coefficients: Coefficients) -> Self {
        AbGroupDesc { free_rank: r, coefficients, ..Self::default() }
    }

    /// ℤ/n for an arbitrary positive n, split into prime-power parts.
    pub fn cyclic(n: u64) -> Self {
        let mut g = Self::default();
        for (p, k) in crate::arith::factorize(n) {
            g.add_torsion(p.pow(k), ExtNat::ONE);
        }
        g
    }

    pub fn divisible(r: ExtNat) -> Self {
        AbGroupDesc { divisible_rank: r, ..Self::default() }
    }

    /// Adds `mult` copies of ℤ/order; order must be a prime power > 1.
    pub fn add_torsion(&mut self, order: u64, mult: ExtNat) {
        assert!(prime_power(order).is_some(), "torsion order {order} is not a prime power");
        if mult.is_zero() {
            return;
        }
        let e = self.torsion.entry(order).or_insert(ExtNat::ZERO);
        *e = *e + mult;
    }

    pub fn with_torsion(mut self, order: u64, mult: u64) -> Self {
        self.add_torsion(order, ExtNat::Finite(mult));
        self
    }

    pub fn with_precision(mut self, k: Option<u32>) -> Self {
        self.modulus_precision = k;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank.is_zero()
            && self.torsion.is_empty()
            && self.divisible_rank.is_zero()
            && self.unlisted_torsion_outside.is_none()
    }

    /// Finite order, when the group is finite and fully listed.
    pub fn order(&self) -> Option<u128> {
        if !self.free_rank.is_zero() || !self.divisible_rank.is_zero() || self.unlisted_torsion_outside.is_some() {
            return None;
        }
        let mut n: u128 = 1;
        for (&o, &m) in &self.torsion {
            let m = m.finite()?;
            n = n.checked_mul((o as u128).checked_pow(m as u32)?)?;
        }
        Some(n)
    }

    /// Torsion orders listed one per copy (finite multiplicities only).
    pub fn torsion_list(&self) -> Vec<u64> {
        let mut v = Vec::new();
        for (&o, &m) in &self.torsion {
            if let ExtNat::Finite(k) = m {
                v.extend(std::iter::repeat_n(o, k as usize));
            }
        }
        v
    }

    /// Same abstract group, ignoring the precision annotation.
    pub fn same_group(&self, other: &AbGroupDesc) -> bool {
        let mut a = self.clone();
        let mut b = other.clone();
        a.modulus_precision = None;
        b.modulus_precision = None;
        if a.free_rank.is_zero() {
            a.coefficients = Coefficients::Integral;
        }
        if b.free_rank.is_zero() {
            b.coefficients = Coefficients::Integral;
        }
        a == b
    }

    pub fn direct_sum(&self, other: &AbGroupDesc) -> Result<AbGroupDesc> {
        let coefficients = match (self.free_rank.is_zero(), other.free_rank.is_zero()) {
            (true, _) => other.coefficients,
            (_, true) => self.coefficients,
            _ if self.coefficients == other.coefficients => self.coefficients,
            _ => {
                return Err(CoreError::Unsupported(format!(
                    "direct sum of free parts over {:?} and {:?}",
                    self.coefficients, other.coefficients
                )))
            }
        };
        let mut out = AbGroupDesc {
            free_rank: self.free_rank + other.free_rank,
            coefficients,
            torsion: self.torsion.clone(),
            divisible_rank: self.divisible_rank + other.divisible_rank,
            unlisted_torsion_outside: merge_unlisted(&self.unlisted_torsion_outside, &other.unlisted_torsion_outside),
            modulus_precision: min_precision(self.modulus_precision, other.modulus_precision),
        };
        for (&o, &m) in &other.torsion {
            out.add_torsion(o, m);
        }
        Ok(out)
    }

    /// `m`-fold direct sum.
    pub fn scale(&self, m: ExtNat) -> AbGroupDesc {
        if m.is_zero() {
            return AbGroupDesc::zero();
        }
        AbGroupDesc {
            free_rank: self.free_rank * m,
            coefficients: self.coefficients,
            torsion: self.torsion.iter().map(|(&o, &k)| (o, k * m)).collect(),
            divisible_rank: self.divisible_rank * m,
            unlisted_torsion_outside: self.unlisted_torsion_outside.clone(),
            modulus_precision: self.modulus_precision,
        }
    }

    /// Naive p-completion.
    ///
    /// Free summands over ℤ or ℤ_(p) become ℤ_p; free summands over rings in
    /// which p is a unit die; p-power torsion survives, everything else dies.
    pub fn complete(&self, p: u64) -> Result<AbGroupDesc> {
        if let Some(listed) = &self.unlisted_torsion_outside {
            if !listed.contains(&p) {
                return Err(CoreError::Unsupported(format!(
                    "cannot complete at {p}: torsion at that prime is not listed"
                )));
            }
        }
        let free_rank = match self.coefficients {
            Coefficients::Integral => self.free_rank,
            Coefficients::Local(q) | Coefficients::Complete(q) if q == p => self.free_rank,
            _ => ExtNat::ZERO,
        };
        let torsion = self
            .torsion
            .iter()
            .filter(|(&o, _)| prime_power(o).map(|(q, _)| q) == Some(p))
            .map(|(&o, &m)| (o, m))
            .collect();
        Ok(AbGroupDesc {
            free_rank,
            coefficients: if free_rank.is_zero() { Coefficients::Integral } else { Coefficients::Complete(p) },
            torsion,
            divisible_rank: ExtNat::ZERO,
            unlisted_torsion_outside: None,
            modulus_precision: self.modulus_precision,
        })
    }

    /// The quotient G/p, as a descriptor of an elementary abelian p-group.
    pub fn mod_p(&self, p: u64) -> Result<AbGroupDesc> {
        if let Some(listed) = &self.unlisted_torsion_outside {
            if !listed.contains(&p) {
                return Err(CoreError::Unsupported(format!("G/{p} undetermined: unlisted torsion")));
            }
        }
        let free = match self.coefficients {
            Coefficients::Integral => self.free_rank,
            Coefficients::Local(q) | Coefficients::Complete(q) if q == p => self.free_rank,
            _ => ExtNat::ZERO,
        };
        let mut rank = free;
        for (&o, &m) in &self.torsion {
            if o % p == 0 {
                rank = rank + m;
            }
        }
        let mut out = AbGroupDesc::zero();
        out.add_torsion(p, rank);
        Ok(out)
    }

    /// Whether multiplication by p is surjective.
    pub fn is_p_divisible(&self, p: u64) -> Result<bool> {
        Ok(self.mod_p(p)?.is_zero())
    }

    /// Dimension of G/p over 𝔽_p.
    pub fn mod_p_rank(&self, p: u64) -> Result<ExtNat> {
        Ok(self.mod_p(p)?.torsion.get(&p).copied().unwrap_or(ExtNat::ZERO))
    }

    /// Compact group notation, e.g. `ℤ_3 ⊕ ℤ/9`.
    pub fn pretty(&self) -> String {
        let mut parts = Vec::new();
        if !self.free_rank.is_zero() {
            let ring = match self.coefficients {
                Coefficients::Integral => "ℤ".to_string(),
                Coefficients::Local(p) => format!("ℤ_({p})"),
                Coefficients::Complete(p) => format!("ℤ_{p}"),
            };
            parts.push(power(&ring, self.free_rank));
        }
        for (&o, &m) in &self.torsion {
            parts.push(power(&format!("ℤ/{o}"), m));
        }
        if !self.divisible_rank.is_zero() {
            parts.push(power("D", self.divisible_rank));
        }
        if let Some(l) = &self.unlisted_torsion_outside {
            parts.push(format!("T[∤{}]", l.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ⊕ ")
        }
    }
}

fn power(base: &str, m: ExtNat) -> String {
    match m {
        ExtNat::Finite(1) => base.to_string(),
        ExtNat::Finite(k) => format!("({base})^{k}"),
        ExtNat::Infinite => format!("({base})^∞"),
    }
}

pub(crate) fn min_precision(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn merge_unlisted(a: &Option<Vec<u64>>, b: &Option<Vec<u64>>) -> Option<Vec<u64>> {
    match (a, b) {
        (None, None) => None,
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (Some(x), Some(y)) => Some(x.iter().copied().filter(|p| y.contains(p)).collect()),
    }
}

impl fmt::Display for AbGroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}
