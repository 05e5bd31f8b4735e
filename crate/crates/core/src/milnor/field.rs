//! Field descriptors and the JSON field catalog.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, mult_order, pow_mod, prime_power, valuation};
use crate::error::{CoreError, Result};
use crate::graded::{AbGroupDesc, ExtNat};

/// Witt-ring data: `GW`, `W`, the powers `I^n` (n ≥ 1) and `k^M_n = K^M_n/2`
/// (n ≥ 0). Both lists are stable: degrees past the end repeat the last entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WittData {
    pub gw: AbGroupDesc,
    pub w: AbGroupDesc,
    pub i_powers: Vec<AbGroupDesc>,
    pub milnor_mod2: Vec<AbGroupDesc>,
}

fn stable(v: &[AbGroupDesc], k: usize) -> AbGroupDesc {
    v.get(k).or_else(|| v.last()).cloned().unwrap_or_default()
}

impl WittData {
    /// `I^n`; equals `W` for `n ≤ 0`.
    pub fn i_power(&self, n: i64) -> AbGroupDesc {
        if n <= 0 {
            self.w.clone()
        } else {
            stable(&self.i_powers, n as usize - 1)
        }
    }

    pub fn k_mod2(&self, n: i64) -> AbGroupDesc {
        if n < 0 {
            AbGroupDesc::zero()
        } else {
            stable(&self.milnor_mod2, n as usize)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CustomField {
    pub characteristic: u64,
    /// `K^M_n` for n ≥ 0. Degrees past the last listed one repeat it, so a
    /// table that vanishes from some degree on must list an explicit zero.
    #[serde(default)]
    pub milnor: BTreeMap<i64, AbGroupDesc>,
    #[serde(default)]
    pub witt: Option<WittData>,
    /// Replaces the fiber-product assembly of `K^MW` when present.
    #[serde(default)]
    pub kmw: Option<BTreeMap<i64, AbGroupDesc>>,
    /// Largest `n` with `μ_{p^n}` present, per prime.
    #[serde(default)]
    pub roots_of_unity: BTreeMap<u64, ExtNat>,
    /// Value for primes missing from `roots_of_unity`.
    #[serde(default)]
    pub roots_of_unity_default: ExtNat,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum FieldVariant {
    Finite {
        q: u64,
    },
    AlgebraicallyClosed {
        characteristic: u64,
    },
    RealClosed,
    ComplexLike,
    /// `base(μ_{p^∞})` for a finite base field.
    CyclotomicTower {
        base: Box<FieldDescriptor>,
        p: u64,
        /// Galois K-theory module handed to the torsion-module pipeline.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        galois_module: Option<serde_json::Value>,
    },
    Custom(CustomField),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldDescriptor {
    pub name: String,
    #[serde(flatten)]
    pub variant: FieldVariant,
}

// Deserialized through a JSON value: serde's flatten buffering would
// otherwise reject the integer-keyed maps inside the variant.
impl<'de> Deserialize<'de> for FieldDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let mut v = serde_json::Value::deserialize(d)?;
        let obj = v.as_object_mut().ok_or_else(|| D::Error::custom("field descriptor must be an object"))?;
        let name = match obj.remove("name") {
            Some(serde_json::Value::String(s)) => s,
            _ => return Err(D::Error::custom("field descriptor needs a string `name`")),
        };
        let variant = FieldVariant::deserialize(v).map_err(D::Error::custom)?;
        Ok(FieldDescriptor { name, variant })
    }
}

// Internally tagged enums buffer their content the same way, so the tag is
// dispatched by hand.
impl<'de> Deserialize<'de> for FieldVariant {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(Deserialize)]
        struct Finite {
            q: u64,
        }
        #[derive(Deserialize)]
        struct Closed {
            characteristic: u64,
        }
        #[derive(Deserialize)]
        struct Tower {
            base: Box<FieldDescriptor>,
            p: u64,
            #[serde(default)]
            galois_module: Option<serde_json::Value>,
        }
        let mut v = serde_json::Value::deserialize(d)?;
        let obj = v.as_object_mut().ok_or_else(|| D::Error::custom("field variant must be an object"))?;
        let tag = match obj.remove("variant") {
            Some(serde_json::Value::String(s)) => s,
            _ => return Err(D::Error::custom("missing `variant`")),
        };
        let e = D::Error::custom;
        Ok(match tag.as_str() {
            "finite" => FieldVariant::Finite { q: Finite::deserialize(v).map_err(e)?.q },
            "algebraically_closed" => {
                FieldVariant::AlgebraicallyClosed { characteristic: Closed::deserialize(v).map_err(e)?.characteristic }
            }
            "real_closed" => FieldVariant::RealClosed,
            "complex_like" => FieldVariant::ComplexLike,
            "cyclotomic_tower" => {
                let t = Tower::deserialize(v).map_err(e)?;
                FieldVariant::CyclotomicTower { base: t.base, p: t.p, galois_module: t.galois_module }
            }
            "custom" => FieldVariant::Custom(CustomField::deserialize(v).map_err(e)?),
            other => return Err(D::Error::custom(format!("unknown field variant `{other}`"))),
        })
    }
}

impl FieldDescriptor {
    pub fn new(name: impl Into<String>, variant: FieldVariant) -> Self {
        FieldDescriptor { name: name.into(), variant }
    }

    pub fn finite(q: u64) -> Self {
        Self::new(format!("F{q}"), FieldVariant::Finite { q })
    }

    pub fn complex_like() -> Self {
        Self::new("complex", FieldVariant::ComplexLike)
    }

    pub fn algebraically_closed(characteristic: u64) -> Self {
        Self::new(format!("algebraic_closure_char{characteristic}"), FieldVariant::AlgebraicallyClosed { characteristic })
    }

    pub fn real_closed() -> Self {
        Self::new("reals", FieldVariant::RealClosed)
    }

    pub fn cyclotomic_tower(base: FieldDescriptor, p: u64) -> Self {
        let name = format!("{}(mu_{p}^inf)", base.name);
        Self::new(name, FieldVariant::CyclotomicTower { base: Box::new(base), p, galois_module: None })
    }

    /// Short name of the variant, used as the rule-registry key.
    pub fn variant_name(&self) -> &'static str {
        match &self.variant {
            FieldVariant::Finite { .. } => "finite",
            FieldVariant::AlgebraicallyClosed { .. } => "algebraically_closed",
            FieldVariant::RealClosed => "real_closed",
            FieldVariant::ComplexLike => "complex_like",
            FieldVariant::CyclotomicTower { .. } => "cyclotomic_tower",
            FieldVariant::Custom(_) => "custom",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.variant {
            FieldVariant::Finite { q } => {
                if prime_power(*q).is_none() {
                    return Err(CoreError::Precondition(format!("{q} is not a prime power")));
                }
            }
            FieldVariant::AlgebraicallyClosed { characteristic: c } => {
                if *c != 0 && !is_prime(*c) {
                    return Err(CoreError::Precondition(format!("characteristic {c} is not 0 or prime")));
                }
            }
            FieldVariant::CyclotomicTower { base, p, .. } => {
                let FieldVariant::Finite { .. } = base.variant else {
                    return Err(CoreError::Unsupported("cyclotomic towers are catalogued over finite fields only".into()));
                };
                base.validate()?;
                if !is_prime(*p) || base.characteristic() == *p {
                    return Err(CoreError::Precondition(format!("bad tower prime {p}")));
                }
            }
            FieldVariant::Custom(c)
                if c.characteristic != 0 && !is_prime(c.characteristic) => {
                    return Err(CoreError::Precondition("custom characteristic must be 0 or prime".into()));
                }
            _ => {}
        }
        Ok(())
    }

    pub fn characteristic(&self) -> u64 {
        match &self.variant {
            FieldVariant::Finite { q } => prime_power(*q).map(|(p, _)| p).unwrap_or(0),
            FieldVariant::AlgebraicallyClosed { characteristic } => *characteristic,
            FieldVariant::RealClosed | FieldVariant::ComplexLike => 0,
            FieldVariant::CyclotomicTower { base, .. } => base.characteristic(),
            FieldVariant::Custom(c) => c.characteristic,
        }
    }

    /// Largest `n` with `μ_{p^n} ⊂ k`.
    pub fn roots_of_unity(&self, p: u64) -> ExtNat {
        if p == self.characteristic() {
            return ExtNat::ZERO;
        }
        match &self.variant {
            FieldVariant::Finite { q } => ExtNat::Finite(valuation(q - 1, p) as u64),
            FieldVariant::AlgebraicallyClosed { .. } | FieldVariant::ComplexLike => ExtNat::Infinite,
            FieldVariant::RealClosed => ExtNat::Finite(u64::from(p == 2)),
            FieldVariant::CyclotomicTower { base, p: tower, .. } => {
                if p == *tower {
                    ExtNat::Infinite
                } else {
                    let FieldVariant::Finite { q } = base.variant else { return ExtNat::ZERO };
                    ExtNat::Finite(tower_roots(q, *tower, p))
                }
            }
            FieldVariant::Custom(c) => c.roots_of_unity.get(&p).copied().unwrap_or(c.roots_of_unity_default),
        }
    }

    /// `μ_{p^∞} ⊂ k` and `p` is not the characteristic.
    pub fn is_tate_orientable(&self, p: u64) -> bool {
        self.characteristic() != p && self.roots_of_unity(p) == ExtNat::Infinite
    }
}

/// Residue degree `d` of the tower `𝔽_q(μ_{p^∞})` over `𝔽_q`: the tower is
/// the union of `𝔽_{q^{d p^m}}`. For p = 2 every `ord_{2^n}(q)` is a power
/// of two, so `d = 1`.
pub(crate) fn tower_base_degree(q: u64, p: u64) -> u64 {
    if p == 2 {
        1
    } else {
        mult_order(q % p, p)
    }
}

/// `max_m v_ℓ(q^{d p^m} - 1)` for ℓ different from the tower prime.
fn tower_roots(q: u64, p: u64, ell: u64) -> u64 {
    let d = tower_base_degree(q, p);
    // The ℓ-adic valuation stabilizes once p^m exceeds the order of q^d mod ℓ.
    let mut best = 0;
    let mut m_exp: u64 = 1;
    for _ in 0..64 {
        let mut e = 0u64;
        let mut modulus = ell;
        while let Some(next) = modulus.checked_mul(ell) {
            if pow_mod(q % modulus, d.saturating_mul(m_exp), modulus) != 1 {
                break;
            }
            e += 1;
            modulus = next;
        }
        best = best.max(e);
        if m_exp > ell {
            break;
        }
        m_exp = match m_exp.checked_mul(p) {
            Some(v) => v,
            None => break,
        };
    }
    best
}

/// A named collection of field descriptors.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub fields: Vec<FieldDescriptor>,
}

const BUILTIN_CATALOG: &str = include_str!("../../data/catalog.json");

impl Catalog {
    pub fn builtin() -> Catalog {
        Catalog::from_json(BUILTIN_CATALOG).expect("embedded catalog parses")
    }

    pub fn from_json(s: &str) -> Result<Catalog> {
        let c: Catalog = serde_json::from_str(s).map_err(|e| CoreError::Parse(format!("catalog: {e}")))?;
        for f in &c.fields {
            f.validate()?;
        }
        Ok(c)
    }

    pub fn load(path: &std::path::Path) -> Result<Catalog> {
        let s = std::fs::read_to_string(path).map_err(|e| CoreError::Io(format!("{}: {e}", path.display())))?;
        Catalog::from_json(&s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serializes")
    }

    pub fn get(&self, name: &str) -> Result<&FieldDescriptor> {
        self.fields.iter().find(|f| f.name == name).ok_or_else(|| CoreError::UnknownName(name.into()))
    }

    /// Resolves a catalog name or an inline descriptor such as `finite:7`.
    pub fn resolve(&self, desc: &str) -> Result<FieldDescriptor> {
        if let Ok(f) = self.get(desc) {
            return Ok(f.clone());
        }
        let (kind, arg) = desc.split_once(':').unwrap_or((desc, ""));
        let num = |s: &str| s.parse::<u64>().map_err(|_| CoreError::Parse(format!("bad field descriptor `{desc}`")));
        let f = match kind {
            "finite" => FieldDescriptor::finite(num(arg)?),
            "algebraically_closed" => FieldDescriptor::algebraically_closed(if arg.is_empty() { 0 } else { num(arg)? }),
            "complex_like" => FieldDescriptor::complex_like(),
            "real_closed" => FieldDescriptor::real_closed(),
            "cyclotomic_tower" => {
                let (q, p) = arg.split_once(':').ok_or_else(|| CoreError::Parse(format!("bad field descriptor `{desc}`")))?;
                FieldDescriptor::cyclotomic_tower(FieldDescriptor::finite(num(q)?), num(p)?)
            }
            _ => return Err(CoreError::UnknownName(desc.into())),
        };
        f.validate()?;
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity_counts() {
        assert_eq!(FieldDescriptor::finite(13).roots_of_unity(2), ExtNat::Finite(2));
        assert_eq!(FieldDescriptor::finite(13).roots_of_unity(3), ExtNat::Finite(1));
        assert_eq!(FieldDescriptor::finite(9).roots_of_unity(3), ExtNat::ZERO);
        assert_eq!(FieldDescriptor::real_closed().roots_of_unity(2), ExtNat::ONE);
        let t = FieldDescriptor::cyclotomic_tower(FieldDescriptor::finite(2), 3);
        assert!(t.is_tate_orientable(3));
        assert!(!t.is_tate_orientable(2));
        // 𝔽_2(μ_{3^∞}) contains 𝔽_8, hence μ_7.
        assert_eq!(t.roots_of_unity(7), ExtNat::ONE);
        assert!(!FieldDescriptor::algebraically_closed(3).is_tate_orientable(3));
        assert!(FieldDescriptor::algebraically_closed(3).is_tate_orientable(2));
    }

    #[test]
    fn builtin_catalog_round_trips() {
        let c = Catalog::builtin();
        let again = Catalog::from_json(&c.to_json()).unwrap();
        assert_eq!(c, again);
        assert!(c.get("complex").is_ok());
        assert!(matches!(c.get("nope"), Err(CoreError::UnknownName(_))));
        assert_eq!(c.resolve("finite:7").unwrap().characteristic(), 7);
        assert!(c.resolve("finite:6").is_err());
    }
}
