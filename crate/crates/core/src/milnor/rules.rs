//! Closed-form Milnor K-theory and Witt data, one rule set per field variant.

use std::sync::Arc;

use super::field::{tower_base_degree, FieldDescriptor, FieldVariant, WittData};
use crate::arith::{pow_mod, valuation};
use crate::error::{CoreError, Result};
use crate::graded::{AbGroupDesc, ExtNat};
use crate::registry::Registry;

pub trait FieldRules: Send + Sync {
    /// `K^M_n(k)` for `n ≥ 0`.
    fn milnor_k(&self, k: &FieldDescriptor, n: i64) -> Result<AbGroupDesc>;
    /// Witt data; only called for characteristic other than 2.
    fn witt(&self, k: &FieldDescriptor) -> Result<WittData>;
}

fn z2() -> AbGroupDesc {
    AbGroupDesc::cyclic(2)
}

/// Witt data of a finite field of odd order q.
fn finite_witt(q: u64) -> WittData {
    let w = if q % 4 == 1 { AbGroupDesc::zero().with_torsion(2, 2) } else { AbGroupDesc::cyclic(4) };
    WittData {
        gw: AbGroupDesc::free(1).with_torsion(2, 1),
        w,
        i_powers: vec![z2(), AbGroupDesc::zero()],
        milnor_mod2: vec![z2(), z2(), AbGroupDesc::zero()],
    }
}

/// Witt data of a quadratically closed field.
fn quadratically_closed_witt() -> WittData {
    WittData {
        gw: AbGroupDesc::free(1),
        w: z2(),
        i_powers: vec![AbGroupDesc::zero()],
        milnor_mod2: vec![z2(), AbGroupDesc::zero()],
    }
}

struct FiniteRules;
struct AlgClosedRules;
struct RealClosedRules;
struct TowerRules;
struct CustomRules;

impl FieldRules for FiniteRules {
    fn milnor_k(&self, k: &FieldDescriptor, n: i64) -> Result<AbGroupDesc> {
        let FieldVariant::Finite { q } = k.variant else { unreachable!() };
        Ok(match n {
            0 => AbGroupDesc::free(1),
            1 => AbGroupDesc::cyclic(q - 1),
            _ => AbGroupDesc::zero(),
        })
    }

    fn witt(&self, k: &FieldDescriptor) -> Result<WittData> {
        let FieldVariant::Finite { q } = k.variant else { unreachable!() };
        Ok(finite_witt(q))
    }
}

impl FieldRules for AlgClosedRules {
    fn milnor_k(&self, _k: &FieldDescriptor, n: i64) -> Result<AbGroupDesc> {
        Ok(if n == 0 { AbGroupDesc::free(1) } else { AbGroupDesc::divisible(ExtNat::Infinite) })
    }

    fn witt(&self, _k: &FieldDescriptor) -> Result<WittData> {
        Ok(quadratically_closed_witt())
    }
}

impl FieldRules for RealClosedRules {
    fn milnor_k(&self, _k: &FieldDescriptor, n: i64) -> Result<AbGroupDesc> {
        // {-1}^n spans a ℤ/2; the remaining symbols are divisible.
        Ok(if n == 0 { AbGroupDesc::free(1) } else { z2().direct_sum(&AbGroupDesc::divisible(ExtNat::Infinite))? })
    }

    fn witt(&self, _k: &FieldDescriptor) -> Result<WittData> {
        Ok(WittData {
            gw: AbGroupDesc::free(2),
            w: AbGroupDesc::free(1),
            i_powers: vec![AbGroupDesc::free(1)],
            milnor_mod2: vec![z2()],
        })
    }
}

impl FieldRules for TowerRules {
    fn milnor_k(&self, k: &FieldDescriptor, n: i64) -> Result<AbGroupDesc> {
        let FieldVariant::CyclotomicTower { base, p, .. } = &k.variant else { unreachable!() };
        let FieldVariant::Finite { q } = base.variant else { unreachable!() };
        Ok(match n {
            0 => AbGroupDesc::free(1),
            1 => {
                // Units are the roots of unity: μ_{p^∞} is divisible, the
                // 2-part is fixed along the odd-degree tower, and other primes
                // appear without bound.
                let mut g = AbGroupDesc::divisible(ExtNat::ONE);
                let mut listed = vec![*p];
                if *p != 2 && q % 2 == 1 {
                    let d = tower_base_degree(q, *p);
                    let v = two_adic_units(q, d);
                    g.add_torsion(1 << v, ExtNat::ONE);
                    listed.push(2);
                } else if *p != 2 {
                    listed.push(2);
                }
                listed.sort_unstable();
                g.unlisted_torsion_outside = Some(listed);
                g
            }
            _ => AbGroupDesc::zero(),
        })
    }

    fn witt(&self, k: &FieldDescriptor) -> Result<WittData> {
        let FieldVariant::CyclotomicTower { base, p, .. } = &k.variant else { unreachable!() };
        let FieldVariant::Finite { q } = base.variant else { unreachable!() };
        if *p == 2 {
            return Ok(quadratically_closed_witt());
        }
        let d = tower_base_degree(q, *p);
        Ok(finite_witt(pow_mod(q, d, 4)))
    }
}

/// `v_2(q^d - 1)` for odd q.
fn two_adic_units(q: u64, d: u64) -> u32 {
    let mut m: u64 = 2;
    let mut v = 0;
    while v < 62 && pow_mod(q % m, d, m) == 1 {
        v += 1;
        m <<= 1;
    }
    debug_assert!(v >= 1 || valuation(q, 2) > 0);
    v
}

fn stable_lookup(t: &std::collections::BTreeMap<i64, AbGroupDesc>, n: i64) -> AbGroupDesc {
    t.range(..=n).next_back().map(|(_, g)| g.clone()).unwrap_or_default()
}

impl FieldRules for CustomRules {
    fn milnor_k(&self, k: &FieldDescriptor, n: i64) -> Result<AbGroupDesc> {
        let FieldVariant::Custom(c) = &k.variant else { unreachable!() };
        if c.milnor.is_empty() {
            return Err(CoreError::Unsupported(format!("field `{}` has no Milnor K table", k.name)));
        }
        Ok(stable_lookup(&c.milnor, n))
    }

    fn witt(&self, k: &FieldDescriptor) -> Result<WittData> {
        let FieldVariant::Custom(c) = &k.variant else { unreachable!() };
        c.witt.clone().ok_or_else(|| CoreError::Unsupported(format!("field `{}` has no Witt table", k.name)))
    }
}

pub fn field_rules() -> Registry<dyn FieldRules> {
    let mut r: Registry<dyn FieldRules> = Registry::new();
    r.register("finite", Arc::new(FiniteRules));
    r.register("algebraically_closed", Arc::new(AlgClosedRules));
    r.register("complex_like", Arc::new(AlgClosedRules));
    r.register("real_closed", Arc::new(RealClosedRules));
    r.register("cyclotomic_tower", Arc::new(TowerRules));
    r.register("custom", Arc::new(CustomRules));
    r
}

/// `K^M_n(k)` for `0 ≤ n ≤ n_max`.
pub fn milnor_k(k: &FieldDescriptor, n_max: i64) -> Result<std::collections::BTreeMap<i64, AbGroupDesc>> {
    k.validate()?;
    let rules = field_rules().get(k.variant_name())?;
    (0..=n_max).map(|n| Ok((n, rules.milnor_k(k, n)?))).collect()
}

pub fn witt_data(k: &FieldDescriptor) -> Result<WittData> {
    k.validate()?;
    if k.characteristic() == 2 {
        return Err(CoreError::Precondition(format!("`{}` has characteristic 2", k.name)));
    }
    field_rules().get(k.variant_name())?.witt(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::Catalog;

    #[test]
    fn finite_field_values() {
        let k = milnor_k(&FieldDescriptor::finite(5), 4).unwrap();
        assert_eq!(k[&0], AbGroupDesc::free(1));
        assert_eq!(k[&1], AbGroupDesc::cyclic(4));
        assert!(k[&2].is_zero() && k[&4].is_zero());
        assert_eq!(witt_data(&FieldDescriptor::finite(7)).unwrap().w, AbGroupDesc::cyclic(4));
        assert!(witt_data(&FieldDescriptor::finite(8)).is_err());
    }

    #[test]
    fn closed_fields_are_divisible() {
        for f in [FieldDescriptor::complex_like(), FieldDescriptor::algebraically_closed(5)] {
            let k = milnor_k(&f, 5).unwrap();
            for n in 1..=5 {
                for p in [2, 3, 7] {
                    assert!(k[&n].mod_p(p).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn tower_units() {
        let t = FieldDescriptor::cyclotomic_tower(FieldDescriptor::finite(5), 3);
        let k1 = &milnor_k(&t, 1).unwrap()[&1];
        // 𝔽_25^× has 2-part of order 8.
        assert_eq!(k1.complete(2).unwrap(), AbGroupDesc::cyclic(8));
        assert!(k1.complete(3).unwrap().is_zero());
        assert!(k1.complete(7).is_err());
        // 25 ≡ 1 mod 4.
        assert_eq!(witt_data(&t).unwrap().w, AbGroupDesc::zero().with_torsion(2, 2));
    }

    #[test]
    fn custom_tables_are_echoed() {
        let c = Catalog::builtin();
        let f = c.get("complex_laurent").unwrap();
        let k = milnor_k(f, 4).unwrap();
        let FieldVariant::Custom(t) = &f.variant else { panic!() };
        for n in 0..=2 {
            assert_eq!(k[&n], t.milnor[&n]);
        }
        assert_eq!(k[&4], t.milnor[&2]);
    }
}
