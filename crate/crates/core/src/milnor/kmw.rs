//! Milnor–Witt K-theory as a fiber product, its (p,η)-completion, and
//! free bases over the completed unit.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::field::{FieldDescriptor, FieldVariant};
use super::rules::{milnor_k, witt_data};
use crate::error::{CoreError, Result};
use crate::graded::{AbGroupDesc, Coefficients, ExtNat};

pub type Graded = BTreeMap<i64, AbGroupDesc>;

/// Image and kernel of multiplication by η from degree `n+1` to degree `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtaAction {
    pub image: AbGroupDesc,
    pub kernel: AbGroupDesc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMWChart {
    pub field: FieldDescriptor,
    /// Inclusive degree range.
    pub range: (i64, i64),
    pub completed_at: Option<u64>,
    pub kmw: Graded,
    /// Legs of the fiber product; `I^n` is `W` for `n ≤ 0`.
    pub milnor: Graded,
    pub witt_powers: Graded,
    pub milnor_mod2: Graded,
    /// Keyed by the target degree `n` of `η: K^MW_{n+1} → K^MW_n`.
    pub eta: BTreeMap<i64, EtaAction>,
    /// Groups taken from a custom table rather than assembled.
    pub from_table: bool,
}

impl KMWChart {
    pub fn get(&self, n: i64) -> AbGroupDesc {
        self.kmw.get(&n).cloned().unwrap_or_default()
    }
}

fn is_free_only(g: &AbGroupDesc) -> bool {
    g.torsion.is_empty() && g.divisible_rank.is_zero() && g.unlisted_torsion_outside.is_none()
}

fn is_divisible_only(g: &AbGroupDesc) -> bool {
    g.free_rank.is_zero() && g.torsion.is_empty() && g.unlisted_torsion_outside.is_none()
}

/// `2G`, the kernel of `G → G/2`.
pub fn doubled(g: &AbGroupDesc) -> Result<AbGroupDesc> {
    if let Some(l) = &g.unlisted_torsion_outside {
        if !l.contains(&2) {
            return Err(CoreError::Unsupported("2G undetermined: 2-torsion not listed".into()));
        }
    }
    let mut out = AbGroupDesc { torsion: BTreeMap::new(), ..g.clone() };
    for (&o, &m) in &g.torsion {
        if o % 2 == 0 {
            if o > 2 {
                out.add_torsion(o / 2, m);
            }
        } else {
            out.add_torsion(o, m);
        }
    }
    Ok(out)
}

/// Pullback of the surjections `K → k ← I` on descriptors, where `k = K/2`
/// and `I → k` has kernel `I_next`.
pub fn fiber_product(k: &AbGroupDesc, k_mod2: &AbGroupDesc, i: &AbGroupDesc, i_next: &AbGroupDesc) -> Result<AbGroupDesc> {
    if k_mod2.is_zero() {
        return k.direct_sum(i);
    }
    if i_next.is_zero() {
        return Ok(k.clone());
    }
    let twice = doubled(k)?;
    if twice.is_zero() {
        return Ok(i.clone());
    }
    if is_free_only(i) || is_divisible_only(&twice) {
        return twice.direct_sum(i);
    }
    Err(CoreError::Unsupported("fiber product does not match a catalogued splitting rule".into()))
}

/// Order bookkeeping `|P|·|k| = |K|·|I|` when every group involved is finite.
pub fn fiber_orders_consistent(p: &AbGroupDesc, k: &AbGroupDesc, k_mod2: &AbGroupDesc, i: &AbGroupDesc) -> Option<bool> {
    let (op, ok, om, oi) = (p.order()?, k.order()?, k_mod2.order()?, i.order()?);
    Some(op * om == ok * oi)
}

/// `K^MW_n(k)` for `n` in `range`.
pub fn milnor_witt(k: &FieldDescriptor, range: (i64, i64)) -> Result<KMWChart> {
    let (lo, hi) = range;
    if lo > hi {
        return Err(CoreError::Precondition(format!("empty range {lo}..{hi}")));
    }
    let table = match &k.variant {
        FieldVariant::Custom(t) => t.kmw.as_ref(),
        _ => None,
    };
    if let Some(table) = table {
        return Ok(from_kmw_table(k, range, table));
    }
    let witt = witt_data(k)?;
    let km = milnor_k(k, hi.max(0) + 1)?;
    let mut c = KMWChart {
        field: k.clone(),
        range,
        completed_at: None,
        kmw: Graded::new(),
        milnor: Graded::new(),
        witt_powers: Graded::new(),
        milnor_mod2: Graded::new(),
        eta: BTreeMap::new(),
        from_table: false,
    };
    for n in lo..=hi {
        if n >= 0 {
            c.milnor.insert(n, km[&n].clone());
            c.milnor_mod2.insert(n, witt.k_mod2(n));
        }
        c.witt_powers.insert(n, witt.i_power(n));
    }
    for n in lo..=hi {
        let g = match n {
            n if n < 0 => witt.w.clone(),
            0 => witt.gw.clone(),
            n => {
                let (kn, kn2, i, inext) = (&km[&n], witt.k_mod2(n), witt.i_power(n), witt.i_power(n + 1));
                let g = fiber_product(kn, &kn2, &i, &inext)?;
                if fiber_orders_consistent(&g, kn, &kn2, &i) == Some(false) {
                    return Err(CoreError::Internal(format!("fiber product order mismatch in degree {n}")));
                }
                g
            }
        };
        c.kmw.insert(n, g);
    }
    for n in lo..hi {
        let action = match n {
            n if n < -1 => EtaAction { image: witt.w.clone(), kernel: AbGroupDesc::zero() },
            // GW → W, kernel spanned by the hyperbolic form.
            -1 => EtaAction { image: witt.w.clone(), kernel: AbGroupDesc::free(1) },
            n => EtaAction { image: witt.i_power(n + 1), kernel: doubled(&km[&(n + 1)])? },
        };
        c.eta.insert(n, action);
    }
    c.kmw.retain(|_, g| !g.is_zero());
    Ok(c)
}

/// A tabulated `K^MW`; the Milnor and Witt legs are filled in when the
/// field also tabulates them.
fn from_kmw_table(k: &FieldDescriptor, range: (i64, i64), table: &Graded) -> KMWChart {
    let (lo, hi) = range;
    let mut c = KMWChart {
        field: k.clone(),
        range,
        completed_at: None,
        kmw: (lo..=hi).filter_map(|n| table.get(&n).filter(|g| !g.is_zero()).map(|g| (n, g.clone()))).collect(),
        milnor: Graded::new(),
        witt_powers: Graded::new(),
        milnor_mod2: Graded::new(),
        eta: BTreeMap::new(),
        from_table: true,
    };
    if let Ok(km) = milnor_k(k, hi.max(0)) {
        c.milnor = km.into_iter().filter(|(n, _)| *n >= lo).collect();
    }
    if let Ok(witt) = witt_data(k) {
        for n in lo..=hi {
            if n >= 0 {
                c.milnor_mod2.insert(n, witt.k_mod2(n));
            }
            c.witt_powers.insert(n, witt.i_power(n));
        }
    }
    c
}

/// Naive (p,η)-completion.
///
/// At odd p the η-periodic summand disappears: what remains is completed
/// Milnor K-theory in non-negative degrees. At p = 2 negative degrees carry
/// the completed Witt group and positive degrees the pullback of the
/// completed legs.
pub fn complete_kmw(c: &KMWChart, p: u64) -> Result<KMWChart> {
    if let Some(q) = c.completed_at {
        if q != p {
            return Err(CoreError::PrimeMismatch(q, p));
        }
    }
    let mut out = c.clone();
    out.completed_at = Some(p);
    out.milnor = complete_all(&c.milnor, p)?;
    out.witt_powers = complete_all(&c.witt_powers, p)?;
    out.milnor_mod2 = complete_all(&c.milnor_mod2, p)?;
    if c.from_table {
        out.kmw = complete_all(&c.kmw, p)?;
        out.eta.clear();
        return Ok(out);
    }
    let (lo, hi) = c.range;
    let zero = AbGroupDesc::zero();
    let mut kmw = Graded::new();
    let mut eta = BTreeMap::new();
    for n in lo..=hi {
        let km = out.milnor.get(&n).unwrap_or(&zero);
        let g = if p != 2 {
            if n < 0 {
                AbGroupDesc::zero()
            } else {
                km.clone()
            }
        } else if n < 0 {
            out.witt_powers.get(&n).cloned().unwrap_or_default()
        } else if n == 0 {
            // GW = ℤ ⊕ I additively.
            let i = c.witt_powers.get(&1).cloned().unwrap_or_else(|| i_power_of(c, 1));
            AbGroupDesc::free(1).complete(2)?.direct_sum(&i.complete(2)?)?
        } else {
            let i = &out.witt_powers.get(&n).cloned().unwrap_or_default();
            let inext = c.witt_powers.get(&(n + 1)).cloned().unwrap_or_else(|| i_power_of(c, n + 1)).complete(2)?;
            fiber_product(km, out.milnor_mod2.get(&n).unwrap_or(&zero), i, &inext)?
        };
        kmw.insert(n, g);
    }
    for n in lo..hi {
        let action = if p != 2 {
            EtaAction { image: AbGroupDesc::zero(), kernel: kmw[&(n + 1)].clone() }
        } else {
            match c.eta.get(&n) {
                Some(a) => EtaAction { image: a.image.complete(2)?, kernel: a.kernel.complete(2)? },
                None => continue,
            }
        };
        eta.insert(n, action);
    }
    kmw.retain(|_, g| !g.is_zero());
    out.kmw = kmw;
    out.eta = eta;
    Ok(out)
}

fn i_power_of(c: &KMWChart, n: i64) -> AbGroupDesc {
    witt_data(&c.field).map(|w| w.i_power(n)).unwrap_or_default()
}

fn complete_all(g: &Graded, p: u64) -> Result<Graded> {
    let mut out = Graded::new();
    for (&n, d) in g {
        let c = d.complete(p)?;
        if !c.is_zero() {
            out.insert(n, c);
        }
    }
    Ok(out)
}

/// The completed unit `π_0` at p: `ℤ_p` in degree 0, and at p = 2 also a
/// `ℤ/2` in every negative degree.
pub fn unit_degree(p: u64, n: i64) -> AbGroupDesc {
    let zp = AbGroupDesc::free_over(ExtNat::ONE, Coefficients::Complete(p));
    match n {
        0 => zp,
        n if n < 0 && p == 2 => AbGroupDesc::cyclic(2),
        _ => AbGroupDesc::zero(),
    }
}

/// `⊕ shifts of the completed unit` over a basis, on `lo..=hi`.
pub fn sum_of_shifted_units(basis: &BTreeMap<i64, ExtNat>, p: u64, range: (i64, i64)) -> Result<Graded> {
    let mut out = Graded::new();
    for n in range.0..=range.1 {
        let mut g = AbGroupDesc::zero();
        for (&d, &m) in basis {
            g = g.direct_sum(&unit_degree(p, n - d).scale(m))?;
        }
        if !g.is_zero() {
            out.insert(n, g);
        }
    }
    Ok(out)
}

/// Degrees (with multiplicity) of a basis of completed `K^MW` over the
/// completed unit, peeled off from the top degree down.
pub fn free_basis(c: &KMWChart, p: u64) -> Result<BTreeMap<i64, ExtNat>> {
    if !c.field.is_tate_orientable(p) {
        return Err(CoreError::NotTateOrientable(p));
    }
    let completed = if c.completed_at == Some(p) { c.clone() } else { complete_kmw(c, p)? };
    let (lo, hi) = completed.range;
    let mut basis = BTreeMap::new();
    let mut above = ExtNat::ZERO;
    for n in (lo..=hi).rev() {
        let g = completed.get(n);
        let free_ok = g.free_rank.is_zero() || g.coefficients == Coefficients::Complete(p);
        if !free_ok || !g.divisible_rank.is_zero() || g.unlisted_torsion_outside.is_some() {
            return Err(CoreError::Internal(format!("completed degree {n} is not free: {g}")));
        }
        let expected_torsion: BTreeMap<u64, ExtNat> =
            if p == 2 && !above.is_zero() { [(2, above)].into_iter().collect() } else { BTreeMap::new() };
        if g.torsion != expected_torsion {
            return Err(CoreError::Internal(format!("completed degree {n} is not free over the unit: {g}")));
        }
        if !g.free_rank.is_zero() {
            basis.insert(n, g.free_rank);
            above = above + g.free_rank;
        }
    }
    let rebuilt = sum_of_shifted_units(&basis, p, (lo, hi))?;
    let same = rebuilt.len() == completed.kmw.len()
        && rebuilt.iter().all(|(n, g)| completed.kmw.get(n).is_some_and(|h| h.same_group(g)));
    if !same {
        return Err(CoreError::Internal("free basis does not rebuild the completed chart".into()));
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::Catalog;

    #[test]
    fn complex_kmw_and_completions() {
        let c = milnor_witt(&FieldDescriptor::complex_like(), (-4, 4)).unwrap();
        assert_eq!(c.get(0), AbGroupDesc::free(1));
        assert_eq!(c.get(-1), AbGroupDesc::cyclic(2));
        assert_eq!(c.get(2), AbGroupDesc::divisible(ExtNat::Infinite));
        let c2 = complete_kmw(&c, 2).unwrap();
        for n in -4..0 {
            assert_eq!(c2.get(n), AbGroupDesc::cyclic(2));
        }
        assert_eq!(c2.get(0), unit_degree(2, 0));
        assert!(c2.get(1).is_zero());
        let c3 = complete_kmw(&c, 3).unwrap();
        assert_eq!(c3.kmw.len(), 1);
        assert_eq!(c3.get(0), unit_degree(3, 0));
        assert_eq!(complete_kmw(&c2, 2).unwrap(), c2);
        assert!(complete_kmw(&c2, 3).is_err());
    }

    #[test]
    fn real_closed_degree_zero() {
        let c = milnor_witt(&FieldDescriptor::real_closed(), (-2, 3)).unwrap();
        assert_eq!(c.get(0), AbGroupDesc::free(2));
        assert_eq!(c.get(-1), AbGroupDesc::free(1));
        // ℤ ⊕ D: the ℤ/2 of K^M is glued to I^n.
        assert_eq!(c.get(2), AbGroupDesc::free(1).direct_sum(&AbGroupDesc::divisible(ExtNat::Infinite)).unwrap());
    }

    #[test]
    fn finite_field_fiber_products() {
        for q in [3u64, 5, 7, 9, 11, 13] {
            let c = milnor_witt(&FieldDescriptor::finite(q), (-2, 4)).unwrap();
            assert_eq!(c.get(1), AbGroupDesc::cyclic(q - 1));
            assert!(c.get(2).is_zero());
            assert_eq!(c.get(0), AbGroupDesc::free(1).with_torsion(2, 1));
        }
    }

    #[test]
    fn bases() {
        let cat = Catalog::builtin();
        let one = |d: i64| -> BTreeMap<i64, ExtNat> { [(d, ExtNat::ONE)].into_iter().collect() };
        let c = milnor_witt(&FieldDescriptor::complex_like(), (-5, 5)).unwrap();
        assert_eq!(free_basis(&c, 3).unwrap(), one(0));
        assert_eq!(free_basis(&c, 2).unwrap(), one(0));
        let a = milnor_witt(&FieldDescriptor::algebraically_closed(7), (-5, 5)).unwrap();
        assert_eq!(free_basis(&a, 3).unwrap(), one(0));
        let l = milnor_witt(cat.get("complex_laurent").unwrap(), (-5, 5)).unwrap();
        let two: BTreeMap<i64, ExtNat> = [(0, ExtNat::ONE), (1, ExtNat::ONE)].into_iter().collect();
        assert_eq!(free_basis(&l, 2).unwrap(), two);
        assert_eq!(free_basis(&l, 5).unwrap(), two);
        let f = milnor_witt(&FieldDescriptor::finite(7), (-2, 2)).unwrap();
        assert!(matches!(free_basis(&f, 3), Err(CoreError::NotTateOrientable(3))));
        for name in ["F3(mu_2^inf)", "F5(mu_3^inf)", "F7(mu_5^inf)"] {
            let field = cat.get(name).unwrap();
            let FieldVariant::CyclotomicTower { p, .. } = field.variant else { panic!() };
            let c = milnor_witt(field, (-5, 5)).unwrap();
            assert_eq!(free_basis(&c, p).unwrap(), one(0), "{name}");
        }
    }

    #[test]
    fn doubling() {
        let g = AbGroupDesc::cyclic(12).direct_sum(&AbGroupDesc::free(1)).unwrap();
        assert_eq!(doubled(&g).unwrap(), AbGroupDesc::cyclic(6).direct_sum(&AbGroupDesc::free(1)).unwrap());
        assert!(doubled(&AbGroupDesc::cyclic(2)).unwrap().is_zero());
    }
}
