//! Stems of a Tate-orientable field as a completed sum of shifted synthetic stems.

use std::collections::BTreeMap;

use super::synthetic::{stem_sources, synthetic_stems, SyntheticChart, SyntheticSource};
use crate::error::{CoreError, Result};
use crate::graded::{AbGroupDesc, BigradedChart, ExtNat};
use crate::milnor::{free_basis, milnor_witt, FieldDescriptor};

/// The default source at `p`: the bundled table at 2, the engine elsewhere.
pub fn default_source(p: u64) -> Result<std::sync::Arc<dyn SyntheticSource>> {
    stem_sources().get(if p == 2 { "table" } else { "computed" })
}

/// Basis degrees of completed `K^MW(k)` over the completed unit.
pub fn kmw_basis(k: &FieldDescriptor, p: u64, radius: i64) -> Result<BTreeMap<i64, ExtNat>> {
    if !k.is_tate_orientable(p) {
        return Err(CoreError::NotTateOrientable(p));
    }
    if k.characteristic() == p {
        return Err(CoreError::Precondition(format!("`{}` has characteristic {p}", k.name)));
    }
    free_basis(&milnor_witt(k, (-radius, radius))?, p)
}

/// `⊕_d Σ^{-d,-d} π^syn` over the basis degrees `d`, completed degreewise.
///
/// Stems are kept where every summand is inside the synthetic window.
pub fn shifted_sum(syn: &SyntheticChart, basis: &BTreeMap<i64, ExtNat>) -> Result<BigradedChart> {
    let p = syn.prime;
    let top = basis.keys().copied().max().unwrap_or(0).max(0);
    let mut out = BigradedChart::new(syn.chart.label.clone(), Some(p));
    for (&d, &m) in basis {
        for (b, g) in syn.chart.iter() {
            let (i, j) = (b.i - d, b.j - d);
            if i > syn.stem_max - top {
                continue;
            }
            out.accumulate(i, j, &g.scale(m))?;
        }
    }
    let mut completed = out.complete(p)?;
    completed.label = format!("{} tensored with K^MW", syn.chart.label);
    Ok(completed)
}

pub fn tensor_formula(k: &FieldDescriptor, p: u64, stem_max: i64) -> Result<BigradedChart> {
    let basis = kmw_basis(k, p, stem_max.max(6))?;
    let syn = synthetic_stems(p, stem_max, default_source(p)?.as_ref())?;
    let mut out = shifted_sum(&syn, &basis)?;
    out.label = format!("stems of {} at {p}", k.name);
    Ok(out)
}

/// Diagonal entries `(m, m)` of a chart.
pub fn diagonal(chart: &BigradedChart, range: (i64, i64)) -> BTreeMap<i64, AbGroupDesc> {
    (range.0..=range.1).map(|m| (m, chart.get(m, m))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::{Catalog, CustomField, FieldVariant};
    use crate::stems::completed_zero_line;

    #[test]
    fn identity_cases() {
        for k in [FieldDescriptor::complex_like(), FieldDescriptor::algebraically_closed(7)] {
            let t = tensor_formula(&k, 3, 12).unwrap();
            let syn = synthetic_stems(3, 12, default_source(3).unwrap().as_ref()).unwrap();
            assert!(t.same_groups(&syn.chart));
        }
        assert!(matches!(
            tensor_formula(&FieldDescriptor::real_closed(), 2, 4),
            Err(CoreError::NotTateOrientable(2))
        ));
    }

    #[test]
    fn two_generator_basis() {
        let mut kmw = BTreeMap::new();
        kmw.insert(0, AbGroupDesc::free(1));
        kmw.insert(-1, AbGroupDesc::free(1));
        let custom = CustomField {
            characteristic: 0,
            milnor: BTreeMap::new(),
            witt: None,
            kmw: Some(kmw),
            roots_of_unity: BTreeMap::new(),
            roots_of_unity_default: ExtNat::Infinite,
        };
        let k = FieldDescriptor::new("two generators", FieldVariant::Custom(custom));
        let basis = kmw_basis(&k, 3, 6).unwrap();
        assert_eq!(basis.keys().copied().collect::<Vec<_>>(), vec![-1, 0]);
        let t = tensor_formula(&k, 3, 12).unwrap();
        let syn = synthetic_stems(3, 12, default_source(3).unwrap().as_ref()).unwrap();
        for (b, g) in syn.chart.iter() {
            let lifted = t.get(b.i + 1, b.j + 1);
            if b.i < 12 {
                let want = g.direct_sum(&syn.chart.get(b.i + 1, b.j + 1)).unwrap();
                assert!(lifted.same_group(&want), "at ({},{})", b.i + 1, b.j + 1);
            }
        }
        assert_eq!(t.complete(3).unwrap(), t);
    }

    #[test]
    fn diagonal_matches_completed_zero_line() {
        let cat = Catalog::builtin();
        for p in [2u64, 3, 5] {
            for k in cat.fields.iter() {
                if !k.is_tate_orientable(p) || k.characteristic() == p {
                    continue;
                }
                let t = tensor_formula(k, p, 12).unwrap();
                let z = completed_zero_line(k, p, (-5, 5)).unwrap();
                for m in -5..=5 {
                    assert!(t.get(m, m).same_group(&z.get(m, m)), "{} at p={p}, m={m}: {} vs {}", k.name, t.get(m, m), z.get(m, m));
                }
            }
        }
    }
}
