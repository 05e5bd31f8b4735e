//! Free-summand extraction, full decomposition and ind-system classification.

use serde::{Deserialize, Serialize};

use super::linalg::{coordinates, standard_basis, Mat, Subspace, Vector};
use super::module::{FptModule, IndFptModule, Stabilization};
use crate::error::{CoreError, Result};
use crate::graded::ExtNat;

/// Outcome of the property check `ker tⁿ ⊆ im t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PnCheck {
    pub holds: bool,
    /// A vector killed by `tⁿ` that is not a multiple of `t`.
    pub counterexample: Option<Vector>,
}

pub fn satisfies_pn(m: &FptModule, n: u32) -> PnCheck {
    let kernel = m.torsion(n as u64);
    let image = m.divisible_by(1);
    let counterexample = kernel.basis().into_iter().find(|v| !image.contains(v));
    PnCheck { holds: counterexample.is_none(), counterexample }
}

/// Inclusion and retraction of one summand; `retraction * inclusion = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartWitness {
    pub exponent: u32,
    pub multiplicity: u32,
    pub inclusion: Vec<Vec<u64>>,
    pub retraction: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreePart {
    pub exponent: u32,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub p: u64,
    pub free_parts: Vec<FreePart>,
    pub divisible_rank: ExtNat,
    pub witnesses: Vec<PartWitness>,
}

impl Decomposition {
    pub fn zero(p: u64) -> Self {
        Decomposition { p, free_parts: Vec::new(), divisible_rank: ExtNat::ZERO, witnesses: Vec::new() }
    }

    /// `(exponent, multiplicity)` pairs.
    pub fn profile(&self) -> Vec<(u32, u32)> {
        self.free_parts.iter().map(|f| (f.exponent, f.multiplicity)).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("decomposition serializes")
    }

    /// Checks that each part splits off and that the parts exhaust the module.
    pub fn verify_witnesses(&self, m: &FptModule) -> Result<()> {
        let p = m.p;
        let mut total = Mat::zeros(p, m.dim, m.dim);
        let parts: Vec<(Mat, Mat)> = self
            .witnesses
            .iter()
            .map(|w| {
                let size = (w.exponent * w.multiplicity) as usize;
                (Mat::from_rows(p, &w.inclusion, size), Mat::from_rows(p, &w.retraction, m.dim))
            })
            .collect();
        for (a, (ia, ra)) in parts.iter().enumerate() {
            for (b, (ib, _)) in parts.iter().enumerate() {
                let prod = ra.mul(ib);
                let ok = if a == b { prod == Mat::identity(p, prod.rows) } else { prod.is_zero() };
                if !ok {
                    return Err(CoreError::Internal(format!("witnesses {a} and {b} do not split")));
                }
            }
            if m.t.mul(ia) != ia.mul(&FptModule::from_profile(p, &[(self.witnesses[a].exponent, self.witnesses[a].multiplicity)]).t) {
                return Err(CoreError::Internal(format!("inclusion {a} is not t-linear")));
            }
            let prod = ia.mul(ra);
            for (x, y) in total.data.iter_mut().zip(&prod.data) {
                *x = (*x + y) % p;
            }
        }
        if total != Mat::identity(p, m.dim) {
            return Err(CoreError::Internal("parts do not exhaust the module".into()));
        }
        Ok(())
    }
}

/// `M ≅ F ⊕ M′` with `F` free over `𝔽_p[t]/t^{n+1}`.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub free: FptModule,
    /// Rank of `free` over `𝔽_p[t]/t^{n+1}`.
    pub rank: u32,
    pub rest: FptModule,
    pub free_inclusion: Mat,
    pub free_retraction: Mat,
    pub rest_inclusion: Mat,
    pub rest_retraction: Mat,
}

fn combination(p: u64, coeffs: &[u64], vs: &[Vector], n: usize) -> Vector {
    let mut out = vec![0; n];
    for (c, v) in coeffs.iter().zip(vs) {
        if *c != 0 {
            out = super::linalg::add(p, &out, &super::linalg::scale(p, *c, v));
        }
    }
    out
}

/// Splits `M[t^{n+1}] → M/t^{n+1}` as in the basis construction for maps of
/// free `𝔽_p[t]/t^{n+1}`-modules, complements chosen by first pivots.
pub fn extract_free(m: &FptModule, n: u32) -> Result<Extraction> {
    let pn = satisfies_pn(m, n);
    if !pn.holds {
        return Err(CoreError::Precondition(format!("module does not satisfy P_{n}")));
    }
    let p = m.p;
    let e = n as usize + 1;
    let dim = m.dim;

    let a = m.torsion(e as u64);
    let ta = a.image(&m.t);
    let (g, _) = ta.complete_with(&a.basis());

    let quot = m.quotient(&m.divisible_by(e as u64));
    let b = &quot.module;
    let tb = b.divisible_by(1);
    let alpha: Vec<Vector> = g.iter().map(|v| quot.proj.apply(v)).collect();

    // G2: combinations of G landing in tB.
    let residues: Vec<Vector> = alpha.iter().map(|v| tb.reduce(v)).collect();
    let k = Mat::from_columns(p, b.dim, &residues).kernel();
    let g2: Vec<Vector> = k.iter().map(|c| combination(p, c, &g, dim)).collect();
    let (g1, _) = Subspace::span(p, dim, &g2).complete_with(&g);

    let alpha1: Vec<Vector> = g1.iter().map(|v| quot.proj.apply(v)).collect();
    let mut spanned = tb.clone();
    for v in &alpha1 {
        spanned.insert(v);
    }
    let (g3, _) = spanned.complete_with(&standard_basis(b.dim));

    let orbit = |v: &Vector, t: &Mat| -> Vec<Vector> {
        let mut out = vec![v.clone()];
        for _ in 1..e {
            let next = t.apply(out.last().unwrap());
            out.push(next);
        }
        out
    };
    let n1: Vec<Vector> = alpha1.iter().flat_map(|v| orbit(v, &b.t)).collect();
    let n2: Vec<Vector> = g3.iter().flat_map(|v| orbit(v, &b.t)).collect();
    let mut nbasis = n1.clone();
    nbasis.extend(n2.iter().cloned());
    if nbasis.len() != b.dim || Subspace::span(p, b.dim, &nbasis).dim() != b.dim {
        return Err(CoreError::Internal("quotient is not free on the chosen generators".into()));
    }

    let f_dim = n1.len();
    let rank = g1.len() as u32;
    let mut retraction = Mat::zeros(p, f_dim, dim);
    for (j, ej) in standard_basis(dim).iter().enumerate() {
        let c = coordinates(p, &nbasis, &quot.proj.apply(ej)).expect("basis of the quotient");
        for i in 0..f_dim {
            retraction.set(i, j, c[i]);
        }
    }
    let m1: Vec<Vector> = g1.iter().flat_map(|v| orbit(v, &m.t)).collect();
    let inclusion = Mat::from_columns(p, dim, &m1);
    if retraction.mul(&inclusion) != Mat::identity(p, f_dim) {
        return Err(CoreError::Internal("retraction does not split the free part".into()));
    }

    let rest_basis = Subspace::span(p, dim, &retraction.kernel()).basis();
    let rest = m.submodule(&rest_basis)?;
    let rest_inclusion = Mat::from_columns(p, dim, &rest_basis);
    let mut all = m1.clone();
    all.extend(rest_basis.iter().cloned());
    let mut rest_retraction = Mat::zeros(p, rest_basis.len(), dim);
    for (j, ej) in standard_basis(dim).iter().enumerate() {
        let c = coordinates(p, &all, ej)
            .ok_or_else(|| CoreError::Internal("free part and kernel do not span".into()))?;
        for i in 0..rest_basis.len() {
            rest_retraction.set(i, j, c[f_dim + i]);
        }
    }
    if !satisfies_pn(&rest, n + 1).holds {
        return Err(CoreError::Internal(format!("remainder fails P_{}", n + 1)));
    }
    Ok(Extraction {
        free: FptModule::from_profile(p, &[(e as u32, rank)]),
        rank,
        rest,
        free_inclusion: inclusion,
        free_retraction: retraction,
        rest_inclusion,
        rest_retraction,
    })
}

/// Peels free parts of exponent 1, 2, … until nothing is left.
pub fn decompose(m: &FptModule) -> Result<Decomposition> {
    let p = m.p;
    let mut out = Decomposition::zero(p);
    let mut cur = m.clone();
    let mut into_m = Mat::identity(p, m.dim);
    let mut from_m = Mat::identity(p, m.dim);
    let mut n = 0;
    while cur.dim > 0 {
        let ex = extract_free(&cur, n)?;
        if ex.rank > 0 {
            out.free_parts.push(FreePart { exponent: n + 1, multiplicity: ex.rank });
            out.witnesses.push(PartWitness {
                exponent: n + 1,
                multiplicity: ex.rank,
                inclusion: into_m.mul(&ex.free_inclusion).to_rows(),
                retraction: ex.free_retraction.mul(&from_m).to_rows(),
            });
        }
        into_m = into_m.mul(&ex.rest_inclusion);
        from_m = ex.rest_retraction.mul(&from_m);
        cur = ex.rest;
        n += 1;
    }
    out.verify_witnesses(m)?;
    Ok(out)
}

/// Dimension of `M[t] ∩ t^h M`.
pub(crate) fn socle_height_dim(m: &FptModule, h: u64) -> usize {
    m.torsion(1).intersect(&m.divisible_by(h)).dim()
}

/// Largest height of a nonzero socle vector, if any.
pub(crate) fn max_socle_height(m: &FptModule) -> Option<u64> {
    (0..=m.dim as u64).rev().find(|&h| socle_height_dim(m, h) > 0)
}

/// Stable free parts and Prüfer rank of the colimit of an ind-system.
pub fn classify_divisible(ind: &IndFptModule) -> Result<Decomposition> {
    ind.validate()?;
    let Some(last) = ind.stages.last() else {
        return Ok(Decomposition::zero(ind.p));
    };
    match ind.tail {
        Stabilization::Stationary => decompose(last),
        Stabilization::HeightGrowth => {
            let (h, _) = growth_window(ind)?;
            let mut out = Decomposition::zero(ind.p);
            for e in 1..=h {
                let c = socle_height_dim(last, e - 1) - socle_height_dim(last, e);
                if c > 0 {
                    out.free_parts.push(FreePart { exponent: e as u32, multiplicity: c as u32 });
                }
            }
            out.divisible_rank = ExtNat::Finite(socle_height_dim(last, h) as u64);
            Ok(out)
        }
    }
}

/// The cutoff height past which socle vectors of the last stage count as
/// infinitely divisible, together with the last stage.
pub(crate) fn growth_window(ind: &IndFptModule) -> Result<(u64, &FptModule)> {
    if ind.stages.len() < 2 {
        return Err(CoreError::Precondition("growth rule needs at least two stages".into()));
    }
    let k = ind.stages.len();
    let (prev, last) = (&ind.stages[k - 2], &ind.stages[k - 1]);
    if prev.torsion(1).dim() != last.torsion(1).dim() {
        return Err(CoreError::Precondition("socle has not stabilized on the explicit prefix".into()));
    }
    let h = max_socle_height(prev).map_or(0, |h| h + 1);
    Ok((h, last))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pn_examples() {
        for p in [2, 3] {
            assert!(satisfies_pn(&FptModule::cyclic(p, 3), 2).holds);
            let m = FptModule::from_profile(p, &[(2, 1), (1, 1)]);
            let c = satisfies_pn(&m, 1);
            assert!(!c.holds);
            assert_eq!(c.counterexample, Some(vec![0, 0, 1]));
            assert!(satisfies_pn(&m, 0).holds);
        }
    }

    #[test]
    fn extraction_examples() {
        let m = FptModule::from_profile(5, &[(1, 1), (3, 1)]);
        let ex = extract_free(&m, 0).unwrap();
        assert_eq!(ex.rank, 1);
        assert_eq!(ex.rest.rank_profile(), vec![(3, 1)]);
        let free = FptModule::from_profile(3, &[(2, 3)]);
        let ex = extract_free(&free, 1).unwrap();
        assert_eq!((ex.rank, ex.rest.dim), (3, 0));
        let ex = extract_free(&FptModule::zero(2), 0).unwrap();
        assert_eq!((ex.rank, ex.rest.dim), (0, 0));
        let bad = FptModule::from_profile(2, &[(2, 1), (1, 1)]);
        assert!(extract_free(&bad, 1).unwrap_err().is_precondition());
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(&FptModule::cyclic(2, 4)).unwrap();
        assert_eq!(d.profile(), vec![(4, 1)]);
        assert!(decompose(&FptModule::zero(3)).unwrap().free_parts.is_empty());
        let m = FptModule::from_profile(3, &[(1, 2), (3, 1), (2, 2)]);
        let d = decompose(&m).unwrap();
        assert_eq!(d.profile(), vec![(1, 2), (2, 2), (3, 1)]);
        let round: Decomposition = serde_json::from_str(&d.to_json()).unwrap();
        assert_eq!(round, d);
    }

    #[test]
    fn ind_examples() {
        let c = IndFptModule::constant(FptModule::cyclic(3, 2));
        let d = classify_divisible(&c).unwrap();
        assert_eq!((d.profile(), d.divisible_rank), (vec![(2, 1)], ExtNat::ZERO));
        let d = classify_divisible(&IndFptModule::t_power_inclusions(2, 5)).unwrap();
        assert_eq!((d.profile(), d.divisible_rank), (vec![], ExtNat::ONE));
        let e = IndFptModule { p: 2, stages: vec![], maps: vec![], tail: Stabilization::HeightGrowth };
        assert_eq!(classify_divisible(&e).unwrap(), Decomposition::zero(2));
        let mut bad = IndFptModule::t_power_inclusions(2, 3);
        bad.maps[0] = Mat::zeros(2, 2, 1);
        assert!(classify_divisible(&bad).is_err());
        let json = IndFptModule::t_power_inclusions(3, 3).to_json();
        assert_eq!(IndFptModule::from_json(&json).unwrap().stages.len(), 3);
    }

    #[test]
    fn ind_mixed_growth() {
        // 𝔽_p[t]/t² ⊕ 𝔽_p[t]/t^k with the second summand growing.
        let p = 3;
        let stages: Vec<FptModule> = (3..=6).map(|k| FptModule::from_profile(p, &[(2, 1), (k, 1)])).collect();
        let maps = (3..6)
            .map(|k: usize| {
                let mut f = Mat::zeros(p, k + 3, k + 2);
                f.set(0, 0, 1);
                f.set(1, 1, 1);
                for i in 0..k {
                    f.set(2 + i + 1, 2 + i, 1);
                }
                f
            })
            .collect();
        let ind = IndFptModule::new(p, stages, maps, Stabilization::HeightGrowth).unwrap();
        let d = classify_divisible(&ind).unwrap();
        assert_eq!((d.profile(), d.divisible_rank), (vec![(2, 1)], ExtNat::ONE));
    }
}
