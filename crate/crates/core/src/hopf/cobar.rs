//! The cobar complex `C^s = Γ^{⊗_A s}` and its differential.

use std::collections::HashMap;

use num_traits::One;

use super::algebroid::HopfAlgebroid;
use super::linalg::SparseMatrix;
use crate::error::{CoreError, Result};
use crate::fgl::presentation::monomials_of_degree;
use crate::poly::{Grading, Mono, Poly, Q};

pub struct CobarComplex<'a> {
    pub algebroid: &'a HopfAlgebroid,
    pub normalized: bool,
    pub s_max: u32,
    pub t_max: u32,
    /// `cofaces[s][i]`: generator images of the i-th coface out of `C^s`.
    cofaces: Vec<Vec<Vec<Poly<Q>>>>,
}

/// Differential matrices for one internal degree.
#[derive(Debug, Clone)]
pub struct CobarSlice {
    pub t: u32,
    /// `bases[s]` for `s = 0..=s_max + 1`.
    pub bases: Vec<Vec<Mono>>,
    /// `differentials[s]`: `C^s → C^{s+1}`, columns indexed by `bases[s]`.
    pub differentials: Vec<SparseMatrix>,
}

impl<'a> CobarComplex<'a> {
    pub fn new(h: &'a HopfAlgebroid, s_max: u32, t_max: u32, normalized: bool) -> Result<Self> {
        if t_max > 2 * h.degree_bound {
            return Err(CoreError::BoundOverflow { requested: t_max, bound: 2 * h.degree_bound });
        }
        let (na, ng) = (h.na(), h.ng());
        let mut cofaces = Vec::new();
        for s in 0..=(s_max as usize + 1) {
            let n = na + (s + 1) * ng;
            let g = h.grading(s + 1);
            let block = |f: usize| -> Vec<Poly<Q>> { (0..ng).map(|k| Poly::var(n, na + f * ng + k)).collect() };
            // push[j]: an A generator sitting right of factor j, in normal form.
            let mut push: Vec<Vec<Poly<Q>>> = vec![(0..na).map(|k| Poly::var(n, k)).collect()];
            for j in 0..=s {
                let mut images = push[j].clone();
                images.extend(block(j));
                push.push(h.eta_right.iter().map(|e| e.substitute(&images, n, &g)).collect());
            }
            let mut faces = Vec::new();
            for i in 0..=s + 1 {
                let mut images: Vec<Poly<Q>> = if i == 0 { push[1].clone() } else { push[0].clone() };
                for f in 0..s {
                    if f + 1 < i {
                        images.extend(block(f));
                    } else if f + 1 == i {
                        let mut sub = push[f].clone();
                        sub.extend(block(f));
                        sub.extend(block(f + 1));
                        images.extend(h.coproduct.iter().map(|d| d.substitute(&sub, n, &g)));
                    } else {
                        images.extend(block(f + 1));
                    }
                }
                faces.push(images);
            }
            cofaces.push(faces);
        }
        Ok(CobarComplex { algebroid: h, normalized, s_max, t_max, cofaces })
    }

    fn weights(&self, s: usize) -> Vec<u32> {
        let h = self.algebroid;
        let mut w = h.a.degrees();
        for _ in 0..s {
            w.extend(h.gamma.degrees());
        }
        w
    }

    fn has_unit_factor(&self, s: usize, m: &[u16]) -> bool {
        let (na, ng) = (self.algebroid.na(), self.algebroid.ng());
        (0..s).any(|f| m[na + f * ng..na + (f + 1) * ng].iter().all(|&e| e == 0))
    }

    /// Monomial basis of `C^s` in internal degree `t`.
    pub fn basis(&self, s: u32, t: u32) -> Vec<Mono> {
        if t % 2 == 1 {
            return Vec::new();
        }
        let s = s as usize;
        let mut b = monomials_of_degree(&self.weights(s), t / 2);
        if self.normalized {
            b.retain(|m| !self.has_unit_factor(s, m));
        }
        b
    }

    /// Differential on an element of `C^s`.
    pub fn apply_d(&self, s: u32, x: &Poly<Q>) -> Result<Poly<Q>> {
        let s = s as usize;
        if s >= self.cofaces.len() {
            return Err(CoreError::BoundOverflow { requested: s as u32, bound: self.cofaces.len() as u32 - 1 });
        }
        let h = self.algebroid;
        let n = h.na() + (s + 1) * h.ng();
        let g: Grading = h.grading(s + 1);
        let mut out = Poly::zero(n);
        for (i, images) in self.cofaces[s].iter().enumerate() {
            let face = x.substitute(images, n, &g);
            if i % 2 == 0 {
                out.add_assign(&face);
            } else {
                out = out.sub(&face);
            }
        }
        if self.normalized {
            let x_normal = x.terms().all(|(m, _)| !self.has_unit_factor(s, m));
            let degenerate = out.terms().any(|(m, _)| self.has_unit_factor(s + 1, m));
            if x_normal && degenerate {
                return Err(CoreError::Internal("normalized cobar differential left degenerate terms".into()));
            }
        }
        Ok(out)
    }

    /// Differentials `C^s → C^{s+1}` for `s ≤ s_max` in degree `t`, each basis
    /// element also checked to satisfy `d∘d = 0`.
    pub fn slice(&self, t: u32) -> Result<CobarSlice> {
        let h = self.algebroid;
        let top = self.s_max + 1;
        let bases: Vec<Vec<Mono>> = (0..=top).map(|s| self.basis(s, t)).collect();
        let mut differentials = Vec::new();
        for s in 0..=self.s_max {
            let src = &bases[s as usize];
            let tgt = &bases[s as usize + 1];
            let index: HashMap<&Mono, usize> = tgt.iter().enumerate().map(|(k, m)| (m, k)).collect();
            let mut mat = SparseMatrix::new(tgt.len(), src.len());
            let n = h.na() + s as usize * h.ng();
            for (c, m) in src.iter().enumerate() {
                let e = Poly::monomial(m.clone(), Q::one());
                debug_assert_eq!(e.nvars(), n);
                let de = self.apply_d(s, &e)?;
                if !self.apply_d(s + 1, &de)?.is_zero() {
                    return Err(CoreError::Internal(format!("d∘d ≠ 0 on a basis element of C^{s} at t={t}")));
                }
                for (tm, v) in de.terms() {
                    let r = *index
                        .get(tm)
                        .ok_or_else(|| CoreError::Internal("differential left the cobar basis".into()))?;
                    mat.columns[c].push((r, v.clone()));
                }
            }
            differentials.push(mat);
        }
        Ok(CobarSlice { t, bases, differentials })
    }

    /// Human-readable form of a basis monomial, e.g. `v1[t1|t1^2]`.
    pub fn format_basis_element(&self, s: u32, m: &[u16]) -> String {
        let h = self.algebroid;
        let (na, ng) = (h.na(), h.ng());
        let word = |names: &[String], exps: &[u16]| -> String {
            let parts: Vec<String> = exps
                .iter()
                .zip(names)
                .filter(|(e, _)| **e > 0)
                .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
                .collect();
            if parts.is_empty() { "1".into() } else { parts.join("*") }
        };
        let a = word(&h.a.names(), &m[..na]);
        let factors: Vec<String> =
            (0..s as usize).map(|f| word(&h.gamma.names(), &m[na + f * ng..na + (f + 1) * ng])).collect();
        let prefix = if a == "1" { String::new() } else { a };
        format!("{prefix}[{}]", factors.join("|"))
    }
}

/// Normalized cobar complex.
pub fn cobar_complex(h: &HopfAlgebroid, s_max: u32, t_max: u32) -> Result<CobarComplex<'_>> {
    CobarComplex::new(h, s_max, t_max, true)
}
