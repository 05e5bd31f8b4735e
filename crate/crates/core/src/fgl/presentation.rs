//! Graded commutative rings given by generators, relations and a degree cap.

use serde::{Deserialize, Serialize};

use crate::poly::{Coeff, Grading, Poly, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Base {
    Integers,
    LocalAt { p: u64 },
    ModPrimePower { p: u64, k: u32 },
    PrimeField { p: u64 },
    Rationals,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    /// Algebraic degree (half the topological degree).
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedRingPresentation {
    pub base: Base,
    pub generators: Vec<Generator>,
    /// Homogeneous relations in the monomial syntax of [`crate::poly::parse_poly`].
    pub relations: Vec<String>,
    pub degree_bound: u32,
}

impl GradedRingPresentation {
    pub fn polynomial(base: Base, gens: Vec<(String, u32)>, degree_bound: u32) -> Self {
        GradedRingPresentation {
            base,
            generators: gens.into_iter().map(|(name, degree)| Generator { name, degree }).collect(),
            relations: Vec::new(),
            degree_bound,
        }
    }

    pub fn nvars(&self) -> usize {
        self.generators.len()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn grading(&self) -> Grading {
        Grading::new(self.degrees(), self.degree_bound)
    }

    pub fn format<C: Coeff + std::fmt::Display>(&self, p: &Poly<C>) -> String {
        let names = self.names();
        p.format_with(&|k| names[k].clone())
    }

    pub fn parse(&self, s: &str) -> crate::Result<Poly<Q>> {
        crate::poly::parse_poly(s, &self.names())
    }

    /// Monomials of exact degree `d` in the generators, in lexicographic order.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Vec<u16>> {
        monomials_of_degree(&self.degrees(), d)
    }

    /// Rank of the degree-`d` part of the polynomial ring (relations ignored).
    pub fn rank_in_degree(&self, d: u32) -> usize {
        self.monomials_of_degree(d).len()
    }

    /// Drops generators above `bound` and lowers the cap.
    pub fn truncated(&self, bound: u32) -> Self {
        GradedRingPresentation {
            base: self.base,
            generators: self.generators.iter().filter(|g| g.degree <= bound).cloned().collect(),
            relations: self.relations.clone(),
            degree_bound: bound,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }
}

/// All exponent vectors with `Σ e_k w_k = d`.
pub fn monomials_of_degree(weights: &[u32], d: u32) -> Vec<Vec<u16>> {
    fn rec(weights: &[u32], k: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if k == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[k];
        let max = left.checked_div(w).unwrap_or(0);
        for e in 0..=max {
            cur[k] = e as u16;
            rec(weights, k + 1, left - e * w, cur, out);
        }
        cur[k] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u16; weights.len()];
    rec(weights, 0, d, &mut cur, &mut out);
    out.sort();
    out
}
