//! Sparse commutative polynomials with weighted truncation.

use std::collections::BTreeMap;
use std::fmt::{self, Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

/// Rational numbers used by the symbolic layers.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent vector; its length is the number of variables of the ambient ring.
pub type Mono = Vec<u16>;

pub trait Coeff: Num + Clone + Neg<Output = Self> + Debug {}
impl<T: Num + Clone + Neg<Output = T> + Debug> Coeff for T {}

/// Weights per variable and an inclusive bound; terms of larger weight are
/// discarded by truncating operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    pub weights: Vec<u32>,
    pub bound: u32,
}

impl Grading {
    pub fn new(weights: Vec<u32>, bound: u32) -> Self {
        Grading { weights, bound }
    }

    pub fn weight(&self, m: &[u16]) -> u32 {
        m.iter().zip(&self.weights).map(|(&e, &w)| e as u32 * w).sum()
    }

    pub fn keeps(&self, m: &[u16]) -> bool {
        self.weight(m) <= self.bound
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly<C> {
    nvars: usize,
    terms: BTreeMap<Mono, C>,
}

impl<C: Coeff> Poly<C> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut m = vec![0; nvars];
        m[idx] = 1;
        Self::monomial(m, C::one())
    }

    pub fn monomial(m: Mono, c: C) -> Self {
        let mut p = Self::zero(m.len());
        p.add_term(m, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u16]) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn add_term(&mut self, m: Mono, c: C) {
        debug_assert_eq!(m.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (m.clone(), x.clone() * c.clone())).collect() }
    }

    /// Product with terms above the grading bound dropped.
    pub fn mul_trunc(&self, other: &Self, g: &Grading) -> Self {
        let a: Vec<_> = self.terms.iter().map(|(m, c)| (m, c, g.weight(m))).collect();
        let b: Vec<_> = other.terms.iter().map(|(m, c)| (m, c, g.weight(m))).collect();
        let mut acc: BTreeMap<Mono, C> = BTreeMap::new();
        for (ma, ca, wa) in &a {
            for (mb, cb, wb) in &b {
                if wa + wb > g.bound {
                    continue;
                }
                let m: Mono = ma.iter().zip(mb.iter()).map(|(x, y)| x + y).collect();
                let c = (*ca).clone() * (*cb).clone();
                match acc.get_mut(&m) {
                    Some(v) => *v = v.clone() + c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly { nvars: self.nvars, terms: acc }
    }

    /// Untruncated product.
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_trunc(other, &Grading::new(vec![0; self.nvars], 0))
    }

    pub fn pow_trunc(&self, e: u32, g: &Grading) -> Self {
        let mut r = Self::one(self.nvars);
        for _ in 0..e {
            r = r.mul_trunc(self, g);
        }
        r
    }

    pub fn truncate(&self, g: &Grading) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| g.keeps(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Ring map sending variable `k` to `images[k]` (all over the target ring).
    pub fn substitute(&self, images: &[Poly<C>], target_nvars: usize, g: &Grading) -> Self {
        let mut powers: Vec<Vec<Poly<C>>> = vec![vec![Poly::one(target_nvars)]; self.nvars];
        let mut out = Poly::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target_nvars, c.clone());
            for (k, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[k].len() <= e as usize {
                    let next = powers[k].last().unwrap().mul_trunc(&images[k], g);
                    powers[k].push(next);
                }
                t = t.mul_trunc(&powers[k][e as usize], g);
                if t.is_zero() {
                    break;
                }
            }
            out.add_assign(&t);
        }
        out
    }

    /// Re-embeds into a ring with `new_nvars` variables, variable `k`
    /// landing on `k + offset`.
    pub fn embed(&self, new_nvars: usize, offset: usize) -> Self {
        let mut out = Poly::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut n = vec![0; new_nvars];
            n[offset..offset + self.nvars].copy_from_slice(m);
            out.add_term(n, c.clone());
        }
        out
    }

    /// Sets the variables in `vars` to zero.
    pub fn kill_vars(&self, vars: impl Fn(usize) -> bool) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.iter().enumerate().all(|(k, &e)| e == 0 || !vars(k)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Keeps variables `range` only, dropping terms that involve others.
    pub fn restrict(&self, start: usize, len: usize) -> Self {
        let mut out = Poly::zero(len);
        for (m, c) in &self.terms {
            if m.iter().enumerate().all(|(k, &e)| e == 0 || (start..start + len).contains(&k)) {
                out.add_term(m[start..start + len].to_vec(), c.clone());
            }
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Homogeneous components are assumed; returns the max weight of a term.
    pub fn max_weight(&self, g: &Grading) -> Option<u32> {
        self.terms.keys().map(|m| g.weight(m)).max()
    }

    pub fn format_with(&self, names: &dyn Fn(usize) -> String) -> String
    where
        C: Display,
    {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut coeff = format!("{c}");
            let negative = coeff.starts_with('-');
            if negative {
                coeff.remove(0);
            }
            if idx == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| if e == 1 { names(k) } else { format!("{}^{}", names(k), e) })
                .collect();
            if vars.is_empty() {
                s.push_str(&coeff);
            } else {
                if coeff != "1" {
                    s.push_str(&coeff);
                    s.push('*');
                }
                s.push_str(&vars.join("*"));
            }
        }
        s
    }
}

impl Poly<Q> {
    /// Whether every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Whether no denominator is divisible by `p`.
    pub fn is_p_integral(&self, p: u64) -> bool {
        let p = BigInt::from(p);
        self.terms.values().all(|c| !(c.denom() % &p).is_zero())
    }

    pub fn max_abs_denominator(&self) -> BigInt {
        self.terms.values().map(|c| c.denom().abs()).max().unwrap_or_else(BigInt::one)
    }
}

impl<C: Coeff + Display> Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&|k| format!("z{k}")))
    }
}

/// Parses the monomial syntax produced by [`Poly::format_with`]:
/// `-3/2*x1^2*x3 + x2 - 5`.
pub fn parse_poly(s: &str, names: &[String]) -> crate::Result<Poly<Q>> {
    use crate::CoreError;
    let n = names.len();
    let mut out = Poly::zero(n);
    let cleaned = s.replace(" - ", " + -").replace(' ', "");
    if cleaned == "0" {
        return Ok(out);
    }
    for term in cleaned.split('+').filter(|t| !t.is_empty()) {
        let (neg, body) = match term.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, term),
        };
        let mut coeff = q(1);
        let mut mono = vec![0u16; n];
        for factor in body.split('*') {
            if factor.chars().next().map(|c| c.is_ascii_digit()).unwrap_or(false) {
                let c = match factor.split_once('/') {
                    Some((a, b)) => Q::new(
                        a.parse::<BigInt>().map_err(|e| CoreError::Parse(e.to_string()))?,
                        b.parse::<BigInt>().map_err(|e| CoreError::Parse(e.to_string()))?,
                    ),
                    None => Q::from_integer(factor.parse::<BigInt>().map_err(|e| CoreError::Parse(e.to_string()))?),
                };
                coeff *= c;
            } else {
                let (name, e) = match factor.split_once('^') {
                    Some((a, b)) => (a, b.parse::<u16>().map_err(|e| CoreError::Parse(e.to_string()))?),
                    None => (factor, 1),
                };
                let k = names
                    .iter()
                    .position(|x| x == name)
                    .ok_or_else(|| CoreError::Parse(format!("unknown variable `{name}`")))?;
                mono[k] += e;
            }
        }
        out.add_term(mono, if neg { -coeff } else { coeff });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(k: usize) -> String {
        format!("x{}", k + 1)
    }

    #[test]
    fn arithmetic_and_truncation() {
        let x: Poly<Q> = Poly::var(2, 0);
        let y: Poly<Q> = Poly::var(2, 1);
        let s = x.add(&y);
        let g = Grading::new(vec![1, 1], 2);
        let sq = s.pow_trunc(3, &g);
        assert!(sq.is_zero());
        let sq = s.pow_trunc(2, &g);
        assert_eq!(sq.coeff(&[1, 1]), q(2));
        assert_eq!(s.sub(&s), Poly::zero(2));
    }

    #[test]
    fn substitution_is_a_ring_map() {
        let x: Poly<Q> = Poly::var(1, 0);
        let p = x.mul(&x).add(&Poly::constant(1, q(3)));
        let img = vec![Poly::var(2, 0).add(&Poly::var(2, 1))];
        let g = Grading::new(vec![1, 1], 10);
        let r = p.substitute(&img, 2, &g);
        assert_eq!(r.coeff(&[1, 1]), q(2));
        assert_eq!(r.constant_term(), q(3));
    }

    #[test]
    fn print_parse_roundtrip() {
        let mut p: Poly<Q> = Poly::zero(3);
        p.add_term(vec![2, 0, 1], q_frac(-3, 2));
        p.add_term(vec![0, 1, 0], q(1));
        p.add_term(vec![0, 0, 0], q(-5));
        let s = p.format_with(&names);
        let nm: Vec<String> = (0..3).map(names).collect();
        assert_eq!(parse_poly(&s, &nm).unwrap(), p);
    }
}
