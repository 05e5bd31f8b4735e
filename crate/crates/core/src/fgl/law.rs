//! Formal group laws and truncated power series over graded rings.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use serde::Serialize;

use super::presentation::{Base, GradedRingPresentation};
use crate::arith::binomial;
use crate::error::{CoreError, Result};
use crate::poly::{q, Grading, Poly, Q};

/// One-variable series: entry `k` is the coefficient of `x^k`.
pub type Series1 = Vec<Poly<Q>>;

pub(crate) fn s1_zero(nvars: usize, order: u32) -> Series1 {
    vec![Poly::zero(nvars); order as usize + 1]
}

pub(crate) fn s1_x(nvars: usize, order: u32) -> Series1 {
    let mut s = s1_zero(nvars, order);
    s[1] = Poly::one(nvars);
    s
}

pub(crate) fn s1_mul(a: &Series1, b: &Series1) -> Series1 {
    let n = a.len();
    let nv = a[0].nvars();
    let g = Grading::new(vec![0; nv], 0);
    let mut out = vec![Poly::zero(nv); n];
    for i in 0..n {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..n - i {
            if b[j].is_zero() {
                continue;
            }
            let t = a[i].mul_trunc(&b[j], &g);
            out[i + j].add_assign(&t);
        }
    }
    out
}

/// `f(g(x))` for `g` without constant term.
pub(crate) fn s1_compose(f: &Series1, g: &Series1) -> Series1 {
    let nv = f[0].nvars();
    let order = f.len() as u32 - 1;
    let mut out = s1_zero(nv, order);
    // Horner: (((f_N g + f_{N-1}) g + ...) g + f_0)
    for k in (0..f.len()).rev() {
        out = s1_mul(&out, g);
        out[0].add_assign(&f[k]);
    }
    out
}

/// Compositional inverse of a series `x + O(x^2)`.
pub(crate) fn s1_reverse(f: &Series1) -> Series1 {
    let nv = f[0].nvars();
    let order = f.len() as u32 - 1;
    let mut g = s1_x(nv, order);
    for _ in 0..order {
        // g <- x - (f(g) - g)
        let fg = s1_compose(f, &g);
        let mut next = s1_x(nv, order);
        for k in 0..g.len() {
            let corr = fg[k].sub(&g[k]);
            next[k] = next[k].sub(&corr);
        }
        g = next;
    }
    g
}

/// Multiplicative inverse of a series with constant term 1.
pub(crate) fn s1_reciprocal(f: &Series1) -> Series1 {
    let nv = f[0].nvars();
    let order = f.len() as u32 - 1;
    let mut inv = s1_zero(nv, order);
    inv[0] = Poly::one(nv);
    for n in 1..f.len() {
        let mut acc = Poly::zero(nv);
        for k in 1..=n {
            acc.add_assign(&f[k].mul(&inv[n - k]));
        }
        inv[n] = acc.neg();
    }
    inv
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Sum,
    Inverse,
    Log,
    Exp,
}

impl std::str::FromStr for SeriesOp {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(SeriesOp::Sum),
            "inverse" => Ok(SeriesOp::Inverse),
            "log" => Ok(SeriesOp::Log),
            "exp" => Ok(SeriesOp::Exp),
            o => Err(CoreError::UnknownName(o.into())),
        }
    }
}

/// A power series in `series_vars` with coefficients in a graded ring,
/// truncated above total series degree `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    pub ring: GradedRingPresentation,
    pub series_vars: Vec<String>,
    pub order: u32,
    /// Series exponent vector -> ring coefficient.
    pub coeffs: BTreeMap<Vec<u16>, Poly<Q>>,
}

impl TruncatedSeries {
    fn from_s1(ring: &GradedRingPresentation, var: &str, s: &Series1) -> Self {
        let coeffs = s
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (vec![k as u16], c.clone()))
            .collect();
        TruncatedSeries { ring: ring.clone(), series_vars: vec![var.into()], order: s.len() as u32 - 1, coeffs }
    }

    pub fn coeff(&self, exps: &[u16]) -> Poly<Q> {
        self.coeffs.get(exps).cloned().unwrap_or_else(|| Poly::zero(self.ring.nvars()))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut keys: Vec<_> = self.coeffs.keys().collect();
        keys.sort_by_key(|k| (k.iter().map(|&e| e as u32).sum::<u32>(), std::cmp::Reverse((*k).clone())));
        for k in keys {
            let c = self.ring.format(&self.coeffs[k]);
            let mono: Vec<String> = k
                .iter()
                .zip(&self.series_vars)
                .filter(|(&e, _)| e > 0)
                .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            parts.push(if c == "1" { mono.join("*") } else { format!("({c})*{}", mono.join("*")) });
        }
        write!(f, "{} + O({})", if parts.is_empty() { "0".into() } else { parts.join(" + ") }, self.order + 1)
    }
}

/// `F(x, y) = Σ a_ij x^i y^j`, stored for `i + j <= degree_bound + 1`
/// so that every coefficient up to the ring's degree cap is present.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalGroupLaw {
    pub ring: GradedRingPresentation,
    pub coeffs: BTreeMap<(u32, u32), Poly<Q>>,
}

#[derive(Serialize)]
struct FglJson<'a> {
    ring: &'a GradedRingPresentation,
    coefficients: Vec<FglCoeffJson>,
}

#[derive(Serialize)]
struct FglCoeffJson {
    i: u32,
    j: u32,
    value: String,
}

impl FormalGroupLaw {
    /// Series order: the largest total degree kept in x and y.
    pub fn order(&self) -> u32 {
        self.ring.degree_bound + 1
    }

    pub fn coeff(&self, i: u32, j: u32) -> Poly<Q> {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(|| Poly::zero(self.ring.nvars()))
    }

    pub fn additive(ring: GradedRingPresentation) -> Self {
        let n = ring.nvars();
        let mut coeffs = BTreeMap::new();
        coeffs.insert((1, 0), Poly::one(n));
        coeffs.insert((0, 1), Poly::one(n));
        FormalGroupLaw { ring, coeffs }
    }

    /// `x + y + xy`.
    pub fn multiplicative(ring: GradedRingPresentation) -> Self {
        let mut f = Self::additive(ring);
        let n = f.ring.nvars();
        f.coeffs.insert((1, 1), Poly::one(n));
        f
    }

    /// The law `exp(log x + log y)` for `log x = x + Σ_k m_k x^{k+1}`.
    /// `log_coeffs[k]` holds `m_k` (index 0 unused).
    pub fn from_log(ring: GradedRingPresentation, log_coeffs: &[Poly<Q>]) -> Self {
        let nv = ring.nvars();
        let order = ring.degree_bound + 1;
        let n = order as usize;
        let mut log = s1_x(nv, order);
        for k in 1..n {
            if let Some(m) = log_coeffs.get(k) {
                log[k + 1] = m.clone();
            }
        }
        let exp = s1_reverse(&log);
        // powers[r][i] = [x^i] log(x)^r
        let mut powers: Vec<Series1> = vec![{
            let mut one = s1_zero(nv, order);
            one[0] = Poly::one(nv);
            one
        }];
        for r in 1..=n {
            let next = s1_mul(&powers[r - 1], &log);
            powers.push(next);
        }
        let mut coeffs = BTreeMap::new();
        for i in 0..=n {
            for j in 0..=n - i {
                if i + j == 0 {
                    continue;
                }
                let mut a = Poly::zero(nv);
                for k in 1..=i + j {
                    if exp[k].is_zero() {
                        continue;
                    }
                    let mut inner = Poly::zero(nv);
                    for r in 0..=k {
                        let (li, lj) = (&powers[r][i], &powers[k - r][j]);
                        if li.is_zero() || lj.is_zero() {
                            continue;
                        }
                        let b = q(binomial(k as u64, r as u64) as i64);
                        inner.add_assign(&li.mul(lj).scale(&b));
                    }
                    a.add_assign(&exp[k].mul(&inner));
                }
                if !a.is_zero() {
                    coeffs.insert((i as u32, j as u32), a);
                }
            }
        }
        FormalGroupLaw { ring, coeffs }
    }

    /// `F` as a polynomial in (ring generators, x, y).
    fn as_poly(&self, nser: usize, xi: usize, yi: usize) -> Poly<Q> {
        let nv = self.ring.nvars();
        let mut out = Poly::zero(nv + nser);
        for (&(i, j), c) in &self.coeffs {
            let mut bump = vec![0u16; nv + nser];
            bump[nv + xi] += i as u16;
            bump[nv + yi] += j as u16;
            for (m, v) in c.terms() {
                let mut mm = bump.clone();
                mm[..nv].copy_from_slice(m);
                out.add_term(mm, v.clone());
            }
        }
        out
    }

    /// Checks unitality, commutativity and associativity up to the order.
    pub fn verify_axioms(&self) -> Result<()> {
        let n = self.order();
        let nv = self.ring.nvars();
        for (&(i, j), c) in &self.coeffs {
            if j == 0 && !(i == 1 && *c == Poly::one(nv)) || i == 0 && !(j == 1 && *c == Poly::one(nv)) {
                return Err(CoreError::Internal(format!("unitality fails at a_{i}{j}")));
            }
            if self.coeff(j, i) != *c {
                return Err(CoreError::Internal(format!("commutativity fails at a_{i}{j}")));
            }
        }
        if self.coeff(1, 0) != Poly::one(nv) || self.coeff(0, 1) != Poly::one(nv) {
            return Err(CoreError::Internal("linear term is not x + y".into()));
        }
        let g = Grading::new([vec![0; nv], vec![1; 3]].concat(), n);
        // c_i(t) = Σ_j a_ij t^j as polynomials in the three-variable ring.
        let column = |i: u32, var: usize, row: bool| -> Poly<Q> {
            let mut out = Poly::zero(nv + 3);
            for (&(a, b), c) in &self.coeffs {
                let (fixed, free) = if row { (a, b) } else { (b, a) };
                if fixed != i {
                    continue;
                }
                let mut bump = vec![0u16; nv + 3];
                bump[nv + var] = free as u16;
                for (m, v) in c.terms() {
                    let mut mm = bump.clone();
                    mm[..nv].copy_from_slice(m);
                    out.add_term(mm, v.clone());
                }
            }
            out
        };
        let horner = |inner: &Poly<Q>, var: usize, row: bool| -> Poly<Q> {
            let mut acc = Poly::zero(nv + 3);
            for i in (0..=n).rev() {
                acc = acc.mul_trunc(inner, &g);
                acc.add_assign(&column(i, var, row));
            }
            acc
        };
        let fxy = self.as_poly(3, 0, 1);
        let fyz = self.as_poly(3, 1, 2);
        // F(F(x,y), z): powers of u = F(x,y), remaining variable z.
        let left = horner(&fxy, 2, true);
        // F(x, F(y,z)): powers of w = F(y,z), remaining variable x.
        let right = horner(&fyz, 0, false);
        if left != right {
            let diff = left.sub(&right);
            return Err(CoreError::Internal(format!("associativity fails: {} discrepant terms", diff.len())));
        }
        Ok(())
    }

    fn is_rational(&self) -> bool {
        self.ring.base == Base::Rationals
    }

    /// Logarithm coefficients over ℚ: entry `k` is the coefficient of
    /// `x^{k+1}` (entry 0 unused). Valid for torsion-free bases.
    pub fn log_coeffs_rational(&self) -> Series1 {
        let nv = self.ring.nvars();
        let order = self.order();
        // log'(x) = 1 / F_y(x, 0)
        let mut fy = s1_zero(nv, order);
        for i in 0..=order as usize {
            fy[i] = self.coeff(i as u32, 1);
        }
        let d = s1_reciprocal(&fy);
        let mut out = vec![Poly::zero(nv); order as usize];
        for k in 1..order as usize {
            out[k] = d[k].scale(&Q::new(One::one(), (k as i64 + 1).into()));
        }
        out
    }

    fn log_series(&self) -> Series1 {
        let nv = self.ring.nvars();
        let order = self.order();
        let m = self.log_coeffs_rational();
        let mut s = s1_x(nv, order);
        if m.len() > 1 {
            s[2..=m.len()].clone_from_slice(&m[1..]);
        }
        s
    }

    pub fn series(&self, op: SeriesOp) -> Result<TruncatedSeries> {
        let nv = self.ring.nvars();
        let order = self.order();
        match op {
            SeriesOp::Sum => {
                let coeffs = self
                    .coeffs
                    .iter()
                    .map(|(&(i, j), c)| (vec![i as u16, j as u16], c.clone()))
                    .collect();
                Ok(TruncatedSeries { ring: self.ring.clone(), series_vars: vec!["x".into(), "y".into()], order, coeffs })
            }
            SeriesOp::Inverse => {
                // i = -x - Σ_{(a,b) ≠ (1,0),(0,1)} a_ab x^a i^b, iterated.
                let x = s1_x(nv, order);
                let mut inv = x.iter().map(|c| c.neg()).collect::<Series1>();
                for _ in 0..order {
                    let mut powers_i = vec![{
                        let mut one = s1_zero(nv, order);
                        one[0] = Poly::one(nv);
                        one
                    }];
                    for b in 1..=order as usize {
                        let nx = s1_mul(&powers_i[b - 1], &inv);
                        powers_i.push(nx);
                    }
                    let mut next = x.iter().map(|c| c.neg()).collect::<Series1>();
                    for (&(a, b), c) in &self.coeffs {
                        if (a, b) == (1, 0) || (a, b) == (0, 1) {
                            continue;
                        }
                        let pb = &powers_i[b as usize];
                        for k in 0..=order as usize {
                            if k + a as usize > order as usize || pb[k].is_zero() {
                                continue;
                            }
                            let t = c.mul(&pb[k]);
                            next[k + a as usize] = next[k + a as usize].sub(&t);
                        }
                    }
                    inv = next;
                }
                Ok(TruncatedSeries::from_s1(&self.ring, "x", &inv))
            }
            SeriesOp::Log | SeriesOp::Exp => {
                if !self.is_rational() {
                    return Err(CoreError::Precondition(
                        "log/exp need a rational coefficient base; base-change first".into(),
                    ));
                }
                let log = self.log_series();
                let s = if op == SeriesOp::Log { log } else { s1_reverse(&log) };
                Ok(TruncatedSeries::from_s1(&self.ring, "x", &s))
            }
        }
    }

    /// Same coefficients, read over ℚ.
    pub fn base_change_rational(&self) -> Self {
        let mut f = self.clone();
        f.ring.base = Base::Rationals;
        f
    }

    /// Forgets generators above `bound` (sending them to zero) and truncates.
    pub fn truncated(&self, bound: u32) -> Self {
        let keep: Vec<usize> =
            (0..self.ring.nvars()).filter(|&k| self.ring.generators[k].degree <= bound).collect();
        let ring = self.ring.truncated(bound);
        let mut coeffs = BTreeMap::new();
        for (&(i, j), c) in &self.coeffs {
            if i + j > bound + 1 {
                continue;
            }
            let mut out = Poly::zero(keep.len());
            for (m, v) in c.terms() {
                if m.iter().enumerate().any(|(k, &e)| e > 0 && !keep.contains(&k)) {
                    continue;
                }
                out.add_term(keep.iter().map(|&k| m[k]).collect(), v.clone());
            }
            if !out.is_zero() {
                coeffs.insert((i, j), out);
            }
        }
        FormalGroupLaw { ring, coeffs }
    }

    pub fn to_json(&self) -> String {
        let coefficients = self
            .coeffs
            .iter()
            .map(|(&(i, j), c)| FglCoeffJson { i, j, value: self.ring.format(c) })
            .collect();
        serde_json::to_string_pretty(&FglJson { ring: &self.ring, coefficients }).expect("fgl serializes")
    }

    /// True when every coefficient has no denominator divisible by any prime
    /// (for `p = None`) or by `p`.
    pub fn coefficients_integral(&self, p: Option<u64>) -> bool {
        self.coeffs.values().all(|c| match p {
            None => c.is_integral(),
            Some(p) => c.is_p_integral(p),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q_frac;

    fn point(base: Base, bound: u32) -> GradedRingPresentation {
        GradedRingPresentation::polynomial(base, vec![], bound)
    }

    #[test]
    fn additive_inverse_is_negation() {
        let f = FormalGroupLaw::additive(point(Base::Integers, 5));
        let inv = f.series(SeriesOp::Inverse).unwrap();
        assert_eq!(inv.coeffs.len(), 1);
        assert_eq!(inv.coeff(&[1]).constant_term(), q(-1));
        f.verify_axioms().unwrap();
    }

    #[test]
    fn multiplicative_log_is_alternating_harmonic() {
        let f = FormalGroupLaw::multiplicative(point(Base::Rationals, 5));
        f.verify_axioms().unwrap();
        let log = f.series(SeriesOp::Log).unwrap();
        for n in 1..=6i64 {
            let sign = if n % 2 == 1 { 1 } else { -1 };
            assert_eq!(log.coeff(&[n as u16]).constant_term(), q_frac(sign, n));
        }
        let inv = f.series(SeriesOp::Inverse).unwrap();
        // x + i + x i = 0  =>  i = -x + x^2 - x^3 + ...
        assert_eq!(inv.coeff(&[3]).constant_term(), q(-1));
    }

    #[test]
    fn exp_log_roundtrip_to_bound_five() {
        let f = FormalGroupLaw::multiplicative(point(Base::Rationals, 5));
        let log = f.series(SeriesOp::Log).unwrap();
        let exp = f.series(SeriesOp::Exp).unwrap();
        let as_s1 = |s: &TruncatedSeries| -> Series1 {
            (0..=s.order).map(|k| s.coeff(&[k as u16])).collect()
        };
        let comp = s1_compose(&as_s1(&exp), &as_s1(&log));
        assert_eq!(comp, s1_x(0, 6));
    }

    #[test]
    fn log_needs_rational_base() {
        let f = FormalGroupLaw::multiplicative(point(Base::Integers, 3));
        assert!(f.series(SeriesOp::Log).is_err());
        assert!(f.base_change_rational().series(SeriesOp::Exp).is_ok());
    }
}
