//! The universal formal group law over the Lazard ring.
//!
//! Built over ℚ[m₁, m₂, …] from the generic logarithm
//! `log x = x + Σ m_k x^{k+1}`, then rewritten in integral generators
//! `x_n`. Each `x_n` is an integer combination of the coefficients
//! `a_{k, n+1-k}`; modulo decomposables `a_{k, n+1-k} ≡ -C(n+1, k) m_n`, so
//! the combination is chosen by a running extended gcd over `k = 1, 2, …`
//! making the `m_n` coefficient of `x_n` equal to `+gcd_k C(n+1, k)`.

use std::collections::BTreeMap;

use super::law::FormalGroupLaw;
use super::presentation::{Base, GradedRingPresentation};
use crate::arith::{binomial, ext_gcd};
use crate::error::{CoreError, Result};
use crate::poly::{q, Grading, Poly, Q};

/// Everything produced while building the universal law.
#[derive(Debug, Clone)]
pub struct LazardData {
    pub bound: u32,
    /// `a_ij` as polynomials in the log coefficients `m_1..m_bound`.
    pub a_in_m: BTreeMap<(u32, u32), Poly<Q>>,
    /// `x_n` (index n-1) as a polynomial in the `m`'s.
    pub x_in_m: Vec<Poly<Q>>,
    /// `m_n` (index n-1) as a polynomial in the `x`'s.
    pub m_in_x: Vec<Poly<Q>>,
    /// `x_n = Σ c · a_{i,j}` as (i, j, c) triples.
    pub change_of_basis: Vec<Vec<(u32, u32, i64)>>,
    /// `gcd_k C(n+1, k)`: p when n+1 is a power of p, else 1.
    pub leading: Vec<i64>,
}

pub fn lazard_ring(bound: u32) -> GradedRingPresentation {
    GradedRingPresentation::polynomial(Base::Integers, (1..=bound).map(|i| (format!("x{i}"), i)).collect(), bound)
}

fn log_ring(bound: u32) -> GradedRingPresentation {
    GradedRingPresentation::polynomial(Base::Rationals, (1..=bound).map(|i| (format!("m{i}"), i)).collect(), bound)
}

/// Integer coefficients `c_k` with `Σ_k c_k C(n+1, k) = gcd`, k = 1..⌊(n+1)/2⌋.
fn bezout_binomials(n: u32) -> (Vec<(u32, i64)>, i64) {
    let ks: Vec<u32> = (1..=n.div_ceil(2)).collect();
    let mut g = binomial(n as u64 + 1, ks[0] as u64) as i64;
    let mut coefs = vec![1i64];
    for &k in &ks[1..] {
        let b = binomial(n as u64 + 1, k as u64) as i64;
        let (g2, s, t) = ext_gcd(g, b);
        for c in coefs.iter_mut() {
            *c *= s;
        }
        coefs.push(t);
        g = g2;
    }
    (ks.into_iter().zip(coefs).collect(), g)
}

pub fn lazard_data(bound: u32) -> Result<LazardData> {
    if bound == 0 {
        return Err(CoreError::Precondition("bound must be >= 1".into()));
    }
    let mring = log_ring(bound);
    let nv = bound as usize;
    let m_vars: Vec<Poly<Q>> = std::iter::once(Poly::zero(nv)).chain((0..nv).map(|k| Poly::var(nv, k))).collect();
    let generic = FormalGroupLaw::from_log(mring.clone(), &m_vars);
    let a_in_m = generic.coeffs.clone();
    let g = mring.grading();

    let mut x_in_m = Vec::new();
    let mut change_of_basis = Vec::new();
    let mut leading = Vec::new();
    for n in 1..=bound {
        let (coefs, d) = bezout_binomials(n);
        // Σ c_k (-C(n+1,k)) m_n = -d m_n, so negate to get +d.
        let mut x = Poly::zero(nv);
        let mut record = Vec::new();
        for (k, c) in coefs {
            if c == 0 {
                continue;
            }
            let a = generic.coeff(k, n + 1 - k);
            x.add_assign(&a.scale(&q(-c)));
            record.push((k, n + 1 - k, -c));
        }
        let mut lead = vec![0u16; nv];
        lead[n as usize - 1] = 1;
        if x.coeff(&lead) != q(d) {
            return Err(CoreError::Internal(format!("Lazard generator x{n} has wrong leading coefficient")));
        }
        x_in_m.push(x);
        change_of_basis.push(record);
        leading.push(d);
    }

    // m_n = (x_n - R_n(m_1..m_{n-1})) / d_n, solved upward.
    let mut m_in_x: Vec<Poly<Q>> = Vec::new();
    for n in 1..=nv {
        let mut lead = vec![0u16; nv];
        lead[n - 1] = 1;
        let d = q(leading[n - 1]);
        let mut rest = x_in_m[n - 1].clone();
        rest.add_term(lead, -d.clone());
        let mut images = m_in_x.clone();
        images.resize(nv, Poly::zero(nv));
        let rest_x = rest.substitute(&images, nv, &g);
        let m_n = Poly::var(nv, n - 1).sub(&rest_x).scale(&(Q::from_integer(1.into()) / d));
        m_in_x.push(m_n);
    }
    Ok(LazardData { bound, a_in_m, x_in_m, m_in_x, change_of_basis, leading })
}

/// Lazard ring on `x_1..x_bound` and the universal law written in it.
pub fn universal_fgl(bound: u32) -> Result<(GradedRingPresentation, FormalGroupLaw)> {
    let data = lazard_data(bound)?;
    universal_from_data(&data)
}

pub fn universal_from_data(data: &LazardData) -> Result<(GradedRingPresentation, FormalGroupLaw)> {
    let ring = lazard_ring(data.bound);
    let nv = ring.nvars();
    let g: Grading = ring.grading();
    let mut coeffs = BTreeMap::new();
    for (&(i, j), a) in &data.a_in_m {
        let ax = a.substitute(&data.m_in_x, nv, &g);
        if !ax.is_integral() {
            return Err(CoreError::Internal(format!("a_{i}{j} is not integral in the chosen generators")));
        }
        if !ax.is_zero() {
            coeffs.insert((i, j), ax);
        }
    }
    let fgl = FormalGroupLaw { ring: ring.clone(), coeffs };
    Ok((ring, fgl))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::law::SeriesOp;

    #[test]
    fn bound_one_is_x_plus_y_minus_x1_xy() {
        let (ring, f) = universal_fgl(1).unwrap();
        assert_eq!(ring.nvars(), 1);
        assert_eq!(ring.format(&f.coeff(1, 1)), "-x1");
        f.verify_axioms().unwrap();
    }

    #[test]
    fn leading_coefficients_detect_prime_powers() {
        let d = lazard_data(8).unwrap();
        assert_eq!(d.leading, vec![2, 3, 2, 5, 1, 7, 2, 3]);
    }

    #[test]
    fn axioms_hold_for_small_bounds() {
        for b in 1..=5 {
            let (_, f) = universal_fgl(b).unwrap();
            f.verify_axioms().unwrap();
            assert!(f.coefficients_integral(None));
            assert_eq!(f.coeff(1, 2), f.coeff(2, 1));
        }
    }

    #[test]
    fn truncation_matches_smaller_bound() {
        let (_, f5) = universal_fgl(5).unwrap();
        let (_, f3) = universal_fgl(3).unwrap();
        assert_eq!(f5.truncated(3), f3);
    }

    #[test]
    fn rationally_isomorphic_to_additive() {
        // log_F(F(x, y)) = log_F(x) + log_F(y), with log_F read in m-coordinates.
        let data = lazard_data(4).unwrap();
        let generic = FormalGroupLaw { ring: log_ring(4), coeffs: data.a_in_m.clone() };
        let log = generic.series(SeriesOp::Log).unwrap();
        for k in 1..=4u16 {
            assert_eq!(log.coeff(&[k + 1]), Poly::var(4, k as usize - 1));
        }
    }
}
