//! p-typical formal group laws in Hazewinkel generators.
//!
//! The p-typical logarithm keeps only the `x^{p^i}` terms; its coefficients
//! `ℓ_i` are tied to generators `v_i` (degree `p^i - 1`) by
//! `p ℓ_n = Σ_{i<n} ℓ_i v_{n-i}^{p^i}`.

use super::law::FormalGroupLaw;
use super::presentation::{Base, GradedRingPresentation};
use crate::error::{CoreError, Result};
use crate::poly::{q, Grading, Poly, Q};

/// `ℓ_0..ℓ_count` in a ring whose variable `offset + i - 1` is `v_i`.
pub fn hazewinkel_logs(p: u64, count: usize, nvars: usize, offset: usize, g: &Grading) -> Vec<Poly<Q>> {
    let mut logs = vec![Poly::one(nvars)];
    let inv_p = Q::new(1.into(), (p as i64).into());
    for n in 1..=count {
        let mut acc = Poly::zero(nvars);
        for i in 0..n {
            let v = Poly::var(nvars, offset + n - i - 1);
            let vp = v.pow_trunc(p.pow(i as u32) as u32, g);
            acc.add_assign(&logs[i].mul_trunc(&vp, g));
        }
        logs.push(acc.scale(&inv_p));
    }
    logs
}

/// Number of Hazewinkel generators with `p^i - 1 <= bound`.
pub fn generator_count(p: u64, bound: u32) -> usize {
    let mut m = 0;
    while p.pow(m as u32 + 1) - 1 <= bound as u64 {
        m += 1;
    }
    m
}

pub fn ptypical_ring(p: u64, bound: u32) -> GradedRingPresentation {
    let m = generator_count(p, bound);
    GradedRingPresentation::polynomial(
        Base::LocalAt { p },
        (1..=m).map(|i| (format!("v{i}"), (p.pow(i as u32) - 1) as u32)).collect(),
        bound,
    )
}

#[derive(Debug, Clone)]
pub struct PTypical {
    pub ring: GradedRingPresentation,
    pub fgl: FormalGroupLaw,
    /// `ℓ_0..ℓ_m` in the `v` generators.
    pub logs: Vec<Poly<Q>>,
    /// Image of `v_n` (index n-1) in the input law's ring: the map
    /// classifying the p-typicalization of the input law.
    pub classifying: Vec<Poly<Q>>,
}

/// The universal p-typical law up to `bound`, together with the map from
/// its coefficient ring into the (p-localized) ring of `f`.
pub fn p_typical_reduction(f: &FormalGroupLaw, p: u64, bound: u32) -> Result<PTypical> {
    match f.ring.base {
        Base::Integers | Base::Rationals => {}
        Base::LocalAt { p: q } if q == p => {}
        other => {
            return Err(CoreError::Precondition(format!("p-typical reduction at {p} over base {other:?}")));
        }
    }
    if !crate::arith::is_prime(p) {
        return Err(CoreError::Precondition(format!("{p} is not prime")));
    }
    if bound > f.ring.degree_bound {
        return Err(CoreError::BoundOverflow { requested: bound, bound: f.ring.degree_bound });
    }
    let ring = ptypical_ring(p, bound);
    let m = ring.nvars();
    let g = ring.grading();
    let logs = hazewinkel_logs(p, m, m, 0, &g);
    let mut log_coeffs = vec![Poly::zero(m); bound as usize + 1];
    for i in 1..=m {
        log_coeffs[p.pow(i as u32) as usize - 1] = logs[i].clone();
    }
    let fgl = FormalGroupLaw::from_log(ring.clone(), &log_coeffs);
    if !fgl.coefficients_integral(Some(p)) {
        return Err(CoreError::Internal("p-typical law has p in a denominator".into()));
    }
    fgl.verify_axioms()?;

    // Classifying map: v_n ↦ p ℓ_n(F) - Σ_{0<i<n} ℓ_i(F) v_{n-i}^{p^i}.
    let rg = f.ring.truncated(bound);
    let rn = f.ring.nvars();
    let rgrading = Grading::new(f.ring.degrees(), bound);
    let flog = f.log_coeffs_rational();
    let ell = |i: usize| -> Poly<Q> {
        if i == 0 {
            Poly::one(rn)
        } else {
            flog[p.pow(i as u32) as usize - 1].clone()
        }
    };
    let mut classifying: Vec<Poly<Q>> = Vec::new();
    for n in 1..=m {
        let mut v = ell(n).scale(&q(p as i64));
        for i in 1..n {
            let t = ell(i).mul_trunc(&classifying[n - i - 1].pow_trunc(p.pow(i as u32) as u32, &rgrading), &rgrading);
            v = v.sub(&t);
        }
        if !v.is_p_integral(p) {
            return Err(CoreError::Internal(format!("image of v{n} is not p-integral in {}", rg.format(&v))));
        }
        classifying.push(v);
    }
    Ok(PTypical { ring, fgl, logs, classifying })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::law::SeriesOp;
    use crate::fgl::universal::universal_fgl;
    use crate::poly::q_frac;

    #[test]
    fn generator_degrees() {
        let r = ptypical_ring(2, 1);
        assert_eq!(r.degrees(), vec![1]);
        let r = ptypical_ring(3, 8);
        assert_eq!(r.degrees(), vec![2, 8]);
    }

    #[test]
    fn log_coefficient_of_x_to_the_p() {
        for p in [2u64, 3, 5] {
            let (_, f) = universal_fgl(p as u32 - 1).unwrap();
            let red = p_typical_reduction(&f, p, p as u32 - 1).unwrap();
            let log = red.fgl.base_change_rational().series(SeriesOp::Log).unwrap();
            let c = log.coeff(&[p as u16]);
            assert_eq!(c, Poly::var(1, 0).scale(&q_frac(1, p as i64)));
        }
    }

    #[test]
    fn classifying_map_of_universal_law() {
        let (ring, f) = universal_fgl(4).unwrap();
        let red = p_typical_reduction(&f, 2, 4).unwrap();
        assert_eq!(ring.format(&red.classifying[0]), "x1");
        let red3 = p_typical_reduction(&f, 3, 4).unwrap();
        // v1 ↦ 3 m_2, which is x2 plus decomposables.
        let mut lead = vec![0u16; 4];
        lead[1] = 1;
        assert_eq!(red3.classifying[0].coeff(&lead), q(1));
        red.fgl.verify_axioms().unwrap();
    }

    #[test]
    fn wrong_base_rejected() {
        let r = GradedRingPresentation::polynomial(Base::PrimeField { p: 3 }, vec![], 3);
        let f = FormalGroupLaw::multiplicative(r);
        assert!(p_typical_reduction(&f, 3, 3).is_err());
    }
}
