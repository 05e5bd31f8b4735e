//! Adams idempotents on ℓ-local graded objects.

use std::collections::BTreeMap;

use crate::error::{CoreError, Result};
use crate::fgl::presentation::{Base, GradedRingPresentation};
use crate::graded::BigradedChart;

fn check_odd(ell: u64) -> Result<()> {
    if ell == 2 || !crate::arith::is_prime(ell) {
        return Err(CoreError::Precondition(format!("Adams idempotents need an odd prime, got {ell}")));
    }
    Ok(())
}

fn keeps(homotopy_degree: i64, alpha: i64, ell: u64) -> bool {
    let m = ell as i64 - 1;
    homotopy_degree % 2 == 0 && (homotopy_degree / 2 - alpha).rem_euclid(m) == 0
}

/// Graded ranks of a free graded module, keyed by homotopy degree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GradedRanks(pub BTreeMap<i64, usize>);

impl GradedRanks {
    /// Ranks of a polynomial presentation, in homotopy degrees `2d`.
    pub fn of_ring(r: &GradedRingPresentation) -> Self {
        GradedRanks(
            (0..=r.degree_bound)
                .map(|d| (2 * d as i64, r.rank_in_degree(d)))
                .filter(|(_, n)| *n > 0)
                .collect(),
        )
    }
}

/// Objects on which the idempotent `e_α` acts by keeping degrees `2n`, `n ≡ α mod ℓ-1`.
pub trait AdamsProjection: Sized {
    fn adams_project(&self, alpha: i64, ell: u64) -> Result<Self>;
}

/// Charts are projected along their first axis, read as homotopy degree.
impl AdamsProjection for BigradedChart {
    fn adams_project(&self, alpha: i64, ell: u64) -> Result<Self> {
        check_odd(ell)?;
        let mut out = BigradedChart::new(self.label.clone(), self.prime);
        for (b, g) in self.iter() {
            if keeps(b.i, alpha, ell) {
                out.set(b.i, b.j, g.clone());
            }
        }
        Ok(out)
    }
}

impl AdamsProjection for GradedRanks {
    fn adams_project(&self, alpha: i64, ell: u64) -> Result<Self> {
        check_odd(ell)?;
        Ok(GradedRanks(self.0.iter().filter(|(d, _)| keeps(**d, alpha, ell)).map(|(d, n)| (*d, *n)).collect()))
    }
}

pub fn adams_projection<T: AdamsProjection>(c: &T, alpha: i64, ell: u64) -> Result<T> {
    c.adams_project(alpha, ell)
}

/// Coefficients of the summand `e_0 MU_(ℓ)`: a polynomial ring on `x_i` in
/// algebraic degree `i(ℓ-1)`, keeping generators up to `bound`.
pub fn adams_summand_coefficients(ell: u64, bound: u32) -> Result<GradedRingPresentation> {
    check_odd(ell)?;
    let step = (ell - 1) as u32;
    let gens = (1..).map(|i| i * step).take_while(|d| *d <= bound).enumerate().map(|(k, d)| (format!("x{}", k + 1), d)).collect();
    Ok(GradedRingPresentation::polynomial(Base::LocalAt { p: ell }, gens, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::AbGroupDesc;

    fn ku(range: std::ops::RangeInclusive<i64>) -> BigradedChart {
        let mut c = BigradedChart::new("KU", Some(5));
        for n in range {
            c.set(2 * n, 0, AbGroupDesc::free(1));
        }
        c
    }

    #[test]
    fn ku_at_five_keeps_multiples_of_eight() {
        let c = ku(-12..=12);
        let e0 = adams_projection(&c, 0, 5).unwrap();
        let degs: Vec<i64> = e0.iter().map(|(b, _)| b.i).collect();
        assert_eq!(degs, vec![-24, -16, -8, 0, 8, 16, 24]);
    }

    #[test]
    fn projections_partition_the_chart() {
        let c = ku(-10..=10);
        let mut sum = BigradedChart::new("KU", Some(5));
        for a in 0..4 {
            sum = sum.direct_sum(&adams_projection(&c, a, 5).unwrap()).unwrap();
        }
        assert!(sum.same_groups(&c));
        assert!(adams_projection(&BigradedChart::new("z", None), 1, 7).unwrap().is_empty());
        assert!(adams_projection(&c, 0, 2).is_err());
    }

    #[test]
    fn summand_generator_degrees() {
        let d = |r: GradedRingPresentation| r.degrees();
        assert_eq!(d(adams_summand_coefficients(3, 4).unwrap()), vec![2, 4]);
        assert_eq!(d(adams_summand_coefficients(5, 4).unwrap()), vec![4]);
        assert!(d(adams_summand_coefficients(5, 3).unwrap()).is_empty());
        assert!(d(adams_summand_coefficients(7, 5).unwrap()).is_empty());
    }

    #[test]
    fn ring_ranks_project() {
        let r = adams_summand_coefficients(3, 4).unwrap();
        let ranks = GradedRanks::of_ring(&r);
        assert_eq!(ranks.0.get(&8), Some(&2));
        assert_eq!(adams_projection(&ranks, 1, 3).unwrap(), GradedRanks::default());
    }
}
