//! Morel's zero line, completed MGL homotopy and the cosimplicial ANSS terms.

use super::Window;
use crate::error::{CoreError, Result};
use crate::fgl::presentation::monomials_of_degree;
use crate::fgl::universal::lazard_ring;
use crate::graded::{AbGroupDesc, BigradedChart, ExtNat};
use crate::hopf::universal_gamma;
use crate::milnor::{complete_kmw, milnor_k, milnor_witt, FieldDescriptor};

/// `π_{m,m} = K^MW_{-m}` on the diagonal for `m` in `range`; zero below it.
pub fn morel_zero_line(k: &FieldDescriptor, range: (i64, i64)) -> Result<BigradedChart> {
    let mut chart = BigradedChart::new(format!("zero line of {}", k.name), None);
    if range.0 > range.1 {
        return Ok(chart);
    }
    let kmw = milnor_witt(k, (-range.1, -range.0))?;
    for m in range.0..=range.1 {
        chart.set(m, m, kmw.get(-m));
    }
    Ok(chart)
}

/// The zero line after (p, η)-completion of `K^MW`.
pub fn completed_zero_line(k: &FieldDescriptor, p: u64, range: (i64, i64)) -> Result<BigradedChart> {
    let mut chart = BigradedChart::new(format!("completed zero line of {}", k.name), Some(p));
    if range.0 > range.1 {
        return Ok(chart);
    }
    let kmw = complete_kmw(&milnor_witt(k, (-range.1, -range.0))?, p)?;
    for m in range.0..=range.1 {
        chart.set(m, m, kmw.get(-m));
    }
    Ok(chart)
}

fn check_prime(k: &FieldDescriptor, l: u64) -> Result<()> {
    if !crate::arith::is_prime(l) {
        return Err(CoreError::Precondition(format!("{l} is not prime")));
    }
    if k.characteristic() == l {
        return Err(CoreError::Precondition(format!("`{}` has characteristic {l}", k.name)));
    }
    Ok(())
}

/// `K^M(k)^∧_ℓ[τ] ⊗ L` shifted by the bidegrees of a free module whose
/// generator counts per algebraic degree are `extra(d)`.
fn assemble(
    k: &FieldDescriptor,
    l: u64,
    w: &Window,
    label: String,
    extra: impl Fn(u32) -> u64,
) -> Result<BigradedChart> {
    let mut chart = BigradedChart::new(label, Some(l));
    if w.is_empty() {
        return Ok(chart);
    }
    // Chow degree i - 2j = n + 2m bounds the Milnor degree n.
    let n_max = w.points().map(|(i, j)| i - 2 * j).max().unwrap_or(0).max(0);
    let km: Vec<AbGroupDesc> = milnor_k(k, n_max)?
        .values()
        .map(|g| g.complete(l))
        .collect::<Result<_>>()?;
    let d_max = w.points().map(|(i, j)| i - j).max().unwrap_or(0).max(0) as u32;
    let lazard = lazard_ring(d_max.max(1));
    let mut counts = Vec::with_capacity(d_max as usize + 1);
    for d in 0..=d_max {
        // Lazard monomials times free generators, convolved over degrees.
        let c: u64 = (0..=d).map(|e| lazard.rank_in_degree(d - e) as u64 * extra(e)).sum();
        counts.push(c);
    }
    for (i, j) in w.points() {
        let mut g = AbGroupDesc::zero();
        let chow = i - 2 * j;
        for n in (0..=chow).filter(|n| (i + n) % 2 == 0) {
            let d = (i + n) / 2;
            if d < 0 {
                continue;
            }
            // τ-exponent m = d - n - j is nonnegative because n ≤ chow.
            let c = counts[d as usize];
            if c > 0 {
                g = g.direct_sum(&km[n as usize].scale(ExtNat::Finite(c)))?;
            }
        }
        if !g.is_zero() {
            chart.set(i, j, g);
        }
    }
    Ok(chart)
}

/// `π_{**}(MGL^∧_ℓ)(k) ≅ K^M(k)^∧_ℓ[τ] ⊗ L`.
pub fn mgl_homotopy(k: &FieldDescriptor, l: u64, w: &Window) -> Result<BigradedChart> {
    check_prime(k, l)?;
    assemble(k, l, w, format!("MGL homotopy of {} at {l}", k.name), |e| u64::from(e == 0))
}

/// The level-`s` term `π_{**}(MGL^∧_ℓ) ⊗_L Γ^{⊗s}`, free over the MGL
/// homotopy on the monomials of `s` blocks of Γ generators.
pub fn anss_e1(k: &FieldDescriptor, l: u64, s: u32, w: &Window) -> Result<BigradedChart> {
    check_prime(k, l)?;
    let d_max = if w.is_empty() { 1 } else { w.points().map(|(i, j)| i - j).max().unwrap_or(0).max(1) as u32 };
    let gamma = universal_gamma(d_max);
    let weights: Vec<u32> = (0..s).flat_map(|_| gamma.degrees()).collect();
    assemble(k, l, w, format!("ANSS E1 level {s} of {} at {l}", k.name), |e| {
        monomials_of_degree(&weights, e).len() as u64
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{Chow, Coefficients, TruncationMode};

    #[test]
    fn zero_line_examples() {
        let c = morel_zero_line(&FieldDescriptor::complex_like(), (-3, 3)).unwrap();
        assert_eq!(c.get(0, 0), AbGroupDesc::free(1));
        assert!(c.get(-1, 0).is_zero());
        let r = morel_zero_line(&FieldDescriptor::real_closed(), (0, 0)).unwrap();
        assert_eq!(r.get(0, 0), AbGroupDesc::free(2));
    }

    #[test]
    fn mgl_over_closed_field() {
        let k = FieldDescriptor::algebraically_closed(0);
        let w = Window::new((-2, 12), (-3, 6));
        let c = mgl_homotopy(&k, 3, &w).unwrap();
        let partitions = [1u64, 1, 2, 3, 5, 7, 11];
        for (i, &r) in partitions.iter().enumerate() {
            let g = c.get(2 * i as i64, i as i64);
            assert_eq!(g.free_rank, ExtNat::Finite(r));
            assert_eq!(g.coefficients, Coefficients::Complete(3));
        }
        for (b, _) in c.iter() {
            assert!(b.i - 2 * b.j >= 0);
        }
        let kept = c.truncate(&Chow, 0, TruncationMode::Ge).unwrap();
        assert_eq!(kept, c);
        assert!(mgl_homotopy(&k, 3, &Window::new((1, 0), (0, 0))).unwrap().is_empty());
        assert!(mgl_homotopy(&FieldDescriptor::finite(9), 3, &w).is_err());
    }

    #[test]
    fn mgl_over_finite_field_has_milnor_terms() {
        let c = mgl_homotopy(&FieldDescriptor::finite(7), 3, &Window::new((-1, 0), (-1, 0))).unwrap();
        // K^M_1(𝔽_7) = ℤ/6 at (-1,-1), completed at 3.
        assert_eq!(c.get(-1, -1), AbGroupDesc::cyclic(3));
        assert_eq!(c.get(0, -1).free_rank, ExtNat::ONE);
    }

    #[test]
    fn e1_levels() {
        let k = FieldDescriptor::algebraically_closed(0);
        let w = Window::new((0, 8), (0, 4));
        let e0 = anss_e1(&k, 2, 0, &w).unwrap();
        assert_eq!(e0, mgl_homotopy(&k, 2, &w).unwrap().with_label(e0.label.clone()));
        let e1 = anss_e1(&k, 2, 1, &w).unwrap();
        let h = crate::hopf::build_algebroid(crate::hopf::AlgebroidKind::Universal, 4).unwrap();
        for d in 0..=4u32 {
            let expected: usize = (0..=d)
                .map(|e| h.gamma_monomials(e).len() * h.a.rank_in_degree(d - e))
                .sum();
            assert_eq!(e1.get(2 * d as i64, d as i64).free_rank, ExtNat::Finite(expected as u64));
        }
        assert!(anss_e1(&k, 2, 1, &Window::new((0, -1), (0, 0))).unwrap().is_empty());
    }
}
