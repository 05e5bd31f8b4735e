//! The torsion-order power condition and the u-sequences behind it.

use serde::{Deserialize, Serialize};

use super::linalg::{Subspace, Vector};
use super::module::{FptModule, IndFptModule, Stabilization};
use super::structure::{classify_divisible, decompose, growth_window};
use crate::error::{CoreError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionPowerCheck {
    pub holds: bool,
    /// Smallest failing `n` and a t-torsion vector divisible by `t^{pⁿ}` but
    /// not by `t^{p^{n+1}-1}`.
    pub failing_n: Option<u32>,
    pub witness: Option<Vector>,
    /// Whether every free exponent is a power of p.
    pub profile_holds: bool,
}

pub fn is_power_of(p: u64, mut x: u64) -> bool {
    if x == 0 {
        return false;
    }
    while x.is_multiple_of(p) {
        x /= p;
    }
    x == 1
}

/// Scans the filtration `a ↦ {x ∈ M[t] : x divisible by t^a}` given as a closure.
fn scan(p: u64, top: u64, filtration: impl Fn(u64) -> Subspace) -> (Option<u32>, Option<Vector>) {
    let mut n = 0u32;
    while p.pow(n) <= top {
        let have = filtration(p.pow(n));
        let need = filtration(p.pow(n + 1) - 1);
        if let Some(v) = have.basis().into_iter().find(|v| !need.contains(v)) {
            return (Some(n), Some(v));
        }
        n += 1;
    }
    (None, None)
}

fn finish(failing_n: Option<u32>, witness: Option<Vector>, profile_holds: bool) -> Result<TorsionPowerCheck> {
    let holds = failing_n.is_none();
    if holds != profile_holds {
        return Err(CoreError::Internal("element scan and decomposition profile disagree".into()));
    }
    Ok(TorsionPowerCheck { holds, failing_n, witness, profile_holds })
}

pub fn check_torsion_powers(m: &FptModule) -> Result<TorsionPowerCheck> {
    let socle = m.torsion(1);
    let (failing_n, witness) = scan(m.p, m.dim as u64, |a| socle.intersect(&m.divisible_by(a)));
    let d = decompose(m)?;
    let profile_holds = d.free_parts.iter().all(|f| is_power_of(m.p, f.exponent as u64));
    finish(failing_n, witness, profile_holds)
}

/// Same condition on the colimit of an ind-system.
pub fn check_torsion_powers_ind(ind: &IndFptModule) -> Result<TorsionPowerCheck> {
    let Some(last) = ind.stages.last() else {
        return finish(None, None, true);
    };
    if ind.tail == Stabilization::Stationary {
        return check_torsion_powers(last);
    }
    let (h, last) = growth_window(ind)?;
    let socle = last.torsion(1);
    // Heights at or past the cutoff are infinite in the colimit.
    let (failing_n, witness) = scan(ind.p, h, |a| socle.intersect(&last.divisible_by(a.min(h))));
    let d = classify_divisible(ind)?;
    let profile_holds = d.free_parts.iter().all(|f| is_power_of(ind.p, f.exponent as u64));
    finish(failing_n, witness, profile_holds)
}

/// Exactness at the middle of the u-sequence for `u = t^{pⁿ}`.
///
/// Odd p: `M[u^p] →(u^{p-1}) M[u] → M/u`. p = 2:
/// `M[u²] ⊕ M[u⁴] →(incl, u) M[u⁴] →(u³) M[u]`.
pub fn check_u_sequence(m: &FptModule, n: u32) -> Result<bool> {
    if m.dim == 0 {
        return Ok(true);
    }
    let p = m.p;
    let step = p.checked_pow(n).filter(|&s| s <= m.dim as u64).ok_or_else(|| {
        CoreError::Precondition(format!("{p}^{n} exceeds the dimension {}", m.dim))
    })?;
    let u = m.t_power(step);
    let (kernel, image) = if p == 2 {
        let k = m.torsion(3 * step);
        let i = m.torsion(2 * step).sum(&m.torsion(4 * step).image(&u));
        (k, i)
    } else {
        let k = m.torsion(step).intersect(&m.divisible_by(step));
        let i = m.torsion(p * step).image(&u.pow(p - 1));
        (k, i)
    };
    if !kernel.contains_space(&image) {
        return Err(CoreError::Internal("u-sequence is not a complex".into()));
    }
    Ok(kernel.dim() == image.dim())
}

/// The u-sequence at every `n` with `pⁿ ≤ dim`.
pub fn check_u_sequences(m: &FptModule) -> Result<bool> {
    let mut n = 0;
    while m.p.pow(n) <= m.dim as u64 {
        if !check_u_sequence(m, n)? {
            return Ok(false);
        }
        n += 1;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torsion_power_examples() {
        for p in [2u64, 3] {
            let m = FptModule::from_profile(p, &[(1, 2), (p as u32, 1), ((p * p) as u32, 1)]);
            assert!(check_torsion_powers(&m).unwrap().holds);
            assert!(check_torsion_powers(&FptModule::zero(p)).unwrap().holds);
        }
        let c = check_torsion_powers(&FptModule::cyclic(2, 3)).unwrap();
        assert!(!c.holds && !c.profile_holds);
        assert_eq!(c.failing_n, Some(1));
        // t²g in the basis g, tg, t²g.
        assert_eq!(c.witness, Some(vec![0, 0, 1]));
    }

    #[test]
    fn torsion_powers_on_colimits() {
        assert!(check_torsion_powers_ind(&IndFptModule::t_power_inclusions(3, 4)).unwrap().holds);
        assert!(!check_torsion_powers_ind(&IndFptModule::constant(FptModule::cyclic(3, 2))).unwrap().holds);
    }

    #[test]
    fn u_sequence_examples() {
        for p in [2u64, 3, 5] {
            for n in 0..2 {
                let m = FptModule::cyclic(p, p.pow(n + 1) as u32);
                assert!(check_u_sequence(&m, n).unwrap(), "p={p} n={n}");
            }
            assert!(check_u_sequence(&FptModule::zero(p), 3).unwrap());
        }
        // M[t³] = M has dimension 3; M[t²] + t·M[t⁴] has dimension 2.
        assert!(!check_u_sequence(&FptModule::cyclic(2, 3), 0).unwrap());
        assert!(check_u_sequence(&FptModule::cyclic(2, 3), 2).unwrap_err().is_precondition());
    }
}
