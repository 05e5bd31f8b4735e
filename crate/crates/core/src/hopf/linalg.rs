//! Sparse matrices with rational entries, reduced modulo prime powers for
//! rank and elementary-divisor computations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{inv_mod, mul_mod};
use crate::poly::Q;

/// Column-major sparse matrix.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<Vec<(usize, Q)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// `self · other`, exact.
    pub fn compose(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = SparseMatrix::new(self.rows, other.cols);
        for (c, col) in other.columns.iter().enumerate() {
            let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
            for (k, x) in col {
                for (r, y) in &self.columns[*k] {
                    *acc.entry(*r).or_insert_with(Q::zero) += x * y;
                }
            }
            out.columns[c] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.iter().all(|(_, v)| v.is_zero()))
    }
}

/// Image of a rational in `ℤ/m`, if its denominator is invertible.
pub fn reduce_q(x: &Q, m: u64) -> Option<u64> {
    let mb = BigInt::from(m);
    let n = x.numer().mod_floor(&mb).to_u64()?;
    let d = x.denom().mod_floor(&mb).to_u64()?;
    Some(mul_mod(n, inv_mod(d, m)?, m))
}

fn valuation_mod(mut x: u64, p: u64, k: u32) -> u32 {
    let mut v = 0;
    while v < k && x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// Valuations of the nonzero elementary divisors of `m` over `ℤ/p^k`.
///
/// Elimination always pivots on an entry of least valuation, so every other
/// entry of the pivot row is a multiple of the pivot. `None` if an entry has
/// a denominator divisible by `p`.
pub fn local_divisors(m: &SparseMatrix, p: u64, k: u32) -> Option<Vec<u32>> {
    let modulus = p.checked_pow(k).expect("modulus overflow");
    let mut cols: Vec<BTreeMap<usize, u64>> = Vec::with_capacity(m.cols);
    for col in &m.columns {
        let mut c = BTreeMap::new();
        for (r, x) in col {
            let v = reduce_q(x, modulus)?;
            if v != 0 {
                c.insert(*r, v);
            }
        }
        cols.push(c);
    }
    let mut alive: Vec<usize> = (0..cols.len()).filter(|&c| !cols[c].is_empty()).collect();
    let mut out = Vec::new();
    loop {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for (pos, &c) in alive.iter().enumerate() {
            for (&r, &x) in &cols[c] {
                let v = valuation_mod(x, p, k);
                if best.is_none_or(|b| v < b.0) {
                    best = Some((v, pos, r));
                    if v == 0 {
                        break 'search;
                    }
                }
            }
        }
        let Some((v, pos, r0)) = best else { break };
        let c0 = alive.swap_remove(pos);
        let pivot = cols[c0][&r0];
        let pv = p.pow(v);
        let unit_inv = inv_mod((pivot / pv) % modulus, modulus).expect("unit part is invertible");
        let pivot_col = std::mem::take(&mut cols[c0]);
        for &c in &alive {
            let Some(&x) = cols[c].get(&r0) else { continue };
            let lambda = mul_mod(x / pv, unit_inv, modulus);
            let col = &mut cols[c];
            for (&r, &y) in &pivot_col {
                let sub = mul_mod(lambda, y, modulus);
                let e = col.entry(r).or_insert(0);
                *e = (*e + modulus - sub) % modulus;
                if *e == 0 {
                    col.remove(&r);
                }
            }
            debug_assert!(!col.contains_key(&r0));
        }
        alive.retain(|&c| !cols[c].is_empty());
        out.push(v);
    }
    Some(out)
}

/// Rank over a prime field, or `None` if an entry is not defined there.
pub fn rank_mod_prime(m: &SparseMatrix, prime: u64) -> Option<usize> {
    local_divisors(m, prime, 1).map(|d| d.len())
}

/// Primes used to certify ranks over ℚ.
pub const RANK_PRIMES: [u64; 2] = [2_305_843_009_213_693_951, 1_000_000_007];

/// Rank over ℚ. Reduction mod a prime never raises rank, so the maximum over
/// the certifying primes is the rank unless both primes divide every maximal
/// nonvanishing minor.
pub fn rational_rank(m: &SparseMatrix) -> Option<usize> {
    RANK_PRIMES.iter().filter_map(|&p| rank_mod_prime(m, p)).max()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    fn dense(rows: &[&[i64]]) -> SparseMatrix {
        let r = rows.len();
        let c = rows[0].len();
        let mut m = SparseMatrix::new(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if x != 0 {
                    m.columns[j].push((i, q(x)));
                }
            }
        }
        m
    }

    #[test]
    fn divisors_of_diagonal_and_mixed() {
        let m = dense(&[&[3, 0], &[0, 9]]);
        let mut d = local_divisors(&m, 3, 5).unwrap();
        d.sort();
        assert_eq!(d, vec![1, 2]);
        // [[2,4],[6,8]] has determinant -8 = -2^3 and gcd of entries 2.
        let m = dense(&[&[2, 4], &[6, 8]]);
        let mut d = local_divisors(&m, 2, 6).unwrap();
        d.sort();
        assert_eq!(d, vec![1, 2]);
        assert_eq!(local_divisors(&dense(&[&[81]]), 3, 4).unwrap(), Vec::<u32>::new());
        assert_eq!(rational_rank(&dense(&[&[81]])), Some(1));
    }

    #[test]
    fn rank_of_singular_matrix() {
        let m = dense(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rational_rank(&m), Some(2));
        assert_eq!(rank_mod_prime(&m, 2), Some(1));
    }

    #[test]
    fn reduction_of_fractions() {
        assert_eq!(reduce_q(&crate::poly::q_frac(1, 2), 9), Some(5));
        assert_eq!(reduce_q(&crate::poly::q_frac(1, 3), 9), None);
        assert_eq!(reduce_q(&q(-1), 9), Some(8));
    }
}
