//! Small closed-form oracles.

/// Number of partitions of `0..=n`, from the product of `1/(1 - x^k)`.
pub fn partition_counts(n: usize) -> Vec<u64> {
    let mut c = vec![0u64; n + 1];
    c[0] = 1;
    for k in 1..=n {
        for m in k..=n {
            c[m] += c[m - k];
        }
    }
    c
}

/// `ε_d(n)`: the value `k` in `0..d` with `n ≡ -k (mod d)`.
pub fn epsilon(d: i64, n: i64) -> i64 {
    (0..d).find(|k| (n + k) % d == 0).unwrap()
}

pub fn f_d(d: i64, n: i64) -> i64 {
    2 * n + epsilon(d, n)
}

pub fn p_adic_valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}
