//! Jordan type of a nilpotent matrix over 𝔽_p from ranks of its powers.

pub type M = Vec<Vec<u64>>;

fn inv(a: u64, p: u64) -> u64 {
    (1..p).find(|&x| a * x % p == 1).unwrap()
}

pub fn rank(m: &M, p: u64) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..rows).find(|&k| !a[k][c].is_multiple_of(p)) else { continue };
        a.swap(r, k);
        let iv = inv(a[r][c] % p, p);
        for k in 0..rows {
            if k != r && !a[k][c].is_multiple_of(p) {
                let f = a[k][c] * iv % p;
                for j in 0..cols {
                    a[k][j] = (a[k][j] + p * p - f * a[r][j] % p) % p;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn mul(a: &M, b: &M, p: u64) -> M {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| (0..m).map(|j| (0..b.len()).fold(0, |acc, k| (acc + a[i][k] * b[k][j]) % p)).collect())
        .collect()
}

pub fn identity(n: usize) -> M {
    (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect()
}

pub fn is_nilpotent(m: &M, p: u64) -> bool {
    let n = m.len();
    let mut x = identity(n);
    for _ in 0..n {
        x = mul(&x, m, p);
    }
    x.iter().all(|r| r.iter().all(|&v| v == 0))
}

/// `(block size, count)` sorted by size.
pub fn jordan_type(m: &M, p: u64) -> Vec<(u32, u32)> {
    let n = m.len();
    let mut ranks = vec![n];
    let mut x = identity(n);
    for _ in 0..=n {
        x = mul(&x, m, p);
        ranks.push(rank(&x, p));
    }
    (1..=n)
        .filter_map(|k| {
            let c = ranks[k - 1] + ranks[k + 1] - 2 * ranks[k];
            (c > 0).then_some((k as u32, c as u32))
        })
        .collect()
}

/// Every `n × n` matrix over 𝔽_p, as a callback.
pub fn for_each_matrix(n: usize, p: u64, mut f: impl FnMut(&M)) {
    let cells = n * n;
    let total = p.pow(cells as u32);
    let mut m = vec![vec![0; n]; n];
    for idx in 0..total {
        for c in 0..cells {
            m[c / n][c % n] = idx / p.pow(c as u32) % p;
        }
        f(&m);
    }
}

/// Every strictly upper triangular `n × n` matrix over 𝔽_p.
pub fn for_each_strict_upper(n: usize, p: u64, mut f: impl FnMut(&M)) {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let total = p.pow(slots.len() as u32);
    let mut m = vec![vec![0; n]; n];
    for idx in 0..total {
        for (c, &(i, j)) in slots.iter().enumerate() {
            m[i][j] = idx / p.pow(c as u32) % p;
        }
        f(&m);
    }
}
