//! Dense linear algebra over 𝔽_p. Vectors are `Vec<u64>` with entries in `0..p`.

use crate::arith::inv_mod;

pub type Vector = Vec<u64>;

/// Row-major matrix over 𝔽_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl Mat {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        Mat { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>], cols: usize) -> Self {
        let mut m = Self::zeros(p, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, x % p);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(p: u64, rows: usize, cols: &[Vector]) -> Self {
        let mut m = Self::zeros(p, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.cols + j] = x % self.p;
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let p = self.p;
        let mut out = Mat::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = (out.data[idx] + a * other.get(k, j)) % p;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[u64]) -> Vector {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0, |acc, j| (acc + self.get(i, j) * v[j]) % self.p))
            .collect()
    }

    pub fn pow(&self, e: u64) -> Mat {
        let mut out = Mat::identity(self.p, self.rows);
        for _ in 0..e {
            out = out.mul(self);
            if out.is_zero() {
                break;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn rank(&self) -> usize {
        Subspace::span(self.p, self.rows, &self.columns()).dim()
    }

    /// Basis of the null space.
    pub fn kernel(&self) -> Vec<Vector> {
        let p = self.p;
        let mut a = self.to_rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(k) = (r..self.rows).find(|&k| a[k][c] != 0) else { continue };
            a.swap(r, k);
            let inv = inv_mod(a[r][c], p).unwrap();
            for x in a[r].iter_mut() {
                *x = *x * inv % p;
            }
            for k in 0..self.rows {
                if k != r && a[k][c] != 0 {
                    let f = a[k][c];
                    for j in 0..self.cols {
                        a[k][j] = (a[k][j] + p * p - f * a[r][j]) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0; self.cols];
                v[f] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - a[row][f]) % p;
                }
                v
            })
            .collect()
    }
}

pub fn add(p: u64, a: &[u64], b: &[u64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| (x + y) % p).collect()
}

pub fn scale(p: u64, c: u64, a: &[u64]) -> Vector {
    a.iter().map(|x| x * c % p).collect()
}

pub fn is_zero_vec(v: &[u64]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// A subspace kept in reduced echelon form, remembering how each echelon
/// row was built from the inserted vectors.
#[derive(Debug, Clone)]
pub struct Subspace {
    pub p: u64,
    pub n: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: u64, n: usize) -> Self {
        Subspace { p, n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn span(p: u64, n: usize, vs: &[Vector]) -> Self {
        let mut s = Self::zero(p, n);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduction of `v` against the echelon rows.
    pub fn reduce(&self, v: &[u64]) -> Vector {
        let p = self.p;
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = v[pc];
            if f != 0 {
                for j in 0..self.n {
                    v[j] = (v[j] + p * p - f * row[j]) % p;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Inserts `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let p = self.p;
        let mut r = self.reduce(v);
        let Some(pc) = r.iter().position(|&x| x != 0) else { return false };
        let inv = inv_mod(r[pc], p).unwrap();
        r = scale(p, inv, &r);
        for row in self.rows.iter_mut() {
            let f = row[pc];
            if f != 0 {
                for j in 0..self.n {
                    row[j] = (row[j] + p * p - f * r[j]) % p;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < pc);
        self.rows.insert(at, r);
        self.pivots.insert(at, pc);
        true
    }

    pub fn basis(&self) -> Vec<Vector> {
        self.rows.clone()
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in &other.rows {
            s.insert(v);
        }
        s
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // Solve a = b with a in self, b in other.
        let a = self.basis();
        let b = other.basis();
        let mut cols = a.clone();
        cols.extend(b.iter().map(|v| scale(self.p, self.p - 1, v)));
        let m = Mat::from_columns(self.p, self.n, &cols);
        let mut out = Subspace::zero(self.p, self.n);
        for k in m.kernel() {
            let mut v = vec![0; self.n];
            for (c, basis_vec) in k.iter().zip(&a) {
                if *c != 0 {
                    v = add(self.p, &v, &scale(self.p, *c, basis_vec));
                }
            }
            out.insert(&v);
        }
        out
    }

    /// First standard-order vectors among `candidates` completing this
    /// subspace, together with the enlarged span.
    pub fn complete_with(&self, candidates: &[Vector]) -> (Vec<Vector>, Subspace) {
        let mut s = self.clone();
        let mut chosen = Vec::new();
        for c in candidates {
            if s.insert(c) {
                chosen.push(c.clone());
            }
        }
        (chosen, s)
    }

    /// Image under a linear map.
    pub fn image(&self, m: &Mat) -> Subspace {
        Subspace::span(self.p, m.rows, &self.rows.iter().map(|v| m.apply(v)).collect::<Vec<_>>())
    }
}

/// Coordinates of `v` in an independent family `basis`, if `v` lies in its span.
pub fn coordinates(p: u64, basis: &[Vector], v: &[u64]) -> Option<Vector> {
    let n = v.len();
    let mut cols = basis.to_vec();
    cols.push(scale(p, p - 1, v));
    let m = Mat::from_columns(p, n, &cols);
    let k = m.kernel();
    // A kernel vector with last coordinate 1 gives the combination.
    let sol = k.iter().find(|w| w[basis.len()] != 0)?;
    let inv = inv_mod(sol[basis.len()], p).unwrap();
    Some(sol[..basis.len()].iter().map(|x| x * inv % p).collect())
}

pub fn standard_basis(n: usize) -> Vec<Vector> {
    (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_span() {
        let m = Mat::from_rows(3, &[vec![1, 2, 0], vec![2, 1, 0]], 3);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_zero_vec(&m.apply(v)));
        }
        let s = Subspace::span(3, 3, &[vec![1, 1, 0], vec![2, 2, 0]]);
        assert_eq!(s.dim(), 1);
        assert!(s.contains(&[2, 2, 0]));
        let t = Subspace::span(3, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(s.intersect(&t).dim(), 1);
        assert_eq!(coordinates(3, &[vec![1, 1, 0], vec![0, 1, 0]], &[2, 0, 0]), Some(vec![2, 1]));
        assert_eq!(coordinates(3, &[vec![1, 1, 0]], &[0, 0, 1]), None);
    }
}
