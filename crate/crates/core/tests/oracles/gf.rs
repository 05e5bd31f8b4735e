//! GF(q) by table lookup; elements are `0..q`, the base-p digits of a
//! polynomial reduced modulo a monic irreducible.

pub struct Gf {
    pub p: u64,
    pub k: u32,
    pub q: u64,
    add: Vec<u64>,
    mul: Vec<u64>,
}

fn poly_mod(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    // m monic
    while a.len() >= m.len() {
        let lead = *a.last().unwrap();
        let shift = a.len() - m.len();
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p * p - lead * c % p) % p;
            }
        }
        a.pop();
    }
    a
}

fn is_zero(a: &[u64]) -> bool {
    a.iter().all(|&x| x == 0)
}

fn digits(x: u64, p: u64, k: u32) -> Vec<u64> {
    (0..k).map(|i| x / p.pow(i) % p).collect()
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn monic(p: u64, deg: u32, idx: u64) -> Vec<u64> {
    let mut m = digits(idx, p, deg);
    m.push(1);
    m
}

fn irreducible(p: u64, k: u32) -> Vec<u64> {
    'cand: for idx in 0..p.pow(k) {
        let m = monic(p, k, idx);
        for deg in 1..=k / 2 {
            for j in 0..p.pow(deg) {
                let f = monic(p, deg, j);
                if is_zero(&poly_mod(m.clone(), &f, p)) {
                    continue 'cand;
                }
            }
        }
        return m;
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Gf {
    pub fn new(p: u64, k: u32) -> Gf {
        let q = p.pow(k);
        let m = irreducible(p, k);
        let mut add = vec![0; (q * q) as usize];
        let mut mul = vec![0; (q * q) as usize];
        for a in 0..q {
            let da = digits(a, p, k);
            for b in 0..q {
                let db = digits(b, p, k);
                let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s, p);
                let mut prod = vec![0; 2 * k as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_mod(prod, &m, p);
                r.resize(k as usize, 0);
                mul[(a * q + b) as usize] = undigits(&r, p);
            }
        }
        Gf { p, k, q, add, mul }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        self.add[(a * self.q + b) as usize]
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.mul[(a * self.q + b) as usize]
    }

    pub fn neg(&self, a: u64) -> u64 {
        (0..self.q).find(|&b| self.add(a, b) == 0).unwrap()
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn one(&self) -> u64 {
        1
    }

    pub fn units(&self) -> impl Iterator<Item = u64> {
        1..self.q
    }

    pub fn order(&self, a: u64) -> u64 {
        let mut x = a;
        let mut n = 1;
        while x != 1 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn is_square(&self, a: u64) -> bool {
        (0..self.q).any(|x| self.mul(x, x) == a)
    }
}

/// Prime powers up to `n` as `(p, k)`.
pub fn prime_powers(n: u64) -> Vec<(u64, u32)> {
    let is_prime = |m: u64| m >= 2 && (2..m).take_while(|d| d * d <= m).all(|d| !m.is_multiple_of(d));
    let mut out = Vec::new();
    for q in 2..=n {
        for p in (2..=q).filter(|&p| is_prime(p)) {
            let mut k = 0;
            let mut r = q;
            while r % p == 0 {
                r /= p;
                k += 1;
            }
            if r == 1 {
                out.push((p, k));
            }
        }
    }
    out
}
