//! Milnor K₁ and K₂ of a finite field from symbols and Steinberg relations.

use super::gf::Gf;

pub struct SymbolQuotient {
    /// Orders of the invariant factors of K₁ when cyclic, else `None`.
    pub k1_cyclic_order: Option<u64>,
    pub k2_order: u64,
    /// `|K₁ / ℓ|` for the requested ℓ.
    pub k1_mod: Vec<(u64, u64)>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn symbols(f: &Gf, moduli: &[u64]) -> SymbolQuotient {
    let n = f.q - 1;
    let gen = f.units().find(|&a| f.order(a) == n);
    let k1_cyclic_order = gen.map(|_| n);
    // K₂ is the quotient of K₁ ⊗ K₁ = ⟨g ⊗ g⟩ by the symbols {a, 1 - a}.
    let k2_order = match gen {
        Some(g) => {
            let mut log = vec![0u64; f.q as usize];
            let mut x = 1;
            for e in 0..n {
                log[x as usize] = e;
                x = f.mul(x, g);
            }
            let mut d = n;
            for a in f.units() {
                let b = f.sub(1, a);
                if b != 0 {
                    d = gcd(d, log[a as usize] * log[b as usize] % n);
                }
            }
            d
        }
        None => panic!("multiplicative group of GF({}) is not cyclic", f.q),
    };
    let k1_mod = moduli
        .iter()
        .map(|&l| {
            let mut powers: Vec<u64> = f.units().map(|a| (0..l).fold(1, |acc, _| f.mul(acc, a))).collect();
            powers.sort();
            powers.dedup();
            (l, n / powers.len() as u64)
        })
        .collect();
    SymbolQuotient { k1_cyclic_order, k2_order, k1_mod }
}
