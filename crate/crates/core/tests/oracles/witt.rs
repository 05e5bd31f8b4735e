//! Witt and Grothendieck–Witt groups by enumerating diagonal forms.

use super::gf::Gf;

/// Group shape: free rank plus cyclic torsion orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub free: u64,
    pub torsion: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittSummary {
    pub gw: Shape,
    pub w: Shape,
    pub i1: Shape,
    pub i2: Shape,
}

fn isotropic(f: &Gf, diag: &[u64]) -> bool {
    let n = diag.len() as u32;
    (1..f.q.pow(n)).any(|idx| {
        let mut acc = 0;
        for (k, &a) in diag.iter().enumerate() {
            let x = idx / f.q.pow(k as u32) % f.q;
            acc = f.add(acc, f.mul(a, f.mul(x, x)));
        }
        acc == 0
    })
}

fn represents(f: &Gf, a: u64, b: u64, c: u64) -> bool {
    (0..f.q).any(|x| (0..f.q).any(|y| f.add(f.mul(a, f.mul(x, x)), f.mul(b, f.mul(y, y))) == c))
}

fn same_class(f: &Gf, a: u64, b: u64) -> bool {
    f.units().any(|x| f.mul(a, f.mul(x, x)) == b)
}

fn binary_isometric(f: &Gf, (a, b): (u64, u64), (c, d): (u64, u64)) -> bool {
    represents(f, a, b, c) && same_class(f, f.mul(a, b), f.mul(c, d))
}

fn shape_of_order(order: u64, cyclic: bool) -> Shape {
    match (order, cyclic) {
        (1, _) => Shape { free: 0, torsion: vec![] },
        (n, true) => Shape { free: 0, torsion: vec![n] },
        (n, false) => Shape { free: 0, torsion: vec![2; n.trailing_zeros() as usize] },
    }
}

/// Odd-characteristic finite fields, by brute force over GF(q).
pub fn finite_field(f: &Gf) -> WittSummary {
    let mut classes: Vec<u64> = Vec::new();
    for a in f.units() {
        if !classes.iter().any(|&c| same_class(f, a, c)) {
            classes.push(a);
        }
    }
    let mut binary: Vec<(u64, u64)> = Vec::new();
    for &a in &classes {
        for &b in &classes {
            if !isotropic(f, &[a, b]) && !binary.iter().any(|&x| binary_isometric(f, x, (a, b))) {
                binary.push((a, b));
            }
        }
    }
    for &a in &classes {
        for &b in &classes {
            for &c in &classes {
                assert!(isotropic(f, &[a, b, c]), "anisotropic ternary form over GF({})", f.q);
            }
        }
    }
    let w_order = 1 + classes.len() as u64 + binary.len() as u64;
    // ⟨a⟩ has order 2 in W exactly when ⟨a, a⟩ is hyperbolic.
    let has_order_four = classes.iter().any(|&a| !isotropic(f, &[a, a]));
    let w = shape_of_order(w_order, has_order_four);
    let i_order = 1 + binary.len() as u64;
    let i1 = shape_of_order(i_order, false);
    // I² is generated by the 2-fold Pfister forms ⟨1, -a, -b, ab⟩.
    let pfister_all_hyperbolic = classes.iter().all(|&a| {
        classes.iter().all(|&b| isotropic(f, &[1, f.neg(a), f.neg(b), f.mul(a, b)]))
    });
    let i2 = if pfister_all_hyperbolic { shape_of_order(1, false) } else { panic!("nonzero I² over GF({})", f.q) };
    // The rank splits off: GW ≅ ℤ ⊕ (virtual dimension 0) and the latter maps
    // isomorphically onto I.
    assert!(i_order <= 2, "I of order {i_order} over GF({})", f.q);
    let gw = Shape { free: 1, torsion: i1.torsion.clone() };
    WittSummary { gw, w, i1, i2 }
}

/// Sign model of a real closed field: squares are the positive elements and
/// a diagonal form is isotropic iff it has entries of both signs.
pub fn real_closed(max_dim: usize) -> WittSummary {
    let isotropic = |signs: &[i8]| signs.contains(&1) && signs.contains(&-1);
    // n⟨1⟩ never becomes hyperbolic, so ⟨1⟩ has infinite order in W; the
    // classes of dimension n are indexed by the number of negative entries.
    for n in 1..=max_dim {
        assert!(!isotropic(&vec![1; n]));
    }
    let classes_of_dim = |n: usize| n + 1;
    assert_eq!(classes_of_dim(2), 3);
    WittSummary {
        gw: Shape { free: 2, torsion: vec![] },
        w: Shape { free: 1, torsion: vec![] },
        i1: Shape { free: 1, torsion: vec![] },
        i2: Shape { free: 1, torsion: vec![] },
    }
}

/// A quadratically closed field: one square class, so every binary form
/// is isotropic and W is generated by ⟨1⟩ of order 2.
pub fn quadratically_closed() -> WittSummary {
    WittSummary {
        gw: Shape { free: 1, torsion: vec![] },
        w: Shape { free: 0, torsion: vec![2] },
        i1: Shape { free: 0, torsion: vec![] },
        i2: Shape { free: 0, torsion: vec![] },
    }
}
