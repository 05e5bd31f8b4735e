//! Hopf algebroids `(A, Γ)` attached to formal group laws.
//!
//! Elements of `Γ^{⊗_A s}` are stored in left normal form: a polynomial in
//! the `A` generators followed by `s` blocks of `Γ` generators, every
//! `A`-coefficient having been moved onto the leftmost factor. With that
//! identification every structure map is a ring homomorphism, i.e. a
//! substitution of generators.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::fgl::law::{s1_mul, s1_reverse, s1_x, s1_zero, Series1};
use crate::fgl::presentation::{Base, GradedRingPresentation};
use crate::fgl::ptypical::{generator_count, hazewinkel_logs};
use crate::fgl::universal::{lazard_data, lazard_ring};
use crate::poly::{q, Grading, Poly, Q};
use crate::registry::Registry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "prime")]
pub enum AlgebroidKind {
    Universal,
    PTypical(u64),
}

impl std::fmt::Display for AlgebroidKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlgebroidKind::Universal => write!(f, "universal"),
            AlgebroidKind::PTypical(p) => write!(f, "p_typical({p})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct HopfAlgebroid {
    pub kind: AlgebroidKind,
    pub a: GradedRingPresentation,
    /// Polynomial generators of Γ over A.
    pub gamma: GradedRingPresentation,
    pub degree_bound: u32,
    /// `η_R` of each A generator, over (A, Γ).
    pub eta_right: Vec<Poly<Q>>,
    /// `Δ` of each Γ generator, over (A, Γ, Γ).
    pub coproduct: Vec<Poly<Q>>,
    /// Antipode of each Γ generator, over (A, Γ).
    pub antipode: Vec<Poly<Q>>,
}

impl HopfAlgebroid {
    pub fn na(&self) -> usize {
        self.a.nvars()
    }

    pub fn ng(&self) -> usize {
        self.gamma.nvars()
    }

    /// Grading on (A, Γ^s).
    pub fn grading(&self, s: usize) -> Grading {
        let mut w = self.a.degrees();
        for _ in 0..s {
            w.extend(self.gamma.degrees());
        }
        Grading::new(w, self.degree_bound)
    }

    fn vars(&self, n: usize, start: usize, len: usize) -> Vec<Poly<Q>> {
        (start..start + len).map(|k| Poly::var(n, k)).collect()
    }

    /// `η_R(x_k)` placed with its Γ part in factor `slot` of an (A, Γ^s) ring.
    fn eta_right_into(&self, s: usize, slot: usize) -> Vec<Poly<Q>> {
        let (na, ng) = (self.na(), self.ng());
        let n = na + s * ng;
        let mut images = self.vars(n, 0, na);
        images.extend(self.vars(n, na + slot * ng, ng));
        self.eta_right.iter().map(|p| p.substitute(&images, n, &self.grading(s))).collect()
    }

    /// Applies `η_R` to a polynomial over A.
    pub fn apply_eta_right(&self, p: &Poly<Q>) -> Poly<Q> {
        p.substitute(&self.eta_right, self.na() + self.ng(), &self.grading(1))
    }

    /// Applies the antipode to an element of Γ.
    pub fn apply_antipode(&self, p: &Poly<Q>) -> Poly<Q> {
        let mut images = self.eta_right.clone();
        images.extend(self.antipode.iter().cloned());
        p.substitute(&images, self.na() + self.ng(), &self.grading(1))
    }

    /// Applies the counit to an element of Γ.
    pub fn apply_counit(&self, p: &Poly<Q>) -> Poly<Q> {
        p.kill_vars(|k| k >= self.na()).restrict(0, self.na())
    }

    /// Applies Δ to an element of Γ, landing in Γ ⊗_A Γ.
    pub fn apply_coproduct(&self, p: &Poly<Q>) -> Poly<Q> {
        let (na, ng) = (self.na(), self.ng());
        let n = na + 2 * ng;
        let mut images = self.vars(n, 0, na);
        images.extend(self.coproduct.iter().cloned());
        p.substitute(&images, n, &self.grading(2))
    }

    /// `Δ ⊗ 1` or `1 ⊗ Δ` on Γ ⊗_A Γ, landing in Γ^{⊗3}.
    fn coproduct_on_factor(&self, p: &Poly<Q>, factor: usize) -> Poly<Q> {
        let (na, ng) = (self.na(), self.ng());
        let n = na + 3 * ng;
        let g3 = self.grading(3);
        let mut images = self.vars(n, 0, na);
        if factor == 0 {
            images.extend(self.coproduct.iter().map(|d| d.embed(n, 0)));
            images.extend(self.vars(n, na + 2 * ng, ng));
        } else {
            // A-coefficients of Δ(γ) sit in the middle; move them left through
            // factor 1 via η_R.
            images.extend(self.vars(n, na, ng));
            let mut sub = self.eta_right_into(3, 0);
            sub.extend(self.vars(n, na + ng, ng));
            sub.extend(self.vars(n, na + 2 * ng, ng));
            for d in &self.coproduct {
                images.push(d.substitute(&sub, n, &g3));
            }
        }
        p.substitute(&images, n, &g3)
    }

    /// Symbolic check of every Hopf algebroid identity on generators.
    pub fn verify(&self) -> Result<()> {
        let (na, ng) = (self.na(), self.ng());
        let fail = |what: String| Err(CoreError::Internal(format!("{} algebroid: {what}", self.kind)));
        // ε η_L = ε η_R = id.
        for (k, e) in self.eta_right.iter().enumerate() {
            if self.apply_counit(e) != Poly::var(na, k) {
                return fail(format!("counit after right unit is not the identity on {}", self.a.generators[k].name));
            }
        }
        for k in 0..ng {
            let gk = Poly::var(na + ng, na + k);
            let d = &self.coproduct[k];
            // Counitality.
            let left = d.kill_vars(|v| v >= na && v < na + ng);
            let left: Poly<Q> = {
                let mut out = Poly::zero(na + ng);
                for (m, c) in left.terms() {
                    let mut mm = m[..na].to_vec();
                    mm.extend_from_slice(&m[na + ng..]);
                    out.add_term(mm, c.clone());
                }
                out
            };
            let right = d.kill_vars(|v| v >= na + ng).restrict(0, na + ng);
            if left != gk || right != gk {
                return fail(format!("counitality fails on {}", self.gamma.generators[k].name));
            }
            // Coassociativity.
            if self.coproduct_on_factor(d, 0) != self.coproduct_on_factor(d, 1) {
                return fail(format!("coassociativity fails on {}", self.gamma.generators[k].name));
            }
            // c∘c = id and the two antipode identities.
            if self.apply_antipode(&self.antipode[k]) != gk {
                return fail(format!("antipode is not an involution on {}", self.gamma.generators[k].name));
            }
            let n2 = na + 2 * ng;
            let g1 = self.grading(1);
            let mut mu_c1 = self.eta_right.clone();
            mu_c1.extend(self.antipode.iter().cloned());
            mu_c1.extend(self.vars(na + ng, na, ng));
            let mut mu_1c = self.vars(na + ng, 0, na + ng);
            mu_1c.extend(self.antipode.iter().cloned());
            debug_assert_eq!(mu_c1.len(), n2);
            if !d.substitute(&mu_c1, na + ng, &g1).is_zero() || !d.substitute(&mu_1c, na + ng, &g1).is_zero() {
                return fail(format!("antipode identity fails on {}", self.gamma.generators[k].name));
            }
        }
        for (k, e) in self.eta_right.iter().enumerate() {
            // c η_R = η_L.
            if self.apply_antipode(e) != Poly::var(na + ng, k) {
                return fail(format!("antipode does not exchange the units on {}", self.a.generators[k].name));
            }
            // Δ η_R(a) = 1 ⊗ η_R(a).
            let n2 = na + 2 * ng;
            let mut images = self.eta_right_into(2, 0);
            images.extend(self.vars(n2, na + ng, ng));
            let expected = e.substitute(&images, n2, &self.grading(2));
            if self.apply_coproduct(e) != expected {
                return fail(format!("coproduct is not right-unital on {}", self.a.generators[k].name));
            }
        }
        Ok(())
    }

    /// Γ monomials of degree `d` over A, i.e. the free basis of Γ_d.
    pub fn gamma_monomials(&self, d: u32) -> Vec<Vec<u16>> {
        self.gamma.monomials_of_degree(d)
    }
}

/// Coefficient of `x^{n}` in `Σ_i coeff_i · b(x)^{i+1}` for each n, where
/// `b_powers[i]` is `b(x)^{i}`.
fn series_power_table(b: &Series1, count: usize) -> Vec<Series1> {
    let nv = b[0].nvars();
    let order = b.len() as u32 - 1;
    let mut out = vec![{
        let mut one = s1_zero(nv, order);
        one[0] = Poly::one(nv);
        one
    }];
    for i in 1..=count {
        let next = s1_mul(&out[i - 1], b);
        out.push(next);
    }
    out
}

/// Γ of the universal algebroid: `A[b_1, b_2, …]` with `b_i` in degree `i`.
pub fn universal_gamma(bound: u32) -> GradedRingPresentation {
    GradedRingPresentation::polynomial(Base::Integers, (1..=bound).map(|i| (format!("b{i}"), i)).collect(), bound)
}

pub fn build_universal(bound: u32) -> Result<HopfAlgebroid> {
    let data = lazard_data(bound)?;
    let b = bound as usize;
    let a = lazard_ring(bound);
    let gamma = universal_gamma(bound);
    let order = bound + 1;

    // b(x) over (A, Γ).
    let n1 = 2 * b;
    let g1 = Grading::new([a.degrees(), gamma.degrees()].concat(), bound);
    let mut bx = s1_x(n1, order);
    for i in 1..=b {
        bx[i + 1] = Poly::var(n1, b + i - 1);
    }
    let bpow = series_power_table(&bx, b + 1);

    // η_R(m_n) = [x^{n+1}] Σ_i m_i b(x)^{i+1}, first with m's in the A slots.
    let mut eta_m = Vec::new();
    for n in 1..=b {
        let mut acc = bpow[1][n + 1].clone();
        for i in 1..=n {
            acc.add_assign(&Poly::var(n1, i - 1).mul_trunc(&bpow[i + 1][n + 1], &g1));
        }
        eta_m.push(acc);
    }
    // η_R(x_n) = X_n(η_R m), then rewrite the m's in terms of x's.
    let mut m_to_x: Vec<Poly<Q>> = data.m_in_x.iter().map(|p| p.embed(n1, 0)).collect();
    m_to_x.extend((b..n1).map(|k| Poly::var(n1, k)));
    let mut eta_right = Vec::new();
    for n in 1..=b {
        let in_m = data.x_in_m[n - 1].substitute(&eta_m, n1, &g1);
        let in_x = in_m.substitute(&m_to_x, n1, &g1);
        if !in_x.is_integral() {
            return Err(CoreError::Internal(format!("η_R(x{n}) is not integral")));
        }
        eta_right.push(in_x);
    }

    // Δ b(x) = b¹(b²(x)): Δ(b_n) = Σ_i b_i ⊗ [x^{n+1}] b(x)^{i+1}.
    let n2 = 3 * b;
    let g2 = Grading::new([a.degrees(), gamma.degrees(), gamma.degrees()].concat(), bound);
    let mut bx2 = s1_x(n2, order);
    for i in 1..=b {
        bx2[i + 1] = Poly::var(n2, 2 * b + i - 1);
    }
    let bpow2 = series_power_table(&bx2, b + 1);
    let mut coproduct = Vec::new();
    for n in 1..=b {
        let mut acc = bpow2[1][n + 1].clone();
        for i in 1..=n {
            acc.add_assign(&Poly::var(n2, b + i - 1).mul_trunc(&bpow2[i + 1][n + 1], &g2));
        }
        coproduct.push(acc);
    }

    // c(b)(x) is the compositional inverse of b(x).
    let inv = s1_reverse(&bx);
    let antipode: Vec<Poly<Q>> = (1..=b).map(|n| inv[n + 1].truncate(&g1)).collect();

    let h = HopfAlgebroid { kind: AlgebroidKind::Universal, a, gamma, degree_bound: bound, eta_right, coproduct, antipode };
    h.verify()?;
    Ok(h)
}

pub fn build_p_typical(p: u64, bound: u32) -> Result<HopfAlgebroid> {
    if !crate::arith::is_prime(p) {
        return Err(CoreError::Precondition(format!("{p} is not prime")));
    }
    let m = generator_count(p, bound);
    let degs: Vec<u32> = (1..=m).map(|i| (p.pow(i as u32) - 1) as u32).collect();
    let a = GradedRingPresentation::polynomial(
        Base::LocalAt { p },
        (1..=m).map(|i| (format!("v{i}"), degs[i - 1])).collect(),
        bound,
    );
    let gamma = GradedRingPresentation::polynomial(
        Base::LocalAt { p },
        (1..=m).map(|i| (format!("t{i}"), degs[i - 1])).collect(),
        bound,
    );
    let n1 = 2 * m;
    let n2 = 3 * m;
    let g1 = Grading::new([degs.clone(), degs.clone()].concat(), bound);
    let g2 = Grading::new([degs.clone(), degs.clone(), degs.clone()].concat(), bound);
    let logs1 = hazewinkel_logs(p, m, n1, 0, &g1);
    let logs2 = hazewinkel_logs(p, m, n2, 0, &g2);
    let pw = |i: usize| p.pow(i as u32) as u32;
    // t_j over (A, Γ) and over (A, Γ, Γ) in either factor; t_0 = 1.
    let t1 = |j: usize| if j == 0 { Poly::one(n1) } else { Poly::var(n1, m + j - 1) };
    let t2 = |j: usize, f: usize| if j == 0 { Poly::one(n2) } else { Poly::var(n2, m + f * m + j - 1) };

    // η_R(ℓ_n) = Σ_{i+j=n} ℓ_i t_j^{p^i}.
    let eta_l: Vec<Poly<Q>> = (0..=m)
        .map(|n| {
            let mut acc = Poly::zero(n1);
            for i in 0..=n {
                acc.add_assign(&logs1[i].mul_trunc(&t1(n - i).pow_trunc(pw(i), &g1), &g1));
            }
            acc
        })
        .collect();
    // η_R(v_n) = p η_R(ℓ_n) - Σ_{0<i<n} η_R(ℓ_i) η_R(v_{n-i})^{p^i}.
    let mut eta_right: Vec<Poly<Q>> = Vec::new();
    for n in 1..=m {
        let mut v = eta_l[n].scale(&q(p as i64));
        for i in 1..n {
            v = v.sub(&eta_l[i].mul_trunc(&eta_right[n - i - 1].pow_trunc(pw(i), &g1), &g1));
        }
        if !v.is_p_integral(p) {
            return Err(CoreError::Internal(format!("η_R(v{n}) is not p-integral")));
        }
        eta_right.push(v);
    }

    // Σ_{i+j=n} ℓ_i Δ(t_j)^{p^i} = Σ_{i+j+k=n} ℓ_i t_j^{p^i} ⊗ t_k^{p^{i+j}}.
    let mut coproduct: Vec<Poly<Q>> = Vec::new();
    for n in 1..=m {
        let mut rhs = Poly::zero(n2);
        for i in 0..=n {
            for j in 0..=n - i {
                let k = n - i - j;
                let term = logs2[i]
                    .mul_trunc(&t2(j, 0).pow_trunc(pw(i), &g2), &g2)
                    .mul_trunc(&t2(k, 1).pow_trunc(pw(i + j), &g2), &g2);
                rhs.add_assign(&term);
            }
        }
        for i in 1..n {
            rhs = rhs.sub(&logs2[i].mul_trunc(&coproduct[n - i - 1].pow_trunc(pw(i), &g2), &g2));
        }
        rhs = rhs.sub(&logs2[n]);
        if !rhs.is_p_integral(p) {
            return Err(CoreError::Internal(format!("Δ(t{n}) is not p-integral")));
        }
        coproduct.push(rhs);
    }

    // Σ_{i+j+k=n} ℓ_i t_j^{p^i} c(t_k)^{p^{i+j}} = ℓ_n.
    let mut antipode: Vec<Poly<Q>> = Vec::new();
    for n in 1..=m {
        let mut c = logs1[n].clone();
        for i in 0..=n {
            for j in 0..=n - i {
                let k = n - i - j;
                if k == n {
                    continue;
                }
                let ck = if k == 0 { Poly::one(n1) } else { antipode[k - 1].clone() };
                let term = logs1[i]
                    .mul_trunc(&t1(j).pow_trunc(pw(i), &g1), &g1)
                    .mul_trunc(&ck.pow_trunc(pw(i + j), &g1), &g1);
                c = c.sub(&term);
            }
        }
        if !c.is_p_integral(p) {
            return Err(CoreError::Internal(format!("c(t{n}) is not p-integral")));
        }
        antipode.push(c);
    }

    let h = HopfAlgebroid {
        kind: AlgebroidKind::PTypical(p),
        a,
        gamma,
        degree_bound: bound,
        eta_right,
        coproduct,
        antipode,
    };
    h.verify()?;
    Ok(h)
}

/// A named way of building an algebroid.
pub trait AlgebroidRecipe: Send + Sync {
    fn build(&self, prime: Option<u64>, bound: u32) -> Result<HopfAlgebroid>;
}

struct UniversalRecipe;
struct PTypicalRecipe;

impl AlgebroidRecipe for UniversalRecipe {
    fn build(&self, _prime: Option<u64>, bound: u32) -> Result<HopfAlgebroid> {
        build_universal(bound)
    }
}

impl AlgebroidRecipe for PTypicalRecipe {
    fn build(&self, prime: Option<u64>, bound: u32) -> Result<HopfAlgebroid> {
        let p = prime.ok_or_else(|| CoreError::Precondition("p_typical needs a prime".into()))?;
        build_p_typical(p, bound)
    }
}

pub fn algebroid_recipes() -> Registry<dyn AlgebroidRecipe> {
    let mut r: Registry<dyn AlgebroidRecipe> = Registry::new();
    r.register("universal", Arc::new(UniversalRecipe));
    r.register("p_typical", Arc::new(PTypicalRecipe));
    r
}

pub fn build_algebroid(kind: AlgebroidKind, bound: u32) -> Result<HopfAlgebroid> {
    if bound == 0 {
        return Err(CoreError::Precondition("bound must be >= 1".into()));
    }
    match kind {
        AlgebroidKind::Universal => algebroid_recipes().get("universal")?.build(None, bound),
        AlgebroidKind::PTypical(p) => algebroid_recipes().get("p_typical")?.build(Some(p), bound),
    }
}
