//! Brute-force model of the simplex algebra: commutative polynomials in `x_a` and
//! `d_{s,a}`, reduced modulo the displacement ideal by exact linear algebra.

#![allow(dead_code)]

use std::collections::BTreeMap;

use gerbe::algebra::{q, AlgebraContext, AlgebraElement, Mono, Q};
use num_traits::{One, Zero};

/// Exponent vector: `base_dim` base slots followed by `order * base_dim` displacement slots.
pub type Exps = Vec<u32>;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    pub base_dim: usize,
    pub order: usize,
    pub terms: BTreeMap<Exps, Q>,
}

impl Poly {
    pub fn zero(base_dim: usize, order: usize) -> Poly {
        Poly { base_dim, order, terms: BTreeMap::new() }
    }

    fn nvars(&self) -> usize {
        self.base_dim * (1 + self.order)
    }

    pub fn var(base_dim: usize, order: usize, idx: usize) -> Poly {
        let mut p = Poly::zero(base_dim, order);
        let mut e = vec![0; p.nvars()];
        e[idx] += 1;
        p.terms.insert(e, Q::one());
        p
    }

    pub fn constant(base_dim: usize, order: usize, c: Q) -> Poly {
        let mut p = Poly::zero(base_dim, order);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.nvars()], c);
        }
        p
    }

    /// Index of `x_a` (1-based axis).
    pub fn x_idx(&self, a: usize) -> usize {
        a - 1
    }

    /// Index of `d_{s,a}` (1-based slot and axis).
    pub fn d_idx(&self, s: usize, a: usize) -> usize {
        self.base_dim + (s - 1) * self.base_dim + (a - 1)
    }

    fn add_term(&mut self, e: Exps, c: Q) {
        let entry = self.terms.entry(e).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            let k: Vec<Exps> = self.terms.iter().filter(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).collect();
            for k in k {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), -c.clone());
        }
        r
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero(self.base_dim, self.order);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    /// Drops every monomial of weight (total degree) above `cap`.
    pub fn truncate(&self, cap: u32) -> Poly {
        let mut r = self.clone();
        r.terms.retain(|e, _| e.iter().sum::<u32>() <= cap);
        r
    }

    /// Substitutes `images[v]` for variable `v`, truncating products at `cap` as it goes.
    pub fn substitute(&self, images: &[Poly], target_order: usize, cap: u32) -> Poly {
        let mut r = Poly::zero(self.base_dim, target_order);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(self.base_dim, target_order, c.clone());
            for (v, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t.mul(&images[v]).truncate(cap);
                }
            }
            r = r.add(&t);
        }
        r
    }
}

/// The commutative polynomial underlying an engine element: each canonical displacement
/// monomial `d_{s1}^{a1} … d_{sk}^{ak}` becomes the plain product of its factors.
pub fn lift(e: &AlgebraElement) -> Poly {
    let ctx = e.context();
    let (bd, n) = (ctx.base_dim(), ctx.order());
    let mut p = Poly::zero(bd, n);
    for (m, c) in e.terms() {
        let mut ex = vec![0u32; bd * (1 + n)];
        for a in 1..=bd {
            ex[a - 1] = m.exp(a) as u32;
        }
        for (s, a) in m.factors() {
            ex[bd + (s as usize - 1) * bd + (a as usize - 1)] += 1;
        }
        p.add_term(ex, c.clone());
    }
    p
}

/// Row-reduced basis of a subspace of a monomial space.
struct Echelon {
    rows: Vec<(Exps, BTreeMap<Exps, Q>)>,
}

impl Echelon {
    fn new() -> Echelon {
        Echelon { rows: Vec::new() }
    }

    fn reduce(&self, mut v: BTreeMap<Exps, Q>) -> BTreeMap<Exps, Q> {
        for (pivot, row) in &self.rows {
            if let Some(c) = v.get(pivot).cloned() {
                for (k, rc) in row {
                    let e = v.entry(k.clone()).or_insert_with(Q::zero);
                    *e -= &c * rc;
                }
                v.retain(|_, x| !x.is_zero());
            }
        }
        v
    }

    fn insert(&mut self, v: BTreeMap<Exps, Q>) -> bool {
        let v = self.reduce(v);
        let Some((pivot, pc)) = v.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let row: BTreeMap<Exps, Q> = v.into_iter().map(|(k, c)| (k, c / &pc)).collect();
        for (_, other) in &mut self.rows {
            if let Some(c) = other.get(&pivot).cloned() {
                for (k, rc) in &row {
                    let e = other.entry(k.clone()).or_insert_with(Q::zero);
                    *e -= &c * rc;
                }
                other.retain(|_, x| !x.is_zero());
            }
        }
        self.rows.push((pivot, row));
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

fn monomials(nvars: usize, deg: u32) -> Vec<Vec<u32>> {
    if nvars == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=deg).rev() {
        for mut rest in monomials(nvars - 1, deg - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The ideal generated by `d_{s,a} d_{s,b}` and `d_{s,a} d_{t,b} + d_{s,b} d_{t,a}`
/// (equivalently: every `x_i − x_j` squares to zero) in `Q[d]`, degree by degree.
pub struct DispIdeal {
    pub base_dim: usize,
    pub order: usize,
    parts: Vec<Echelon>,
}

impl DispIdeal {
    pub fn new(base_dim: usize, order: usize, max_deg: u32) -> DispIdeal {
        let nv = base_dim * order;
        let var = |s: usize, a: usize| (s - 1) * base_dim + (a - 1);
        let mut gens: Vec<BTreeMap<Vec<u32>, Q>> = Vec::new();
        let unit = |i: usize, j: usize| {
            let mut e = vec![0u32; nv];
            e[i] += 1;
            e[j] += 1;
            e
        };
        for s in 1..=order {
            for t in s..=order {
                for a in 1..=base_dim {
                    for b in a..=base_dim {
                        let mut g = BTreeMap::new();
                        if s == t {
                            g.insert(unit(var(s, a), var(s, b)), Q::one());
                        } else {
                            *g.entry(unit(var(s, a), var(t, b))).or_insert_with(Q::zero) += Q::one();
                            *g.entry(unit(var(s, b), var(t, a))).or_insert_with(Q::zero) += Q::one();
                        }
                        gens.push(g);
                    }
                }
            }
        }
        let mut parts = Vec::new();
        for k in 0..=max_deg {
            let mut ech = Echelon::new();
            if k >= 2 {
                for m in monomials(nv, k - 2) {
                    for g in &gens {
                        let v = g
                            .iter()
                            .map(|(e, c)| (e.iter().zip(&m).map(|(a, b)| a + b).collect(), c.clone()))
                            .collect();
                        ech.insert(v);
                    }
                }
            }
            parts.push(ech);
        }
        DispIdeal { base_dim, order, parts }
    }

    /// `dim Q[d]_k / I_k`.
    pub fn quotient_dim(&self, k: u32) -> usize {
        let total = monomials(self.base_dim * self.order, k).len();
        total - self.parts[k as usize].rank()
    }

    /// Membership of a polynomial in `Q[x] ⊗ I`.
    pub fn contains(&self, p: &Poly) -> bool {
        assert_eq!((p.base_dim, p.order), (self.base_dim, self.order));
        let bd = self.base_dim;
        let mut groups: BTreeMap<(Vec<u32>, u32), BTreeMap<Vec<u32>, Q>> = BTreeMap::new();
        for (e, c) in &p.terms {
            let (base, disp) = e.split_at(bd);
            let k: u32 = disp.iter().sum();
            groups.entry((base.to_vec(), k)).or_default().insert(disp.to_vec(), c.clone());
        }
        groups.into_iter().all(|((_, k), v)| {
            let k = k as usize;
            assert!(k < self.parts.len(), "ideal computed only up to degree {}", self.parts.len() - 1);
            self.parts[k].reduce(v).is_empty()
        })
    }
}

/// The Taylor-shift images `x ↦ x + d_{θ(0)}`, `d_j ↦ d_{θ(j)} − d_{θ(0)}` for a vertex map.
pub fn pull_images(base_dim: usize, theta: &[usize], target_order: usize) -> Vec<Poly> {
    let z = Poly::zero(base_dim, target_order);
    let d = |s: usize, a: usize| {
        if s == 0 {
            z.clone()
        } else {
            Poly::var(base_dim, target_order, z.d_idx(s, a))
        }
    };
    let mut imgs = Vec::new();
    for a in 1..=base_dim {
        imgs.push(Poly::var(base_dim, target_order, a - 1).add(&d(theta[0], a)));
    }
    for j in 1..theta.len() {
        for a in 1..=base_dim {
            imgs.push(d(theta[j], a).sub(&d(theta[0], a)));
        }
    }
    imgs
}

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// A random element supported on the whole basis of `ctx`, small integer coefficients.
pub fn random_element(ctx: AlgebraContext, rng: &mut impl rand::Rng, density: f64) -> AlgebraElement {
    let mut terms: Vec<(Mono, Q)> = Vec::new();
    for m in ctx.basis() {
        if rng.gen_bool(density) {
            terms.push((m, q(rng.gen_range(-3..=3))));
        }
    }
    AlgebraElement::from_terms(ctx, terms)
}
