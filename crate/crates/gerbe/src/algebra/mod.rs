//! Functions on the naive infinitesimal n-simplex over a truncated polynomial base.
//!
//! An element is a rational combination of monomials `x^β · d_{s1}^{a1} … d_{sk}^{ak}`
//! where the displacement slots `s` and axes `a` are both strictly increasing. The
//! relations `d_i^a d_i^b = 0` and `d_i^a d_j^b = -d_i^b d_j^a` make this basis
//! canonical; see `Mono::mul` for the sign rule.
//!
//! Truncation is by weight (base degree plus displacement degree). A pure base
//! truncation would not survive the Taylor shift `x ↦ x + d`, whereas the weight
//! filtration is preserved by products, pullbacks and degeneracies alike.

mod parse;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub const MAX_BASE_DIM: usize = 8;
pub const MAX_ORDER: usize = 5;
pub const MAX_TRUNC: usize = 8;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Base coordinates and truncation shared by all simplex orders of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    base_dim: u8,
    trunc: u8,
}

impl Frame {
    pub fn new(base_dim: usize, trunc_degree: usize) -> Result<Frame> {
        if base_dim == 0 || base_dim > MAX_BASE_DIM {
            return Err(Error::InvalidContext(format!(
                "base_dim must lie in 1..={MAX_BASE_DIM}, got {base_dim}"
            )));
        }
        if trunc_degree > MAX_TRUNC {
            return Err(Error::InvalidContext(format!(
                "trunc_degree must lie in 0..={MAX_TRUNC}, got {trunc_degree}"
            )));
        }
        Ok(Frame {
            base_dim: base_dim as u8,
            trunc: trunc_degree as u8,
        })
    }

    pub fn base_dim(self) -> usize {
        self.base_dim as usize
    }

    pub fn trunc_degree(self) -> usize {
        self.trunc as usize
    }

    /// Largest weight kept. Top-degree displacement terms keep base degree `trunc_degree`.
    pub fn weight_cap(self) -> u8 {
        self.trunc + self.base_dim.min(MAX_ORDER as u8)
    }

    pub fn simplex(self, order: usize) -> AlgebraContext {
        assert!(order <= MAX_ORDER, "simplex order {order} exceeds {MAX_ORDER}");
        AlgebraContext {
            frame: self,
            order: order as u8,
        }
    }

    pub fn try_simplex(self, order: usize) -> Result<AlgebraContext> {
        if order > MAX_ORDER {
            return Err(Error::DegreeOverflow(format!(
                "simplex order {order} exceeds {MAX_ORDER}"
            )));
        }
        Ok(self.simplex(order))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraContext {
    frame: Frame,
    order: u8,
}

impl AlgebraContext {
    pub fn new(base_dim: usize, simplex_order: usize, trunc_degree: usize) -> Result<Self> {
        Frame::new(base_dim, trunc_degree)?.try_simplex(simplex_order)
    }

    pub fn frame(self) -> Frame {
        self.frame
    }

    pub fn base_dim(self) -> usize {
        self.frame.base_dim()
    }

    pub fn order(self) -> usize {
        self.order as usize
    }

    pub fn trunc_degree(self) -> usize {
        self.frame.trunc_degree()
    }

    /// All canonical monomials of this context, base monomials included.
    pub fn basis(self) -> Vec<Mono> {
        let cap = self.frame.weight_cap();
        let mut out = Vec::new();
        for disp in self.displacement_basis() {
            let room = cap - disp.weight();
            for e in base_exponents(self.base_dim(), room) {
                out.push(Mono::from_parts(&e, disp.slots, disp.axes));
            }
        }
        out.sort();
        out
    }

    /// Monomials `d_S^A` with `|S| = |A|`, base part trivial.
    pub fn displacement_basis(self) -> Vec<Mono> {
        let n = self.order();
        let d = self.base_dim();
        let mut out = Vec::new();
        for slots in 0u16..(1 << n) {
            let k = slots.count_ones();
            for axes in 0u16..(1 << d) {
                if axes.count_ones() == k {
                    out.push(Mono {
                        slots: slots as u8,
                        axes: axes as u8,
                        deg: 0,
                        exps: 0,
                    });
                }
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for AlgebraContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(d={}, n={}, D={})",
            self.base_dim(),
            self.order(),
            self.trunc_degree()
        )
    }
}

fn base_exponents(dim: usize, max_deg: u8) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        let mut next = Vec::new();
        for e in &out {
            let used: u8 = e.iter().sum();
            for k in 0..=(max_deg - used) {
                let mut f = e.clone();
                f.push(k);
                next.push(f);
            }
        }
        out = next;
    }
    out
}

/// Canonical monomial. Bit `s-1` of `slots` is slot `s`, bit `a-1` of `axes` is axis `a`;
/// base exponents are packed four bits per coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    slots: u8,
    axes: u8,
    deg: u8,
    exps: u32,
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn bits(mask: u8) -> impl Iterator<Item = u8> {
    (0..8u8).filter(move |b| mask & (1 << b) != 0).map(|b| b + 1)
}

impl Mono {
    pub const ONE: Mono = Mono {
        slots: 0,
        axes: 0,
        deg: 0,
        exps: 0,
    };

    fn key(&self) -> (u32, u8, u8, u8, std::cmp::Reverse<u32>) {
        (
            self.slots.count_ones(),
            self.slots,
            self.axes,
            self.deg,
            std::cmp::Reverse(self.exps),
        )
    }

    pub fn from_parts(exps: &[u8], slots: u8, axes: u8) -> Mono {
        assert_eq!(slots.count_ones(), axes.count_ones());
        let mut packed = 0u32;
        let mut deg = 0u8;
        for (a, &e) in exps.iter().enumerate() {
            assert!(e < 16);
            packed |= (e as u32) << (4 * a);
            deg += e;
        }
        Mono {
            slots,
            axes,
            deg,
            exps: packed,
        }
    }

    pub fn x(axis: usize) -> Mono {
        Mono {
            slots: 0,
            axes: 0,
            deg: 1,
            exps: 1 << (4 * (axis - 1)),
        }
    }

    pub fn d(slot: usize, axis: usize) -> Mono {
        Mono {
            slots: 1 << (slot - 1),
            axes: 1 << (axis - 1),
            deg: 0,
            exps: 0,
        }
    }

    /// Exponent of `x^axis` (1-based).
    pub fn exp(self, axis: usize) -> u8 {
        ((self.exps >> (4 * (axis - 1))) & 0xF) as u8
    }

    pub fn base_degree(self) -> u8 {
        self.deg
    }

    pub fn disp_degree(self) -> u8 {
        self.slots.count_ones() as u8
    }

    pub fn weight(self) -> u8 {
        self.deg + self.disp_degree()
    }

    pub fn slot_mask(self) -> u8 {
        self.slots
    }

    pub fn axis_mask(self) -> u8 {
        self.axes
    }

    pub fn base_part(self) -> Mono {
        Mono {
            slots: 0,
            axes: 0,
            ..self
        }
    }

    pub fn disp_part(self) -> Mono {
        Mono {
            deg: 0,
            exps: 0,
            ..self
        }
    }

    pub fn is_base(self) -> bool {
        self.slots == 0
    }

    /// `(slot, axis)` factors in canonical order.
    pub fn factors(self) -> impl Iterator<Item = (u8, u8)> {
        bits(self.slots).zip(bits(self.axes))
    }

    /// Product of canonical monomials: `None` if it vanishes, else the monomial and
    /// whether the sign flips. Pairing slots with axes in sorted order, the sign is the
    /// parity of inversions between the two factor lists.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Mono) -> Option<(Mono, bool)> {
        if self.slots & other.slots != 0 || self.axes & other.axes != 0 {
            return None;
        }
        let mut neg = false;
        if self.slots != 0 && other.slots != 0 {
            for (s1, a1) in self.factors() {
                for (s2, a2) in other.factors() {
                    if (s1 < s2) != (a1 < a2) {
                        neg = !neg;
                    }
                }
            }
        }
        Some((
            Mono {
                slots: self.slots | other.slots,
                axes: self.axes | other.axes,
                deg: self.deg + other.deg,
                exps: self.exps + other.exps,
            },
            neg,
        ))
    }

    fn lower(self, axis: usize) -> Mono {
        Mono {
            deg: self.deg - 1,
            exps: self.exps - (1 << (4 * (axis - 1))),
            ..self
        }
    }
}

/// Element of the simplex algebra in canonical normal form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    ctx: AlgebraContext,
    terms: Vec<(Mono, Q)>,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ {}", self, self.ctx)
    }
}

fn normalize(raw: &mut Vec<(Mono, Q)>, cap: u8) -> Vec<(Mono, Q)> {
    raw.retain(|(m, c)| m.weight() <= cap && !c.is_zero());
    raw.sort_by_key(|t| t.0);
    let mut out: Vec<(Mono, Q)> = Vec::with_capacity(raw.len());
    for (m, c) in raw.drain(..) {
        match out.last_mut() {
            Some((lm, lc)) if *lm == m => *lc += c,
            _ => out.push((m, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

impl AlgebraElement {
    pub fn zero(ctx: AlgebraContext) -> Self {
        AlgebraElement {
            ctx,
            terms: Vec::new(),
        }
    }

    pub fn one(ctx: AlgebraContext) -> Self {
        Self::constant(ctx, Q::one())
    }

    pub fn constant(ctx: AlgebraContext, c: Q) -> Self {
        Self::from_terms(ctx, vec![(Mono::ONE, c)])
    }

    pub fn int(ctx: AlgebraContext, c: i64) -> Self {
        Self::constant(ctx, q(c))
    }

    /// Base coordinate `x^axis`, 1-based.
    pub fn x(ctx: AlgebraContext, axis: usize) -> Self {
        assert!(axis >= 1 && axis <= ctx.base_dim(), "axis {axis} out of range");
        Self::from_terms(ctx, vec![(Mono::x(axis), Q::one())])
    }

    /// Displacement generator `d_slot^axis`; slot 0 is the zero element.
    pub fn d(ctx: AlgebraContext, slot: usize, axis: usize) -> Self {
        assert!(slot <= ctx.order(), "slot {slot} out of range");
        assert!(axis >= 1 && axis <= ctx.base_dim(), "axis {axis} out of range");
        if slot == 0 {
            return Self::zero(ctx);
        }
        Self::from_terms(ctx, vec![(Mono::d(slot, axis), Q::one())])
    }

    /// Builds an element from arbitrary (possibly repeated) canonical monomials.
    pub fn from_terms(ctx: AlgebraContext, mut raw: Vec<(Mono, Q)>) -> Self {
        for (m, _) in &raw {
            debug_assert!(Self::mono_fits(ctx, *m));
        }
        let terms = normalize(&mut raw, ctx.frame.weight_cap());
        AlgebraElement { ctx, terms }
    }

    fn mono_fits(ctx: AlgebraContext, m: Mono) -> bool {
        let n = ctx.order();
        let d = ctx.base_dim();
        (m.slots as u16) < (1 << n)
            && (m.axes as u16) < (1 << d)
            && (d..MAX_BASE_DIM).all(|a| (m.exps >> (4 * a)) & 0xF == 0)
    }

    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn terms(&self) -> &[(Mono, Q)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == Mono::ONE && self.terms[0].1.is_one()
    }

    pub fn coefficient(&self, m: Mono) -> Q {
        match self.terms.binary_search_by(|(t, _)| t.cmp(&m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    /// Value with every base coordinate and displacement set to zero.
    pub fn constant_term(&self) -> Q {
        self.coefficient(Mono::ONE)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| *m == Mono::ONE)
    }

    /// True if no displacement generator occurs.
    pub fn is_base(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_base())
    }

    fn same_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch(
                self.ctx.to_string(),
                other.ctx.to_string(),
            ));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_ctx(other)?;
        let mut raw: Vec<(Mono, Q)> = self.terms.iter().chain(other.terms.iter()).cloned().collect();
        Ok(AlgebraElement {
            ctx: self.ctx,
            terms: normalize(&mut raw, self.ctx.frame.weight_cap()),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_ctx(other)?;
        let cap = self.ctx.frame.weight_cap();
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            let w1 = m1.weight();
            for (m2, c2) in &other.terms {
                if w1 + m2.weight() > cap {
                    continue;
                }
                if let Some((m, neg)) = m1.mul(*m2) {
                    let c = c1 * c2;
                    raw.push((m, if neg { -c } else { c }));
                }
            }
        }
        Ok(AlgebraElement {
            ctx: self.ctx,
            terms: normalize(&mut raw, cap),
        })
    }

    pub fn neg(&self) -> Self {
        AlgebraElement {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Q) -> Self {
        if k.is_zero() {
            return Self::zero(self.ctx);
        }
        AlgebraElement {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.ctx);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse of an element whose constant term is non-zero. Everything else is
    /// nilpotent, so the geometric series terminates.
    pub fn inverse(&self) -> Result<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::NotInvertible(format!("{self} has zero constant term")));
        }
        let cinv = c.recip();
        let n = &self.scale(&cinv) - &Self::one(self.ctx);
        let mut acc = Self::one(self.ctx);
        let mut pw = Self::one(self.ctx);
        let mn = n.neg();
        loop {
            pw = &pw * &mn;
            if pw.is_zero() {
                break;
            }
            acc = &acc + &pw;
        }
        Ok(acc.scale(&cinv))
    }

    /// Keeps the terms whose monomial passes `keep`.
    pub fn filter(&self, keep: impl Fn(Mono) -> bool) -> Self {
        AlgebraElement {
            ctx: self.ctx,
            terms: self.terms.iter().filter(|(m, _)| keep(*m)).cloned().collect(),
        }
    }

    /// Same element read in a context with the same frame and a larger simplex order.
    pub fn widen(&self, order: usize) -> Self {
        assert!(order >= self.ctx.order());
        AlgebraElement {
            ctx: self.ctx.frame.simplex(order),
            terms: self.terms.clone(),
        }
    }

    /// Reads a base-only element in another simplex order of the same frame.
    pub fn rebase(&self, ctx: AlgebraContext) -> Result<Self> {
        if ctx.frame != self.ctx.frame {
            return Err(Error::ContextMismatch(self.ctx.to_string(), ctx.to_string()));
        }
        if self.terms.iter().any(|(m, _)| !Self::mono_fits(ctx, *m)) {
            return Err(Error::ContextMismatch(self.ctx.to_string(), ctx.to_string()));
        }
        Ok(AlgebraElement {
            ctx,
            terms: self.terms.clone(),
        })
    }

    /// Image under the quotient to a smaller truncation degree.
    pub fn truncate(&self, trunc_degree: usize) -> Result<Self> {
        let frame = Frame::new(self.ctx.base_dim(), trunc_degree)?;
        let ctx = frame.simplex(self.ctx.order());
        let cap = frame.weight_cap();
        Ok(AlgebraElement {
            ctx,
            terms: self.terms.iter().filter(|(m, _)| m.weight() <= cap).cloned().collect(),
        })
    }

    /// Partial derivative in `x^axis` (base coordinates only; displacements are constants).
    pub fn diff(&self, axis: usize) -> Self {
        let raw = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(axis) > 0)
            .map(|(m, c)| (m.lower(axis), c * q(m.exp(axis) as i64)))
            .collect();
        Self::from_terms(self.ctx, raw)
    }

    /// Pullback along the map of infinitesimal simplices induced by a vertex map
    /// `θ: [0..m] → [0..n]`, where `self` lives on Δ^m and `target` is Δ^n:
    /// `x ↦ x + d_{θ(0)}` and `d_j ↦ d_{θ(j)} − d_{θ(0)}`. `θ` need not be injective.
    pub fn pull(&self, theta: &[usize], target: AlgebraContext) -> Result<Self> {
        if theta.len() != self.ctx.order() + 1 {
            return Err(Error::IndexOutOfRange(format!(
                "vertex map {theta:?} does not start from Δ^{}",
                self.ctx.order()
            )));
        }
        if target.frame != self.ctx.frame {
            return Err(Error::ContextMismatch(self.ctx.to_string(), target.to_string()));
        }
        if let Some(&bad) = theta.iter().find(|&&v| v > target.order()) {
            return Err(Error::IndexOutOfRange(format!(
                "vertex {bad} outside Δ^{}",
                target.order()
            )));
        }
        let t0 = theta[0];
        let base_dim = self.ctx.base_dim();
        let mut raw: Vec<(Mono, Q)> = Vec::new();
        let mut i = 0;
        while i < self.terms.len() {
            let disp = self.terms[i].0.disp_part();
            let mut j = i;
            while j < self.terms.len() && self.terms[j].0.disp_part() == disp {
                j += 1;
            }
            // image of the displacement monomial
            let mut img: Vec<(Mono, bool)> = vec![(Mono::ONE, false)];
            for (s, a) in disp.factors() {
                let mut choices: Vec<(Mono, bool)> = Vec::with_capacity(2);
                let ts = theta[s as usize];
                if ts != 0 && ts != t0 {
                    choices.push((Mono::d(ts, a as usize), false));
                }
                if t0 != 0 && ts != t0 {
                    choices.push((Mono::d(t0, a as usize), true));
                }
                let mut next = Vec::new();
                for (m, sg) in &img {
                    for (f, fs) in &choices {
                        if let Some((p, ps)) = m.mul(*f) {
                            next.push((p, sg ^ fs ^ ps));
                        }
                    }
                }
                img = next;
                if img.is_empty() {
                    break;
                }
            }
            if !img.is_empty() {
                for (m, c) in &self.terms[i..j] {
                    let base = m.base_part();
                    for (pm, ps) in &img {
                        let (prod, neg) = base.mul(*pm).expect("base monomials commute");
                        let v = if ps ^ neg { -c.clone() } else { c.clone() };
                        raw.push((prod, v));
                    }
                    if t0 != 0 {
                        for a in 1..=base_dim {
                            let e = base.exp(a);
                            if e == 0 {
                                continue;
                            }
                            let shifted = base.lower(a);
                            let dm = Mono::d(t0, a);
                            for (pm, ps) in &img {
                                if let Some((p1, s1)) = dm.mul(*pm) {
                                    let (prod, _) = shifted.mul(p1).expect("base monomials commute");
                                    let v = c * q(e as i64);
                                    raw.push((prod, if ps ^ s1 { -v } else { v }));
                                }
                            }
                        }
                    }
                }
            }
            i = j;
        }
        Ok(Self::from_terms(target, raw))
    }

    /// Pullback along an injective vertex map (face inclusions, reorderings, and their
    /// composites).
    pub fn pullback(&self, alpha: &[usize], target: AlgebraContext) -> Result<Self> {
        let mut seen = 0u32;
        for &v in alpha {
            if v < 32 && seen & (1 << v) != 0 {
                return Err(Error::NotInjective(alpha.to_vec()));
            }
            if v < 32 {
                seen |= 1 << v;
            }
        }
        self.pull(alpha, target)
    }

    /// Restriction to the degenerate locus `x_i = x_j`: substitutes `d_j ↦ d_i`.
    pub fn degeneracy_subst(&self, i: usize, j: usize) -> Result<Self> {
        let n = self.ctx.order();
        if !(i < j && j <= n) {
            return Err(Error::IndexOutOfRange(format!(
                "degeneracy ({i},{j}) on Δ^{n}"
            )));
        }
        let mut theta: Vec<usize> = (0..=n).collect();
        theta[j] = i;
        self.pull(&theta, self.ctx)
    }

    /// Value with all displacements set to zero (restriction to the diagonal).
    pub fn diagonal(&self) -> Self {
        self.filter(|m| m.is_base())
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $checked:ident) => {
        impl std::ops::$tr<&AlgebraElement> for &AlgebraElement {
            type Output = AlgebraElement;
            fn $f(self, rhs: &AlgebraElement) -> AlgebraElement {
                self.$checked(rhs).expect("algebra context mismatch")
            }
        }
        impl std::ops::$tr<AlgebraElement> for AlgebraElement {
            type Output = AlgebraElement;
            fn $f(self, rhs: AlgebraElement) -> AlgebraElement {
                self.$checked(&rhs).expect("algebra context mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement::neg(self)
    }
}

/// Vertex map of the face of Δ^n omitting vertex `k`.
pub fn face_map(n: usize, k: usize) -> Vec<usize> {
    (0..=n).filter(|&v| v != k).collect()
}

/// Vertex map Δ^n → Δ^{n+1}-coordinates repeating vertex `i`: `(x0..xi, xi, ..x_n)`.
pub fn degeneracy_map(n: usize, i: usize) -> Vec<usize> {
    (0..=n + 1).map(|v| if v <= i { v } else { v - 1 }).collect()
}

pub(crate) fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors: Vec<String> = Vec::new();
            for a in 1..=self.ctx.base_dim() {
                for _ in 0..m.exp(a) {
                    factors.push(format!("x{a}"));
                }
            }
            for (s, a) in m.factors() {
                factors.push(format!("d{s}_{a}"));
            }
            if factors.is_empty() {
                write!(f, "{}", fmt_q(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_q(&mag), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(d: usize, n: usize) -> AlgebraContext {
        AlgebraContext::new(d, n, 2).unwrap()
    }

    #[test]
    fn sign_rule_examples() {
        let c = ctx(2, 2);
        let a = AlgebraElement::d(c, 1, 1) * AlgebraElement::d(c, 2, 2);
        let b = AlgebraElement::d(c, 1, 2) * AlgebraElement::d(c, 2, 1);
        assert!((&a + &b).is_zero());
        assert!((AlgebraElement::d(c, 1, 1) * AlgebraElement::d(c, 1, 2)).is_zero());
        assert!((AlgebraElement::d(c, 1, 1) * AlgebraElement::d(c, 2, 1)).is_zero());
        assert_eq!(b, a.neg());
    }

    #[test]
    fn addition_examples() {
        let c = ctx(2, 1);
        let x = AlgebraElement::x(c, 1);
        assert!((&x + &x.neg()).is_zero());
        let y = &x + &AlgebraElement::d(c, 1, 1);
        assert_eq!((&y + &x).to_string(), "2*x1 + d1_1");
    }

    #[test]
    fn pullback_examples() {
        let c0 = ctx(2, 0);
        let c1 = ctx(2, 1);
        let c2 = ctx(2, 2);
        let x = AlgebraElement::x(c0, 1);
        assert_eq!(x.pullback(&[1], c1).unwrap().to_string(), "x1 + d1_1");
        let d = AlgebraElement::d(c1, 1, 1);
        assert_eq!(d.pullback(&[0, 2], c2).unwrap(), AlgebraElement::d(c2, 2, 1));
        assert_eq!(
            d.pullback(&[1, 2], c2).unwrap(),
            AlgebraElement::d(c2, 2, 1) - AlgebraElement::d(c2, 1, 1)
        );
        assert!(matches!(d.pullback(&[1, 1], c2), Err(Error::NotInjective(_))));
    }

    #[test]
    fn degeneracy_examples() {
        let c = ctx(2, 2);
        let a = AlgebraElement::d(c, 1, 1) * AlgebraElement::d(c, 2, 2);
        assert!(a.degeneracy_subst(1, 2).unwrap().is_zero());
        assert!(AlgebraElement::d(c, 2, 1).degeneracy_subst(0, 2).unwrap().is_zero());
        let x = AlgebraElement::x(c, 1);
        assert_eq!(x.degeneracy_subst(1, 2).unwrap(), x);
        assert!(a.degeneracy_subst(2, 1).is_err());
    }

    #[test]
    fn taylor_shift_keeps_weight() {
        let c0 = ctx(1, 0);
        let c1 = ctx(1, 1);
        // x^3 has weight 3 <= 2 + 1 and survives; its shift carries 3 x^2 d.
        let x3 = AlgebraElement::x(c0, 1).pow(3);
        let p = x3.pullback(&[1], c1).unwrap();
        assert_eq!(p.to_string(), "x1*x1*x1 + 3*x1*x1*d1_1");
    }

    #[test]
    fn inverse_of_unit() {
        let c = ctx(2, 1);
        let a = &AlgebraElement::int(c, 2) + &(AlgebraElement::x(c, 1) * AlgebraElement::d(c, 1, 2));
        let b = a.inverse().unwrap();
        assert!((&a * &b).is_one());
        assert!(AlgebraElement::x(c, 1).inverse().is_err());
    }

    #[test]
    fn basis_dimension_formula() {
        fn binom(n: usize, k: usize) -> usize {
            if k > n {
                return 0;
            }
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }
        for d in 1..=4 {
            for n in 0..=5 {
                let c = ctx(d, n);
                let expect: usize = (0..=n.min(d)).map(|k| binom(n, k) * binom(d, k)).sum();
                assert_eq!(c.displacement_basis().len(), expect, "d={d} n={n}");
            }
        }
    }

    #[test]
    fn context_mismatch_is_reported() {
        let a = AlgebraElement::one(ctx(2, 1));
        let b = AlgebraElement::one(ctx(2, 2));
        assert!(matches!(a.checked_add(&b), Err(Error::ContextMismatch(..))));
        assert!(matches!(a.checked_mul(&b), Err(Error::ContextMismatch(..))));
    }
}
