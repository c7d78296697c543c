//! Coboundary triples `(E_i, π_i, η_ij, α_i)` between connective structures on one
//! cocycle pair `(λ, g)`, and the equivalences `ρ_i` between such triples.

use std::collections::BTreeMap;

use crate::classical::{classical_extract, classical_extract_ambient};
use crate::error::{Error, Result};
use crate::forms::{bracket_ff, bracket_fu, bracket_uf, delta_mu, delta_mu_ad, AmbientForm, GroupForm};
use crate::group::GroupConnection;
use crate::report::CheckRecord;

use super::{missing, GerbeCocycle};

const SUITE: &str = "triple";
const RHO_SUITE: &str = "rho";

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TransformationTriple {
    pub e: BTreeMap<usize, GroupForm>,
    pub pi: BTreeMap<usize, AmbientForm>,
    pub eta: BTreeMap<(usize, usize), GroupForm>,
    pub alpha: BTreeMap<usize, GroupForm>,
}

impl TransformationTriple {
    pub fn e(&self, i: usize) -> Result<&GroupForm> {
        self.e.get(&i).ok_or_else(|| missing("E", &[i]))
    }

    pub fn pi(&self, i: usize) -> Result<&AmbientForm> {
        self.pi.get(&i).ok_or_else(|| missing("pi", &[i]))
    }

    pub fn eta(&self, i: usize, j: usize) -> Result<&GroupForm> {
        self.eta.get(&(i, j)).ok_or_else(|| missing("eta", &[i, j]))
    }

    pub fn alpha(&self, i: usize) -> Result<&GroupForm> {
        self.alpha.get(&i).ok_or_else(|| missing("alpha", &[i]))
    }

    /// The triple with every component trivial.
    pub fn identity(c: &GerbeCocycle) -> TransformationTriple {
        let (frame, flavor) = (c.frame, c.flavor);
        let mut t = TransformationTriple::default();
        for &i in c.nerve.indices() {
            t.e.insert(i, GroupForm::identity(frame, 1, flavor));
            t.pi.insert(i, AmbientForm::identity(frame, 1, flavor));
            t.alpha.insert(i, GroupForm::identity(frame, 2, flavor));
        }
        for (i, j) in c.nerve.pairs() {
            t.eta.insert((i, j), GroupForm::identity(frame, 1, flavor));
        }
        t
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TripleEquivalence {
    pub rho: BTreeMap<usize, GroupForm>,
}

impl TripleEquivalence {
    pub fn rho(&self, i: usize) -> Result<&GroupForm> {
        self.rho.get(&i).ok_or_else(|| missing("rho", &[i]))
    }

    /// Pointwise inverse `ρ_i⁻¹`.
    pub fn inv(&self) -> TripleEquivalence {
        TripleEquivalence {
            rho: self.rho.iter().map(|(&i, r)| (i, r.inv())).collect(),
        }
    }
}

fn same_nerve(a: &GerbeCocycle, b: &GerbeCocycle) -> Result<()> {
    if a.nerve != b.nerve {
        return Err(Error::Shape("cocycles live on different nerves".into()));
    }
    Ok(())
}

fn ensure_derived(c: &GerbeCocycle) -> Result<std::borrow::Cow<'_, GerbeCocycle>> {
    Ok(match c.derived {
        Some(_) => std::borrow::Cow::Borrowed(c),
        None => std::borrow::Cow::Owned(c.derive()?),
    })
}

/// Transports `(m'_i, γ'_ij, B'_i)` along `t` (the cobe1, cobe2 and cob3-i relations solved for the
/// target) and re-derives `(ν, δ, ω)`.
pub fn apply_triple(source: &GerbeCocycle, t: &TransformationTriple) -> Result<GerbeCocycle> {
    let mut out = source.clone();
    out.derived = None;
    for &i in source.nerve.indices() {
        let (e, pi) = (t.e(i)?, t.pi(i)?);
        let aut = &(&pi.value().inv() * &e.value().inner()) * source.m(i)?.aut();
        out.m.insert(i, GroupConnection::new(aut)?);
        let b = &(&delta_mu(e, source.m(i)?)? * source.b(i)?) * &t.alpha(i)?.inv();
        out.b.insert(i, b);
    }
    for (i, j) in source.nerve.pairs() {
        let inner = &(&(t.e(i)? * source.gamma(i, j)?) * &source.lambda_apply(i, j, t.e(j)?)?.inv())
            * &t.eta(i, j)?.inv();
        out.gamma.insert((i, j), t.pi(i)?.inv().apply(&inner)?);
    }
    out.derive()
}

fn record(suite: &str, eq: &str, s: &[usize], r: impl FnOnce() -> Result<CheckRecord>) -> CheckRecord {
    CheckRecord::from_result(suite, eq, s, r())
}

/// Every relation of the coboundary table between `target = (m, γ, B)` and
/// `source = (m', γ', B')`, combinatorial and classical.
pub fn check_triple(target: &GerbeCocycle, source: &GerbeCocycle, t: &TransformationTriple) -> Vec<CheckRecord> {
    if let Err(e) = same_nerve(target, source) {
        return vec![CheckRecord::failure(SUITE, "nerve", &[], e.to_string())];
    }
    let (c, c1) = match (ensure_derived(target), ensure_derived(source)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return vec![CheckRecord::failure(SUITE, "derive", &[], e.to_string())],
    };
    let (c, c1) = (c.as_ref(), c1.as_ref());
    let mut out = Vec::new();
    for (i, j) in c.nerve.pairs() {
        let s = [i, j];
        out.push(record(SUITE, "pij1", &s, || {
            let l = c.lambda_at(i, j, 0, 1)?;
            let rhs = &t.eta(i, j)?.value().inner() * &l.conjugate(t.pi(j)?.value());
            Ok(CheckRecord::aut(SUITE, "pij1", &s, t.pi(i)?.value(), &rhs))
        }));
    }
    for (i, j, k) in c.nerve.triples() {
        let s = [i, j, k];
        out.push(record(SUITE, "d1eij", &s, || {
            let lhs = c.cech_d1(&t.eta, (i, j, k))?;
            let rhs = bracket_uf(t.pi(i)?, c.g(i, j, k)?, c.m(i)?)?;
            Ok(CheckRecord::group(SUITE, "d1eij", &s, lhs.value(), rhs.value()))
        }));
    }
    for &i in c.nerve.indices() {
        out.push(record(SUITE, "cobe1", &[i], || {
            let lhs = &t.e(i)?.value().inner() * c1.m(i)?.aut();
            let rhs = t.pi(i)?.value() * c.m(i)?.aut();
            Ok(CheckRecord::aut(SUITE, "cobe1", &[i], &lhs, &rhs))
        }));
    }
    for (i, j) in c.nerve.pairs() {
        let s = [i, j];
        out.push(record(SUITE, "cobe2", &s, || {
            let lhs = t.e(i)? * c1.gamma(i, j)?;
            let rhs = &(&t.pi(i)?.apply(c.gamma(i, j)?)? * t.eta(i, j)?) * &c.lambda_apply(i, j, t.e(j)?)?;
            Ok(CheckRecord::group(SUITE, "cobe2", &s, lhs.value(), rhs.value()))
        }));
    }
    for &i in c.nerve.indices() {
        out.push(record(SUITE, "cob3-i", &[i], || {
            let lhs = &delta_mu(t.e(i)?, c1.m(i)?)? * c1.b(i)?;
            let rhs = c.b(i)? * t.alpha(i)?;
            Ok(CheckRecord::group(SUITE, "cob3-i", &[i], lhs.value(), rhs.value()))
        }));
        out.push(record(SUITE, "cob3-i", &[i], || classical_cob3(c, c1, t, i)));
        out.push(record(SUITE, "cob2-i", &[i], || {
            let lhs = c.nu(i)? * &delta_mu_ad(t.pi(i)?, c.m(i)?)?;
            let rhs = &t.alpha(i)?.inner() * c1.nu(i)?;
            Ok(CheckRecord::aut(SUITE, "cob2-i", &[i], lhs.value(), rhs.value()))
        }));
        out.push(record(SUITE, "def:5-i", &[i], || classical_def5(c, c1, t, i)));
    }
    for (i, j) in c.nerve.pairs() {
        let s = [i, j];
        out.push(record(SUITE, "alpheqij", &s, || {
            let m = c.m(i)?;
            let (eta, pi, gam) = (t.eta(i, j)?, t.pi(i)?, c.gamma(i, j)?);
            let lhs = &(&(c.delta(i, j)? * &c1.delta(i, j)?.inv()) * &c.lambda_apply(i, j, t.alpha(j)?)?)
                * &t.alpha(i)?.inv();
            let rhs = &(&(&(&delta_mu(eta, m)?.inv() * &bracket_ff(eta, eta, m)?)
                * &bracket_uf(pi, eta, m)?.inv())
                * &bracket_ff(gam, eta, m)?)
                * &bracket_fu(gam, pi, m)?.inv();
            Ok(CheckRecord::group(SUITE, "alpheqij", &s, lhs.value(), rhs.value()))
        }));
    }
    for &i in c.nerve.indices() {
        out.push(record(SUITE, "cob4-i", &[i], || {
            let m = c.m(i)?;
            let (pi, alpha) = (t.pi(i)?, t.alpha(i)?);
            let rhs = &(&(&(c.omega(i)? * &delta_mu(alpha, m)?) * &bracket_uf(c1.nu(i)?, t.e(i)?, m)?.inv())
                * &bracket_uf(pi, c.b(i)?, m)?)
                * &bracket_uf(pi, alpha, m)?;
            Ok(CheckRecord::group(SUITE, "cob4-i", &[i], c1.omega(i)?.value(), rhs.value()))
        }));
        out.push(record(SUITE, "def:6-i", &[i], || classical_def6(c, c1, t, i)));
    }
    out
}

/// `B' = B + α − dE + [E]^(2) − [m, E] − [π, E]`.
fn classical_cob3(c: &GerbeCocycle, c1: &GerbeCocycle, t: &TransformationTriple, i: usize) -> Result<CheckRecord> {
    let e = classical_extract(t.e(i)?)?;
    let a = classical_extract_ambient(&c.m(i)?.as_form())?;
    let p = classical_extract_ambient(t.pi(i)?)?;
    let rhs = classical_extract(c.b(i)?)?
        .add(&classical_extract(t.alpha(i)?)?)
        .sub(&e.d())
        .add(&e.square())
        .sub(&a.bracket(&e))
        .sub(&p.bracket(&e));
    let pass = classical_extract(c1.b(i)?)? == rhs;
    Ok(CheckRecord::new(SUITE, "cob3-i", &[i], pass).with_note("classical"))
}

/// `ν' = ν + dπ + [π]^(2) + [m, π] − i_α`, compared as automorphisms.
fn classical_def5(c: &GerbeCocycle, c1: &GerbeCocycle, t: &TransformationTriple, i: usize) -> Result<CheckRecord> {
    let a = classical_extract_ambient(&c.m(i)?.as_form())?;
    let p = classical_extract_ambient(t.pi(i)?)?;
    let rhs = classical_extract_ambient(c.nu(i)?)?
        .add(&p.d())
        .add(&p.square())
        .add(&a.bracket(&p))
        .sub(&classical_extract(t.alpha(i)?)?);
    let pass = classical_extract_ambient(c1.nu(i)?)?.same_action(&rhs, c.flavor);
    Ok(CheckRecord::new(SUITE, "def:5-i", &[i], pass))
}

/// `ω' = ω + dα + [m,α] − [ν,E] − [dπ,E] − [[π]^(2),E] − [[m,π],E] + [α,E] + [π,B] + [π,α]`.
fn classical_def6(c: &GerbeCocycle, c1: &GerbeCocycle, t: &TransformationTriple, i: usize) -> Result<CheckRecord> {
    let a = classical_extract_ambient(&c.m(i)?.as_form())?;
    let p = classical_extract_ambient(t.pi(i)?)?;
    let e = classical_extract(t.e(i)?)?;
    let al = classical_extract(t.alpha(i)?)?;
    let b = classical_extract(c.b(i)?)?;
    let n = classical_extract_ambient(c.nu(i)?)?;
    let rhs = classical_extract(c.omega(i)?)?
        .add(&al.d())
        .add(&a.bracket(&al))
        .sub(&n.bracket(&e))
        .sub(&p.d().bracket(&e))
        .sub(&p.square().bracket(&e))
        .sub(&a.bracket(&p).bracket(&e))
        .add(&al.bracket(&e))
        .add(&p.bracket(&b))
        .add(&p.bracket(&al));
    let pass = classical_extract(c1.omega(i)?)? == rhs;
    Ok(CheckRecord::new(SUITE, "def:6-i", &[i], pass))
}

/// The triple `t'` equivalent to `t` through `ρ` (checks equ:irho-i, rhoij, def:rho-i,
/// eqrho1-i). `target` supplies `λ_ij` and the target connections `m_i`.
pub fn apply_rho(t: &TransformationTriple, rho: &TripleEquivalence, target: &GerbeCocycle) -> Result<TransformationTriple> {
    let mut out = t.clone();
    for &i in target.nerve.indices() {
        let r = rho.rho(i)?;
        let (pi, m) = (t.pi(i)?, target.m(i)?);
        out.pi.insert(i, pi * &r.inner());
        out.e.insert(i, t.e(i)? * r);
        let alpha = &(t.alpha(i)? * &delta_mu(r, m)?) * &bracket_uf(pi, r, m)?;
        out.alpha.insert(i, alpha);
    }
    for (i, j) in target.nerve.pairs() {
        let eta = &(t.eta(i, j)? * rho.rho(i)?) * &target.lambda_apply(i, j, rho.rho(j)?)?.inv();
        out.eta.insert((i, j), eta);
    }
    Ok(out)
}

/// Verifies that `t2` is related to `t1` by `ρ` over `target`.
pub fn check_rho(
    t1: &TransformationTriple,
    t2: &TransformationTriple,
    rho: &TripleEquivalence,
    target: &GerbeCocycle,
) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let c = target;
    for &i in c.nerve.indices() {
        out.push(record(RHO_SUITE, "equ:irho-i", &[i], || {
            let rhs = t1.pi(i)? * &rho.rho(i)?.inner();
            Ok(CheckRecord::aut(RHO_SUITE, "equ:irho-i", &[i], t2.pi(i)?.value(), rhs.value()))
        }));
        out.push(record(RHO_SUITE, "def:rho-i", &[i], || {
            let rhs = t1.e(i)? * rho.rho(i)?;
            Ok(CheckRecord::group(RHO_SUITE, "def:rho-i", &[i], t2.e(i)?.value(), rhs.value()))
        }));
        out.push(record(RHO_SUITE, "eqrho1-i", &[i], || {
            let (r, m, pi) = (rho.rho(i)?, c.m(i)?, t1.pi(i)?);
            let rhs = &(t1.alpha(i)? * &delta_mu(r, m)?) * &bracket_uf(pi, r, m)?;
            Ok(CheckRecord::group(RHO_SUITE, "eqrho1-i", &[i], t2.alpha(i)?.value(), rhs.value()))
        }));
        out.push(record(RHO_SUITE, "eqrho2-i", &[i], || {
            let r = classical_extract(rho.rho(i)?)?;
            let a = classical_extract_ambient(&c.m(i)?.as_form())?;
            let p = classical_extract_ambient(t1.pi(i)?)?;
            let rhs = classical_extract(t1.alpha(i)?)?
                .add(&r.d())
                .add(&r.square())
                .add(&a.bracket(&r))
                .add(&p.bracket(&r));
            let pass = classical_extract(t2.alpha(i)?)? == rhs;
            Ok(CheckRecord::new(RHO_SUITE, "eqrho2-i", &[i], pass))
        }));
    }
    for (i, j) in c.nerve.pairs() {
        let s = [i, j];
        out.push(record(RHO_SUITE, "rhoij", &s, || {
            // λ_ij(ρ_j) ρ_i⁻¹ = η_ij η'_ij⁻¹ (1-forms commute)
            let lhs = &c.lambda_apply(i, j, rho.rho(j)?)? * &rho.rho(i)?.inv();
            let rhs = t1.eta(i, j)? * &t2.eta(i, j)?.inv();
            Ok(CheckRecord::group(RHO_SUITE, "rhoij", &s, lhs.value(), rhs.value()))
        }));
    }
    out
}
