//! Equivalences `(m_i, δ_ij)` between two cocycle pairs on one nerve, their 2-arrows
//! `θ_i`, and compositions.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::forms::GroupForm;
use crate::group::{AmbientAutomorphism, GroupConnection};
use crate::report::CheckRecord;

use super::{missing, GerbeCocycle};

const SUITE: &str = "equivalence";

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EquivalenceData {
    /// `m_i = i_{χ_i}`, sections over Δ⁰.
    pub m: BTreeMap<usize, AmbientAutomorphism>,
    pub delta: BTreeMap<(usize, usize), GroupForm>,
    /// A 2-arrow `θ_i` from this equivalence to another one, when present.
    pub theta: Option<BTreeMap<usize, GroupForm>>,
}

impl EquivalenceData {
    pub fn m(&self, i: usize) -> Result<&AmbientAutomorphism> {
        self.m.get(&i).ok_or_else(|| missing("equivalence m", &[i]))
    }

    pub fn delta(&self, i: usize, j: usize) -> Result<&GroupForm> {
        self.delta.get(&(i, j)).ok_or_else(|| missing("equivalence delta", &[i, j]))
    }

    pub fn theta(&self, i: usize) -> Result<&GroupForm> {
        self.theta
            .as_ref()
            .and_then(|t| t.get(&i))
            .ok_or_else(|| missing("theta", &[i]))
    }

    /// `m_i` at vertex `v` of Δⁿ.
    fn m_at(&self, i: usize, v: usize, n: usize, c: &GerbeCocycle) -> Result<AmbientAutomorphism> {
        self.m(i)?.pull(&[v], c.frame.simplex(n))
    }

    fn apply(&self, i: usize, f: &GroupForm, c: &GerbeCocycle) -> Result<GroupForm> {
        self.m_at(i, 0, f.degree(), c)?.apply_form(f)
    }
}

/// The cocycle pair induced on the target (the cocd1 and cocd2 relations solved for `λ'`, `g'`),
/// with the connective structure transported along:
/// `m'_i = m_i(x) ∘ m_i ∘ m_i(y)⁻¹`, `γ'_ij = m'_i(δ_ij(y)) m_i(γ_ij) δ_ij(x)⁻¹`,
/// `B'_i = m_i(B_i)`.
pub fn transport(c: &GerbeCocycle, e: &EquivalenceData) -> Result<GerbeCocycle> {
    let mut out = c.clone();
    out.derived = None;
    for (i, j) in c.nerve.pairs() {
        let l = &(&e.delta(i, j)?.value().inner() * e.m(i)?) * &(c.lambda(i, j)? * &e.m(j)?.inv());
        out.lambda.insert((i, j), l);
    }
    for (i, j, k) in c.nerve.triples() {
        let l = &out.lambda[&(i, j)];
        let g = &(&(&l.apply_form(e.delta(j, k)?)? * e.delta(i, j)?) * &e.apply(i, c.g(i, j, k)?, c)?)
            * &e.delta(i, k)?.inv();
        out.g.insert((i, j, k), g);
    }
    for &i in c.nerve.indices() {
        let aut = &(&e.m_at(i, 0, 1, c)? * c.m(i)?.aut()) * &e.m_at(i, 1, 1, c)?.inv();
        out.m.insert(i, GroupConnection::new(aut)?);
        out.b.insert(i, e.apply(i, c.b(i)?, c)?);
    }
    for (i, j) in c.nerve.pairs() {
        let mi = out.m(i)?;
        let d = e.delta(i, j)?;
        let dy = mi.edge(0, 1, 1).apply(&d.at(&[1], 1))?;
        let g = &(&GroupForm::unchecked(dy) * &e.apply(i, c.gamma(i, j)?, c)?) * &GroupForm::unchecked(d.at(&[0], 1).inv());
        out.gamma.insert((i, j), g);
    }
    out.derive()
}

fn record(eq: &str, s: &[usize], r: impl FnOnce() -> Result<CheckRecord>) -> CheckRecord {
    CheckRecord::from_result(SUITE, eq, s, r())
}

/// `λ'_ij m_j = i_{δ_ij} m_i λ_ij` and `g'_ijk δ_ik = λ'_ij(δ_jk) δ_ij m_i(g_ijk)`.
pub fn check_equivalence_data(c: &GerbeCocycle, c1: &GerbeCocycle, e: &EquivalenceData) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for (i, j) in c.nerve.pairs() {
        let s = [i, j];
        out.push(record("cocd1", &s, || {
            let lhs = c1.lambda(i, j)? * e.m(j)?;
            let rhs = &(&e.delta(i, j)?.value().inner() * e.m(i)?) * c.lambda(i, j)?;
            Ok(CheckRecord::aut(SUITE, "cocd1", &s, &lhs, &rhs))
        }));
    }
    for (i, j, k) in c.nerve.triples() {
        let s = [i, j, k];
        out.push(record("cocd2", &s, || {
            let lhs = c1.g(i, j, k)? * e.delta(i, k)?;
            let rhs = &(&c1.lambda(i, j)?.apply_form(e.delta(j, k)?)? * e.delta(i, j)?) * &e.apply(i, c.g(i, j, k)?, c)?;
            Ok(CheckRecord::group(SUITE, "cocd2", &s, lhs.value(), rhs.value()))
        }));
    }
    out
}

/// A 2-arrow `θ : u ⇒ v` into the cocycle pair of `target`: `m^v = i_θ m^u` and
/// `λ'_ij(θ_j) = δ^v_ij θ_i (δ^u_ij)⁻¹`.
pub fn check_two_arrow(
    target: &GerbeCocycle,
    u: &EquivalenceData,
    v: &EquivalenceData,
    theta: &BTreeMap<usize, GroupForm>,
) -> Vec<CheckRecord> {
    let th = |i: usize| theta.get(&i).ok_or_else(|| missing("theta", &[i]));
    let mut out = Vec::new();
    for &i in target.nerve.indices() {
        out.push(record("cocthet1", &[i], || {
            let rhs = &th(i)?.value().inner() * u.m(i)?;
            Ok(CheckRecord::aut(SUITE, "cocthet1", &[i], v.m(i)?, &rhs))
        }));
    }
    for (i, j) in target.nerve.pairs() {
        let s = [i, j];
        out.push(record("cocthet3", &s, || {
            let lhs = target.lambda(i, j)?.apply_form(th(j)?)?;
            let rhs = &(v.delta(i, j)? * th(i)?) * &u.delta(i, j)?.inv();
            Ok(CheckRecord::group(SUITE, "cocthet3", &s, lhs.value(), rhs.value()))
        }));
    }
    out
}

/// `e2 ∘ e1 = (m² m¹, δ² m²(δ¹))`.
pub fn compose_equivalence(e2: &EquivalenceData, e1: &EquivalenceData) -> Result<EquivalenceData> {
    let mut out = EquivalenceData::default();
    for (&i, m1) in &e1.m {
        out.m.insert(i, e2.m(i)? * m1);
    }
    for (&(i, j), d1) in &e1.delta {
        let m2 = e2.m(i)?;
        out.delta.insert((i, j), e2.delta(i, j)? * &m2.apply_form(d1)?);
    }
    Ok(out)
}

/// Vertical composition `θ̃ θ`.
pub fn compose_vertical(theta_tilde: &BTreeMap<usize, GroupForm>, theta: &BTreeMap<usize, GroupForm>) -> Result<BTreeMap<usize, GroupForm>> {
    theta
        .iter()
        .map(|(&i, t)| {
            let tt = theta_tilde.get(&i).ok_or_else(|| missing("theta", &[i]))?;
            Ok((i, tt * t))
        })
        .collect()
}

/// Horizontal composition `θ² m^{u²}(θ¹)`, where `u2` is the source of `θ²`.
pub fn compose_2arrows(
    theta2: &BTreeMap<usize, GroupForm>,
    u2: &EquivalenceData,
    theta1: &BTreeMap<usize, GroupForm>,
) -> Result<BTreeMap<usize, GroupForm>> {
    theta1
        .iter()
        .map(|(&i, t1)| {
            let t2 = theta2.get(&i).ok_or_else(|| missing("theta", &[i]))?;
            Ok((i, t2 * &u2.m(i)?.apply_form(t1)?))
        })
        .collect()
}
