//! Local cocycle data of a gerbe with connection: `(λ_ij, g_ijk)` together with the
//! connection triple `(m_i, γ_ij, B_i)` and the derived forms `(ν_i, δ_ij, ω_i)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::forms::{bracket_ff, bracket_fu, bracket_uf, delta_mu, delta_mu_ad, AmbientForm, GroupForm};
use crate::group::{AmbientAutomorphism, GroupConnection, GroupFlavor};
use crate::algebra::Frame;
use crate::nerve::CoverNerve;
use crate::report::CheckRecord;

pub mod equivalence;
pub mod special;
pub mod triple;

pub use equivalence::EquivalenceData;
pub use triple::{apply_rho, apply_triple, check_rho, check_triple, TransformationTriple, TripleEquivalence};

const SUITE: &str = "gerbe";

pub(crate) fn missing(what: &str, at: &[usize]) -> Error {
    Error::Missing(format!("{what} at {at:?}"))
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Derived {
    pub nu: BTreeMap<usize, AmbientForm>,
    pub delta: BTreeMap<(usize, usize), GroupForm>,
    pub omega: BTreeMap<usize, GroupForm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GerbeCocycle {
    pub frame: Frame,
    pub flavor: GroupFlavor,
    pub nerve: CoverNerve,
    /// `λ_ij`, sections over Δ⁰.
    pub lambda: BTreeMap<(usize, usize), AmbientAutomorphism>,
    pub g: BTreeMap<(usize, usize, usize), GroupForm>,
    pub m: BTreeMap<usize, GroupConnection>,
    pub gamma: BTreeMap<(usize, usize), GroupForm>,
    pub b: BTreeMap<usize, GroupForm>,
    pub derived: Option<Derived>,
}

impl GerbeCocycle {
    pub fn lambda(&self, i: usize, j: usize) -> Result<&AmbientAutomorphism> {
        self.lambda.get(&(i, j)).ok_or_else(|| missing("lambda", &[i, j]))
    }

    /// `λ_ij` at the vertex `v` of Δⁿ.
    pub fn lambda_at(&self, i: usize, j: usize, v: usize, n: usize) -> Result<AmbientAutomorphism> {
        self.lambda(i, j)?.pull(&[v], self.frame.simplex(n))
    }

    pub fn g(&self, i: usize, j: usize, k: usize) -> Result<&GroupForm> {
        self.g.get(&(i, j, k)).ok_or_else(|| missing("g", &[i, j, k]))
    }

    pub fn m(&self, i: usize) -> Result<&GroupConnection> {
        self.m.get(&i).ok_or_else(|| missing("m", &[i]))
    }

    pub fn gamma(&self, i: usize, j: usize) -> Result<&GroupForm> {
        self.gamma.get(&(i, j)).ok_or_else(|| missing("gamma", &[i, j]))
    }

    pub fn b(&self, i: usize) -> Result<&GroupForm> {
        self.b.get(&i).ok_or_else(|| missing("B", &[i]))
    }

    pub fn derived(&self) -> Result<&Derived> {
        self.derived
            .as_ref()
            .ok_or_else(|| Error::Precondition("derived forms are not populated; run derive".into()))
    }

    pub fn nu(&self, i: usize) -> Result<&AmbientForm> {
        self.derived()?.nu.get(&i).ok_or_else(|| missing("nu", &[i]))
    }

    pub fn delta(&self, i: usize, j: usize) -> Result<&GroupForm> {
        self.derived()?.delta.get(&(i, j)).ok_or_else(|| missing("delta", &[i, j]))
    }

    pub fn omega(&self, i: usize) -> Result<&GroupForm> {
        self.derived()?.omega.get(&i).ok_or_else(|| missing("omega", &[i]))
    }

    /// The twisted conjugate `^{λ_ij *} m_j = λ_ij(x) ∘ m_j ∘ λ_ij(y)⁻¹`.
    pub fn twisted_conjugate(&self, i: usize, j: usize) -> Result<GroupConnection> {
        let l0 = self.lambda_at(i, j, 0, 1)?;
        let l1 = self.lambda_at(i, j, 1, 1)?;
        GroupConnection::new(&(&l0 * self.m(j)?.aut()) * &l1.inv())
    }

    /// `λ_ij(x₀)` applied to a form of degree `n`.
    pub fn lambda_apply(&self, i: usize, j: usize, f: &GroupForm) -> Result<GroupForm> {
        self.lambda_at(i, j, 0, f.degree())?.apply_form(f)
    }

    /// `d¹_λ(c)_{ijk} = c_ij · λ_ij(c_jk) · i_{g_ijk}(c_ik⁻¹)` for a 1-cochain of forms.
    pub fn cech_d1(
        &self,
        c: &BTreeMap<(usize, usize), GroupForm>,
        (i, j, k): (usize, usize, usize),
    ) -> Result<GroupForm> {
        let get = |a: usize, b: usize| c.get(&(a, b)).ok_or_else(|| missing("1-cochain", &[a, b]));
        let cij = get(i, j)?;
        let n = cij.degree();
        let g0 = self.g(i, j, k)?.at(&[0], n);
        let cik_inv = get(i, k)?.inv();
        let conj = GroupForm::unchecked(&(&g0 * cik_inv.value()) * &g0.inv());
        Ok(&(cij * &self.lambda_apply(i, j, get(j, k)?)?) * &conj)
    }

    /// Fills `(ν_i, δ_ij, ω_i)` from their defining equations.
    pub fn derive(&self) -> Result<GerbeCocycle> {
        let mut d = Derived::default();
        for &i in self.nerve.indices() {
            let m = self.m(i)?;
            let b = self.b(i)?;
            let nu = &b.inner().inv() * &m.curvature_form();
            d.nu.insert(i, nu);
            d.omega.insert(i, delta_mu(b, m)?);
        }
        for (i, j) in self.nerve.pairs() {
            let tw = self.twisted_conjugate(i, j)?;
            let d1 = delta_mu(self.gamma(i, j)?, &tw)?;
            let lb = self.lambda_apply(i, j, self.b(j)?)?;
            d.delta.insert((i, j), &(&self.b(i)?.inv() * &d1) * &lb);
        }
        let mut out = self.clone();
        out.derived = Some(d);
        Ok(out)
    }
}

impl AmbientAutomorphism {
    /// Applies a section (or a form of the same degree) to a group-valued form.
    pub fn apply_form(&self, f: &GroupForm) -> Result<GroupForm> {
        Ok(GroupForm::unchecked(self.apply(f.value())?))
    }
}

fn record(eq: &str, s: &[usize], r: impl FnOnce() -> Result<CheckRecord>) -> CheckRecord {
    CheckRecord::from_result(SUITE, eq, s, r())
}

/// `λ_ij λ_jk = i_{g_ijk} λ_ik` and `λ_ij(g_jkl) g_ijl = g_ijk g_ikl`.
pub fn check_gerbe_cocycle(c: &GerbeCocycle) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for (i, j, k) in c.nerve.triples() {
        let s = [i, j, k];
        out.push(record("coclam", &s, || {
            let lhs = c.lambda(i, j)? * c.lambda(j, k)?;
            let rhs = &c.g(i, j, k)?.value().inner() * c.lambda(i, k)?;
            Ok(CheckRecord::aut(SUITE, "coclam", &s, &lhs, &rhs))
        }));
    }
    for (i, j, k, l) in c.nerve.quadruples() {
        let s = [i, j, k, l];
        out.push(record("cocg", &s, || {
            let lhs = &c.lambda_apply(i, j, c.g(j, k, l)?)? * c.g(i, j, l)?;
            let rhs = c.g(i, j, k)? * c.g(i, k, l)?;
            Ok(CheckRecord::group(SUITE, "cocg", &s, lhs.value(), rhs.value()))
        }));
    }
    out
}

/// `i_{γ_ij} ∘ ^{λ_ij*}m_j = m_i` and `d¹_λ(γ)_{ijk} = δ̃⁰_{m_i}(g_ijk)`.
pub fn check_connection_pair(c: &GerbeCocycle) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for (i, j) in c.nerve.pairs() {
        let s = [i, j];
        out.push(record("cocep1", &s, || {
            let lhs = &c.gamma(i, j)?.value().inner() * c.twisted_conjugate(i, j)?.aut();
            Ok(CheckRecord::aut(SUITE, "cocep1", &s, &lhs, c.m(i)?.aut()))
        }));
    }
    for (i, j, k) in c.nerve.triples() {
        let s = [i, j, k];
        out.push(record("cocep2", &s, || {
            let lhs = c.cech_d1(&c.gamma, (i, j, k))?;
            let rhs = delta0_tilde(c.g(i, j, k)?, c.m(i)?)?;
            Ok(CheckRecord::group(SUITE, "cocep2", &s, lhs.value(), rhs.value()))
        }));
    }
    out
}

/// `δ̃⁰_μ(g)(x, y) = μ(x, y)(g(y)) · g(x)⁻¹`.
pub fn delta0_tilde(g: &GroupForm, mu: &GroupConnection) -> Result<GroupForm> {
    let gy = mu.edge(0, 1, 1).apply(&g.at(&[1], 1))?;
    Ok(GroupForm::unchecked(&gy * &g.at(&[0], 1).inv()))
}

/// Consistency of stored derived forms with `ifi`, `compfifj2` and `omidef1`.
pub fn check_derived(c: &GerbeCocycle) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for &i in c.nerve.indices() {
        out.push(record("ifi", &[i], || {
            let lhs = c.m(i)?.curvature_form();
            let rhs = &c.b(i)?.inner() * c.nu(i)?;
            Ok(CheckRecord::aut(SUITE, "ifi", &[i], lhs.value(), rhs.value()))
        }));
        out.push(record("omidef1", &[i], || {
            let rhs = delta_mu(c.b(i)?, c.m(i)?)?;
            Ok(CheckRecord::group(SUITE, "omidef1", &[i], c.omega(i)?.value(), rhs.value()))
        }));
    }
    for (i, j) in c.nerve.pairs() {
        let s = [i, j];
        out.push(record("compfifj2", &s, || {
            // δ_ij + B_i = λ_ij(B_j) − δ¹_{m_i}(−γ_ij)
            let lhs = c.delta(i, j)? * c.b(i)?;
            let d1 = delta_mu(&c.gamma(i, j)?.inv(), c.m(i)?)?;
            let rhs = &c.lambda_apply(i, j, c.b(j)?)? * &d1.inv();
            Ok(CheckRecord::group(SUITE, "compfifj2", &s, lhs.value(), rhs.value()))
        }));
    }
    out
}

/// `^{λ_ij}ν_j = ν_i − i_{δ_ij}` and `d¹_λ(δ)_{ijk} = [ν_i, g_ijk]`.
pub fn check_fake_curvature(c: &GerbeCocycle) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for (i, j) in c.nerve.pairs() {
        let s = [i, j];
        out.push(record("cockap1", &s, || {
            let l = c.lambda_at(i, j, 0, 2)?;
            let lhs = &c.delta(i, j)?.value().inner() * &l.conjugate(c.nu(j)?.value());
            Ok(CheckRecord::aut(SUITE, "cockap1", &s, &lhs, c.nu(i)?.value()))
        }));
    }
    for (i, j, k) in c.nerve.triples() {
        let s = [i, j, k];
        out.push(record("cockap2", &s, || {
            let lhs = c.cech_d1(&c.derived()?.delta, (i, j, k))?;
            let rhs = bracket_uf(c.nu(i)?, c.g(i, j, k)?, c.m(i)?)?;
            Ok(CheckRecord::group(SUITE, "cockap2", &s, lhs.value(), rhs.value()))
        }));
    }
    out
}

/// `comoioj`, `relnufi` and `ificonj`.
pub fn check_omega(c: &GerbeCocycle) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for (i, j) in c.nerve.pairs() {
        let s = [i, j];
        out.push(record("comoioj", &s, || {
            let m = c.m(i)?;
            let (gam, del) = (c.gamma(i, j)?, c.delta(i, j)?);
            let lhs = c.lambda_apply(i, j, c.omega(j)?)?;
            let rhs = &(&(c.omega(i)? * &delta_mu(del, m)?) * &bracket_fu(gam, c.nu(i)?, m)?)
                * &bracket_ff(gam, del, m)?.inv();
            Ok(CheckRecord::group(SUITE, "comoioj", &s, lhs.value(), rhs.value()))
        }));
    }
    for &i in c.nerve.indices() {
        out.push(record("relnufi", &[i], || {
            let m = c.m(i)?;
            let lhs = delta_mu(c.omega(i)?, m)?;
            let rhs = bracket_uf(c.nu(i)?, c.b(i)?, m)?;
            Ok(CheckRecord::group(SUITE, "relnufi", &[i], lhs.value(), rhs.value()))
        }));
        out.push(record("ificonj", &[i], || {
            let lhs = c.omega(i)?.inner();
            let rhs = delta_mu_ad(c.nu(i)?, c.m(i)?)?.inv();
            Ok(CheckRecord::aut(SUITE, "ificonj", &[i], lhs.value(), rhs.value()))
        }));
    }
    out
}

/// The full local equation table, deriving first when needed.
pub fn run_gerbe_suite(c: &GerbeCocycle) -> Vec<CheckRecord> {
    let derived;
    let c = if c.derived.is_some() {
        c
    } else {
        match c.derive() {
            Ok(d) => {
                derived = d;
                &derived
            }
            Err(e) => return vec![CheckRecord::failure(SUITE, "derive", &[], e.to_string())],
        }
    };
    let mut out = check_gerbe_cocycle(c);
    out.extend(check_connection_pair(c));
    out.extend(check_derived(c));
    out.extend(check_fake_curvature(c));
    out.extend(check_omega(c));
    out
}
