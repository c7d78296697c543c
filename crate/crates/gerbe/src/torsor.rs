//! Čech data of a torsor with connection: transition cocycle, local connection forms,
//! local curvatures and their gluing laws.

use std::collections::BTreeMap;

use crate::classical::{classical_extract, classical_extract_ambient};
use crate::error::{Error, Result};
use crate::forms::{adjoint, bracket_uf, delta_mu, double_bracket, twisted_adjoint, GroupForm};
use crate::group::GroupConnection;
use crate::nerve::CoverNerve;
use crate::report::CheckRecord;

const SUITE: &str = "torsor";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsorData {
    pub nerve: CoverNerve,
    pub mu: GroupConnection,
    /// `g_ij` for every overlap `i < j`.
    pub g: BTreeMap<(usize, usize), GroupForm>,
    pub omega: BTreeMap<usize, GroupForm>,
}

fn missing(what: &str, at: &[usize]) -> Error {
    Error::Missing(format!("{what} at {at:?}"))
}

impl TorsorData {
    pub fn g(&self, i: usize, j: usize) -> Result<&GroupForm> {
        self.g.get(&(i, j)).ok_or_else(|| missing("g", &[i, j]))
    }

    pub fn omega(&self, i: usize) -> Result<&GroupForm> {
        self.omega.get(&i).ok_or_else(|| missing("omega", &[i]))
    }

    /// The connection `i_{ω_i} ∘ μ` induced on the adjoint bundle over `U_i`.
    pub fn local_connection(&self, i: usize) -> Result<GroupConnection> {
        self.mu.perturb(self.omega(i)?.inner().value())
    }

    /// Local curvatures `κ_i = δ¹_μ ω_i`.
    pub fn curvature(&self) -> Result<BTreeMap<usize, GroupForm>> {
        self.nerve
            .indices()
            .iter()
            .map(|&i| Ok((i, delta_mu(self.omega(i)?, &self.mu)?)))
            .collect()
    }
}

/// `g_ij g_jk = g_ik`.
pub fn check_cocycle1(t: &TorsorData) -> Vec<CheckRecord> {
    t.nerve
        .triples()
        .map(|(i, j, k)| {
            let s = [i, j, k];
            CheckRecord::from_result(SUITE, "1coc", &s, (|| {
                let lhs = t.g(i, j)? * t.g(j, k)?;
                Ok(CheckRecord::group(SUITE, "1coc", &s, lhs.value(), t.g(i, k)?.value()))
            })())
        })
        .collect()
}

/// `ω_j = ω_i^{*μ g_ij}`.
pub fn check_connection_glue(t: &TorsorData) -> Vec<CheckRecord> {
    t.nerve
        .pairs()
        .map(|(i, j)| {
            let s = [i, j];
            CheckRecord::from_result(SUITE, "omcoc11", &s, (|| {
                let rhs = twisted_adjoint(t.omega(i)?, t.g(i, j)?, &t.mu)?;
                Ok(CheckRecord::group(SUITE, "omcoc11", &s, t.omega(j)?.value(), rhs.value()))
            })())
        })
        .collect()
}

/// `κ_j = κ_i^{g_ij} · [[κ_μ, g_ij]]`, the multiplicative form of the twisted gluing.
pub fn check_curvature_glue(t: &TorsorData) -> Vec<CheckRecord> {
    let kappa = match t.curvature() {
        Ok(k) => k,
        Err(e) => return vec![CheckRecord::failure(SUITE, "k-twist-1", &[], e.to_string())],
    };
    let kmu = t.mu.curvature_form();
    t.nerve
        .pairs()
        .map(|(i, j)| {
            let s = [i, j];
            CheckRecord::from_result(SUITE, "k-twist-1", &s, (|| {
                let g = t.g(i, j)?;
                let rhs = &adjoint(&kappa[&i], g) * &double_bracket(&kmu, g)?;
                Ok(CheckRecord::group(SUITE, "k-twist-1", &s, kappa[&j].value(), rhs.value()))
            })())
        })
        .collect()
}

/// `δ²_{i_{ω_i} μ}(κ_i) = [κ_μ, ω_i]_μ`; the right side is trivial for a flat μ.
pub fn check_bianchi_torsor(t: &TorsorData) -> Vec<CheckRecord> {
    t.nerve
        .indices()
        .iter()
        .map(|&i| {
            CheckRecord::from_result(SUITE, "bianchi:cl", &[i], (|| {
                let kappa = delta_mu(t.omega(i)?, &t.mu)?;
                let b = delta_mu(&kappa, &t.local_connection(i)?)?;
                let rhs = bracket_uf(&t.mu.curvature_form(), t.omega(i)?, &t.mu)?;
                Ok(CheckRecord::group(SUITE, "bianchi:cl", &[i], b.value(), rhs.value()))
            })())
        })
        .collect()
}

/// Classical structure equation: the coefficients of `κ_i` are `dω + ω∧ω + [A, ω]`,
/// with `A` the classical form of μ (zero for the canonical connection).
pub fn check_structure_equation(t: &TorsorData) -> Vec<CheckRecord> {
    t.nerve
        .indices()
        .iter()
        .map(|&i| {
            CheckRecord::from_result(SUITE, "kd11", &[i], (|| {
                let w = t.omega(i)?;
                let kappa = classical_extract(&delta_mu(w, &t.mu)?)?;
                let cw = classical_extract(w)?;
                let a = classical_extract_ambient(&t.mu.as_form())?;
                let rhs = cw.d().add(&cw.square()).add(&a.bracket(&cw));
                let pass = kappa == rhs;
                Ok(CheckRecord::new(SUITE, "kd11", &[i], pass))
            })())
        })
        .collect()
}

/// Connection change `ω'_i = h_i ω_i`: `κ'_i = δ¹_{i_{ω_i}μ}(h_i) · κ_i`.
pub fn check_connection_change(t: &TorsorData, h: &BTreeMap<usize, GroupForm>) -> Vec<CheckRecord> {
    t.nerve
        .indices()
        .iter()
        .map(|&i| {
            CheckRecord::from_result(SUITE, "cobcap", &[i], (|| {
                let hi = h.get(&i).ok_or_else(|| missing("h", &[i]))?;
                let w = t.omega(i)?;
                let lhs = delta_mu(&(hi * w), &t.mu)?;
                let rhs = &delta_mu(hi, &t.local_connection(i)?)? * &delta_mu(w, &t.mu)?;
                Ok(CheckRecord::group(SUITE, "cobcap", &[i], lhs.value(), rhs.value()))
            })())
        })
        .collect()
}

/// Gauge transformation by a 0-cochain: `g'_ij = γ_i g_ij γ_j⁻¹`, `ω'_i = ω_i^{*μ γ_i⁻¹}`.
pub fn apply_gauge(t: &TorsorData, gamma: &BTreeMap<usize, GroupForm>) -> Result<TorsorData> {
    let gam = |i: usize| gamma.get(&i).ok_or_else(|| missing("gauge", &[i]));
    let mut g = BTreeMap::new();
    for (&(i, j), gij) in &t.g {
        g.insert((i, j), &(gam(i)? * gij) * &gam(j)?.inv());
    }
    let mut omega = BTreeMap::new();
    for (&i, w) in &t.omega {
        omega.insert(i, twisted_adjoint(w, &gam(i)?.inv(), &t.mu)?);
    }
    Ok(TorsorData {
        nerve: t.nerve.clone(),
        mu: t.mu.clone(),
        g,
        omega,
    })
}

/// Every torsor check in a fixed order.
pub fn run_torsor_suite(t: &TorsorData) -> Vec<CheckRecord> {
    let mut out = check_cocycle1(t);
    out.extend(check_connection_glue(t));
    out.extend(check_curvature_glue(t));
    out.extend(check_bianchi_torsor(t));
    out.extend(check_structure_equation(t));
    out
}
