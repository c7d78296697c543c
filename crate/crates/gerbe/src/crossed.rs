//! Crossed modules `G1 ⊆ G0` (inclusion, conjugation action) and the normalization of
//! `(g, φ_0, …, φ_{n−1})` data to a degenerate-vanishing form.

use serde::{Deserialize, Serialize};

use crate::algebra::{degeneracy_map, face_map, Frame};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupFlavor};
use crate::matrix::Matrix;
use crate::report::CheckRecord;
use crate::sample::Sampler;

const SUITE: &str = "cm";

/// Which normal subgroup of `G0` plays the role of `G1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubgroupShape {
    /// `{I + t E_{1k}}`, the center of the unitriangular group.
    Center,
    /// `G1 = G0`.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossedModule {
    pub g0: GroupFlavor,
    pub g1: SubgroupShape,
}

impl CrossedModule {
    pub fn new(g0: GroupFlavor, g1: SubgroupShape) -> Result<CrossedModule> {
        if g1 == SubgroupShape::Center && !matches!(g0, GroupFlavor::Unitriangular(_)) {
            return Err(Error::Unsupported(format!("central subgroup of {g0}")));
        }
        Ok(CrossedModule { g0, g1 })
    }

    /// Shape predicate on the entries of `m − I`.
    pub fn contains_g1(&self, g: &GroupElement) -> bool {
        if g.flavor() != self.g0 {
            return false;
        }
        match self.g1 {
            SubgroupShape::Full => true,
            SubgroupShape::Center => {
                let m = g.matrix();
                let k = m.size();
                (0..k).all(|i| (0..k).all(|j| i == j || (i == 0 && j == k - 1) || m.get(i, j).is_zero()))
            }
        }
    }

    /// `δ` is the inclusion.
    pub fn delta(&self, f: &GroupElement) -> GroupElement {
        f.clone()
    }

    /// `^g f = g f g⁻¹`.
    pub fn act(&self, g: &GroupElement, f: &GroupElement) -> GroupElement {
        &(g * f) * &g.inv()
    }

    fn g0_generators(&self, frame: Frame) -> Vec<GroupElement> {
        let ctx = frame.simplex(0);
        let k = self.g0.size();
        self.g0
            .generator_units()
            .into_iter()
            .filter_map(|(i, j)| GroupElement::new(self.g0, &Matrix::identity(ctx, k) + &Matrix::unit(ctx, k, i, j)).ok())
            .collect()
    }

    fn g1_generators(&self, frame: Frame) -> Vec<GroupElement> {
        match self.g1 {
            SubgroupShape::Full => self.g0_generators(frame),
            SubgroupShape::Center => {
                let ctx = frame.simplex(0);
                let k = self.g0.size();
                let m = &Matrix::identity(ctx, k) + &Matrix::unit(ctx, k, 1, k);
                vec![GroupElement::new(self.g0, m).expect("corner unit is unitriangular")]
            }
        }
    }

    /// Normality, δ-equivariance and the Peiffer identity on generators.
    pub fn check_axioms(&self, frame: Frame) -> Vec<CheckRecord> {
        let (gs, fs) = (self.g0_generators(frame), self.g1_generators(frame));
        let mut out = Vec::new();
        for (a, g) in gs.iter().enumerate() {
            for (b, f) in fs.iter().enumerate() {
                let gf = self.act(g, f);
                out.push(CheckRecord::new(SUITE, "normal", &[a, b], self.contains_g1(&gf)));
                let rhs = &(g * &self.delta(f)) * &g.inv();
                out.push(CheckRecord::group(SUITE, "equivariance", &[a, b], &self.delta(&gf), &rhs));
            }
        }
        for (a, f) in fs.iter().enumerate() {
            for (b, f2) in fs.iter().enumerate() {
                let lhs = self.act(&self.delta(f), f2);
                let rhs = &(f * f2) * &f.inv();
                out.push(CheckRecord::group(SUITE, "peiffer", &[a, b], &lhs, &rhs));
            }
        }
        out
    }
}

/// `(g, φ_0, …, φ_{n−1})` with `g` over Δⁿ and each `φ_i` over Δ^{n−1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMFormData {
    pub module: CrossedModule,
    pub degree: usize,
    pub g: GroupElement,
    pub phi: Vec<GroupElement>,
}

/// `h(x_0, …, x_i, x_i, …, x_{n−1})` for `h` over Δⁿ.
fn degenerate(h: &GroupElement, i: usize) -> Result<GroupElement> {
    let n = h.context().order();
    h.pull(&degeneracy_map(n - 1, i), h.context().frame().simplex(n - 1))
}

/// `h(x_0, …, x̂_k, …, x_n)` for `h` over Δ^{n−1}.
fn omit(h: &GroupElement, k: usize) -> Result<GroupElement> {
    let n = h.context().order() + 1;
    h.pull(&face_map(n, k), h.context().frame().simplex(n))
}

impl CMFormData {
    fn shape(&self) -> Result<()> {
        let n = self.degree;
        if n == 0 || self.phi.len() != n {
            return Err(Error::Shape(format!("degree {n} with {} φ's", self.phi.len())));
        }
        if self.g.context().order() != n || self.phi.iter().any(|p| p.context().order() != n - 1) {
            return Err(Error::Shape("g must live on Δⁿ and every φ_i on Δ^{n−1}".into()));
        }
        if let Some(i) = self.phi.iter().position(|p| !self.module.contains_g1(p)) {
            return Err(Error::Flavor(format!("φ_{i} is not G1-valued")));
        }
        Ok(())
    }
}

fn ab_records(g: &GroupElement, phi: &[GroupElement], module: &CrossedModule, stage: Option<usize>) -> Vec<CheckRecord> {
    let n = phi.len();
    let tag = |base: &str| match stage {
        Some(k) => format!("{base}^{k}"),
        None => base.to_string(),
    };
    let mut out = Vec::new();
    for (i, p) in phi.iter().enumerate() {
        let eq = tag("ai");
        out.push(CheckRecord::from_result(SUITE, &eq, &[i], (|| {
            Ok(CheckRecord::group(SUITE, &eq, &[i], &degenerate(g, i)?, &module.delta(p)))
        })()));
    }
    for i in 0..n.saturating_sub(1) {
        for j in i..=n - 2 {
            let eq = tag("bij");
            out.push(CheckRecord::from_result(SUITE, &eq, &[i, j], (|| {
                let lhs = degenerate(&phi[i], j)?;
                let rhs = degenerate(&phi[j + 1], i)?;
                Ok(CheckRecord::group(SUITE, &eq, &[i, j], &lhs, &rhs))
            })()));
        }
    }
    out
}

/// Conditions `A_i` and `B_{i,j}`.
pub fn check_ab(dat: &CMFormData) -> Vec<CheckRecord> {
    if let Err(e) = dat.shape() {
        return vec![CheckRecord::failure(SUITE, "shape", &[], e.to_string())];
    }
    ab_records(&dat.g, &dat.phi, &dat.module, None)
}

/// Result of [`normalize`], with the invariant records of every stage.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub g_prime: GroupElement,
    pub chi: GroupElement,
    /// `δφ^k_k(…, x̂_{k+1}, …)` for `k = 0, …, n−1`.
    pub factors: Vec<GroupElement>,
    pub stages: Vec<CheckRecord>,
}

/// Inductive normalization: `g^{k+1} = δφ^k_k(…, x̂_{k+1}, …)⁻¹ g^k` with the matching
/// update of the φ's; `χ` is the product of the factors removed, so that `δ(χ) g' = g`.
pub fn normalize(dat: &CMFormData) -> Result<Normalized> {
    dat.shape()?;
    if let Some(r) = check_ab(dat).into_iter().find(|r| !r.passed()) {
        return Err(Error::Precondition(format!("input violates {} at {:?}", r.equation, r.simplex)));
    }
    let n = dat.degree;
    let module = &dat.module;
    let mut g = dat.g.clone();
    let mut phi = dat.phi.clone();
    let mut factors = Vec::with_capacity(n);
    let mut stages = Vec::new();
    for k in 0..n {
        let lead = omit(&phi[k], k + 1)?;
        g = &module.delta(&lead).inv() * &g;
        factors.push(lead);
        let pk = phi[k].clone();
        let mut next = Vec::with_capacity(n);
        for (i, p) in phi.iter().enumerate() {
            let v = if i < k + 1 {
                GroupElement::identity(p.context(), p.flavor())
            } else if i == k + 1 {
                &pk.inv() * p
            } else {
                // φ^k_k at (x_0, …, x̂_{k+1}, …, x_i, x_i, …, x_{n−1})
                let mut theta = degeneracy_map(n - 1, i);
                theta.remove(k + 1);
                let shifted = pk.pull(&theta, pk.context())?;
                &shifted.inv() * p
            };
            next.push(v);
        }
        phi = next;
        stages.extend(ab_records(&g, &phi, module, Some(k + 1)));
        for (i, p) in phi.iter().enumerate().take(k + 1) {
            let eq = format!("cik^{}", k + 1);
            stages.push(CheckRecord::new(SUITE, &eq, &[i], p.is_identity()));
        }
        for (i, p) in phi.iter().enumerate() {
            if !module.contains_g1(p) {
                return Err(Error::Flavor(format!("stage {} φ_{i} left G1", k + 1)));
            }
        }
    }
    let ctx = dat.g.context();
    let chi = factors
        .iter()
        .fold(GroupElement::identity(ctx, dat.g.flavor()), |acc, f| &acc * f);
    Ok(Normalized { g_prime: g, chi, factors, stages })
}

/// `δ(χ) g' = g`, `g'` degenerate-vanishing, `χ` G1-valued, and every stage invariant.
pub fn verify_normalization(dat: &CMFormData, out: &Normalized) -> Vec<CheckRecord> {
    let mut recs = out.stages.clone();
    let lhs = &dat.module.delta(&out.chi) * &out.g_prime;
    recs.push(CheckRecord::group(SUITE, "lemdeg", &[], &lhs, &dat.g));
    recs.push(CheckRecord::new(SUITE, "chi-in-g1", &[], dat.module.contains_g1(&out.chi)));
    for i in 0..dat.degree {
        recs.push(CheckRecord::from_result(SUITE, "degenerate", &[i], (|| {
            Ok(CheckRecord::new(SUITE, "degenerate", &[i], degenerate(&out.g_prime, i)?.is_identity()))
        })()));
    }
    recs
}

/// Data satisfying `A_i`, `B_{i,j}` by construction: `g = δ(χ₀) g₀` with `g₀` a form and
/// `φ_i = s_i^* χ₀`.
pub fn make_oracle_data(module: CrossedModule, frame: Frame, n: usize, seed: u64) -> Result<CMFormData> {
    if n == 0 || n > 3 {
        return Err(Error::Unsupported(format!("oracle data of degree {n}")));
    }
    let mut s = Sampler::new(seed, frame, module.g0);
    let g0 = s.group_form(n).value().clone();
    let chi0 = s.group_element(n, module.g1 == SubgroupShape::Center);
    oracle_from(module, &g0, &chi0)
}

pub(crate) fn oracle_from(module: CrossedModule, g0: &GroupElement, chi0: &GroupElement) -> Result<CMFormData> {
    let n = g0.context().order();
    let g = &module.delta(chi0) * g0;
    let phi = (0..n).map(|i| degenerate(chi0, i)).collect::<Result<Vec<_>>>()?;
    let dat = CMFormData { module, degree: n, g, phi };
    if let Some(r) = check_ab(&dat).into_iter().find(|r| !r.passed()) {
        return Err(Error::Precondition(format!("oracle data violates {}", r.equation)));
    }
    Ok(dat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraElement;

    #[test]
    fn one_step_matches_hand_expansion() {
        let frame = Frame::new(2, 2).unwrap();
        let cm = CrossedModule::new(GroupFlavor::Unitriangular(3), SubgroupShape::Center).unwrap();
        let dat = make_oracle_data(cm, frame, 1, 4).unwrap();
        let out = normalize(&dat).unwrap();
        // g¹(x0, x1) = δφ₀(x0)⁻¹ g(x0, x1) and χ = φ₀(x0)
        let phi0 = omit(&dat.phi[0], 1).unwrap();
        assert_eq!(out.chi, phi0);
        assert_eq!(out.g_prime, &phi0.inv() * &dat.g);
        assert!(degenerate(&out.g_prime, 0).unwrap().is_identity());
    }

    #[test]
    fn identity_phis_leave_g_alone() {
        let frame = Frame::new(2, 2).unwrap();
        let cm = CrossedModule::new(GroupFlavor::Unitriangular(3), SubgroupShape::Full).unwrap();
        let mut s = Sampler::new(1, frame, cm.g0);
        let g = s.group_form(2).value().clone();
        let ctx1 = frame.simplex(1);
        let id = GroupElement::identity(ctx1, cm.g0);
        let dat = CMFormData { module: cm, degree: 2, g: g.clone(), phi: vec![id.clone(), id] };
        let out = normalize(&dat).unwrap();
        assert!(out.chi.is_identity());
        assert_eq!(out.g_prime, g);
    }

    #[test]
    fn corrupt_phi_breaks_its_a_condition() {
        let frame = Frame::new(2, 2).unwrap();
        let cm = CrossedModule::new(GroupFlavor::Unitriangular(3), SubgroupShape::Center).unwrap();
        let mut dat = make_oracle_data(cm, frame, 2, 9).unwrap();
        let ctx = dat.phi[1].context();
        let mut m = dat.phi[1].matrix().clone();
        let v = m.get(0, 2) + &AlgebraElement::x(ctx, 1);
        m.set(0, 2, v);
        dat.phi[1] = GroupElement::new(cm.g0, m).unwrap();
        let failed: Vec<_> = check_ab(&dat).into_iter().filter(|r| !r.passed()).map(|r| (r.equation, r.simplex)).collect();
        assert!(failed.contains(&("ai".to_string(), vec![1])));
        assert!(!failed.contains(&("ai".to_string(), vec![0])));
        assert!(normalize(&dat).is_err());
    }

    #[test]
    fn literal_descending_product_needs_a_central_g1() {
        let frame = Frame::new(2, 2).unwrap();
        let descending = |out: &Normalized, dat: &CMFormData| {
            let id = GroupElement::identity(dat.g.context(), dat.g.flavor());
            let chi = out.factors.iter().rev().fold(id, |a, f| &a * f);
            &chi * &out.g_prime == dat.g
        };
        let center = CrossedModule::new(GroupFlavor::Unitriangular(3), SubgroupShape::Center).unwrap();
        let full = CrossedModule::new(GroupFlavor::Unitriangular(3), SubgroupShape::Full).unwrap();
        let dat = make_oracle_data(center, frame, 3, 0).unwrap();
        assert!(descending(&normalize(&dat).unwrap(), &dat));
        let dat = make_oracle_data(full, frame, 3, 0).unwrap();
        let out = normalize(&dat).unwrap();
        assert!(!descending(&out, &dat));
        assert_eq!(&out.chi * &out.g_prime, dat.g);
    }

    #[test]
    fn axioms_hold_for_both_instances() {
        let frame = Frame::new(2, 2).unwrap();
        for shape in [SubgroupShape::Center, SubgroupShape::Full] {
            let cm = CrossedModule::new(GroupFlavor::Unitriangular(3), shape).unwrap();
            assert!(cm.check_axioms(frame).iter().all(|r| r.passed()));
        }
    }
}
