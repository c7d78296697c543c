//! Group- and automorphism-valued combinatorial forms, twisted differentials and
//! bracket pairings.
//!
//! A form of degree n is stored as its value on the generic simplex `(x; d_1 … d_n)`.
//! Evaluating it on vertices `(x_{v0}, …, x_{vn})` of a bigger simplex is a pullback
//! along the vertex map `v`.

use crate::algebra::{Frame, MAX_ORDER};
use crate::error::{Error, Result};
use crate::group::{AmbientAutomorphism, GroupConnection, GroupElement, GroupFlavor};
use crate::report::CheckRecord;

fn degenerate_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=n).flat_map(move |j| (0..j).map(move |i| (i, j)))
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupForm {
    value: GroupElement,
}

impl GroupForm {
    /// Wraps a value on Δⁿ, rejecting it unless it is the identity on every degeneracy.
    pub fn new(value: GroupElement) -> Result<GroupForm> {
        let f = GroupForm { value };
        if !f.is_degenerate_vanishing() {
            return Err(Error::NotAForm(format!(
                "{}-cochain is not the identity on the degenerate simplices",
                f.degree()
            )));
        }
        Ok(f)
    }

    pub(crate) fn unchecked(value: GroupElement) -> GroupForm {
        GroupForm { value }
    }

    /// A 0-form is a plain section: any base-only group element.
    pub fn section(value: GroupElement) -> Result<GroupForm> {
        if value.context().order() != 0 {
            return Err(Error::Shape("0-forms live on Δ⁰".into()));
        }
        Ok(GroupForm { value })
    }

    pub fn identity(frame: Frame, degree: usize, flavor: GroupFlavor) -> GroupForm {
        GroupForm {
            value: GroupElement::identity(frame.simplex(degree), flavor),
        }
    }

    pub fn degree(&self) -> usize {
        self.value.context().order()
    }

    pub fn value(&self) -> &GroupElement {
        &self.value
    }

    pub fn frame(&self) -> Frame {
        self.value.context().frame()
    }

    pub fn flavor(&self) -> GroupFlavor {
        self.value.flavor()
    }

    pub fn is_identity(&self) -> bool {
        self.value.is_identity()
    }

    pub fn is_degenerate_vanishing(&self) -> bool {
        degenerate_pairs(self.degree()).all(|(i, j)| {
            self.value
                .degeneracy_subst(i, j)
                .map(|g| g.is_identity())
                .unwrap_or(false)
        })
    }

    /// Value on the vertices `verts` of Δⁿ.
    pub fn at(&self, verts: &[usize], n: usize) -> GroupElement {
        self.value
            .pull(verts, self.frame().simplex(n))
            .expect("vertices inside the simplex")
    }

    pub fn inv(&self) -> GroupForm {
        GroupForm {
            value: self.value.inv(),
        }
    }

    pub fn checked_mul(&self, other: &GroupForm) -> Result<GroupForm> {
        Ok(GroupForm {
            value: self.value.checked_mul(&other.value)?,
        })
    }

    /// `i_f` as an automorphism-valued form.
    pub fn inner(&self) -> AmbientForm {
        AmbientForm {
            value: self.value.inner(),
        }
    }
}

impl std::ops::Mul<&GroupForm> for &GroupForm {
    type Output = GroupForm;
    fn mul(self, rhs: &GroupForm) -> GroupForm {
        self.checked_mul(rhs).expect("form degree or flavor mismatch")
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AmbientForm {
    value: AmbientAutomorphism,
}

impl AmbientForm {
    pub fn new(value: AmbientAutomorphism) -> Result<AmbientForm> {
        let f = AmbientForm { value };
        if !f.is_degenerate_vanishing() {
            return Err(Error::NotAForm(format!(
                "automorphism-valued {}-cochain is not trivial on the degenerate simplices",
                f.degree()
            )));
        }
        Ok(f)
    }

    pub(crate) fn unchecked(value: AmbientAutomorphism) -> AmbientForm {
        AmbientForm { value }
    }

    pub fn identity(frame: Frame, degree: usize, flavor: GroupFlavor) -> AmbientForm {
        AmbientForm {
            value: AmbientAutomorphism::identity(frame.simplex(degree), flavor),
        }
    }

    pub fn degree(&self) -> usize {
        self.value.context().order()
    }

    pub fn value(&self) -> &AmbientAutomorphism {
        &self.value
    }

    pub fn frame(&self) -> Frame {
        self.value.context().frame()
    }

    pub fn flavor(&self) -> GroupFlavor {
        self.value.flavor()
    }

    pub fn is_degenerate_vanishing(&self) -> bool {
        degenerate_pairs(self.degree()).all(|(i, j)| {
            self.value
                .degeneracy_subst(i, j)
                .map(|g| g.acts_trivially())
                .unwrap_or(false)
        })
    }

    pub fn acts_trivially(&self) -> bool {
        self.value.acts_trivially()
    }

    pub fn at(&self, verts: &[usize], n: usize) -> AmbientAutomorphism {
        self.value
            .pull(verts, self.frame().simplex(n))
            .expect("vertices inside the simplex")
    }

    pub fn inv(&self) -> AmbientForm {
        AmbientForm {
            value: self.value.inv(),
        }
    }

    pub fn checked_compose(&self, other: &AmbientForm) -> Result<AmbientForm> {
        Ok(AmbientForm {
            value: self.value.checked_compose(&other.value)?,
        })
    }

    pub fn same_action(&self, other: &AmbientForm) -> bool {
        self.value.same_action(&other.value)
    }

    /// Applies the automorphism to a group-valued form of the same degree.
    pub fn apply(&self, g: &GroupForm) -> Result<GroupForm> {
        Ok(GroupForm::unchecked(self.value.apply(g.value())?))
    }
}

impl std::ops::Mul<&AmbientForm> for &AmbientForm {
    type Output = AmbientForm;
    fn mul(self, rhs: &AmbientForm) -> AmbientForm {
        self.checked_compose(rhs).expect("form degree or flavor mismatch")
    }
}

impl GroupConnection {
    /// The curvature as an automorphism-valued 2-form.
    pub fn curvature_form(&self) -> AmbientForm {
        AmbientForm::unchecked(self.curvature())
    }

    /// The connection read as an automorphism-valued 1-form.
    pub fn as_form(&self) -> AmbientForm {
        AmbientForm::unchecked(self.aut().clone())
    }
}

/// Faces of Δ^{n+1} used by the differential of an n-form (n ≥ 2), after the
/// transported face `(1 … n+1)`: faces omitting even vertices, then those omitting odd
/// vertices with their last two vertices exchanged to absorb the sign.
fn delta_faces(n: usize) -> Vec<Vec<usize>> {
    let top = n + 1;
    let mut out = Vec::new();
    for parity in [0, 1] {
        for k in (1..=top).filter(|k| k % 2 == parity) {
            let mut f: Vec<usize> = (0..=top).filter(|&v| v != k).collect();
            if parity == 1 {
                let l = f.len();
                f.swap(l - 2, l - 1);
            }
            out.push(f);
        }
    }
    out
}

fn check_flavor(a: GroupFlavor, b: GroupFlavor) -> Result<()> {
    if a != b {
        return Err(Error::Flavor(format!("{a} vs {b}")));
    }
    Ok(())
}

fn check_mu(frame: Frame, flavor: GroupFlavor, mu: &GroupConnection) -> Result<()> {
    check_flavor(flavor, mu.flavor())?;
    if frame != mu.frame() {
        return Err(Error::ContextMismatch(format!("{frame:?}"), format!("{:?}", mu.frame())));
    }
    Ok(())
}

/// The μ-twisted differential of a group-valued n-form, n ≤ 4.
pub fn delta_mu(omega: &GroupForm, mu: &GroupConnection) -> Result<GroupForm> {
    check_mu(omega.frame(), omega.flavor(), mu)?;
    let n = omega.degree();
    let m = n + 1;
    if m > MAX_ORDER {
        return Err(Error::DegreeOverflow(format!("δ of a {n}-form needs Δ^{m}")));
    }
    let mu01 = mu.edge(0, 1, m);
    let value = match n {
        0 => {
            let gx = omega.at(&[0], 1);
            let gy = omega.at(&[1], 1);
            &gx.inv() * &mu01.apply(&gy)?
        }
        1 => {
            let a = omega.at(&[0, 1], 2);
            let b = mu01.apply(&omega.at(&[1, 2], 2))?;
            let c = omega.at(&[0, 2], 2).inv();
            &(&a * &b) * &c
        }
        _ => {
            let back: Vec<usize> = (1..=m).collect();
            let mut acc = mu01.apply(&omega.at(&back, m))?;
            for f in delta_faces(n) {
                acc = &acc * &omega.at(&f, m);
            }
            acc
        }
    };
    Ok(GroupForm::unchecked(value))
}

/// The differential of an automorphism-valued n-form for the adjoint connection
/// `μ^ad(u) = μ u μ⁻¹`.
pub fn delta_mu_ad(u: &AmbientForm, mu: &GroupConnection) -> Result<AmbientForm> {
    check_mu(u.frame(), u.flavor(), mu)?;
    let n = u.degree();
    let m = n + 1;
    if m > MAX_ORDER {
        return Err(Error::DegreeOverflow(format!("δ of a {n}-form needs Δ^{m}")));
    }
    let mu01 = mu.edge(0, 1, m);
    let value = match n {
        0 => &u.at(&[0], 1).inv() * &mu01.conjugate(&u.at(&[1], 1)),
        1 => {
            let a = u.at(&[0, 1], 2);
            let b = mu01.conjugate(&u.at(&[1, 2], 2));
            &(&a * &b) * &u.at(&[0, 2], 2).inv()
        }
        _ => {
            let back: Vec<usize> = (1..=m).collect();
            let mut acc = mu01.conjugate(&u.at(&back, m));
            for f in delta_faces(n) {
                acc = &acc * &u.at(&f, m);
            }
            acc
        }
    };
    Ok(AmbientForm::unchecked(value))
}

/// The alternative δ¹ built from `μ(x,y)μ(y,z)`:
/// `ω(x,y) · μ(x,y)(ω(y,z)) · μ(x,y)μ(y,z)(ω(z,x))`.
pub fn delta1_three_edge(omega: &GroupForm, mu: &GroupConnection) -> Result<GroupForm> {
    if omega.degree() != 1 {
        return Err(Error::Shape("three-edge δ¹ takes a 1-form".into()));
    }
    let mu01 = mu.edge(0, 1, 2);
    let mu12 = mu.edge(1, 2, 2);
    let a = omega.at(&[0, 1], 2);
    let b = mu01.apply(&omega.at(&[1, 2], 2))?;
    let c = (&mu01 * &mu12).apply(&omega.at(&[2, 0], 2))?;
    Ok(GroupForm::unchecked(&(&a * &b) * &c))
}

fn bracket_degrees(m: usize, n: usize) -> Result<usize> {
    if m + n > 4 {
        return Err(Error::DegreeOverflow(format!("bracket of degrees {m} and {n}")));
    }
    Ok(m + n)
}

fn back_face(m: usize, n: usize) -> Vec<usize> {
    (m..=m + n).collect()
}

fn front_face(m: usize) -> Vec<usize> {
    (0..=m).collect()
}

/// `[f, g]_μ = [f(x0…xm), μ_{0m}(g(xm…x_{m+n}))]` with `[a, b] = a b a⁻¹ b⁻¹`.
pub fn bracket_ff(f: &GroupForm, g: &GroupForm, mu: &GroupConnection) -> Result<GroupForm> {
    check_flavor(f.flavor(), g.flavor())?;
    check_mu(f.frame(), f.flavor(), mu)?;
    let (m, n) = (f.degree(), g.degree());
    let top = bracket_degrees(m, n)?;
    let a = f.at(&front_face(m), top);
    let b = mu.edge(0, m, top).apply(&g.at(&back_face(m, n), top))?;
    Ok(GroupForm::unchecked(a.commutator(&b)))
}

/// `[u, g]_μ = u(x0…xm)(μ_{0m} g(xm…)) · (μ_{0m} g(xm…))⁻¹`.
pub fn bracket_uf(u: &AmbientForm, g: &GroupForm, mu: &GroupConnection) -> Result<GroupForm> {
    check_flavor(u.flavor(), g.flavor())?;
    check_mu(u.frame(), u.flavor(), mu)?;
    let (m, n) = (u.degree(), g.degree());
    let top = bracket_degrees(m, n)?;
    let h = mu.edge(0, m, top).apply(&g.at(&back_face(m, n), top))?;
    let uh = u.at(&front_face(m), top).apply(&h)?;
    Ok(GroupForm::unchecked(&uh * &h.inv()))
}

/// `[g, u]_μ = g(x0…xm) · (^{μ_{0m}}u(xm…))(g(x0…xm)⁻¹)`.
pub fn bracket_fu(g: &GroupForm, u: &AmbientForm, mu: &GroupConnection) -> Result<GroupForm> {
    check_flavor(u.flavor(), g.flavor())?;
    check_mu(g.frame(), g.flavor(), mu)?;
    let (m, n) = (g.degree(), u.degree());
    let top = bracket_degrees(m, n)?;
    let gf = g.at(&front_face(m), top);
    let ut = mu.edge(0, m, top).conjugate(&u.at(&back_face(m, n), top));
    Ok(GroupForm::unchecked(&gf * &ut.apply(&gf.inv())?))
}

/// `[[u, g]] = g(x0)⁻¹ · u(x0…xm)(g(x0))` for a 0-form g.
pub fn double_bracket(u: &AmbientForm, g: &GroupForm) -> Result<GroupForm> {
    check_flavor(u.flavor(), g.flavor())?;
    if g.degree() != 0 {
        return Err(Error::Shape("double bracket takes a 0-form".into()));
    }
    let m = u.degree();
    let g0 = g.at(&[0], m);
    Ok(GroupForm::unchecked(&g0.inv() * &u.value().apply(&g0)?))
}

/// `ω^{*μ g}(x, y) = g(x)⁻¹ ω(x, y) μ(x, y)(g(y))`.
pub fn twisted_adjoint(omega: &GroupForm, g: &GroupForm, mu: &GroupConnection) -> Result<GroupForm> {
    if omega.degree() != 1 || g.degree() != 0 {
        return Err(Error::Shape("twisted adjoint acts on a 1-form by a 0-form".into()));
    }
    let gx = g.at(&[0], 1);
    let gy = mu.edge(0, 1, 1).apply(&g.at(&[1], 1))?;
    Ok(GroupForm::unchecked(&(&gx.inv() * omega.value()) * &gy))
}

/// Plain adjoint `ω^g = g(x)⁻¹ ω g(x)` of an n-form by a 0-form.
pub fn adjoint(omega: &GroupForm, g: &GroupForm) -> GroupForm {
    let gx = g.at(&[0], omega.degree());
    GroupForm::unchecked(&(&gx.inv() * omega.value()) * &gx)
}

/// `μ_{0σ(0)}(σω)` where `(σω)(x0…xn) = ω(x_{σ(0)}…x_{σ(n)})`.
pub fn permutation_act(omega: &GroupForm, sigma: &[usize], mu: &GroupConnection) -> Result<GroupForm> {
    let n = omega.degree();
    let mut seen = vec![false; n + 1];
    if sigma.len() != n + 1 || sigma.iter().any(|&s| s > n || std::mem::replace(&mut seen[s], true)) {
        return Err(Error::Shape(format!("{sigma:?} is not a permutation of 0..={n}")));
    }
    let permuted = omega.at(sigma, n);
    let value = if sigma[0] == 0 {
        permuted
    } else {
        mu.edge(0, sigma[0], n).apply(&permuted)?
    };
    Ok(GroupForm::unchecked(value))
}

pub fn permutation_sign(sigma: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..sigma.len() {
        for j in i + 1..sigma.len() {
            if sigma[i] > sigma[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `δ¹_μ δ⁰_μ(g) = [[κ_μ, g]]`.
pub fn check_d1d0(g: &GroupForm, mu: &GroupConnection) -> CheckRecord {
    CheckRecord::from_result(
        "group",
        "d1d0",
        &[],
        (|| {
            let lhs = delta_mu(&delta_mu(g, mu)?, mu)?;
            let rhs = double_bracket(&mu.curvature_form(), g)?;
            Ok(CheckRecord::group("group", "d1d0", &[], lhs.value(), rhs.value()))
        })(),
    )
}

/// `δ¹_μ(γ⁻¹) = δ¹_μ(γ)⁻¹ · [γ, γ]_μ`.
pub fn d1_of_inverse(gamma: &GroupForm, mu: &GroupConnection) -> CheckRecord {
    CheckRecord::from_result(
        "group",
        "d1rule",
        &[],
        (|| {
            let lhs = delta_mu(&gamma.inv(), mu)?;
            let rhs = &delta_mu(gamma, mu)?.inv() * &bracket_ff(gamma, gamma, mu)?;
            Ok(CheckRecord::group("group", "d1rule", &[], lhs.value(), rhs.value()))
        })(),
    )
}

/// Group Bianchi identity `δ²_{μ^ad} κ_μ = 1`.
pub fn check_bianchi_group(mu: &GroupConnection) -> CheckRecord {
    CheckRecord::from_result(
        "group",
        "defkapmu0",
        &[],
        (|| {
            let b = delta_mu_ad(&mu.curvature_form(), mu)?;
            let id = AmbientForm::identity(mu.frame(), 3, mu.flavor());
            Ok(CheckRecord::aut("group", "defkapmu0", &[], b.value(), id.value()))
        })(),
    )
}

/// `κ_{αμ} = (δ¹_{μ^ad} α) κ_μ`.
pub fn check_bianchi_change(mu: &GroupConnection, alpha: &AmbientForm) -> CheckRecord {
    CheckRecord::from_result(
        "group",
        "cobcap",
        &[],
        (|| {
            let mu2 = mu.perturb(alpha.value())?;
            let lhs = mu2.curvature_form();
            let rhs = &delta_mu_ad(alpha, mu)? * &mu.curvature_form();
            Ok(CheckRecord::aut("group", "cobcap", &[], lhs.value(), rhs.value()))
        })(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::algebra::AlgebraContext;

    const U3: GroupFlavor = GroupFlavor::Unitriangular(3);

    fn frame() -> Frame {
        Frame::new(2, 2).unwrap()
    }

    fn elem(ctx: AlgebraContext, entries: &[((usize, usize), &str)]) -> GroupElement {
        let mut m = Matrix::identity(ctx, 3);
        for ((i, j), s) in entries {
            m.set(i - 1, j - 1, crate::AlgebraElement::parse(ctx, s).unwrap());
        }
        GroupElement::new(U3, m).unwrap()
    }

    #[test]
    fn delta0_example() {
        let f = frame();
        let g = GroupForm::section(elem(f.simplex(0), &[((1, 2), "x1")])).unwrap();
        let mu = GroupConnection::canonical(f, U3);
        let d = delta_mu(&g, &mu).unwrap();
        assert_eq!(d.value(), &elem(f.simplex(1), &[((1, 2), "d1_1")]));
    }

    #[test]
    fn delta1_example() {
        let f = frame();
        let w = GroupForm::new(elem(f.simplex(1), &[((1, 3), "x2*d1_1")])).unwrap();
        let mu = GroupConnection::canonical(f, U3);
        let d = delta_mu(&w, &mu).unwrap();
        assert_eq!(d.value(), &elem(f.simplex(2), &[((1, 3), "-d1_1*d2_2")]));
        assert!(d.is_degenerate_vanishing());
        let swapped = permutation_act(&d, &[0, 2, 1], &mu).unwrap();
        assert_eq!(swapped, d.inv());
    }

    #[test]
    fn bracket_example() {
        let f = frame();
        let a = GroupForm::new(elem(f.simplex(1), &[((1, 2), "d1_1")])).unwrap();
        let b = GroupForm::new(elem(f.simplex(1), &[((2, 3), "d1_2")])).unwrap();
        let mu = GroupConnection::canonical(f, U3);
        let c = bracket_ff(&a, &b, &mu).unwrap();
        assert_eq!(c.value(), &elem(f.simplex(2), &[((1, 3), "d1_1*d2_2")]));
    }

    #[test]
    fn face_pattern_matches_low_degrees() {
        assert_eq!(delta_faces(2), vec![vec![0, 1, 3], vec![0, 3, 2], vec![0, 2, 1]]);
        assert_eq!(
            delta_faces(3),
            vec![vec![0, 1, 3, 4], vec![0, 1, 2, 3], vec![0, 2, 4, 3], vec![0, 1, 4, 2]]
        );
    }

    #[test]
    fn non_forms_are_rejected() {
        let f = frame();
        let bad = elem(f.simplex(1), &[((1, 2), "x1")]);
        assert!(matches!(GroupForm::new(bad), Err(Error::NotAForm(_))));
    }
}
