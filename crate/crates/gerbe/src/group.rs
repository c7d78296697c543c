//! Matrix models of the structure group, its automorphisms and connections.

use std::fmt;

use crate::algebra::{AlgebraContext, Frame};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupFlavor {
    /// Identity plus strictly upper triangular; `Unitriangular(2)` is abelian.
    Unitriangular(usize),
    GeneralLinear(usize),
}

impl GroupFlavor {
    pub fn size(self) -> usize {
        match self {
            GroupFlavor::Unitriangular(k) | GroupFlavor::GeneralLinear(k) => k,
        }
    }

    pub fn is_abelian(self) -> bool {
        matches!(self, GroupFlavor::Unitriangular(2) | GroupFlavor::GeneralLinear(1))
    }

    pub fn name(self) -> String {
        match self {
            GroupFlavor::Unitriangular(k) => format!("u{k}"),
            GroupFlavor::GeneralLinear(k) => format!("gl{k}"),
        }
    }

    pub fn parse(s: &str) -> Result<GroupFlavor> {
        let bad = || Error::Parse(format!("unknown flavor {s:?}"));
        let (ctor, rest): (fn(usize) -> GroupFlavor, &str) = if let Some(r) = s.strip_prefix("gl") {
            (GroupFlavor::GeneralLinear, r)
        } else if let Some(r) = s.strip_prefix('u') {
            (GroupFlavor::Unitriangular, r)
        } else {
            return Err(bad());
        };
        let k: usize = rest.parse().map_err(|_| bad())?;
        match ctor(k) {
            GroupFlavor::Unitriangular(k) if !(2..=4).contains(&k) => Err(bad()),
            GroupFlavor::GeneralLinear(k) if !(1..=4).contains(&k) => Err(bad()),
            f => Ok(f),
        }
    }

    pub fn contains(self, m: &Matrix) -> bool {
        if m.size() != self.size() {
            return false;
        }
        match self {
            GroupFlavor::Unitriangular(_) => m.is_unitriangular(),
            GroupFlavor::GeneralLinear(_) => !num_traits::Zero::is_zero(&m.det_constant()),
        }
    }

    /// Matrix units whose conjugates determine an automorphism in the conjugation model.
    /// The unitriangular group is generated by `I + f E_{i,i+1}`; for the general linear
    /// group the upper units alone have too large a centralizer, so the lower ones join.
    pub fn generator_units(self) -> Vec<(usize, usize)> {
        let k = self.size();
        let mut out: Vec<(usize, usize)> = (1..k).map(|i| (i, i + 1)).collect();
        if let GroupFlavor::GeneralLinear(_) = self {
            out.extend((1..k).map(|i| (i + 1, i)));
        }
        out
    }
}

impl fmt::Display for GroupFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Section of the structure group over some simplex algebra.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupElement {
    flavor: GroupFlavor,
    m: Matrix,
}

impl GroupElement {
    pub fn new(flavor: GroupFlavor, m: Matrix) -> Result<GroupElement> {
        if !flavor.contains(&m) {
            return Err(Error::Flavor(format!("matrix {:?} is not in {flavor}", m.rows_text())));
        }
        Ok(GroupElement { flavor, m })
    }

    pub fn identity(ctx: AlgebraContext, flavor: GroupFlavor) -> GroupElement {
        GroupElement {
            flavor,
            m: Matrix::identity(ctx, flavor.size()),
        }
    }

    pub fn flavor(&self) -> GroupFlavor {
        self.flavor
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix {
        self.m
    }

    pub fn context(&self) -> AlgebraContext {
        self.m.context()
    }

    pub fn is_identity(&self) -> bool {
        self.m.is_identity()
    }

    fn check(&self, other: &GroupElement) -> Result<()> {
        if self.flavor != other.flavor {
            return Err(Error::Flavor(format!("{} vs {}", self.flavor, other.flavor)));
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &GroupElement) -> Result<GroupElement> {
        self.check(other)?;
        Ok(GroupElement {
            flavor: self.flavor,
            m: self.m.checked_mul(&other.m)?,
        })
    }

    pub fn inv(&self) -> GroupElement {
        GroupElement {
            flavor: self.flavor,
            m: self.m.inverse().expect("group elements are invertible"),
        }
    }

    /// `a b a⁻¹ b⁻¹`.
    pub fn commutator(&self, other: &GroupElement) -> GroupElement {
        &(&(self * other) * &self.inv()) * &other.inv()
    }

    pub fn pull(&self, theta: &[usize], target: AlgebraContext) -> Result<GroupElement> {
        Ok(GroupElement {
            flavor: self.flavor,
            m: self.m.pull(theta, target)?,
        })
    }

    pub fn degeneracy_subst(&self, i: usize, j: usize) -> Result<GroupElement> {
        Ok(GroupElement {
            flavor: self.flavor,
            m: self.m.degeneracy_subst(i, j)?,
        })
    }

    pub fn rebase(&self, ctx: AlgebraContext) -> Result<GroupElement> {
        Ok(GroupElement {
            flavor: self.flavor,
            m: self.m.rebase(ctx)?,
        })
    }

    /// The inner automorphism `i_g`.
    pub fn inner(&self) -> AmbientAutomorphism {
        AmbientAutomorphism {
            flavor: self.flavor,
            m: self.m.clone(),
        }
    }
}

impl std::ops::Mul<&GroupElement> for &GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: &GroupElement) -> GroupElement {
        self.checked_mul(rhs).expect("group flavor or context mismatch")
    }
}

/// Automorphism of the group acting by conjugation with an ambient invertible matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AmbientAutomorphism {
    flavor: GroupFlavor,
    m: Matrix,
}

impl AmbientAutomorphism {
    pub fn new(flavor: GroupFlavor, m: Matrix) -> Result<AmbientAutomorphism> {
        if m.size() != flavor.size() {
            return Err(Error::Shape(format!("ambient matrix of size {} for {flavor}", m.size())));
        }
        if num_traits::Zero::is_zero(&m.det_constant()) {
            return Err(Error::NotInvertible("ambient matrix".into()));
        }
        let a = AmbientAutomorphism { flavor, m };
        if let GroupFlavor::Unitriangular(k) = flavor {
            let inv = a.m.inverse()?;
            for i in 1..k {
                let e = Matrix::unit(a.m.context(), k, i, i + 1);
                let c = &(&a.m * &e) * &inv;
                if !c.is_upper_triangular() || (0..k).any(|j| !c.get(j, j).is_zero()) {
                    return Err(Error::Normalization(format!(
                        "conjugate of E{}{} leaves {flavor}",
                        i,
                        i + 1
                    )));
                }
            }
        }
        Ok(a)
    }

    pub fn identity(ctx: AlgebraContext, flavor: GroupFlavor) -> AmbientAutomorphism {
        AmbientAutomorphism {
            flavor,
            m: Matrix::identity(ctx, flavor.size()),
        }
    }

    pub fn flavor(&self) -> GroupFlavor {
        self.flavor
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn context(&self) -> AlgebraContext {
        self.m.context()
    }

    pub fn checked_compose(&self, other: &AmbientAutomorphism) -> Result<AmbientAutomorphism> {
        if self.flavor != other.flavor {
            return Err(Error::Flavor(format!("{} vs {}", self.flavor, other.flavor)));
        }
        Ok(AmbientAutomorphism {
            flavor: self.flavor,
            m: self.m.checked_mul(&other.m)?,
        })
    }

    pub fn inv(&self) -> AmbientAutomorphism {
        AmbientAutomorphism {
            flavor: self.flavor,
            m: self.m.inverse().expect("ambient matrices are invertible"),
        }
    }

    /// `u g u⁻¹`.
    pub fn apply(&self, g: &GroupElement) -> Result<GroupElement> {
        if self.flavor != g.flavor {
            return Err(Error::Flavor(format!("{} acting on {}", self.flavor, g.flavor)));
        }
        let m = self.m.checked_mul(&g.m)?.checked_mul(&self.m.inverse()?)?;
        Ok(GroupElement { flavor: g.flavor, m })
    }

    /// Conjugation of an ambient automorphism: `u v u⁻¹`.
    pub fn conjugate(&self, v: &AmbientAutomorphism) -> AmbientAutomorphism {
        &(self * v) * &self.inv()
    }

    pub fn acts_trivially(&self) -> bool {
        self.flavor
            .generator_units()
            .into_iter()
            .all(|(i, j)| self.m.commutes_with_unit(i, j))
    }

    /// Equality as automorphisms.
    pub fn same_action(&self, other: &AmbientAutomorphism) -> bool {
        (self * &other.inv()).acts_trivially()
    }

    pub fn pull(&self, theta: &[usize], target: AlgebraContext) -> Result<AmbientAutomorphism> {
        Ok(AmbientAutomorphism {
            flavor: self.flavor,
            m: self.m.pull(theta, target)?,
        })
    }

    pub fn degeneracy_subst(&self, i: usize, j: usize) -> Result<AmbientAutomorphism> {
        Ok(AmbientAutomorphism {
            flavor: self.flavor,
            m: self.m.degeneracy_subst(i, j)?,
        })
    }

    pub fn rebase(&self, ctx: AlgebraContext) -> Result<AmbientAutomorphism> {
        Ok(AmbientAutomorphism {
            flavor: self.flavor,
            m: self.m.rebase(ctx)?,
        })
    }
}

impl std::ops::Mul<&AmbientAutomorphism> for &AmbientAutomorphism {
    type Output = AmbientAutomorphism;
    fn mul(self, rhs: &AmbientAutomorphism) -> AmbientAutomorphism {
        self.checked_compose(rhs).expect("flavor or context mismatch")
    }
}

/// Connection `μ(x, y)` on the group: an automorphism over the first-order
/// neighbourhood Δ¹ that is the identity on the diagonal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupConnection {
    aut: AmbientAutomorphism,
}

impl GroupConnection {
    pub fn new(aut: AmbientAutomorphism) -> Result<GroupConnection> {
        if aut.context().order() != 1 {
            return Err(Error::Shape(format!(
                "connection must live on Δ¹, not Δ^{}",
                aut.context().order()
            )));
        }
        let diag = aut.degeneracy_subst(0, 1)?;
        if !diag.acts_trivially() {
            return Err(Error::Precondition("connection is not the identity on the diagonal".into()));
        }
        Ok(GroupConnection { aut })
    }

    /// The canonical connection of a constant group: identity ambient matrix.
    pub fn canonical(frame: Frame, flavor: GroupFlavor) -> GroupConnection {
        GroupConnection {
            aut: AmbientAutomorphism::identity(frame.simplex(1), flavor),
        }
    }

    pub fn aut(&self) -> &AmbientAutomorphism {
        &self.aut
    }

    pub fn flavor(&self) -> GroupFlavor {
        self.aut.flavor()
    }

    pub fn frame(&self) -> Frame {
        self.aut.context().frame()
    }

    /// `μ` transported along the edge `(a, b)` of Δⁿ.
    pub fn edge(&self, a: usize, b: usize, n: usize) -> AmbientAutomorphism {
        self.aut
            .pull(&[a, b], self.frame().simplex(n))
            .expect("edge inside the simplex")
    }

    /// `κ_μ = (p01*μ)(p12*μ)(p02*μ)⁻¹` on Δ².
    pub fn curvature(&self) -> AmbientAutomorphism {
        &(&self.edge(0, 1, 2) * &self.edge(1, 2, 2)) * &self.edge(0, 2, 2).inv()
    }

    /// `μ' = α ∘ μ` for an ambient 1-form α that is the identity on the diagonal.
    pub fn perturb(&self, alpha: &AmbientAutomorphism) -> Result<GroupConnection> {
        GroupConnection::new(alpha.checked_compose(&self.aut)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraElement;

    fn m(ctx: AlgebraContext, rows: &[&[&str]]) -> Matrix {
        let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        Matrix::from_rows_text(ctx, &rows).unwrap()
    }

    const U3: GroupFlavor = GroupFlavor::Unitriangular(3);

    #[test]
    fn products_and_inverses() {
        let c = AlgebraContext::new(2, 0, 2).unwrap();
        let a = GroupElement::new(U3, m(c, &[&["1", "x1", "0"], &["0", "1", "0"], &["0", "0", "1"]])).unwrap();
        let b = GroupElement::new(U3, m(c, &[&["1", "0", "0"], &["0", "1", "x2"], &["0", "0", "1"]])).unwrap();
        let ab = &a * &b;
        assert_eq!(ab.matrix().rows_text()[0], vec!["1", "x1", "x1*x2"]);
        assert_eq!(a.inv().matrix().get(0, 1).to_string(), "-x1");
        assert_eq!(&a * &GroupElement::identity(c, U3), a);
    }

    #[test]
    fn diagonal_conjugation_halves_corner() {
        let c = AlgebraContext::new(2, 0, 2).unwrap();
        let u = AmbientAutomorphism::new(U3, m(c, &[&["1", "0", "0"], &["0", "2", "0"], &["0", "0", "1"]])).unwrap();
        let g = GroupElement::new(U3, m(c, &[&["1", "x1", "0"], &["0", "1", "0"], &["0", "0", "1"]])).unwrap();
        assert_eq!(u.apply(&g).unwrap().matrix().get(0, 1).to_string(), "1/2*x1");
        let w = AmbientAutomorphism::new(U3, m(c, &[&["1", "0", "1"], &["0", "1", "0"], &["0", "0", "1"]])).unwrap();
        assert_eq!(w.apply(&g).unwrap(), g);
    }

    #[test]
    fn lower_triangular_ambient_is_rejected_for_unitriangular_target() {
        let c = AlgebraContext::new(2, 0, 2).unwrap();
        let bad = m(c, &[&["1", "0", "0"], &["1", "1", "0"], &["0", "0", "1"]]);
        assert!(matches!(AmbientAutomorphism::new(U3, bad), Err(Error::Normalization(_))));
    }

    #[test]
    fn curvature_example() {
        let frame = Frame::new(2, 2).unwrap();
        let c1 = frame.simplex(1);
        let mu = GroupConnection::new(
            AmbientAutomorphism::new(U3, m(c1, &[&["1", "x2*d1_1", "0"], &["0", "1", "0"], &["0", "0", "1"]])).unwrap(),
        )
        .unwrap();
        let k = mu.curvature();
        let c2 = frame.simplex(2);
        let expect = m(c2, &[&["1", "-d1_1*d2_2", "0"], &["0", "1", "0"], &["0", "0", "1"]]);
        assert_eq!(k.matrix(), &expect);
        assert!(GroupConnection::canonical(frame, U3).curvature().acts_trivially());
    }

    #[test]
    fn connection_must_be_trivial_on_diagonal() {
        let c1 = AlgebraContext::new(2, 1, 2).unwrap();
        let bad = AmbientAutomorphism::new(U3, m(c1, &[&["1", "x1", "0"], &["0", "1", "0"], &["0", "0", "1"]])).unwrap();
        assert!(GroupConnection::new(bad).is_err());
        // A central scalar on the diagonal is allowed: it acts trivially.
        let scalar = AmbientAutomorphism::new(U3, Matrix::identity(c1, 3).scale_by(&AlgebraElement::int(c1, 2))).unwrap();
        assert!(GroupConnection::new(scalar).is_ok());
    }

    #[test]
    fn gl_generators_detect_lower_action() {
        let c = AlgebraContext::new(1, 0, 1).unwrap();
        let gl = GroupFlavor::GeneralLinear(2);
        // I + E12 commutes with E12 but not with E21.
        let u = AmbientAutomorphism::new(gl, m(c, &[&["1", "1"], &["0", "1"]])).unwrap();
        assert!(!u.acts_trivially());
        assert!(u.matrix().commutes_with_unit(1, 2));
    }
}
