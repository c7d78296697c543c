//! Square matrices over the simplex algebra.

use std::fmt;

use num_traits::Zero;

use crate::algebra::{AlgebraContext, AlgebraElement, Q};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    k: usize,
    ctx: AlgebraContext,
    e: Vec<AlgebraElement>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows_text())
    }
}

impl Matrix {
    pub fn zero(ctx: AlgebraContext, k: usize) -> Matrix {
        Matrix {
            k,
            ctx,
            e: vec![AlgebraElement::zero(ctx); k * k],
        }
    }

    pub fn identity(ctx: AlgebraContext, k: usize) -> Matrix {
        let mut m = Self::zero(ctx, k);
        for i in 0..k {
            m.e[i * k + i] = AlgebraElement::one(ctx);
        }
        m
    }

    /// Matrix unit `E_{ij}` with 1-based indices.
    pub fn unit(ctx: AlgebraContext, k: usize, i: usize, j: usize) -> Matrix {
        let mut m = Self::zero(ctx, k);
        m.e[(i - 1) * k + (j - 1)] = AlgebraElement::one(ctx);
        m
    }

    pub fn from_entries(ctx: AlgebraContext, k: usize, e: Vec<AlgebraElement>) -> Result<Matrix> {
        if e.len() != k * k {
            return Err(Error::Shape(format!("expected {} entries, got {}", k * k, e.len())));
        }
        if let Some(bad) = e.iter().find(|a| a.context() != ctx) {
            return Err(Error::ContextMismatch(ctx.to_string(), bad.context().to_string()));
        }
        Ok(Matrix { k, ctx, e })
    }

    pub fn from_rows_text(ctx: AlgebraContext, rows: &[Vec<String>]) -> Result<Matrix> {
        let k = rows.len();
        let mut e = Vec::with_capacity(k * k);
        for row in rows {
            if row.len() != k {
                return Err(Error::Shape(format!("row of length {} in a {k}x{k} matrix", row.len())));
            }
            for s in row {
                e.push(AlgebraElement::parse(ctx, s)?);
            }
        }
        Ok(Matrix { k, ctx, e })
    }

    pub fn rows_text(&self) -> Vec<Vec<String>> {
        (0..self.k)
            .map(|i| (0..self.k).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }

    pub fn size(&self) -> usize {
        self.k
    }

    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    /// Entry with 0-based indices.
    pub fn get(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.e[i * self.k + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: AlgebraElement) {
        assert_eq!(v.context(), self.ctx);
        self.e[i * self.k + j] = v;
    }

    pub fn entries(&self) -> &[AlgebraElement] {
        &self.e
    }

    pub fn map(&self, f: impl Fn(&AlgebraElement) -> AlgebraElement) -> Matrix {
        let e: Vec<_> = self.e.iter().map(f).collect();
        let ctx = e.first().map(|a| a.context()).unwrap_or(self.ctx);
        Matrix { k: self.k, ctx, e }
    }

    pub fn try_map(&self, f: impl Fn(&AlgebraElement) -> Result<AlgebraElement>) -> Result<Matrix> {
        let e = self.e.iter().map(f).collect::<Result<Vec<_>>>()?;
        let ctx = e.first().map(|a| a.context()).unwrap_or(self.ctx);
        Ok(Matrix { k: self.k, ctx, e })
    }

    fn check(&self, other: &Matrix) -> Result<()> {
        if self.k != other.k {
            return Err(Error::Shape(format!("{}x{} vs {}x{}", self.k, self.k, other.k, other.k)));
        }
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch(self.ctx.to_string(), other.ctx.to_string()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix> {
        self.check(other)?;
        let e = self.e.iter().zip(&other.e).map(|(a, b)| a + b).collect();
        Ok(Matrix { k: self.k, ctx: self.ctx, e })
    }

    pub fn checked_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check(other)?;
        let e = self.e.iter().zip(&other.e).map(|(a, b)| a - b).collect();
        Ok(Matrix { k: self.k, ctx: self.ctx, e })
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check(other)?;
        let k = self.k;
        let mut e = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let mut acc = AlgebraElement::zero(self.ctx);
                for l in 0..k {
                    let a = self.get(i, l);
                    let b = other.get(l, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                e.push(acc);
            }
        }
        Ok(Matrix { k, ctx: self.ctx, e })
    }

    pub fn scale(&self, c: &Q) -> Matrix {
        self.map(|a| a.scale(c))
    }

    pub fn scale_by(&self, a: &AlgebraElement) -> Matrix {
        self.map(|b| a * b)
    }

    pub fn neg(&self) -> Matrix {
        self.map(|a| a.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|a| a.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        (0..self.k).all(|i| {
            (0..self.k).all(|j| {
                let a = self.get(i, j);
                if i == j {
                    a.is_one()
                } else {
                    a.is_zero()
                }
            })
        })
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.k).all(|i| (0..i).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_unitriangular(&self) -> bool {
        self.is_upper_triangular() && (0..self.k).all(|i| self.get(i, i).is_one())
    }

    /// Constant term of the determinant.
    pub fn det_constant(&self) -> Q {
        let k = self.k;
        let mut a: Vec<Vec<Q>> = (0..k)
            .map(|i| (0..k).map(|j| self.get(i, j).constant_term()).collect())
            .collect();
        let mut det = crate::algebra::q(1);
        for c in 0..k {
            let Some(p) = (c..k).find(|&r| !a[r][c].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= a[c][c].clone();
            let (top, rest) = a.split_at_mut(c + 1);
            let pivot = &top[c];
            for row in rest.iter_mut() {
                let f = &row[c] / &pivot[c];
                for (x, p) in row[c..k].iter_mut().zip(&pivot[c..k]) {
                    *x -= &f * p;
                }
            }
        }
        det
    }

    /// Inverse over the local ring. Unitriangular matrices use the terminating Neumann
    /// series; everything else Gauss–Jordan with unit pivots.
    pub fn inverse(&self) -> Result<Matrix> {
        let k = self.k;
        if self.is_unitriangular() {
            let n = self.checked_sub(&Matrix::identity(self.ctx, k))?.neg();
            let mut acc = Matrix::identity(self.ctx, k);
            let mut pw = Matrix::identity(self.ctx, k);
            for _ in 1..k {
                pw = pw.checked_mul(&n)?;
                if pw.is_zero() {
                    break;
                }
                acc = acc.checked_add(&pw)?;
            }
            return Ok(acc);
        }
        let mut a = self.clone();
        let mut inv = Matrix::identity(self.ctx, k);
        for c in 0..k {
            let p = (c..k)
                .find(|&r| !a.get(r, c).constant_term().is_zero())
                .ok_or_else(|| Error::NotInvertible("determinant has zero constant term".into()))?;
            if p != c {
                for j in 0..k {
                    a.e.swap(p * k + j, c * k + j);
                    inv.e.swap(p * k + j, c * k + j);
                }
            }
            let pinv = a.get(c, c).inverse()?;
            for j in 0..k {
                a.e[c * k + j] = &a.e[c * k + j] * &pinv;
                inv.e[c * k + j] = &inv.e[c * k + j] * &pinv;
            }
            for r in 0..k {
                if r == c || a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c).clone();
                for j in 0..k {
                    let va = &f * a.get(c, j);
                    let vi = &f * inv.get(c, j);
                    a.e[r * k + j] = &a.e[r * k + j] - &va;
                    inv.e[r * k + j] = &inv.e[r * k + j] - &vi;
                }
            }
        }
        Ok(inv)
    }

    pub fn pull(&self, theta: &[usize], target: AlgebraContext) -> Result<Matrix> {
        let e = self
            .e
            .iter()
            .map(|a| a.pull(theta, target))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix { k: self.k, ctx: target, e })
    }

    pub fn degeneracy_subst(&self, i: usize, j: usize) -> Result<Matrix> {
        self.try_map(|a| a.degeneracy_subst(i, j))
    }

    /// Base-only matrix read in another simplex order.
    pub fn rebase(&self, ctx: AlgebraContext) -> Result<Matrix> {
        let e = self.e.iter().map(|a| a.rebase(ctx)).collect::<Result<Vec<_>>>()?;
        Ok(Matrix { k: self.k, ctx, e })
    }

    pub fn diagonal_restriction(&self) -> Matrix {
        self.map(|a| a.diagonal())
    }

    pub fn commutes_with_unit(&self, i: usize, j: usize) -> bool {
        // W E_ij = E_ij W  iff column i and row j of W vanish off (i, j) and W_ii = W_jj.
        let (i, j) = (i - 1, j - 1);
        (0..self.k).all(|a| a == i || self.get(a, i).is_zero())
            && (0..self.k).all(|b| b == j || self.get(j, b).is_zero())
            && self.get(i, i) == self.get(j, j)
    }
}

macro_rules! mat_binop {
    ($tr:ident, $f:ident, $checked:ident) => {
        impl std::ops::$tr<&Matrix> for &Matrix {
            type Output = Matrix;
            fn $f(self, rhs: &Matrix) -> Matrix {
                self.$checked(rhs).expect("matrix shape or context mismatch")
            }
        }
    };
}

mat_binop!(Add, add, checked_add);
mat_binop!(Sub, sub, checked_sub);
mat_binop!(Mul, mul, checked_mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    #[test]
    fn general_inverse() {
        let c = AlgebraContext::new(2, 1, 2).unwrap();
        let rows: Vec<Vec<String>> = vec![
            vec!["0".into(), "1 + x1".into(), "x2".into()],
            vec!["2".into(), "d1_1".into(), "0".into()],
            vec!["x1*d1_2".into(), "3".into(), "1 - x2".into()],
        ];
        let m = Matrix::from_rows_text(c, &rows).unwrap();
        assert!(!m.det_constant().is_zero());
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        assert!((&inv * &m).is_identity());
    }

    #[test]
    fn singular_constant_part_is_rejected() {
        let c = AlgebraContext::new(2, 1, 2).unwrap();
        let rows: Vec<Vec<String>> = vec![
            vec!["x1".into(), "1".into()],
            vec!["0".into(), "d1_1".into()],
        ];
        let m = Matrix::from_rows_text(c, &rows).unwrap();
        assert_eq!(m.det_constant(), q(0));
        assert!(m.inverse().is_err());
    }
}
