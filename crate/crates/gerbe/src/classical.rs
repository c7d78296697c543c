//! Classical matrix-valued differential forms and the dictionary from combinatorial forms.
//!
//! The coefficient of `d_1^{a1} … d_n^{an}` (axes increasing) in a combinatorial n-form
//! is the coefficient of `dx^{a1} ∧ … ∧ dx^{an}`.

use std::collections::BTreeMap;

use crate::algebra::{AlgebraElement, Frame, Mono};
use crate::error::{Error, Result};
use crate::forms::{AmbientForm, GroupForm};
use crate::group::GroupFlavor;
use crate::matrix::Matrix;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassicalForm {
    degree: usize,
    size: usize,
    frame: Frame,
    coeffs: BTreeMap<u8, Matrix>,
}

/// Sign of `dx^A ∧ dx^B`, or `None` if the axes overlap.
fn wedge_sign(a: u8, b: u8) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut neg = false;
    for i in 0..8 {
        if a & (1 << i) == 0 {
            continue;
        }
        // b's axes smaller than i each contribute one transposition
        let below = (b & ((1u8 << i) - 1)).count_ones();
        if below % 2 == 1 {
            neg = !neg;
        }
    }
    Some(neg)
}

impl ClassicalForm {
    pub fn zero(frame: Frame, size: usize, degree: usize) -> ClassicalForm {
        ClassicalForm {
            degree,
            size,
            frame,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient matrix for the ascending axis set `axes` (bit `a-1` is axis `a`).
    pub fn coefficient(&self, axes: u8) -> Matrix {
        self.coeffs
            .get(&axes)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(self.frame.simplex(0), self.size))
    }

    pub fn components(&self) -> impl Iterator<Item = (&u8, &Matrix)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn max_base_degree(&self, degree: usize) -> u8 {
        self.frame.weight_cap().saturating_sub(degree as u8)
    }

    fn insert(&mut self, axes: u8, m: Matrix) {
        let cap = self.max_base_degree(self.degree);
        let m = m.map(|a| a.filter(|mono| mono.base_degree() <= cap));
        let entry = self
            .coeffs
            .entry(axes)
            .or_insert_with(|| Matrix::zero(m.context(), m.size()));
        *entry = &*entry + &m;
        if entry.is_zero() {
            self.coeffs.remove(&axes);
        }
    }

    fn from_matrix(frame: Frame, degree: usize, value: &Matrix) -> Result<ClassicalForm> {
        let k = value.size();
        let full = ((1u16 << degree) - 1) as u8;
        let base = frame.simplex(0);
        let mut out = ClassicalForm::zero(frame, k, degree);
        let mut parts: BTreeMap<u8, Vec<Vec<(Mono, crate::Q)>>> = BTreeMap::new();
        for i in 0..k {
            for j in 0..k {
                let mut e = value.get(i, j).clone();
                if i == j {
                    e = &e - &AlgebraElement::one(e.context());
                }
                for (m, c) in e.terms() {
                    if m.slot_mask() != full {
                        return Err(Error::NotAForm(format!(
                            "lower displacement term in entry ({},{}) of a {degree}-form",
                            i + 1,
                            j + 1
                        )));
                    }
                    let slot = parts.entry(m.axis_mask()).or_insert_with(|| vec![Vec::new(); k * k]);
                    slot[i * k + j].push((m.base_part(), c.clone()));
                }
            }
        }
        for (axes, entries) in parts {
            let e = entries
                .into_iter()
                .map(|raw| AlgebraElement::from_terms(base, raw))
                .collect();
            out.insert(axes, Matrix::from_entries(base, k, e)?);
        }
        Ok(out)
    }

    pub fn add(&self, other: &ClassicalForm) -> ClassicalForm {
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (a, m) in &other.coeffs {
            out.insert(*a, m.clone());
        }
        out
    }

    pub fn neg(&self) -> ClassicalForm {
        let mut out = self.clone();
        for m in out.coeffs.values_mut() {
            *m = m.neg();
        }
        out
    }

    pub fn sub(&self, other: &ClassicalForm) -> ClassicalForm {
        self.add(&other.neg())
    }

    /// Exterior derivative of the coefficient functions.
    pub fn d(&self) -> ClassicalForm {
        let mut out = ClassicalForm::zero(self.frame, self.size, self.degree + 1);
        for (&axes, m) in &self.coeffs {
            for a in 1..=self.frame.base_dim() {
                let bit = 1u8 << (a - 1);
                let Some(neg) = wedge_sign(bit, axes) else {
                    continue;
                };
                let dm = m.map(|e| e.diff(a));
                out.insert(axes | bit, if neg { dm.neg() } else { dm });
            }
        }
        out
    }

    /// `α ∧ β` with matrix multiplication of the coefficients.
    pub fn wedge(&self, other: &ClassicalForm) -> ClassicalForm {
        let mut out = ClassicalForm::zero(self.frame, self.size, self.degree + other.degree);
        for (&a, ma) in &self.coeffs {
            for (&b, mb) in &other.coeffs {
                let Some(neg) = wedge_sign(a, b) else {
                    continue;
                };
                let p = ma * mb;
                out.insert(a | b, if neg { p.neg() } else { p });
            }
        }
        out
    }

    /// Graded commutator `[α, β] = α∧β − (−1)^{pq} β∧α`.
    pub fn bracket(&self, other: &ClassicalForm) -> ClassicalForm {
        let ab = self.wedge(other);
        let ba = other.wedge(self);
        if (self.degree * other.degree).is_multiple_of(2) {
            ab.sub(&ba)
        } else {
            ab.add(&ba)
        }
    }

    /// `[α]^(2) = α ∧ α`, which is `½[α, α]` for a 1-form.
    pub fn square(&self) -> ClassicalForm {
        self.wedge(self)
    }

    /// Equality of automorphism-valued forms: the difference acts trivially (commutes
    /// with the group's generating matrix units).
    pub fn same_action(&self, other: &ClassicalForm, flavor: GroupFlavor) -> bool {
        let diff = self.sub(other);
        diff.coeffs.values().all(|m| {
            flavor
                .generator_units()
                .into_iter()
                .all(|(i, j)| commutes_in_lie(m, i, j))
        })
    }
}

/// `X E_ij = E_ij X` for a Lie-algebra matrix X.
fn commutes_in_lie(x: &Matrix, i: usize, j: usize) -> bool {
    x.commutes_with_unit(i, j)
}

/// Top-degree coefficients of a group-valued form; lower displacement terms are an error.
pub fn classical_extract(omega: &GroupForm) -> Result<ClassicalForm> {
    if omega.degree() > 0 && !omega.is_degenerate_vanishing() {
        return Err(Error::NotAForm("input is not the identity on degenerate simplices".into()));
    }
    ClassicalForm::from_matrix(omega.frame(), omega.degree(), omega.value().matrix())
}

pub fn classical_extract_ambient(u: &AmbientForm) -> Result<ClassicalForm> {
    if u.degree() > 0 && !u.is_degenerate_vanishing() {
        return Err(Error::NotAForm("input is not trivial on degenerate simplices".into()));
    }
    ClassicalForm::from_matrix(u.frame(), u.degree(), u.value().matrix())
}
