//! Deterministic pseudo-random forms, sections and connections.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{qf, AlgebraContext, AlgebraElement, Frame, Mono, Q};
use crate::forms::{AmbientForm, GroupForm};
use crate::group::{AmbientAutomorphism, GroupConnection, GroupElement, GroupFlavor};
use crate::matrix::Matrix;

/// Which matrix entries a random matrix may populate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    /// Lie algebra of the group: strictly upper for unitriangular, everything for GL.
    Group,
    /// Lie algebra of the ambient normalizer: upper triangular for unitriangular targets.
    Ambient,
    /// Only the top-right corner (center of the unitriangular group).
    Corner,
}

fn allowed(flavor: GroupFlavor, shape: Shape, i: usize, j: usize) -> bool {
    let k = flavor.size();
    match (flavor, shape) {
        (_, Shape::Corner) => i == 0 && j == k - 1,
        (GroupFlavor::GeneralLinear(_), _) => true,
        (GroupFlavor::Unitriangular(_), Shape::Group) => i < j,
        (GroupFlavor::Unitriangular(_), Shape::Ambient) => i <= j,
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
    frame: Frame,
    flavor: GroupFlavor,
    max_deg: u8,
    max_terms: usize,
}

impl Sampler {
    pub fn new(seed: u64, frame: Frame, flavor: GroupFlavor) -> Sampler {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            frame,
            flavor,
            max_deg: frame.trunc_degree() as u8,
            max_terms: 2,
        }
    }

    /// Caps the base degree of random coefficient polynomials.
    pub fn with_max_degree(mut self, deg: usize) -> Sampler {
        self.max_deg = deg as u8;
        self
    }

    pub fn with_max_terms(mut self, n: usize) -> Sampler {
        self.max_terms = n;
        self
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn flavor(&self) -> GroupFlavor {
        self.flavor
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn coeff(&mut self) -> Q {
        const NUMS: [i64; 8] = [1, -1, 2, -2, 3, -3, 1, -1];
        let n = NUMS[self.rng.gen_range(0..NUMS.len())];
        let d = if self.rng.gen_bool(0.2) { 2 } else { 1 };
        qf(n, d)
    }

    fn nonzero_constant(&mut self) -> Q {
        const VALS: [(i64, i64); 6] = [(1, 1), (2, 1), (-1, 1), (1, 2), (3, 1), (-2, 1)];
        let (n, d) = VALS[self.rng.gen_range(0..VALS.len())];
        qf(n, d)
    }

    fn base_mono(&mut self, max_deg: u8) -> Mono {
        let d = self.frame.base_dim();
        let deg = self.rng.gen_range(0..=max_deg);
        let mut exps = vec![0u8; d];
        for _ in 0..deg {
            exps[self.rng.gen_range(0..d)] += 1;
        }
        Mono::from_parts(&exps, 0, 0)
    }

    /// Random polynomial times the displacement monomial `disp`. With `constant` false
    /// the polynomial has no constant term.
    fn poly(&mut self, ctx: AlgebraContext, disp: Mono, constant: bool) -> AlgebraElement {
        let room = self.frame.weight_cap() - disp.weight();
        let max_deg = self.max_deg.min(room);
        let nterms = self.rng.gen_range(0..=self.max_terms);
        let mut raw = Vec::new();
        for _ in 0..nterms {
            let b = self.base_mono(max_deg);
            if !constant && b == Mono::ONE && disp == Mono::ONE {
                continue;
            }
            let (m, _) = b.mul(disp).expect("base times displacement");
            raw.push((m, self.coeff()));
        }
        AlgebraElement::from_terms(ctx, raw)
    }

    fn lie_matrix(&mut self, ctx: AlgebraContext, shape: Shape, disp: Mono, constant: bool) -> Matrix {
        let k = self.flavor.size();
        let mut m = Matrix::zero(ctx, k);
        for i in 0..k {
            for j in 0..k {
                if allowed(self.flavor, shape, i, j) {
                    m.set(i, j, self.poly(ctx, disp, constant));
                }
            }
        }
        m
    }

    /// `I + Σ_A C_A(x) d_1^{a1}…d_n^{an}`: a form by construction.
    fn top_form_matrix(&mut self, n: usize, shape: Shape) -> Matrix {
        let ctx = self.frame.simplex(n);
        let full = ((1u16 << n) - 1) as u8;
        let mut acc = Matrix::identity(ctx, self.flavor.size());
        for disp in ctx.displacement_basis() {
            if disp.slot_mask() != full || n == 0 {
                continue;
            }
            let c = self.lie_matrix(ctx, shape, disp, true);
            acc = &acc + &c;
        }
        acc
    }

    pub fn group_section(&mut self) -> GroupForm {
        self.group_section_shaped(Shape::Group)
    }

    fn group_section_shaped(&mut self, shape: Shape) -> GroupForm {
        let ctx = self.frame.simplex(0);
        let k = self.flavor.size();
        loop {
            let mut m = Matrix::identity(ctx, k);
            let n = self.lie_matrix(ctx, shape, Mono::ONE, true);
            m = &m + &n;
            if let Ok(g) = GroupElement::new(self.flavor, m) {
                return GroupForm::section(g).expect("base-only");
            }
        }
    }

    /// A section with values in the center of the unitriangular group.
    pub fn central_section(&mut self) -> GroupForm {
        self.group_section_shaped(Shape::Corner)
    }

    pub fn group_form(&mut self, n: usize) -> GroupForm {
        if n == 0 {
            return self.group_section();
        }
        let m = self.top_form_matrix(n, Shape::Group);
        GroupForm::new(GroupElement::new(self.flavor, m).expect("unipotent")).expect("top-degree form")
    }

    pub fn central_form(&mut self, n: usize) -> GroupForm {
        if n == 0 {
            return self.central_section();
        }
        let m = self.top_form_matrix(n, Shape::Corner);
        GroupForm::new(GroupElement::new(self.flavor, m).expect("unipotent")).expect("top-degree form")
    }

    /// Arbitrary group element over Δⁿ, with displacement terms of every shape; with
    /// `central` the off-diagonal part is confined to the top-right corner.
    pub fn group_element(&mut self, n: usize, central: bool) -> GroupElement {
        let ctx = self.frame.simplex(n);
        let shape = if central { Shape::Corner } else { Shape::Group };
        loop {
            let mut acc = Matrix::identity(ctx, self.flavor.size());
            for disp in ctx.displacement_basis() {
                let c = self.lie_matrix(ctx, shape, disp, true);
                acc = &acc + &c;
            }
            if let Ok(g) = GroupElement::new(self.flavor, acc) {
                return g;
            }
        }
    }

    /// Invertible ambient section normalizing the group.
    pub fn ambient_section(&mut self) -> AmbientAutomorphism {
        let ctx = self.frame.simplex(0);
        let k = self.flavor.size();
        loop {
            let mut m = self.lie_matrix(ctx, Shape::Ambient, Mono::ONE, false);
            for i in 0..k {
                let c = AlgebraElement::constant(ctx, self.nonzero_constant());
                let v = m.get(i, i) + &c;
                m.set(i, i, v);
            }
            if let Ok(a) = AmbientAutomorphism::new(self.flavor, m) {
                return a;
            }
        }
    }

    pub fn ambient_form(&mut self, n: usize) -> AmbientForm {
        if n == 0 {
            return AmbientForm::new(self.ambient_section()).expect("0-forms are sections");
        }
        let m = self.top_form_matrix(n, Shape::Ambient);
        AmbientForm::new(AmbientAutomorphism::new(self.flavor, m).expect("unipotent ambient"))
            .expect("top-degree form")
    }

    /// Random connection `I + Σ_a A_a(x) d_1^a`.
    pub fn connection(&mut self) -> GroupConnection {
        let a = self.ambient_form(1);
        GroupConnection::new(a.value().clone()).expect("identity on the diagonal")
    }

    pub fn canonical(&self) -> GroupConnection {
        GroupConnection::canonical(self.frame, self.flavor)
    }

    pub fn pick<T: Clone>(&mut self, items: &[T]) -> T {
        items[self.rng.gen_range(0..items.len())].clone()
    }
}
