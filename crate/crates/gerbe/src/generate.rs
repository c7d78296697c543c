//! Generators of cocycle data that is valid by construction.

use std::collections::BTreeMap;

use crate::algebra::Frame;
use crate::crossed::{make_oracle_data, CrossedModule, SubgroupShape};
use crate::dataset::{Context, CrossedSection, Dataset, EquivalenceSection, TripleSection};
use crate::error::{Error, Result};
use crate::forms::{delta_mu, twisted_adjoint, GroupForm};
use crate::gerbe_suite::equivalence::transport;
use crate::gerbe_suite::{apply_triple, EquivalenceData, GerbeCocycle, TransformationTriple, TripleEquivalence};
use crate::group::{AmbientAutomorphism, GroupConnection, GroupFlavor};
use crate::nerve::CoverNerve;
use crate::sample::Sampler;
use crate::torsor::TorsorData;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Trivial,
    Coboundary,
    Abelian,
    Torsor,
    Crossed,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Mode> {
        match s {
            "trivial" => Ok(Mode::Trivial),
            "coboundary" => Ok(Mode::Coboundary),
            "abelian" => Ok(Mode::Abelian),
            "torsor" => Ok(Mode::Torsor),
            "crossed" => Ok(Mode::Crossed),
            _ => Err(Error::Unsupported(format!("generator mode {s}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Trivial => "trivial",
            Mode::Coboundary => "coboundary",
            Mode::Abelian => "abelian",
            Mode::Torsor => "torsor",
            Mode::Crossed => "crossed",
        }
    }
}

/// A 2-arrow `θ : u ⇒ v` between two equivalences with the same target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoArrow {
    pub v: EquivalenceData,
    pub theta: BTreeMap<usize, GroupForm>,
}

/// Output of the coboundary generator. `target = apply_triple(source, triple)`, and
/// `target` is the transport of a cocycle with `λ ≡ 1`, `g ≡ 1` along `equivalence`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoboundaryData {
    pub target: GerbeCocycle,
    pub source: GerbeCocycle,
    pub triple: TransformationTriple,
    pub rho: TripleEquivalence,
    pub base: GerbeCocycle,
    pub equivalence: EquivalenceData,
    pub two_arrow: TwoArrow,
}

fn no_pairs(frame: Frame, flavor: GroupFlavor, nerve: CoverNerve) -> GerbeCocycle {
    GerbeCocycle {
        frame,
        flavor,
        nerve,
        lambda: BTreeMap::new(),
        g: BTreeMap::new(),
        m: BTreeMap::new(),
        gamma: BTreeMap::new(),
        b: BTreeMap::new(),
        derived: None,
    }
}

/// Random `(m, B)` on a single open set.
pub fn trivial(s: &mut Sampler) -> Result<GerbeCocycle> {
    let nerve = CoverNerve::new(vec![0], vec![])?;
    let mut c = no_pairs(s.frame(), s.flavor(), nerve);
    c.m.insert(0, s.connection());
    c.b.insert(0, s.group_form(2));
    c.derive()
}

/// The cocycle with `λ ≡ 1`, `g ≡ 1`, `γ ≡ 1` and one global pair `(m, B)`.
fn constant_cocycle(s: &mut Sampler, nerve: &CoverNerve) -> GerbeCocycle {
    let (frame, flavor) = (s.frame(), s.flavor());
    let mut c = no_pairs(frame, flavor, nerve.clone());
    let m = s.connection();
    let b = s.group_form(2);
    for &i in nerve.indices() {
        c.m.insert(i, m.clone());
        c.b.insert(i, b.clone());
    }
    for (i, j) in nerve.pairs() {
        c.lambda.insert((i, j), AmbientAutomorphism::identity(frame.simplex(0), flavor));
        c.gamma.insert((i, j), GroupForm::identity(frame, 1, flavor));
    }
    for (i, j, k) in nerve.triples() {
        c.g.insert((i, j, k), GroupForm::identity(frame, 0, flavor));
    }
    c
}

/// `η_ij = ζ_i ζ_j⁻¹`, `π_i = i_{ζ_i} p`, random `E_i`, `α_i`: a valid triple over
/// `λ ≡ 1`, `g ≡ 1`.
fn flat_triple(s: &mut Sampler, nerve: &CoverNerve) -> TransformationTriple {
    let p = s.ambient_form(1);
    let zeta: BTreeMap<usize, GroupForm> = nerve.indices().iter().map(|&i| (i, s.group_form(1))).collect();
    let mut t = TransformationTriple::default();
    for &i in nerve.indices() {
        t.pi.insert(i, &zeta[&i].inner() * &p);
        t.e.insert(i, s.group_form(1));
        t.alpha.insert(i, s.group_form(2));
    }
    for (i, j) in nerve.pairs() {
        t.eta.insert((i, j), &zeta[&i] * &zeta[&j].inv());
    }
    t
}

fn random_equivalence(s: &mut Sampler, nerve: &CoverNerve) -> EquivalenceData {
    let mut e = EquivalenceData::default();
    for &i in nerve.indices() {
        e.m.insert(i, s.ambient_section());
    }
    for (i, j) in nerve.pairs() {
        e.delta.insert((i, j), s.group_section());
    }
    e
}

/// Carries a triple between `λ ≡ 1` cocycles over to their transports along `e`:
/// `E_i` and `π_i` are conjugated by `m_i`, and `η`, `α` are then read off the checks cobe2
/// and cob3-i.
fn transport_triple(
    t: &TransformationTriple,
    e: &EquivalenceData,
    target: &GerbeCocycle,
    source: &GerbeCocycle,
) -> Result<TransformationTriple> {
    let frame = target.frame;
    let mut out = TransformationTriple::default();
    for &i in target.nerve.indices() {
        let chi = e.m(i)?.pull(&[0], frame.simplex(1))?;
        let ei = chi.apply_form(t.e(i)?)?;
        out.pi.insert(i, crate::forms::AmbientForm::new(chi.conjugate(t.pi(i)?.value()))?);
        let d1 = delta_mu(&ei, source.m(i)?)?;
        out.alpha.insert(i, &(&target.b(i)?.inv() * &d1) * source.b(i)?);
        out.e.insert(i, ei);
    }
    for (i, j) in target.nerve.pairs() {
        let pg = out.pi(i)?.apply(target.gamma(i, j)?)?;
        let rhs = &(out.e(i)? * source.gamma(i, j)?) * &source.lambda_apply(i, j, out.e(j)?)?.inv();
        out.eta.insert((i, j), &pg.inv() * &rhs);
    }
    Ok(out)
}

/// A coboundary between two connective structures on a cocycle pair with non-trivial
/// `(λ, g)`, plus a ρ-equivalence and a 2-arrow for the equivalence used.
pub fn coboundary(s: &mut Sampler, opens: usize) -> Result<CoboundaryData> {
    if opens == 0 {
        return Err(Error::Unsupported("coboundary data needs at least one open set".into()));
    }
    let nerve = CoverNerve::full(opens);
    let source0 = constant_cocycle(s, &nerve);
    let t0 = flat_triple(s, &nerve);
    let base = apply_triple(&source0, &t0)?;
    let e = random_equivalence(s, &nerve);
    let target = transport(&base, &e)?;
    let source = transport(&source0, &e)?;
    let triple = transport_triple(&t0, &e, &target, &source)?;
    let rho = TripleEquivalence {
        rho: nerve.indices().iter().map(|&i| (i, s.group_form(1))).collect(),
    };
    let two_arrow = random_two_arrow(s, &target, &e)?;
    Ok(CoboundaryData {
        target,
        source,
        triple,
        rho,
        base,
        equivalence: e,
        two_arrow,
    })
}

/// `m^v = i_θ m^u`, `δ^v_ij = λ'_ij(θ_j) δ^u_ij θ_i⁻¹`.
fn random_two_arrow(s: &mut Sampler, target: &GerbeCocycle, u: &EquivalenceData) -> Result<TwoArrow> {
    let theta: BTreeMap<usize, GroupForm> = target.nerve.indices().iter().map(|&i| (i, s.group_section())).collect();
    let mut v = EquivalenceData::default();
    for (&i, m) in &u.m {
        v.m.insert(i, &theta[&i].value().inner() * m);
    }
    for (&(i, j), d) in &u.delta {
        let l = target.lambda(i, j)?.apply_form(&theta[&j])?;
        v.delta.insert((i, j), &(&l * d) * &theta[&i].inv());
    }
    Ok(TwoArrow { v, theta })
}

/// Abelian data on `unitriangular(2)` with `λ ≡ 1` and the canonical connection:
/// `g = ∂t`, `γ_ij = δ⁰(t_ij) c_j c_i⁻¹`, `B_i = B δ¹(c_i)⁻¹`.
pub fn abelian(s: &mut Sampler, opens: usize) -> Result<GerbeCocycle> {
    if !s.flavor().is_abelian() {
        return Err(Error::Unsupported(format!("abelian mode needs an abelian flavor, not {}", s.flavor())));
    }
    let (frame, flavor) = (s.frame(), s.flavor());
    let nerve = CoverNerve::full(opens);
    let mu = GroupConnection::canonical(frame, flavor);
    let mut c = no_pairs(frame, flavor, nerve.clone());
    let t: BTreeMap<(usize, usize), GroupForm> = nerve.pairs().map(|p| (p, s.group_section())).collect();
    let cs: BTreeMap<usize, GroupForm> = nerve.indices().iter().map(|&i| (i, s.group_form(1))).collect();
    let b = s.group_form(2);
    for &i in nerve.indices() {
        c.m.insert(i, mu.clone());
        c.b.insert(i, &b * &delta_mu(&cs[&i], &mu)?.inv());
    }
    for (i, j) in nerve.pairs() {
        c.lambda.insert((i, j), AmbientAutomorphism::identity(frame.simplex(0), flavor));
        let g = &(&delta_mu(&t[&(i, j)], &mu)? * &cs[&j]) * &cs[&i].inv();
        c.gamma.insert((i, j), g);
    }
    for (i, j, k) in nerve.triples() {
        c.g.insert((i, j, k), &(&t[&(i, j)] * &t[&(j, k)]) * &t[&(i, k)].inv());
    }
    c.derive()
}

/// `g_ij = h_i⁻¹ h_j`, `ω_i = ω^{*μ h_i}` for a random connection μ and 1-form ω.
pub fn torsor(s: &mut Sampler, opens: usize) -> Result<TorsorData> {
    let nerve = CoverNerve::full(opens);
    let mu = s.connection();
    let root = s.group_form(1);
    let h: BTreeMap<usize, GroupForm> = nerve.indices().iter().map(|&i| (i, s.group_section())).collect();
    let mut g = BTreeMap::new();
    for (i, j) in nerve.pairs() {
        g.insert((i, j), &h[&i].inv() * &h[&j]);
    }
    let mut omega = BTreeMap::new();
    for &i in nerve.indices() {
        omega.insert(i, twisted_adjoint(&root, &h[&i], &mu)?);
    }
    Ok(TorsorData { nerve, mu, g, omega })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    /// Number of open sets for the multi-index modes.
    pub opens: usize,
    /// Form degree of crossed-module data.
    pub degree: usize,
    pub g1: SubgroupShape,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            opens: 3,
            degree: 2,
            g1: SubgroupShape::Center,
        }
    }
}

fn underived(mut c: GerbeCocycle) -> GerbeCocycle {
    c.derived = None;
    c
}

/// A dataset for `mode`, a pure function of its arguments. Derived forms are left out so
/// that the file carries only primary data.
pub fn dataset(mode: Mode, seed: u64, frame: Frame, flavor: GroupFlavor, opts: Options) -> Result<Dataset> {
    let mut s = Sampler::new(seed, frame, flavor);
    let ctx = Context::new(frame, flavor, seed, Some(mode.name()));
    Ok(match mode {
        Mode::Trivial => {
            let c = underived(trivial(&mut s)?);
            let mut d = Dataset::new(ctx, c.nerve.clone());
            d.gerbe = Some(c);
            d
        }
        Mode::Coboundary => {
            let cb = coboundary(&mut s, opts.opens)?;
            let mut d = Dataset::new(ctx, cb.target.nerve.clone());
            d.gerbe = Some(underived(cb.target));
            d.triple = Some(TripleSection {
                source: underived(cb.source),
                triple: cb.triple,
            });
            d.rho = Some(cb.rho);
            d.equivalence = Some(EquivalenceSection {
                source: underived(cb.base),
                data: cb.equivalence,
                two_arrow: Some(cb.two_arrow),
            });
            d
        }
        Mode::Abelian => {
            let c = underived(abelian(&mut s, opts.opens)?);
            let mut d = Dataset::new(ctx, c.nerve.clone());
            d.gerbe = Some(c);
            d
        }
        Mode::Torsor => {
            let t = torsor(&mut s, opts.opens)?;
            let mut d = Dataset::new(ctx, t.nerve.clone());
            d.torsor = Some(t);
            d
        }
        Mode::Crossed => {
            let module = CrossedModule::new(flavor, opts.g1)?;
            let data = make_oracle_data(module, frame, opts.degree, seed)?;
            let mut d = Dataset::new(ctx, CoverNerve::empty());
            d.crossed_module = Some(CrossedSection { data, normalized: None });
            d
        }
    })
}
