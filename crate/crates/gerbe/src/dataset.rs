//! JSON datasets: a context, a nerve and optional data sections, with every matrix
//! written as rows of polynomial strings.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::algebra::Frame;
use crate::crossed::{CMFormData, CrossedModule, SubgroupShape};
use crate::error::{Error, Result};
use crate::forms::{AmbientForm, GroupForm};
use crate::generate::TwoArrow;
use crate::gerbe_suite::{EquivalenceData, GerbeCocycle, TransformationTriple, TripleEquivalence};
use crate::group::{AmbientAutomorphism, GroupConnection, GroupElement, GroupFlavor};
use crate::matrix::Matrix;
use crate::nerve::CoverNerve;
use crate::torsor::TorsorData;

type Rows = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Context {
    pub base_dim: usize,
    pub trunc_degree: usize,
    pub matrix_size: usize,
    pub flavor: String,
    pub seed: u64,
    /// Generator mode that produced the file, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
}

impl Context {
    pub fn new(frame: Frame, flavor: GroupFlavor, seed: u64, mode: Option<&str>) -> Context {
        Context {
            base_dim: frame.base_dim(),
            trunc_degree: frame.trunc_degree(),
            matrix_size: flavor.size(),
            flavor: flavor.name(),
            seed,
            mode: mode.map(str::to_string),
        }
    }

    pub fn frame(&self) -> Result<Frame> {
        Frame::new(self.base_dim, self.trunc_degree)
    }

    pub fn group_flavor(&self) -> Result<GroupFlavor> {
        let f = GroupFlavor::parse(&self.flavor)?;
        if f.size() != self.matrix_size {
            return Err(Error::Shape(format!("flavor {f} with matrix_size {}", self.matrix_size)));
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSection {
    pub source: GerbeCocycle,
    pub triple: TransformationTriple,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceSection {
    pub source: GerbeCocycle,
    pub data: EquivalenceData,
    pub two_arrow: Option<TwoArrow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedSection {
    pub data: CMFormData,
    /// `(g', χ)` once normalized.
    pub normalized: Option<(GroupElement, GroupElement)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    pub context: Context,
    pub nerve: CoverNerve,
    pub torsor: Option<TorsorData>,
    /// The target cocycle of the `triple` and `equivalence` sections when those exist.
    pub gerbe: Option<GerbeCocycle>,
    pub triple: Option<TripleSection>,
    pub rho: Option<TripleEquivalence>,
    pub equivalence: Option<EquivalenceSection>,
    pub crossed_module: Option<CrossedSection>,
}

impl Dataset {
    pub fn new(context: Context, nerve: CoverNerve) -> Dataset {
        Dataset {
            context,
            nerve,
            torsor: None,
            gerbe: None,
            triple: None,
            rho: None,
            equivalence: None,
            crossed_module: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&wire::Dataset::from(self)).expect("dataset serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Dataset> {
        let w: wire::Dataset = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        w.build()
    }
}

mod wire {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Entry {
        pub at: Vec<usize>,
        pub value: Rows,
    }

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Nerve {
        pub indices: Vec<usize>,
        #[serde(default)]
        pub simplices: Vec<Vec<usize>>,
    }

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Derived {
        pub nu: Vec<Entry>,
        pub delta: Vec<Entry>,
        pub omega: Vec<Entry>,
    }

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Gerbe {
        pub lambda: Vec<Entry>,
        pub g: Vec<Entry>,
        pub m: Vec<Entry>,
        pub gamma: Vec<Entry>,
        pub b: Vec<Entry>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub derived: Option<Derived>,
    }

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Torsor {
        pub mu: Rows,
        pub g: Vec<Entry>,
        pub omega: Vec<Entry>,
    }

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Transformation {
        pub e: Vec<Entry>,
        pub pi: Vec<Entry>,
        pub eta: Vec<Entry>,
        pub alpha: Vec<Entry>,
    }

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Triple {
        pub source: Gerbe,
        pub triple: Transformation,
    }

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Rho {
        pub rho: Vec<Entry>,
    }

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct EqData {
        pub m: Vec<Entry>,
        pub delta: Vec<Entry>,
    }

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct TwoArrow {
        pub v: EqData,
        pub theta: Vec<Entry>,
    }

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Equivalence {
        pub source: Gerbe,
        pub data: EqData,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub two_arrow: Option<TwoArrow>,
    }

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Normalized {
        pub g_prime: Rows,
        pub chi: Rows,
    }

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Crossed {
        pub g1: SubgroupShape,
        pub degree: usize,
        pub g: Rows,
        pub phi: Vec<Rows>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub normalized: Option<Normalized>,
    }

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Dataset {
        pub context: Context,
        pub nerve: Nerve,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub torsor: Option<Torsor>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub gerbe: Option<Gerbe>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub triple: Option<Triple>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub rho: Option<Rho>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub equivalence: Option<Equivalence>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub crossed_module: Option<Crossed>,
    }

    // ---- writing

    fn entries<K, V>(map: &BTreeMap<K, V>, key: impl Fn(&K) -> Vec<usize>, m: impl Fn(&V) -> &Matrix) -> Vec<Entry> {
        map.iter().map(|(k, v)| Entry { at: key(k), value: m(v).rows_text() }).collect()
    }

    fn k1(i: &usize) -> Vec<usize> {
        vec![*i]
    }

    fn k2(k: &(usize, usize)) -> Vec<usize> {
        vec![k.0, k.1]
    }

    fn k3(k: &(usize, usize, usize)) -> Vec<usize> {
        vec![k.0, k.1, k.2]
    }

    fn gm(f: &GroupForm) -> &Matrix {
        f.value().matrix()
    }

    fn am(f: &AmbientForm) -> &Matrix {
        f.value().matrix()
    }

    impl From<&GerbeCocycle> for Gerbe {
        fn from(c: &GerbeCocycle) -> Gerbe {
            Gerbe {
                lambda: entries(&c.lambda, k2, |a| a.matrix()),
                g: entries(&c.g, k3, gm),
                m: entries(&c.m, k1, |m| m.aut().matrix()),
                gamma: entries(&c.gamma, k2, gm),
                b: entries(&c.b, k1, gm),
                derived: c.derived.as_ref().map(|d| Derived {
                    nu: entries(&d.nu, k1, am),
                    delta: entries(&d.delta, k2, gm),
                    omega: entries(&d.omega, k1, gm),
                }),
            }
        }
    }

    fn eq_data(e: &EquivalenceData) -> EqData {
        EqData {
            m: entries(&e.m, k1, |a| a.matrix()),
            delta: entries(&e.delta, k2, gm),
        }
    }

    impl From<&super::Dataset> for Dataset {
        fn from(d: &super::Dataset) -> Dataset {
            Dataset {
                context: d.context.clone(),
                nerve: Nerve {
                    indices: d.nerve.indices().to_vec(),
                    simplices: d.nerve.simplices().to_vec(),
                },
                torsor: d.torsor.as_ref().map(|t| Torsor {
                    mu: t.mu.aut().matrix().rows_text(),
                    g: entries(&t.g, k2, gm),
                    omega: entries(&t.omega, k1, gm),
                }),
                gerbe: d.gerbe.as_ref().map(Gerbe::from),
                triple: d.triple.as_ref().map(|t| Triple {
                    source: Gerbe::from(&t.source),
                    triple: Transformation {
                        e: entries(&t.triple.e, k1, gm),
                        pi: entries(&t.triple.pi, k1, am),
                        eta: entries(&t.triple.eta, k2, gm),
                        alpha: entries(&t.triple.alpha, k1, gm),
                    },
                }),
                rho: d.rho.as_ref().map(|r| Rho { rho: entries(&r.rho, k1, gm) }),
                equivalence: d.equivalence.as_ref().map(|e| Equivalence {
                    source: Gerbe::from(&e.source),
                    data: eq_data(&e.data),
                    two_arrow: e.two_arrow.as_ref().map(|a| TwoArrow {
                        v: eq_data(&a.v),
                        theta: entries(&a.theta, k1, gm),
                    }),
                }),
                crossed_module: d.crossed_module.as_ref().map(|c| Crossed {
                    g1: c.data.module.g1,
                    degree: c.data.degree,
                    g: c.data.g.matrix().rows_text(),
                    phi: c.data.phi.iter().map(|p| p.matrix().rows_text()).collect(),
                    normalized: c.normalized.as_ref().map(|(g, chi)| Normalized {
                        g_prime: g.matrix().rows_text(),
                        chi: chi.matrix().rows_text(),
                    }),
                }),
            }
        }
    }

    // ---- reading

    struct Reader {
        frame: Frame,
        flavor: GroupFlavor,
    }

    fn keyed<K: Ord + Copy, V>(
        what: &str,
        list: &[Entry],
        expected: &BTreeSet<K>,
        key: impl Fn(&[usize]) -> Option<K>,
        mut val: impl FnMut(&Rows) -> Result<V>,
    ) -> Result<BTreeMap<K, V>> {
        let mut out = BTreeMap::new();
        for e in list {
            let k = key(&e.at).filter(|k| expected.contains(k)).ok_or_else(|| {
                Error::Shape(format!("{what} at {:?} is not a simplex of the nerve", e.at))
            })?;
            let v = val(&e.value).map_err(|err| Error::Parse(format!("{what} at {:?}: {err}", e.at)))?;
            if out.insert(k, v).is_some() {
                return Err(Error::Shape(format!("{what} at {:?} given twice", e.at)));
            }
        }
        if out.len() != expected.len() {
            return Err(Error::Shape(format!("{what} is missing on part of the nerve")));
        }
        Ok(out)
    }

    fn p1(a: &[usize]) -> Option<usize> {
        (a.len() == 1).then(|| a[0])
    }

    fn p2(a: &[usize]) -> Option<(usize, usize)> {
        (a.len() == 2).then(|| (a[0], a[1]))
    }

    fn p3(a: &[usize]) -> Option<(usize, usize, usize)> {
        (a.len() == 3).then(|| (a[0], a[1], a[2]))
    }

    struct Shape {
        ones: BTreeSet<usize>,
        twos: BTreeSet<(usize, usize)>,
        threes: BTreeSet<(usize, usize, usize)>,
    }

    impl Shape {
        fn of(n: &CoverNerve) -> Shape {
            Shape {
                ones: n.indices().iter().copied().collect(),
                twos: n.pairs().collect(),
                threes: n.triples().collect(),
            }
        }
    }

    impl Reader {
        fn matrix(&self, degree: usize, rows: &Rows) -> Result<Matrix> {
            let m = Matrix::from_rows_text(self.frame.try_simplex(degree)?, rows)?;
            if m.size() != self.flavor.size() {
                return Err(Error::Shape(format!("{0}x{0} matrix for {1}", m.size(), self.flavor)));
            }
            Ok(m)
        }

        fn element(&self, degree: usize, rows: &Rows) -> Result<GroupElement> {
            GroupElement::new(self.flavor, self.matrix(degree, rows)?)
        }

        fn aut(&self, degree: usize, rows: &Rows) -> Result<AmbientAutomorphism> {
            AmbientAutomorphism::new(self.flavor, self.matrix(degree, rows)?)
        }

        fn form(&self, degree: usize, rows: &Rows) -> Result<GroupForm> {
            GroupForm::new(self.element(degree, rows)?)
        }

        fn aform(&self, degree: usize, rows: &Rows) -> Result<AmbientForm> {
            AmbientForm::new(self.aut(degree, rows)?)
        }

        fn connection(&self, rows: &Rows) -> Result<GroupConnection> {
            GroupConnection::new(self.aut(1, rows)?)
        }

        fn gerbe(&self, nerve: &CoverNerve, w: &Gerbe) -> Result<GerbeCocycle> {
            let s = Shape::of(nerve);
            let derived = match &w.derived {
                None => None,
                Some(d) => Some(crate::gerbe_suite::Derived {
                    nu: keyed("nu", &d.nu, &s.ones, p1, |r| self.aform(2, r))?,
                    delta: keyed("delta", &d.delta, &s.twos, p2, |r| self.form(2, r))?,
                    omega: keyed("omega", &d.omega, &s.ones, p1, |r| self.form(3, r))?,
                }),
            };
            Ok(GerbeCocycle {
                frame: self.frame,
                flavor: self.flavor,
                nerve: nerve.clone(),
                lambda: keyed("lambda", &w.lambda, &s.twos, p2, |r| self.aut(0, r))?,
                g: keyed("g", &w.g, &s.threes, p3, |r| self.form(0, r))?,
                m: keyed("m", &w.m, &s.ones, p1, |r| self.connection(r))?,
                gamma: keyed("gamma", &w.gamma, &s.twos, p2, |r| self.form(1, r))?,
                b: keyed("B", &w.b, &s.ones, p1, |r| self.form(2, r))?,
                derived,
            })
        }

        fn eq_data(&self, nerve: &CoverNerve, w: &EqData) -> Result<EquivalenceData> {
            let s = Shape::of(nerve);
            Ok(EquivalenceData {
                m: keyed("equivalence m", &w.m, &s.ones, p1, |r| self.aut(0, r))?,
                delta: keyed("equivalence delta", &w.delta, &s.twos, p2, |r| self.form(0, r))?,
                theta: None,
            })
        }
    }

    impl Dataset {
        pub fn build(self) -> Result<super::Dataset> {
            let rd = Reader {
                frame: self.context.frame()?,
                flavor: self.context.group_flavor()?,
            };
            let nerve = CoverNerve::new(self.nerve.indices, self.nerve.simplices)?;
            let s = Shape::of(&nerve);
            let mut d = super::Dataset::new(self.context, nerve.clone());
            if let Some(t) = &self.torsor {
                d.torsor = Some(TorsorData {
                    nerve: nerve.clone(),
                    mu: rd.connection(&t.mu)?,
                    g: keyed("torsor g", &t.g, &s.twos, p2, |r| rd.form(0, r))?,
                    omega: keyed("torsor omega", &t.omega, &s.ones, p1, |r| rd.form(1, r))?,
                });
            }
            if let Some(g) = &self.gerbe {
                d.gerbe = Some(rd.gerbe(&nerve, g)?);
            }
            if let Some(t) = &self.triple {
                let w = &t.triple;
                d.triple = Some(TripleSection {
                    source: rd.gerbe(&nerve, &t.source)?,
                    triple: TransformationTriple {
                        e: keyed("E", &w.e, &s.ones, p1, |r| rd.form(1, r))?,
                        pi: keyed("pi", &w.pi, &s.ones, p1, |r| rd.aform(1, r))?,
                        eta: keyed("eta", &w.eta, &s.twos, p2, |r| rd.form(1, r))?,
                        alpha: keyed("alpha", &w.alpha, &s.ones, p1, |r| rd.form(2, r))?,
                    },
                });
            }
            if let Some(r) = &self.rho {
                d.rho = Some(TripleEquivalence {
                    rho: keyed("rho", &r.rho, &s.ones, p1, |x| rd.form(1, x))?,
                });
            }
            if let Some(e) = &self.equivalence {
                let two_arrow = match &e.two_arrow {
                    None => None,
                    Some(a) => Some(super::TwoArrow {
                        v: rd.eq_data(&nerve, &a.v)?,
                        theta: keyed("theta", &a.theta, &s.ones, p1, |r| rd.form(0, r))?,
                    }),
                };
                d.equivalence = Some(EquivalenceSection {
                    source: rd.gerbe(&nerve, &e.source)?,
                    data: rd.eq_data(&nerve, &e.data)?,
                    two_arrow,
                });
            }
            if let Some(c) = &self.crossed_module {
                let module = CrossedModule::new(rd.flavor, c.g1)?;
                let n = c.degree;
                if n == 0 || c.phi.len() != n {
                    return Err(Error::Shape(format!("crossed-module degree {n} with {} φ's", c.phi.len())));
                }
                let data = CMFormData {
                    module,
                    degree: n,
                    g: rd.element(n, &c.g)?,
                    phi: c.phi.iter().map(|p| rd.element(n - 1, p)).collect::<Result<_>>()?,
                };
                let normalized = match &c.normalized {
                    None => None,
                    Some(w) => Some((rd.element(n, &w.g_prime)?, rd.element(n, &w.chi)?)),
                };
                d.crossed_module = Some(CrossedSection { data, normalized });
            }
            Ok(d)
        }
    }
}
