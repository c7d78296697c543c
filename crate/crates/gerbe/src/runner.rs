//! Suite selection over a dataset, parallel fan-out and report assembly.

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::crossed::{check_ab, normalize, verify_normalization};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::forms::{check_bianchi_change, check_bianchi_group, check_d1d0, d1_of_inverse};
use crate::gerbe_suite::equivalence::{check_equivalence_data, check_two_arrow, transport};
use crate::gerbe_suite::special::{check_abelian, check_trivial};
use crate::gerbe_suite::{apply_rho, apply_triple, check_rho, check_triple, run_gerbe_suite, GerbeCocycle};
use crate::report::{CheckRecord, Report};
use crate::torsor::run_torsor_suite;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Group,
    Torsor,
    Gerbe,
    Triple,
    Rho,
    Equivalence,
    Cm,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Group,
        Suite::Torsor,
        Suite::Gerbe,
        Suite::Triple,
        Suite::Rho,
        Suite::Equivalence,
        Suite::Cm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Group => "group",
            Suite::Torsor => "torsor",
            Suite::Gerbe => "gerbe",
            Suite::Triple => "triple",
            Suite::Rho => "rho",
            Suite::Equivalence => "equivalence",
            Suite::Cm => "cm",
        }
    }

    /// `all` expands to every suite.
    pub fn parse(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Suite::ALL
            .iter()
            .find(|x| x.name() == s)
            .map(|x| vec![*x])
            .ok_or_else(|| Error::Unsupported(format!("suite {s}")))
    }
}

type Task<'a> = Box<dyn Fn() -> Vec<CheckRecord> + Send + Sync + 'a>;

fn at(mut r: CheckRecord, s: &[usize]) -> CheckRecord {
    r.simplex = s.to_vec();
    r
}

fn retag(mut recs: Vec<CheckRecord>, suite: &str) -> Vec<CheckRecord> {
    for r in &mut recs {
        r.suite = suite.to_string();
    }
    recs
}

fn missing_section(suite: Suite, section: &str) -> Vec<CheckRecord> {
    vec![CheckRecord::failure(suite.name(), "section", &[], format!("dataset has no {section} section"))]
}

/// Exact comparison of the connective structures of two cocycles on one nerve.
fn same_cocycle(suite: &str, eq: &str, got: &GerbeCocycle, want: &GerbeCocycle) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for &i in want.nerve.indices() {
        out.push(CheckRecord::from_result(suite, eq, &[i], (|| {
            let m = CheckRecord::aut(suite, eq, &[i], got.m(i)?.aut(), want.m(i)?.aut());
            if !m.passed() {
                return Ok(m.with_note("m"));
            }
            Ok(CheckRecord::group(suite, eq, &[i], got.b(i)?.value(), want.b(i)?.value()).with_note("B"))
        })()));
    }
    for (i, j) in want.nerve.pairs() {
        let s = [i, j];
        out.push(CheckRecord::from_result(suite, eq, &s, (|| {
            let l = CheckRecord::aut(suite, eq, &s, got.lambda(i, j)?, want.lambda(i, j)?);
            if !l.passed() {
                return Ok(l.with_note("lambda"));
            }
            Ok(CheckRecord::group(suite, eq, &s, got.gamma(i, j)?.value(), want.gamma(i, j)?.value()).with_note("gamma"))
        })()));
    }
    for (i, j, k) in want.nerve.triples() {
        let s = [i, j, k];
        out.push(CheckRecord::from_result(suite, eq, &s, (|| {
            Ok(CheckRecord::group(suite, eq, &s, got.g(i, j, k)?.value(), want.g(i, j, k)?.value()).with_note("g"))
        })()));
    }
    out
}

/// Flat `λ ≡ 1` data on an abelian group: the setting of the abelian reduction.
fn is_flat_abelian(c: &GerbeCocycle) -> bool {
    c.flavor.is_abelian()
        && c.lambda.values().all(|l| l.acts_trivially())
        && c.m.values().all(|m| m.curvature().acts_trivially())
}

fn tasks<'a>(d: &'a Dataset, suite: Suite) -> Vec<Task<'a>> {
    let mut t: Vec<Task<'a>> = Vec::new();
    match suite {
        Suite::Group => {
            if let Some(tor) = &d.torsor {
                t.push(Box::new(move || vec![check_bianchi_group(&tor.mu)]));
                for &i in tor.nerve.indices() {
                    t.push(Box::new(move || match tor.omega(i) {
                        Ok(w) => vec![at(check_bianchi_change(&tor.mu, &w.inner()), &[i])],
                        Err(e) => vec![CheckRecord::failure("group", "cobcap", &[i], e.to_string())],
                    }));
                }
                for (i, j) in tor.nerve.pairs() {
                    t.push(Box::new(move || match tor.g(i, j) {
                        Ok(g) => vec![at(check_d1d0(g, &tor.mu), &[i, j])],
                        Err(e) => vec![CheckRecord::failure("group", "d1d0", &[i, j], e.to_string())],
                    }));
                }
            }
            if let Some(c) = &d.gerbe {
                for &i in c.nerve.indices() {
                    t.push(Box::new(move || match c.m(i) {
                        Ok(m) => vec![at(check_bianchi_group(m), &[i])],
                        Err(e) => vec![CheckRecord::failure("group", "defkapmu0", &[i], e.to_string())],
                    }));
                }
                for (i, j) in c.nerve.pairs() {
                    t.push(Box::new(move || match (c.gamma(i, j), c.m(i)) {
                        (Ok(g), Ok(m)) => vec![at(d1_of_inverse(g, m), &[i, j])],
                        (Err(e), _) | (_, Err(e)) => vec![CheckRecord::failure("group", "d1rule", &[i, j], e.to_string())],
                    }));
                }
            }
        }
        Suite::Torsor => match &d.torsor {
            Some(tor) => t.push(Box::new(move || run_torsor_suite(tor))),
            None => t.push(Box::new(move || missing_section(suite, "torsor"))),
        },
        Suite::Gerbe => match &d.gerbe {
            Some(c) => {
                t.push(Box::new(move || run_gerbe_suite(c)));
                if c.nerve.pairs().next().is_none() {
                    t.push(Box::new(move || check_trivial(c)));
                }
                if is_flat_abelian(c) {
                    t.push(Box::new(move || check_abelian(c)));
                }
            }
            None => t.push(Box::new(move || missing_section(suite, "gerbe"))),
        },
        Suite::Triple => match (&d.gerbe, &d.triple) {
            (Some(c), Some(tr)) => {
                t.push(Box::new(move || check_triple(c, &tr.source, &tr.triple)));
                t.push(Box::new(move || match apply_triple(&tr.source, &tr.triple) {
                    Ok(got) => same_cocycle("triple", "apply", &got, c),
                    Err(e) => vec![CheckRecord::failure("triple", "apply", &[], e.to_string())],
                }));
            }
            _ => t.push(Box::new(move || missing_section(suite, "gerbe and triple"))),
        },
        Suite::Rho => match (&d.gerbe, &d.triple, &d.rho) {
            (Some(c), Some(tr), Some(rho)) => t.push(Box::new(move || {
                let t2 = match apply_rho(&tr.triple, rho, c) {
                    Ok(t2) => t2,
                    Err(e) => return vec![CheckRecord::failure("rho", "apply", &[], e.to_string())],
                };
                let mut out = check_rho(&tr.triple, &t2, rho, c);
                out.extend(retag(check_triple(c, &tr.source, &t2), "rho"));
                match apply_triple(&tr.source, &t2) {
                    Ok(got) => out.extend(same_cocycle("rho", "apply", &got, c)),
                    Err(e) => out.push(CheckRecord::failure("rho", "apply", &[], e.to_string())),
                }
                out
            })),
            _ => t.push(Box::new(move || missing_section(suite, "gerbe, triple and rho"))),
        },
        Suite::Equivalence => match (&d.gerbe, &d.equivalence) {
            (Some(c), Some(eq)) => {
                t.push(Box::new(move || check_equivalence_data(&eq.source, c, &eq.data)));
                t.push(Box::new(move || match transport(&eq.source, &eq.data) {
                    Ok(got) => same_cocycle("equivalence", "transport", &got, c),
                    Err(e) => vec![CheckRecord::failure("equivalence", "transport", &[], e.to_string())],
                }));
                if let Some(a) = &eq.two_arrow {
                    t.push(Box::new(move || check_two_arrow(c, &eq.data, &a.v, &a.theta)));
                    t.push(Box::new(move || check_equivalence_data(&eq.source, c, &a.v)));
                }
            }
            _ => t.push(Box::new(move || missing_section(suite, "gerbe and equivalence"))),
        },
        Suite::Cm => match &d.crossed_module {
            Some(cm) => t.push(Box::new(move || {
                let mut out = match d.context.frame() {
                    Ok(f) => cm.data.module.check_axioms(f),
                    Err(e) => vec![CheckRecord::failure("cm", "context", &[], e.to_string())],
                };
                let ab = check_ab(&cm.data);
                let ab_ok = ab.iter().all(|r| r.passed());
                out.extend(ab);
                if !ab_ok {
                    return out;
                }
                match normalize(&cm.data) {
                    Ok(n) => {
                        out.extend(verify_normalization(&cm.data, &n));
                        if let Some((g, chi)) = &cm.normalized {
                            out.push(CheckRecord::group("cm", "stored-g-prime", &[], g, &n.g_prime));
                            out.push(CheckRecord::group("cm", "stored-chi", &[], chi, &n.chi));
                        }
                    }
                    Err(e) => out.push(CheckRecord::failure("cm", "normalize", &[], e.to_string())),
                }
                out
            })),
            None => t.push(Box::new(move || missing_section(suite, "crossed_module"))),
        },
    }
    t
}

/// Suites that have data to look at; `all` skips the ones without their section.
fn applicable(d: &Dataset, s: Suite) -> bool {
    match s {
        Suite::Group => d.torsor.is_some() || d.gerbe.is_some(),
        Suite::Torsor => d.torsor.is_some(),
        Suite::Gerbe => d.gerbe.is_some(),
        Suite::Triple => d.gerbe.is_some() && d.triple.is_some(),
        Suite::Rho => d.gerbe.is_some() && d.triple.is_some() && d.rho.is_some(),
        Suite::Equivalence => d.gerbe.is_some() && d.equivalence.is_some(),
        Suite::Cm => d.crossed_module.is_some(),
    }
}

pub fn fingerprint(d: &Dataset, suites: &[Suite]) -> String {
    let mut h = Sha256::new();
    h.update(concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).as_bytes());
    for s in suites {
        h.update(s.name().as_bytes());
        h.update(b"\0");
    }
    h.update(d.to_json().as_bytes());
    let digest = h.finalize();
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Runs `suites` over `d` on `jobs` worker threads (`None`: available parallelism).
/// The record order depends only on the dataset and the suite list.
pub fn run(d: &Dataset, suites: &[Suite], jobs: Option<usize>) -> Result<Report> {
    let explicit = suites.len() == 1;
    let mut all: Vec<Task<'_>> = Vec::new();
    let mut skipped = Vec::new();
    for &s in suites {
        if d.nerve.is_empty() && d.crossed_module.is_none() {
            continue;
        }
        if explicit || applicable(d, s) {
            all.extend(tasks(d, s));
        } else {
            skipped.push(s.name());
        }
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        if n == 0 {
            return Err(Error::Unsupported("--jobs 0".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Unsupported(e.to_string()))?;
    let records: Vec<CheckRecord> = pool.install(|| all.par_iter().flat_map_iter(|t| t()).collect());
    let mut report = Report::new(records, fingerprint(d, suites));
    if !skipped.is_empty() {
        report.notes.push(format!("skipped without data: {}", skipped.join(", ")));
    }
    if d.gerbe.is_some() || d.equivalence.is_some() {
        report
            .notes
            .push("automorphism-valued data is checked inside the inner (conjugation) model".into());
    }
    Ok(report)
}
