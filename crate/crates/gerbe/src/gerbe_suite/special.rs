//! Classical reductions: the trivial gerbe and abelian gerbes with trivial curvature.

use crate::classical::{classical_extract, classical_extract_ambient};
use crate::error::Result;
use crate::forms::delta_mu;
use crate::report::CheckRecord;

use super::GerbeCocycle;

const SUITE: &str = "gerbe";

fn record(eq: &str, s: &[usize], r: impl FnOnce() -> Result<CheckRecord>) -> CheckRecord {
    CheckRecord::from_result(SUITE, eq, s, r())
}

/// Classical form of the local equations on each open set:
/// `ω = dB + [m, B]`, `dm + [m]^(2) = i_B + ν`, `i_ω = −(dν + [m, ν])`,
/// `dω + [m, ω] = [ν, B]`.
pub fn check_trivial(c: &GerbeCocycle) -> Vec<CheckRecord> {
    let c = match c.derived {
        Some(_) => std::borrow::Cow::Borrowed(c),
        None => match c.derive() {
            Ok(d) => std::borrow::Cow::Owned(d),
            Err(e) => return vec![CheckRecord::failure(SUITE, "derive", &[], e.to_string())],
        },
    };
    let flavor = c.flavor;
    let mut out = Vec::new();
    for &i in c.nerve.indices() {
        let parts = || -> Result<_> {
            let a = classical_extract_ambient(&c.m(i)?.as_form())?;
            let b = classical_extract(c.b(i)?)?;
            let n = classical_extract_ambient(c.nu(i)?)?;
            let w = classical_extract(c.omega(i)?)?;
            Ok((a, b, n, w))
        };
        let parts = parts();
        let with = |eq: &str, f: &dyn Fn(&(_, _, _, _)) -> bool| {
            record(eq, &[i], || match &parts {
                Ok(p) => Ok(CheckRecord::new(SUITE, eq, &[i], f(p)).with_note("classical")),
                Err(e) => Err(e.clone()),
            })
        };
        out.push(with("omidef3", &|(a, b, _, w)| *w == b.d().add(&a.bracket(b))));
        out.push(with("ifi3", &|(a, b, n, _)| a.d().add(&a.square()).same_action(&b.add(n), flavor)));
        out.push(with("ificonj3", &|(a, _, n, w)| w.same_action(&n.d().add(&a.bracket(n)).neg(), flavor)));
        out.push(with("relnufi3", &|(a, b, n, w)| w.d().add(&a.bracket(w)) == n.bracket(b)));
    }
    out
}

/// Abelian reduction with `λ ≡ 1` and trivial curvature: `∂γ = δ⁰_m(g)`,
/// `B_j − B_i = −dγ_ij`, `ω_i = ω_j` and `δ³ω = 1`.
pub fn check_abelian(c: &GerbeCocycle) -> Vec<CheckRecord> {
    if !c.flavor.is_abelian() {
        return vec![CheckRecord::failure(SUITE, "abelian", &[], format!("{} is not abelian", c.flavor))];
    }
    let c = match c.derive() {
        Ok(d) => d,
        Err(e) => return vec![CheckRecord::failure(SUITE, "derive", &[], e.to_string())],
    };
    let mut out = Vec::new();
    for (i, j) in c.nerve.pairs() {
        let s = [i, j];
        out.push(record("lambda", &s, || {
            let pass = c.lambda(i, j)?.acts_trivially();
            Ok(CheckRecord::new(SUITE, "lambda", &s, pass))
        }));
    }
    for (i, j, k) in c.nerve.triples() {
        let s = [i, j, k];
        out.push(record("cocep2", &s, || {
            let lhs = &(c.gamma(j, k)? * &c.gamma(i, k)?.inv()) * c.gamma(i, j)?;
            let rhs = delta_mu(c.g(i, j, k)?, c.m(i)?)?;
            Ok(CheckRecord::group(SUITE, "cocep2", &s, lhs.value(), rhs.value()).with_note("abelian"))
        }));
    }
    for (i, j) in c.nerve.pairs() {
        let s = [i, j];
        out.push(record("compfifj", &s, || {
            let lhs = classical_extract(c.b(j)?)?.sub(&classical_extract(c.b(i)?)?);
            let rhs = classical_extract(c.gamma(i, j)?)?.d().neg();
            Ok(CheckRecord::new(SUITE, "compfifj", &s, lhs == rhs).with_note("classical"))
        }));
        out.push(record("comoioj", &s, || {
            Ok(CheckRecord::group(SUITE, "comoioj", &s, c.omega(j)?.value(), c.omega(i)?.value()).with_note("global"))
        }));
    }
    for &i in c.nerve.indices() {
        out.push(record("relnufi", &[i], || {
            let w = c.omega(i)?;
            let d = delta_mu(w, c.m(i)?)?;
            Ok(CheckRecord::new(SUITE, "relnufi", &[i], d.is_identity()).with_note("closed"))
        }));
    }
    out
}
