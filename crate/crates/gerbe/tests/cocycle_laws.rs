//! Torsor and gerbe suites: gauge and equivalence laws, localized failures, higher dimensions.

use std::collections::BTreeMap;

use gerbe::algebra::Frame;
use gerbe::crossed::{make_oracle_data, normalize, CMFormData, CrossedModule, SubgroupShape};
use gerbe::forms::delta_mu;
use gerbe::generate::{coboundary, torsor, trivial};
use gerbe::gerbe_suite::equivalence::{compose_equivalence, EquivalenceData};
use gerbe::gerbe_suite::triple::TripleEquivalence;
use gerbe::gerbe_suite::{apply_rho, apply_triple, run_gerbe_suite};
use gerbe::sample::Sampler;
use gerbe::torsor::{apply_gauge, run_torsor_suite};
use gerbe::{AmbientAutomorphism, CheckRecord, GroupFlavor, GroupForm};
use proptest::prelude::*;

const U3: GroupFlavor = GroupFlavor::Unitriangular(3);

fn frame() -> Frame {
    Frame::new(2, 2).unwrap()
}

fn failures(recs: &[CheckRecord]) -> Vec<(String, Vec<usize>)> {
    recs.iter().filter(|r| !r.passed()).map(|r| (r.equation.clone(), r.simplex.clone())).collect()
}

fn gauge(s: &mut Sampler, opens: usize) -> BTreeMap<usize, GroupForm> {
    (0..opens).map(|i| (i, s.group_section())).collect()
}

fn identity_equivalence(e: &EquivalenceData, frame: Frame) -> EquivalenceData {
    EquivalenceData {
        m: e.m.keys().map(|&i| (i, AmbientAutomorphism::identity(frame.simplex(0), U3))).collect(),
        delta: e.delta.keys().map(|&k| (k, GroupForm::identity(frame, 0, U3))).collect(),
        theta: None,
    }
}

#[test]
fn torsor_failure_is_local_to_the_perturbed_overlap() {
    let mut s = Sampler::new(3, frame(), U3);
    let mut t = torsor(&mut s, 4).unwrap();
    let bump = s.group_section();
    let g01 = t.g[&(0, 1)].clone();
    t.g.insert((0, 1), &g01 * &bump);
    let bad = failures(&run_torsor_suite(&t));
    assert!(!bad.is_empty());
    for (eq, simplex) in &bad {
        assert!(simplex.contains(&0) && simplex.contains(&1), "{eq} failed at {simplex:?}");
    }
    assert!(bad.iter().any(|(eq, s)| eq == "1coc" && s == &vec![0, 1, 2]));
}

#[test]
fn gerbe_failure_is_local_to_the_perturbed_triple() {
    let mut s = Sampler::new(11, frame(), U3);
    let mut c = coboundary(&mut s, 4).unwrap().target;
    let bump = s.central_section();
    let g = c.g[&(0, 1, 2)].clone();
    c.g.insert((0, 1, 2), &g * &bump);
    c = c.derive().unwrap();
    let bad = failures(&run_gerbe_suite(&c));
    assert!(bad.iter().any(|(eq, _)| eq == "cocg"));
    for (eq, simplex) in &bad {
        assert_ne!(eq, "coclam");
        if eq == "cocg" {
            assert_eq!(simplex, &vec![0, 1, 2, 3]);
        }
    }
}

#[test]
fn derive_with_canonical_connection_is_the_flat_dictionary() {
    let mut s = Sampler::new(4, frame(), U3);
    let mut c = trivial(&mut s).unwrap();
    let mu = s.canonical();
    for m in c.m.values_mut() {
        *m = mu.clone();
    }
    let c = c.derive().unwrap();
    for &i in c.nerve.indices() {
        let b = c.b(i).unwrap();
        assert!(c.nu(i).unwrap().same_action(&b.inner().inv()));
        assert_eq!(c.omega(i).unwrap(), &delta_mu(b, &mu).unwrap());
    }
}

#[test]
fn coboundary_suite_in_higher_dimension() {
    for (base_dim, seeds) in [(3, 2u64), (4, 1)] {
        for seed in 0..seeds {
            let mut s = Sampler::new(seed, Frame::new(base_dim, 1).unwrap(), U3);
            let cb = coboundary(&mut s, 3).unwrap();
            let bad = failures(&run_gerbe_suite(&cb.target));
            assert!(bad.is_empty(), "d={base_dim} seed {seed}: {bad:?}");
        }
    }
}

#[test]
fn normalizing_twice_changes_nothing() {
    for shape in [SubgroupShape::Center, SubgroupShape::Full] {
        let cm = CrossedModule::new(U3, shape).unwrap();
        for n in 1..=3 {
            let dat = make_oracle_data(cm, frame(), n, 7).unwrap();
            let once = normalize(&dat).unwrap();
            let id = gerbe::GroupElement::identity(frame().simplex(n - 1), U3);
            let again = CMFormData { g: once.g_prime.clone(), phi: vec![id; n], ..dat };
            let twice = normalize(&again).unwrap();
            assert_eq!(twice.g_prime, once.g_prime);
            assert!(twice.chi.is_identity());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn gauge_transforms_compose(seed in any::<u64>()) {
        let mut s = Sampler::new(seed, frame(), U3);
        let t = torsor(&mut s, 3).unwrap();
        let (a, b) = (gauge(&mut s, 3), gauge(&mut s, 3));
        let ta = apply_gauge(&t, &a).unwrap();
        prop_assert!(failures(&run_torsor_suite(&ta)).is_empty());
        let ba: BTreeMap<usize, GroupForm> = (0..3).map(|i| (i, &b[&i] * &a[&i])).collect();
        prop_assert_eq!(apply_gauge(&ta, &b).unwrap(), apply_gauge(&t, &ba).unwrap());
    }

    #[test]
    fn rho_equivalence_is_an_equivalence(seed in any::<u64>()) {
        let mut s = Sampler::new(seed, frame(), U3);
        let cb = coboundary(&mut s, 3).unwrap();
        let (t, c) = (&cb.triple, &cb.target);
        let id = TripleEquivalence { rho: (0..3).map(|i| (i, GroupForm::identity(frame(), 1, U3))).collect() };
        prop_assert_eq!(&apply_rho(t, &id, c).unwrap(), t);
        let there = apply_rho(t, &cb.rho, c).unwrap();
        prop_assert_eq!(&apply_rho(&there, &cb.rho.inv(), c).unwrap(), t);
        let other = TripleEquivalence { rho: (0..3).map(|i| (i, s.group_form(1))).collect() };
        let further = apply_rho(&there, &other, c).unwrap();
        prop_assert_eq!(apply_triple(&cb.source, &further).unwrap(), apply_triple(&cb.source, t).unwrap());
    }

    #[test]
    fn equivalences_form_a_category(seed in any::<u64>()) {
        let es: Vec<EquivalenceData> = (0..3)
            .map(|k| coboundary(&mut Sampler::new(seed.wrapping_add(k), frame(), U3), 3).unwrap().equivalence)
            .collect();
        let id = identity_equivalence(&es[0], frame());
        let strip = |e: EquivalenceData| EquivalenceData { theta: None, ..e };
        prop_assert_eq!(compose_equivalence(&id, &es[0]).unwrap(), strip(es[0].clone()));
        prop_assert_eq!(compose_equivalence(&es[0], &id).unwrap(), strip(es[0].clone()));
        let left = compose_equivalence(&es[2], &compose_equivalence(&es[1], &es[0]).unwrap()).unwrap();
        let right = compose_equivalence(&compose_equivalence(&es[2], &es[1]).unwrap(), &es[0]).unwrap();
        prop_assert_eq!(left, right);
    }
}
