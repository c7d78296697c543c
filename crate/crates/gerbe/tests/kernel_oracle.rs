//! The rewrite system against the brute-force quotient, including negative controls.

mod common;

use gerbe::algebra::{q, qf, Frame};
use gerbe::AlgebraElement;
use num_traits::One;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{lift, pull_images, random_element, DispIdeal, Poly};

fn d(p: &Poly, s: usize, a: usize) -> Poly {
    Poly::var(p.base_dim, p.order, p.d_idx(s, a))
}

#[test]
fn ideal_membership_controls() {
    let ideal = DispIdeal::new(2, 2, 3);
    let z = Poly::zero(2, 2);
    // d_s^a d_s^b = 0
    assert!(ideal.contains(&d(&z, 1, 1).mul(&d(&z, 1, 2))));
    assert!(ideal.contains(&d(&z, 2, 2).mul(&d(&z, 2, 2))));
    // d_s^a d_t^b + d_s^b d_t^a = 0
    assert!(ideal.contains(&d(&z, 1, 1).mul(&d(&z, 2, 2)).add(&d(&z, 1, 2).mul(&d(&z, 2, 1)))));
    // wrong sign
    assert!(!ideal.contains(&d(&z, 1, 1).mul(&d(&z, 2, 2)).sub(&d(&z, 1, 2).mul(&d(&z, 2, 1)))));
    // a = b in the exchange relation: 2 d_s^a d_t^a = 0
    assert!(ideal.contains(&d(&z, 1, 1).mul(&d(&z, 2, 1))));
    assert!(!ideal.contains(&d(&z, 1, 1).mul(&d(&z, 2, 2))));
    assert!(!ideal.contains(&d(&z, 1, 1)));
    assert!(!ideal.contains(&Poly::constant(2, 2, q(1))));
}

#[test]
fn engine_sign_rule_agrees_with_oracle() {
    let ctx = Frame::new(2, 2).unwrap().simplex(2);
    let ideal = DispIdeal::new(2, 2, 3);
    let e = |s: &str| AlgebraElement::parse(ctx, s).unwrap();
    // d₁²·d₂¹ = −d₁¹d₂²
    let prod = &e("d1_2") * &e("d2_1");
    assert_eq!(prod, e("-d1_1*d2_2"));
    assert!(ideal.contains(&lift(&prod).sub(&lift(&e("d1_2")).mul(&lift(&e("d2_1"))))));
    // a nonzero engine element is never in the ideal
    assert!(!ideal.contains(&lift(&prod)));
    // d₁¹·d₂¹ = 0 and d₁¹·d₁² = 0, d₁¹·d₂² survives
    assert!((&e("d1_1") * &e("d2_1")).is_zero());
    assert!(!(&e("d1_1") * &e("d2_2")).is_zero());
    assert!((&e("d1_1") * &e("d1_2")).is_zero());
}

#[test]
fn pullback_examples_agree_with_substitution() {
    let f = Frame::new(1, 2).unwrap();
    let (c1, c2) = (f.simplex(1), f.simplex(2));
    let a = AlgebraElement::parse(c1, "x1 + d1_1 + 2*x1*d1_1").unwrap();
    for theta in [[0usize, 2], [1, 2], [2, 1], [1, 1]] {
        let got = a.pull(&theta, c2).unwrap();
        let want = lift(&a).substitute(&pull_images(1, &theta, 2), 2, f.weight_cap() as u32);
        let ideal = DispIdeal::new(1, 2, f.weight_cap() as u32);
        assert!(ideal.contains(&lift(&got).sub(&want)), "θ = {theta:?}");
    }
    let d1 = AlgebraElement::d(c1, 1, 1);
    assert_eq!(d1.pull(&[0, 2], c2).unwrap(), AlgebraElement::d(c2, 2, 1));
    assert_eq!(d1.pull(&[1, 2], c2).unwrap(), AlgebraElement::parse(c2, "d2_1 - d1_1").unwrap());
    // a non-injective vertex map collapses the edge
    assert!(d1.pull(&[1, 1], c2).unwrap().is_zero());
}

#[test]
fn rationals_survive_inversion() {
    let ctx = Frame::new(2, 2).unwrap().simplex(1);
    let u = AlgebraElement::parse(ctx, "3 - 1/2*x1 + x2*d1_1").unwrap();
    let prod = &u * &u.inverse().unwrap();
    assert!(prod.is_one());
    assert_eq!(u.inverse().unwrap().constant_term(), qf(1, 3));
    assert_eq!(prod.constant_term(), num_rational::BigRational::one());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn products_agree_with_quotient(seed in any::<u64>(), d in 1usize..=2, n in 1usize..=3) {
        let f = Frame::new(d, 2).unwrap();
        let ctx = f.simplex(n);
        let ideal = DispIdeal::new(d, n, f.weight_cap() as u32);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(ctx, &mut rng, 0.25);
        let b = random_element(ctx, &mut rng, 0.25);
        let diff = lift(&a).mul(&lift(&b)).truncate(f.weight_cap() as u32).sub(&lift(&(&a * &b)));
        prop_assert!(ideal.contains(&diff));
    }

    #[test]
    fn ring_axioms(seed in any::<u64>(), n in 0usize..=3) {
        let ctx = Frame::new(2, 2).unwrap().simplex(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(ctx, &mut rng, 0.3);
        let b = random_element(ctx, &mut rng, 0.3);
        let c = random_element(ctx, &mut rng, 0.3);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
    }
}
