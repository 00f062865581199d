mod common;

use common::{character_corpus, rational_corpus};
use grunwald::arith::factor_u64;
use grunwald::arith::modular::gcd;
use grunwald::arith::Place;
use grunwald::characters::{field_discriminant, make_dirichlet};
use num::BigUint;
use proptest::prelude::*;

#[test]
fn product_formula_on_corpus() {
    let chars = character_corpus(7, 200, 3000);
    let xs = rational_corpus(11, 50);
    for chi in &chars {
        for x in &xs {
            assert!(chi.verify_product_formula(x).unwrap(), "{chi:?} at {x}");
        }
    }
}

#[test]
fn local_components_agree_with_conductor() {
    for chi in character_corpus(3, 300, 5000) {
        let cond = chi.conductor();
        for (p, _) in factor_u64(chi.modulus().max(2) * 30) {
            let local = chi.local_component(Place::Finite(p));
            assert_eq!(local.conductor_exponent, cond.finite_part.exponent_of(p as u128));
            if chi.modulus() % p != 0 {
                assert_eq!(Some(local.uniformizer_exponent), chi.evaluate(p as i128));
            }
        }
        let real = chi.local_component(Place::Real);
        assert_eq!(real.sign_exponent == 1, cond.real_bit);
    }
}

#[test]
fn primitivization_is_idempotent() {
    for chi in character_corpus(5, 300, 5000) {
        let p = chi.primitive();
        assert_eq!(p.conductor(), chi.conductor());
        assert_eq!(p.primitive(), p);
        assert_eq!(p.modulus(), chi.conductor_norm());
        for n in 1..200i128 {
            if gcd(n as u64, chi.modulus()) == 1 {
                assert_eq!(p.evaluate(n), chi.evaluate(n));
            }
        }
    }
}

#[test]
fn prime_order_discriminants() {
    // Characters of prime order l: d = N(χ)^{l-1}.
    for (n, l) in [(5u64, 2u64), (7, 3), (11, 5), (13, 3), (31, 5), (43, 7), (9, 3), (8, 2), (63, 3), (41, 5)] {
        let g = grunwald::arith::unit_group(n).unwrap();
        // Exponent l on the first generator whose order is divisible by l.
        let i = g.orders.iter().position(|&o| o % l == 0).unwrap();
        let mut exps = vec![0; g.rank()];
        exps[i] = 1;
        let chi = make_dirichlet(n, &exps, l).unwrap();
        assert_eq!(chi.order(), l);
        let f = chi.conductor_norm();
        assert_eq!(field_discriminant(&chi), BigUint::from(f).pow((l - 1) as u32), "n = {n}");
    }
}

proptest! {
    #[test]
    fn multiplicativity(seed in 0u64..10_000, a in 1i128..100_000, b in 1i128..100_000) {
        let chi = character_corpus(seed, 1, 5000).pop().unwrap();
        let m = chi.exponent_modulus();
        match (chi.evaluate(a), chi.evaluate(b)) {
            (Some(x), Some(y)) => prop_assert_eq!(chi.evaluate(a * b), Some((x + y) % m)),
            _ => prop_assert_eq!(chi.evaluate(a * b), None),
        }
    }
}
