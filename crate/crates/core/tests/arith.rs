use std::collections::HashSet;

use grunwald::arith::local_power::{lth_power_test_local, unit_precision};
use grunwald::arith::modular::{gcd, mul_mod, pow_mod};
use grunwald::arith::rational::{ratio, rational};
use grunwald::arith::{factor, primes_up_to, unit_group, Place};
use proptest::prelude::*;

proptest! {
    #[test]
    fn factor_round_trip(n in 1u128..(1u128 << 70)) {
        let f = factor(n).unwrap();
        prop_assert_eq!(f.recompose(), n);
        prop_assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn dlog_round_trip(n in 1u64..100_000, x in 0u64..100_000) {
        let g = unit_group(n).unwrap();
        let x = x % n;
        if gcd(x, n) == 1 {
            let e = g.dlog(x as i128).unwrap();
            prop_assert!(e.iter().zip(&g.orders).all(|(a, o)| a < o));
            prop_assert_eq!(g.element(&e), x % n);
        } else {
            prop_assert!(g.dlog(x as i128).is_err());
        }
    }

    #[test]
    fn principal_units_are_powers(
        p in prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]),
        m in prop::sample::select(vec![2u64, 4, 8, 16, 9, 27, 25]),
        t in 0u64..1_000_000,
        d in 1u64..1000,
    ) {
        // Units ≡ 1 mod p are m-th powers when p ∤ m.
        if m % p != 0 && d % p != 0 {
            let u = ratio((1 + p * t) as i64, 1 + (p * d) as i64);
            prop_assert!(lth_power_test_local(&u, Place::Finite(p), m).unwrap());
        }
    }
}

#[test]
fn unit_groups_generate_by_enumeration() {
    for n in [1u64, 2, 4, 8, 9, 96, 1000, 1024, 3 * 5 * 7 * 11 * 13, 65_536, 999_983, 1_000_000] {
        let g = unit_group(n).unwrap();
        let phi: u64 = (1..=n).filter(|&x| gcd(x, n) == 1).count() as u64;
        assert_eq!(g.order(), phi, "n = {n}");
        // Walk the whole group from the generators.
        let mut seen = HashSet::new();
        let mut frontier = vec![1 % n];
        seen.insert(1 % n);
        while let Some(x) = frontier.pop() {
            for &h in &g.generators {
                let y = mul_mod(x, h, n);
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        assert_eq!(seen.len() as u64, phi, "n = {n}");
    }
}

/// Exhaustive local test: compare `u mod p^K` against all `y^m mod p^K`.
fn exhaustive_local(x_num: i64, x_den: i64, p: u64, m: u64, k: u32) -> bool {
    let x = ratio(x_num, x_den);
    let (a, u) = grunwald::arith::rational::split_valuation(&x, p);
    if a.rem_euclid(m as i64) != 0 {
        return false;
    }
    let pk = p.pow(k);
    let r = grunwald::arith::rational::unit_residue(&u, pk).unwrap();
    (1..pk).filter(|y| y % p != 0).any(|y| pow_mod(y, m, pk) == r)
}

#[test]
fn local_test_matches_exhaustive_search() {
    let samples: Vec<(i64, i64)> = vec![
        (2, 1), (3, 1), (-1, 1), (5, 1), (16, 1), (-16, 1), (81, 1), (7, 3), (-27, 8),
        (10, 1), (6, 5), (256, 1), (17, 1), (-3, 1), (1, 1), (-7, 1), (12, 7), (49, 1),
        (625, 1), (1_000_003, 1), (-8, 1), (9, 1), (512, 1), (4, 9),
    ];
    let mut checked = 0;
    for p in primes_up_to(50) {
        for m in [2u64, 3, 4, 8, 9] {
            let (l, r) = if m == 9 { (3, 2) } else if m == 3 { (3, 1) } else { (2, m.trailing_zeros()) };
            let need = unit_precision(p, l, r);
            // One extra digit beyond the Hensel threshold, bounded by 10^6.
            let mut k = need + 1;
            while p.pow(k) > 1_000_000 {
                k -= 1;
            }
            if k < need {
                continue;
            }
            for &(a, b) in &samples {
                let x = ratio(a, b);
                let fast = lth_power_test_local(&x, Place::Finite(p), m).unwrap();
                let slow = exhaustive_local(a, b, p, m, k);
                assert_eq!(fast, slow, "x = {a}/{b}, p = {p}, m = {m}");
                checked += 1;
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn spec_local_examples() {
    assert!(lth_power_test_local(&rational(16), Place::Finite(7), 8).unwrap());
    assert!(!lth_power_test_local(&rational(16), Place::Finite(2), 8).unwrap());
    assert!(!lth_power_test_local(&rational(2), Place::Finite(3), 8).unwrap());
    // 16 ∉ Q_2^{×8}: no y with y^8 ≡ 16 mod 2^12.
    assert!((1..4096u64).all(|y| pow_mod(y, 8, 4096) != 16));
}
