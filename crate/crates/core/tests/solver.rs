use grunwald::arith::place::Place;
use grunwald::arith::rational::rational;
use grunwald::characters::LocalCharacter;
use grunwald::solver::*;
use grunwald::Error;

fn unr(p: u64, m: u64, v: u64) -> LocalCharacter {
    LocalCharacter::unramified(p, m, v).unwrap()
}

#[test]
fn quadratic_at_five() {
    let inst = GrunwaldInstance::over_q(2, vec![unr(5, 2, 1)]).unwrap();
    let sol = construct(&inst).unwrap();
    assert_eq!(sol.conductor_norm(), 3);
    assert_eq!(sol.exponent_achieved, 2);
    let o = oracle_minimal(&inst, 100).unwrap();
    assert_eq!(o.conductor_norm(), 3);
}

#[test]
fn empty_data_gives_trivial() {
    let inst = GrunwaldInstance::over_q(3, vec![]).unwrap();
    let sol = construct(&inst).unwrap();
    assert_eq!(sol.conductor_norm(), 1);
    assert!(sol.character.is_trivial());
    assert_eq!(oracle_minimal(&inst, 10).unwrap().conductor_norm(), 1);
}

#[test]
fn cycles() {
    let inst = GrunwaldInstance::over_q(2, vec![]).unwrap();
    let c = build_cycle(&inst, &[3]).unwrap();
    assert_eq!((c.norm(), c.real_bit), (24, true));
    let inst = GrunwaldInstance::over_q(3, vec![unr(5, 3, 1)]).unwrap();
    assert_eq!(build_cycle(&inst, &[7]).unwrap().norm(), 189);
    let wild = LocalCharacter::new(Place::Finite(2), 8, 5, vec![0, 1], 1, 0).unwrap();
    let inst = GrunwaldInstance::over_q(8, vec![wild]).unwrap();
    assert_eq!(build_cycle(&inst, &[3, 5]).unwrap().norm(), 32 * 32 * 15);
    assert!(matches!(build_cycle(&inst, &[2]), Err(Error::Domain(_))));
}

#[test]
fn wang_obstruction() {
    let wild = LocalCharacter::new(Place::Finite(2), 8, 5, vec![0, 1], 1, 0).unwrap();
    let inst = GrunwaldInstance::over_q(8, vec![wild.clone()]).unwrap();
    assert_eq!(special_obstruction(&inst).unwrap(), Some(4));
    let sol = construct(&inst).unwrap();
    assert_eq!(sol.exponent_achieved, 16);
    assert!(sol.special_case_flag);
    assert!(sol.character.local_component(Place::Finite(2)).equivalent(&wild));
    assert!(matches!(oracle_minimal(&inst, 100_000), Err(Error::NotFoundBelowCap { .. })));
    let wide = oracle_minimal_widening(&inst, 100_000).unwrap();
    assert_eq!(wide.exponent_achieved, 16);
    assert!(wide.conductor_norm() <= sol.conductor_norm());
    println!("wang: construct N={} oracle N={}", sol.conductor_norm(), wide.conductor_norm());
}

#[test]
fn wang_unobstructed() {
    let two = LocalCharacter::new(Place::Finite(2), 8, 5, vec![0, 1], 2, 0).unwrap();
    let inf = LocalCharacter::sign(8).unwrap();
    let inst = GrunwaldInstance::over_q(8, vec![two, inf]).unwrap();
    assert_eq!(special_obstruction(&inst).unwrap(), Some(0));
    let sol = construct(&inst).unwrap();
    assert_eq!(sol.exponent_achieved, 8);
    assert!(sol.special_case_flag);
}

#[test]
fn cubic_at_seven() {
    let inst = GrunwaldInstance::over_q(3, vec![unr(7, 3, 1)]).unwrap();
    let sol = construct(&inst).unwrap();
    let o = oracle_minimal(&inst, sol.conductor_norm()).unwrap();
    assert!(o.conductor_norm() <= sol.conductor_norm());
    assert_eq!(sol.character.evaluate(7), Some(1));
    println!("cubic7: construct N={} oracle N={}", sol.conductor_norm(), o.conductor_norm());
    let _ = rational(1);
}

mod common;

#[test]
fn auxiliary_primes_leave_only_allowed_survivors() {
    let base = [Place::Finite(2), Place::Finite(3), Place::Finite(5), Place::Finite(7), Place::Real];
    for m in [2u64, 3, 4, 8, 9, 16, 27] {
        for mask in 0..1u32 << base.len() {
            let s: Vec<Place> = base.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| *v).collect();
            let sel = auxiliary_selection(m, &s).unwrap();
            assert!(sel.primes.iter().all(|q| !s.contains(&Place::Finite(*q))));
            assert!(sel.primes.len() as u64 <= sel.expected_count, "m = {m}, S = {s:?}: {:?}", sel.primes);
            // Survivors are recomputed by brute force from the local power tests.
            let odd_aux: Vec<u64> = sel.primes.iter().copied().filter(|&q| q != 2 || m % 2 == 1).collect();
            let mut brute = survivors_by_local_tests(m, &s, &odd_aux).unwrap();
            brute.sort();
            let mut allowed = vec![rational(1)];
            if sel.special_case {
                allowed.push(grunwald::wang::special_a0(m, &s).unwrap().unwrap());
            }
            allowed.sort();
            assert_eq!(brute, allowed, "m = {m}, S = {s:?}");
            // With every auxiliary prime, including 2, nothing but m-th powers survives
            // unless the special case occurs.
            let all = survivors_by_local_tests(m, &s, &sel.primes).unwrap();
            if !sel.special_case {
                assert_eq!(all, vec![rational(1)]);
            }
        }
    }
}

#[test]
fn constructed_characters_are_sound() {
    for (_, inst) in common::instance_matrix() {
        let sol = construct(&inst).unwrap();
        for want in &inst.places {
            assert!(sol.character.local_component(want.place).equivalent(want), "{inst:?}");
        }
        assert_eq!(sol.exponent_achieved % sol.character.order(), 0);
        if sol.exponent_achieved != inst.m {
            assert!(sol.special_case_flag);
            assert_ne!(special_obstruction(&inst).unwrap(), Some(0));
        }
    }
}

#[test]
fn cubic_construct_example() {
    let inst = GrunwaldInstance::over_q(3, vec![unr(7, 3, 1)]).unwrap();
    let sol = construct(&inst).unwrap();
    assert!(sol.conductor_norm() as u128 <= sol.cycle.norm());
    assert_eq!(sol.character.order(), 3);
    assert_eq!(oracle_minimal(&inst, 1000).unwrap().conductor_norm(), 9);
}

#[test]
fn reports_match_e1_display() {
    let sol = construct(&GrunwaldInstance::over_q(9, vec![unr(5, 9, 1)]).unwrap()).unwrap();
    let inst = GrunwaldInstance::over_q(9, vec![unr(5, 9, 1)]).unwrap();
    let rep = bound_report(&inst, &sol, 0.1);
    assert_eq!((rep.e, rep.d, rep.delta, rep.delta_prime, rep.e1), (1, 0, 1, 1, 7));
    assert_eq!(rep.selmer_rank, rep.e);
    assert_eq!(rep.analytic_conductor_s, sol.conductor_norm() as u128 * 5);
    assert!(rep.conductor_bound_holds);
}
