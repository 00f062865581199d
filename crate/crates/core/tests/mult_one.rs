use grunwald::arith::modular::{gcd, mul_mod};
use grunwald::arith::{is_prime_u64, unit_group, Place};
use grunwald::characters::make_dirichlet;
use grunwald::mult_one::{least_nonsplit_prime, scan_family, write_scan_csv, ScanRecord};

/// Value table of a character mod `q`, built by walking the group from its
/// generators (no discrete logarithms).
fn value_table(q: u64, exps: &[u64]) -> Vec<Option<u64>> {
    let g = unit_group(q).unwrap();
    let m = g.exponent();
    let mut table = vec![None; q as usize];
    table[(1 % q) as usize] = Some(0);
    let mut stack = vec![1 % q];
    while let Some(x) = stack.pop() {
        let vx = table[x as usize].unwrap();
        for (&h, &e) in g.generators.iter().zip(exps) {
            let y = mul_mod(x, h, q) as usize;
            if table[y].is_none() {
                table[y] = Some((vx + e) % m);
                stack.push(y as u64);
            }
        }
    }
    table
}

fn check_records(records: &[ScanRecord], s: &[Place]) {
    for r in records {
        let table = value_table(r.conductor, &r.char_exponents);
        let p = r.least_prime.expect("no capped records at this scale");
        let nontrivial = |p: u64| table[(p % r.conductor) as usize].is_some_and(|v| v != 0);
        assert!(is_prime_u64(p));
        assert!(gcd(p, r.conductor) == 1 && !s.contains(&Place::Finite(p)));
        assert!(nontrivial(p));
        for smaller in 2..p {
            if is_prime_u64(smaller) && gcd(smaller, r.conductor) == 1 && !s.contains(&Place::Finite(smaller)) {
                assert!(!nontrivial(smaller), "{r:?} beaten by {smaller}");
            }
        }
        assert!(r.ratio_a.unwrap() > 0.0 && r.ratio_b.unwrap() > 0.0 && r.ratio_c.unwrap() > 0.0);
    }
}

#[test]
fn scan_witnesses_validate_independently() {
    for s in [vec![], vec![Place::Finite(2)], vec![Place::Finite(3), Place::Finite(7), Place::Real]] {
        let records = scan_family(300, &s, 0.1, 1_000_000).unwrap();
        check_records(&records, &s);
    }
}

#[test]
fn scan_order_is_deterministic() {
    let a = scan_family(200, &[], 0.1, 1_000_000).unwrap();
    let b = scan_family(200, &[], 0.1, 1_000_000).unwrap();
    assert_eq!(a, b);
    assert!(a.windows(2).all(|w| (w[0].conductor, &w[0].char_exponents) < (w[1].conductor, &w[1].char_exponents)));
    let mut buf = Vec::new();
    write_scan_csv(&mut buf, &a[..3], &[]).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("conductor,modulus,char_exponents,S,least_prime,log_A,ratio_A,ratio_B,ratio_C\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn scan_counts_match_totient_sums() {
    // Σ_{d | q} #primitive(d) = φ(q).
    let records = scan_family(150, &[], 0.1, 1_000_000).unwrap();
    for q in 2..=150u64 {
        let primitive_below: usize = (2..=q).filter(|d| q % d == 0).map(|d| records.iter().filter(|r| r.conductor == d).count()).sum();
        assert_eq!(primitive_below as u64 + 1, unit_group(q).unwrap().order());
    }
}

#[test]
fn capped_records_are_flagged() {
    let records = scan_family(50, &[], 0.1, 2).unwrap();
    assert!(records.iter().any(|r| r.least_prime.is_none() && r.ratio_c.is_none()));
}

#[test]
fn least_prime_matches_scan() {
    let chi = make_dirichlet(7, &[3], 6).unwrap();
    assert_eq!(least_nonsplit_prime(&chi, &[Place::Finite(3)]).unwrap().prime, 5);
}
