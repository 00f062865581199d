use num::{BigInt, One};
use serde::Serialize;

use crate::arith::local_power::{lth_power_test_local, prime_power_decompose};
use crate::arith::modular::{gcd, lcm};
use crate::arith::place::Place;
use crate::arith::primes::PrimeIter;
use crate::arith::rational::Rational;
use crate::arith::units::UnitComponent;
use crate::error::{Error, Result};
use crate::wang::{special_case, FieldDescriptor};

/// Largest prime examined when choosing auxiliary primes.
pub const AUX_PRIME_CAP: u64 = 1_000_000;
/// Largest quotient `P*(m,S)/Q^{×m}` enumerated explicitly.
pub const PSTAR_ENUMERATION_LIMIT: u64 = 1 << 22;

/// A coset representative `(-1)^sign · ∏ p_i^{exps_i}` of `P*(m,S)/Q^{×m}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PStarElement {
    pub sign: u8,
    pub exps: Vec<u64>,
}

/// The finite group `P*(m,S)/Q^{×m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PStarGroup {
    pub m: u64,
    pub primes: Vec<u64>,
    pub has_sign: bool,
}

impl PStarGroup {
    pub fn new(m: u64, places: &[Place]) -> Result<Self> {
        if prime_power_decompose(m).is_none() {
            return Err(Error::Domain(format!("{m} is not a prime power")));
        }
        let mut primes: Vec<u64> = places.iter().filter_map(|v| v.prime()).collect();
        primes.sort_unstable();
        primes.dedup();
        Ok(PStarGroup { m, primes, has_sign: m % 2 == 0 })
    }

    pub fn order(&self) -> Option<u64> {
        let mut n: u64 = if self.has_sign { 2 } else { 1 };
        for _ in &self.primes {
            n = n.checked_mul(self.m)?;
        }
        Some(n)
    }

    /// All coset representatives, sign-major then lexicographic exponents.
    pub fn elements(&self) -> Result<Vec<PStarElement>> {
        let n = self
            .order()
            .filter(|&n| n <= PSTAR_ENUMERATION_LIMIT)
            .ok_or_else(|| Error::Range("P*(m,S)/Q^{×m} is too large to enumerate".into()))?;
        let k = self.primes.len();
        let mut out = Vec::with_capacity(n as usize);
        for sign in 0..if self.has_sign { 2 } else { 1 } {
            let mut exps = vec![0u64; k];
            loop {
                out.push(PStarElement { sign, exps: exps.clone() });
                let mut i = k;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    exps[i] += 1;
                    if exps[i] < self.m {
                        break;
                    }
                    exps[i] = 0;
                }
                if exps.iter().all(|&e| e == 0) {
                    break;
                }
            }
        }
        Ok(out)
    }

    pub fn to_rational(&self, y: &PStarElement) -> Rational {
        let mut n = BigInt::one();
        for (&p, &e) in self.primes.iter().zip(&y.exps) {
            n *= num::pow(BigInt::from(p), e as usize);
        }
        if y.sign == 1 {
            n = -n;
        }
        Rational::from_integer(n)
    }

    pub fn identity(&self) -> PStarElement {
        PStarElement { sign: 0, exps: vec![0; self.primes.len()] }
    }
}

/// Generators of `P*(m,S)/Q^{×m}`: `-1` when `m` is even, then the finite primes of `S`.
pub fn p_star_basis(m: u64, places: &[Place]) -> Result<Vec<Rational>> {
    let g = PStarGroup::new(m, places)?;
    let mut out = Vec::new();
    if g.has_sign {
        out.push(-Rational::one());
    }
    out.extend(g.primes.iter().map(|&p| Rational::from_integer(BigInt::from(p))));
    Ok(out)
}

/// Result of the auxiliary-prime search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuxiliarySelection {
    pub primes: Vec<u64>,
    /// Elements of `P*(m,S)` (as coset representatives) that are local `m`-th
    /// powers at every odd auxiliary prime other than `l`.
    pub survivors: Vec<Rational>,
    pub special_case: bool,
    /// `e + δ`, the count of auxiliary places in the existence argument.
    pub expected_count: u64,
}

/// `e + δ` over `Q`.
pub fn expected_aux_count(m: u64, places: &[Place]) -> u64 {
    let (l, _) = prime_power_decompose(m).unwrap_or((m, 1));
    let s_fin = places.iter().filter(|v| !v.is_real()).count() as u64;
    let delta_prime = u64::from(l % 2 == 1);
    let delta = u64::from(m != 2);
    s_fin + 1 - delta_prime + delta
}

fn residue_test_row(q: u64, group: &PStarGroup) -> Option<(u64, u64, Vec<u64>)> {
    let g = gcd(group.m, q - 1);
    if g == 1 {
        return None;
    }
    let comp = UnitComponent::standalone(q, 1);
    let dl = |x: u64| comp.dlog(x % q).expect("unit mod q")[0] % g;
    let sign = dl(q - 1);
    let primes = group.primes.iter().map(|&p| dl(p)).collect();
    Some((g, sign, primes))
}

/// Largest order of an element of `survivors` modulo the target subgroup.
fn exponent_mod_target(survivors: &[PStarElement], target: &[PStarElement], m: u64) -> usize {
    let power = |y: &PStarElement, k: u64| PStarElement {
        sign: (u64::from(y.sign) * k % 2) as u8,
        exps: y.exps.iter().map(|&e| e * k % m).collect(),
    };
    survivors
        .iter()
        .map(|y| {
            let mut order = if y.sign == 1 { 2 } else { 1 };
            for &e in &y.exps {
                order = lcm(order, m / gcd(m, e));
            }
            // The target has order at most 2.
            if order % 2 == 0 && target.contains(&power(y, order / 2)) {
                order / 2
            } else {
                order
            }
        })
        .max()
        .unwrap_or(1) as usize
}

/// Greedy choice of auxiliary primes for `(m, S)` over `Q`.
pub fn auxiliary_selection(m: u64, places: &[Place]) -> Result<AuxiliarySelection> {
    let (l, r) = prime_power_decompose(m)
        .ok_or_else(|| Error::Domain(format!("{m} is not a prime power")))?;
    let group = PStarGroup::new(m, places)?;
    let report = special_case(FieldDescriptor::Rationals, m, places)?;
    let identity = group.identity();
    let mut target = vec![identity.clone()];
    if report.occurs {
        let mut a0 = identity.clone();
        let i = group.primes.iter().position(|&p| p == 2).expect("2 ∈ S in the special case");
        a0.exps[i] = m / 2;
        target.push(a0);
    }
    let mut survivors = group.elements()?;
    let mut primes = Vec::new();
    let in_s = |q: u64| places.contains(&Place::Finite(q));
    let done = |s: &[PStarElement]| s.iter().all(|y| target.contains(y));
    let mut iter = PrimeIter::new();
    while !done(&survivors) {
        let q = iter.next().expect("infinitely many primes");
        if q > AUX_PRIME_CAP {
            return Err(Error::SearchCap { cap: AUX_PRIME_CAP, what: "auxiliary primes".into() });
        }
        if q == l || in_s(q) {
            continue;
        }
        let Some((g, sign_log, prime_logs)) = residue_test_row(q, &group) else {
            continue;
        };
        let kept: Vec<PStarElement> = survivors
            .iter()
            .filter(|y| {
                let mut t = u64::from(y.sign) * sign_log;
                for (&e, &d) in y.exps.iter().zip(&prime_logs) {
                    t += (e % g) * d;
                }
                t % g == 0
            })
            .cloned()
            .collect();
        // Keep q only if its test maps the survivors onto their largest cyclic
        // quotient modulo the target; each such q lowers the rank by one.
        if kept.len() < survivors.len() && survivors.len() / kept.len() == exponent_mod_target(&survivors, &target, m)
        {
            survivors = kept;
            primes.push(q);
        }
    }
    if l == 2 && r >= 3 {
        if !in_s(2) {
            primes.push(2);
        } else if !primes.iter().any(|&q| q % 8 == 3 || q % 8 == 5) {
            let q = PrimeIter::new()
                .find(|&q| (q % 8 == 3 || q % 8 == 5) && !in_s(q))
                .expect("infinitely many primes");
            primes.push(q);
        }
        primes.sort_unstable();
    }
    Ok(AuxiliarySelection {
        primes,
        survivors: survivors.iter().map(|y| group.to_rational(y)).collect(),
        special_case: report.occurs,
        expected_count: expected_aux_count(m, places),
    })
}

/// Auxiliary primes `q_1 < ... < q_t` outside `S`.
pub fn auxiliary_primes(m: u64, places: &[Place]) -> Result<Vec<u64>> {
    Ok(auxiliary_selection(m, places)?.primes)
}

/// Brute-force survivor set: representatives of `P*(m,S)/Q^{×m}` that pass the
/// local `m`-th power test at each prime of `aux`.
pub fn survivors_by_local_tests(m: u64, places: &[Place], aux: &[u64]) -> Result<Vec<Rational>> {
    let group = PStarGroup::new(m, places)?;
    let mut out = Vec::new();
    for y in group.elements()? {
        let x = group.to_rational(&y);
        let mut ok = true;
        for &q in aux {
            if !lth_power_test_local(&x, Place::Finite(q), m)? {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(x);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rational;

    #[test]
    fn basis_examples() {
        let s = [Place::Finite(2), Place::Real];
        assert_eq!(p_star_basis(8, &s).unwrap(), vec![rational(-1), rational(2)]);
        assert_eq!(p_star_basis(3, &[Place::Finite(5)]).unwrap(), vec![rational(5)]);
        assert_eq!(p_star_basis(2, &[]).unwrap(), vec![rational(-1)]);
        assert_eq!(PStarGroup::new(8, &s).unwrap().elements().unwrap().len(), 16);
    }

    #[test]
    fn aux_examples() {
        assert_eq!(auxiliary_primes(2, &[]).unwrap(), vec![3]);
        assert_eq!(auxiliary_primes(3, &[Place::Finite(5)]).unwrap(), vec![7]);
        let s = [Place::Finite(2), Place::Real];
        let sel = auxiliary_selection(8, &s).unwrap();
        assert!(sel.special_case);
        let mut surv = sel.survivors.clone();
        surv.sort();
        assert_eq!(surv, vec![rational(1), rational(16)]);
        let odd: Vec<u64> = sel.primes.iter().copied().filter(|&q| q != 2).collect();
        let mut brute = survivors_by_local_tests(8, &s, &odd).unwrap();
        brute.sort();
        assert_eq!(brute, vec![rational(1), rational(16)]);
    }

    #[test]
    fn non_cyclic_case_appends_two() {
        let aux = auxiliary_primes(8, &[Place::Finite(3)]).unwrap();
        assert!(aux.contains(&2));
        let brute = survivors_by_local_tests(8, &[Place::Finite(3)], &aux).unwrap();
        assert_eq!(brute, vec![rational(1)]);
    }
}
