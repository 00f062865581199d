use std::fmt;

use serde::{Deserialize, Serialize};

use super::primes::{is_prime, mul_mod_u128};
use crate::error::{Error, Result};

/// Largest input accepted by [`factor`].
pub const FACTOR_LIMIT: u128 = 1u128 << 96;

/// A positive integer together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactoredInteger {
    value: u128,
    factors: Vec<(u128, u32)>,
}

impl FactoredInteger {
    pub fn one() -> Self {
        FactoredInteger { value: 1, factors: Vec::new() }
    }

    /// Builds a factored integer from prime powers; primes may repeat and come
    /// in any order. Primality is checked.
    pub fn from_prime_powers<I: IntoIterator<Item = (u128, u32)>>(parts: I) -> Result<Self> {
        let mut factors: Vec<(u128, u32)> = Vec::new();
        for (p, e) in parts {
            if e == 0 {
                continue;
            }
            if !is_prime(p) {
                return Err(Error::Domain(format!("{p} is not prime")));
            }
            match factors.iter_mut().find(|(q, _)| *q == p) {
                Some(entry) => entry.1 += e,
                None => factors.push((p, e)),
            }
        }
        factors.sort_unstable();
        let mut value = 1u128;
        for &(p, e) in &factors {
            for _ in 0..e {
                value = value
                    .checked_mul(p)
                    .ok_or_else(|| Error::Range("factored value overflows u128".into()))?;
            }
        }
        Ok(FactoredInteger { value, factors })
    }

    pub fn value(&self) -> u128 {
        self.value
    }

    /// `(prime, exponent)` pairs, primes strictly increasing.
    pub fn factors(&self) -> &[(u128, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponent_of(&self, p: u128) -> u32 {
        self.factors.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> u128 {
        self.factors.iter().map(|&(p, _)| p).product()
    }

    /// Product of the two factored integers (exponents add).
    pub fn mul(&self, other: &FactoredInteger) -> Result<FactoredInteger> {
        FactoredInteger::from_prime_powers(
            self.factors.iter().chain(other.factors.iter()).copied(),
        )
    }

    pub fn recompose(&self) -> u128 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brent's variant of Pollard rho; returns a nontrivial divisor of composite `n`.
fn pollard_rho(n: u128) -> u128 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u128;
    loop {
        let f = |x: u128| (mul_mod_u128(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u128, 2u128, 1u128);
        let mut q = 1u128;
        let mut r = 1usize;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod_u128(q, x.abs_diff(y), n);
                }
                g = gcd_u128(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u128(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_into(n: u128, out: &mut Vec<u128>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Prime factorization by trial division followed by Pollard rho.
pub fn factor(n: u128) -> Result<FactoredInteger> {
    if n == 0 {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    if n > FACTOR_LIMIT {
        return Err(Error::Range(format!("{n} exceeds 2^96")));
    }
    let mut rest = n;
    let mut primes: Vec<u128> = Vec::new();
    let mut p = 2u128;
    while p < 1000 && p * p <= rest {
        while rest % p == 0 {
            primes.push(p);
            rest /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        split_into(rest, &mut primes);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u128, u32)> = Vec::new();
    for q in primes {
        match factors.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => factors.push((q, 1)),
        }
    }
    Ok(FactoredInteger { value: n, factors })
}

/// Factorization of a word-sized integer as `(prime, exponent)` pairs.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    factor(n as u128)
        .expect("u64 inputs are within range")
        .factors
        .iter()
        .map(|&(p, e)| (p as u64, e))
        .collect()
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    factor_u64(n)
        .into_iter()
        .map(|(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        assert_eq!(factor(16).unwrap().factors(), &[(2, 4)]);
        assert!(factor(1).unwrap().factors().is_empty());
        assert_eq!(factor(28).unwrap().factors(), &[(2, 2), (7, 1)]);
        assert_eq!(factor(28).unwrap().to_string(), "2^2*7");
    }

    #[test]
    fn large_semiprime() {
        let p = 4_294_967_311u128; // prime just above 2^32
        let q = 1_099_511_627_791u128; // prime just above 2^40
        let f = factor(p * q).unwrap();
        assert_eq!(f.factors(), &[(p, 1), (q, 1)]);
    }

    #[test]
    fn beyond_64_bits() {
        let n = (1u128 << 67) - 1;
        let f = factor(n).unwrap();
        assert_eq!(f.factors(), &[(193_707_721, 1), (761_838_257_287, 1)]);
    }

    #[test]
    fn range_and_zero() {
        assert!(matches!(factor(0), Err(Error::Domain(_))));
        assert!(matches!(factor(FACTOR_LIMIT + 1), Err(Error::Range(_))));
    }

    #[test]
    fn totient() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(8), 4);
        assert_eq!(euler_phi(36), 12);
    }
}
