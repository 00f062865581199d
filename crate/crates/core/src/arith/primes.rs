//! Primality certification and prime enumeration.

use super::modular::{mul_mod, pow_mod};

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Witnesses beyond 2^64. The first thirteen primes are deterministic below
/// 3.3 * 10^24; the remaining ones extend coverage for the rest of the range.
const WIDE_WITNESSES: [u128; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

fn miller_rabin_u64(n: u64, a: u64) -> bool {
    let d0 = n - 1;
    let s = d0.trailing_zeros();
    let d = d0 >> s;
    let mut x = pow_mod(a % n, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    SMALL_PRIMES.iter().all(|&a| miller_rabin_u64(n, a))
}

/// `a * b mod m` for `m < 2^127`.
pub(crate) fn mul_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    if let (Ok(a64), Ok(b64)) = (u64::try_from(a), u64::try_from(b)) {
        return (a64 as u128 * b64 as u128) % m;
    }
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc += a;
            if acc >= m {
                acc -= m;
            }
        }
        a <<= 1;
        if a >= m {
            a -= m;
        }
        b >>= 1;
    }
    acc
}

pub(crate) fn pow_mod_u128(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u128(acc, base, m);
        }
        base = mul_mod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Primality test over the supported range (below 2^127).
pub fn is_prime(n: u128) -> bool {
    if let Ok(small) = u64::try_from(n) {
        return is_prime_u64(small);
    }
    for &p in &WIDE_WITNESSES {
        if n % p == 0 {
            return false;
        }
    }
    let d0 = n - 1;
    let s = d0.trailing_zeros();
    let d = d0 >> s;
    'witness: for &a in &WIDE_WITNESSES {
        let mut x = pow_mod_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes `<= n`, by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

const SEGMENT: u64 = 1 << 15;

/// Unbounded increasing iterator over the primes, sieving one segment at a time.
#[derive(Debug, Clone)]
pub struct PrimeIter {
    base_primes: Vec<u64>,
    base_limit: u64,
    segment_start: u64,
    buffer: Vec<u64>,
    pos: usize,
}

impl Default for PrimeIter {
    fn default() -> Self {
        Self::new()
    }
}

impl PrimeIter {
    pub fn new() -> Self {
        PrimeIter {
            base_primes: Vec::new(),
            base_limit: 1,
            segment_start: 2,
            buffer: Vec::new(),
            pos: 0,
        }
    }

    fn fill(&mut self) {
        let lo = self.segment_start;
        let hi = lo + SEGMENT;
        let need = (hi as f64).sqrt() as u64 + 1;
        if need > self.base_limit {
            let limit = need.max(self.base_limit * 2).max(1 << 10);
            self.base_primes = primes_up_to(limit);
            self.base_limit = limit;
        }
        let mut composite = vec![false; SEGMENT as usize];
        for &p in &self.base_primes {
            if p * p >= hi {
                break;
            }
            let mut start = (lo.div_ceil(p) * p).max(p * p);
            while start < hi {
                composite[(start - lo) as usize] = true;
                start += p;
            }
        }
        self.buffer.clear();
        self.buffer.extend(
            composite
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| lo + i as u64)
                .filter(|&x| x >= 2),
        );
        self.pos = 0;
        self.segment_start = hi;
    }
}

impl Iterator for PrimeIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.pos >= self.buffer.len() {
            self.fill();
        }
        let p = self.buffer[self.pos];
        self.pos += 1;
        Some(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iterator_matches_sieve() {
        let direct = primes_up_to(200_000);
        let iterated: Vec<u64> = PrimeIter::new().take_while(|&p| p <= 200_000).collect();
        assert_eq!(direct, iterated);
    }

    #[test]
    fn miller_rabin_agrees_with_sieve() {
        let primes = primes_up_to(10_000);
        for n in 0..10_000u64 {
            assert_eq!(is_prime_u64(n), primes.binary_search(&n).is_ok(), "n = {n}");
        }
    }

    #[test]
    fn wide_primes() {
        // 2^89 - 1 is a Mersenne prime, 2^67 - 1 = 193707721 * 761838257287 is not.
        assert!(is_prime((1u128 << 89) - 1));
        assert!(!is_prime((1u128 << 67) - 1));
        assert!(is_prime(18446744073709551629)); // least prime above 2^64
    }
}
