//! Exact rational helpers built on `num`.

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use super::modular::{inv_mod, mul_mod};
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `a`, `-a` or `a/b`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Domain(format!("`{s}` is not a rational number"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn int_valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return (v, n);
        }
        n = q;
        v += 1;
    }
}

/// Writes nonzero `x = p^a * u` with `u` a `p`-adic unit; returns `(a, u)`.
pub fn split_valuation(x: &Rational, p: u64) -> (i64, Rational) {
    debug_assert!(!x.is_zero());
    let (vn, n) = int_valuation(x.numer(), p);
    let (vd, d) = int_valuation(x.denom(), p);
    (vn as i64 - vd as i64, Rational::new(n, d))
}

pub fn valuation(x: &Rational, p: u64) -> i64 {
    split_valuation(x, p).0
}

fn bigint_mod(n: &BigInt, modulus: u64) -> u64 {
    n.mod_floor(&BigInt::from(modulus)).to_u64().expect("residue fits u64")
}

/// Residue of a `p`-adic unit modulo `modulus` (a power of `p`).
pub fn unit_residue(u: &Rational, modulus: u64) -> Result<u64> {
    let n = bigint_mod(u.numer(), modulus);
    let d = bigint_mod(u.denom(), modulus);
    let inv = inv_mod(d, modulus)
        .ok_or_else(|| Error::NonUnit { value: u.to_string(), modulus })?;
    Ok(mul_mod(n, inv, modulus))
}

/// Residue of the integer `n` modulo `modulus`.
pub fn integer_residue(n: &BigInt, modulus: u64) -> u64 {
    bigint_mod(n, modulus)
}

fn is_perfect_power_int(n: &BigInt, k: u32) -> bool {
    if n.is_negative() {
        return false;
    }
    let root = n.nth_root(k);
    num::pow(root, k as usize) == *n
}

/// Whether `x` is a `k`-th power in `Q`.
pub fn is_rational_power(x: &Rational, k: u64) -> bool {
    if x.is_zero() {
        return true;
    }
    if k == 1 {
        return true;
    }
    let k32 = match u32::try_from(k) {
        Ok(v) => v,
        // x = y^k with k this large forces y = ±1.
        Err(_) => return x.abs().is_one() && (x.is_positive() || k % 2 == 1),
    };
    let ax = x.abs();
    if x.is_negative() && k % 2 == 0 {
        return false;
    }
    is_perfect_power_int(ax.numer(), k32) && is_perfect_power_int(ax.denom(), k32)
}

pub fn is_rational_square(x: &Rational) -> bool {
    !x.is_zero() && is_rational_power(x, 2)
}

/// Square root of a rational square (nonnegative root).
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    let r = Rational::new(n, d);
    (&r * &r == *x).then_some(r)
}

pub fn sign(x: &Rational) -> Sign {
    x.numer().sign()
}
