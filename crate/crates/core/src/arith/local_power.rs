//! Power tests in completions: `m`-th powers in `Q_p` and `R`, squares in
//! quadratic extensions of `Q_2`, and exact power tests in `Q` and `Q(√d)`.

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::factor::factor_u64;
use super::place::Place;
use super::rational::{
    is_rational_power, is_rational_square, rational_sqrt, split_valuation, unit_residue,
    Rational,
};
use super::units::UnitComponent;
use crate::error::{Error, Result};

/// Writes `m = l^r` with `l` prime. Returns `None` for `m = 1` or a non prime power.
pub fn prime_power_decompose(m: u64) -> Option<(u64, u32)> {
    match factor_u64(m).as_slice() {
        [(l, r)] => Some((*l, *r)),
        _ => None,
    }
}

fn require_prime_power(m: u64) -> Result<(u64, u32)> {
    prime_power_decompose(m)
        .ok_or_else(|| Error::Domain(format!("{m} is not a prime power l^r with r >= 1")))
}

/// Exponent `k` such that a unit of `Z_p` is an `m`-th power iff it is one modulo `p^k`.
pub fn unit_precision(p: u64, l: u64, r: u32) -> u32 {
    if p != l {
        1
    } else if p == 2 {
        r + 3
    } else {
        2 * r + 1
    }
}

/// Whether the nonzero rational `x` is an `m`-th power in the completion `Q_v`.
pub fn lth_power_test_local(x: &Rational, v: Place, m: u64) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::Domain("x must be nonzero".into()));
    }
    if m == 1 {
        return Ok(true);
    }
    let (l, r) = require_prime_power(m)?;
    let p = match v {
        Place::Real => return Ok(x.is_positive() || m % 2 == 1),
        Place::Finite(p) => p,
    };
    let (a, u) = split_valuation(x, p);
    if a.rem_euclid(m as i64) != 0 {
        return Ok(false);
    }
    let k = unit_precision(p, l, r);
    let modulus = p
        .checked_pow(k)
        .ok_or_else(|| Error::Range(format!("{p}^{k} exceeds the supported word size")))?;
    let comp = UnitComponent::standalone(p, k);
    let residue = unit_residue(&u, modulus)?;
    let exps = comp
        .dlog(residue)
        .ok_or_else(|| Error::InternalContradiction(format!("no discrete log mod {modulus}")))?;
    Ok(exps
        .iter()
        .zip(&comp.orders)
        .all(|(&e, &o)| e % super::modular::gcd(m, o) == 0))
}

/// `a + b√d` with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticElement {
    pub a: Rational,
    pub b: Rational,
}

impl QuadraticElement {
    pub fn new(a: Rational, b: Rational) -> Self {
        QuadraticElement { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        QuadraticElement { a, b: Rational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn neg(&self) -> Self {
        QuadraticElement { a: -&self.a, b: -&self.b }
    }

    pub fn mul(&self, other: &Self, d: i64) -> Self {
        let d = Rational::from_integer(BigInt::from(d));
        QuadraticElement {
            a: &self.a * &other.a + d * &self.b * &other.b,
            b: &self.a * &other.b + &self.b * &other.a,
        }
    }

    pub fn pow(&self, mut e: u64, d: i64) -> Self {
        let mut base = self.clone();
        let mut acc = QuadraticElement::rational(Rational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, d);
            }
            base = base.mul(&base, d);
            e >>= 1;
        }
        acc
    }

    /// `a^2 - d b^2`.
    pub fn norm(&self, d: i64) -> Rational {
        let d = Rational::from_integer(BigInt::from(d));
        &self.a * &self.a - d * &self.b * &self.b
    }
}

/// A 2-adic number `2^val * unit` where only `unit mod 2^prec` is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Q2 {
    val: i64,
    unit: u128,
    prec: u32,
}

fn mask(prec: u32) -> u128 {
    if prec >= 128 {
        u128::MAX
    } else {
        (1u128 << prec) - 1
    }
}

fn big_mod_pow2(n: &BigInt, prec: u32) -> u128 {
    let modulus = BigInt::one() << prec;
    let r = ((n % &modulus) + &modulus) % &modulus;
    r.to_u128().expect("reduced below 2^128")
}

/// Inverse of an odd number modulo `2^128` (Newton iteration).
fn inv_odd(a: u128) -> u128 {
    let mut x = a;
    for _ in 0..7 {
        x = x.wrapping_mul(2u128.wrapping_sub(a.wrapping_mul(x)));
    }
    x
}

impl Q2 {
    fn from_rational(x: &Rational, prec: u32) -> Option<Q2> {
        if x.is_zero() {
            return None;
        }
        let (val, u) = split_valuation(x, 2);
        let n = big_mod_pow2(u.numer(), prec);
        let d = big_mod_pow2(u.denom(), prec);
        let unit = n.wrapping_mul(inv_odd(d)) & mask(prec);
        Some(Q2 { val, unit, prec })
    }

    /// Sum, or `None` if the result is indistinguishable from zero.
    fn add(self, other: Q2) -> Option<Q2> {
        let v = self.val.min(other.val);
        let abs = (self.val + self.prec as i64).min(other.val + other.prec as i64);
        let width = u32::try_from(abs - v).ok()?.min(128);
        let shifted = |q: Q2| -> u128 {
            let s = (q.val - v) as u32;
            if s >= width {
                0
            } else {
                q.unit << s
            }
        };
        let sum = shifted(self).wrapping_add(shifted(other)) & mask(width);
        if sum == 0 {
            return None;
        }
        let tz = sum.trailing_zeros();
        Some(Q2 { val: v + tz as i64, unit: sum >> tz, prec: width - tz })
    }

    fn neg(self) -> Q2 {
        Q2 { unit: self.unit.wrapping_neg() & mask(self.prec), ..self }
    }

    fn mul(self, other: Q2) -> Q2 {
        let prec = self.prec.min(other.prec);
        Q2 { val: self.val + other.val, unit: self.unit.wrapping_mul(other.unit) & mask(prec), prec }
    }

    fn inv(self) -> Q2 {
        Q2 { val: -self.val, unit: inv_odd(self.unit) & mask(self.prec), prec: self.prec }
    }

    fn half(self) -> Q2 {
        Q2 { val: self.val - 1, ..self }
    }

    /// `Some(is_square)` when the precision is sufficient to decide.
    fn is_square(self) -> Option<bool> {
        if self.val % 2 != 0 {
            return Some(false);
        }
        if self.prec < 3 {
            return None;
        }
        Some(self.unit & 7 == 1)
    }

    /// A square root, assuming `is_square()` holds.
    fn sqrt(self) -> Q2 {
        let u = self.unit;
        let mut s: u128 = 1;
        for i in 3..self.prec {
            let modulus = mask(i + 1);
            if s.wrapping_mul(s) & modulus != u & modulus {
                s = s.wrapping_add(1u128 << (i - 1));
            }
        }
        let prec = self.prec.saturating_sub(1).max(1);
        Q2 { val: self.val / 2, unit: s & mask(prec), prec }
    }
}

/// The 2-adic square root `δ ≡ 1 (mod 4)` of `d ≡ 1 (mod 8)`.
fn sqrt_d_in_q2(d: i64, prec: u32) -> Q2 {
    let q = Q2::from_rational(&Rational::from_integer(BigInt::from(d)), prec + 1)
        .expect("d is nonzero");
    let mut s = q.sqrt();
    if s.unit & 3 != 1 {
        s = s.neg();
    }
    s
}

fn check_squarefree(d: i64) -> Result<()> {
    if d == 0 {
        return Err(Error::Domain("d must be a nonzero squarefree integer".into()));
    }
    if d != 1 && d != -1 && factor_u64(d.unsigned_abs()).iter().any(|&(_, e)| e > 1) {
        return Err(Error::Domain(format!("{d} is not squarefree")));
    }
    Ok(())
}

/// Precision-bounded variant of [`is_square_in_2adic_quadratic`]: `Ok(None)` means
/// `prec` bits did not suffice.
pub fn is_square_in_2adic_quadratic_with_precision(
    x: &QuadraticElement,
    d: i64,
    prec: u32,
) -> Result<Option<bool>> {
    check_squarefree(d)?;
    if x.is_zero() {
        return Err(Error::Domain("x must be nonzero".into()));
    }
    let prec = prec.clamp(4, 128);
    if d.rem_euclid(8) == 1 {
        // The completion is Q_2 itself; embed √d as δ ≡ 1 mod 4.
        let Some(a) = Q2::from_rational(&x.a, prec) else {
            let b = Q2::from_rational(&x.b, prec).expect("x nonzero");
            return Ok(b.mul(sqrt_d_in_q2(d, prec)).is_square());
        };
        let Some(b) = Q2::from_rational(&x.b, prec) else {
            return Ok(a.is_square());
        };
        return Ok(a.add(b.mul(sqrt_d_in_q2(d, prec))).and_then(Q2::is_square));
    }
    let dq = Rational::from_integer(BigInt::from(d));
    if x.b.is_zero() {
        let a = Q2::from_rational(&x.a, prec).expect("x nonzero");
        let a_over_d = Q2::from_rational(&(&x.a / &dq), prec).expect("x nonzero");
        return Ok(match (a.is_square(), a_over_d.is_square()) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        });
    }
    // x = y^2 with y = c + e√d forces N(x) = n^2 and c^2 ∈ {(a+n)/2, (a-n)/2}.
    let norm = x.norm(d);
    let Some(nq) = Q2::from_rational(&norm, prec + 2) else {
        return Ok(Some(false));
    };
    if !nq.is_square().expect("exact rational at full precision") {
        return Ok(Some(false));
    }
    let n = nq.sqrt();
    // t1 * t2 = d b^2 / 4; at most one of the two sums can cancel heavily.
    let product = Q2::from_rational(&(dq * &x.b * &x.b / Rational::from_integer(BigInt::from(4))), prec)
        .expect("b nonzero");
    let sums = match Q2::from_rational(&x.a, prec) {
        Some(a) => (a.add(n), a.add(n.neg())),
        None => (Some(n), Some(n.neg())),
    };
    let (t1, t2) = match sums {
        (Some(s1), Some(s2)) => {
            let (t1, t2) = (s1.half(), s2.half());
            if t1.prec >= t2.prec {
                (t1, product.mul(t1.inv()))
            } else {
                (product.mul(t2.inv()), t2)
            }
        }
        (None, Some(s2)) => {
            let t2 = s2.half();
            (product.mul(t2.inv()), t2)
        }
        (Some(s1), None) => {
            let t1 = s1.half();
            (t1, product.mul(t1.inv()))
        }
        (None, None) => return Ok(None),
    };
    Ok(match (t1.is_square(), t2.is_square()) {
        (Some(true), _) | (_, Some(true)) => Some(true),
        (Some(false), Some(false)) => Some(false),
        _ => None,
    })
}

const PRECISION_LADDER: [u32; 8] = [12, 16, 24, 32, 48, 64, 96, 128];

/// Whether `x = a + b√d` is a square in the completion of `Q(√d)` at the place
/// above 2. For `d ≡ 1 (mod 8)` (including `d = 1`) this is `Q_2`, with `√d`
/// embedded as the root congruent to 1 modulo 4.
pub fn is_square_in_2adic_quadratic(x: &QuadraticElement, d: i64) -> Result<bool> {
    for prec in PRECISION_LADDER {
        if let Some(answer) = is_square_in_2adic_quadratic_with_precision(x, d, prec)? {
            return Ok(answer);
        }
    }
    Err(Error::Range("2-adic precision exhausted".into()))
}

/// Whether `x = a + b√d` is a square in `Q(√d)` (in `Q` when `d = 1`).
pub fn is_square_in_quadratic_field(x: &QuadraticElement, d: i64) -> Result<bool> {
    check_squarefree(d)?;
    if x.is_zero() {
        return Err(Error::Domain("x must be nonzero".into()));
    }
    if d == 1 {
        return Ok(is_rational_square(&(&x.a + &x.b)));
    }
    let dq = Rational::from_integer(BigInt::from(d));
    if x.b.is_zero() {
        return Ok(is_rational_square(&x.a) || is_rational_square(&(&x.a / dq)));
    }
    let Some(n) = rational_sqrt(&x.norm(d)) else {
        return Ok(false);
    };
    let two = Rational::from_integer(BigInt::from(2));
    let t1 = (&x.a + &n) / &two;
    let t2 = (&x.a - &n) / &two;
    Ok(is_rational_square(&t1) || is_rational_square(&t2))
}

/// Whether `x` is an `m`-th power in `Q`.
pub fn is_rational_mth_power(x: &Rational, m: u64) -> bool {
    is_rational_power(x, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::modular::pow_mod;
    use crate::arith::rational::{ratio, rational};

    fn q(n: i64) -> QuadraticElement {
        QuadraticElement::rational(rational(n))
    }

    fn brute_power(x: u64, p: u64, k: u32, m: u64) -> bool {
        let pk = p.pow(k);
        (1..pk).filter(|y| y % p != 0).any(|y| pow_mod(y, m, pk) == x % pk)
    }

    #[test]
    fn local_power_examples() {
        assert!(lth_power_test_local(&rational(16), Place::Finite(7), 8).unwrap());
        assert!(brute_power(16, 7, 4, 8));
        assert!(!lth_power_test_local(&rational(16), Place::Finite(2), 8).unwrap());
        assert!(!lth_power_test_local(&rational(2), Place::Finite(3), 8).unwrap());
        assert!(lth_power_test_local(&rational(-8), Place::Real, 3).unwrap());
        assert!(!lth_power_test_local(&rational(-4), Place::Real, 2).unwrap());
        assert!(matches!(lth_power_test_local(&rational(2), Place::Finite(3), 6), Err(Error::Domain(_))));
        assert!(lth_power_test_local(&ratio(1, 81), Place::Finite(3), 4).unwrap());
    }

    #[test]
    fn sixteen_is_not_an_eighth_power_mod_4096() {
        // 16 = 2^4 has valuation 4, not divisible by 8; also no y with y^8 = 16 mod 2^12.
        assert!((0..4096u64).all(|y| pow_mod(y, 8, 4096) != 16));
    }

    #[test]
    fn two_adic_quadratic_examples() {
        assert!(is_square_in_2adic_quadratic(&q(-1), 7).unwrap());
        assert!(!is_square_in_2adic_quadratic(&q(-1), 1).unwrap());
        for d in [1, 2, 3, 5, 7, -1, -2, -3, -5, -7, 17, -15] {
            assert!(is_square_in_2adic_quadratic(&q(1), d).unwrap());
        }
        // √2 is a square root of 2; 2 + √2 is a nonsquare in Q_2(√2).
        assert!(is_square_in_2adic_quadratic(&q(2), 2).unwrap());
        let two_plus = QuadraticElement::new(rational(2), rational(1));
        assert!(!is_square_in_2adic_quadratic(&two_plus, 2).unwrap());
        assert!(is_square_in_2adic_quadratic(&two_plus.mul(&two_plus, 2), 2).unwrap());
        assert!(is_square_in_2adic_quadratic(&q(-7), 1).unwrap());
        assert!(matches!(is_square_in_2adic_quadratic(&q(0), 7), Err(Error::Domain(_))));
        assert!(matches!(is_square_in_2adic_quadratic(&q(1), 12), Err(Error::Domain(_))));
    }

    #[test]
    fn two_adic_squares_of_random_elements() {
        // y^2 is always a square; y^2 times a local nonsquare unit never is.
        for d in [2i64, 3, 5, 6, 7, -1, -2, -3, -5, -6, -7, 17, 33] {
            for a in -6i64..=6 {
                for b in -6i64..=6 {
                    let y = QuadraticElement::new(ratio(a, 3), ratio(b, 5));
                    if y.is_zero() {
                        continue;
                    }
                    let sq = y.mul(&y, d);
                    assert!(is_square_in_2adic_quadratic(&sq, d).unwrap(), "{d} {a} {b}");
                    for prec in [12, 16] {
                        let r = is_square_in_2adic_quadratic_with_precision(&sq, d, prec).unwrap();
                        assert!(r.unwrap_or(true));
                    }
                }
            }
        }
    }

    #[test]
    fn global_quadratic_squares() {
        let two_plus = QuadraticElement::new(rational(2), rational(1));
        assert!(!is_square_in_quadratic_field(&two_plus, 2).unwrap());
        assert!(is_square_in_quadratic_field(&two_plus.mul(&two_plus, 2), 2).unwrap());
        assert!(is_square_in_quadratic_field(&q(7), 7).unwrap());
        assert!(is_square_in_quadratic_field(&q(28), 7).unwrap());
        assert!(!is_square_in_quadratic_field(&q(-1), 7).unwrap());
        assert!(!is_square_in_quadratic_field(&q(2), 7).unwrap());
    }

    #[test]
    fn prime_power_parts() {
        assert_eq!(prime_power_decompose(8), Some((2, 3)));
        assert_eq!(prime_power_decompose(9), Some((3, 2)));
        assert_eq!(prime_power_decompose(12), None);
        assert_eq!(prime_power_decompose(1), None);
    }
}
