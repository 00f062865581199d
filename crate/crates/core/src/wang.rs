//! Wang's special case: detection over `Q` and quadratic fields, the group
//! `P(m, S)`, and witness primes for non-members.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, One};
use serde::{Deserialize, Serialize};

use crate::arith::local_power::{
    is_square_in_2adic_quadratic, is_square_in_quadratic_field, lth_power_test_local,
    prime_power_decompose, QuadraticElement,
};
use crate::arith::place::Place;
use crate::arith::primes::PrimeIter;
use crate::arith::rational::{is_rational_power, Rational};
use crate::error::{Error, Result};

/// Largest prime tried by [`witness_prime`].
pub const WITNESS_PRIME_CAP: u64 = 10_000_000;

/// `Q` or a quadratic field `Q(√d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FieldDescriptor {
    #[default]
    Rationals,
    Quadratic(i64),
}

impl FieldDescriptor {
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::Domain(format!("Q(√{d}) is not a quadratic field")));
        }
        let squarefree = crate::arith::factor::factor_u64(d.unsigned_abs())
            .iter()
            .all(|&(_, e)| e == 1);
        if !squarefree {
            return Err(Error::Domain(format!("{d} is not squarefree")));
        }
        Ok(FieldDescriptor::Quadratic(d))
    }

    pub fn degree(&self) -> u32 {
        match self {
            FieldDescriptor::Rationals => 1,
            FieldDescriptor::Quadratic(_) => 2,
        }
    }

    /// Absolute discriminant: `d` if `d ≡ 1 (mod 4)`, else `4d`.
    pub fn discriminant(&self) -> i64 {
        match *self {
            FieldDescriptor::Rationals => 1,
            FieldDescriptor::Quadratic(d) if d.rem_euclid(4) == 1 => d,
            FieldDescriptor::Quadratic(d) => 4 * d,
        }
    }

    fn d(&self) -> i64 {
        match *self {
            FieldDescriptor::Rationals => 1,
            FieldDescriptor::Quadratic(d) => d,
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::Quadratic(d) => write!(f, "Qsqrt:{d}"),
        }
    }
}

impl FromStr for FieldDescriptor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldDescriptor::Rationals);
        }
        let d = s
            .strip_prefix("Qsqrt:")
            .and_then(|d| d.parse::<i64>().ok())
            .ok_or_else(|| Error::Domain(format!("unknown field `{s}` (expected Q or Qsqrt:d)")))?;
        FieldDescriptor::quadratic(d)
    }
}

impl Serialize for FieldDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which condition of the special case fails first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    A,
    B,
    C,
    D,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Condition::A => "a",
            Condition::B => "b",
            Condition::C => "c",
            Condition::D => "d",
        };
        write!(f, "{c}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecialCaseReport {
    pub occurs: bool,
    pub s: u32,
    /// `η_{2^{s+1}}^m`, present iff the special case occurs.
    pub a0: Option<QuadraticElement>,
    /// Places above 2 where `-1` and `±(2 + η_{2^s})` are all nonsquares. In a
    /// quadratic field these are reported collectively as the place `2`.
    pub s0: Vec<Place>,
    pub failed_condition: Option<Condition>,
}

/// Largest `s` with `η_{2^s} = ζ_{2^s} + ζ_{2^s}^{-1}` in the field.
pub fn field_s_invariant(k: FieldDescriptor) -> u32 {
    match k {
        FieldDescriptor::Quadratic(2) => 3,
        _ => 2,
    }
}

/// `η_{2^s}` for `s ∈ {2, 3}` as an element of the field: `0` or `√2`.
fn eta(s: u32) -> QuadraticElement {
    let b = if s == 3 { Rational::one() } else { Rational::from_integer(BigInt::from(0)) };
    QuadraticElement::new(Rational::from_integer(BigInt::from(0)), b)
}

/// `-1`, `2 + η`, `-(2 + η)`.
fn test_elements(s: u32) -> [QuadraticElement; 3] {
    let mut two_eta = eta(s);
    two_eta.a += Rational::from_integer(BigInt::from(2));
    let neg_one = QuadraticElement::rational(-Rational::one());
    [neg_one, two_eta.clone(), two_eta.neg()]
}

/// `a₀ = η_{2^{s+1}}^m`. Since `η_{2^{s+1}}^2 = 2 + η_{2^s}`, this is `(2 + η_{2^s})^{m/2}`.
fn a0(s: u32, m: u64, d: i64) -> QuadraticElement {
    let [_, two_eta, _] = test_elements(s);
    two_eta.pow(m / 2, d)
}

/// Evaluates the four conditions of the special case for `(K, m, S)`.
pub fn special_case(k: FieldDescriptor, m: u64, places: &[Place]) -> Result<SpecialCaseReport> {
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    let s = field_s_invariant(k);
    let d = k.d();
    let elements = test_elements(s);
    let mut s0 = Vec::new();
    let all_local_nonsquares = elements
        .iter()
        .map(|x| is_square_in_2adic_quadratic(x, d).map(|sq| !sq))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    if all_local_nonsquares {
        s0.push(Place::Finite(2));
    }
    let mut report = SpecialCaseReport { occurs: false, s, a0: None, s0, failed_condition: None };
    let global_nonsquares = elements
        .iter()
        .map(|x| is_square_in_quadratic_field(x, d).map(|sq| !sq))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    let t = m.trailing_zeros();
    report.failed_condition = if !global_nonsquares {
        Some(Condition::B)
    } else if t <= s {
        Some(Condition::C)
    } else if !report.s0.iter().all(|v| places.contains(v)) {
        Some(Condition::D)
    } else {
        None
    };
    if report.failed_condition.is_none() {
        report.occurs = true;
        report.a0 = Some(a0(s, m, d));
    }
    Ok(report)
}

/// `a₀` over `Q` when the special case occurs for `(m, S)`.
pub fn special_a0(m: u64, places: &[Place]) -> Result<Option<Rational>> {
    let report = special_case(FieldDescriptor::Rationals, m, places)?;
    Ok(report.a0.map(|x| x.a))
}

/// Whether `x ∈ P(m, S)` over `Q`: an `m`-th power, or `a₀` times one in the special case.
pub fn membership_p_m_s(x: &Rational, m: u64, places: &[Place]) -> Result<bool> {
    if m != 1 && prime_power_decompose(m).is_none() {
        return Err(Error::Domain(format!("{m} is not a prime power")));
    }
    if is_rational_power(x, m) {
        return Ok(true);
    }
    Ok(match special_a0(m, places)? {
        Some(a0) => is_rational_power(&(x / a0), m),
        None => false,
    })
}

/// Least prime `p ∉ S` at which `x` is not a local `m`-th power.
pub fn witness_prime(x: &Rational, m: u64, places: &[Place]) -> Result<u64> {
    if membership_p_m_s(x, m, places)? {
        return Err(Error::NoWitness(format!("{x} lies in P({m}, S)")));
    }
    for p in PrimeIter::new() {
        if p > WITNESS_PRIME_CAP {
            break;
        }
        if places.contains(&Place::Finite(p)) {
            continue;
        }
        if !lth_power_test_local(x, Place::Finite(p), m)? {
            return Ok(p);
        }
    }
    Err(Error::SearchCap { cap: WITNESS_PRIME_CAP, what: format!("witness prime for {x}") })
}
