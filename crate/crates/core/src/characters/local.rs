use num::{Signed, Zero};
use serde::Serialize;

use crate::arith::modular::{gcd, lcm, mul_mod};
use crate::arith::place::Place;
use crate::arith::rational::{split_valuation, unit_residue, Rational};
use crate::arith::units::UnitComponent;
use crate::error::{Error, Result};

/// A finite-order character of `Q_p^×` or `R^×` with values in `μ_m`, stored as
/// `ζ_m`-exponents on canonical generators.
///
/// At a finite place the units part lives on `(Z/p^k)^×` with `k` the conductor
/// exponent, and `uniformizer_exponent` is the value on `p`. At the real place the
/// character is trivial or the sign character, whose value at a negative number
/// is `ζ_m^{m/2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LocalCharacter {
    pub place: Place,
    pub exponent_modulus: u64,
    pub conductor_exponent: u32,
    pub unit_exponents: Vec<u64>,
    pub uniformizer_exponent: u64,
    pub sign_exponent: u8,
}

fn malformed(msg: String) -> Error {
    Error::MalformedCharacter(msg)
}

impl LocalCharacter {
    /// Validating constructor. Exponents are reduced modulo `m`.
    pub fn new(
        place: Place,
        m: u64,
        conductor_exponent: u32,
        unit_exponents: Vec<u64>,
        uniformizer_exponent: u64,
        sign_exponent: u8,
    ) -> Result<Self> {
        if m == 0 {
            return Err(malformed("exponent modulus must be positive".into()));
        }
        match place {
            Place::Real => {
                if !unit_exponents.is_empty() || uniformizer_exponent % m != 0 {
                    return Err(malformed(
                        "real place takes only a sign exponent".into(),
                    ));
                }
                if sign_exponent > 1 {
                    return Err(malformed(format!("sign exponent {sign_exponent} is not 0 or 1")));
                }
                if u32::from(sign_exponent) != conductor_exponent {
                    return Err(malformed(format!(
                        "real conductor exponent {conductor_exponent} does not match sign exponent {sign_exponent}"
                    )));
                }
                if sign_exponent == 1 && m % 2 == 1 {
                    return Err(malformed(format!("sign character has no values in μ_{m}")));
                }
                Ok(LocalCharacter {
                    place,
                    exponent_modulus: m,
                    conductor_exponent,
                    unit_exponents,
                    uniformizer_exponent: 0,
                    sign_exponent,
                })
            }
            Place::Finite(p) => {
                if sign_exponent != 0 {
                    return Err(malformed(format!("sign exponent given at finite place {p}")));
                }
                let comp = component(p, conductor_exponent)?;
                if unit_exponents.len() != comp.rank() {
                    return Err(malformed(format!(
                        "expected {} unit exponents for units mod {}^{}, got {}",
                        comp.rank(),
                        p,
                        conductor_exponent,
                        unit_exponents.len()
                    )));
                }
                let unit_exponents: Vec<u64> = unit_exponents.iter().map(|e| e % m).collect();
                for (&e, &o) in unit_exponents.iter().zip(&comp.orders) {
                    if mul_mod(e, o % m, m) != 0 {
                        return Err(malformed(format!(
                            "unit exponent {e} on a generator of order {o} is not of exponent {m}"
                        )));
                    }
                }
                let minimal = comp.conductor_exponent(&unit_exponents, m);
                if minimal != conductor_exponent {
                    return Err(malformed(format!(
                        "conductor exponent {conductor_exponent} at {p} is not minimal (actual {minimal})"
                    )));
                }
                Ok(LocalCharacter {
                    place,
                    exponent_modulus: m,
                    conductor_exponent,
                    unit_exponents,
                    uniformizer_exponent: uniformizer_exponent % m,
                    sign_exponent: 0,
                })
            }
        }
    }

    pub fn trivial(place: Place, m: u64) -> Self {
        LocalCharacter {
            place,
            exponent_modulus: m,
            conductor_exponent: 0,
            unit_exponents: vec![],
            uniformizer_exponent: 0,
            sign_exponent: 0,
        }
    }

    /// Unramified character at `p` sending `p` to `ζ_m^{value}`.
    pub fn unramified(p: u64, m: u64, value: u64) -> Result<Self> {
        LocalCharacter::new(Place::finite(p)?, m, 0, vec![], value, 0)
    }

    /// The sign character of `R^×`.
    pub fn sign(m: u64) -> Result<Self> {
        LocalCharacter::new(Place::Real, m, 1, vec![], 0, 1)
    }

    /// Builds the character of `Q_p^×` whose units part is given on the generators
    /// of `(Z/p^big_k)^×` (not necessarily primitive), reducing to the conductor.
    pub fn from_unit_data(
        p: u64,
        m: u64,
        big_k: u32,
        exps: &[u64],
        uniformizer_exponent: u64,
    ) -> Result<Self> {
        let big = component(p, big_k)?;
        if exps.len() != big.rank() {
            return Err(malformed(format!("expected {} unit exponents", big.rank())));
        }
        let exps: Vec<u64> = exps.iter().map(|e| e % m).collect();
        let k = big.conductor_exponent(&exps, m);
        let small = component(p, k)?;
        let unit_exponents = small
            .local_generators
            .iter()
            .map(|&h| component_value(&big, &exps, m, h))
            .collect::<Result<Vec<_>>>()?;
        LocalCharacter::new(Place::Finite(p), m, k, unit_exponents, uniformizer_exponent, 0)
    }

    pub fn is_trivial(&self) -> bool {
        self.sign_exponent == 0
            && self.uniformizer_exponent == 0
            && self.unit_exponents.iter().all(|&e| e == 0)
    }

    pub fn is_ramified(&self) -> bool {
        self.conductor_exponent > 0
    }

    /// `N(χ_v)`: `p^k` at a finite place, `1` at the real place.
    pub fn conductor_norm(&self) -> u128 {
        match self.place {
            Place::Finite(p) => (p as u128).pow(self.conductor_exponent),
            Place::Real => 1,
        }
    }

    /// Order of the character.
    pub fn order(&self) -> u64 {
        let m = self.exponent_modulus;
        let mut o = m / gcd(m, self.uniformizer_exponent);
        for &e in &self.unit_exponents {
            o = lcm(o, m / gcd(m, e));
        }
        if self.sign_exponent == 1 {
            o = lcm(o, 2);
        }
        o
    }

    /// The same character viewed with values in `μ_{new_m}`, `m | new_m`.
    pub fn rescale(&self, new_m: u64) -> Result<Self> {
        let m = self.exponent_modulus;
        if new_m % m != 0 {
            return Err(Error::Domain(format!("cannot rescale exponent {m} to {new_m}")));
        }
        let f = new_m / m;
        Ok(LocalCharacter {
            exponent_modulus: new_m,
            unit_exponents: self.unit_exponents.iter().map(|e| e * f).collect(),
            uniformizer_exponent: self.uniformizer_exponent * f,
            ..self.clone()
        })
    }

    /// Whether two characters agree as homomorphisms (exponent moduli may differ).
    pub fn equivalent(&self, other: &Self) -> bool {
        if self.place != other.place {
            return false;
        }
        let big = lcm(self.exponent_modulus, other.exponent_modulus);
        match (self.rescale(big), other.rescale(big)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    /// Value on a unit residue modulo `p^k`.
    pub fn evaluate_unit(&self, u: u64) -> Result<u64> {
        let Place::Finite(p) = self.place else {
            return Err(Error::Domain("unit evaluation needs a finite place".into()));
        };
        let comp = component(p, self.conductor_exponent)?;
        component_value(&comp, &self.unit_exponents, self.exponent_modulus, u)
    }

    /// `ζ_m`-exponent of `χ_v(x)`.
    pub fn evaluate(&self, x: &Rational) -> Result<u64> {
        evaluate_local(self, x)
    }
}

fn component(p: u64, k: u32) -> Result<UnitComponent> {
    if p.checked_pow(k).is_none() {
        return Err(Error::Range(format!("{p}^{k} exceeds the supported word size")));
    }
    Ok(UnitComponent::standalone(p, k))
}

/// `Σ exps_i · dlog_i(u)` for the character of `comp` with the given exponents.
pub(crate) fn component_value(comp: &UnitComponent, exps: &[u64], m: u64, u: u64) -> Result<u64> {
    let logs = comp.dlog(u).ok_or_else(|| Error::NonUnit {
        value: u.to_string(),
        modulus: comp.prime_power,
    })?;
    Ok(logs
        .iter()
        .zip(exps)
        .fold(0, |acc, (&l, &e)| (acc + mul_mod(l % m, e, m)) % m))
}

/// `ζ_m`-exponent of `χ_v(x)` for nonzero rational `x`.
pub fn evaluate_local(chi: &LocalCharacter, x: &Rational) -> Result<u64> {
    if x.is_zero() {
        return Err(Error::Domain("cannot evaluate a local character at 0".into()));
    }
    let m = chi.exponent_modulus;
    match chi.place {
        Place::Real => Ok(if chi.sign_exponent == 1 && x.is_negative() { m / 2 } else { 0 }),
        Place::Finite(p) => {
            let (a, u) = split_valuation(x, p);
            let a = a.rem_euclid(m as i64) as u64;
            let mut value = mul_mod(a, chi.uniformizer_exponent, m);
            if chi.conductor_exponent > 0 {
                let modulus = p.pow(chi.conductor_exponent);
                let r = unit_residue(&u, modulus)
                    .map_err(|e| Error::InternalContradiction(e.to_string()))?;
                value = (value + chi.evaluate_unit(r)?) % m;
            }
            Ok(value)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rational;

    #[test]
    fn validation() {
        // mod 5, generator 2 of order 4: exponent 2 is the Legendre symbol.
        assert!(LocalCharacter::new(Place::Finite(5), 4, 1, vec![2], 0, 0).is_ok());
        assert!(LocalCharacter::new(Place::Finite(5), 4, 1, vec![0], 0, 0).is_err());
        assert!(LocalCharacter::new(Place::Finite(5), 4, 2, vec![2], 0, 0).is_err());
        assert!(LocalCharacter::new(Place::Finite(7), 4, 1, vec![1], 0, 0).is_err());
        assert!(LocalCharacter::new(Place::Finite(2), 8, 1, vec![], 0, 0).is_err());
        assert!(LocalCharacter::new(Place::Finite(2), 8, 5, vec![0, 1], 3, 0).is_ok());
        assert!(LocalCharacter::new(Place::Finite(2), 8, 5, vec![0, 2], 3, 0).is_err());
        assert!(LocalCharacter::new(Place::Real, 3, 1, vec![], 0, 1).is_err());
    }

    #[test]
    fn evaluation() {
        let unr = LocalCharacter::unramified(2, 2, 1).unwrap();
        assert_eq!(evaluate_local(&unr, &rational(4)).unwrap(), 0);
        assert_eq!(evaluate_local(&unr, &rational(6)).unwrap(), 1);
        let sign = LocalCharacter::sign(2).unwrap();
        assert_eq!(evaluate_local(&sign, &rational(-3)).unwrap(), 1);
        assert_eq!(evaluate_local(&sign, &rational(3)).unwrap(), 0);
        let wild = LocalCharacter::new(Place::Finite(2), 8, 5, vec![0, 1], 3, 0).unwrap();
        assert_eq!(evaluate_local(&wild, &rational(16)).unwrap(), 4 * 3 % 8);
        assert_eq!(evaluate_local(&wild, &rational(5)).unwrap(), 1);
    }

    #[test]
    fn reduction_to_conductor() {
        // The character mod 8 with exponents (1, 0) is the one mod 4.
        let c = LocalCharacter::from_unit_data(2, 2, 3, &[1, 0], 0).unwrap();
        assert_eq!(c.conductor_exponent, 2);
        assert_eq!(c.unit_exponents, vec![1]);
        // Cubic character mod 7^2 trivial on 1 + 7Z.
        let c = LocalCharacter::from_unit_data(7, 3, 2, &[7], 1).unwrap();
        assert_eq!(c.conductor_exponent, 1);
        assert_eq!(c.unit_exponents, vec![1]);
    }

    #[test]
    fn rescale_keeps_values() {
        let c = LocalCharacter::new(Place::Finite(2), 8, 5, vec![4, 1], 3, 0).unwrap();
        let d = c.rescale(16).unwrap();
        for x in [-5i64, 3, 16, 7, 48] {
            let vx = evaluate_local(&c, &rational(x)).unwrap();
            assert_eq!(evaluate_local(&d, &rational(x)).unwrap(), 2 * vx);
        }
        assert!(c.equivalent(&d));
        assert_eq!(c.order(), 8);
    }
}
