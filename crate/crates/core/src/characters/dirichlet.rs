use std::collections::BTreeSet;

use num::{BigUint, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::cycle::CycleValue;
use super::local::{component_value, evaluate_local, LocalCharacter};
use crate::arith::factor::{factor, FactoredInteger};
use crate::arith::modular::{crt_pair, gcd, lcm, mul_mod};
use crate::arith::place::Place;
use crate::arith::rational::Rational;
use crate::arith::units::{unit_group, UnitComponent, UnitGroupStructure};
use crate::error::{Error, Result};

/// A Dirichlet character modulo `N` with values in `μ_m`, given by `ζ_m`-exponents
/// on the canonical generators of `(Z/NZ)^×`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CharacterRecord", into = "CharacterRecord")]
pub struct DirichletCharacter {
    group: UnitGroupStructure,
    exponent_modulus: u64,
    exponents: Vec<u64>,
}

/// Serialized form `{modulus, exponent_modulus, exponents}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterRecord {
    pub modulus: u64,
    pub exponent_modulus: u64,
    pub exponents: Vec<u64>,
}

impl TryFrom<CharacterRecord> for DirichletCharacter {
    type Error = Error;
    fn try_from(r: CharacterRecord) -> Result<Self> {
        make_dirichlet(r.modulus, &r.exponents, r.exponent_modulus)
    }
}

impl From<DirichletCharacter> for CharacterRecord {
    fn from(c: DirichletCharacter) -> Self {
        CharacterRecord {
            modulus: c.group.modulus,
            exponent_modulus: c.exponent_modulus,
            exponents: c.exponents,
        }
    }
}

/// Validates and normalizes a character mod `n` (exponents reduced mod `m`).
pub fn make_dirichlet(n: u64, exponents: &[u64], m: u64) -> Result<DirichletCharacter> {
    if m == 0 {
        return Err(Error::MalformedCharacter("exponent modulus must be positive".into()));
    }
    let group = unit_group(n)?;
    DirichletCharacter::with_group(group, exponents, m)
}

impl DirichletCharacter {
    pub fn with_group(group: UnitGroupStructure, exponents: &[u64], m: u64) -> Result<Self> {
        if exponents.len() != group.rank() {
            return Err(Error::MalformedCharacter(format!(
                "modulus {} has {} generators but {} exponents were given",
                group.modulus,
                group.rank(),
                exponents.len()
            )));
        }
        let exponents: Vec<u64> = exponents.iter().map(|e| e % m).collect();
        for (&e, &o) in exponents.iter().zip(&group.orders) {
            if mul_mod(e, o % m, m) != 0 {
                return Err(Error::MalformedCharacter(format!(
                    "exponent {e} on a generator of order {o} does not define a character of exponent {m}"
                )));
            }
        }
        Ok(DirichletCharacter { group, exponent_modulus: m, exponents })
    }

    pub fn trivial(n: u64, m: u64) -> Result<Self> {
        let group = unit_group(n)?;
        let zeros = vec![0; group.rank()];
        DirichletCharacter::with_group(group, &zeros, m)
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn exponent_modulus(&self) -> u64 {
        self.exponent_modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn group(&self) -> &UnitGroupStructure {
        &self.group
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// `ζ_m`-exponent of `χ(n)`, or `None` (the zero value) when `gcd(n, N) > 1`.
    pub fn evaluate(&self, n: i128) -> Option<u64> {
        let logs = self.group.dlog(n).ok()?;
        Some(self.pair(&logs))
    }

    /// `Σ e_i l_i mod m`.
    pub fn pair(&self, logs: &[u64]) -> u64 {
        let m = self.exponent_modulus;
        logs.iter()
            .zip(&self.exponents)
            .fold(0, |acc, (&l, &e)| (acc + mul_mod(l % m, e, m)) % m)
    }

    /// Order of `χ` as a group element.
    pub fn order(&self) -> u64 {
        let m = self.exponent_modulus;
        self.exponents.iter().fold(1, |acc, &e| lcm(acc, m / gcd(m, e)))
    }

    pub fn pow(&self, k: u64) -> DirichletCharacter {
        let m = self.exponent_modulus;
        DirichletCharacter {
            group: self.group.clone(),
            exponent_modulus: m,
            exponents: self.exponents.iter().map(|&e| mul_mod(e, k % m, m)).collect(),
        }
    }

    /// The same character with values in `μ_{new_m}`, `m | new_m`.
    pub fn rescale(&self, new_m: u64) -> Result<DirichletCharacter> {
        let m = self.exponent_modulus;
        if new_m % m != 0 {
            return Err(Error::Domain(format!("cannot rescale exponent {m} to {new_m}")));
        }
        let f = new_m / m;
        Ok(DirichletCharacter {
            group: self.group.clone(),
            exponent_modulus: new_m,
            exponents: self.exponents.iter().map(|e| e * f).collect(),
        })
    }

    fn component_exponents(&self, comp: &UnitComponent) -> &[u64] {
        &self.exponents[comp.offset..comp.offset + comp.rank()]
    }

    /// `ζ_m`-exponent of `χ_(p)(u)`, the `p`-primary CRT factor at a unit `u`.
    fn primary_value(&self, comp: &UnitComponent, u: u64) -> Result<u64> {
        component_value(comp, self.component_exponents(comp), self.exponent_modulus, u)
    }

    fn conductor_exponents(&self) -> Vec<(u64, u32)> {
        self.group
            .components
            .iter()
            .map(|c| (c.prime, c.conductor_exponent(self.component_exponents(c), self.exponent_modulus)))
            .filter(|&(_, k)| k > 0)
            .collect()
    }

    /// `χ(-1) = -1`.
    pub fn is_odd(&self) -> bool {
        let m = self.exponent_modulus;
        m % 2 == 0 && self.evaluate(-1) == Some(m / 2)
    }

    /// The conductor cycle of the primitive character inducing `χ`.
    pub fn conductor(&self) -> CycleValue {
        let finite = FactoredInteger::from_prime_powers(
            self.conductor_exponents().into_iter().map(|(p, k)| (p as u128, k)),
        )
        .expect("conductor divides a u64 modulus");
        CycleValue::new(finite, self.is_odd())
    }

    /// `N(χ)`.
    pub fn conductor_norm(&self) -> u64 {
        self.conductor_exponents().iter().map(|&(p, k)| p.pow(k)).product()
    }

    /// The primitive character inducing `χ`, modulo its conductor.
    pub fn primitive(&self) -> DirichletCharacter {
        let f = self.conductor_norm();
        let group = unit_group(f).expect("conductor is positive");
        let mut exponents = Vec::with_capacity(group.rank());
        for small in &group.components {
            let big = self.group.component(small.prime).expect("conductor divides modulus");
            for &h in &small.local_generators {
                exponents.push(self.primary_value(big, h).expect("generator is a unit"));
            }
        }
        DirichletCharacter { group, exponent_modulus: self.exponent_modulus, exponents }
    }

    /// The character mod `multiple` induced from `χ`; `N | multiple`.
    pub fn induce(&self, multiple: u64) -> Result<DirichletCharacter> {
        if multiple % self.modulus() != 0 {
            return Err(Error::Domain(format!("{} does not divide {multiple}", self.modulus())));
        }
        let group = unit_group(multiple)?;
        let exponents: Vec<u64> = group
            .generators
            .iter()
            .map(|&g| self.evaluate(g as i128).unwrap_or(0))
            .collect();
        DirichletCharacter::with_group(group, &exponents, self.exponent_modulus)
    }

    /// The local component `χ_v` under the fixed local-global convention.
    ///
    /// At `p | N` the units part is `χ_(p)^{-1}` and the uniformizer value is
    /// `χ(p̃)` with `p̃ ≡ 1 mod p^a`, `p̃ ≡ p mod N/p^a`. At `p ∤ N` the component is
    /// unramified with value `χ(p)`. At the real place it is the sign character
    /// iff `χ(-1) = -1`.
    pub fn local_component(&self, v: Place) -> LocalCharacter {
        let m = self.exponent_modulus;
        let n = self.modulus();
        match v {
            Place::Real => {
                if self.is_odd() {
                    LocalCharacter::sign(m).expect("m is even")
                } else {
                    LocalCharacter::trivial(Place::Real, m)
                }
            }
            Place::Finite(p) => match self.group.component(p) {
                None => {
                    let value = if n == 1 { 0 } else { self.evaluate(p as i128).unwrap_or(0) };
                    LocalCharacter {
                        uniformizer_exponent: value,
                        ..LocalCharacter::trivial(v, m)
                    }
                }
                Some(comp) => {
                    let rest = n / comp.prime_power;
                    let p_tilde = crt_pair(1, comp.prime_power, p % rest, rest);
                    let unif = self.evaluate(p_tilde as i128).expect("p̃ is a unit");
                    let inverse: Vec<u64> = self
                        .component_exponents(comp)
                        .iter()
                        .map(|&e| (m - e) % m)
                        .collect();
                    LocalCharacter::from_unit_data(p, m, comp.exponent, &inverse, unif)
                        .expect("component of a valid character")
                }
            },
        }
    }

    /// Checks `Σ_v χ_v(x) = 0` over the real place and every prime dividing
    /// `N·num(x)·den(x)`.
    pub fn verify_product_formula(&self, x: &Rational) -> Result<bool> {
        if x.is_zero() {
            return Err(Error::Domain("x must be nonzero".into()));
        }
        let mut places: BTreeSet<u64> = self.group.components.iter().map(|c| c.prime).collect();
        for part in [x.numer(), x.denom()] {
            let abs = part.magnitude();
            let v = abs
                .to_u128()
                .ok_or_else(|| Error::Range(format!("{abs} is too large to factor")))?;
            places.extend(factor(v)?.primes().map(|p| p as u64));
        }
        let m = self.exponent_modulus;
        let mut total = evaluate_local(&self.local_component(Place::Real), x)?;
        for p in places {
            total = (total + evaluate_local(&self.local_component(Place::Finite(p)), x)?) % m;
        }
        Ok(total == 0)
    }
}

/// Absolute discriminant of the abelian field cut out by `χ`, as
/// `∏_{i < ord χ} N(χ^i)`.
pub fn field_discriminant(chi: &DirichletCharacter) -> BigUint {
    let mut d = BigUint::one();
    for i in 0..chi.order() {
        let n = chi.pow(i).conductor_norm();
        if !n.is_zero() {
            d *= BigUint::from(n);
        }
    }
    d
}
