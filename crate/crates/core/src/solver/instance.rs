use serde::Serialize;

use crate::arith::local_power::prime_power_decompose;
use crate::arith::place::Place;
use crate::characters::LocalCharacter;
use crate::error::{Error, Result};
use crate::wang::FieldDescriptor;

/// Prescribed local characters `χ^v` of exponent `m = l^r` at the places of `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrunwaldInstance {
    pub field: FieldDescriptor,
    pub m: u64,
    /// Sorted by place, finite primes first; each rescaled to exponent modulus `m`.
    pub places: Vec<LocalCharacter>,
}

impl GrunwaldInstance {
    pub fn new(field: FieldDescriptor, m: u64, places: Vec<LocalCharacter>) -> Result<Self> {
        if prime_power_decompose(m).is_none() {
            return Err(Error::Domain(format!("m = {m} is not a prime power l^r with r >= 1")));
        }
        let mut out = Vec::with_capacity(places.len());
        for chi in places {
            if m % chi.exponent_modulus != 0 {
                return Err(Error::MalformedCharacter(format!(
                    "character at {} has exponent modulus {} not dividing m = {m}",
                    chi.place, chi.exponent_modulus
                )));
            }
            out.push(chi.rescale(m)?);
        }
        out.sort_by_key(|c| c.place);
        if out.windows(2).any(|w| w[0].place == w[1].place) {
            return Err(Error::MalformedCharacter("places must be pairwise distinct".into()));
        }
        Ok(GrunwaldInstance { field, m, places: out })
    }

    pub fn over_q(m: u64, places: Vec<LocalCharacter>) -> Result<Self> {
        GrunwaldInstance::new(FieldDescriptor::Rationals, m, places)
    }

    /// `(l, r)` with `m = l^r`.
    pub fn prime_power(&self) -> (u64, u32) {
        prime_power_decompose(self.m).expect("validated in the constructor")
    }

    pub fn place_set(&self) -> Vec<Place> {
        self.places.iter().map(|c| c.place).collect()
    }

    pub fn finite_primes(&self) -> Vec<u64> {
        self.places.iter().filter_map(|c| c.place.prime()).collect()
    }

    pub fn has_real(&self) -> bool {
        self.places.iter().any(|c| c.place.is_real())
    }

    pub fn prescribed(&self, v: Place) -> Option<&LocalCharacter> {
        self.places.iter().find(|c| c.place == v)
    }

    /// `N_S`, the product of the finite primes in `S`.
    pub fn n_s(&self) -> u128 {
        self.finite_primes().iter().map(|&p| p as u128).product()
    }

    /// The same data with values in `μ_{new_m}`.
    pub fn rescale(&self, new_m: u64) -> Result<GrunwaldInstance> {
        let places = self.places.iter().map(|c| c.rescale(new_m)).collect::<Result<Vec<_>>>()?;
        GrunwaldInstance::new(self.field, new_m, places)
    }

    pub(crate) fn require_rationals(&self) -> Result<()> {
        match self.field {
            FieldDescriptor::Rationals => Ok(()),
            other => Err(Error::Domain(format!(
                "the constructive solver works over Q only, not {other}"
            ))),
        }
    }
}
