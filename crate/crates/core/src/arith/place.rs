use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::primes::is_prime_u64;
use crate::error::{Error, Result};

/// A place of the rational field: a finite prime or the real place.
///
/// Finite places sort by their prime; the real place sorts last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(u64),
    Real,
}

impl Place {
    /// A finite place; `p` must be prime.
    pub fn finite(p: u64) -> Result<Place> {
        if is_prime_u64(p) {
            Ok(Place::Finite(p))
        } else {
            Err(Error::Domain(format!("{p} is not prime")))
        }
    }

    pub fn prime(&self) -> Option<u64> {
        match *self {
            Place::Finite(p) => Some(p),
            Place::Real => None,
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, Place::Real)
    }

    /// Norm of the formal prime: `p` for finite places, 1 at the real place.
    pub fn norm(&self) -> u64 {
        self.prime().unwrap_or(1)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Real => write!(f, "infinity"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Place> {
        let s = s.trim();
        if s == "infinity" {
            return Ok(Place::Real);
        }
        let p: u64 = s
            .parse()
            .map_err(|_| Error::Domain(format!("place `{s}` is neither `infinity` nor a prime")))?;
        Place::finite(p)
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Sorted, deduplicated set of places.
pub fn normalize_places(places: &[Place]) -> Vec<Place> {
    let mut out = places.to_vec();
    out.sort_unstable();
    out.dedup();
    out
}

/// Product of the norms of the finite places (`N_S`).
pub fn places_norm(places: &[Place]) -> u128 {
    normalize_places(places).iter().map(|v| v.norm() as u128).product()
}

/// Parses a comma-separated list such as `2,3,infinity`; the empty string is the empty set.
pub fn parse_place_list(s: &str) -> Result<Vec<Place>> {
    let s = s.trim();
    if s.is_empty() || s == "-" {
        return Ok(Vec::new());
    }
    let places = s.split(',').map(str::parse).collect::<Result<Vec<Place>>>()?;
    Ok(normalize_places(&places))
}

pub fn format_place_list(places: &[Place]) -> String {
    places.iter().map(Place::to_string).collect::<Vec<_>>().join(",")
}
