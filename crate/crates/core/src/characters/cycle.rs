use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::factor::FactoredInteger;

/// A formal cycle over `Q`: a positive integer together with a bit for the real place.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleValue {
    pub finite_part: FactoredInteger,
    pub real_bit: bool,
}

impl CycleValue {
    pub fn new(finite_part: FactoredInteger, real_bit: bool) -> Self {
        CycleValue { finite_part, real_bit }
    }

    pub fn trivial() -> Self {
        CycleValue { finite_part: FactoredInteger::one(), real_bit: false }
    }

    /// Absolute norm; the real place contributes 1.
    pub fn norm(&self) -> u128 {
        self.finite_part.value()
    }
}

impl fmt::Display for CycleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.finite_part)?;
        if self.real_bit {
            write!(f, "*infinity")?;
        }
        Ok(())
    }
}
