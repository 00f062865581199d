//! Exact integer, rational and p-adic primitives.

pub mod factor;
pub mod local_power;
pub mod modular;
pub mod place;
pub mod primes;
pub mod rational;
pub mod units;

pub use factor::{euler_phi, factor, factor_u64, FactoredInteger};
pub use local_power::{
    is_rational_mth_power, is_square_in_2adic_quadratic, is_square_in_quadratic_field,
    lth_power_test_local, prime_power_decompose, QuadraticElement,
};
pub use place::Place;
pub use primes::{is_prime, is_prime_u64, primes_up_to, PrimeIter};
pub use rational::Rational;
pub use units::{dlog_units, unit_group, UnitGroupStructure};
