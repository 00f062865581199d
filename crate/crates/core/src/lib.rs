//! Effective Grunwald–Wang constructions over the rationals.
//!
//! Finite-order idele class characters of `Q` are represented as Dirichlet
//! characters with values written as exponents of `ζ_m`. The crate provides:
//!
//! - [`arith`]: integer factorization, unit groups of residue rings with
//!   discrete logarithms, exact rationals and local power tests;
//! - [`characters`]: local and global characters, conductors and the product
//!   formula;
//! - [`wang`]: detection of the special case and its element `a₀`;
//! - [`solver`]: construction of a global character with prescribed local
//!   components, an exhaustive least-conductor oracle and the bound report;
//! - [`mult_one`]: least nonsplit primes and family scans;
//! - [`powres`]: least moduli modulo which a prime is not an `l`-th power.

pub mod arith;
pub mod characters;
pub mod error;
pub mod mult_one;
pub mod powres;
pub mod solver;
pub mod wang;

pub use error::{Error, Result};
