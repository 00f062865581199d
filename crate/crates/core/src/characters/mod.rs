//! Local characters of `Q_v^×` and Dirichlet characters, with conductors and
//! the local-global dictionary.

mod cycle;
mod dirichlet;
mod local;

pub use cycle::CycleValue;
pub use dirichlet::{field_discriminant, make_dirichlet, CharacterRecord, DirichletCharacter};
pub use local::{evaluate_local, LocalCharacter};
