//! Construction of global characters with prescribed local components.

mod construct;
mod instance;
pub mod linalg;
mod oracle;
mod pstar;
mod report;

pub use construct::{
    build_cycle, construct, solve_character, special_obstruction, GrunwaldSolution,
    KERNEL_ENUMERATION_LIMIT,
};
pub use instance::GrunwaldInstance;
pub use oracle::{oracle_minimal, oracle_minimal_widening, oracle_minimal_with_exponent, ORACLE_CAP_LIMIT};
pub use pstar::{
    auxiliary_primes, auxiliary_selection, expected_aux_count, p_star_basis, survivors_by_local_tests,
    AuxiliarySelection, PStarElement, PStarGroup, AUX_PRIME_CAP,
};
pub use report::{bound_report, bound_report_with, conductor_bound_holds, e1_quantities, BoundReport, ReportOptions};
