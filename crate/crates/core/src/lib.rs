//! Separating sets of invariant monomials for diagonalizable group actions.
//!
//! A diagonalizable group acting on `K^n` through characters `chi_1..chi_n`
//! has invariant monomials `x^m` for `m` in the monoid `B` of exponent vectors
//! with `prod chi_i^{m_i} = 1`. This crate computes the atoms of `B`, decides
//! whether a set of invariant monomials is separating (in characteristic zero
//! and in characteristic `p`) through lattice conditions on support-restricted
//! submonoids, and evaluates the degree bounds `beta`, `beta_sep` and the
//! support-size invariants `tau`, `tau_p`. Negative verdicts carry integer
//! certificates that can be rechecked by hand.
//!
//! Coordinates are 0-based throughout.

pub mod cli;
pub mod exact_linalg;
pub mod hilbert;
pub mod input;
pub mod monomial_subalgebra;
pub mod oracle;
pub mod repspec;
pub mod separating;

pub use exact_linalg::{IntMatrix, Lattice, LinalgError, QuotientStructure};
pub use hilbert::{atoms, atoms_restricted, enumerate_b_up_to, AtomSet, ExponentVector, HilbertError, Limits};
pub use input::JobInput;
pub use monomial_subalgebra::{check_separating_general, MonomialFamily};
pub use repspec::{group_stats, parse_repspec, realize_from_lattice, GroupStats, RepError, RepSpec};
pub use separating::{
    beta, beta_sep, check_separating, minimize_separating, tau_exact, tau_p_exact, Characteristic, FailureCertificate,
    SearchOptions, SeparatingError, SeparatingVerdict, Witness,
};
