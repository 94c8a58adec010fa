//! Propagation-complete and unit-refutation-complete CNF formulas: closures,
//! deciders, the dual-rail characterization, a q-Horn compiler, and
//! generators for the standard separating families.

pub mod cnf;
pub mod corpus;
pub mod deciders;
pub mod dimacs;
pub mod dual_rail;
pub mod error;
pub mod families;
pub mod propagation;
pub mod qhorn;
pub mod semantics;
pub mod suite;

pub use cnf::{apply_assignment, is_autark, Clause, CnfFormula, EncodingFormula, Lit, PartialAssignment, Var};
pub use error::{Error, Result};
