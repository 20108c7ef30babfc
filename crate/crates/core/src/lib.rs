//! Exact reasoning about causality in finite structural-equation models.
//!
//! The crate evaluates causal and counterfactual formulas, classifies models
//! as recursive, unique-solution or general, checks axiom schemes by
//! exhaustive enumeration, and decides satisfiability and validity over
//! finite signatures.

pub mod axioms;
pub mod budget;
pub mod checker;
mod combinatorics;
pub mod decide;
pub mod error;
pub mod fixtures;
pub mod lang;
pub mod model;

pub use budget::DEFAULT_BUDGET;
pub use decide::{sat, sat_enum, sat_rec, valid, SatOptions, SatWitness, Verdict};
pub use error::{Error, Result};
pub use model::{
    enumerate_models, is_recursive, is_unique_solutions, sig_size, solve, CausalModel, Context,
    EndoAssignment, Intervention, MechanismTable, ModelClass, Signature, SolutionSet, Value,
    Variable,
};
