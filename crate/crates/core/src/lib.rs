//! Algebraic tools for the linear code equivalence problem.
//!
//! * [`field`], [`matrix`]: exact arithmetic over small GF(p^m).
//! * [`codes`]: duals, hulls, Schur and power codes, Frobenius images, closures.
//! * [`solver`]: the power-code distinguisher and its construction registry.
//! * [`reduction`]: partial closures and the reduction from LEP(U) to PEP.
//! * [`instances`]: seeded instance generation and the JSON instance format.
//! * [`harness`], [`cli`]: Monte Carlo experiments and the `lepkit` binary.

pub mod cli;
pub mod codes;
pub mod error;
pub mod field;
pub mod harness;
pub mod instances;
pub mod matrix;
pub mod reduction;
pub mod solver;

pub use codes::LinearCode;
pub use error::{Error, Result};
pub use field::{make_field, Field, FieldSpec, Fq};
pub use matrix::MatFq;
pub use solver::{distinguish, select_construction, ConstructionPlan, Verdict};
