//! Exact and numeric decision procedures for the essential spectrum of sums of
//! self-adjoint operators whose pairwise products are compact.

pub mod criteria;
pub mod error;
pub mod exact;
pub mod gen;
mod json;
pub mod lab;
pub mod numeric;
pub mod operator;
pub mod rational;
pub mod scenario;
pub mod selftest;
pub mod seq;

pub use criteria::Certified;
pub use error::{CriteriaError, ModelError, NumericError, SeqError};
pub use exact::{CRational, ExactMatrix};
pub use numeric::{CMatrix, HermitianMatrix, Tolerances};
pub use operator::ModelOperator;
pub use rational::Rational;
pub use scenario::{ScenarioError, ScenarioSpec};
pub use seq::{IndexSet, Strand, SymbolicSequence};
