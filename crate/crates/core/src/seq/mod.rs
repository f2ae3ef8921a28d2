//! Exact calculus of interleaved strand sequences.

mod index_set;
mod jset;
pub(crate) mod poly;
pub(crate) mod radical;
mod sequence;
mod strand;

pub use index_set::{global_index, local_index, IndexSet};
pub use jset::JSet;
pub use sequence::{seq_sum, CountResult, SymbolicSequence, ZeroSet};
pub use strand::{Base, Factor, SignPattern, Strand, Term};
