//! Dense Hermitian linear algebra.

mod eigen;
mod matrix;
pub mod random;
mod subspace;
mod tolerances;

pub use eigen::{eigh, eigh_jacobi, EigenDecomposition};
pub use matrix::{CMatrix, HermitianMatrix, C64};
pub use subspace::{
    check_projection, gap_above, gram_embedding, lambda_min, principal_angles, projection_range,
    spectral_gap_above_zero, spectral_projection, spectral_projection_from, subspace_intersection,
    GramEmbedding, Subspace,
};
pub use tolerances::Tolerances;

pub(crate) use matrix::{c, dot, fmt_complex, norm};
