use serde_json::{json, Value};

/// Every numeric threshold in one place. Reports echo the record they used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Eigen-residual bound relative to `‖A‖`.
    pub eig: f64,
    /// Minimum distance of an interval endpoint from any eigenvalue, relative to `‖A‖`.
    pub gap: f64,
    /// Relative singular-value threshold for rank decisions.
    pub rank: f64,
    /// Orthonormality tolerance, multiplied by `√n`.
    pub orth: f64,
    /// Projection residual bound for `P² = P = P*`.
    pub proj: f64,
    /// Residual bound for subspace containment tests.
    pub containment: f64,
    /// Eigenvalue clustering gap in truncation experiments.
    pub cluster: f64,
    /// Off-diagonal stopping threshold of the Jacobi solver, relative to `‖A‖_F`.
    pub jacobi_off: f64,
    pub jacobi_sweeps: usize,
    /// Default truncation size.
    pub trunc: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eig: 1e-10,
            gap: 1e-8,
            rank: 1e-8,
            orth: 1e-12,
            proj: 1e-10,
            containment: 1e-6,
            cluster: 1e-3,
            jacobi_off: 1e-14,
            jacobi_sweeps: 30,
            trunc: 500,
        }
    }
}

impl Tolerances {
    pub fn orth_for(&self, n: usize) -> f64 {
        self.orth * (n as f64).sqrt()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "eig": self.eig,
            "gap": self.gap,
            "rank": self.rank,
            "orth": self.orth,
            "proj": self.proj,
            "containment": self.containment,
            "cluster": self.cluster,
            "jacobi_off": self.jacobi_off,
            "jacobi_sweeps": self.jacobi_sweeps,
            "trunc": self.trunc,
        })
    }
}
