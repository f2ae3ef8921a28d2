//! Seeded random matrices and Gram-Schmidt orthonormalization.

use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::{c, dot, norm, CMatrix, HermitianMatrix, C64};

pub fn gaussian_complex<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

pub fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = gaussian_complex(rng);
        }
    }
    m
}

pub fn gaussian_real_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = c(rng.sample(StandardNormal), 0.0);
        }
    }
    m
}

pub fn random_hermitian<R: Rng>(n: usize, rng: &mut R) -> HermitianMatrix {
    let g = gaussian_matrix(n, n, rng);
    HermitianMatrix::from_upper(&g.add(&g.adjoint()).scale(0.5)).unwrap()
}

/// Modified Gram-Schmidt with one reorthogonalization pass. Columns whose
/// residual falls below `drop_tol` times their original norm are discarded.
pub fn orthonormalize(columns: &[Vec<C64>], drop_tol: f64) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for col in columns {
        let original = norm(col);
        if original == 0.0 {
            continue;
        }
        let mut v = col.clone();
        for _ in 0..2 {
            for b in &basis {
                let p = dot(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= p * y;
                }
            }
        }
        let r = norm(&v);
        if r > drop_tol * original {
            basis.push(v.into_iter().map(|x| x / r).collect());
        }
    }
    basis
}

/// `n × k` matrix with orthonormal columns from QR of a Gaussian sample.
pub fn random_frame<R: Rng>(n: usize, k: usize, rng: &mut R) -> CMatrix {
    assert!(k <= n);
    loop {
        let g = gaussian_matrix(n, k, rng);
        let cols: Vec<Vec<C64>> = (0..k).map(|j| g.column(j)).collect();
        let q = orthonormalize(&cols, 1e-8);
        if q.len() == k {
            return CMatrix::from_columns(n, &q);
        }
    }
}

/// `n × k` real orthonormal frame.
pub fn random_real_frame<R: Rng>(n: usize, k: usize, rng: &mut R) -> CMatrix {
    assert!(k <= n);
    loop {
        let g = gaussian_real_matrix(n, k, rng);
        let cols: Vec<Vec<C64>> = (0..k).map(|j| g.column(j)).collect();
        let q = orthonormalize(&cols, 1e-8);
        if q.len() == k {
            return CMatrix::from_columns(n, &q);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn frames_are_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_frame(30, 7, &mut rng);
        let g = f.adjoint_mul(&f);
        assert!(g.sub(&CMatrix::identity(7)).max_abs() < 1e-13);
    }

    #[test]
    fn dependent_columns_are_dropped() {
        let a = vec![c(1.0, 0.0), c(1.0, 0.0)];
        let b = vec![c(2.0, 0.0), c(2.0, 0.0)];
        assert_eq!(orthonormalize(&[a, b], 1e-10).len(), 1);
    }
}
