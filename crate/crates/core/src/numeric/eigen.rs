//! Hermitian eigensolvers.
//!
//! [`eigh`] reduces to real symmetric tridiagonal form with complex
//! Householder reflectors and a diagonal phase change, then runs implicit QL
//! with Wilkinson-type shifts. [`eigh_jacobi`] is the cyclic complex Jacobi
//! method, slower but simple enough to serve as an independent check.

use super::matrix::{c, CMatrix, HermitianMatrix, C64};
use super::tolerances::Tolerances;
use crate::error::NumericError;

const QL_ITERATIONS: usize = 30;

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Spectral norm of the decomposed matrix.
    pub fn norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `V · diag(λ) · V^H`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.dim();
        let scaled = CMatrix::from_fn(n, n, |i, j| self.vectors[(i, j)] * self.values[j]);
        scaled.mul(&self.vectors.adjoint())
    }

    /// `max_i ‖A v_i − λ_i v_i‖`.
    pub fn max_residual(&self, a: &HermitianMatrix) -> f64 {
        let av = a.matrix().mul(&self.vectors);
        let n = self.dim();
        (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| (av[(i, j)] - self.vectors[(i, j)] * self.values[j]).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `‖V^H V − I‖_max`.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.vectors.adjoint_mul(&self.vectors);
        g.sub(&CMatrix::identity(self.dim())).max_abs()
    }

    /// Columns whose eigenvalue satisfies `keep`.
    pub fn select(&self, keep: impl Fn(f64) -> bool) -> CMatrix {
        let cols: Vec<Vec<C64>> = (0..self.dim())
            .filter(|&j| keep(self.values[j]))
            .map(|j| self.vectors.column(j))
            .collect();
        CMatrix::from_columns(self.dim(), &cols)
    }

    fn sorted(values: Vec<f64>, vectors: CMatrix) -> Self {
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        EigenDecomposition {
            values: order.iter().map(|&i| values[i]).collect(),
            vectors: CMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]),
        }
    }
}

fn diagonal_decomposition(d: Vec<f64>) -> EigenDecomposition {
    let n = d.len();
    EigenDecomposition::sorted(d, CMatrix::identity(n))
}

/// Eigendecomposition by Householder tridiagonalization and implicit QL.
pub fn eigh(a: &HermitianMatrix) -> Result<EigenDecomposition, NumericError> {
    if let Some(d) = a.diagonal() {
        return Ok(diagonal_decomposition(d));
    }
    let n = a.dim();
    let mut w = a.matrix().clone();
    let mut q = CMatrix::identity(n);
    tridiagonalize(&mut w, &mut q);

    let mut d: Vec<f64> = (0..n).map(|i| w[(i, i)].re).collect();
    let mut e = vec![0.0; n];
    let mut phase = vec![c(1.0, 0.0); n];
    for i in 0..n.saturating_sub(1) {
        let sub = w[(i + 1, i)];
        let r = sub.norm();
        e[i] = r;
        phase[i + 1] = if r > 0.0 { phase[i] * (sub / r) } else { phase[i] };
    }
    // zt[j * n + i] = Z[i][j]; eigenvector j of the real tridiagonal is row j of zt.
    let mut zt = vec![0.0; n * n];
    for i in 0..n {
        zt[i * n + i] = 1.0;
    }
    tql(&mut d, &mut e, &mut zt, n)?;

    let mut qd = q;
    for i in 0..n {
        for j in 0..n {
            qd[(i, j)] *= phase[j];
        }
    }
    let mut v = CMatrix::zeros(n, n);
    for r in 0..n {
        let row = qd.row(r).to_vec();
        for j in 0..n {
            let z = &zt[j * n..(j + 1) * n];
            let mut acc = c(0.0, 0.0);
            for (x, &zz) in row.iter().zip(z) {
                acc += x * zz;
            }
            v[(r, j)] = acc;
        }
    }
    Ok(EigenDecomposition::sorted(d, v))
}

/// Reduces `a` in place to Hermitian tridiagonal form `Q^H A Q`, accumulating `Q`.
fn tridiagonalize(a: &mut CMatrix, q: &mut CMatrix) {
    let n = a.rows();
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x: Vec<C64> = (0..m).map(|i| a[(k + 1 + i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tail = x[1..].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if xnorm == 0.0 || tail == 0.0 {
            continue;
        }
        let ph = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { c(1.0, 0.0) };
        let mut u = x;
        u[0] += ph * xnorm;
        let unorm2: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        let s = (2.0 / unorm2).sqrt();
        let w: Vec<C64> = u.iter().map(|z| z * s).collect();

        // p = S w, with S the trailing block
        let mut p = vec![c(0.0, 0.0); m];
        for i in 0..m {
            let row = &a.row(k + 1 + i)[k + 1..];
            p[i] = row.iter().zip(&w).map(|(x, y)| x * y).sum();
        }
        let kk: C64 = w.iter().zip(&p).map(|(x, y)| x.conj() * y).sum::<C64>() * 0.5;
        let qv: Vec<C64> = p.iter().zip(&w).map(|(pi, wi)| pi - kk * wi).collect();
        for i in 0..m {
            for j in 0..m {
                let delta = w[i] * qv[j].conj() + qv[i] * w[j].conj();
                a[(k + 1 + i, k + 1 + j)] -= delta;
            }
        }
        let beta = -ph * xnorm;
        a[(k + 1, k)] = beta;
        a[(k, k + 1)] = beta.conj();
        for i in 1..m {
            a[(k + 1 + i, k)] = c(0.0, 0.0);
            a[(k, k + 1 + i)] = c(0.0, 0.0);
        }
        // Q <- Q (I - w w^H) on columns k+1..n
        for r in 0..n {
            let row = &q.row(r)[k + 1..];
            let qw: C64 = row.iter().zip(&w).map(|(x, y)| x * y).sum();
            for j in 0..m {
                q[(r, k + 1 + j)] -= qw * w[j].conj();
            }
        }
    }
}

/// Implicit QL on a real symmetric tridiagonal matrix; `e[i]` couples `i` and `i+1`.
fn tql(d: &mut [f64], e: &mut [f64], zt: &mut [f64], n: usize) -> Result<(), NumericError> {
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                if e[m].abs() <= f64::EPSILON * tst1 {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_ITERATIONS {
                return Err(NumericError::ConvergenceFailure(QL_ITERATIONS));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut cc, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = cc * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                cc = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * cc * b;
                p = s * r;
                d[i + 1] = g + p;
                g = cc * r - b;
                let (lo, hi) = zt.split_at_mut((i + 1) * n);
                let zi = &mut lo[i * n..];
                let zi1 = &mut hi[..n];
                for k in 0..n {
                    let f = zi1[k];
                    zi1[k] = s * zi[k] + cc * f;
                    zi[k] = cc * zi[k] - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Cyclic complex Jacobi eigensolver.
pub fn eigh_jacobi(a: &HermitianMatrix, tol: &Tolerances) -> Result<EigenDecomposition, NumericError> {
    let n = a.dim();
    let mut m = a.matrix().clone();
    let mut v = CMatrix::identity(n);
    let scale = m.frobenius_norm();
    let target = tol.jacobi_off * scale;
    let off = |m: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off(&m) > target {
        if sweeps == tol.jacobi_sweeps {
            return Err(NumericError::ConvergenceFailure(tol.jacobi_sweeps));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let omega = apq / mag;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                // U restricted to (p, q) = [[c, s], [-s conj(ω), c conj(ω)]]
                let upp = c(cs, 0.0);
                let upq = c(sn, 0.0);
                let uqp = -omega.conj() * sn;
                let uqq = omega.conj() * cs;
                for i in 0..n {
                    let (x, y) = (m[(i, p)], m[(i, q)]);
                    m[(i, p)] = x * upp + y * uqp;
                    m[(i, q)] = x * upq + y * uqq;
                }
                for j in 0..n {
                    let (x, y) = (m[(p, j)], m[(q, j)]);
                    m[(p, j)] = upp.conj() * x + uqp.conj() * y;
                    m[(q, j)] = upq.conj() * x + uqq.conj() * y;
                }
                m[(p, q)] = c(0.0, 0.0);
                m[(q, p)] = c(0.0, 0.0);
                m[(p, p)] = c(m[(p, p)].re, 0.0);
                m[(q, q)] = c(m[(q, q)].re, 0.0);
                for i in 0..n {
                    let (x, y) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = x * upp + y * uqp;
                    v[(i, q)] = x * upq + y * uqq;
                }
            }
        }
    }
    let values = (0..n).map(|i| m[(i, i)].re).collect();
    Ok(EigenDecomposition::sorted(values, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::random::random_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn real(rows: &[&[f64]]) -> HermitianMatrix {
        let m = CMatrix::from_fn(rows.len(), rows.len(), |i, j| c(rows[i][j], 0.0));
        HermitianMatrix::new(m, 0.0).unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(eigh(&HermitianMatrix::identity(3)).unwrap().values, vec![1.0; 3]);
        assert_eq!(eigh(&HermitianMatrix::from_real_diagonal(&[3.0, 1.0, 2.0])).unwrap().values, vec![1.0, 2.0, 3.0]);
        let e = eigh(&real(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn complex_matrix_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 3, 8, 40] {
            let a = random_hermitian(n, &mut rng);
            let e = eigh(&a).unwrap();
            let norm = e.norm().max(1e-300);
            assert!(e.max_residual(&a) <= 1e-10 * norm, "n = {n}");
            assert!(e.orthonormality_defect() <= 1e-12 * (n as f64).sqrt() * 10.0);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn jacobi_agrees_with_ql() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let tol = Tolerances::default();
        for n in [2, 5, 17] {
            let a = random_hermitian(n, &mut rng);
            let x = eigh(&a).unwrap();
            let y = eigh_jacobi(&a, &tol).unwrap();
            for (p, q) in x.values.iter().zip(&y.values) {
                assert!((p - q).abs() < 1e-11 * x.norm().max(1.0));
            }
            assert!(y.max_residual(&a) <= 1e-10 * y.norm());
        }
    }

    #[test]
    fn degenerate_spectrum() {
        // Rank-one plus identity: eigenvalue 1 with multiplicity n - 1.
        let n = 6;
        let m = CMatrix::from_fn(n, n, |i, j| c(if i == j { 2.0 } else { 1.0 }, 0.0));
        let e = eigh(&HermitianMatrix::new(m, 0.0).unwrap()).unwrap();
        for v in &e.values[..n - 1] {
            assert!((v - 1.0).abs() < 1e-12);
        }
        assert!((e.values[n - 1] - 7.0).abs() < 1e-12);
        assert!(e.orthonormality_defect() < 1e-12);
    }
}
