//! Subspaces, spectral projections and the Gram embedding of a projection family.

use super::eigen::{eigh, EigenDecomposition};
use super::matrix::{norm, CMatrix, HermitianMatrix, C64};
use super::tolerances::Tolerances;
use crate::error::NumericError;

/// A subspace of `C^n` given by an orthonormal frame (the columns of `frame`).
#[derive(Debug, Clone)]
pub struct Subspace {
    frame: CMatrix,
}

impl Subspace {
    /// `frame` must have orthonormal columns.
    pub fn from_frame(frame: CMatrix) -> Self {
        Subspace { frame }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            frame: CMatrix::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            frame: CMatrix::identity(ambient),
        }
    }

    /// The span of arbitrary vectors.
    pub fn span(ambient: usize, vectors: &[Vec<C64>], tol: &Tolerances) -> Self {
        let cols = super::random::orthonormalize(vectors, tol.rank);
        Subspace {
            frame: CMatrix::from_columns(ambient, &cols),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.rows()
    }

    pub fn dim(&self) -> usize {
        self.frame.cols()
    }

    pub fn frame(&self) -> &CMatrix {
        &self.frame
    }

    pub fn projector(&self) -> HermitianMatrix {
        HermitianMatrix::projector(&self.frame)
    }

    /// `‖F^H F − I‖_max`.
    pub fn orthonormality_defect(&self) -> f64 {
        self.frame
            .adjoint_mul(&self.frame)
            .sub(&CMatrix::identity(self.dim()))
            .max_abs()
    }

    /// `‖(I − Π) v‖ / ‖v‖`.
    pub fn relative_residual(&self, v: &[C64]) -> f64 {
        let nv = norm(v);
        if nv == 0.0 {
            return 0.0;
        }
        let coeffs = self.frame.adjoint().mul_vec(v);
        let proj = self.frame.mul_vec(&coeffs);
        let r: Vec<C64> = v.iter().zip(&proj).map(|(a, b)| a - b).collect();
        norm(&r) / nv
    }

    /// Equality of the orthogonal projections within `tol` (max entry).
    pub fn approx_eq(&self, other: &Subspace, tol: f64) -> bool {
        self.dim() == other.dim()
            && self
                .projector()
                .sub(&other.projector())
                .matrix()
                .max_abs()
                <= tol
    }
}

fn check_dims(subs: &[&Subspace]) -> Result<usize, NumericError> {
    let n = subs.first().ok_or(NumericError::Empty)?.ambient_dim();
    for s in subs {
        if s.ambient_dim() != n {
            return Err(NumericError::DimensionMismatch {
                expected: n,
                found: s.ambient_dim(),
            });
        }
    }
    Ok(n)
}

/// Eigenvectors of `A` with eigenvalue in the closed interval `[lo, hi]`.
pub fn spectral_projection(a: &HermitianMatrix, lo: f64, hi: f64, tol: &Tolerances) -> Result<Subspace, NumericError> {
    let e = eigh(a)?;
    spectral_projection_from(&e, lo, hi, tol)
}

/// As [`spectral_projection`], reusing a decomposition.
pub fn spectral_projection_from(
    e: &EigenDecomposition,
    lo: f64,
    hi: f64,
    tol: &Tolerances,
) -> Result<Subspace, NumericError> {
    let scale = e.norm();
    let margin = tol.gap * if scale > 0.0 { scale } else { 1.0 };
    for &v in &e.values {
        for endpoint in [lo, hi] {
            if endpoint.is_finite() && (v - endpoint).abs() <= margin {
                return Err(NumericError::AmbiguousBoundary {
                    eigenvalue: v,
                    endpoint,
                    tolerance: margin,
                });
            }
        }
    }
    Ok(Subspace::from_frame(e.select(|v| v >= lo && v <= hi)))
}

/// Vectors `v` with `Σ_i ‖(I − Π_i) v‖² = 0` up to the rank tolerance.
pub fn subspace_intersection(subs: &[Subspace], tol: &Tolerances) -> Result<Subspace, NumericError> {
    let refs: Vec<&Subspace> = subs.iter().collect();
    let n = check_dims(&refs)?;
    if subs.len() == 1 {
        return Ok(subs[0].clone());
    }
    let mut m = HermitianMatrix::zeros(n);
    let id = HermitianMatrix::identity(n);
    for s in subs {
        m = m.add(&id.sub(&s.projector()));
    }
    let e = eigh(&m)?;
    // Singular values of the stacked complements, recomputed from the eigenvectors
    // so that null directions are resolved to working precision.
    let sigma: Vec<f64> = (0..n)
        .map(|j| {
            let v = e.vectors.column(j);
            subs.iter()
                .map(|s| {
                    let r = s.relative_residual(&v) * norm(&v);
                    r * r
                })
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<Vec<C64>> = (0..n)
        .filter(|&j| smax == 0.0 || sigma[j] < tol.rank * smax)
        .map(|j| e.vectors.column(j))
        .collect();
    Ok(Subspace::from_frame(CMatrix::from_columns(n, &keep)))
}

/// Cosines of the principal angles, descending, clipped to `[0, 1]`.
pub fn principal_angles(u: &Subspace, v: &Subspace) -> Result<Vec<f64>, NumericError> {
    check_dims(&[u, v])?;
    if u.dim() == 0 || v.dim() == 0 {
        return Err(NumericError::Empty);
    }
    let cross = u.frame().adjoint_mul(v.frame());
    let (small, gram) = if cross.rows() <= cross.cols() {
        (cross.rows(), cross.mul(&cross.adjoint()))
    } else {
        (cross.cols(), cross.adjoint_mul(&cross))
    };
    let e = eigh(&HermitianMatrix::from_upper(&gram)?)?;
    let mut out: Vec<f64> = e.values.iter().map(|&x| x.max(0.0).sqrt().min(1.0)).collect();
    out.reverse();
    out.truncate(small);
    Ok(out)
}

/// Confirms `P² = P = P^H` within the projection tolerance.
pub fn check_projection(p: &HermitianMatrix, index: usize, tol: &Tolerances) -> Result<(), NumericError> {
    let m = p.matrix();
    let idem = m.mul(m).sub(m).max_abs();
    let herm = (0..p.dim())
        .flat_map(|i| (0..p.dim()).map(move |j| (i, j)))
        .map(|(i, j)| (m[(i, j)] - m[(j, i)].conj()).norm())
        .fold(0.0, f64::max);
    if idem > tol.proj || herm > tol.proj {
        return Err(NumericError::NotAProjection(index));
    }
    Ok(())
}

/// An orthonormal frame for the range of a projection.
pub fn projection_range(p: &HermitianMatrix) -> Result<CMatrix, NumericError> {
    let e = eigh(p)?;
    Ok(e.select(|v| v > 0.5))
}

/// The Gram embedding `ΓΓ^*` of a projection family, with the frames of each range.
#[derive(Debug, Clone)]
pub struct GramEmbedding {
    pub matrix: HermitianMatrix,
    pub ranks: Vec<usize>,
}

/// Block matrix with blocks `U_i^H U_j`, where `U_i` is an orthonormal frame of `Ran P_i`.
pub fn gram_embedding(projections: &[HermitianMatrix], tol: &Tolerances) -> Result<GramEmbedding, NumericError> {
    let n = projections.first().ok_or(NumericError::Empty)?.dim();
    let mut frames = Vec::with_capacity(projections.len());
    for (i, p) in projections.iter().enumerate() {
        if p.dim() != n {
            return Err(NumericError::DimensionMismatch {
                expected: n,
                found: p.dim(),
            });
        }
        check_projection(p, i, tol)?;
        frames.push(projection_range(p)?);
    }
    let ranks: Vec<usize> = frames.iter().map(CMatrix::cols).collect();
    let total: usize = ranks.iter().sum();
    let mut g = CMatrix::zeros(total, total);
    let offsets: Vec<usize> = ranks
        .iter()
        .scan(0, |acc, &r| {
            let o = *acc;
            *acc += r;
            Some(o)
        })
        .collect();
    for i in 0..frames.len() {
        for j in i..frames.len() {
            let block = if i == j {
                CMatrix::identity(ranks[i])
            } else {
                frames[i].adjoint_mul(&frames[j])
            };
            for a in 0..ranks[i] {
                for b in 0..ranks[j] {
                    g[(offsets[i] + a, offsets[j] + b)] = block[(a, b)];
                }
            }
        }
    }
    Ok(GramEmbedding {
        matrix: HermitianMatrix::from_upper(&g)?,
        ranks,
    })
}

pub fn lambda_min(a: &HermitianMatrix) -> Result<f64, NumericError> {
    if a.dim() == 0 {
        return Err(NumericError::Empty);
    }
    Ok(eigh(a)?.values[0])
}

/// Least eigenvalue above `zero_tol`.
pub fn spectral_gap_above_zero(a: &HermitianMatrix, zero_tol: f64) -> Result<Option<f64>, NumericError> {
    Ok(gap_above(&eigh(a)?.values, zero_tol))
}

pub fn gap_above(values: &[f64], zero_tol: f64) -> Option<f64> {
    values.iter().copied().find(|&v| v > zero_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::matrix::c;

    fn unit(n: usize, i: usize) -> Vec<C64> {
        (0..n).map(|k| c(if k == i { 1.0 } else { 0.0 }, 0.0)).collect()
    }

    fn line(v: &[f64]) -> Subspace {
        let n = norm(&v.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>());
        Subspace::from_frame(CMatrix::from_fn(v.len(), 1, |i, _| c(v[i] / n, 0.0)))
    }

    fn swap2() -> HermitianMatrix {
        HermitianMatrix::from_upper(&CMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]).unwrap()).unwrap()
    }

    #[test]
    fn projection_examples() {
        let tol = Tolerances::default();
        let a = HermitianMatrix::from_real_diagonal(&[1.0, 0.5, 1.0 / 3.0]);
        let s = spectral_projection(&a, 0.0, 0.4, &tol).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.relative_residual(&unit(3, 2)) < 1e-15);
        assert_eq!(spectral_projection(&a, -5.0, 5.0, &tol).unwrap().dim(), 3);
        let p = spectral_projection(&swap2(), 0.5, 2.0, &tol).unwrap();
        assert!(p.relative_residual(&[c(1.0, 0.0), c(1.0, 0.0)]) < 1e-12);
        assert!(matches!(
            spectral_projection(&a, 0.5, 2.0, &tol),
            Err(NumericError::AmbiguousBoundary { .. })
        ));
    }

    #[test]
    fn intersection_examples() {
        let tol = Tolerances::default();
        let e12 = Subspace::span(3, &[unit(3, 0), unit(3, 1)], &tol);
        let e23 = Subspace::span(3, &[unit(3, 1), unit(3, 2)], &tol);
        let i = subspace_intersection(&[e12.clone(), e23], &tol).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.relative_residual(&unit(3, 1)) < 1e-12);
        let same = subspace_intersection(&[e12.clone(), e12.clone()], &tol).unwrap();
        assert!(same.approx_eq(&e12, 1e-10));
        let x = line(&[1.0, 0.0]);
        let y = line(&[0.0, 1.0]);
        assert_eq!(subspace_intersection(&[x, y], &tol).unwrap().dim(), 0);
    }

    #[test]
    fn angle_examples() {
        let x = line(&[1.0, 0.0]);
        let y = line(&[0.5, 3f64.sqrt() / 2.0]);
        let cosines = principal_angles(&x, &y).unwrap();
        assert!((cosines[0] - 0.5).abs() < 1e-12);
        assert!(principal_angles(&x, &line(&[0.0, 1.0])).unwrap()[0] < 1e-12);
        let f = Subspace::full(3);
        assert!(principal_angles(&f, &f).unwrap().iter().all(|c| (c - 1.0).abs() < 1e-12));
    }

    #[test]
    fn gram_embedding_of_tilted_lines() {
        let tol = Tolerances::default();
        let p1 = line(&[1.0, 0.0]).projector();
        let p2 = line(&[0.6, 0.8]).projector();
        let g = gram_embedding(&[p1.clone(), p2.clone()], &tol).unwrap();
        assert_eq!(g.ranks, vec![1, 1]);
        assert!((g.matrix.get(0, 1).norm() - 0.6).abs() < 1e-12);
        let e = eigh(&g.matrix).unwrap();
        assert!((e.values[0] - 0.4).abs() < 1e-12 && (e.values[1] - 1.6).abs() < 1e-12);
        let sum = p1.add(&p2);
        let gap = spectral_gap_above_zero(&sum, 1e-9).unwrap().unwrap();
        assert!((gap - 0.4).abs() < 1e-12);
        let bad = HermitianMatrix::from_real_diagonal(&[0.5, 1.0]);
        assert_eq!(gram_embedding(&[p1, bad], &tol).unwrap_err(), NumericError::NotAProjection(1));
    }

    #[test]
    fn min_eigenvalue_examples() {
        assert_eq!(lambda_min(&HermitianMatrix::identity(3)).unwrap(), 1.0);
        assert_eq!(lambda_min(&HermitianMatrix::from_real_diagonal(&[1.0, 4.0])).unwrap(), 1.0);
        let a = HermitianMatrix::from_upper(&CMatrix::from_fn(2, 2, |i, j| c(if i == j { 2.0 } else { 1.0 }, 0.0))).unwrap();
        assert!((lambda_min(&a).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(spectral_gap_above_zero(&HermitianMatrix::zeros(3), 1e-9).unwrap(), None);
    }
}
