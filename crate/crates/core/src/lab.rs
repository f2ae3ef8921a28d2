//! Truncation experiments checked against the exact model.

use rand::Rng;
use serde_json::{json, Value};

use crate::criteria::Certified;
use crate::error::{CriteriaError, SeqError};
use crate::exact::{CRational, ExactMatrix};
use crate::json;
use crate::numeric::{
    eigh, random::random_frame, spectral_projection, subspace_intersection, CMatrix, HermitianMatrix, Subspace,
    Tolerances,
};
use crate::operator::{epsilon_core, essential_spectrum, truncate, ModelOperator};
use crate::rational::{from_f64, to_f64, Rational};

/// A maximal run of sorted eigenvalues with consecutive gaps at most the cluster tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub center: f64,
    pub count: usize,
    pub lo: f64,
    pub hi: f64,
}

/// Groups sorted values into clusters.
pub fn clusters(sorted: &[f64], gap: f64) -> Vec<Cluster> {
    let mut out: Vec<Cluster> = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[i - 1] > gap {
            let run = &sorted[start..i];
            if !run.is_empty() {
                out.push(Cluster {
                    center: run.iter().sum::<f64>() / run.len() as f64,
                    count: run.len(),
                    lo: run[0],
                    hi: run[run.len() - 1],
                });
            }
            start = i;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SizeResult {
    pub n: usize,
    pub eigenvalues: Vec<f64>,
    pub clusters: Vec<Cluster>,
    /// Indices into `clusters` of the clusters that grow with `n`.
    pub growing: Vec<usize>,
    /// Hausdorff distance from growing cluster centers to the essential points.
    pub hausdorff: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub label: String,
    pub sizes: Vec<usize>,
    pub essential_points: Vec<Rational>,
    pub cluster_gap: f64,
    pub per_size: Vec<SizeResult>,
}

fn overlap_count(c: &Cluster, others: &[Cluster], gap: f64) -> usize {
    others
        .iter()
        .filter(|o| o.hi >= c.lo - gap && o.lo <= c.hi + gap)
        .map(|o| o.count)
        .sum()
}

fn hausdorff(a: &[f64], b: &[f64]) -> f64 {
    let dir = |x: &[f64], y: &[f64]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).abs()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    dir(a, b).max(dir(b, a))
}

pub fn truncation_spectrum_convergence(
    op: &ModelOperator,
    sizes: &[usize],
    tol: &Tolerances,
) -> Result<ConvergenceReport, CriteriaError> {
    if sizes.len() < 2 || sizes.windows(2).any(|w| w[0] >= w[1]) || sizes[0] == 0 {
        return Err(CriteriaError::InvalidArgument("need at least two strictly increasing sizes".into()));
    }
    let essential: Vec<Rational> = essential_spectrum(op)?.essential_points.into_iter().collect();
    let ess_f: Vec<f64> = essential.iter().map(to_f64).collect();
    let gap = tol.cluster;
    let mut per_size = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let values = eigh(&truncate(op, n)?)?.values;
        per_size.push(SizeResult {
            n,
            clusters: clusters(&values, gap),
            eigenvalues: values,
            growing: Vec::new(),
            hausdorff: None,
        });
    }
    for s in 0..per_size.len() {
        let growing: Vec<usize> = (0..per_size[s].clusters.len())
            .filter(|&i| {
                let c = &per_size[s].clusters[i];
                if s == 0 {
                    overlap_count(c, &per_size[1].clusters, gap) > c.count
                } else {
                    c.count > overlap_count(c, &per_size[s - 1].clusters, gap)
                }
            })
            .collect();
        let centers: Vec<f64> = growing.iter().map(|&i| per_size[s].clusters[i].center).collect();
        per_size[s].hausdorff = (!centers.is_empty()).then(|| hausdorff(&centers, &ess_f));
        per_size[s].growing = growing;
    }
    Ok(ConvergenceReport {
        label: op.label().to_string(),
        sizes: sizes.to_vec(),
        essential_points: essential,
        cluster_gap: gap,
        per_size,
    })
}

impl ConvergenceReport {
    /// Rows `(size, cluster_center, cluster_count, hausdorff)`.
    pub fn csv_rows(&self) -> Vec<(usize, f64, usize, Option<f64>)> {
        self.per_size
            .iter()
            .flat_map(|s| s.clusters.iter().map(move |c| (s.n, c.center, c.count, s.hausdorff)))
            .collect()
    }

    /// Whether the distances never increase once they are defined.
    pub fn monotone(&self) -> bool {
        let d: Vec<f64> = self.per_size.iter().filter_map(|s| s.hausdorff).collect();
        d.windows(2).all(|w| w[1] <= w[0] + 1e-12)
    }
}

impl Certified for ConvergenceReport {
    fn verdict(&self) -> String {
        if self.holds() { "Converging" } else { "NotMonotone" }.into()
    }

    fn holds(&self) -> bool {
        self.monotone()
    }

    fn certificate(&self) -> Value {
        json!({
            "sizes": self.sizes,
            "essential_points": json::rats(&self.essential_points),
            "cluster_gap": json::float(self.cluster_gap),
            "per_size": self.per_size.iter().map(|s| json!({
                "n": s.n,
                "clusters": s.clusters.iter().enumerate().map(|(i, c)| json!({
                    "center": json::float(c.center),
                    "count": c.count,
                    "growing": s.growing.contains(&i),
                })).collect::<Vec<_>>(),
                "hausdorff_to_essential": s.hausdorff.map(json::float),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Exact eigenvalues of a block-free truncation with rational entries, ascending.
pub fn exact_truncation_eigenvalues(op: &ModelOperator, n: usize) -> Result<Option<Vec<Rational>>, CriteriaError> {
    if op.block().is_some() {
        return Ok(None);
    }
    let mut out = Vec::with_capacity(n);
    for k in 1..=n as u64 {
        match op.diag().eval(k) {
            Ok(v) => out.push(v),
            Err(SeqError::Irrational(_)) => return Ok(None),
            Err(e) => return Err(e.into()),
        }
    }
    out.sort();
    Ok(Some(out))
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeylReport {
    pub n: usize,
    pub rank: usize,
    pub seed: u64,
    /// Eigenvalues of the perturbation that are positive and negative.
    pub positive: usize,
    pub negative: usize,
    /// Eigenvalues outside the interlacing bracket `[λ_{i−q}, λ_{i+p}]`.
    pub displaced: usize,
    /// Eigenvalues that moved at all, pairing sorted spectra.
    pub moved: usize,
    pub max_shift: f64,
    pub essential_unchanged: bool,
}

/// A rank-`rank` Hermitian perturbation `V diag(s) V^*` with exactly representable entries.
fn random_block<R: Rng>(n: usize, rank: usize, rng: &mut R) -> (ExactMatrix, usize, usize) {
    let mut block = ExactMatrix::zeros(n, n);
    if rank == 0 {
        return (block, 0, 0);
    }
    let v = random_frame(n, rank, rng);
    let signs: Vec<f64> = (0..rank)
        .map(|_| {
            let mag: f64 = rng.random_range(0.5..1.5);
            if rng.random_bool(0.5) { mag } else { -mag }
        })
        .collect();
    let positive = signs.iter().filter(|&&s| s > 0.0).count();
    let scaled = CMatrix::from_fn(n, rank, |i, j| v[(i, j)] * signs[j]);
    let e = scaled.mul(&v.adjoint());
    let exact = |x: f64| from_f64(x).expect("finite");
    for i in 0..n {
        block.set(i, i, CRational::real(exact(e[(i, i)].re)));
        for j in i + 1..n {
            let z = CRational::new(exact(e[(i, j)].re), exact(e[(i, j)].im));
            block.set(j, i, z.conj());
            block.set(i, j, z);
        }
    }
    (block, positive, rank - positive)
}

pub fn weyl_experiment<R: Rng>(
    op: &ModelOperator,
    rank: usize,
    n: usize,
    seed: u64,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<WeylReport, CriteriaError> {
    if rank > n {
        return Err(CriteriaError::InvalidArgument("rank exceeds the truncation size".into()));
    }
    let before = eigh(&truncate(op, n)?)?.values;
    let (block, p, q) = random_block(n, rank, rng);
    let base_block = op.block().cloned().unwrap_or_else(|| ExactMatrix::zeros(0, 0));
    let perturbed = op.without_block().with_block(base_block.add_padded(&block))?;
    let after = eigh(&truncate(&perturbed, n)?)?.values;
    let scale = before.iter().chain(&after).fold(1.0f64, |m, v| m.max(v.abs()));
    let slack = tol.eig * scale;
    let displaced = (0..n)
        .filter(|&i| {
            let lower = i.checked_sub(q).map_or(f64::NEG_INFINITY, |j| before[j]);
            let upper = before.get(i + p).copied().unwrap_or(f64::INFINITY);
            after[i] < lower - slack || after[i] > upper + slack
        })
        .count();
    let shifts: Vec<f64> = before.iter().zip(&after).map(|(a, b)| (a - b).abs()).collect();
    let essential_unchanged =
        essential_spectrum(op)?.essential_points == essential_spectrum(&perturbed)?.essential_points;
    Ok(WeylReport {
        n,
        rank,
        seed,
        positive: p,
        negative: q,
        displaced,
        moved: shifts.iter().filter(|&&s| s > slack).count(),
        max_shift: shifts.iter().cloned().fold(0.0, f64::max),
        essential_unchanged,
    })
}

impl Certified for WeylReport {
    fn verdict(&self) -> String {
        if self.holds() { "Pass" } else { "Fail" }.into()
    }

    fn holds(&self) -> bool {
        self.displaced <= self.rank && self.essential_unchanged
    }

    fn certificate(&self) -> Value {
        json!({
            "n": self.n,
            "rank": self.rank,
            "positive": self.positive,
            "negative": self.negative,
            "displaced": self.displaced,
            "moved": self.moved,
            "max_shift": json::float(self.max_shift),
            "essential_unchanged": self.essential_unchanged,
        })
    }
}

#[derive(Debug, Clone)]
pub struct NumericCoreReport {
    pub n: usize,
    pub eps: f64,
    pub subspace: Subspace,
    pub dimension: usize,
    /// `|{k <= n : k ∈ H_eps}|` from the exact model, for block-free inputs.
    pub symbolic_count: Option<usize>,
}

/// `∩_i E_{A_i,n}([−eps, eps])` on the `n`-truncations.
pub fn numeric_epsilon_core(
    ops: &[ModelOperator],
    eps: f64,
    n: usize,
    tol: &Tolerances,
) -> Result<NumericCoreReport, CriteriaError> {
    if ops.is_empty() {
        return Err(crate::error::ModelError::Empty.into());
    }
    if !(eps > 0.0) || n == 0 {
        return Err(CriteriaError::InvalidArgument("eps and n must be positive".into()));
    }
    let mut subs = Vec::with_capacity(ops.len());
    for o in ops {
        subs.push(spectral_projection(&truncate(o, n)?, -eps, eps, tol)?);
    }
    let subspace = subspace_intersection(&subs, tol)?;
    let symbolic_count = if ops.iter().all(|o| o.block().is_none()) {
        let e = from_f64(eps).expect("finite");
        Some(epsilon_core(ops, &e)?.core.members_up_to(n as u64).len())
    } else {
        None
    };
    Ok(NumericCoreReport {
        n,
        eps,
        dimension: subspace.dim(),
        subspace,
        symbolic_count,
    })
}

impl Certified for NumericCoreReport {
    fn verdict(&self) -> String {
        match self.symbolic_count {
            Some(c) if c == self.dimension => "Agrees",
            Some(_) => "Disagrees",
            None => "NumericOnly",
        }
        .into()
    }

    fn holds(&self) -> bool {
        self.symbolic_count.is_none_or(|c| c == self.dimension)
    }

    fn certificate(&self) -> Value {
        json!({
            "n": self.n,
            "eps": json::float(self.eps),
            "dimension": self.dimension,
            "symbolic_count": self.symbolic_count,
            "orthonormality_defect": json::float(self.subspace.orthonormality_defect()),
        })
    }
}

/// The matrix of a truncation with its exact eigenvalues when available.
#[derive(Debug, Clone)]
pub struct TruncationReport {
    pub n: usize,
    pub matrix: HermitianMatrix,
    pub eigenvalues: Vec<f64>,
    pub exact_eigenvalues: Option<Vec<Rational>>,
}

pub fn truncation_report(op: &ModelOperator, n: usize) -> Result<TruncationReport, CriteriaError> {
    let matrix = truncate(op, n)?;
    let eigenvalues = eigh(&matrix)?.values;
    Ok(TruncationReport {
        n,
        exact_eigenvalues: exact_truncation_eigenvalues(op, n)?,
        matrix,
        eigenvalues,
    })
}

impl TruncationReport {
    /// Largest gap between the numeric and exact eigenvalues.
    pub fn exact_mismatch(&self) -> Option<f64> {
        self.exact_eigenvalues.as_ref().map(|ex| {
            ex.iter()
                .zip(&self.eigenvalues)
                .map(|(a, b)| (to_f64(a) - b).abs())
                .fold(0.0, f64::max)
        })
    }
}

impl Certified for TruncationReport {
    fn verdict(&self) -> String {
        if self.exact_eigenvalues.is_some() { "Exact" } else { "Numeric" }.into()
    }

    fn holds(&self) -> bool {
        self.exact_mismatch().is_none_or(|d| d <= 1e-12)
    }

    fn certificate(&self) -> Value {
        let mut v = json!({
            "n": self.n,
            "eigenvalues": json::floats(&self.eigenvalues),
            "essential_spectrum": [],
        });
        if let Some(ex) = &self.exact_eigenvalues {
            v["exact_eigenvalues"] = json::rats(ex);
        }
        if self.n <= 12 {
            v["matrix"] = json!(self.matrix.matrix().to_string());
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::NumericError;
    use crate::rational::{int, rat};
    use crate::seq::{Strand, SymbolicSequence};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn op(strands: Vec<Strand>) -> ModelOperator {
        ModelOperator::new("A", SymbolicSequence::from_strands(strands))
    }

    fn harmonic() -> ModelOperator {
        op(vec![Strand::power(int(1), int(1)).unwrap()])
    }

    #[test]
    fn harmonic_truncation_is_exact() {
        let r = truncation_report(&harmonic(), 4).unwrap();
        assert_eq!(r.exact_eigenvalues.as_ref().unwrap(), &vec![rat(1, 4), rat(1, 3), rat(1, 2), int(1)]);
        assert!(r.holds());
    }

    #[test]
    fn convergence_to_two_points() {
        let s0 = Strand::from_terms(vec![(int(1), int(0)), (int(1), int(1))]).unwrap();
        let a = op(vec![s0, Strand::constant(int(-1))]);
        let r = truncation_spectrum_convergence(&a, &[100, 400], &Tolerances::default()).unwrap();
        let d: Vec<f64> = r.per_size.iter().map(|s| s.hausdorff.unwrap()).collect();
        assert!(d[1] <= 0.02, "{d:?}");
        assert!(d[1] < d[0]);
        assert!(r.monotone());
    }

    #[test]
    fn zero_operator_converges_at_once() {
        let r = truncation_spectrum_convergence(&op(vec![Strand::zero()]), &[10, 20], &Tolerances::default()).unwrap();
        assert!(r.per_size.iter().all(|s| s.hausdorff == Some(0.0)));
    }

    #[test]
    fn weyl_examples() {
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = weyl_experiment(&harmonic(), 0, 50, 5, &mut rng, &tol).unwrap();
        assert_eq!(r.max_shift, 0.0);
        let r = weyl_experiment(&harmonic(), 1, 200, 5, &mut rng, &tol).unwrap();
        assert!(r.holds() && r.displaced <= 1, "{r:?}");
        let id = op(vec![Strand::constant(int(1))]);
        let r = weyl_experiment(&id, 2, 60, 5, &mut rng, &tol).unwrap();
        assert!(r.holds());
        assert!(r.moved <= 2, "{r:?}");
    }

    #[test]
    fn numeric_core_examples() {
        let tol = Tolerances::default();
        assert!(matches!(
            numeric_epsilon_core(&[harmonic()], 0.5, 10, &tol),
            Err(CriteriaError::Numeric(NumericError::AmbiguousBoundary { .. }))
        ));
        let r = numeric_epsilon_core(&[harmonic()], 0.51, 10, &tol).unwrap();
        assert_eq!((r.dimension, r.symbolic_count), (9, Some(9)));
        let id = op(vec![Strand::constant(int(1))]);
        assert_eq!(numeric_epsilon_core(&[id], 0.5, 10, &tol).unwrap().dimension, 0);
        let a = op(vec![Strand::constant(int(1)), Strand::zero()]);
        let b = op(vec![Strand::zero(), Strand::constant(int(1))]);
        let r = numeric_epsilon_core(&[a, b], 0.5, 10, &tol).unwrap();
        assert_eq!((r.dimension, r.symbolic_count), (0, Some(0)));
    }

    #[test]
    fn clusters_split_on_gaps() {
        let c = clusters(&[0.0, 0.0005, 0.5, 0.5008, 0.5016], 1e-3);
        assert_eq!(c.iter().map(|c| c.count).collect::<Vec<_>>(), vec![2, 3]);
    }
}
