//! Model operators: a symbolic diagonal plus an optional finite Hermitian block.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{ModelError, SeqError};
use crate::exact::ExactMatrix;
use crate::numeric::{c, CMatrix, HermitianMatrix};
use crate::rational::{lcm_u64, Rational};
use crate::seq::{CountResult, IndexSet, SymbolicSequence};

/// A bounded self-adjoint operator on `ℓ²`: `diag(d_k) + B ⊕ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelOperator {
    label: String,
    diag: SymbolicSequence,
    block: Option<ExactMatrix>,
}

impl ModelOperator {
    pub fn new(label: impl Into<String>, diag: SymbolicSequence) -> Self {
        ModelOperator {
            label: label.into(),
            diag,
            block: None,
        }
    }

    pub fn with_block(mut self, block: ExactMatrix) -> Result<Self, ModelError> {
        if !block.is_hermitian() {
            return Err(ModelError::NotHermitian);
        }
        self.block = Some(block);
        Ok(self)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn diag(&self) -> &SymbolicSequence {
        &self.diag
    }

    pub fn block(&self) -> Option<&ExactMatrix> {
        self.block.as_ref()
    }

    pub fn without_block(&self) -> ModelOperator {
        ModelOperator::new(self.label.clone(), self.diag.clone())
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// Exact spectral data of a model operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumInfo {
    pub essential_points: BTreeSet<Rational>,
    pub modulus: usize,
    pub strand_limits: Vec<Rational>,
    /// Per-strand value laws in DSL syntax.
    pub strand_laws: Vec<String>,
    pub exceptions: BTreeMap<u64, Rational>,
    /// Whether 0 is an accumulation point of nonzero diagonal values.
    pub zero_accumulation: bool,
}

/// The index set of `H_ε` together with its dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonCoreReport {
    pub eps: Rational,
    pub dimension: CountResult,
    pub core: IndexSet,
}

impl EpsilonCoreReport {
    fn new(eps: Rational, core: IndexSet) -> Self {
        EpsilonCoreReport {
            eps,
            dimension: CountResult::from_set(&core),
            core,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.dimension.is_finite()
    }
}

fn require_block_free(ops: &[ModelOperator]) -> Result<(), ModelError> {
    if ops.is_empty() {
        return Err(ModelError::Empty);
    }
    match ops.iter().find(|o| o.block.is_some()) {
        Some(o) => Err(ModelError::BlockNotSupported(o.label.clone())),
        None => Ok(()),
    }
}

/// `Σ A_i`: diagonals added pointwise, blocks zero-padded and added.
pub fn op_sum(ops: &[ModelOperator]) -> Result<ModelOperator, ModelError> {
    let first = ops.first().ok_or(ModelError::Empty)?;
    if ops.len() == 1 {
        return Ok(first.clone());
    }
    let mut diag = first.diag.clone();
    let mut block = first.block.clone();
    for o in &ops[1..] {
        diag = diag.add(&o.diag)?;
        block = match (block, &o.block) {
            (None, None) => None,
            (Some(b), None) => Some(b),
            (None, Some(b)) => Some(b.clone()),
            (Some(a), Some(b)) => Some(a.add_padded(b)),
        };
    }
    let label = ops.iter().map(|o| o.label.as_str()).collect::<Vec<_>>().join("+");
    Ok(ModelOperator { label, diag, block })
}

/// A diagonal operator is compact iff its entries tend to 0; the block never matters.
pub fn is_compact(op: &ModelOperator) -> bool {
    op.diag.tends_to_zero()
}

/// Strand limits of the pointwise product of two diagonals at their common modulus.
pub fn product_limits(a: &ModelOperator, b: &ModelOperator) -> (usize, Vec<Rational>) {
    let m = lcm_u64(a.diag.modulus() as u64, b.diag.modulus() as u64) as usize;
    let la = a.diag.strand_limits();
    let lb = b.diag.strand_limits();
    let limits = (0..m)
        .map(|r| &la[r % la.len()] * &lb[r % lb.len()])
        .collect();
    (m, limits)
}

pub fn product_is_compact(a: &ModelOperator, b: &ModelOperator) -> bool {
    product_limits(a, b).1.iter().all(Rational::is_zero)
}

/// Essential spectrum and related data. The block is never read.
pub fn essential_spectrum(op: &ModelOperator) -> Result<SpectrumInfo, ModelError> {
    let d = &op.diag;
    let limits = d.strand_limits();
    let mut zero_accumulation = false;
    for (s, l) in d.strands().iter().zip(&limits) {
        if l.is_zero() && !s.is_identically_zero()? {
            zero_accumulation = true;
        }
    }
    Ok(SpectrumInfo {
        essential_points: limits.iter().cloned().collect(),
        modulus: d.modulus(),
        strand_limits: limits,
        strand_laws: d.strands().iter().map(|s| s.to_string()).collect(),
        exceptions: d.exceptions().clone(),
        zero_accumulation,
    })
}

/// `H_ε = ∩_i E_{A_i}([−ε, ε])H` for block-free diagonal operators.
pub fn epsilon_core(ops: &[ModelOperator], eps: &Rational) -> Result<EpsilonCoreReport, ModelError> {
    require_block_free(ops)?;
    let mut core = ops[0].diag.below_set(eps)?;
    for o in &ops[1..] {
        core = core.intersect(&o.diag.below_set(eps)?);
    }
    Ok(EpsilonCoreReport::new(eps.clone(), core))
}

/// `H_0 = ∩_i Ker A_i` for block-free diagonal operators.
pub fn kernel_core(ops: &[ModelOperator]) -> Result<EpsilonCoreReport, ModelError> {
    require_block_free(ops)?;
    let mut core = ops[0].diag.zero_index_set()?;
    for o in &ops[1..] {
        core = core.intersect(&o.diag.zero_index_set()?);
    }
    Ok(EpsilonCoreReport::new(Rational::zero(), core))
}

fn check_size(op: &ModelOperator, n: usize) -> Result<(), ModelError> {
    if let Some(b) = &op.block {
        if b.rows() > n {
            return Err(ModelError::TruncationTooSmall { block: b.rows(), n });
        }
    }
    Ok(())
}

/// The leading `n × n` section with exact entries.
pub fn truncate_exact(op: &ModelOperator, n: usize) -> Result<ExactMatrix, ModelError> {
    check_size(op, n)?;
    let diag = (1..=n as u64).map(|k| op.diag.eval(k)).collect::<Result<Vec<_>, SeqError>>()?;
    let mut m = ExactMatrix::diagonal(diag);
    if let Some(b) = &op.block {
        m = m.add_padded(b);
    }
    Ok(m)
}

/// The leading `n × n` section in floating point. Rational entries are
/// rounded once; irrational diagonal entries are evaluated in floating point.
pub fn truncate(op: &ModelOperator, n: usize) -> Result<HermitianMatrix, ModelError> {
    check_size(op, n)?;
    let mut m = CMatrix::zeros(n, n);
    for k in 1..=n as u64 {
        let v = match op.diag.eval(k) {
            Ok(r) => crate::rational::to_f64(&r),
            Err(SeqError::Irrational(_)) => op.diag.eval_f64(k),
            Err(e) => return Err(e.into()),
        };
        m[(k as usize - 1, k as usize - 1)] = c(v, 0.0);
    }
    if let Some(b) = &op.block {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                m[(i, j)] += b.get(i, j).to_c64();
            }
        }
    }
    Ok(HermitianMatrix::from_upper(&m).expect("square"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::CRational;
    use crate::rational::{int, rat};
    use crate::seq::Strand;

    fn harmonic(label: &str, e: i64) -> ModelOperator {
        ModelOperator::new(label, SymbolicSequence::from_strand(Strand::power(int(1), int(e)).unwrap()))
    }

    fn strands(label: &str, s: Vec<Strand>) -> ModelOperator {
        ModelOperator::new(label, SymbolicSequence::from_strands(s))
    }

    fn k(c: i64) -> Strand {
        Strand::constant(int(c))
    }

    fn swap_block() -> ExactMatrix {
        ExactMatrix::from_rows(vec![
            vec![CRational::zero(), CRational::real(int(1))],
            vec![CRational::real(int(1)), CRational::zero()],
        ])
        .unwrap()
    }

    #[test]
    fn sum_examples() {
        let a = harmonic("A", 1);
        assert_eq!(op_sum(std::slice::from_ref(&a)).unwrap(), a);
        let neg = ModelOperator::new("B", a.diag().neg());
        let z = op_sum(&[a.clone(), neg]).unwrap();
        assert!(z.diag().strands().iter().all(Strand::is_zero));
        let s = op_sum(&[strands("P", vec![k(1), k(0)]), strands("Q", vec![k(0), k(1)])]).unwrap();
        for i in 1..=100 {
            assert_eq!(s.diag().eval(i).unwrap(), int(1));
        }
    }

    #[test]
    fn compactness_examples() {
        assert!(is_compact(&harmonic("A", 1)));
        assert!(!is_compact(&strands("I", vec![k(1)])));
        assert!(is_compact(&harmonic("A", 1).with_block(swap_block()).unwrap()));
        assert!(product_is_compact(&strands("P", vec![k(1), k(0)]), &strands("Q", vec![k(0), k(1)])));
        assert!(!product_is_compact(&strands("I", vec![k(1)]), &strands("I", vec![k(1)])));
        let a = strands(
            "A",
            vec![Strand::from_terms(vec![(int(1), int(0)), (int(1), int(1))]).unwrap(), Strand::power(int(1), int(1)).unwrap()],
        );
        let b = strands("B", vec![Strand::power(int(1), int(2)).unwrap(), k(1)]);
        assert!(product_is_compact(&a, &b));
    }

    #[test]
    fn essential_spectrum_ignores_block() {
        let a = harmonic("A", 1);
        let big = ExactMatrix::from_rows(vec![vec![CRational::real(int(10))]]).unwrap();
        let e1 = essential_spectrum(&a).unwrap();
        let e2 = essential_spectrum(&a.clone().with_block(big).unwrap()).unwrap();
        assert_eq!(e1, e2);
        assert_eq!(e1.essential_points, [int(0)].into_iter().collect());
        assert!(e1.zero_accumulation);
        let alt = essential_spectrum(&strands("P", vec![k(1), k(0)])).unwrap();
        assert_eq!(alt.essential_points, [int(0), int(1)].into_iter().collect());
        assert!(!alt.zero_accumulation);
    }

    #[test]
    fn epsilon_core_examples() {
        assert!(!epsilon_core(&[harmonic("A", 1)], &int(1)).unwrap().is_finite());
        let a = strands(
            "A",
            vec![Strand::from_terms(vec![(int(1), int(0)), (int(1), int(1))]).unwrap(), k(0)],
        );
        let b = strands("B", vec![k(0), k(1)]);
        let r = epsilon_core(&[a, b], &rat(1, 3)).unwrap();
        assert_eq!(r.dimension, CountResult::Finite { count: 0, indices: vec![] });
        for eps in [rat(1, 2), rat(1, 1000)] {
            assert!(!epsilon_core(&[harmonic("A", 1), harmonic("B", 2)], &eps).unwrap().is_finite());
        }
        let blocked = harmonic("A", 1).with_block(swap_block()).unwrap();
        assert_eq!(
            epsilon_core(&[blocked], &int(1)).unwrap_err(),
            ModelError::BlockNotSupported("A".into())
        );
    }

    #[test]
    fn kernel_core_examples() {
        let z = ModelOperator::new("Z", SymbolicSequence::zero());
        assert!(!kernel_core(&[z]).unwrap().is_finite());
        assert_eq!(
            kernel_core(&[harmonic("A", 1)]).unwrap().dimension,
            CountResult::Finite { count: 0, indices: vec![] }
        );
        let a = strands("A", vec![k(1), k(0)]);
        let b = strands("B", vec![Strand::power(int(1), int(1)).unwrap(), k(0)]);
        match kernel_core(&[a, b]).unwrap().dimension {
            CountResult::Infinite { witness_strand, .. } => assert_eq!(witness_strand, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn truncation_examples() {
        let t = truncate_exact(&harmonic("A", 1), 3).unwrap();
        assert_eq!(t, ExactMatrix::diagonal(vec![int(1), rat(1, 2), rat(1, 3)]));
        let z = truncate_exact(&ModelOperator::new("Z", SymbolicSequence::zero()), 5).unwrap();
        assert_eq!(z, ExactMatrix::zeros(5, 5));
        let b = truncate_exact(&harmonic("A", 1).with_block(swap_block()).unwrap(), 3).unwrap();
        assert_eq!(b.to_string(), "[[1, 1, 0], [1, 1/2, 0], [0, 0, 1/3]]");
        let f = truncate(&harmonic("A", 1).with_block(swap_block()).unwrap(), 3).unwrap();
        assert_eq!(f.get(0, 1), c(1.0, 0.0));
        assert_eq!(f.get(1, 1), c(0.5, 0.0));
        assert!(matches!(
            truncate(&harmonic("A", 1).with_block(swap_block()).unwrap(), 1),
            Err(ModelError::TruncationTooSmall { block: 2, n: 1 })
        ));
    }
}
