//! Interleaved strand sequences with finitely many exceptions.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};

use super::index_set::{global_index, local_index, IndexSet};
use super::jset::JSet;
use super::strand::Strand;
use crate::error::SeqError;
use crate::rational::{lcm_u64, Rational};

/// A real sequence on `k >= 1`: strand `r` covers `k` with `(k-1) mod m = r`
/// at local index `j = (k-1-r)/m + 1`; exceptions override single values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicSequence {
    modulus: usize,
    strands: Vec<Strand>,
    exceptions: BTreeMap<u64, Rational>,
}

/// Size of an index set: an explicit finite list, or a strand along which it is cofinal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CountResult {
    Finite { count: u64, indices: Vec<u64> },
    Infinite { witness_strand: usize, modulus: usize },
}

impl CountResult {
    pub fn from_set(set: &IndexSet) -> Self {
        match set.members() {
            Some(indices) => CountResult::Finite {
                count: indices.len() as u64,
                indices,
            },
            None => CountResult::Infinite {
                witness_strand: set.witness_strand().unwrap(),
                modulus: set.modulus(),
            },
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, CountResult::Finite { .. })
    }
}

/// Zeros of a sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroSet {
    /// Isolated zeros, outside identically-zero strands.
    pub indices: Vec<u64>,
    /// Strands that vanish identically.
    pub zero_strands: Vec<usize>,
    /// No isolated zero lies beyond this global index.
    pub scan_bound: u64,
}

fn check_eps(eps: &Rational) -> Result<(), SeqError> {
    if eps.is_positive() {
        Ok(())
    } else {
        Err(SeqError::NonPositiveThreshold(eps.to_string()))
    }
}

impl SymbolicSequence {
    pub fn new(modulus: usize, strands: Vec<Strand>, exceptions: BTreeMap<u64, Rational>) -> Result<Self, SeqError> {
        if modulus == 0 {
            return Err(SeqError::Invalid("modulus must be at least 1".into()));
        }
        if strands.len() != modulus {
            return Err(SeqError::Invalid(format!(
                "modulus {modulus} needs {modulus} strands, got {}",
                strands.len()
            )));
        }
        if exceptions.contains_key(&0) {
            return Err(SeqError::ZeroIndex);
        }
        let mut s = SymbolicSequence {
            modulus,
            strands,
            exceptions,
        };
        s.canonicalize();
        Ok(s)
    }

    pub fn from_strand(strand: Strand) -> Self {
        SymbolicSequence {
            modulus: 1,
            strands: vec![strand],
            exceptions: BTreeMap::new(),
        }
    }

    pub fn from_strands(strands: Vec<Strand>) -> Self {
        SymbolicSequence::new(strands.len(), strands, BTreeMap::new()).expect("nonempty strand list")
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_strand(Strand::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_strand(Strand::zero())
    }

    fn canonicalize(&mut self) {
        let (m, strands) = (self.modulus, &self.strands);
        self.exceptions.retain(|&k, v| {
            let (r, j) = local_index(m, k);
            strands[r].eval(j).map_or(true, |x| &x != v)
        });
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn strands(&self) -> &[Strand] {
        &self.strands
    }

    pub fn exceptions(&self) -> &BTreeMap<u64, Rational> {
        &self.exceptions
    }

    pub fn with_exception(mut self, k: u64, v: Rational) -> Result<Self, SeqError> {
        if k == 0 {
            return Err(SeqError::ZeroIndex);
        }
        self.exceptions.insert(k, v);
        self.canonicalize();
        Ok(self)
    }

    /// Exact value; exceptions take precedence.
    pub fn eval(&self, k: u64) -> Result<Rational, SeqError> {
        if k == 0 {
            return Err(SeqError::ZeroIndex);
        }
        if let Some(v) = self.exceptions.get(&k) {
            return Ok(v.clone());
        }
        let (r, j) = local_index(self.modulus, k);
        self.strands[r].eval(j).map_err(|e| match e {
            SeqError::Irrational(_) => SeqError::Irrational(k),
            other => other,
        })
    }

    /// Certified rational enclosure of the value, exact when it is rational.
    pub fn eval_bounds(&self, k: u64, bits: u32) -> Result<(Rational, Rational), SeqError> {
        if k == 0 {
            return Err(SeqError::ZeroIndex);
        }
        if let Some(v) = self.exceptions.get(&k) {
            return Ok((v.clone(), v.clone()));
        }
        let (r, j) = local_index(self.modulus, k);
        Ok(self.strands[r].eval_bounds(j, bits))
    }

    pub fn eval_f64(&self, k: u64) -> f64 {
        if let Some(v) = self.exceptions.get(&k) {
            return crate::rational::to_f64(v);
        }
        let (r, j) = local_index(self.modulus, k);
        self.strands[r].eval_f64(j)
    }

    /// Exact sign of `s(k) - c`.
    pub fn sign_minus(&self, k: u64, c: &Rational) -> Ordering {
        if let Some(v) = self.exceptions.get(&k) {
            return (v - c).cmp(&Rational::zero());
        }
        let (r, j) = local_index(self.modulus, k);
        self.strands[r].shift(&-c).sign_at(j)
    }

    /// The same sequence written at modulus `target`, a multiple of the current one.
    pub fn refine(&self, target: usize) -> SymbolicSequence {
        assert!(target % self.modulus == 0, "target modulus must be a multiple");
        if target == self.modulus {
            return self.clone();
        }
        let s = (target / self.modulus) as u64;
        let strands = (0..target)
            .map(|big_r| {
                let r = big_r % self.modulus;
                let c = (big_r / self.modulus) as i64 + 1 - s as i64;
                self.strands[r].reindex(s, c)
            })
            .collect();
        SymbolicSequence {
            modulus: target,
            strands,
            exceptions: self.exceptions.clone(),
        }
    }

    fn pointwise(
        &self,
        other: &SymbolicSequence,
        strand_op: impl Fn(&Strand, &Strand) -> Strand,
        value_op: impl Fn(Rational, Rational) -> Rational,
    ) -> Result<SymbolicSequence, SeqError> {
        let m = lcm_u64(self.modulus as u64, other.modulus as u64) as usize;
        let a = self.refine(m);
        let b = other.refine(m);
        let strands = a.strands.iter().zip(&b.strands).map(|(x, y)| strand_op(x, y)).collect();
        let mut exceptions = BTreeMap::new();
        for &k in a.exceptions.keys().chain(b.exceptions.keys()) {
            exceptions.insert(k, value_op(a.eval(k)?, b.eval(k)?));
        }
        SymbolicSequence::new(m, strands, exceptions)
    }

    /// Pointwise sum. Fails only when an exception meets an irrational value.
    pub fn add(&self, other: &SymbolicSequence) -> Result<SymbolicSequence, SeqError> {
        self.pointwise(other, Strand::add, |x, y| x + y)
    }

    /// Pointwise product. Fails only when an exception meets an irrational value.
    pub fn mul(&self, other: &SymbolicSequence) -> Result<SymbolicSequence, SeqError> {
        self.pointwise(other, Strand::mul, |x, y| x * y)
    }

    pub fn scale(&self, c: &Rational) -> SymbolicSequence {
        SymbolicSequence {
            modulus: self.modulus,
            strands: self.strands.iter().map(|s| s.scale(c)).collect(),
            exceptions: self.exceptions.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    pub fn neg(&self) -> SymbolicSequence {
        self.scale(&-Rational::from_integer(1.into()))
    }

    pub fn square(&self) -> SymbolicSequence {
        SymbolicSequence {
            modulus: self.modulus,
            strands: self.strands.iter().map(|s| s.mul(s)).collect(),
            exceptions: self.exceptions.iter().map(|(&k, v)| (k, v * v)).collect(),
        }
    }

    pub fn strand_limits(&self) -> Vec<Rational> {
        self.strands.iter().map(Strand::limit).collect()
    }

    pub fn limit_points(&self) -> BTreeSet<Rational> {
        self.strand_limits().into_iter().collect()
    }

    pub fn tends_to_zero(&self) -> bool {
        self.strands.iter().all(|s| s.limit().is_zero())
    }

    /// `{k : keep(sign(s(k) - c))}`.
    pub fn sign_set(&self, c: &Rational, keep: impl Fn(Ordering) -> bool) -> Result<IndexSet, SeqError> {
        let mut locals = Vec::with_capacity(self.modulus);
        for s in &self.strands {
            locals.push(s.shift(&-c).sign_pattern()?.select(&keep));
        }
        let overrides = self
            .exceptions
            .iter()
            .map(|(&k, v)| (k, keep((v - c).cmp(&Rational::zero()))))
            .collect();
        Ok(IndexSet::new(self.modulus, locals, overrides))
    }

    /// `{k : |s(k)| <= eps}`.
    pub fn below_set(&self, eps: &Rational) -> Result<IndexSet, SeqError> {
        check_eps(eps)?;
        let upper = self.sign_set(eps, |o| o != Ordering::Greater)?;
        let lower = self.sign_set(&-eps, |o| o != Ordering::Less)?;
        Ok(upper.intersect(&lower))
    }

    /// Local indices `j` on strand `r` with `|s_r(j)| <= eps`, exceptions ignored.
    pub fn strand_below(&self, r: usize, eps: &Rational) -> Result<JSet, SeqError> {
        check_eps(eps)?;
        let s = &self.strands[r];
        let upper = s.shift(&-eps).sign_pattern()?.select(|o| o != Ordering::Greater);
        let lower = s.shift(eps).sign_pattern()?.select(|o| o != Ordering::Less);
        Ok(upper.intersect(&lower))
    }

    /// `{k : s(k) = 0}`.
    pub fn zero_index_set(&self) -> Result<IndexSet, SeqError> {
        self.sign_set(&Rational::zero(), |o| o == Ordering::Equal)
    }

    pub fn count_below(&self, eps: &Rational) -> Result<CountResult, SeqError> {
        Ok(CountResult::from_set(&self.below_set(eps)?))
    }

    pub fn zero_set(&self) -> Result<ZeroSet, SeqError> {
        let mut indices = Vec::new();
        let mut zero_strands = Vec::new();
        let mut scan_bound = 1u64;
        for (r, s) in self.strands.iter().enumerate() {
            let pattern = s.sign_pattern()?;
            if pattern.runs() == [(1, Ordering::Equal)] {
                zero_strands.push(r);
                continue;
            }
            scan_bound = scan_bound.max(global_index(self.modulus, r, pattern.stable_from()));
            let zeros: JSet = pattern.select(|o| o == Ordering::Equal);
            for j in zeros.members().expect("a nonzero strand has finitely many zeros") {
                let k = global_index(self.modulus, r, j);
                if !self.exceptions.contains_key(&k) {
                    indices.push(k);
                }
            }
        }
        for (&k, v) in &self.exceptions {
            let (r, _) = local_index(self.modulus, k);
            if v.is_zero() && !zero_strands.contains(&r) {
                indices.push(k);
            }
            scan_bound = scan_bound.max(k);
        }
        indices.sort_unstable();
        Ok(ZeroSet {
            indices,
            zero_strands,
            scan_bound,
        })
    }

    /// Writes every input at the least common modulus.
    pub fn refine_common(seqs: &[SymbolicSequence]) -> Vec<SymbolicSequence> {
        let m = seqs.iter().fold(1u64, |acc, s| lcm_u64(acc, s.modulus as u64)) as usize;
        seqs.iter().map(|s| s.refine(m)).collect()
    }
}

/// Pointwise sum of a list of sequences.
pub fn seq_sum(seqs: &[SymbolicSequence]) -> Result<SymbolicSequence, SeqError> {
    let mut acc = SymbolicSequence::zero();
    for s in seqs {
        acc = acc.add(s)?;
    }
    Ok(acc)
}

impl fmt::Display for SymbolicSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "seq mod {} {{", self.modulus)?;
        for (r, s) in self.strands.iter().enumerate() {
            if !s.is_zero() {
                write!(f, " strand {r}: {s};")?;
            }
        }
        for (k, v) in &self.exceptions {
            write!(f, " except {k} -> {v};")?;
        }
        write!(f, " }}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn st(terms: &[(Rational, Rational)]) -> Strand {
        Strand::from_terms(terms.to_vec()).unwrap()
    }

    fn inv(c: Rational, e: i64) -> (Rational, Rational) {
        (c, int(e))
    }

    #[test]
    fn add_inverse_is_zero() {
        let a = SymbolicSequence::constant(int(1));
        let b = SymbolicSequence::constant(int(-1));
        let s = a.add(&b).unwrap();
        assert!(s.strands()[0].is_zero());
    }

    #[test]
    fn add_across_moduli() {
        let a = SymbolicSequence::from_strands(vec![Strand::constant(int(1)), Strand::zero()]);
        let b = SymbolicSequence::from_strands(vec![Strand::zero(), Strand::zero(), st(&[inv(int(1), 1)])]);
        let s = a.add(&b).unwrap();
        assert_eq!(s.modulus(), 6);
        for k in 1..=60 {
            assert_eq!(s.eval(k).unwrap(), a.eval(k).unwrap() + b.eval(k).unwrap());
        }
        // k = 3 lies on strand 0 of the first input and strand 2 (j = 1) of the second.
        assert_eq!(s.eval(3).unwrap(), int(2));
        assert_eq!(s.eval(5).unwrap(), int(1));
    }

    #[test]
    fn half_powers_multiply() {
        let h = SymbolicSequence::from_strand(st(&[(int(1), rat(1, 2))]));
        let p = h.mul(&h).unwrap();
        for k in 1..=100 {
            assert_eq!(p.eval(k).unwrap(), rat(1, k as i64));
        }
    }

    #[test]
    fn eval_with_exception_and_strand() {
        let s = SymbolicSequence::from_strand(st(&[inv(int(1), 1)]))
            .with_exception(3, int(7))
            .unwrap();
        assert_eq!(s.eval(3).unwrap(), int(7));
        assert_eq!(s.eval(5).unwrap(), rat(1, 5));
        let t = SymbolicSequence::from_strands(vec![Strand::zero(), st(&[inv(int(2), 0), inv(int(3), 2)])]);
        assert_eq!(t.eval(4).unwrap(), rat(11, 4));
    }

    #[test]
    fn limits_and_decay() {
        let s = SymbolicSequence::from_strands(vec![
            Strand::constant(int(2)),
            st(&[inv(int(2), 0), inv(int(1), 2)]),
            st(&[inv(int(1), 1)]),
        ]);
        assert_eq!(s.limit_points(), [int(0), int(2)].into_iter().collect());
        assert!(!s.tends_to_zero());
        let t = SymbolicSequence::from_strands(vec![st(&[inv(int(1), 1)]), st(&[inv(int(1), 3)])])
            .with_exception(7, int(5))
            .unwrap();
        assert!(t.tends_to_zero());
    }

    #[test]
    fn count_below_boundary() {
        let s = SymbolicSequence::from_strand(st(&[inv(int(1), 0), inv(int(-1), 1)]));
        assert!(matches!(s.count_below(&int(1)).unwrap(), CountResult::Infinite { witness_strand: 0, .. }));
        let c = SymbolicSequence::constant(int(1));
        assert_eq!(
            c.count_below(&rat(1, 2)).unwrap(),
            CountResult::Finite {
                count: 0,
                indices: vec![]
            }
        );
        let h = SymbolicSequence::from_strand(st(&[inv(int(1), 1)]));
        let set = h.below_set(&rat(1, 10)).unwrap();
        assert!(!set.contains(9) && set.contains(10));
        assert!(h.count_below(&int(0)).is_err());
        // Strand approaching 1 from above is excluded at eps = 1.
        let above = SymbolicSequence::from_strand(st(&[inv(int(1), 0), inv(int(1), 1)]));
        assert!(above.count_below(&int(1)).unwrap().is_finite());
        // A strand identically equal to eps is cofinal.
        assert!(!c.count_below(&int(1)).unwrap().is_finite());
    }

    #[test]
    fn zero_sets() {
        let z = SymbolicSequence::zero().zero_set().unwrap();
        assert_eq!((z.indices, z.zero_strands), (vec![], vec![0]));
        let s = SymbolicSequence::from_strand(st(&[inv(int(1), 0), inv(int(-1), 1)]));
        assert_eq!(s.zero_set().unwrap().indices, vec![1]);
        let q = SymbolicSequence::from_strand(st(&[inv(int(1), 0), inv(int(-3), 1), inv(int(2), 2)]));
        let zs = q.zero_set().unwrap();
        assert_eq!(zs.indices, vec![1, 2]);
        for k in 1..=10 * zs.scan_bound + 100 {
            assert_eq!(q.eval(k).unwrap().is_zero(), zs.indices.contains(&k));
        }
    }

    #[test]
    fn refine_examples() {
        let a = SymbolicSequence::from_strands(vec![st(&[inv(int(1), 1)]), st(&[inv(int(3), 0), inv(int(-1), 2)])]);
        let r = a.refine(4);
        assert_eq!(r.modulus(), 4);
        for k in 1..=100 {
            assert_eq!(r.eval(k).unwrap(), a.eval(k).unwrap());
        }
        let out = SymbolicSequence::refine_common(std::slice::from_ref(&a));
        assert_eq!(out[0], a);
    }

    #[test]
    fn display_uses_dsl_syntax() {
        let s = SymbolicSequence::from_strands(vec![st(&[inv(int(2), 0), inv(int(-3), 2)]), Strand::zero()])
            .with_exception(4, rat(-1, 2))
            .unwrap();
        assert_eq!(s.to_string(), "seq mod 2 { strand 0: 2 - 3*j^-2; except 4 -> -1/2; }");
    }
}
