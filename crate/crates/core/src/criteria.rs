//! Decision procedures with re-checkable certificates.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{CriteriaError, ModelError};
use crate::json;
use crate::numeric::{
    eigh, gap_above, gram_embedding, lambda_min, random::gaussian_complex, random::orthonormalize, CMatrix,
    HermitianMatrix, Tolerances, C64,
};
use crate::operator::{
    epsilon_core, essential_spectrum, kernel_core, op_sum, product_is_compact, product_limits, truncate,
    EpsilonCoreReport, ModelOperator,
};
use crate::rational::{abs, dyadic_floor, from_u64, half, lcm_u64, Rational};
use crate::seq::{global_index, IndexSet, SymbolicSequence};

/// Largest index a singular schedule may reach by default.
pub const DEFAULT_SCHEDULE_BUDGET: u64 = 1_000_000_000;

/// A decision result that can explain itself.
pub trait Certified {
    /// Short verdict label.
    fn verdict(&self) -> String;
    /// Whether the asserted property held.
    fn holds(&self) -> bool;
    fn certificate(&self) -> Value;
}

fn require_block_free(ops: &[ModelOperator]) -> Result<(), CriteriaError> {
    if ops.is_empty() {
        return Err(ModelError::Empty.into());
    }
    match ops.iter().find(|o| o.block().is_some()) {
        Some(o) => Err(ModelError::BlockNotSupported(o.label().to_string()).into()),
        None => Ok(()),
    }
}

fn common_modulus(ops: &[ModelOperator]) -> usize {
    ops.iter().fold(1u64, |acc, o| lcm_u64(acc, o.diag().modulus() as u64)) as usize
}

/// Limits of every operator on strand `r` of the common modulus `m`.
fn limits_on(ops: &[ModelOperator], r: usize) -> Vec<Rational> {
    ops.iter()
        .map(|o| {
            let d = o.diag();
            d.strands()[r % d.modulus()].limit()
        })
        .collect()
}

fn max_abs(values: &[Rational]) -> Rational {
    values.iter().map(abs).max().unwrap_or_else(Rational::zero)
}

fn labels(ops: &[ModelOperator]) -> Vec<&str> {
    ops.iter().map(ModelOperator::label).collect()
}

fn failing_pairs(ops: &[ModelOperator]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            if !product_is_compact(&ops[i], &ops[j]) {
                out.push((i + 1, j + 1));
            }
        }
    }
    out
}

fn require_hypotheses(ops: &[ModelOperator]) -> Result<(), CriteriaError> {
    let bad = failing_pairs(ops);
    if bad.is_empty() {
        return Ok(());
    }
    let names: Vec<String> = bad
        .iter()
        .map(|&(i, j)| format!("{}*{}", ops[i - 1].label(), ops[j - 1].label()))
        .collect();
    Err(CriteriaError::HypothesisViolation(format!("non-compact products: {}", names.join(", "))))
}

/// Exact `|s(k)| <= eps`, including irrational values.
fn within(s: &SymbolicSequence, k: u64, eps: &Rational) -> bool {
    s.sign_minus(k, eps) != Ordering::Greater && s.sign_minus(k, &-eps) != Ordering::Less
}

/// A positive rational lower bound for `|s(k)|`, or zero when `s(k) = 0`.
fn abs_lower_bound(s: &SymbolicSequence, k: u64) -> Result<Rational, CriteriaError> {
    if s.sign_minus(k, &Rational::zero()) == Ordering::Equal {
        return Ok(Rational::zero());
    }
    let mut bits = 32;
    loop {
        let (lo, hi) = s.eval_bounds(k, bits)?;
        if lo.is_positive() {
            return Ok(lo);
        }
        if hi.is_negative() {
            return Ok(-hi);
        }
        bits *= 2;
    }
}

// ---------------------------------------------------------------- hypotheses

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub labels: Vec<String>,
    /// One-based pairs whose product is not compact.
    pub failing: Vec<(usize, usize)>,
    pub pairs_checked: usize,
}

pub fn check_hypotheses(ops: &[ModelOperator]) -> Result<HypothesisReport, CriteriaError> {
    if ops.len() < 2 {
        return Err(CriteriaError::InvalidArgument("at least two operators are required".into()));
    }
    Ok(HypothesisReport {
        labels: labels(ops).iter().map(|s| s.to_string()).collect(),
        failing: failing_pairs(ops),
        pairs_checked: ops.len() * (ops.len() - 1) / 2,
    })
}

impl Certified for HypothesisReport {
    fn verdict(&self) -> String {
        if self.holds() { "Pass" } else { "Fail" }.into()
    }

    fn holds(&self) -> bool {
        self.failing.is_empty()
    }

    fn certificate(&self) -> Value {
        json!({
            "pairs_checked": self.pairs_checked,
            "failing_pairs": self.failing.iter().map(|&(i, j)| json!([i, j])).collect::<Vec<_>>(),
        })
    }
}

// ---------------------------------------------------------------- sum against union

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremAReport {
    /// `σ_e(Σ A_i) ∖ {0}`.
    pub sum_side: BTreeSet<Rational>,
    /// `∪ σ_e(A_i) ∖ {0}`.
    pub union_side: BTreeSet<Rational>,
}

pub fn check_theorem_a(ops: &[ModelOperator]) -> Result<TheoremAReport, CriteriaError> {
    if ops.is_empty() {
        return Err(ModelError::Empty.into());
    }
    require_hypotheses(ops)?;
    let zero = Rational::zero();
    let mut sum_side = essential_spectrum(&op_sum(ops)?)?.essential_points;
    sum_side.remove(&zero);
    let mut union_side = BTreeSet::new();
    for o in ops {
        union_side.extend(essential_spectrum(o)?.essential_points);
    }
    union_side.remove(&zero);
    Ok(TheoremAReport { sum_side, union_side })
}

impl Certified for TheoremAReport {
    fn verdict(&self) -> String {
        if self.holds() { "Equal" } else { "NotEqual" }.into()
    }

    fn holds(&self) -> bool {
        self.sum_side == self.union_side
    }

    fn certificate(&self) -> Value {
        json!({
            "sum_essential_nonzero": json::rat_set(&self.sum_side),
            "union_essential_nonzero": json::rat_set(&self.union_side),
        })
    }
}

// ---------------------------------------------------------------- zero in the essential spectrum

#[derive(Debug, Clone, PartialEq)]
pub enum ZeroEssential {
    /// Every operator has limit 0 on `witness_strand`, so `H_ε` is infinite for every `ε`.
    InEssential { witness_strand: usize },
    /// `dim H_eps` is finite.
    NotInEssential { eps: Rational, core: EpsilonCoreReport },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroEssentialReport {
    pub modulus: usize,
    /// `max_i |lim_i|` on each strand of the common modulus.
    pub strand_max_limits: Vec<Rational>,
    pub result: ZeroEssential,
    /// `0 ∈ σ_e(Σ A_i)` computed from the sum directly.
    pub oracle_in_essential: bool,
}

impl ZeroEssentialReport {
    pub fn in_essential(&self) -> bool {
        matches!(self.result, ZeroEssential::InEssential { .. })
    }

    pub fn witness_strand(&self) -> Option<usize> {
        match self.result {
            ZeroEssential::InEssential { witness_strand } => Some(witness_strand),
            ZeroEssential::NotInEssential { .. } => None,
        }
    }
}

/// `0 ∈ σ_e(Σ A_i)` from the strand limits of the sum.
fn zero_in_sum_essential(ops: &[ModelOperator], m: usize) -> Result<bool, CriteriaError> {
    let zero = Rational::zero();
    match op_sum(ops) {
        Ok(sum) => Ok(essential_spectrum(&sum)?.essential_points.contains(&zero)),
        Err(ModelError::Seq(_)) => Ok((0..m).any(|r| limits_on(ops, r).iter().sum::<Rational>().is_zero())),
        Err(e) => Err(e.into()),
    }
}

pub fn check_zero_essential(ops: &[ModelOperator]) -> Result<ZeroEssentialReport, CriteriaError> {
    require_block_free(ops)?;
    require_hypotheses(ops)?;
    let m = common_modulus(ops);
    let maxima: Vec<Rational> = (0..m).map(|r| max_abs(&limits_on(ops, r))).collect();
    let oracle = zero_in_sum_essential(ops, m)?;
    let result = match maxima.iter().position(Rational::is_zero) {
        Some(r) => ZeroEssential::InEssential { witness_strand: r },
        None => {
            let eps = half(maxima.iter().min().expect("at least one strand"));
            let core = epsilon_core(ops, &eps)?;
            if !core.is_finite() {
                return Err(CriteriaError::OracleMismatch(format!("H_{eps} is infinite although every strand limit is nonzero")));
            }
            ZeroEssential::NotInEssential { eps, core }
        }
    };
    let report = ZeroEssentialReport {
        modulus: m,
        strand_max_limits: maxima,
        result,
        oracle_in_essential: oracle,
    };
    if report.in_essential() != oracle {
        return Err(CriteriaError::OracleMismatch(format!(
            "criterion says in_essential={}, essential spectrum of the sum says {}",
            report.in_essential(),
            oracle
        )));
    }
    Ok(report)
}

impl Certified for ZeroEssentialReport {
    fn verdict(&self) -> String {
        if self.in_essential() { "InEssential" } else { "NotInEssential" }.into()
    }

    fn holds(&self) -> bool {
        self.in_essential() == self.oracle_in_essential
    }

    fn certificate(&self) -> Value {
        let mut v = json!({
            "modulus": self.modulus,
            "strand_max_limits": json::rats(&self.strand_max_limits),
            "oracle_zero_in_sum_essential": self.oracle_in_essential,
        });
        match &self.result {
            ZeroEssential::InEssential { witness_strand } => {
                v["type"] = json!("witness_strand");
                v["strand"] = json!(witness_strand);
            }
            ZeroEssential::NotInEssential { eps, core } => {
                v["type"] = json!("eps");
                v["eps"] = json::rat(eps);
                v["dim_h_eps"] = json::count_result(&core.dimension);
            }
        }
        json::type_first(v)
    }
}

// ---------------------------------------------------------------- singular schedule

#[derive(Debug, Clone, PartialEq)]
pub struct SingularSchedule {
    /// `k_m` for `m = 1, 2, …`.
    pub index_schedule: Vec<u64>,
    /// Number of operators `N`; `|Σ_i diag_i(k_m)| <= N/m`.
    pub bound_constant: usize,
    pub witness_strand: usize,
    pub modulus: usize,
}

impl SingularSchedule {
    /// Re-checks `|diag_i(k_m)| <= 1/m` exactly; returns the first failing `m`.
    pub fn first_violation(&self, ops: &[ModelOperator]) -> Option<usize> {
        let increasing = self.index_schedule.windows(2).all(|w| w[0] < w[1]);
        (1..=self.index_schedule.len()).find(|&m| {
            let k = self.index_schedule[m - 1];
            let bound = Rational::new(1.into(), (m as u64).into());
            !increasing || ops.iter().any(|o| !within(o.diag(), k, &bound))
        })
    }
}

impl Certified for SingularSchedule {
    fn verdict(&self) -> String {
        "Valid".into()
    }

    fn holds(&self) -> bool {
        true
    }

    fn certificate(&self) -> Value {
        json!({
            "index_schedule": json::indices(&self.index_schedule),
            "bound_constant": self.bound_constant,
            "witness_strand": self.witness_strand,
            "modulus": self.modulus,
        })
    }
}

pub fn build_singular_schedule(ops: &[ModelOperator], length: usize, budget: u64) -> Result<SingularSchedule, CriteriaError> {
    if length == 0 {
        return Err(CriteriaError::InvalidArgument("schedule length must be positive".into()));
    }
    let report = check_zero_essential(ops)?;
    let Some(r) = report.witness_strand() else {
        return Err(CriteriaError::HypothesisViolation("0 is not in the essential spectrum of the sum".into()));
    };
    let big_m = report.modulus;
    let mut schedule = Vec::with_capacity(length);
    let mut next_j = 1u64;
    for m in 1..=length {
        let eps = Rational::new(1.into(), (m as u64).into());
        let cutoff = (1.0 + 1e-9) / m as f64;
        let qualifies = |k: u64| {
            ops.iter().all(|o| o.diag().eval_f64(k).abs() <= cutoff) && ops.iter().all(|o| within(o.diag(), k, &eps))
        };
        // A short direct scan usually succeeds; otherwise jump with the exact strand sets.
        let mut found = None;
        for j in next_j..next_j + 8 {
            let k = global_index(big_m, r, j);
            if k > budget {
                return Err(CriteriaError::ExhaustedWitness(budget));
            }
            if qualifies(k) {
                found = Some(j);
                break;
            }
        }
        let j = match found {
            Some(j) => j,
            None => {
                let mut allowed = crate::seq::JSet::all();
                for o in ops {
                    let d = o.diag();
                    let mi = d.modulus();
                    let s = (big_m / mi) as u64;
                    let offset = (r / mi) as i64 + 1 - s as i64;
                    allowed = allowed.intersect(&d.strand_below(r % mi, &eps)?.pull_back(s, offset));
                }
                let mut j = next_j + 8;
                loop {
                    j = allowed.first_at_least(j).ok_or(CriteriaError::ExhaustedWitness(budget))?;
                    let k = global_index(big_m, r, j);
                    if k > budget {
                        return Err(CriteriaError::ExhaustedWitness(budget));
                    }
                    if ops.iter().all(|o| within(o.diag(), k, &eps)) {
                        break j;
                    }
                    j += 1;
                }
            }
        };
        schedule.push(global_index(big_m, r, j));
        next_j = j + 1;
    }
    let out = SingularSchedule {
        index_schedule: schedule,
        bound_constant: ops.len(),
        witness_strand: r,
        modulus: big_m,
    };
    if let Some(m) = out.first_violation(ops) {
        return Err(CriteriaError::OracleMismatch(format!("schedule entry {m} fails its bound")));
    }
    Ok(out)
}

// ---------------------------------------------------------------- closedness

#[derive(Debug, Clone, PartialEq)]
pub enum Closedness {
    Closed {
        /// Half the smallest positive strand max-limit (1 if there is none).
        eps: Rational,
        /// `H_eps`.
        core: IndexSet,
        /// `H_0`.
        kernel: IndexSet,
        /// `H_eps ∖ H_0`, always finite here.
        excess: Vec<u64>,
        /// A threshold with `H_exact_eps = H_0` exactly.
        exact_eps: Rational,
        /// Lower bound of `Σ diag_i²` off `H_0`: `exact_eps²`.
        coercivity: Rational,
        /// `δ² = coercivity / (2N)`; `H_δ = H_0` is re-verified.
        delta_sq: Rational,
    },
    NotClosed {
        witness_strand: usize,
        /// One-based index of an operator that is not identically zero on the witness strand.
        nonzero_operator: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosednessVerdict {
    pub modulus: usize,
    pub strand_max_limits: Vec<Rational>,
    pub result: Closedness,
}

impl ClosednessVerdict {
    pub fn is_closed(&self) -> bool {
        matches!(self.result, Closedness::Closed { .. })
    }

    /// The index set of `Σ Ran A_i` (closure), the complement of `H_0`.
    pub fn range_indices(&self) -> Option<IndexSet> {
        match &self.result {
            Closedness::Closed { kernel, .. } => Some(kernel.complement()),
            Closedness::NotClosed { .. } => None,
        }
    }
}

impl Certified for ClosednessVerdict {
    fn verdict(&self) -> String {
        if self.is_closed() { "Closed" } else { "NotClosed" }.into()
    }

    fn holds(&self) -> bool {
        true
    }

    fn certificate(&self) -> Value {
        let mut v = json!({
            "modulus": self.modulus,
            "strand_max_limits": json::rats(&self.strand_max_limits),
        });
        match &self.result {
            Closedness::Closed {
                eps,
                core,
                kernel,
                excess,
                exact_eps,
                coercivity,
                delta_sq,
            } => {
                v["type"] = json!("eps");
                v["eps"] = json::rat(eps);
                v["h_eps"] = json::index_set(core);
                v["h_0"] = json::index_set(kernel);
                v["finite_excess"] = json::indices(excess);
                v["exact_eps"] = json::rat(exact_eps);
                v["coercivity_lower_bound"] = json::rat(coercivity);
                v["delta_squared"] = json::rat(delta_sq);
                v["range_indices"] = json::index_set(&kernel.complement());
            }
            Closedness::NotClosed {
                witness_strand,
                nonzero_operator,
            } => {
                v["type"] = json!("witness_strand");
                v["strand"] = json!(witness_strand);
                v["nonzero_operator"] = json!(nonzero_operator);
            }
        }
        json::type_first(v)
    }
}

fn squares(ops: &[ModelOperator]) -> Vec<ModelOperator> {
    ops.iter()
        .map(|o| ModelOperator::new(format!("{}^2", o.label()), o.diag().square()))
        .collect()
}

/// The closedness criterion without the compact-product check.
fn closedness(ops: &[ModelOperator]) -> Result<ClosednessVerdict, CriteriaError> {
    require_block_free(ops)?;
    let m = common_modulus(ops);
    let maxima: Vec<Rational> = (0..m).map(|r| max_abs(&limits_on(ops, r))).collect();
    for (r, mx) in maxima.iter().enumerate() {
        if !mx.is_zero() {
            continue;
        }
        for (i, o) in ops.iter().enumerate() {
            let d = o.diag();
            if !d.strands()[r % d.modulus()].is_identically_zero()? {
                return Ok(ClosednessVerdict {
                    modulus: m,
                    strand_max_limits: maxima,
                    result: Closedness::NotClosed {
                        witness_strand: r,
                        nonzero_operator: i + 1,
                    },
                });
            }
        }
    }
    let eps = maxima.iter().filter(|x| x.is_positive()).min().map_or_else(Rational::one, half);
    let kernel = kernel_core(ops)?.core;
    let core = epsilon_core(ops, &eps)?.core;
    let excess = core
        .difference(&kernel)
        .members()
        .ok_or_else(|| CriteriaError::OracleMismatch("H_eps minus H_0 is infinite on a closed family".into()))?;
    let mut exact_eps = eps.clone();
    for &k in &excess {
        let mut best = Rational::zero();
        for o in ops {
            best = best.max(abs_lower_bound(o.diag(), k)?);
        }
        if best.is_zero() {
            return Err(CriteriaError::OracleMismatch(format!("index {k} lies outside H_0 but every value vanishes")));
        }
        exact_eps = exact_eps.min(half(&best));
    }
    if !epsilon_core(ops, &exact_eps)?.core.same_set(&kernel) {
        return Err(CriteriaError::OracleMismatch(format!("H_{exact_eps} differs from H_0")));
    }
    let coercivity = &exact_eps * &exact_eps;
    let delta_sq = effective_delta(&coercivity, ops.len())?;
    if !epsilon_core(&squares(ops), &delta_sq)?.core.same_set(&kernel) {
        return Err(CriteriaError::OracleMismatch("H_delta differs from H_0".into()));
    }
    Ok(ClosednessVerdict {
        modulus: m,
        strand_max_limits: maxima,
        result: Closedness::Closed {
            eps,
            core,
            kernel,
            excess,
            exact_eps,
            coercivity,
            delta_sq,
        },
    })
}

pub fn check_sum_ranges_closed(ops: &[ModelOperator]) -> Result<ClosednessVerdict, CriteriaError> {
    require_block_free(ops)?;
    require_hypotheses(ops)?;
    closedness(ops)
}

/// `δ² = eps / (2N)`.
pub fn effective_delta(eps: &Rational, n_ops: usize) -> Result<Rational, CriteriaError> {
    if !eps.is_positive() || n_ops == 0 {
        return Err(CriteriaError::InvalidArgument("eps must be positive and the operator count at least 1".into()));
    }
    Ok(eps / from_u64(2 * n_ops as u64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeClosedReport {
    pub closed: bool,
    pub zero_accumulation: bool,
    pub verdict: ClosednessVerdict,
}

pub fn check_range_closed_single(op: &ModelOperator) -> Result<RangeClosedReport, CriteriaError> {
    require_block_free(std::slice::from_ref(op))?;
    let spectrum = essential_spectrum(op)?;
    let verdict = closedness(std::slice::from_ref(op))?;
    let closed = !spectrum.zero_accumulation;
    if closed != verdict.is_closed() {
        return Err(CriteriaError::OracleMismatch(format!(
            "zero accumulation says closed={closed}, closedness criterion says {}",
            verdict.is_closed()
        )));
    }
    Ok(RangeClosedReport {
        closed,
        zero_accumulation: spectrum.zero_accumulation,
        verdict,
    })
}

impl Certified for RangeClosedReport {
    fn verdict(&self) -> String {
        if self.closed { "Closed" } else { "NotClosed" }.into()
    }

    fn holds(&self) -> bool {
        true
    }

    fn certificate(&self) -> Value {
        let mut v = self.verdict.certificate();
        v["zero_accumulation"] = json!(self.zero_accumulation);
        v
    }
}

// ---------------------------------------------------------------- grouped closedness

#[derive(Debug, Clone, PartialEq)]
pub struct GroupedReport {
    /// `B_p = Σ_i A_{p,i}²`.
    pub reduced: Vec<ModelOperator>,
    /// Per-group exact thresholds with `E_{B_p}([−t, t]) = Ker B_p`.
    pub group_eps: Vec<Rational>,
    /// The common `ε`; `ε/2` is the smallest group threshold.
    pub eps: Rational,
    pub joint_core: IndexSet,
    pub joint_kernel: IndexSet,
    pub closed: bool,
    /// The stage that failed, if any.
    pub failed_stage: Option<String>,
}

pub fn check_grouped_closed(groups: &[Vec<ModelOperator>]) -> Result<GroupedReport, CriteriaError> {
    if groups.is_empty() || groups.iter().any(Vec::is_empty) {
        return Err(CriteriaError::InvalidArgument("every group needs at least one operator".into()));
    }
    for g in groups {
        require_block_free(g)?;
    }
    for p in 0..groups.len() {
        for q in p + 1..groups.len() {
            for a in &groups[p] {
                for b in &groups[q] {
                    if !product_is_compact(a, b) {
                        return Err(CriteriaError::HypothesisViolation(format!(
                            "product {}*{} of groups {} and {} is not compact",
                            a.label(),
                            b.label(),
                            p + 1,
                            q + 1
                        )));
                    }
                }
            }
        }
    }
    for (p, g) in groups.iter().enumerate() {
        if !closedness(g)?.is_closed() {
            return Err(CriteriaError::HypothesisViolation(format!("sum of ranges in group {} is not closed", p + 1)));
        }
    }
    let mut reduced = Vec::with_capacity(groups.len());
    for (p, g) in groups.iter().enumerate() {
        let sq: Vec<SymbolicSequence> = g.iter().map(|o| o.diag().square()).collect();
        reduced.push(ModelOperator::new(format!("B{}", p + 1), crate::seq::seq_sum(&sq)?));
    }
    let mut group_eps = Vec::with_capacity(groups.len());
    for b in &reduced {
        match closedness(std::slice::from_ref(b))?.result {
            Closedness::Closed { exact_eps, .. } => group_eps.push(exact_eps),
            Closedness::NotClosed { .. } => {
                return Err(CriteriaError::OracleMismatch(format!("{} has no spectral gap at 0", b.label())));
            }
        }
    }
    let half_eps = group_eps.iter().min().expect("nonempty").clone();
    for b in &reduced {
        let one = std::slice::from_ref(b);
        if !epsilon_core(one, &half_eps)?.core.same_set(&kernel_core(one)?.core) {
            return Err(CriteriaError::OracleMismatch(format!("E_{}([-eps/2, eps/2]) differs from its kernel", b.label())));
        }
    }
    let joint_core = epsilon_core(&reduced, &half_eps)?.core;
    let joint_kernel = kernel_core(&reduced)?.core;
    let closed = joint_core.same_set(&joint_kernel);
    let flat: Vec<ModelOperator> = groups.iter().flatten().cloned().collect();
    if closedness(&flat)?.is_closed() != closed {
        return Err(CriteriaError::OracleMismatch("grouped pipeline disagrees with the flat closedness criterion".into()));
    }
    Ok(GroupedReport {
        reduced,
        group_eps,
        eps: &half_eps + &half_eps,
        joint_core,
        joint_kernel,
        closed,
        failed_stage: (!closed).then(|| "joint core differs from joint kernel".to_string()),
    })
}

impl Certified for GroupedReport {
    fn verdict(&self) -> String {
        if self.closed { "Closed" } else { "NotClosed" }.into()
    }

    fn holds(&self) -> bool {
        self.closed
    }

    fn certificate(&self) -> Value {
        json!({
            "reduced_operators": self.reduced.iter().map(|b| json!({
                "label": b.label(),
                "diag": b.diag().to_string(),
            })).collect::<Vec<_>>(),
            "group_eps": json::rats(&self.group_eps),
            "eps": json::rat(&self.eps),
            "joint_h_half_eps": json::index_set(&self.joint_core),
            "joint_h_0": json::index_set(&self.joint_kernel),
            "failed_stage": self.failed_stage,
        })
    }
}

// ---------------------------------------------------------------- finite dimensional results

#[derive(Debug, Clone, PartialEq)]
pub struct CoercivityReport {
    pub lambda_min: f64,
    pub samples: usize,
    /// Smallest observed `Σ‖B_i^* x‖² / ‖x‖²`.
    pub min_ratio: f64,
    /// Samples with `Σ‖B_i^* x‖² < λ_min‖x‖²` beyond rounding.
    pub violations: usize,
    pub surjective: bool,
}

fn common_rows(mats: &[CMatrix]) -> Result<usize, CriteriaError> {
    let n = mats.first().ok_or(crate::error::NumericError::Empty)?.rows();
    for m in mats {
        if m.rows() != n {
            return Err(crate::error::NumericError::DimensionMismatch {
                expected: n,
                found: m.rows(),
            }
            .into());
        }
    }
    Ok(n)
}

fn gram_sum(mats: &[CMatrix], n: usize) -> HermitianMatrix {
    mats.iter()
        .fold(HermitianMatrix::zeros(n), |acc, b| acc.add(&HermitianMatrix::gram_of(b)))
}

/// `λ_min(Σ B_i B_i^*)` together with a sampled check of `Σ‖B_i^* x‖² ≥ λ_min‖x‖²`.
pub fn coercivity_constant<R: Rng>(
    mats: &[CMatrix],
    samples: usize,
    tol: &Tolerances,
    rng: &mut R,
) -> Result<CoercivityReport, CriteriaError> {
    let n = common_rows(mats)?;
    let g = gram_sum(mats, n);
    let lmin = lambda_min(&g)?;
    let scale = g.frobenius_norm().max(1.0);
    let mut min_ratio = f64::INFINITY;
    let mut violations = 0;
    for _ in 0..samples {
        let x: Vec<C64> = (0..n).map(|_| gaussian_complex(rng)).collect();
        let nx: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        let total: f64 = mats
            .iter()
            .map(|b| b.adjoint().mul_vec(&x).iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum();
        let ratio = total / nx;
        min_ratio = min_ratio.min(ratio);
        if ratio < lmin - 1e-9 * scale {
            violations += 1;
        }
    }
    Ok(CoercivityReport {
        lambda_min: lmin,
        samples,
        min_ratio,
        violations,
        surjective: lmin > tol.rank * scale,
    })
}

impl Certified for CoercivityReport {
    fn verdict(&self) -> String {
        if self.surjective { "Surjective" } else { "NotSurjective" }.into()
    }

    fn holds(&self) -> bool {
        self.violations == 0
    }

    fn certificate(&self) -> Value {
        json!({
            "lambda_min": json::float(self.lambda_min),
            "samples": self.samples,
            "min_sampled_ratio": json::float(self.min_ratio),
            "violations": self.violations,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangesEqReport {
    pub rank_stacked: usize,
    pub rank_gram: usize,
    pub max_residual: f64,
    /// A basis vector of one space that the other space misses.
    pub violating: Option<Vec<C64>>,
}

/// Column space of `[B_1 … B_N]` against the range of `Σ B_i B_i^*`.
pub fn corollary_ranges_eq(mats: &[CMatrix], tol: &Tolerances) -> Result<RangesEqReport, CriteriaError> {
    let n = common_rows(mats)?;
    let stacked: Vec<Vec<C64>> = mats.iter().flat_map(|b| (0..b.cols()).map(|j| b.column(j))).collect();
    let col_norm = stacked.iter().map(|v| crate::numeric::norm(v)).fold(0.0, f64::max);
    let span_a = orthonormalize(
        &stacked.iter().filter(|v| crate::numeric::norm(v) > tol.rank * col_norm).cloned().collect::<Vec<_>>(),
        tol.rank,
    );
    let e = eigh(&gram_sum(mats, n))?;
    // Singular values of the stacked matrix recomputed along each eigenvector.
    let sigma: Vec<f64> = (0..n)
        .map(|j| {
            let v = e.vectors.column(j);
            mats.iter()
                .map(|b| b.adjoint().mul_vec(&v).iter().map(|z| z.norm_sqr()).sum::<f64>())
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let span_b: Vec<Vec<C64>> = (0..n)
        .filter(|&j| smax > 0.0 && sigma[j] > tol.rank * smax)
        .map(|j| e.vectors.column(j))
        .collect();
    let residual = |v: &[C64], basis: &[Vec<C64>]| -> f64 {
        let mut r = v.to_vec();
        for b in basis {
            let p = crate::numeric::dot(b, &r);
            for (x, y) in r.iter_mut().zip(b) {
                *x -= p * y;
            }
        }
        crate::numeric::norm(&r)
    };
    let mut max_residual: f64 = 0.0;
    let mut violating = None;
    for (v, other) in span_a.iter().map(|v| (v, &span_b)).chain(span_b.iter().map(|v| (v, &span_a))) {
        let r = residual(v, other);
        max_residual = max_residual.max(r);
        if r > tol.containment && violating.is_none() {
            violating = Some(v.clone());
        }
    }
    Ok(RangesEqReport {
        rank_stacked: span_a.len(),
        rank_gram: span_b.len(),
        max_residual,
        violating,
    })
}

impl Certified for RangesEqReport {
    fn verdict(&self) -> String {
        if self.holds() { "Equal" } else { "NotEqual" }.into()
    }

    fn holds(&self) -> bool {
        self.violating.is_none() && self.rank_stacked == self.rank_gram
    }

    fn certificate(&self) -> Value {
        json!({
            "rank_stacked": self.rank_stacked,
            "rank_gram": self.rank_gram,
            "max_containment_residual": json::float(self.max_residual),
            "violating_vector": self.violating.as_ref().map(|v| v.iter().map(|z| crate::numeric::fmt_complex(*z)).collect::<Vec<_>>()),
        })
    }
}

// ---------------------------------------------------------------- projection products

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionProductReport {
    pub eps: Rational,
    pub delta: Rational,
    /// `{k : |b(k)| > eps and |c(k)| > delta}`.
    pub support: IndexSet,
    pub count: Option<u64>,
}

pub fn check_projection_product_compact(
    b: &ModelOperator,
    c_op: &ModelOperator,
    eps: &Rational,
    delta: &Rational,
) -> Result<ProjectionProductReport, CriteriaError> {
    require_block_free(&[b.clone(), c_op.clone()])?;
    if !eps.is_positive() || !delta.is_positive() {
        return Err(CriteriaError::InvalidArgument("eps and delta must be positive".into()));
    }
    if !product_is_compact(b, c_op) {
        return Err(CriteriaError::HypothesisViolation(format!("product {}*{} is not compact", b.label(), c_op.label())));
    }
    let support = b
        .diag()
        .below_set(eps)?
        .complement()
        .intersect(&c_op.diag().below_set(delta)?.complement());
    Ok(ProjectionProductReport {
        eps: eps.clone(),
        delta: delta.clone(),
        count: support.count(),
        support,
    })
}

impl Certified for ProjectionProductReport {
    fn verdict(&self) -> String {
        if self.holds() { "Finite" } else { "Infinite" }.into()
    }

    fn holds(&self) -> bool {
        self.count.is_some()
    }

    fn certificate(&self) -> Value {
        json!({
            "eps": json::rat(&self.eps),
            "delta": json::rat(&self.delta),
            "count": self.count,
            "indices": self.support.members().map(|m| json::indices(&m)),
        })
    }
}

// ---------------------------------------------------------------- projection gap

#[derive(Debug, Clone, PartialEq)]
pub struct GapCertificate {
    /// Least eigenvalue of `Σ P_i` above zero.
    pub eps: f64,
    pub delta: f64,
    pub mu: f64,
    pub ranks: Vec<usize>,
    pub sum_nonzero: Vec<f64>,
    pub gram_nonzero: Vec<f64>,
    /// Largest pairwise difference of the matched nonzero spectra.
    pub spectral_mismatch: f64,
    /// Eigenvalues of `ΓΓ^*` away from 1.
    pub rank_gram_minus_identity: usize,
}

/// Zero threshold for spectra of projection sums.
const PROJ_ZERO: f64 = 1e-9;

pub fn gram_gap(projections: &[HermitianMatrix], tol: &Tolerances) -> Result<GapCertificate, CriteriaError> {
    let gram = gram_embedding(projections, tol)?;
    let n = projections[0].dim();
    let sum = projections.iter().fold(HermitianMatrix::zeros(n), |acc, p| acc.add(p));
    let sum_vals = eigh(&sum)?.values;
    let scale = sum_vals.last().copied().unwrap_or(0.0).max(1.0);
    let eps = gap_above(&sum_vals, PROJ_ZERO * scale).ok_or(CriteriaError::NoSpectralGap)?;
    let gram_vals = if gram.matrix.dim() == 0 { Vec::new() } else { eigh(&gram.matrix)?.values };
    let sum_nonzero: Vec<f64> = sum_vals.iter().copied().filter(|&v| v > PROJ_ZERO * scale).collect();
    let gram_nonzero: Vec<f64> = gram_vals.iter().copied().filter(|&v| v > PROJ_ZERO * scale).collect();
    let spectral_mismatch = if sum_nonzero.len() == gram_nonzero.len() {
        sum_nonzero.iter().zip(&gram_nonzero).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    Ok(GapCertificate {
        eps,
        delta: eps,
        mu: eps * eps * eps,
        ranks: gram.ranks,
        rank_gram_minus_identity: gram_vals.iter().filter(|&&v| (v - 1.0).abs() > PROJ_ZERO * scale).count(),
        sum_nonzero,
        gram_nonzero,
        spectral_mismatch,
    })
}

impl Certified for GapCertificate {
    fn verdict(&self) -> String {
        "Gap".into()
    }

    fn holds(&self) -> bool {
        self.spectral_mismatch <= 1e-9
    }

    fn certificate(&self) -> Value {
        json!({
            "eps": json::float(self.eps),
            "delta": json::float(self.delta),
            "mu": json::float(self.mu),
            "ranks": self.ranks,
            "rank_gram_minus_identity": self.rank_gram_minus_identity,
            "spectral_mismatch": json::float(self.spectral_mismatch),
            "sum_nonzero_spectrum": json::floats(&self.sum_nonzero),
        })
    }
}

// ---------------------------------------------------------------- the key inequality

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub eps: Rational,
    pub trunc: usize,
    /// Gap of `Σ P_i` on the truncation.
    pub delta: f64,
    /// A dyadic lower bound of `delta`.
    pub delta_lower: Rational,
    pub mu: Rational,
    pub core: EpsilonCoreReport,
    /// `{k : Σ diag_i(k)² < μ} ∖ H_eps`.
    pub violations: IndexSet,
}

pub fn verify_inequality_41(ops: &[ModelOperator], eps: &Rational, trunc: usize) -> Result<InequalityReport, CriteriaError> {
    require_block_free(ops)?;
    if !eps.is_positive() || trunc == 0 {
        return Err(CriteriaError::InvalidArgument("eps and the truncation size must be positive".into()));
    }
    let core = epsilon_core(ops, eps)?;
    if !core.is_finite() {
        return Err(CriteriaError::InfiniteCore);
    }
    // Diagonal truncations of E_{A_i}(ℝ ∖ [−eps, eps]).
    let mut sum = vec![0.0; trunc];
    for o in ops {
        for (k, s) in (1..=trunc as u64).zip(sum.iter_mut()) {
            if !within(o.diag(), k, eps) {
                *s += 1.0;
            }
        }
    }
    let values = eigh(&HermitianMatrix::from_real_diagonal(&sum))?.values;
    let delta = gap_above(&values, PROJ_ZERO).ok_or(CriteriaError::NoSpectralGap)?;
    let delta_lower = dyadic_floor(delta * (1.0 - 1e-9), 30)
        .filter(Rational::is_positive)
        .ok_or(CriteriaError::NoSpectralGap)?;
    let mu = eps * eps * &delta_lower;
    let sq: Vec<SymbolicSequence> = ops.iter().map(|o| o.diag().square()).collect();
    let total = crate::seq::seq_sum(&sq)?;
    let violations = total.sign_set(&mu, |o| o == Ordering::Less)?.difference(&core.core);
    Ok(InequalityReport {
        eps: eps.clone(),
        trunc,
        delta,
        delta_lower,
        mu,
        core,
        violations,
    })
}

impl Certified for InequalityReport {
    fn verdict(&self) -> String {
        if self.holds() { "Holds" } else { "Fails" }.into()
    }

    fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    fn certificate(&self) -> Value {
        json!({
            "eps": json::rat(&self.eps),
            "numeric_assisted": true,
            "truncation": self.trunc,
            "delta": json::float(self.delta),
            "delta_lower": json::rat(&self.delta_lower),
            "mu": json::rat(&self.mu),
            "h_eps": json::count_result(&self.core.dimension),
            "violations": json::count_result(&crate::seq::CountResult::from_set(&self.violations)),
        })
    }
}

// ---------------------------------------------------------------- singular sequence transfer

/// A schedule singular for `op` at `lambda`: `|diag(k_m) − λ| <= 1/m`.
pub fn singular_schedule_at(
    op: &ModelOperator,
    lambda: &Rational,
    length: usize,
    budget: u64,
) -> Result<SingularSchedule, CriteriaError> {
    let shifted = ModelOperator::new(
        format!("{}-({})", op.label(), lambda),
        op.diag().add(&SymbolicSequence::constant(-lambda))?,
    );
    if op.block().is_some() {
        return Err(ModelError::BlockNotSupported(op.label().to_string()).into());
    }
    build_singular_schedule(std::slice::from_ref(&shifted), length, budget).map_err(|e| match e {
        CriteriaError::HypothesisViolation(_) => {
            CriteriaError::HypothesisViolation(format!("{lambda} is not in the essential spectrum of {}", op.label()))
        }
        other => other,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferReport {
    pub lambda: Rational,
    pub schedule: Vec<u64>,
    /// `‖B_1 e_{k_m}‖` on the truncation.
    pub norms: Vec<f64>,
    pub first_quarter_max: f64,
    pub last_quarter_max: f64,
}

pub fn transfer_singular(
    b1: &ModelOperator,
    b2: &ModelOperator,
    lambda: &Rational,
    schedule: &[u64],
    n: usize,
) -> Result<TransferReport, CriteriaError> {
    if lambda.is_zero() {
        return Err(CriteriaError::InvalidArgument("lambda must be nonzero".into()));
    }
    if schedule.is_empty() {
        return Err(CriteriaError::InvalidArgument("empty schedule".into()));
    }
    if !product_is_compact(b1, b2) {
        let (_, limits) = product_limits(b1, b2);
        return Err(CriteriaError::HypothesisViolation(format!(
            "product {}*{} is not compact (strand limits {})",
            b1.label(),
            b2.label(),
            limits.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", ")
        )));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) || schedule.iter().any(|&k| k == 0 || k > n as u64) {
        return Err(CriteriaError::HypothesisViolation(format!("schedule must increase within 1..={n}")));
    }
    for (m, &k) in schedule.iter().enumerate() {
        let bound = Rational::new(1.into(), ((m + 1) as u64).into());
        let d = b2.diag();
        if d.sign_minus(k, &(lambda + &bound)) == Ordering::Greater || d.sign_minus(k, &(lambda - &bound)) == Ordering::Less {
            return Err(CriteriaError::HypothesisViolation(format!(
                "schedule entry {} (index {k}) is not within 1/{} of {lambda} for {}",
                m + 1,
                m + 1,
                b2.label()
            )));
        }
    }
    let a = truncate(b1, n)?;
    let norms: Vec<f64> = schedule
        .iter()
        .map(|&k| crate::numeric::norm(&a.matrix().column(k as usize - 1)))
        .collect();
    let q = (norms.len() / 4).max(1);
    let first_quarter_max = norms[..q].iter().cloned().fold(0.0, f64::max);
    let last_quarter_max = norms[norms.len() - q..].iter().cloned().fold(0.0, f64::max);
    Ok(TransferReport {
        lambda: lambda.clone(),
        schedule: schedule.to_vec(),
        norms,
        first_quarter_max,
        last_quarter_max,
    })
}

impl Certified for TransferReport {
    fn verdict(&self) -> String {
        if self.holds() { "Decays" } else { "NotDecaying" }.into()
    }

    fn holds(&self) -> bool {
        self.last_quarter_max <= self.first_quarter_max + 1e-12
    }

    fn certificate(&self) -> Value {
        json!({
            "lambda": json::rat(&self.lambda),
            "schedule": json::indices(&self.schedule),
            "norms": json::floats(&self.norms),
            "first_quarter_max": json::float(self.first_quarter_max),
            "last_quarter_max": json::float(self.last_quarter_max),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::c;
    use crate::rational::{int, rat};
    use crate::seq::Strand;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k_pow(e: i64) -> Strand {
        Strand::power(int(1), int(e)).unwrap()
    }

    fn konst(v: Rational) -> Strand {
        Strand::constant(v)
    }

    fn one_plus_inv() -> Strand {
        Strand::from_terms(vec![(int(1), int(0)), (int(1), int(1))]).unwrap()
    }

    fn op(label: &str, strands: Vec<Strand>) -> ModelOperator {
        ModelOperator::new(label, SymbolicSequence::from_strands(strands))
    }

    fn harmonic(label: &str, e: i64) -> ModelOperator {
        op(label, vec![k_pow(e)])
    }

    fn real_matrix(rows: &[&[f64]]) -> CMatrix {
        CMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| c(x, 0.0)).collect()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn hypotheses_examples() {
        let a = op("A", vec![konst(int(1)), Strand::zero()]);
        let b = op("B", vec![Strand::zero(), konst(int(1))]);
        assert!(check_hypotheses(&[a, b]).unwrap().holds());
        let id = op("I", vec![konst(int(1))]);
        assert_eq!(check_hypotheses(&[id.clone(), id]).unwrap().failing, vec![(1, 2)]);
        let a = op("A", vec![one_plus_inv(), Strand::zero()]);
        let b = op("B", vec![k_pow(2), konst(int(1))]);
        assert!(check_hypotheses(&[a, b]).unwrap().holds());
    }

    #[test]
    fn theorem_a_examples() {
        let r = check_theorem_a(&[
            op("A", vec![one_plus_inv(), Strand::zero()]),
            op("B", vec![Strand::zero(), konst(int(1))]),
        ])
        .unwrap();
        assert!(r.holds());
        assert_eq!(r.sum_side, [int(1)].into_iter().collect());
        let r = check_theorem_a(&[harmonic("A", 1), harmonic("B", 2)]).unwrap();
        assert!(r.sum_side.is_empty() && r.holds());
        let r = check_theorem_a(&[
            op("A", vec![konst(int(2)), Strand::zero()]),
            op("B", vec![Strand::zero(), konst(int(-3))]),
        ])
        .unwrap();
        assert_eq!(r.union_side, [int(2), int(-3)].into_iter().collect());
        assert!(r.holds());
        let id = op("I", vec![konst(int(1))]);
        assert!(matches!(check_theorem_a(&[id.clone(), id]), Err(CriteriaError::HypothesisViolation(_))));
    }

    #[test]
    fn zero_essential_examples() {
        let r = check_zero_essential(&[harmonic("A", 1), harmonic("B", 2)]).unwrap();
        assert_eq!(r.witness_strand(), Some(0));
        let r = check_zero_essential(&[
            op("A", vec![one_plus_inv(), Strand::zero()]),
            op("B", vec![Strand::zero(), konst(int(1))]),
        ])
        .unwrap();
        match r.result {
            ZeroEssential::NotInEssential { eps, core } => {
                assert_eq!(eps, rat(1, 2));
                assert!(core.is_finite());
            }
            other => panic!("{other:?}"),
        }
        assert!(!r.oracle_in_essential);
        let z = op("Z", vec![Strand::zero()]);
        assert!(check_zero_essential(&[z.clone(), z]).unwrap().in_essential());
    }

    #[test]
    fn schedule_examples() {
        let s = build_singular_schedule(&[harmonic("A", 1)], 3, DEFAULT_SCHEDULE_BUDGET).unwrap();
        assert_eq!(s.index_schedule, vec![1, 2, 3]);
        let z = op("Z", vec![Strand::zero()]);
        let s = build_singular_schedule(&[z], 5, DEFAULT_SCHEDULE_BUDGET).unwrap();
        assert_eq!(s.index_schedule, vec![1, 2, 3, 4, 5]);
        let half_k = op("B", vec![Strand::power(rat(1, 2), int(1)).unwrap()]);
        let s = build_singular_schedule(&[harmonic("A", 1), half_k], 2, DEFAULT_SCHEDULE_BUDGET).unwrap();
        assert_eq!(s.index_schedule, vec![1, 2]);
        assert_eq!(s.bound_constant, 2);
    }

    #[test]
    fn schedule_on_later_strand_and_budget() {
        // Strand 0 never qualifies; strand 1 decays like 1/j².
        let a = op("A", vec![konst(int(1)), k_pow(2)]);
        let s = build_singular_schedule(&[a.clone()], 10, DEFAULT_SCHEDULE_BUDGET).unwrap();
        assert_eq!(s.witness_strand, 1);
        assert!(s.first_violation(&[a.clone()]).is_none());
        assert!(s.index_schedule.iter().all(|k| k % 2 == 0));
        let slow = harmonic("S", 1);
        assert!(matches!(
            build_singular_schedule(&[slow], 30, 20),
            Err(CriteriaError::ExhaustedWitness(20))
        ));
    }

    #[test]
    fn closedness_examples() {
        let r = check_sum_ranges_closed(&[harmonic("A", 1)]).unwrap();
        assert_eq!(r.result, Closedness::NotClosed { witness_strand: 0, nonzero_operator: 1 });
        let p = op("P", vec![konst(int(1)), Strand::zero()]);
        let r = check_sum_ranges_closed(&[p.clone()]).unwrap();
        match &r.result {
            Closedness::Closed { eps, core, kernel, excess, .. } => {
                assert_eq!(eps, &rat(1, 2));
                assert!(core.same_set(kernel));
                assert!(excess.is_empty());
                assert!(kernel.contains(2) && !kernel.contains(1));
            }
            other => panic!("{other:?}"),
        }
        assert!(r.range_indices().unwrap().contains(1));
        let q = op("Q", vec![Strand::zero(), k_pow(1)]);
        let r = check_sum_ranges_closed(&[p, q]).unwrap();
        assert_eq!(r.result, Closedness::NotClosed { witness_strand: 1, nonzero_operator: 2 });
    }

    #[test]
    fn closedness_with_finite_excess() {
        // Values 1/k on indices 1..=3 and zero afterwards.
        let d = SymbolicSequence::zero()
            .with_exception(1, int(1))
            .unwrap()
            .with_exception(2, rat(1, 2))
            .unwrap()
            .with_exception(3, rat(1, 3))
            .unwrap();
        let r = check_sum_ranges_closed(&[ModelOperator::new("F", d)]).unwrap();
        match r.result {
            Closedness::Closed { eps, excess, exact_eps, .. } => {
                assert_eq!(eps, int(1));
                assert_eq!(excess, vec![1, 2, 3]);
                assert_eq!(exact_eps, rat(1, 6));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn range_closed_single_examples() {
        assert!(!check_range_closed_single(&harmonic("A", 1)).unwrap().closed);
        assert!(check_range_closed_single(&op("P", vec![konst(int(1)), Strand::zero()])).unwrap().closed);
        let two_minus = Strand::from_terms(vec![(int(2), int(0)), (int(-1), int(1))]).unwrap();
        assert!(check_range_closed_single(&op("T", vec![two_minus])).unwrap().closed);
    }

    #[test]
    fn effective_delta_examples() {
        assert_eq!(effective_delta(&int(1), 2).unwrap(), rat(1, 4));
        assert_eq!(effective_delta(&int(2), 1).unwrap(), int(1));
        assert_eq!(effective_delta(&rat(1, 2), 4).unwrap(), rat(1, 16));
        assert!(effective_delta(&int(0), 1).is_err());
    }

    #[test]
    fn coercivity_examples() {
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = coercivity_constant(&[CMatrix::identity(3)], 100, &tol, &mut rng).unwrap();
        assert!((r.lambda_min - 1.0).abs() < 1e-12 && r.surjective && r.holds());
        let r = coercivity_constant(
            &[real_matrix(&[&[1.0, 0.0], &[0.0, 0.0]]), real_matrix(&[&[0.0, 0.0], &[0.0, 2.0]])],
            100,
            &tol,
            &mut rng,
        )
        .unwrap();
        assert!((r.lambda_min - 1.0).abs() < 1e-12);
        let r = coercivity_constant(
            &[real_matrix(&[&[1.0, 0.0], &[0.0, 0.0]]), CMatrix::zeros(2, 2)],
            100,
            &tol,
            &mut rng,
        )
        .unwrap();
        assert!(r.lambda_min.abs() < 1e-12 && !r.surjective && r.holds());
    }

    #[test]
    fn ranges_eq_examples() {
        let tol = Tolerances::default();
        let inv = real_matrix(&[&[2.0, 1.0], &[1.0, 3.0]]);
        assert!(corollary_ranges_eq(&[inv], &tol).unwrap().holds());
        let r = corollary_ranges_eq(
            &[real_matrix(&[&[1.0, 0.0], &[0.0, 0.0]]), real_matrix(&[&[0.0, 0.0], &[0.0, 1.0]])],
            &tol,
        )
        .unwrap();
        assert!(r.holds() && r.rank_stacked == 2);
        let r = corollary_ranges_eq(&[real_matrix(&[&[0.5, 0.5], &[0.5, 0.5]])], &tol).unwrap();
        assert!(r.holds());
        assert_eq!((r.rank_stacked, r.rank_gram), (1, 1));
    }

    #[test]
    fn projection_product_examples() {
        let anything = op("C", vec![konst(int(5))]);
        let r = check_projection_product_compact(&harmonic("B", 1), &anything, &rat(1, 10), &rat(1, 2)).unwrap();
        assert_eq!(r.count, Some(9));
        let z = op("Z", vec![Strand::zero()]);
        assert_eq!(check_projection_product_compact(&z, &z, &rat(1, 2), &rat(1, 2)).unwrap().count, Some(0));
        let b = op("B", vec![konst(int(1)), k_pow(1)]);
        let cc = op("C", vec![k_pow(2), konst(int(1))]);
        let r = check_projection_product_compact(&b, &cc, &rat(1, 2), &rat(1, 2)).unwrap();
        // |b| > 1/2 and |c| > 1/2: k = 1 (b = 1, c = 1) and k = 2 (b = 1, c = 1).
        assert_eq!(r.support.members(), Some(vec![1, 2]));
        let id = op("I", vec![konst(int(1))]);
        assert!(matches!(
            check_projection_product_compact(&id, &id, &rat(1, 2), &rat(1, 2)),
            Err(CriteriaError::HypothesisViolation(_))
        ));
    }

    fn rank_one(v: &[f64]) -> HermitianMatrix {
        let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let col = CMatrix::from_fn(v.len(), 1, |i, _| c(v[i] / n, 0.0));
        HermitianMatrix::gram_of(&col)
    }

    #[test]
    fn gram_gap_examples() {
        let tol = Tolerances::default();
        let r = gram_gap(&[rank_one(&[1.0, 0.0]), rank_one(&[0.0, 1.0])], &tol).unwrap();
        assert!((r.eps - 1.0).abs() < 1e-12 && r.holds());
        assert_eq!(r.rank_gram_minus_identity, 0);
        let p = rank_one(&[1.0, 1.0]);
        let r = gram_gap(&[p.clone(), p], &tol).unwrap();
        assert!((r.eps - 2.0).abs() < 1e-12 && r.holds());
        let r = gram_gap(&[rank_one(&[1.0, 0.0]), rank_one(&[3.0, 4.0])], &tol).unwrap();
        assert!((r.eps - 0.4).abs() < 1e-12);
        assert!((r.sum_nonzero[1] - 1.6).abs() < 1e-12);
        assert!(r.holds());
        assert_eq!(r.rank_gram_minus_identity, 2);
        let bad = HermitianMatrix::from_real_diagonal(&[0.5, 1.0]);
        assert!(matches!(
            gram_gap(&[bad], &tol),
            Err(CriteriaError::Numeric(crate::error::NumericError::NotAProjection(0)))
        ));
    }

    #[test]
    fn inequality_examples() {
        let r = verify_inequality_41(&[op("P", vec![konst(int(1)), Strand::zero()])], &rat(1, 2), 50).unwrap_err();
        // Strand 1 is identically zero, so H_eps is infinite.
        assert_eq!(r, CriteriaError::InfiniteCore);
        let z = op("Z", vec![Strand::zero()]);
        assert_eq!(verify_inequality_41(&[z.clone(), z], &rat(1, 2), 50).unwrap_err(), CriteriaError::InfiniteCore);
        let ops = [
            op("A", vec![one_plus_inv(), Strand::zero()]),
            op("B", vec![Strand::zero(), konst(int(1))]),
        ];
        let r = verify_inequality_41(&ops, &rat(1, 3), 100).unwrap();
        assert!(r.holds());
        assert!(r.delta_lower <= int(1) && r.delta_lower > rat(999, 1000));
        assert_eq!(r.mu, rat(1, 9) * &r.delta_lower);
    }

    #[test]
    fn inequality_finite_core() {
        // A single operator with values 1 on strand 0 and 1 - 1/(2j) on strand 1: H_{1/2} is {2}.
        let s1 = Strand::from_terms(vec![(int(1), int(0)), (rat(-1, 2), int(1))]).unwrap();
        let r = verify_inequality_41(&[op("P", vec![konst(int(1)), s1])], &rat(1, 2), 200).unwrap();
        assert_eq!(r.core.core.members(), Some(vec![2]));
        assert!(r.holds());
        assert_eq!(r.mu, rat(1, 4) * &r.delta_lower);
    }

    #[test]
    fn grouped_examples() {
        let p1 = op("P1", vec![konst(int(1)), Strand::zero()]);
        let p2 = op("P2", vec![Strand::zero(), konst(int(1))]);
        assert!(check_grouped_closed(&[vec![p1.clone()], vec![p2]]).unwrap().closed);
        assert!(check_grouped_closed(&[vec![p1]]).unwrap().closed);
        let a = op("A", vec![konst(int(1)), Strand::zero(), Strand::zero()]);
        let s = Strand::from_terms(vec![(int(1), int(0)), (rat(-1, 2), int(1))]).unwrap();
        let b = op("B", vec![Strand::zero(), s, Strand::zero()]);
        let r = check_grouped_closed(&[vec![a.clone()], vec![b.clone()]]).unwrap();
        assert!(r.closed);
        // Brute-force scan of joint membership.
        for k in 1..=10_000u64 {
            let in_core = r.joint_core.contains(k);
            let zero = a.diag().eval(k).unwrap().is_zero() && b.diag().eval(k).unwrap().is_zero();
            assert_eq!(in_core, zero, "{k}");
        }
        let bad = vec![harmonic("H", 1)];
        assert!(matches!(
            check_grouped_closed(&[bad, vec![a]]),
            Err(CriteriaError::HypothesisViolation(_))
        ));
        let id = op("I", vec![konst(int(1))]);
        assert!(matches!(
            check_grouped_closed(&[vec![id.clone()], vec![id]]),
            Err(CriteriaError::HypothesisViolation(_))
        ));
    }

    #[test]
    fn transfer_examples() {
        let b1 = harmonic("B1", 1);
        let b2 = op("B2", vec![Strand::from_terms(vec![(int(1), int(0)), (int(-1), int(1))]).unwrap()]);
        let sched: Vec<u64> = (1..=20).collect();
        let r = transfer_singular(&b1, &b2, &int(1), &sched, 20).unwrap();
        assert!(r.holds());
        assert!((r.norms[4] - 0.2).abs() < 1e-15);
        let built = singular_schedule_at(&b2, &int(1), 20, DEFAULT_SCHEDULE_BUDGET).unwrap();
        assert_eq!(built.index_schedule, sched);

        let b1 = op("B1", vec![konst(int(1)), k_pow(1)]);
        let b2 = op("B2", vec![k_pow(1), konst(int(1))]);
        let s = singular_schedule_at(&b2, &int(1), 12, DEFAULT_SCHEDULE_BUDGET).unwrap();
        assert_eq!(s.witness_strand, 1);
        let r = transfer_singular(&b1, &b2, &int(1), &s.index_schedule, 40).unwrap();
        assert!(r.holds());
        for (&k, &v) in s.index_schedule.iter().zip(&r.norms) {
            assert!((v - 2.0 / k as f64).abs() < 1e-15);
        }

        let zero_on_1 = op("B1", vec![k_pow(1), Strand::zero()]);
        let r = transfer_singular(&zero_on_1, &b2, &int(1), &s.index_schedule, 40).unwrap();
        assert!(r.norms.iter().all(|&v| v == 0.0));

        assert!(matches!(
            transfer_singular(&b1, &b2, &int(1), &[1, 5], 40),
            Err(CriteriaError::HypothesisViolation(_))
        ));
    }
}
