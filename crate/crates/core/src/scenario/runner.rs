//! Executes the checks of a parsed scenario.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::parser::MAX_DIMENSION;
use super::spec::{CheckKind, Directive, ParamValue, ScenarioSpec, TOLERANCE_NAMES};
use crate::criteria::{
    build_singular_schedule, check_grouped_closed, check_hypotheses, check_projection_product_compact,
    check_range_closed_single, check_sum_ranges_closed, check_theorem_a, check_zero_essential, coercivity_constant,
    corollary_ranges_eq, gram_gap, singular_schedule_at, transfer_singular, verify_inequality_41, Certified,
    DEFAULT_SCHEDULE_BUDGET,
};
use crate::error::{CriteriaError, NumericError};
use crate::lab::{numeric_epsilon_core, truncation_report, truncation_spectrum_convergence, weyl_experiment};
use crate::numeric::{CMatrix, HermitianMatrix, Tolerances};
use crate::operator::ModelOperator;
use crate::rational::to_f64;

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SCHEDULE_LENGTH: u64 = 50;
pub const DEFAULT_TRANSFER_LENGTH: u64 = 20;
pub const DEFAULT_SIZES: [u64; 3] = [100, 200, 400];
pub const DEFAULT_WEYL_RANK: u64 = 1;
pub const DEFAULT_WEYL_N: u64 = 200;
pub const DEFAULT_SAMPLES: u64 = 100;
pub const DEFAULT_TRUNCATE_N: u64 = 10;
pub const DEFAULT_NUMERIC_CORE_N: u64 = 50;

/// Values given on the command line; they take precedence over `set` lines.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trunc: Option<usize>,
}

/// Settings after applying defaults, `set` lines and overrides.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Resolved {
    pub fn new(spec: &ScenarioSpec, overrides: &Overrides) -> Self {
        let mut tol = Tolerances::default();
        for name in TOLERANCE_NAMES {
            if let Some(&v) = spec.settings.tolerances.get(name) {
                match name {
                    "eig" => tol.eig = v,
                    "gap" => tol.gap = v,
                    "rank" => tol.rank = v,
                    "orth" => tol.orth = v,
                    "proj" => tol.proj = v,
                    "containment" => tol.containment = v,
                    "cluster" => tol.cluster = v,
                    "jacobi_off" => tol.jacobi_off = v,
                    "jacobi_sweeps" => tol.jacobi_sweeps = v as usize,
                    _ => unreachable!("tolerance names are fixed"),
                }
            }
        }
        if let Some(t) = overrides.trunc.or(spec.settings.trunc) {
            tol.trunc = t;
        }
        Resolved {
            seed: overrides.seed.or(spec.settings.seed).unwrap_or(DEFAULT_SEED),
            tolerances: tol,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "trunc": self.tolerances.trunc,
            "tolerances": self.tolerances.to_json(),
        })
    }
}

/// The outcome class of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// The check ran and its property held.
    Ok,
    /// The check ran and its property failed.
    Violation,
    /// The inputs were outside the check's domain.
    Refused,
    /// An internal inconsistency or numerical failure.
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Violation => "violation",
            Status::Refused => "refused",
            Status::Error => "error",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub check: CheckKind,
    pub labels: Vec<String>,
    pub params: Vec<(String, ParamValue)>,
    pub status: Status,
    pub verdict: String,
    pub certificate: Value,
    pub seed: u64,
    pub elapsed_ms: f64,
}

/// The `k`-th output of a SplitMix64 stream started at `seed`.
pub fn splitmix(seed: u64, k: u64) -> u64 {
    let mut z = seed.wrapping_add(k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs every check, in parallel on `jobs` threads, keeping file order.
pub fn run(spec: &ScenarioSpec, settings: &Resolved, jobs: usize) -> Vec<CheckResult> {
    let work = || {
        spec.directives
            .par_iter()
            .enumerate()
            .map(|(i, d)| run_directive(spec, d, splitmix(settings.seed, i as u64), &settings.tolerances))
            .collect()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    }
}

pub fn run_directive(spec: &ScenarioSpec, d: &Directive, seed: u64, tol: &Tolerances) -> CheckResult {
    let start = Instant::now();
    let outcome = dispatch(spec, d, seed, tol);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let (status, verdict, certificate) = match outcome {
        Ok(c) => (
            if c.holds() { Status::Ok } else { Status::Violation },
            c.verdict(),
            c.certificate(),
        ),
        Err(e) => {
            let status = match e {
                CriteriaError::OracleMismatch(_) | CriteriaError::Numeric(NumericError::ConvergenceFailure(_)) => {
                    Status::Error
                }
                _ => Status::Refused,
            };
            let verdict = if status == Status::Error { "Error" } else { "Refused" };
            (status, verdict.to_string(), error_certificate(&e))
        }
    };
    let params = d
        .check
        .params()
        .iter()
        .filter_map(|(k, _)| d.params.get(*k).map(|v| (k.to_string(), v.clone())))
        .collect();
    CheckResult {
        check: d.check,
        labels: d.labels.clone(),
        params,
        status,
        verdict,
        certificate,
        seed,
        elapsed_ms,
    }
}

fn error_certificate(e: &CriteriaError) -> Value {
    let kind = match e {
        CriteriaError::Model(_) => "model",
        CriteriaError::Numeric(_) => "numeric",
        CriteriaError::HypothesisViolation(_) => "hypothesis_violation",
        CriteriaError::InfiniteCore => "infinite_core",
        CriteriaError::ExhaustedWitness(_) => "exhausted_witness",
        CriteriaError::NoSpectralGap => "no_spectral_gap",
        CriteriaError::OracleMismatch(_) => "oracle_mismatch",
        CriteriaError::InvalidArgument(_) => "invalid_argument",
    };
    json!({"type": "error", "kind": kind, "message": e.to_string()})
}

fn operators(spec: &ScenarioSpec, d: &Directive) -> Vec<ModelOperator> {
    d.labels
        .iter()
        .map(|l| spec.operator(l).expect("labels resolved at parse time").clone())
        .collect()
}

fn matrices(spec: &ScenarioSpec, d: &Directive) -> Vec<CMatrix> {
    d.labels
        .iter()
        .map(|l| spec.matrix(l).expect("labels resolved at parse time").to_cmatrix())
        .collect()
}

fn hermitian(spec: &ScenarioSpec, d: &Directive) -> Result<Vec<HermitianMatrix>, CriteriaError> {
    d.labels
        .iter()
        .map(|l| {
            spec.matrix(l)
                .expect("labels resolved at parse time")
                .to_hermitian()
                .ok_or_else(|| CriteriaError::InvalidArgument(format!("matrix {l} is not Hermitian")))
        })
        .collect()
}

fn dimension(n: u64) -> Result<usize, CriteriaError> {
    if n > MAX_DIMENSION {
        return Err(CriteriaError::InvalidArgument(format!(
            "truncation size {n} exceeds {MAX_DIMENSION}"
        )));
    }
    Ok(n as usize)
}

fn dispatch(
    spec: &ScenarioSpec,
    d: &Directive,
    seed: u64,
    tol: &Tolerances,
) -> Result<Box<dyn Certified>, CriteriaError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = d.int("budget").unwrap_or(DEFAULT_SCHEDULE_BUDGET);
    Ok(match d.check {
        CheckKind::Hypotheses => Box::new(check_hypotheses(&operators(spec, d))?),
        CheckKind::TheoremA => Box::new(check_theorem_a(&operators(spec, d))?),
        CheckKind::Main => Box::new(check_zero_essential(&operators(spec, d))?),
        CheckKind::Schedule => {
            let length = d.int("length").unwrap_or(DEFAULT_SCHEDULE_LENGTH) as usize;
            Box::new(build_singular_schedule(&operators(spec, d), length, budget)?)
        }
        CheckKind::Closedness => Box::new(check_sum_ranges_closed(&operators(spec, d))?),
        CheckKind::SingleRange => Box::new(check_range_closed_single(&operators(spec, d)[0])?),
        CheckKind::Coercivity => {
            let samples = d.int("samples").unwrap_or(DEFAULT_SAMPLES) as usize;
            Box::new(coercivity_constant(&matrices(spec, d), samples, tol, &mut rng)?)
        }
        CheckKind::Cor23 => Box::new(corollary_ranges_eq(&matrices(spec, d), tol)?),
        CheckKind::Lemma41 => {
            let ops = operators(spec, d);
            let eps = d.rational("eps").expect("required");
            let delta = d.rational("delta").expect("required");
            Box::new(check_projection_product_compact(&ops[0], &ops[1], eps, delta)?)
        }
        CheckKind::GramGap => Box::new(gram_gap(&hermitian(spec, d)?, tol)?),
        CheckKind::Ineq41 => {
            let trunc = d.int("trunc").map_or(tol.trunc, |t| t as usize);
            Box::new(verify_inequality_41(&operators(spec, d), d.rational("eps").expect("required"), trunc)?)
        }
        CheckKind::Grouped => {
            let groups: Vec<Vec<ModelOperator>> = d
                .labels
                .iter()
                .map(|l| {
                    spec.group(l)
                        .expect("labels resolved at parse time")
                        .into_iter()
                        .cloned()
                        .collect()
                })
                .collect();
            Box::new(check_grouped_closed(&groups)?)
        }
        CheckKind::Transfer => {
            let ops = operators(spec, d);
            let lambda = d.rational("lambda").expect("required");
            let length = d.int("length").unwrap_or(DEFAULT_TRANSFER_LENGTH) as usize;
            let schedule = singular_schedule_at(&ops[1], lambda, length, budget)?;
            let last = schedule.index_schedule.last().copied().unwrap_or(1);
            let n = dimension(d.int("n").unwrap_or((tol.trunc as u64).max(last)))?;
            Box::new(transfer_singular(&ops[0], &ops[1], lambda, &schedule.index_schedule, n)?)
        }
        CheckKind::Truncate => {
            let n = dimension(d.int("n").unwrap_or(DEFAULT_TRUNCATE_N))?;
            Box::new(truncation_report(&operators(spec, d)[0], n)?)
        }
        CheckKind::Converge => {
            let sizes: Vec<usize> = match d.list("sizes") {
                Some(s) => s.iter().map(|&n| n as usize).collect(),
                None => DEFAULT_SIZES.iter().map(|&n| n as usize).collect(),
            };
            Box::new(truncation_spectrum_convergence(&operators(spec, d)[0], &sizes, tol)?)
        }
        CheckKind::Weyl => {
            let rank = d.int("rank").unwrap_or(DEFAULT_WEYL_RANK) as usize;
            let n = dimension(d.int("n").unwrap_or(DEFAULT_WEYL_N))?;
            Box::new(weyl_experiment(&operators(spec, d)[0], rank, n, seed, &mut rng, tol)?)
        }
        CheckKind::NumericCore => {
            let eps = to_f64(d.rational("eps").expect("required"));
            let n = dimension(d.int("n").unwrap_or(DEFAULT_NUMERIC_CORE_N))?;
            Box::new(numeric_epsilon_core(&operators(spec, d), eps, n, tol)?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse;

    #[test]
    fn splitmix_matches_reference() {
        // First outputs of SplitMix64 seeded with 0.
        assert_eq!(splitmix(0, 0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix(0, 1), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn settings_precedence() {
        let spec = parse("set seed 5\nset trunc 40\nset eig 1e-9\n").unwrap();
        let r = Resolved::new(&spec, &Overrides::default());
        assert_eq!((r.seed, r.tolerances.trunc, r.tolerances.eig), (5, 40, 1e-9));
        let r = Resolved::new(&spec, &Overrides { seed: Some(9), trunc: Some(30) });
        assert_eq!((r.seed, r.tolerances.trunc), (9, 30));
        let r = Resolved::new(&ScenarioSpec::default(), &Overrides::default());
        assert_eq!((r.seed, r.tolerances.trunc), (DEFAULT_SEED, 500));
    }

    #[test]
    fn runs_and_classifies() {
        let spec = parse(
            "operator A = diag j^-1\n\
             operator B = diag 1\n\
             check main A\n\
             check single-range A\n\
             check closedness B\n\
             check transfer A B lambda=1\n\
             check transfer B B lambda=1\n",
        )
        .unwrap();
        let settings = Resolved::new(&spec, &Overrides::default());
        let out = run(&spec, &settings, 2);
        let verdicts: Vec<(&str, Status)> = out.iter().map(|r| (r.verdict.as_str(), r.status)).collect();
        assert_eq!(verdicts[0], ("InEssential", Status::Ok));
        assert_eq!(verdicts[1], ("NotClosed", Status::Ok));
        assert_eq!(verdicts[2], ("Closed", Status::Ok));
        assert_eq!(verdicts[3], ("Decays", Status::Ok));
        assert_eq!(verdicts[4], ("Refused", Status::Refused));
        assert_eq!(out[4].certificate["type"], "error");
    }
}
