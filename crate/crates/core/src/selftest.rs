//! Quick randomized invariant suites behind `essum selftest`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::criteria::{build_singular_schedule, check_sum_ranges_closed, check_zero_essential, gram_gap};
use crate::gen::{closedness_family, projection_family, random_tuple};
use crate::numeric::{eigh, eigh_jacobi, random::random_hermitian, Tolerances};
use crate::operator::{epsilon_core, kernel_core, op_sum};
use crate::scenario::{parse, Definition, ScenarioSpec};

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub detail: String,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

type Suite = fn(&mut ChaCha8Rng) -> SuiteResult;

const SUITES: [(&str, Suite); 6] = [
    ("eigensolvers agree", eigen_agreement),
    ("sum evaluates pointwise", sum_pointwise),
    ("zero in essential spectrum", zero_essential),
    ("singular schedules", schedules),
    ("closedness families", closedness),
    ("canonical round trip", round_trip),
];

/// Runs every suite with a fixed seed.
pub fn run_all(seed: u64) -> Vec<SuiteResult> {
    let mut out: Vec<SuiteResult> = SUITES
        .iter()
        .enumerate()
        .map(|(i, (_, suite))| suite(&mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64))))
        .collect();
    out.push(gram(&mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(SUITES.len() as u64))));
    out
}

fn result(name: &'static str, cases: usize, failures: usize, detail: String) -> SuiteResult {
    SuiteResult {
        name,
        cases,
        failures,
        detail,
    }
}

fn eigen_agreement(rng: &mut ChaCha8Rng) -> SuiteResult {
    let tol = Tolerances::default();
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for n in (2..=40).step_by(2) {
        let a = random_hermitian(n, rng);
        match (eigh(&a), eigh_jacobi(&a, &tol)) {
            (Ok(x), Ok(y)) => {
                let d = x.values.iter().zip(&y.values).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
                worst = worst.max(d);
                if d > 1e-9 || x.max_residual(&a) > 1e-9 {
                    failures += 1;
                }
            }
            _ => failures += 1,
        }
    }
    result(SUITES[0].0, 20, failures, format!("max eigenvalue difference {worst:.2e}"))
}

fn sum_pointwise(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut failures = 0;
    let cases = 100;
    for _ in 0..cases {
        let ops = random_tuple(rng);
        let Ok(sum) = op_sum(&ops) else {
            continue;
        };
        for k in 1..=60 {
            let direct = ops.iter().map(|o| o.diag().eval_f64(k)).sum::<f64>();
            if (sum.diag().eval_f64(k) - direct).abs() > 1e-9 * (1.0 + direct.abs()) {
                failures += 1;
                break;
            }
        }
    }
    result(SUITES[1].0, cases, failures, "indices 1..=60".into())
}

fn zero_essential(rng: &mut ChaCha8Rng) -> SuiteResult {
    let cases = 200;
    let mut failures = 0;
    let mut inside = 0;
    for _ in 0..cases {
        match check_zero_essential(&random_tuple(rng)) {
            Ok(r) if r.in_essential() == r.oracle_in_essential => inside += r.in_essential() as usize,
            _ => failures += 1,
        }
    }
    result(SUITES[2].0, cases, failures, format!("{inside} tuples with 0 essential"))
}

fn schedules(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut cases = 0;
    let mut failures = 0;
    while cases < 50 {
        let ops = random_tuple(rng);
        if !check_zero_essential(&ops).is_ok_and(|r| r.in_essential()) {
            continue;
        }
        cases += 1;
        match build_singular_schedule(&ops, 20, crate::criteria::DEFAULT_SCHEDULE_BUDGET) {
            Ok(s) if s.first_violation(&ops).is_none() => {}
            _ => failures += 1,
        }
    }
    result(SUITES[3].0, cases, failures, "length 20".into())
}

fn closedness(rng: &mut ChaCha8Rng) -> SuiteResult {
    let cases = 100;
    let mut failures = 0;
    for i in 0..cases {
        let want = i % 2 == 0;
        let fam = closedness_family(rng, want);
        let ok = match check_sum_ranges_closed(&fam.ops) {
            Ok(v) if v.is_closed() == want => match (&v.result, want) {
                (crate::criteria::Closedness::Closed { exact_eps, .. }, true) => {
                    match (epsilon_core(&fam.ops, exact_eps), kernel_core(&fam.ops)) {
                        (Ok(a), Ok(b)) => a.core == b.core,
                        _ => false,
                    }
                }
                _ => true,
            },
            _ => false,
        };
        failures += !ok as usize;
    }
    result(SUITES[4].0, cases, failures, "half closed, half not".into())
}

fn round_trip(rng: &mut ChaCha8Rng) -> SuiteResult {
    let cases = 100;
    let mut failures = 0;
    for _ in 0..cases {
        let spec = ScenarioSpec {
            definitions: random_tuple(rng).into_iter().map(Definition::Operator).collect(),
            ..ScenarioSpec::default()
        };
        let text = spec.to_string();
        if !parse(&text).is_ok_and(|p| p == spec && p.to_string() == text) {
            failures += 1;
        }
    }
    result(SUITES[5].0, cases, failures, "random tuples".into())
}

fn gram(rng: &mut ChaCha8Rng) -> SuiteResult {
    let tol = Tolerances::default();
    let cases = 10;
    let mut failures = 0;
    for _ in 0..cases {
        let fam = projection_family(rng, 60);
        let ok = gram_gap(&fam.projections, &tol)
            .is_ok_and(|g| g.spectral_mismatch <= 1e-9 && g.rank_gram_minus_identity <= fam.rank_bound);
        failures += !ok as usize;
    }
    result("gram spectra", cases, failures, "n = 60".into())
}
