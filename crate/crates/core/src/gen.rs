//! Seeded generators of operator tuples, projection families and matrix families.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::seq::IndexedRandom;
use rand::Rng;

use crate::numeric::{random::gaussian_matrix, random::random_frame, CMatrix, HermitianMatrix, C64};
use crate::operator::ModelOperator;
use crate::rational::{lcm_u64, Rational};
use crate::seq::{Strand, SymbolicSequence};

/// `p/q` with `|p| <= 9`, `1 <= q <= 9`.
pub fn random_rational<R: Rng>(rng: &mut R, nonzero: bool) -> Rational {
    loop {
        let p: i64 = rng.random_range(-9..=9);
        let q: i64 = rng.random_range(1..=9);
        if p != 0 || !nonzero {
            return Rational::new(p.into(), q.into());
        }
    }
}

/// A rational with `lo <= |x|`, numerator and denominator at most 9 in size.
fn rational_at_least<R: Rng>(rng: &mut R, lo: &Rational) -> Rational {
    loop {
        let x = random_rational(rng, true);
        if crate::rational::abs(&x) >= *lo {
            return x;
        }
    }
}

/// Decay exponents: integers 1..=3, plus `1/2` and `3/2` when allowed.
fn random_exponent<R: Rng>(rng: &mut R, fractional: bool) -> Rational {
    let choices: &[(i64, i64)] = if fractional {
        &[(1, 1), (2, 1), (3, 1), (1, 2), (3, 2)]
    } else {
        &[(1, 1), (2, 1), (3, 1)]
    };
    let &(p, q) = choices.choose(rng).expect("nonempty");
    Rational::new(p.into(), q.into())
}

/// A strand, never identically zero, with the given limit and at most three terms.
pub fn random_strand<R: Rng>(rng: &mut R, limit: &Rational, fractional: bool) -> Strand {
    loop {
        let s = strand_attempt(rng, limit, fractional);
        if !s.is_zero() {
            return s;
        }
    }
}

fn strand_attempt<R: Rng>(rng: &mut R, limit: &Rational, fractional: bool) -> Strand {
    let mut terms = Vec::new();
    if !limit.is_zero() {
        terms.push((limit.clone(), Rational::from_integer(0.into())));
    }
    let max_decay = 3 - terms.len();
    let count = rng.random_range(1..=max_decay);
    for _ in 0..count {
        terms.push((random_rational(rng, true), random_exponent(rng, fractional)));
    }
    Strand::from_terms(terms).expect("nonnegative exponents")
}

fn random_exceptions<R: Rng>(rng: &mut R) -> BTreeMap<u64, Rational> {
    let mut out = BTreeMap::new();
    for _ in 0..rng.random_range(1..=2) {
        out.insert(rng.random_range(1..=20), random_rational(rng, false));
    }
    out
}

fn build(label: String, modulus: usize, strands: Vec<Strand>, exceptions: BTreeMap<u64, Rational>) -> ModelOperator {
    ModelOperator::new(label, SymbolicSequence::new(modulus, strands, exceptions).expect("valid sequence"))
}

fn divisors(m: usize) -> Vec<usize> {
    (1..=m).filter(|d| m % d == 0).collect()
}

/// 2–4 block-free operators with moduli dividing a random `M <= 6`. Strands of the
/// common modulus are assigned to at most one owner, and only the owner may have a
/// nonzero limit there, so every pairwise product is compact.
pub fn random_tuple<R: Rng>(rng: &mut R) -> Vec<ModelOperator> {
    let n_ops = rng.random_range(2..=4);
    let big_m = rng.random_range(1..=6);
    let moduli: Vec<usize> = (0..n_ops).map(|_| *divisors(big_m).choose(rng).expect("1 divides")).collect();
    let l = moduli.iter().fold(1u64, |a, &m| lcm_u64(a, m as u64)) as usize;
    let owners: Vec<Option<usize>> = (0..l)
        .map(|_| if rng.random_bool(0.05) { None } else { Some(rng.random_range(0..n_ops)) })
        .collect();
    // Reindexed fractional powers cannot be compared exactly across moduli, and exceptions
    // added to irrational values have no exact sum, so both stay in separate populations.
    let fractional = moduli.iter().all(|&m| m == moduli[0]) && rng.random_bool(0.3);
    let zero = Rational::from_integer(0.into());
    (0..n_ops)
        .map(|i| {
            let m = moduli[i];
            let strands = (0..m)
                .map(|r| {
                    let owned = (r..l).step_by(m).all(|big_r| owners[big_r] == Some(i));
                    if owned && rng.random_bool(0.9) {
                        let limit = random_rational(rng, true);
                        random_strand(rng, &limit, fractional)
                    } else if rng.random_bool(0.2) {
                        Strand::zero()
                    } else {
                        random_strand(rng, &zero, fractional)
                    }
                })
                .collect();
            let exceptions = if !fractional && rng.random_bool(0.25) {
                random_exceptions(rng)
            } else {
                BTreeMap::new()
            };
            build(format!("A{}", i + 1), m, strands, exceptions)
        })
        .collect()
}

/// Which strands of a constructed closedness family were built to fail.
#[derive(Debug, Clone)]
pub struct ClosednessFamily {
    pub ops: Vec<ModelOperator>,
    pub modulus: usize,
    /// Strands with every limit 0 and some operator not identically zero.
    pub bad_strands: Vec<usize>,
}

/// A family on a common modulus where every strand is owned by an operator with a
/// nonzero limit, or vanishes in every operator. With `closed = false`, at least one
/// strand instead carries only decaying values.
pub fn closedness_family<R: Rng>(rng: &mut R, closed: bool) -> ClosednessFamily {
    let n_ops = rng.random_range(1..=3);
    let m = rng.random_range(1..=6);
    #[derive(Clone, Copy, PartialEq)]
    enum Kind {
        Owned(usize),
        Zero,
        Decaying,
    }
    let mut kinds: Vec<Kind> = (0..m)
        .map(|_| if rng.random_bool(0.3) { Kind::Zero } else { Kind::Owned(rng.random_range(0..n_ops)) })
        .collect();
    if !closed {
        let forced = rng.random_range(0..m);
        kinds[forced] = Kind::Decaying;
        for k in kinds.iter_mut() {
            if *k != Kind::Decaying && rng.random_bool(0.15) {
                *k = Kind::Decaying;
            }
        }
    }
    let zero = Rational::from_integer(0.into());
    let mut strands: Vec<Vec<Strand>> = vec![Vec::with_capacity(m); n_ops];
    for kind in &kinds {
        let decaying_owner = rng.random_range(0..n_ops);
        for (i, s) in strands.iter_mut().enumerate() {
            s.push(match *kind {
                Kind::Owned(o) if o == i => {
                    let limit = random_rational(rng, true);
                    random_strand(rng, &limit, false)
                }
                Kind::Zero => Strand::zero(),
                Kind::Decaying if i == decaying_owner => random_strand(rng, &zero, false),
                _ if rng.random_bool(0.5) => Strand::zero(),
                _ => random_strand(rng, &zero, false),
            });
        }
    }
    let ops = strands
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let exceptions = if rng.random_bool(0.3) { random_exceptions(rng) } else { BTreeMap::new() };
            build(format!("A{}", i + 1), m, s, exceptions)
        })
        .collect();
    ClosednessFamily {
        ops,
        modulus: m,
        bad_strands: (0..m).filter(|&r| kinds[r] == Kind::Decaying).collect(),
    }
}

/// A compactness-compatible tuple whose `H_eps` is finite for every `eps < 1`:
/// every strand has an owner with a limit of size at least 1.
pub fn finite_core_tuple<R: Rng>(rng: &mut R) -> Vec<ModelOperator> {
    let n_ops = rng.random_range(1..=3);
    let m = rng.random_range(1..=6);
    let owners: Vec<usize> = (0..m).map(|_| rng.random_range(0..n_ops)).collect();
    let one = Rational::from_integer(1.into());
    let zero = Rational::from_integer(0.into());
    (0..n_ops)
        .map(|i| {
            let strands = (0..m)
                .map(|r| {
                    if owners[r] == i {
                        let limit = rational_at_least(rng, &one);
                        random_strand(rng, &limit, false)
                    } else if rng.random_bool(0.5) {
                        Strand::zero()
                    } else {
                        random_strand(rng, &zero, false)
                    }
                })
                .collect();
            let exceptions = if rng.random_bool(0.3) { random_exceptions(rng) } else { BTreeMap::new() };
            build(format!("A{}", i + 1), m, strands, exceptions)
        })
        .collect()
}

/// Orthogonal projections with a known bound on `rank(ΓΓ^* − I)`.
#[derive(Debug, Clone)]
pub struct ProjectionFamily {
    pub projections: Vec<HermitianMatrix>,
    /// Twice the number of tilted columns; equals `rank(ΓΓ^* − I)`.
    pub rank_bound: usize,
}

/// 2–5 projections in dimension `n` with mutually orthogonal ranges, then up to five
/// columns tilted towards an unused column of another range.
pub fn projection_family<R: Rng>(rng: &mut R, n: usize) -> ProjectionFamily {
    let count = rng.random_range(2..=5);
    let max_rank = (n / count).clamp(1, 20);
    let ranks: Vec<usize> = (0..count).map(|_| rng.random_range(1..=max_rank)).collect();
    let total: usize = ranks.iter().sum();
    let frame = random_frame(n, total, rng);
    let mut cols: Vec<Vec<C64>> = (0..total).map(|j| frame.column(j)).collect();
    let owner: Vec<usize> = ranks.iter().enumerate().flat_map(|(g, &r)| std::iter::repeat_n(g, r)).collect();
    let mut used = vec![false; total];
    let mut tilts = 0;
    for _ in 0..rng.random_range(0..=5) {
        let a = rng.random_range(0..total);
        let candidates: Vec<usize> = (0..total).filter(|&b| !used[b] && owner[b] != owner[a] && b != a).collect();
        if used[a] || candidates.is_empty() {
            continue;
        }
        let b = *candidates.choose(rng).expect("nonempty");
        let theta: f64 = rng.random_range(0.1..1.4);
        let (s, co) = theta.sin_cos();
        let tilted: Vec<C64> = cols[a].iter().zip(&cols[b]).map(|(x, y)| x * co + y * s).collect();
        cols[a] = tilted;
        used[a] = true;
        used[b] = true;
        tilts += 1;
    }
    let mut start = 0;
    let projections = ranks
        .iter()
        .map(|&r| {
            let f = CMatrix::from_columns(n, &cols[start..start + r]);
            start += r;
            HermitianMatrix::projector(&f)
        })
        .collect();
    ProjectionFamily {
        projections,
        rank_bound: 2 * tilts,
    }
}

/// 2–4 complex Gaussian `n × p_i` matrices with `Σ p_i >= n`.
pub fn matrix_family<R: Rng>(rng: &mut R, n: usize) -> Vec<CMatrix> {
    let count = rng.random_range(2..=4);
    let base = n.div_ceil(count);
    (0..count)
        .map(|_| {
            let p = base + rng.random_range(0..=5);
            gaussian_matrix(n, p, rng)
        })
        .collect()
}
