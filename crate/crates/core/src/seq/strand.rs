//! Strand expressions: finite sums of rational multiples of products of
//! negative rational powers of affine index maps.
//!
//! A strand written by a user is `Σ c·j^(-e)`. Interleaving strands of
//! different moduli reindexes `j ↦ s·J + o`, so the closed class carries a
//! base `s·J + o` on every factor.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::jset::JSet;
use super::poly::{isolate_roots, Poly};
use super::radical::{factorize, RadicalSum};
use crate::error::SeqError;
use crate::rational::{bigint_to_u64_clamped, ceil_to_bigint, floor_to_bigint, from_u64, int, to_f64, Rational};

/// Largest local index the sign analysis will place a critical point at.
const INDEX_LIMIT: u64 = 1 << 52;

/// The affine map `J ↦ scale·J + offset`, positive for every `J >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Base {
    pub scale: u64,
    pub offset: i64,
}

impl Base {
    pub const IDENTITY: Base = Base { scale: 1, offset: 0 };

    pub fn at(&self, j: u64) -> u64 {
        let v = self.scale as i128 * j as i128 + self.offset as i128;
        u64::try_from(v).expect("local index out of range")
    }

    /// `self ∘ (J ↦ scale·J + offset)`.
    fn compose(&self, scale: u64, offset: i64) -> Base {
        Base {
            scale: self.scale * scale,
            offset: self.scale as i64 * offset + self.offset,
        }
    }

    fn poly(&self) -> Poly {
        Poly::linear(from_u64(self.scale), int(self.offset))
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.scale, self.offset) {
            (1, 0) => write!(f, "j"),
            (s, 0) => write!(f, "({s}j)"),
            (1, o) if o > 0 => write!(f, "(j+{o})"),
            (1, o) => write!(f, "(j{o})"),
            (s, o) if o > 0 => write!(f, "({s}j+{o})"),
            (s, o) => write!(f, "({s}j{o})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub base: Base,
    /// Always positive.
    pub exp: Rational,
}

/// `coeff · Π base^(-exp)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: Rational,
    pub factors: Vec<Factor>,
}

impl Term {
    fn normalize(mut self) -> Term {
        loop {
            self.factors.sort();
            let mut merged: Vec<Factor> = Vec::with_capacity(self.factors.len());
            for f in self.factors.drain(..) {
                match merged.last_mut() {
                    Some(last) if last.base == f.base => last.exp += f.exp,
                    _ => merged.push(f),
                }
            }
            merged.retain(|f| !f.exp.is_zero());
            let mut changed = false;
            for f in merged.iter_mut() {
                if !f.exp.is_integer() {
                    continue;
                }
                let g = (f.base.scale as i64).gcd(&f.base.offset) as u64;
                if g > 1 {
                    let e = f.exp.to_integer().to_usize().expect("exponent");
                    self.coeff /= Rational::from_integer(num_traits::pow(BigInt::from(g), e));
                    f.base = Base {
                        scale: f.base.scale / g,
                        offset: f.base.offset / g as i64,
                    };
                    changed = true;
                }
            }
            self.factors = merged;
            if !changed {
                return self;
            }
        }
    }

    fn mul(&self, other: &Term) -> Term {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Term {
            coeff: &self.coeff * &other.coeff,
            factors,
        }
        .normalize()
    }

    fn exponent_on(&self, base: &Base) -> Rational {
        self.factors
            .iter()
            .find(|f| &f.base == base)
            .map(|f| f.exp.clone())
            .unwrap_or_else(Rational::zero)
    }
}

/// A strand in canonical form: like terms combined, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Strand {
    terms: Vec<Term>,
}

/// Sign of a strand along `j = 1, 2, ...` as maximal runs of constant sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPattern {
    /// `(first index, sign)`; the first run starts at 1 and the last is unbounded.
    runs: Vec<(u64, Ordering)>,
}

impl SignPattern {
    fn constant(s: Ordering) -> Self {
        SignPattern { runs: vec![(1, s)] }
    }

    pub fn runs(&self) -> &[(u64, Ordering)] {
        &self.runs
    }

    pub fn sign_at(&self, j: u64) -> Ordering {
        let idx = self.runs.partition_point(|r| r.0 <= j);
        self.runs[idx.max(1) - 1].1
    }

    pub fn eventual(&self) -> Ordering {
        self.runs.last().unwrap().1
    }

    /// First index from which the sign never changes.
    pub fn stable_from(&self) -> u64 {
        self.runs.last().unwrap().0
    }

    pub fn select(&self, keep: impl Fn(Ordering) -> bool) -> JSet {
        let mut v = Vec::new();
        for (i, &(s, sign)) in self.runs.iter().enumerate() {
            if keep(sign) {
                let end = self.runs.get(i + 1).map(|r| r.0 - 1);
                v.push((s, end));
            }
        }
        JSet::from_ranges(v)
    }
}

enum Shape {
    Zero,
    /// Numerator polynomial in `J` of the strand written over a positive common denominator.
    Integer(Poly),
    /// Single base `u = s·J + o` with the strand equal to `P(u^(-1/q))`.
    Radical { base: Base, q: u64, p: Poly },
}

impl Strand {
    pub fn zero() -> Self {
        Strand { terms: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Strand::from_raw(vec![Term {
            coeff: c,
            factors: Vec::new(),
        }])
    }

    /// `c · j^(-e)` for `e >= 0`.
    pub fn power(c: Rational, e: Rational) -> Result<Self, SeqError> {
        Strand::from_terms(vec![(c, e)])
    }

    /// `Σ c · j^(-e)` for `e >= 0`.
    pub fn from_terms(terms: Vec<(Rational, Rational)>) -> Result<Self, SeqError> {
        let mut raw = Vec::with_capacity(terms.len());
        for (c, e) in terms {
            if e.is_negative() {
                return Err(SeqError::Invalid(format!("negative exponent {e}")));
            }
            let factors = if e.is_zero() {
                Vec::new()
            } else {
                vec![Factor {
                    base: Base::IDENTITY,
                    exp: e,
                }]
            };
            raw.push(Term { coeff: c, factors });
        }
        Ok(Strand::from_raw(raw))
    }

    /// `Σ c · Π base^(-e)` with positive exponents on bases positive for every `J >= 1`.
    pub fn from_factored(terms: Vec<(Rational, Vec<(Base, Rational)>)>) -> Result<Self, SeqError> {
        let mut raw = Vec::with_capacity(terms.len());
        for (coeff, factors) in terms {
            let mut fs = Vec::with_capacity(factors.len());
            for (base, exp) in factors {
                if base.scale == 0 || (base.scale as i128 + base.offset as i128) < 1 {
                    return Err(SeqError::Invalid(format!("base {base} is not positive for j >= 1")));
                }
                if !exp.is_positive() {
                    return Err(SeqError::Invalid(format!("exponent {exp} must be positive")));
                }
                fs.push(Factor { base, exp });
            }
            raw.push(Term { coeff, factors: fs });
        }
        Ok(Strand::from_raw(raw))
    }

    fn from_raw(raw: Vec<Term>) -> Self {
        let mut groups: BTreeMap<Vec<Factor>, Rational> = BTreeMap::new();
        for t in raw {
            let t = t.normalize();
            *groups.entry(t.factors).or_insert_with(Rational::zero) += t.coeff;
        }
        Strand {
            terms: groups
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(factors, coeff)| Term { coeff, factors })
                .collect(),
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// No terms at all; see [`Strand::is_identically_zero`] for the semantic test.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(coeff, exponent)` pairs when every factor uses the plain index `j`.
    pub fn simple_terms(&self) -> Option<Vec<(Rational, Rational)>> {
        let mut out = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            match t.factors.as_slice() {
                [] => out.push((t.coeff.clone(), Rational::zero())),
                [f] if f.base == Base::IDENTITY => out.push((t.coeff.clone(), f.exp.clone())),
                _ => return None,
            }
        }
        out.sort_by(|a, b| a.1.cmp(&b.1));
        Some(out)
    }

    pub fn has_integer_exponents(&self) -> bool {
        self.terms.iter().flat_map(|t| &t.factors).all(|f| f.exp.is_integer())
    }

    /// The limit as `j → ∞`: the constant term.
    pub fn limit(&self) -> Rational {
        self.terms
            .iter()
            .find(|t| t.factors.is_empty())
            .map(|t| t.coeff.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Strand) -> Strand {
        let mut raw = self.terms.clone();
        raw.extend(other.terms.iter().cloned());
        Strand::from_raw(raw)
    }

    pub fn neg(&self) -> Strand {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &Strand) -> Strand {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Strand {
        Strand::from_raw(
            self.terms
                .iter()
                .map(|t| Term {
                    coeff: &t.coeff * c,
                    factors: t.factors.clone(),
                })
                .collect(),
        )
    }

    /// `self + c`.
    pub fn shift(&self, c: &Rational) -> Strand {
        self.add(&Strand::constant(c.clone()))
    }

    pub fn mul(&self, other: &Strand) -> Strand {
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                raw.push(a.mul(b));
            }
        }
        Strand::from_raw(raw)
    }

    /// The strand `J ↦ self(scale·J + offset)`; requires `scale + offset >= 1`.
    pub fn reindex(&self, scale: u64, offset: i64) -> Strand {
        debug_assert!(scale as i64 + offset >= 1);
        Strand::from_raw(
            self.terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff.clone(),
                    factors: t
                        .factors
                        .iter()
                        .map(|f| Factor {
                            base: f.base.compose(scale, offset),
                            exp: f.exp.clone(),
                        })
                        .collect(),
                })
                .collect(),
        )
    }

    /// Exact value at local index `j`; fails when the value is irrational.
    pub fn eval(&self, j: u64) -> Result<Rational, SeqError> {
        if j == 0 {
            return Err(SeqError::ZeroIndex);
        }
        if self.has_integer_exponents() {
            let mut acc = Rational::zero();
            for t in &self.terms {
                let mut den = BigInt::one();
                for f in &t.factors {
                    let e = f.exp.to_integer().to_usize().expect("exponent");
                    den *= num_traits::pow(BigInt::from(f.base.at(j)), e);
                }
                acc += &t.coeff / Rational::from_integer(den);
            }
            return Ok(acc);
        }
        self.radical_value(j).rational_value().ok_or(SeqError::Irrational(j))
    }

    pub(crate) fn radical_value(&self, j: u64) -> RadicalSum {
        let mut cache: BTreeMap<u64, Vec<(u64, u32)>> = BTreeMap::new();
        let mut sum = RadicalSum::new();
        for t in &self.terms {
            let mut exps: BTreeMap<u64, Rational> = BTreeMap::new();
            for f in &t.factors {
                let n = f.base.at(j);
                let fac = cache.entry(n).or_insert_with(|| factorize(n));
                for &(p, a) in fac.iter() {
                    *exps.entry(p).or_insert_with(Rational::zero) += &f.exp * int(a as i64);
                }
            }
            sum.add_power_product(t.coeff.clone(), &exps);
        }
        sum
    }

    /// Certified enclosure of the value at `j`, radicals resolved to `bits` bits.
    pub fn eval_bounds(&self, j: u64, bits: u32) -> (Rational, Rational) {
        match self.eval(j) {
            Ok(v) => (v.clone(), v),
            Err(_) => self.radical_value(j).bounds(bits),
        }
    }

    pub fn eval_f64(&self, j: u64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let mut v = to_f64(&t.coeff);
                for f in &t.factors {
                    v *= (f.base.at(j) as f64).powf(-to_f64(&f.exp));
                }
                v
            })
            .sum()
    }

    /// Exact sign of the value at `j`.
    pub fn sign_at(&self, j: u64) -> Ordering {
        if self.has_integer_exponents() {
            return self.eval(j).unwrap().cmp(&Rational::zero());
        }
        self.radical_value(j).sign()
    }

    fn bases(&self) -> Vec<Base> {
        let mut v: Vec<Base> = self.terms.iter().flat_map(|t| t.factors.iter().map(|f| f.base)).collect();
        v.sort();
        v.dedup();
        v
    }

    fn shape(&self) -> Result<Shape, SeqError> {
        if self.terms.is_empty() {
            return Ok(Shape::Zero);
        }
        let bases = self.bases();
        if self.has_integer_exponents() {
            let maxes: Vec<usize> = bases
                .iter()
                .map(|b| {
                    self.terms
                        .iter()
                        .map(|t| t.exponent_on(b).to_integer().to_usize().unwrap())
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let linear: Vec<Poly> = bases.iter().map(Base::poly).collect();
            let mut n = Poly::zero();
            for t in &self.terms {
                let mut p = Poly::constant(t.coeff.clone());
                for (i, b) in bases.iter().enumerate() {
                    let e = t.exponent_on(b).to_integer().to_usize().unwrap();
                    p = p.mul(&linear[i].pow((maxes[i] - e) as u32));
                }
                n = n.add(&p);
            }
            return Ok(Shape::Integer(n));
        }
        if bases.len() > 1 {
            return Err(SeqError::MixedRadicals);
        }
        let base = bases[0];
        let mut q = BigInt::one();
        for t in &self.terms {
            q = q.lcm(t.exponent_on(&base).denom());
        }
        let qr = Rational::from_integer(q.clone());
        let mut coeffs = Vec::new();
        for t in &self.terms {
            let d = (t.exponent_on(&base) * &qr).to_integer().to_usize().expect("degree");
            if coeffs.len() <= d {
                coeffs.resize(d + 1, Rational::zero());
            }
            coeffs[d] += &t.coeff;
        }
        Ok(Shape::Radical {
            base,
            q: q.to_u64().expect("radical index"),
            p: Poly::new(coeffs),
        })
    }

    /// Whether the strand vanishes at every `j >= 1`.
    pub fn is_identically_zero(&self) -> Result<bool, SeqError> {
        Ok(match self.shape()? {
            Shape::Zero => true,
            Shape::Integer(p) => p.is_zero(),
            Shape::Radical { p, .. } => p.is_zero(),
        })
    }

    /// Exact sign of the strand at every local index.
    pub fn sign_pattern(&self) -> Result<SignPattern, SeqError> {
        match self.shape()? {
            Shape::Zero => Ok(SignPattern::constant(Ordering::Equal)),
            Shape::Integer(n) => integer_pattern(&n),
            Shape::Radical { base, q, p } => self.radical_pattern(base, q, &p),
        }
    }

    fn radical_pattern(&self, base: Base, q: u64, p: &Poly) -> Result<SignPattern, SeqError> {
        if p.is_zero() {
            return Ok(SignPattern::constant(Ordering::Equal));
        }
        let (_, r) = p.strip_low_zeros();
        let eventual = r.coeffs()[0].cmp(&Rational::zero());
        if r.degree() == Some(0) {
            return Ok(SignPattern::constant(eventual));
        }
        let sf = r.square_free();
        let hi = non_root(&sf, |n| Rational::one() + Rational::new(BigInt::one(), BigInt::from(n)));
        let qe = q as usize;
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        // t = u^(-1/q): a root t in [a, b] corresponds to u in [b^-q, a^-q].
        let roots = isolate_roots(&sf, &Rational::zero(), &hi, |a, b| {
            if a >= &Rational::one() {
                return true;
            }
            if !a.is_positive() {
                return false;
            }
            let ua = num_traits::pow(a.recip(), qe);
            let ub = num_traits::pow(b.recip(), qe);
            ua - ub < half
        });
        let mut critical = Vec::new();
        for root in roots {
            if root.lo >= Rational::one() && base.at(1) > 1 {
                continue;
            }
            let u_lo = if root.hi >= Rational::one() {
                BigInt::zero()
            } else {
                floor_to_bigint(&num_traits::pow(root.hi.recip(), qe))
            };
            let u_hi = ceil_to_bigint(&num_traits::pow(root.lo.recip(), qe));
            let s = BigInt::from(base.scale);
            let o = BigInt::from(base.offset);
            let j_lo = (u_lo - &o).div_floor(&s);
            let j_hi = -((-(u_hi - &o)).div_floor(&s));
            push_range(&mut critical, &j_lo, &j_hi)?;
        }
        Ok(assemble(critical, eventual, |j| self.sign_at(j)))
    }
}

fn integer_pattern(n: &Poly) -> Result<SignPattern, SeqError> {
    if n.is_zero() {
        return Ok(SignPattern::constant(Ordering::Equal));
    }
    let eventual = n.lead().unwrap().cmp(&Rational::zero());
    if n.degree() == Some(0) {
        return Ok(SignPattern::constant(eventual));
    }
    let sf = n.square_free();
    let lo = non_root(&sf, |k| Rational::new(BigInt::one(), BigInt::from(k + 1)));
    let hi = sf.root_bound();
    let mut critical = Vec::new();
    if hi > lo {
        for root in isolate_roots(&sf, &lo, &hi, |a, b| b - a < Rational::one()) {
            push_range(&mut critical, &floor_to_bigint(&root.lo), &ceil_to_bigint(&root.hi))?;
        }
    }
    Ok(assemble(critical, eventual, |j| n.sign_at(&from_u64(j))))
}

/// First candidate from `gen(1), gen(2), ...` that is not a root of `p`.
fn non_root(p: &Poly, gen: impl Fn(u64) -> Rational) -> Rational {
    (1..)
        .map(gen)
        .find(|x| !p.eval(x).is_zero())
        .expect("a polynomial has finitely many roots")
}

fn push_range(out: &mut Vec<u64>, lo: &BigInt, hi: &BigInt) -> Result<(), SeqError> {
    let lo = bigint_to_u64_clamped(lo).ok_or(SeqError::IndexOverflow)?.max(1);
    let hi = match bigint_to_u64_clamped(hi) {
        Some(h) => h,
        None => return Err(SeqError::IndexOverflow),
    };
    if hi > INDEX_LIMIT {
        return Err(SeqError::IndexOverflow);
    }
    out.extend(lo..=hi);
    Ok(())
}

fn assemble(mut critical: Vec<u64>, eventual: Ordering, sign: impl Fn(u64) -> Ordering) -> SignPattern {
    critical.sort_unstable();
    critical.dedup();
    let mut runs: Vec<(u64, Ordering)> = Vec::new();
    let mut push = |start: u64, s: Ordering| {
        if runs.last().is_none_or(|r| r.1 != s) {
            runs.push((start, s));
        }
    };
    let mut next = 1u64;
    for c in critical {
        if c > next {
            push(next, sign(next));
        }
        push(c, sign(c));
        next = c + 1;
    }
    push(next, eventual);
    SignPattern { runs }
}

impl fmt::Display for Strand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            match (i, t.coeff.is_negative()) {
                (0, _) => write!(f, "{}", t.coeff)?,
                (_, true) => write!(f, " - {}", -&t.coeff)?,
                (_, false) => write!(f, " + {}", t.coeff)?,
            }
            for fac in &t.factors {
                write!(f, "*{}^-{}", fac.base, fac.exp)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn strand(terms: &[(i64, i64, i64, i64)]) -> Strand {
        Strand::from_terms(terms.iter().map(|&(a, b, c, d)| (rat(a, b), rat(c, d))).collect()).unwrap()
    }

    fn brute_pattern(s: &Strand, upto: u64) -> Vec<Ordering> {
        (1..=upto).map(|j| s.sign_at(j)).collect()
    }

    #[test]
    fn like_terms_combine() {
        let a = strand(&[(1, 1, 1, 1)]);
        assert_eq!(a.add(&a), strand(&[(2, 1, 1, 1)]));
        assert!(strand(&[(1, 1, 0, 1)]).add(&strand(&[(-1, 1, 0, 1)])).is_zero());
    }

    #[test]
    fn product_adds_exponents() {
        let a = strand(&[(1, 1, 0, 1), (1, 1, 1, 1)]);
        let b = strand(&[(1, 1, 0, 1), (-1, 1, 1, 1)]);
        assert_eq!(a.mul(&b), strand(&[(1, 1, 0, 1), (-1, 1, 2, 1)]));
        let h = strand(&[(1, 1, 1, 2)]);
        assert_eq!(h.mul(&h), strand(&[(1, 1, 1, 1)]));
    }

    #[test]
    fn reindex_evaluates_consistently() {
        let s = strand(&[(2, 1, 0, 1), (3, 1, 2, 1), (-1, 2, 1, 1)]);
        let r = s.reindex(3, -1);
        for j in 1..30 {
            assert_eq!(r.eval(j).unwrap(), s.eval(3 * j - 1).unwrap());
        }
    }

    #[test]
    fn integer_bases_are_normalized() {
        // (2J)^-1 == 1/2 * J^-1
        let r = strand(&[(1, 1, 1, 1)]).reindex(2, 0);
        assert_eq!(r, strand(&[(1, 2, 1, 1)]));
    }

    #[test]
    fn radical_evaluation() {
        let s = strand(&[(1, 1, 1, 2)]);
        assert_eq!(s.eval(4).unwrap(), rat(1, 2));
        assert_eq!(s.eval(2), Err(SeqError::Irrational(2)));
        let (lo, hi) = s.eval_bounds(2, 60);
        assert!(lo < hi && lo > rat(7071, 10000) && hi < rat(7072, 10000));
    }

    #[test]
    fn sign_pattern_of_quadratic_in_inverse() {
        // 1 - 3/j + 2/j^2 = (1 - 1/j)(1 - 2/j): zero at 1 and 2
        let s = strand(&[(1, 1, 0, 1), (-3, 1, 1, 1), (2, 1, 2, 1)]);
        let p = s.sign_pattern().unwrap();
        assert_eq!(p.runs(), &[(1, Ordering::Equal), (3, Ordering::Greater)]);
    }

    #[test]
    fn sign_pattern_radical_matches_scan() {
        // 1 - 5 j^(-1/2): zero at j = 25
        let s = strand(&[(1, 1, 0, 1), (-5, 1, 1, 2)]);
        let p = s.sign_pattern().unwrap();
        assert_eq!(p.sign_at(25), Ordering::Equal);
        assert_eq!(p.sign_at(24), Ordering::Less);
        assert_eq!(p.eventual(), Ordering::Greater);
        for (j, sgn) in brute_pattern(&s, 200).into_iter().enumerate() {
            assert_eq!(p.sign_at(j as u64 + 1), sgn);
        }
    }

    #[test]
    fn sign_pattern_mixed_bases() {
        let a = strand(&[(1, 1, 0, 1), (-7, 1, 1, 1)]).reindex(2, -1);
        let b = strand(&[(-1, 2, 0, 1), (3, 1, 2, 1)]).reindex(3, 1);
        let s = a.mul(&b).add(&strand(&[(1, 10, 1, 1)]));
        let p = s.sign_pattern().unwrap();
        let stable = p.stable_from();
        for (j, sgn) in brute_pattern(&s, 10 * stable + 100).into_iter().enumerate() {
            assert_eq!(p.sign_at(j as u64 + 1), sgn, "j = {}", j + 1);
        }
    }

    #[test]
    fn mixed_radicals_are_rejected() {
        let a = strand(&[(1, 1, 1, 2)]);
        let s = a.add(&a.reindex(2, -1));
        assert_eq!(s.sign_pattern(), Err(SeqError::MixedRadicals));
    }

    #[test]
    fn display_forms() {
        assert_eq!(strand(&[(2, 1, 0, 1), (3, 1, 2, 1)]).to_string(), "2 + 3*j^-2");
        assert_eq!(strand(&[(1, 1, 1, 2)]).reindex(2, -1).to_string(), "1*(2j-1)^-1/2");
    }
}
