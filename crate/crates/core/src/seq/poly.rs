//! Univariate polynomials over the rationals with Sturm-sequence root isolation.
//!
//! Sign patterns of strands reduce to the sign of a polynomial on a grid of
//! integers (or of integer powers), so the only real-root machinery needed is
//! counting and bisecting distinct roots in a half-open interval.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Coefficients in ascending degree; never has a trailing zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `scale * x + offset`
    pub fn linear(scale: Rational, offset: Rational) -> Self {
        Poly::new(vec![offset, scale])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn lead(&self) -> Option<&Rational> {
        self.0.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> Ordering {
        self.eval(x).cmp(&Rational::zero())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i).cloned().unwrap_or_else(Rational::zero);
            let b = other.0.get(i).cloned().unwrap_or_else(Rational::zero);
            v.push(a + b);
        }
        Poly::new(v)
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.lead().unwrap().clone();
        let mut rem = self.0.clone();
        let mut quot = vec![Rational::zero(); self.0.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top] / &lead;
            if !c.is_zero() {
                let shift = top - dd;
                for (i, dc) in divisor.0.iter().enumerate() {
                    rem[shift + i] -= &c * dc;
                }
                quot[shift] = c;
            }
            rem.pop();
            while rem.last().is_some_and(|x| x.is_zero()) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Positive rescaling to a primitive integer polynomial; preserves signs.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut den = BigInt::one();
        for c in &self.0 {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut g = BigInt::zero();
        for i in &ints {
            g = g.gcd(i);
        }
        if g.is_zero() {
            g = BigInt::one();
        }
        Poly::new(
            ints.into_iter()
                .map(|i| Rational::from_integer(i / &g))
                .collect(),
        )
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive();
        }
        a
    }

    /// Same distinct roots, all simple.
    pub fn square_free(&self) -> Poly {
        let d = self.derivative();
        if d.is_zero() {
            return self.primitive();
        }
        let g = self.gcd(&d);
        if g.degree() == Some(0) {
            return self.primitive();
        }
        self.div_rem(&g).0.primitive()
    }

    /// Splits off the largest power of `x` dividing the polynomial.
    pub fn strip_low_zeros(&self) -> (usize, Poly) {
        let v = self.0.iter().take_while(|c| c.is_zero()).count();
        (v, Poly::new(self.0[v..].to_vec()))
    }

    /// Cauchy bound: every complex root has modulus strictly below this.
    pub fn root_bound(&self) -> Rational {
        let lead = self.lead().expect("root bound of zero polynomial").abs();
        let mut m = Rational::zero();
        for c in &self.0[..self.0.len() - 1] {
            let r = c.abs() / &lead;
            if r > m {
                m = r;
            }
        }
        m + Rational::one()
    }
}

pub(crate) struct SturmChain(Vec<Poly>);

impl SturmChain {
    /// `p` must be square-free and nonconstant.
    pub fn new(p: &Poly) -> Self {
        let mut chain = vec![p.primitive(), p.derivative().primitive()];
        loop {
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.neg().primitive());
        }
        SturmChain(chain)
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = Ordering::Equal;
        for p in &self.0 {
            let s = p.sign_at(x);
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Distinct roots in `(a, b]`; `a` and `b` must not be roots.
    pub fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// An isolating interval `[lo, hi]` holding exactly one root; `lo == hi` when the root is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

/// Isolates every root of the square-free polynomial `p` in the open interval `(lo, hi)`.
///
/// `lo` and `hi` must not be roots. Each isolating interval is refined until
/// `narrow(lo, hi)` holds or the root is hit exactly.
pub(crate) fn isolate_roots(
    p: &Poly,
    lo: &Rational,
    hi: &Rational,
    narrow: impl Fn(&Rational, &Rational) -> bool,
) -> Vec<RootInterval> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let chain = SturmChain::new(p);
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        match chain.count(&a, &b) {
            0 => {}
            1 => out.push(refine(p, a, b, &narrow)),
            _ => {
                let m = split_point(p, &a, &b);
                stack.push((m.clone(), b));
                stack.push((a, m));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

fn split_point(p: &Poly, a: &Rational, b: &Rational) -> Rational {
    let two = Rational::from_integer(BigInt::from(2));
    let mid = (a + b) / &two;
    if !p.eval(&mid).is_zero() {
        return mid;
    }
    let mut step = (b - a) / Rational::from_integer(BigInt::from(8));
    loop {
        let cand = &mid + &step;
        if !p.eval(&cand).is_zero() {
            return cand;
        }
        step /= &two;
    }
}

fn refine(
    p: &Poly,
    mut a: Rational,
    mut b: Rational,
    narrow: &impl Fn(&Rational, &Rational) -> bool,
) -> RootInterval {
    let two = Rational::from_integer(BigInt::from(2));
    let sa = p.sign_at(&a);
    while !narrow(&a, &b) {
        let m = (&a + &b) / &two;
        let sm = p.sign_at(&m);
        if sm == Ordering::Equal {
            return RootInterval { lo: m.clone(), hi: m };
        }
        if sm == sa {
            a = m;
        } else {
            b = m;
        }
    }
    RootInterval { lo: a, hi: b }
}
