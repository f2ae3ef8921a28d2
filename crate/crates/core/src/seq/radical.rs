//! Exact arithmetic on sums of rational multiples of prime-power radicals.
//!
//! Evaluating `n^(-e)` for an integer `n >= 1` and rational `e` splits into a
//! rational part and a radical `prod p^(-f_p)` with every `f_p` in `(0, 1)`.
//! Radicals with different fractional-exponent vectors are linearly
//! independent over the rationals, so a sum grouped by radical is zero exactly
//! when every group coefficient is zero. Signs of nonzero sums are then
//! settled by interval refinement, which terminates.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

/// Trial-division factorization; `n >= 1`.
pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Primes in ascending order with fractional exponents in `(0, 1)`; the
/// radical's value is `prod p^(-f)`.
pub(crate) type RadicalKey = Vec<(u64, Rational)>;

#[derive(Debug, Clone, Default)]
pub(crate) struct RadicalSum {
    groups: BTreeMap<RadicalKey, Rational>,
}

impl RadicalSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `coeff * prod p^(-x_p)` for the given total exponents `x_p >= 0`.
    pub fn add_power_product(&mut self, coeff: Rational, exponents: &BTreeMap<u64, Rational>) {
        if coeff.is_zero() {
            return;
        }
        let mut rational = coeff;
        let mut key = Vec::new();
        for (&p, x) in exponents {
            let fl = x.floor();
            let frac = x - &fl;
            let whole = fl.to_integer().to_u32().expect("exponent too large");
            if whole > 0 {
                rational /= Rational::from_integer(num_traits::pow(BigInt::from(p), whole as usize));
            }
            if !frac.is_zero() {
                key.push((p, frac));
            }
        }
        let slot = self.groups.entry(key).or_insert_with(Rational::zero);
        *slot += rational;
    }

    #[cfg(test)]
    pub fn add_rational(&mut self, r: &Rational) {
        let slot = self.groups.entry(Vec::new()).or_insert_with(Rational::zero);
        *slot += r;
    }

    fn nonzero(&self) -> impl Iterator<Item = (&RadicalKey, &Rational)> {
        self.groups.iter().filter(|(_, c)| !c.is_zero())
    }

    #[cfg(test)]
    pub fn is_zero(&self) -> bool {
        self.nonzero().next().is_none()
    }

    /// The exact value when it is rational.
    pub fn rational_value(&self) -> Option<Rational> {
        let mut out = Rational::zero();
        for (k, c) in self.nonzero() {
            if !k.is_empty() {
                return None;
            }
            out += c;
        }
        Some(out)
    }

    /// Certified enclosure `[lo, hi]` of the value with radicals resolved to `bits` bits.
    pub fn bounds(&self, bits: u32) -> (Rational, Rational) {
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        for (k, c) in self.nonzero() {
            let (rlo, rhi) = radical_bounds(k, bits);
            if c.is_positive() {
                lo += c * &rlo;
                hi += c * &rhi;
            } else {
                lo += c * &rhi;
                hi += c * &rlo;
            }
        }
        (lo, hi)
    }

    pub fn sign(&self) -> Ordering {
        if let Some(r) = self.rational_value() {
            return r.cmp(&Rational::zero());
        }
        let mut bits = 48;
        loop {
            let (lo, hi) = self.bounds(bits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }
}

/// Encloses `prod p^(-f_p)` between two rationals using integer roots at precision `2^-bits`.
pub(crate) fn radical_bounds(key: &RadicalKey, bits: u32) -> (Rational, Rational) {
    if key.is_empty() {
        return (Rational::one(), Rational::one());
    }
    let mut l = BigInt::one();
    for (_, f) in key {
        l = l.lcm(f.denom());
    }
    let mut n = BigInt::one();
    for (p, f) in key {
        let e = (f * Rational::from_integer(l.clone())).to_integer();
        n *= num_traits::pow(BigInt::from(*p), e.to_usize().expect("radical exponent"));
    }
    let l = l.to_u32().expect("radical index");
    let s = BigInt::one() << bits as usize;
    let target = &n * num_traits::pow(s.clone(), l as usize);
    let r = target.nth_root(l);
    let s_r = Rational::from_integer(s);
    if num_traits::pow(r.clone(), l as usize) == target {
        let v = &s_r / Rational::from_integer(r);
        return (v.clone(), v);
    }
    let lo = &s_r / Rational::from_integer(&r + BigInt::one());
    let hi = &s_r / Rational::from_integer(r);
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn factorization() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
    }

    fn power(p: u64, x: Rational) -> BTreeMap<u64, Rational> {
        let mut m = BTreeMap::new();
        m.insert(p, x);
        m
    }

    #[test]
    fn rational_powers_collapse() {
        let mut s = RadicalSum::new();
        // 4^(-1/2) = 2^(-1)
        s.add_power_product(int(1), &power(2, int(1)));
        assert_eq!(s.rational_value(), Some(rat(1, 2)));
    }

    #[test]
    fn independent_radicals_do_not_cancel() {
        let mut s = RadicalSum::new();
        s.add_power_product(int(1), &power(2, rat(1, 2)));
        s.add_rational(&rat(-7, 10));
        assert!(!s.is_zero());
        // 1/sqrt 2 ~ 0.7071 > 0.7
        assert_eq!(s.sign(), Ordering::Greater);
        let mut t = RadicalSum::new();
        t.add_power_product(int(1), &power(2, rat(1, 2)));
        t.add_power_product(int(-1), &power(2, rat(1, 2)));
        assert!(t.is_zero());
    }

    #[test]
    fn bounds_enclose_value() {
        let key = vec![(3u64, rat(1, 3))];
        let (lo, hi) = radical_bounds(&key, 40);
        let v = 3f64.powf(-1.0 / 3.0);
        assert!(crate::rational::to_f64(&lo) <= v && v <= crate::rational::to_f64(&hi));
        assert!(&hi - &lo < rat(1, 1 << 30));
    }
}
