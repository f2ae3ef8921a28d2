//! Helpers around arbitrary-precision rationals.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn from_u64(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical text form: `p/q` reduced with positive denominator, or `p` for integers.
pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

/// Parses `p`, `p/q`, `-p/q` or a finite decimal such as `0.25` or `1e-3` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((n, d)) = text.split_once('/') {
        let n = parse_decimal(n)?;
        let d = parse_decimal(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Option<Rational> {
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(pos) => (&body[..pos], body[pos + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    if exp.unsigned_abs() > 400 {
        return None;
    }
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(numer);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -value } else { value })
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled quotient when numerator or denominator overflow f64.
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact conversion of a finite double into a rational.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Largest dyadic rational with denominator `2^bits` not exceeding `x`.
pub fn dyadic_floor(x: f64, bits: u32) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let scaled = (x * (1u64 << bits) as f64).floor();
    let n = BigInt::from(scaled as i128);
    Some(Rational::new(n, BigInt::one() << bits as usize))
}

pub fn floor_to_bigint(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil_to_bigint(r: &Rational) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

pub fn bigint_to_u64_clamped(b: &BigInt) -> Option<u64> {
    match b.sign() {
        Sign::Minus => Some(0),
        _ => b.to_u64(),
    }
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// `x^e` for a small nonnegative integer exponent.
pub fn pow_rational(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

pub fn half(r: &Rational) -> Rational {
    r / int(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text() {
        assert_eq!(fmt_rational(&rat(-2, 4)), "-1/2");
        assert_eq!(fmt_rational(&rat(6, -3)), "-2");
        assert_eq!(fmt_rational(&rat(3, 9)), "1/3");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/2"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-6/4"), Some(rat(-3, 2)));
        assert_eq!(parse_rational("0.25"), Some(rat(1, 4)));
        assert_eq!(parse_rational("1e-3"), Some(rat(1, 1000)));
        assert_eq!(parse_rational("2.5e1"), Some(int(25)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn floors_and_ceils() {
        assert_eq!(floor_to_bigint(&rat(-3, 2)), BigInt::from(-2));
        assert_eq!(ceil_to_bigint(&rat(-3, 2)), BigInt::from(-1));
        assert_eq!(ceil_to_bigint(&rat(7, 7)), BigInt::from(1));
        assert_eq!(dyadic_floor(0.75, 4), Some(rat(3, 4)));
    }
}
