//! Complex rational scalars and matrices, used for DSL literals and exact truncations.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::numeric::{c, CMatrix, HermitianMatrix, C64};
use crate::rational::{parse_rational, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CRational {
    pub re: Rational,
    pub im: Rational,
}

impl CRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        CRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        CRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        CRational::new(self.re.clone(), -&self.im)
    }

    pub fn add(&self, o: &CRational) -> CRational {
        CRational::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn to_c64(&self) -> C64 {
        c(to_f64(&self.re), to_f64(&self.im))
    }

    /// Parses `a`, `bi`, `a+bi`, `a-bi` with rational `a`, `b`; `i` alone means `1i`.
    pub fn parse(text: &str) -> Option<CRational> {
        let t = text.trim();
        let Some(body) = t.strip_suffix('i') else {
            return parse_rational(t).map(CRational::real);
        };
        // Split at the last sign that is not leading and not part of an exponent.
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            if (bytes[idx] == b'+' || bytes[idx] == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        let imag = |s: &str| -> Option<Rational> {
            match s {
                "" | "+" => Some(Rational::from_integer(1.into())),
                "-" => Some(Rational::from_integer((-1).into())),
                _ => parse_rational(s),
            }
        };
        match split {
            Some(idx) => Some(CRational::new(parse_rational(&body[..idx])?, imag(&body[idx..])?)),
            None => Some(CRational::new(Rational::zero(), imag(body)?)),
        }
    }
}

impl fmt::Display for CRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) if self.im.is_negative() => write!(f, "{}-{}i", self.re, -&self.im),
            (false, false) => write!(f, "{}+{}i", self.re, self.im),
        }
    }
}

/// A dense matrix of complex rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<CRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![CRational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<CRational>>) -> Option<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(ExactMatrix {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diagonal(d: Vec<Rational>) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in d.into_iter().enumerate() {
            m.set(i, i, CRational::real(x));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CRational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CRational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_hermitian(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (i..self.cols).all(|j| *self.get(i, j) == self.get(j, i).conj()))
    }

    /// Sum after zero-padding both to the larger shape.
    pub fn add_padded(&self, other: &ExactMatrix) -> ExactMatrix {
        let rows = self.rows.max(other.rows);
        let cols = self.cols.max(other.cols);
        let mut out = ExactMatrix::zeros(rows, cols);
        for (m, _) in [(self, 0), (other, 1)] {
            for i in 0..m.rows {
                for j in 0..m.cols {
                    let v = out.get(i, j).add(m.get(i, j));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn to_cmatrix(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_c64())
    }

    pub fn to_hermitian(&self) -> Option<HermitianMatrix> {
        if !self.is_hermitian() {
            return None;
        }
        HermitianMatrix::from_upper(&self.to_cmatrix()).ok()
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn parse_and_print_complex() {
        for (text, re, im) in [
            ("3", int(3), int(0)),
            ("-1/2", rat(-1, 2), int(0)),
            ("2i", int(0), int(2)),
            ("-i", int(0), int(-1)),
            ("1-2i", int(1), int(-2)),
            ("1/2+3/4i", rat(1, 2), rat(3, 4)),
            ("1e-1+1e+1i", rat(1, 10), int(10)),
        ] {
            assert_eq!(CRational::parse(text), Some(CRational::new(re, im)), "{text}");
        }
        assert_eq!(CRational::new(rat(1, 2), int(-3)).to_string(), "1/2-3i");
        assert_eq!(CRational::parse("x"), None);
    }

    #[test]
    fn hermitian_detection() {
        let m = ExactMatrix::from_rows(vec![
            vec![CRational::real(int(1)), CRational::new(int(0), int(1))],
            vec![CRational::new(int(0), int(-1)), CRational::real(int(2))],
        ])
        .unwrap();
        assert!(m.is_hermitian());
        assert_eq!(m.to_string(), "[[1, 1i], [-1i, 2]]");
        let sum = m.add_padded(&ExactMatrix::diagonal(vec![int(1), int(1), int(1)]));
        assert_eq!(sum.rows(), 3);
        assert_eq!(sum.get(0, 0), &CRational::real(int(2)));
    }
}
