//! Recursive-descent parser for scenario files.

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::lexer::{lex, Tok, Token};
use super::spec::{
    CheckKind, Definition, Directive, LabelKind, ParamKind, ParamValue, ScenarioSpec, TOLERANCE_NAMES,
};
use crate::exact::{CRational, ExactMatrix};
use crate::operator::ModelOperator;
use crate::rational::{parse_rational, Rational};
use crate::seq::{Base, Strand, SymbolicSequence};

pub const MAX_MODULUS: u64 = 64;
pub const MAX_EXPONENT_NUMER: u64 = 100;
pub const MAX_EXPONENT_DENOM: u64 = 12;
pub const MAX_BASE_SCALE: u64 = 64;
pub const MAX_BASE_OFFSET: u64 = 1000;
pub const MAX_EXCEPTION_INDEX: u64 = 1_000_000_000;
pub const MAX_MATRIX_DIM: usize = 256;
pub const MAX_DIMENSION: u64 = 2000;
pub const MAX_TRUNC: u64 = 5000;

const KEYWORDS: [&str; 13] = [
    "set", "operator", "matrix", "group", "check", "diag", "seq", "mod", "strand", "except", "block", "j", "i",
];

const STATEMENTS: [&str; 5] = ["set", "operator", "matrix", "group", "check"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("line {line}, column {col}: expected {}, found {found}", expected.join(" or "))]
    Parse {
        line: usize,
        col: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("line {line}, column {col}: label `{label}` is already defined")]
    DuplicateLabel { line: usize, col: usize, label: String },
    #[error("line {line}, column {col}: unknown directive `{name}`")]
    UnknownDirective { line: usize, col: usize, name: String },
    #[error("line {line}, column {col}: `{label}` is not a defined {kind} label")]
    UnknownLabel {
        line: usize,
        col: usize,
        label: String,
        kind: &'static str,
    },
    #[error("line {line}, column {col}: {message}")]
    Invalid { line: usize, col: usize, message: String },
}

impl ScenarioError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ScenarioError::Parse { line, col, .. }
            | ScenarioError::DuplicateLabel { line, col, .. }
            | ScenarioError::UnknownDirective { line, col, .. }
            | ScenarioError::UnknownLabel { line, col, .. }
            | ScenarioError::Invalid { line, col, .. } => (*line, *col),
        }
    }
}

type PResult<T> = Result<T, ScenarioError>;

/// Parses a scenario file.
pub fn parse(src: &str) -> PResult<ScenarioSpec> {
    let toks = lex(src).map_err(|e| ScenarioError::Parse {
        line: e.line,
        col: e.col,
        expected: vec!["a token".into()],
        found: format!("`{}`", e.found),
    })?;
    let mut p = Parser {
        toks,
        pos: 0,
        labels: HashMap::new(),
        spec: ScenarioSpec::default(),
    };
    p.file()?;
    Ok(p.spec)
}

fn quoted(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| format!("`{s}`")).collect()
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    labels: HashMap<String, LabelKind>,
    spec: ScenarioSpec,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        &self.toks[(self.pos + ahead).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expected(&self, what: Vec<String>) -> ScenarioError {
        let t = self.peek();
        ScenarioError::Parse {
            line: t.line,
            col: t.col,
            expected: what,
            found: t.tok.to_string(),
        }
    }

    fn invalid(t: &Token, message: impl Into<String>) -> ScenarioError {
        ScenarioError::Invalid {
            line: t.line,
            col: t.col,
            message: message.into(),
        }
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(x) if *x == s)
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(x) if x == kw)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.at_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<Token> {
        if self.at_sym(s) {
            Ok(self.bump())
        } else {
            Err(self.expected(quoted(&[s])))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<Token> {
        if self.at_keyword(kw) {
            Ok(self.bump())
        } else {
            Err(self.expected(quoted(&[kw])))
        }
    }

    fn skip_newlines(&mut self) {
        while self.peek().tok == Tok::Newline {
            self.bump();
        }
    }

    fn end_statement(&mut self) -> PResult<()> {
        match self.peek().tok {
            Tok::Newline => {
                self.bump();
                Ok(())
            }
            Tok::Eof => Ok(()),
            _ => Err(self.expected(vec!["end of line".into()])),
        }
    }

    fn file(&mut self) -> PResult<()> {
        loop {
            self.skip_newlines();
            let t = self.peek().clone();
            match &t.tok {
                Tok::Eof => return Ok(()),
                Tok::Ident(kw) => match kw.as_str() {
                    "set" => self.set()?,
                    "operator" => self.operator()?,
                    "matrix" => self.matrix_def()?,
                    "group" => self.group()?,
                    "check" => self.check()?,
                    _ => {
                        return Err(ScenarioError::UnknownDirective {
                            line: t.line,
                            col: t.col,
                            name: kw.clone(),
                        })
                    }
                },
                _ => return Err(self.expected(quoted(&STATEMENTS))),
            }
            self.end_statement()?;
        }
    }

    fn number(&mut self) -> PResult<(Token, String)> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Number(s) => {
                let s = s.clone();
                self.bump();
                Ok((t, s))
            }
            _ => Err(self.expected(vec!["a number".into()])),
        }
    }

    fn uint(&mut self) -> PResult<(Token, u64)> {
        let (t, s) = self.number()?;
        if !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Self::invalid(&t, format!("`{s}` is not a nonnegative integer")));
        }
        let v = s.parse::<u64>().map_err(|_| Self::invalid(&t, format!("`{s}` is too large")))?;
        Ok((t, v))
    }

    fn uint_in(&mut self, lo: u64, hi: u64, what: &str) -> PResult<u64> {
        let (t, v) = self.uint()?;
        if v < lo || v > hi {
            return Err(Self::invalid(&t, format!("{what} must lie in {lo}..={hi}, got {v}")));
        }
        Ok(v)
    }

    /// `[-] number [/ number]`.
    fn rational(&mut self, signed: bool) -> PResult<(Token, Rational)> {
        let start = self.peek().clone();
        let neg = signed && self.eat_sym("-");
        let (_, num) = self.number()?;
        let mut text = num;
        if self.eat_sym("/") {
            let (_, den) = self.number()?;
            text = format!("{text}/{den}");
        }
        let r = parse_rational(&text).ok_or_else(|| Self::invalid(&start, format!("`{text}` is not a rational")))?;
        Ok((start, if neg { -r } else { r }))
    }

    fn label(&mut self) -> PResult<(Token, String)> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.bump();
                Ok((t, s))
            }
            _ => Err(self.expected(vec!["a label".into()])),
        }
    }

    fn define(&mut self, t: &Token, label: &str, kind: LabelKind) -> PResult<()> {
        if self.labels.contains_key(label) {
            return Err(ScenarioError::DuplicateLabel {
                line: t.line,
                col: t.col,
                label: label.to_string(),
            });
        }
        self.labels.insert(label.to_string(), kind);
        Ok(())
    }

    fn resolve(&self, t: &Token, label: &str, accept: &[LabelKind]) -> PResult<()> {
        match self.labels.get(label) {
            Some(k) if accept.contains(k) => Ok(()),
            _ => Err(ScenarioError::UnknownLabel {
                line: t.line,
                col: t.col,
                label: label.to_string(),
                kind: accept[0].noun(),
            }),
        }
    }

    fn set(&mut self) -> PResult<()> {
        self.bump();
        let t = self.peek().clone();
        let name = match &t.tok {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.expected(self.setting_names())),
        };
        self.bump();
        match name.as_str() {
            "seed" => {
                let (_, v) = self.uint()?;
                self.spec.settings.seed = Some(v);
            }
            "trunc" => {
                let v = self.uint_in(1, MAX_TRUNC, "trunc")?;
                self.spec.settings.trunc = Some(v as usize);
            }
            "jacobi_sweeps" => {
                let v = self.uint_in(1, 1000, "jacobi_sweeps")?;
                self.spec.settings.tolerances.insert(name, v as f64);
            }
            n if TOLERANCE_NAMES.contains(&n) => {
                let (vt, s) = self.number()?;
                let v: f64 = s
                    .parse()
                    .map_err(|_| Self::invalid(&vt, format!("`{s}` is not a number")))?;
                if !(v.is_finite() && v > 0.0) {
                    return Err(Self::invalid(&vt, format!("tolerance {n} must be positive and finite")));
                }
                self.spec.settings.tolerances.insert(name, v);
            }
            _ => {
                self.pos -= 1;
                return Err(self.expected(self.setting_names()));
            }
        }
        Ok(())
    }

    fn setting_names(&self) -> Vec<String> {
        let mut names = vec!["seed", "trunc"];
        names.extend(TOLERANCE_NAMES);
        quoted(&names)
    }

    fn operator(&mut self) -> PResult<()> {
        self.bump();
        let (lt, label) = self.label()?;
        self.expect_sym("=")?;
        self.expect_keyword("diag")?;
        let seq = if self.at_keyword("seq") {
            self.sequence()?
        } else {
            let t = self.peek().clone();
            let s = self.strand()?;
            SymbolicSequence::new(1, vec![s], BTreeMap::new()).map_err(|e| Self::invalid(&t, e.to_string()))?
        };
        let mut op = ModelOperator::new(label.clone(), seq);
        if self.at_keyword("block") {
            let bt = self.bump();
            let m = self.matrix_literal()?;
            if m.rows() != m.cols() {
                return Err(Self::invalid(&bt, "block must be square"));
            }
            op = op.with_block(m).map_err(|e| Self::invalid(&bt, e.to_string()))?;
        }
        self.define(&lt, &label, LabelKind::Operator)?;
        self.spec.definitions.push(Definition::Operator(op));
        Ok(())
    }

    fn sequence(&mut self) -> PResult<SymbolicSequence> {
        let st = self.bump();
        self.expect_keyword("mod")?;
        let modulus = self.uint_in(1, MAX_MODULUS, "modulus")? as usize;
        self.expect_sym("{")?;
        let mut strands: Vec<Option<Strand>> = vec![None; modulus];
        let mut exceptions = BTreeMap::new();
        loop {
            while self.peek().tok == Tok::Newline || self.at_sym(";") {
                self.bump();
            }
            if self.eat_sym("}") {
                break;
            }
            if self.at_keyword("strand") {
                self.bump();
                let (rt, r) = self.uint()?;
                if r >= modulus as u64 {
                    return Err(Self::invalid(&rt, format!("strand {r} is out of range for modulus {modulus}")));
                }
                self.expect_sym(":")?;
                let s = self.strand()?;
                if strands[r as usize].replace(s).is_some() {
                    return Err(Self::invalid(&rt, format!("strand {r} is given twice")));
                }
            } else if self.at_keyword("except") {
                self.bump();
                let (kt, k) = self.uint()?;
                if k == 0 || k > MAX_EXCEPTION_INDEX {
                    return Err(Self::invalid(&kt, format!("exception index must lie in 1..={MAX_EXCEPTION_INDEX}")));
                }
                self.expect_sym("->")?;
                let (_, v) = self.rational(true)?;
                if exceptions.insert(k, v).is_some() {
                    return Err(Self::invalid(&kt, format!("exception {k} is given twice")));
                }
            } else {
                return Err(self.expected(quoted(&["strand", "except", "}"])));
            }
            if !(self.at_sym(";") || self.at_sym("}") || self.peek().tok == Tok::Newline) {
                return Err(self.expected(quoted(&[";", "}"])));
            }
        }
        let strands = strands.into_iter().map(|s| s.unwrap_or_else(Strand::zero)).collect();
        SymbolicSequence::new(modulus, strands, exceptions).map_err(|e| Self::invalid(&st, e.to_string()))
    }

    /// `[-] term ((+|-) term)*` with `term = coeff (* factor)* | factor (* factor)*`.
    fn strand(&mut self) -> PResult<Strand> {
        let start = self.peek().clone();
        let mut terms = Vec::new();
        let mut negative = self.eat_sym("-");
        if !negative {
            self.eat_sym("+");
        }
        loop {
            let mut coeff = Rational::from_integer(1.into());
            let mut factors = Vec::new();
            if matches!(self.peek().tok, Tok::Number(_)) {
                coeff = self.rational(false)?.1;
            } else {
                factors.push(self.factor()?);
            }
            while self.eat_sym("*") {
                factors.push(self.factor()?);
            }
            terms.push((if negative { -coeff } else { coeff }, factors));
            if self.eat_sym("+") {
                negative = false;
            } else if self.eat_sym("-") {
                negative = true;
            } else {
                break;
            }
        }
        Strand::from_factored(terms).map_err(|e| Self::invalid(&start, e.to_string()))
    }

    /// `base ^ - exponent`.
    fn factor(&mut self) -> PResult<(Base, Rational)> {
        let base = self.base()?;
        self.expect_sym("^")?;
        self.expect_sym("-")?;
        let (et, e) = self.rational(false)?;
        let numer = e.numer().abs().to_u64().unwrap_or(u64::MAX);
        let denom = e.denom().to_u64().unwrap_or(u64::MAX);
        if e.is_zero() || numer > MAX_EXPONENT_NUMER || denom > MAX_EXPONENT_DENOM {
            return Err(Self::invalid(
                &et,
                format!("exponent must be a positive p/q with p <= {MAX_EXPONENT_NUMER}, q <= {MAX_EXPONENT_DENOM}"),
            ));
        }
        Ok((base, e))
    }

    /// `j` or `( [s] j [(+|-) o] )`.
    fn base(&mut self) -> PResult<Base> {
        if self.at_keyword("j") {
            self.bump();
            return Ok(Base::IDENTITY);
        }
        if !self.at_sym("(") {
            return Err(self.expected(vec!["a number".into(), "`j`".into(), "`(`".into()]));
        }
        let open = self.bump();
        let scale = if matches!(self.peek().tok, Tok::Number(_)) {
            self.uint_in(1, MAX_BASE_SCALE, "base scale")?
        } else {
            1
        };
        self.expect_keyword("j")?;
        let offset = if self.at_sym("+") || self.at_sym("-") {
            let neg = self.bump().tok == Tok::Sym("-");
            let o = self.uint_in(0, MAX_BASE_OFFSET, "base offset")? as i64;
            if neg {
                -o
            } else {
                o
            }
        } else {
            0
        };
        self.expect_sym(")")?;
        if (scale as i64) + offset < 1 {
            return Err(Self::invalid(&open, "base must be positive for j >= 1"));
        }
        Ok(Base { scale, offset })
    }

    fn matrix_def(&mut self) -> PResult<()> {
        self.bump();
        let (lt, label) = self.label()?;
        self.expect_sym("=")?;
        let matrix = self.matrix_literal()?;
        self.define(&lt, &label, LabelKind::Matrix)?;
        self.spec.definitions.push(Definition::Matrix { label, matrix });
        Ok(())
    }

    /// `[[a, b], [c, d]]`; newlines may appear inside.
    fn matrix_literal(&mut self) -> PResult<ExactMatrix> {
        let open = self.expect_sym("[")?;
        let mut rows = Vec::new();
        loop {
            self.skip_newlines();
            self.expect_sym("[")?;
            let mut row = Vec::new();
            loop {
                self.skip_newlines();
                row.push(self.entry()?);
                self.skip_newlines();
                if self.eat_sym("]") {
                    break;
                }
                self.expect_sym(",")?;
                if row.len() >= MAX_MATRIX_DIM {
                    return Err(Self::invalid(&open, format!("matrix dimensions are limited to {MAX_MATRIX_DIM}")));
                }
            }
            rows.push(row);
            self.skip_newlines();
            if self.eat_sym("]") {
                break;
            }
            self.expect_sym(",")?;
            if rows.len() >= MAX_MATRIX_DIM {
                return Err(Self::invalid(&open, format!("matrix dimensions are limited to {MAX_MATRIX_DIM}")));
            }
        }
        ExactMatrix::from_rows(rows).ok_or_else(|| Self::invalid(&open, "matrix rows differ in length"))
    }

    fn entry(&mut self) -> PResult<CRational> {
        let start = self.peek().clone();
        let mut text = String::new();
        loop {
            match &self.peek().tok {
                Tok::Number(s) => text.push_str(s),
                Tok::Ident(s) if s == "i" => text.push('i'),
                Tok::Sym(s) if matches!(*s, "+" | "-" | "/") => text.push_str(s),
                _ => break,
            }
            self.bump();
        }
        if text.is_empty() {
            return Err(self.expected(vec!["a matrix entry".into()]));
        }
        CRational::parse(&text).ok_or_else(|| Self::invalid(&start, format!("`{text}` is not a complex rational")))
    }

    fn group(&mut self) -> PResult<()> {
        self.bump();
        let (lt, label) = self.label()?;
        self.expect_sym("=")?;
        let mut members = Vec::new();
        while matches!(self.peek().tok, Tok::Ident(_)) {
            let (mt, m) = self.label()?;
            self.resolve(&mt, &m, &[LabelKind::Operator])?;
            members.push(m);
        }
        if members.is_empty() {
            return Err(self.expected(vec!["an operator label".into()]));
        }
        self.define(&lt, &label, LabelKind::Group)?;
        self.spec.definitions.push(Definition::Group { label, members });
        Ok(())
    }

    fn check(&mut self) -> PResult<()> {
        let ct = self.bump();
        let it = self.peek().clone();
        let mut name = match &it.tok {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.expected(vec!["a check name".into()])),
        };
        self.bump();
        while self.at_sym("-") && matches!(self.peek_at(1), Tok::Ident(_)) {
            self.bump();
            if let Tok::Ident(s) = &self.bump().tok {
                name = format!("{name}-{s}");
            }
        }
        let check = CheckKind::from_name(&name).ok_or_else(|| ScenarioError::UnknownDirective {
            line: it.line,
            col: it.col,
            name: name.clone(),
        })?;
        let accept: &[LabelKind] = match check.label_kind() {
            LabelKind::Group => &[LabelKind::Group, LabelKind::Operator],
            LabelKind::Operator => &[LabelKind::Operator],
            LabelKind::Matrix => &[LabelKind::Matrix],
        };
        let mut labels = Vec::new();
        let mut params = BTreeMap::new();
        while let Tok::Ident(word) = &self.peek().tok {
            if *self.peek_at(1) == Tok::Sym("=") {
                let pt = self.peek().clone();
                let key = word.clone();
                let Some(&(key, kind)) = check.params().iter().find(|(p, _)| *p == key) else {
                    let names: Vec<&str> = check.params().iter().map(|(p, _)| *p).collect();
                    return Err(self.expected(if names.is_empty() {
                        vec!["end of line".into()]
                    } else {
                        quoted(&names)
                    }));
                };
                self.bump();
                self.bump();
                let value = self.param_value(key, kind)?;
                if params.insert(key.to_string(), value).is_some() {
                    return Err(Self::invalid(&pt, format!("parameter {key} is given twice")));
                }
            } else {
                let (lt, l) = self.label()?;
                self.resolve(&lt, &l, accept)?;
                labels.push(l);
            }
        }
        let (min, max) = check.arity();
        if labels.len() < min || max.is_some_and(|m| labels.len() > m) {
            let want = match max {
                Some(m) if m == min => format!("exactly {m}"),
                Some(m) => format!("{min} to {m}"),
                None => format!("at least {min}"),
            };
            return Err(Self::invalid(
                &ct,
                format!("check {name} takes {want} label(s), got {}", labels.len()),
            ));
        }
        for req in check.required() {
            if !params.contains_key(*req) {
                return Err(Self::invalid(&ct, format!("check {name} requires {req}=...")));
            }
        }
        self.spec.directives.push(Directive { check, labels, params });
        Ok(())
    }

    fn param_value(&mut self, key: &str, kind: ParamKind) -> PResult<ParamValue> {
        Ok(match kind {
            ParamKind::Rational => {
                let (t, r) = self.rational(true)?;
                if matches!(key, "eps" | "delta") && !r.is_positive() {
                    return Err(Self::invalid(&t, format!("{key} must be positive")));
                }
                ParamValue::Rational(r)
            }
            ParamKind::Int => {
                let (lo, hi) = match key {
                    "n" => (1, MAX_DIMENSION),
                    "trunc" => (1, MAX_TRUNC),
                    "rank" => (1, 64),
                    "length" => (1, 10_000),
                    "samples" => (1, 100_000),
                    _ => (1, u64::MAX),
                };
                ParamValue::Int(self.uint_in(lo, hi, key)?)
            }
            ParamKind::List => {
                let mut v = vec![self.uint_in(1, MAX_DIMENSION, key)?];
                while self.eat_sym(",") {
                    v.push(self.uint_in(1, MAX_DIMENSION, key)?);
                    if v.len() > 16 {
                        return Err(self.expected(vec!["at most 16 sizes".into()]));
                    }
                }
                ParamValue::List(v)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    const SAMPLE: &str = "\
# two operators
set seed 7
set eig 1e-11
operator A = diag seq mod 2 {
  strand 0: 1 - 1/2*j^-1
  strand 1: j^-2; except 3 -> -1/4
}
operator B = diag 2*(2j+1)^-3/2 block [[1, 1/2-1i], [1/2+i, 0]]
matrix M = [[1, 0], [0, 1]]
group G = A B
check main A B
check schedule A B length=20
check lemma41 A B eps=0.1 delta=1/100
check converge A sizes=10,20
check gram-gap M
check grouped G A
";

    #[test]
    fn parses_a_sample() {
        let s = parse(SAMPLE).unwrap();
        assert_eq!(s.settings.seed, Some(7));
        assert_eq!(s.settings.tolerances["eig"], 1e-11);
        assert_eq!(s.definitions.len(), 4);
        let a = s.operator("A").unwrap();
        assert_eq!(a.diag().modulus(), 2);
        assert_eq!(a.diag().eval(1).unwrap(), rat(1, 2));
        assert_eq!(a.diag().eval(3).unwrap(), rat(-1, 4));
        assert_eq!(a.diag().eval(4).unwrap(), rat(1, 4));
        let b = s.operator("B").unwrap();
        assert_eq!(b.block().unwrap().rows(), 2);
        assert_eq!(s.directives.len(), 6);
        assert_eq!(s.directives[2].rational("eps"), Some(&rat(1, 10)));
        assert_eq!(s.directives[3].list("sizes"), Some(&[10u64, 20][..]));
        assert_eq!(s.directives[4].check, CheckKind::GramGap);
        assert_eq!(s.group("G").unwrap().len(), 2);
        let _ = int(0);
    }

    #[test]
    fn canonical_form_is_a_fixed_point() {
        let once = parse(SAMPLE).unwrap().to_string();
        let spec = parse(&once).unwrap();
        assert_eq!(spec.to_string(), once);
        assert_eq!(spec, parse(SAMPLE).unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        match parse("operator A = diag 1\ncheck main A B\n").unwrap_err() {
            ScenarioError::UnknownLabel { line, col, label, .. } => {
                assert_eq!((line, col, label.as_str()), (2, 14, "B"));
            }
            e => panic!("{e}"),
        }
        match parse("operator A = diag 1\noperator A = diag 2\n").unwrap_err() {
            ScenarioError::DuplicateLabel { line, .. } => assert_eq!(line, 2),
            e => panic!("{e}"),
        }
        match parse("check frobnicate A\n").unwrap_err() {
            ScenarioError::UnknownDirective { name, .. } => assert_eq!(name, "frobnicate"),
            e => panic!("{e}"),
        }
        match parse("operator A = diag 1 +\n").unwrap_err() {
            ScenarioError::Parse { line, col, expected, .. } => {
                assert_eq!((line, col), (1, 22));
                assert!(expected.contains(&"`j`".to_string()));
            }
            e => panic!("{e}"),
        }
        assert!(matches!(
            parse("operator A = diag j^-0\n").unwrap_err(),
            ScenarioError::Invalid { .. }
        ));
        assert!(matches!(
            parse("operator A = diag 1\ncheck lemma41 A A\n").unwrap_err(),
            ScenarioError::Invalid { .. }
        ));
    }

    #[test]
    fn empty_input_is_empty_spec() {
        assert_eq!(parse("").unwrap(), ScenarioSpec::default());
        assert_eq!(parse("# nothing\n\n").unwrap().to_string(), "");
    }
}
