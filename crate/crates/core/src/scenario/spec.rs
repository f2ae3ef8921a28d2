//! Parsed scenarios and their canonical text form.

use std::collections::BTreeMap;
use std::fmt;

use crate::exact::ExactMatrix;
use crate::operator::ModelOperator;
use crate::rational::Rational;

/// What a label names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelKind {
    Operator,
    Matrix,
    Group,
}

impl LabelKind {
    pub fn noun(self) -> &'static str {
        match self {
            LabelKind::Operator => "operator",
            LabelKind::Matrix => "matrix",
            LabelKind::Group => "group",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Rational,
    Int,
    List,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Rational(Rational),
    Int(u64),
    List(Vec<u64>),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Rational(r) => write!(f, "{r}"),
            ParamValue::Int(n) => write!(f, "{n}"),
            ParamValue::List(v) => {
                let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

macro_rules! checks {
    ($($variant:ident => $name:literal, $kind:ident, $min:literal, $max:expr, [$(($p:literal, $pk:ident)),*];)*) => {
        /// The directives a scenario can run.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum CheckKind {
            $($variant,)*
        }

        impl CheckKind {
            pub const ALL: &'static [CheckKind] = &[$(CheckKind::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(CheckKind::$variant => $name,)*
                }
            }

            /// Kind of label arguments accepted.
            pub fn label_kind(self) -> LabelKind {
                match self {
                    $(CheckKind::$variant => LabelKind::$kind,)*
                }
            }

            /// Minimum and maximum number of labels.
            pub fn arity(self) -> (usize, Option<usize>) {
                match self {
                    $(CheckKind::$variant => ($min, $max),)*
                }
            }

            pub fn params(self) -> &'static [(&'static str, ParamKind)] {
                match self {
                    $(CheckKind::$variant => &[$(($p, ParamKind::$pk)),*],)*
                }
            }
        }
    };
}

checks! {
    Hypotheses => "hypotheses", Operator, 2, None, [];
    TheoremA => "theorem-a", Operator, 1, None, [];
    Main => "main", Operator, 1, None, [];
    Schedule => "schedule", Operator, 1, None, [("length", Int), ("budget", Int)];
    Closedness => "closedness", Operator, 1, None, [];
    SingleRange => "single-range", Operator, 1, Some(1), [];
    Coercivity => "coercivity", Matrix, 1, None, [("samples", Int)];
    Cor23 => "cor23", Matrix, 1, None, [];
    Lemma41 => "lemma41", Operator, 2, Some(2), [("eps", Rational), ("delta", Rational)];
    GramGap => "gram-gap", Matrix, 1, None, [];
    Ineq41 => "ineq41", Operator, 1, None, [("eps", Rational), ("trunc", Int)];
    Grouped => "grouped", Group, 1, None, [];
    Transfer => "transfer", Operator, 2, Some(2), [("lambda", Rational), ("length", Int), ("n", Int)];
    Truncate => "truncate", Operator, 1, Some(1), [("n", Int)];
    Converge => "converge", Operator, 1, Some(1), [("sizes", List)];
    Weyl => "weyl", Operator, 1, Some(1), [("rank", Int), ("n", Int)];
    NumericCore => "numeric-core", Operator, 1, None, [("eps", Rational), ("n", Int)];
}

impl CheckKind {
    pub fn from_name(name: &str) -> Option<CheckKind> {
        CheckKind::ALL.iter().copied().find(|c| c.name() == name)
    }

    /// Parameters without a default.
    pub fn required(self) -> &'static [&'static str] {
        match self {
            CheckKind::Lemma41 => &["eps", "delta"],
            CheckKind::Ineq41 | CheckKind::NumericCore => &["eps"],
            CheckKind::Transfer => &["lambda"],
            _ => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Directive {
    pub check: CheckKind,
    pub labels: Vec<String>,
    pub params: BTreeMap<String, ParamValue>,
}

impl Directive {
    pub fn rational(&self, key: &str) -> Option<&Rational> {
        match self.params.get(key) {
            Some(ParamValue::Rational(r)) => Some(r),
            _ => None,
        }
    }

    pub fn int(&self, key: &str) -> Option<u64> {
        match self.params.get(key) {
            Some(ParamValue::Int(n)) => Some(*n),
            _ => None,
        }
    }

    pub fn list(&self, key: &str) -> Option<&[u64]> {
        match self.params.get(key) {
            Some(ParamValue::List(v)) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Directive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "check {}", self.check.name())?;
        for l in &self.labels {
            write!(f, " {l}")?;
        }
        for (name, _) in self.check.params() {
            if let Some(v) = self.params.get(*name) {
                write!(f, " {name}={v}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Definition {
    Operator(ModelOperator),
    Matrix { label: String, matrix: ExactMatrix },
    Group { label: String, members: Vec<String> },
}

impl Definition {
    pub fn label(&self) -> &str {
        match self {
            Definition::Operator(o) => o.label(),
            Definition::Matrix { label, .. } | Definition::Group { label, .. } => label,
        }
    }
}

impl fmt::Display for Definition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Definition::Operator(o) => {
                write!(f, "operator {} = diag {}", o.label(), o.diag())?;
                if let Some(b) = o.block() {
                    write!(f, " block {b}")?;
                }
                Ok(())
            }
            Definition::Matrix { label, matrix } => write!(f, "matrix {label} = {matrix}"),
            Definition::Group { label, members } => write!(f, "group {label} = {}", members.join(" ")),
        }
    }
}

/// Tolerance names accepted by `set`, in canonical order.
pub const TOLERANCE_NAMES: [&str; 9] = [
    "eig",
    "gap",
    "rank",
    "orth",
    "proj",
    "containment",
    "cluster",
    "jacobi_off",
    "jacobi_sweeps",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub seed: Option<u64>,
    pub trunc: Option<usize>,
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScenarioSpec {
    pub settings: Settings,
    pub definitions: Vec<Definition>,
    pub directives: Vec<Directive>,
}

impl ScenarioSpec {
    pub fn definition(&self, label: &str) -> Option<&Definition> {
        self.definitions.iter().find(|d| d.label() == label)
    }

    pub fn operator(&self, label: &str) -> Option<&ModelOperator> {
        match self.definition(label) {
            Some(Definition::Operator(o)) => Some(o),
            _ => None,
        }
    }

    pub fn matrix(&self, label: &str) -> Option<&ExactMatrix> {
        match self.definition(label) {
            Some(Definition::Matrix { matrix, .. }) => Some(matrix),
            _ => None,
        }
    }

    /// Members of a group; an operator label stands for a group of one.
    pub fn group(&self, label: &str) -> Option<Vec<&ModelOperator>> {
        match self.definition(label) {
            Some(Definition::Group { members, .. }) => members.iter().map(|m| self.operator(m)).collect(),
            Some(Definition::Operator(o)) => Some(vec![o]),
            _ => None,
        }
    }
}

impl fmt::Display for ScenarioSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = self.settings.seed {
            writeln!(f, "set seed {s}")?;
        }
        if let Some(t) = self.settings.trunc {
            writeln!(f, "set trunc {t}")?;
        }
        for name in TOLERANCE_NAMES {
            if let Some(v) = self.settings.tolerances.get(name) {
                writeln!(f, "set {name} {v:e}")?;
            }
        }
        for d in &self.definitions {
            writeln!(f, "{d}")?;
        }
        for d in &self.directives {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}
