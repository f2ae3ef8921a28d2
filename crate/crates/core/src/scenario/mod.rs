//! The scenario language: parsing, canonical form, execution and reports.

mod lexer;
mod parser;
mod report;
mod runner;
mod spec;

pub use parser::{parse, ScenarioError};
pub use report::{exit_code, key_scalar, render_csv, render_lab_csv, render_json, to_json, ReportOptions, SCHEMA_VERSION};
pub use runner::{run, run_directive, splitmix, CheckResult, Overrides, Resolved, Status};
pub use spec::{
    CheckKind, Definition, Directive, LabelKind, ParamKind, ParamValue, ScenarioSpec, Settings, TOLERANCE_NAMES,
};
