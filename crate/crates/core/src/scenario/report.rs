//! JSON and CSV renderings of check results.

use serde_json::{json, Map, Value};

use super::runner::{CheckResult, Resolved, Status};
use super::spec::{CheckKind, ParamValue};

pub const SCHEMA_VERSION: u64 = 1;

/// Options that change the rendering but not the results.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReportOptions {
    pub timing: bool,
}

fn param_json(v: &ParamValue) -> Value {
    match v {
        ParamValue::Rational(r) => Value::String(r.to_string()),
        ParamValue::Int(n) => json!(n),
        ParamValue::List(l) => json!(l),
    }
}

pub fn result_json(r: &CheckResult, settings: &Resolved, opts: ReportOptions) -> Value {
    let mut params = Map::new();
    for (k, v) in &r.params {
        params.insert(k.clone(), param_json(v));
    }
    json!({
        "check": r.check.name(),
        "inputs": {"labels": r.labels, "params": params},
        "verdict": r.verdict,
        "status": r.status.as_str(),
        "certificate": r.certificate,
        "tolerances": settings.tolerances.to_json(),
        "seed": r.seed,
        "timing": if opts.timing { json!({"ms": r.elapsed_ms}) } else { Value::Null },
    })
}

pub fn to_json(results: &[CheckResult], settings: &Resolved, opts: ReportOptions) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "results": results.iter().map(|r| result_json(r, settings, opts)).collect::<Vec<_>>(),
        "settings": settings.to_json(),
    })
}

/// Pretty-printed JSON with a trailing newline.
pub fn render_json(results: &[CheckResult], settings: &Resolved, opts: ReportOptions) -> String {
    let mut s = serde_json::to_string_pretty(&to_json(results, settings, opts)).expect("values serialize");
    s.push('\n');
    s
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        _ => None,
    }
}

/// `strand` or `eps` when present, else the first scalar field other than `type`.
pub fn key_scalar(certificate: &Value) -> String {
    let Value::Object(map) = certificate else {
        return String::new();
    };
    ["strand", "eps"]
        .iter()
        .find_map(|k| map.get(*k).and_then(scalar))
        .or_else(|| map.iter().filter(|(k, _)| *k != "type").find_map(|(_, v)| scalar(v)))
        .unwrap_or_default()
}

pub fn label_args(r: &CheckResult) -> String {
    let mut parts: Vec<String> = r.labels.clone();
    parts.extend(r.params.iter().map(|(k, v)| format!("{k}={v}")));
    parts.join(" ")
}

pub fn render_csv(results: &[CheckResult], opts: ReportOptions) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["check", "label-args", "verdict", "key-certificate-scalar"];
    if opts.timing {
        header.push("ms");
    }
    w.write_record(&header).expect("in-memory write");
    for r in results {
        let mut row = vec![r.check.name().to_string(), label_args(r), r.verdict.clone(), key_scalar(&r.certificate)];
        if opts.timing {
            row.push(format!("{:.3}", r.elapsed_ms));
        }
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Truncation-lab rows `label,size,cluster_center,cluster_count,hausdorff` for every `converge` result.
pub fn render_lab_csv(results: &[CheckResult]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["label", "size", "cluster_center", "cluster_count", "hausdorff"])
        .expect("in-memory write");
    for r in results.iter().filter(|r| r.check == CheckKind::Converge && r.status == Status::Ok) {
        for size in r.certificate["per_size"].as_array().into_iter().flatten() {
            let hausdorff = scalar(&size["hausdorff_to_essential"]).unwrap_or_default();
            for c in size["clusters"].as_array().into_iter().flatten() {
                let row = [
                    r.labels[0].clone(),
                    scalar(&size["n"]).unwrap_or_default(),
                    scalar(&c["center"]).unwrap_or_default(),
                    scalar(&c["count"]).unwrap_or_default(),
                    hausdorff.clone(),
                ];
                w.write_record(&row).expect("in-memory write");
            }
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// 0 when every check held, 1 on an internal error, 2 on a violation or refusal.
pub fn exit_code(results: &[CheckResult]) -> i32 {
    if results.iter().any(|r| r.status == Status::Error) {
        1
    } else if results.iter().any(|r| matches!(r.status, Status::Violation | Status::Refused)) {
        2
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{parse, run, Overrides};

    #[test]
    fn empty_report_shape() {
        let spec = parse("").unwrap();
        let settings = Resolved::new(&spec, &Overrides::default());
        let v = to_json(&[], &settings, ReportOptions::default());
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["schema_version", "results", "settings"]);
        assert_eq!(v["results"], json!([]));
        assert_eq!(exit_code(&[]), 0);
    }

    #[test]
    fn csv_columns() {
        let spec = parse("operator A = diag j^-1\noperator B = diag 1\ncheck main A B\ncheck lemma41 A B eps=1/2 delta=1/2\n").unwrap();
        let settings = Resolved::new(&spec, &Overrides::default());
        let results = run(&spec, &settings, 1);
        let csv = render_csv(&results, ReportOptions::default());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "check,label-args,verdict,key-certificate-scalar");
        assert!(lines[1].starts_with("main,A B,"));
        assert!(lines[2].starts_with("lemma41,A B eps=1/2 delta=1/2,Finite,"));
        let json = render_json(&results, &settings, ReportOptions::default());
        assert!(json.contains("\"timing\": null"));
    }

    #[test]
    fn lab_rows() {
        let spec = parse("operator T = diag seq mod 2 { strand 0: 1 + 1*j^-1; strand 1: -1 }\ncheck converge T sizes=20,40\ncheck main T\n").unwrap();
        let settings = Resolved::new(&spec, &Overrides::default());
        let csv = render_lab_csv(&run(&spec, &settings, 1));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "label,size,cluster_center,cluster_count,hausdorff");
        assert!(lines.len() > 2);
        assert!(lines[1..].iter().all(|l| l.starts_with("T,20,") || l.starts_with("T,40,")));
    }
}
