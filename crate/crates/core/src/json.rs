//! JSON encodings shared by certificates and reports.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::rational::Rational;
use crate::seq::{CountResult, IndexSet};

/// Longest explicit index list written into a report.
pub const MAX_LISTED: usize = 200;

pub fn rat(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn rats<'a>(rs: impl IntoIterator<Item = &'a Rational>) -> Value {
    Value::Array(rs.into_iter().map(rat).collect())
}

pub fn rat_set(s: &BTreeSet<Rational>) -> Value {
    rats(s.iter())
}

/// Finite floats as numbers, everything else as strings.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::String(x.to_string())
    }
}

pub fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| float(x)).collect())
}

pub fn indices(list: &[u64]) -> Value {
    if list.len() <= MAX_LISTED {
        json!(list)
    } else {
        json!({"first": &list[..MAX_LISTED], "total": list.len()})
    }
}

pub fn index_set(s: &IndexSet) -> Value {
    let include: Vec<u64> = s.overrides().iter().filter(|(_, &v)| v).map(|(&k, _)| k).collect();
    let exclude: Vec<u64> = s.overrides().iter().filter(|(_, &v)| !v).map(|(&k, _)| k).collect();
    json!({
        "modulus": s.modulus(),
        "strands": s.strands().iter().map(|j| j.to_string()).collect::<Vec<_>>(),
        "include": include,
        "exclude": exclude,
    })
}

pub fn count_result(c: &CountResult) -> Value {
    match c {
        CountResult::Finite { count, indices: list } => json!({
            "type": "finite",
            "count": count,
            "indices": indices(list),
        }),
        CountResult::Infinite { witness_strand, modulus } => json!({
            "type": "infinite",
            "witness_strand": witness_strand,
            "modulus": modulus,
        }),
    }
}

/// Moves the `type` field of an object to the front, followed by `strand` when present.
pub fn type_first(v: Value) -> Value {
    match v {
        Value::Object(mut map) => {
            let mut out = serde_json::Map::new();
            for key in ["type", "strand"] {
                if let Some(x) = map.shift_remove(key) {
                    out.insert(key.into(), x);
                }
            }
            out.extend(map);
            Value::Object(out)
        }
        other => other,
    }
}
