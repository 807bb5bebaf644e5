//! Output envelope and the text rendering of a JSON record.

use std::fmt::Write;

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// Arrays longer than this are elided in text output.
const MAX_ITEMS: usize = 12;

/// The record every subcommand prints: `schema_version`, `command`, `status`,
/// then the report's own fields.
pub fn envelope(command: &str, failed: bool, report: &impl Serialize) -> serde_json::Result<Value> {
    let mut map = Map::new();
    map.insert("schema_version".into(), SCHEMA_VERSION.into());
    map.insert("command".into(), command.into());
    map.insert("status".into(), if failed { "fail" } else { "pass" }.into());
    match serde_json::to_value(report)? {
        Value::Object(fields) => map.extend(fields),
        other => {
            map.insert("report".into(), other);
        }
    }
    Ok(Value::Object(map))
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.is_empty() => Some("[]".into()),
        Value::Array(items)
            if items
                .iter()
                .all(|x| x.is_number() || x.is_boolean() || x.is_null()) =>
        {
            let shown: Vec<String> = items.iter().take(MAX_ITEMS).filter_map(scalar).collect();
            let more = items.len().saturating_sub(MAX_ITEMS);
            Some(if more > 0 {
                format!("[{}, ... {more} more]", shown.join(", "))
            } else {
                format!("[{}]", shown.join(", "))
            })
        }
        Value::Object(m) if m.is_empty() => Some("{}".into()),
        // `{exact, approx}` pairs from rationals.
        Value::Object(m) if m.len() == 2 && m.contains_key("exact") && m.contains_key("approx") => {
            Some(format!(
                "{} (~{})",
                scalar(&m["exact"])?,
                scalar(&m["approx"])?
            ))
        }
        _ => None,
    }
}

fn walk(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar(v) {
        let _ = writeln!(out, "{pad}{key}: {s}");
        return;
    }
    let _ = writeln!(out, "{pad}{key}:");
    match v {
        // Lists of strings are short messages; show all of them.
        Value::Array(items) if items.iter().all(Value::is_string) => {
            for x in items {
                let _ = writeln!(out, "{pad}  - {}", x.as_str().unwrap_or_default());
            }
        }
        Value::Object(m) => {
            for (k, x) in m {
                walk(out, k, x, depth + 1);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate().take(MAX_ITEMS) {
                walk(out, &format!("[{i}]"), x, depth + 1);
            }
            if items.len() > MAX_ITEMS {
                let _ = writeln!(out, "{pad}  ... {} more", items.len() - MAX_ITEMS);
            }
        }
        _ => unreachable!("scalars are handled above"),
    }
}

/// Indented `key: value` lines.
pub fn text(record: &Value) -> String {
    let mut out = String::new();
    match record {
        Value::Object(m) => {
            for (k, v) in m {
                walk(&mut out, k, v, 0);
            }
        }
        other => walk(&mut out, "value", other, 0),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn renders_nested_records() {
        let v = json!({"a": 1, "r": {"exact": "1/2", "approx": 0.5}, "xs": [1, 2], "o": {"b": [{"c": true}]}});
        assert_eq!(
            text(&v),
            "a: 1\nr: 1/2 (~0.5)\nxs: [1, 2]\no:\n  b:\n    [0]:\n      c: true\n"
        );
    }

    #[test]
    fn long_arrays_are_elided() {
        let v = json!({"xs": (0..20).collect::<Vec<_>>()});
        assert!(text(&v).ends_with("11, ... 8 more]\n"));
    }

    #[test]
    fn envelope_fields_come_first() {
        let v = envelope("hnf", false, &json!({"count": 3})).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["schema_version", "command", "status", "count"]);
    }
}
