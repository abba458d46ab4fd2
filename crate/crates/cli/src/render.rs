//! JSON, text and CSV output.

use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::exec::Report;
use crate::job::{Format, JobSpec};

pub const SCHEMA: &str = "davkit/1";

/// The full JSON document. Field order is fixed; `stats` is dropped when
/// `with_stats` is false so that reruns are byte-identical.
pub fn document(spec: &JobSpec, report: &Report, with_stats: bool) -> Value {
    let mut doc = Map::new();
    doc.insert("schema".into(), json!(SCHEMA));
    doc.insert("command".into(), json!(spec.command.name()));
    doc.insert(
        "input".into(),
        json!({"ground": spec.ground, "parameters": spec.parameters}),
    );
    doc.insert("result".into(), report.result.clone());
    doc.insert("provenance".into(), json!(report.provenance));
    doc.insert("exact".into(), json!(report.exact));
    if with_stats {
        doc.insert("stats".into(), report.stats.clone());
    }
    Value::Object(doc)
}

pub fn render(spec: &JobSpec, report: &Report, with_stats: bool) -> Result<String, CliError> {
    match spec.output {
        Format::Json => {
            let mut out = serde_json::to_string_pretty(&document(spec, report, with_stats)).expect("JSON output");
            out.push('\n');
            Ok(out)
        }
        Format::Text => Ok(text(spec, report, with_stats)),
        Format::Csv => csv(report),
    }
}

fn csv(report: &Report) -> Result<String, CliError> {
    let atoms = report
        .table
        .as_ref()
        .ok_or_else(|| CliError::usage("csv output is only available for atom lists"))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::usage(format!("csv: {e}"));
    w.write_record(["index", "length", "atom"]).map_err(io)?;
    for (i, a) in atoms.iter().enumerate() {
        w.write_record([i.to_string(), a.len().to_string(), a.to_string()])
            .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Serialized sequences carry their display form under `text`.
fn sequence_text(v: &Value) -> Option<&str> {
    let obj = v.as_object()?;
    if obj.contains_key("entries") && obj.contains_key("length") {
        obj.get("text")?.as_str()
    } else {
        None
    }
}

/// A lattice point in sequence notation: `3` or `(1,-2)`.
fn point(coords: &[Value]) -> String {
    let parts: Vec<String> = coords.iter().map(Value::to_string).collect();
    match parts.as_slice() {
        [c] => c.clone(),
        _ => format!("({})", parts.join(",")),
    }
}

fn inline(v: &Value) -> Option<String> {
    if let Some(t) = sequence_text(v) {
        return Some(t.to_string());
    }
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items
                .iter()
                .map(|x| match x {
                    Value::Object(_) if sequence_text(x).is_none() => None,
                    Value::Array(coords) if !coords.is_empty() && coords.iter().all(Value::is_i64) => {
                        Some(point(coords))
                    }
                    Value::Array(inner) if inner.iter().any(|y| y.is_object() || y.is_array()) => None,
                    _ => inline(x),
                })
                .collect();
            let parts = parts?;
            let joined = parts.join(", ");
            (joined.len() <= 100).then(|| format!("[{joined}]"))
        }
        Value::Object(_) => None,
    }
}

fn lines(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(obj) => {
            for (k, x) in obj {
                match inline(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        lines(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match inline(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        lines(x, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other).unwrap_or_default())),
    }
}

fn text(spec: &JobSpec, report: &Report, with_stats: bool) -> String {
    let mut out = String::new();
    match &spec.ground {
        Some(g) => out.push_str(&format!("{} {g}\n", spec.command)),
        None => out.push_str(&format!("{}\n", spec.command)),
    }
    lines(&report.result, 0, &mut out);
    out.push_str(&format!("exact: {}\n", report.exact));
    if !report.provenance.is_empty() {
        out.push_str(&format!("provenance: {}\n", report.provenance.join(", ")));
    }
    if with_stats {
        if let Some(s) = inline(&report.stats).or_else(|| {
            report
                .stats
                .as_object()
                .map(|o| o.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" "))
        }) {
            out.push_str(&format!("stats: {s}\n"));
        }
    }
    out
}
