use std::fmt::Write as _;

use serde_json::Value;

use super::run::{Report, Section};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Stable-keyed JSON: object keys are sorted, so identical reports give identical bytes.
pub fn to_json(report: &Report) -> String {
    let v = serde_json::to_value(report).expect("reports serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

pub fn emit(report: &Report, format: Format, timing: bool) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Text => to_text(report, timing),
    }
}

fn compact(v: &Value) -> String {
    v.to_string()
}

fn is_matrix(v: &Value) -> bool {
    v.get("p").is_some() && v.get("entries").is_some() && v.get("rows").is_some()
}

fn matrix_lines(v: &Value, indent: &str) -> Vec<String> {
    let mut out = vec![format!(
        "{indent}F_{} {}x{}",
        v["p"], v["rows"], v["cols"]
    )];
    if let Some(rows) = v["entries"].as_array() {
        for r in rows {
            let xs: Vec<String> = r
                .as_array()
                .into_iter()
                .flatten()
                .map(|x| format!("{:>4}", compact(x)))
                .collect();
            out.push(format!("{indent}  [{}]", xs.join("")));
        }
    }
    out
}

/// `label  c1 c2 ..` rows of a nested integer array.
fn table(name: &str, rows: &Value, row_label: char, col_label: char) -> Vec<String> {
    let Some(rows) = rows.as_array() else {
        return vec![];
    };
    let ncols = rows.first().and_then(|r| r.as_array()).map_or(0, |r| r.len());
    let mut out = Vec::new();
    let head: String = (1..=ncols).map(|j| format!("{:>5}", format!("{col_label}{j}"))).collect();
    out.push(format!("  {name:<8}{head}"));
    for (i, r) in rows.iter().enumerate() {
        let cells: String = r
            .as_array()
            .into_iter()
            .flatten()
            .map(|c| format!("{:>5}", compact(c)))
            .collect();
        out.push(format!("  {:<8}{cells}", format!("{row_label}{}", i + 1)));
    }
    out
}

fn generic(v: &Value, skip: &[&str]) -> Vec<String> {
    let mut out = Vec::new();
    if let Value::Object(m) = v {
        for (k, x) in m {
            if skip.contains(&k.as_str()) {
                continue;
            }
            if is_matrix(x) {
                out.push(format!("  {k}:"));
                out.extend(matrix_lines(x, "    "));
            } else {
                out.push(format!("  {k}: {}", compact(x)));
            }
        }
    }
    out
}

fn witness_text(w: &Value) -> String {
    if w.is_null() {
        return String::new();
    }
    let s = if let Some(f) = w.get("factor") {
        format!("S{} has composition factor S{}", w["simple"], f)
    } else if let Some(s) = w.get("simple") {
        format!("S{s} is sent to zero")
    } else if let Some(k) = w.get("killed_set") {
        format!("killed set {}", compact(k))
    } else if let Some(c) = w.get("corner") {
        format!("corner on {} with central element {}", compact(c), compact(&w["element"]))
    } else if let Some(c) = w.get("central") {
        format!("central element {}", compact(c))
    } else {
        compact(w)
    };
    format!("  witness: {s}")
}

const PREDICATES: [&str; 10] = [
    "faithful_f",
    "faithful_g",
    "right_localizing",
    "left_localizing",
    "localizing",
    "localizing_with_zero",
    "localizing_without_zero",
    "centralizing",
    "locally_centralizing",
    "dual_centralizing",
];

fn classify_lines(v: &Value) -> Vec<String> {
    let mut out = Vec::new();
    for p in PREDICATES {
        let x = &v[p];
        let verdict = match x.get("holds").and_then(Value::as_bool) {
            Some(true) => "yes",
            Some(false) => "no",
            None => "n/a",
        };
        out.push(format!("  {p:<24}{verdict:<4}{}", witness_text(&x["witness"])).trim_end().to_string());
    }
    out.extend(generic(v, &PREDICATES));
    out
}

fn ranks_lines(v: &Value) -> Vec<String> {
    let mut out = table("rrk", &v["rrk"], 'x', 'y');
    out.extend(table("lrk", &v["lrk"], 'y', 'x'));
    out.extend(generic(v, &["rrk", "lrk"]));
    out
}

fn section_text(s: &Section, timing: bool) -> String {
    let mut out = String::new();
    let line = s.line.map(|l| format!(" (line {l})")).unwrap_or_default();
    let _ = writeln!(out, "== {} {}{line}", s.task, s.args.join(" "));
    let body = if let Some(e) = s.result.get("error") {
        vec![format!("  error: {}: {}", e["kind"].as_str().unwrap_or(""), e["message"].as_str().unwrap_or(""))]
    } else {
        match s.task.as_str() {
            "ranks" => ranks_lines(&s.result),
            "classify" => classify_lines(&s.result),
            _ => generic(&s.result, &[]),
        }
    };
    for l in body {
        let _ = writeln!(out, "{l}");
    }
    for e in &s.expectations {
        let status = if e.ok { "ok" } else { "MISMATCH" };
        let _ = write!(out, "  expect {} {} {}: {status}", e.key, e.op, compact(&e.expected));
        if !e.ok {
            let _ = write!(out, " (actual {})", compact(&e.actual));
        }
        out.push('\n');
    }
    if timing {
        let _ = writeln!(out, "  elapsed: {:.3} ms", s.elapsed.as_secs_f64() * 1e3);
    }
    out
}

pub fn to_text(r: &Report, timing: bool) -> String {
    let mut out = String::new();
    let field = r.field.map(|p| format!("F_{p}")).unwrap_or_else(|| "no field".into());
    let _ = writeln!(out, "frob {} ({field}, seed {})", r.command, r.seed);
    for s in &r.sections {
        out.push('\n');
        out.push_str(&section_text(s, timing));
    }
    let failed: usize = r
        .sections
        .iter()
        .flat_map(|s| &s.expectations)
        .filter(|e| !e.ok)
        .count();
    out.push('\n');
    if failed == 0 {
        out.push_str("all expectations met\n");
    } else {
        let _ = writeln!(out, "{failed} expectation(s) not met");
    }
    if r.internal_unknown {
        out.push_str("an isomorphism search ended without a verdict\n");
    }
    out
}
