//! JSON and CSV report writers.
//!
//! Both formats are deterministic: fields keep their insertion order,
//! floats use the shortest round-trip form and no timestamps are written.

use num_complex::Complex64;
use serde_json::{json, Map, Value as Json};

use crate::config::Command;
use crate::ops::{Field, RowOut};
use crate::params::{Point, Value};

/// Settings echoed in the metadata block.
#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub command: Command,
    pub name: String,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_terms: usize,
    pub threshold: Option<f64>,
    pub seed: Option<u64>,
    pub warnings: Vec<String>,
}

/// One output row with the grid point it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub index: usize,
    pub inputs: Point,
    pub out: RowOut,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub points: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub max_rel_residual: Option<f64>,
    pub max_abs_residual: Option<f64>,
}

impl Summary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub metadata: Metadata,
    pub rows: Vec<Row>,
    pub summary: Summary,
}

fn num(x: f64) -> Json {
    // serde_json has no NaN or infinity
    serde_json::Number::from_f64(x).map_or_else(|| Json::String(x.to_string()), Json::Number)
}

fn cjson(z: Complex64) -> Json {
    json!({"re": num(z.re), "im": num(z.im)})
}

fn value_json(v: &Value) -> Json {
    match v {
        Value::Bool(b) => Json::Bool(*b),
        Value::Scalar(z) => cjson(*z),
        Value::List(l) => Json::Array(l.iter().map(|z| cjson(*z)).collect()),
    }
}

fn field_json(f: &Field) -> Json {
    match f {
        Field::Complex(z) => cjson(*z),
        Field::Real(x) => num(*x),
        Field::Int(i) => json!(i),
        Field::Bool(b) => Json::Bool(*b),
        Field::Null => Json::Null,
    }
}

fn opt_num(x: Option<f64>) -> Json {
    x.map_or(Json::Null, num)
}

impl Report {
    pub fn to_json(&self) -> String {
        let m = &self.metadata;
        let metadata = json!({
            "tool": "qgraf",
            "version": env!("CARGO_PKG_VERSION"),
            "command": m.command.as_str(),
            "name": m.name,
            "rel_tol": num(m.rel_tol),
            "abs_tol": num(m.abs_tol),
            "max_terms": m.max_terms,
            "threshold": opt_num(m.threshold),
            "seed": m.seed,
            "warnings": m.warnings,
        });
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|r| {
                let mut o = Map::new();
                o.insert("index".into(), json!(r.index));
                o.insert(
                    "inputs".into(),
                    Json::Object(r.inputs.iter().map(|(k, v)| (k.clone(), value_json(v))).collect()),
                );
                o.insert("status".into(), json!(r.out.status));
                for (k, f) in &r.out.fields {
                    o.insert((*k).into(), field_json(f));
                }
                Json::Object(o)
            })
            .collect();
        let s = &self.summary;
        let summary = json!({
            "points": s.points,
            "passed": s.passed,
            "failed": s.failed,
            "skipped": s.skipped,
            "max_rel_residual": opt_num(s.max_rel_residual),
            "max_abs_residual": opt_num(s.max_abs_residual),
            "status": if s.all_passed() { "pass" } else { "fail" },
        });
        let doc = json!({"metadata": metadata, "rows": rows, "summary": summary});
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn to_csv(&self) -> String {
        let m = &self.metadata;
        let mut head = String::new();
        let mut meta = vec![
            ("tool", "qgraf".to_string()),
            ("version", env!("CARGO_PKG_VERSION").to_string()),
            ("command", m.command.as_str().to_string()),
            ("name", m.name.clone()),
            ("rel_tol", fmt_f64(m.rel_tol)),
            ("abs_tol", fmt_f64(m.abs_tol)),
            ("max_terms", m.max_terms.to_string()),
            ("threshold", m.threshold.map_or("none".into(), fmt_f64)),
            ("seed", m.seed.map_or("none".into(), |s| s.to_string())),
        ];
        meta.extend(m.warnings.iter().map(|w| ("warning", w.clone())));
        for (k, v) in meta {
            head.push_str(&format!("# {}: {}\n", k, v.replace('\n', " ")));
        }

        let inputs = input_columns(&self.rows);
        let fields = field_columns(&self.rows);
        let mut header = vec!["index".to_string(), "status".to_string()];
        for (name, pair) in inputs.iter().chain(fields.iter()) {
            if *pair {
                header.push(format!("{}_re", name));
                header.push(format!("{}_im", name));
            } else {
                header.push(name.clone());
            }
        }

        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&header).expect("in-memory write");
        for r in &self.rows {
            let mut rec = vec![r.index.to_string(), r.out.status.clone()];
            for (name, pair) in &inputs {
                push_value(&mut rec, r.inputs.get(name), *pair);
            }
            for (name, pair) in &fields {
                let f = r.out.fields.iter().find(|(k, _)| k == name).map(|(_, f)| f);
                push_field(&mut rec, f, *pair);
            }
            w.write_record(&rec).expect("in-memory write");
        }
        let s = &self.summary;
        let mut rec = vec![
            "summary".to_string(),
            if s.all_passed() { "pass" } else { "fail" }.to_string(),
        ];
        for (_, pair) in &inputs {
            rec.extend(std::iter::repeat_n(String::new(), if *pair { 2 } else { 1 }));
        }
        for (name, pair) in &fields {
            if name == "rel_residual" {
                rec.push(s.max_rel_residual.map_or(String::new(), fmt_f64));
            } else if name == "abs_residual" {
                rec.push(s.max_abs_residual.map_or(String::new(), fmt_f64));
            } else {
                rec.extend(std::iter::repeat_n(String::new(), if *pair { 2 } else { 1 }));
            }
        }
        w.write_record(&rec).expect("in-memory write");
        let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output");
        head + &body
    }
}

/// Shortest round-trip form, with exponents for very small or large values.
pub fn fmt_f64(x: f64) -> String {
    format!("{:?}", x)
}

fn fmt_complex_list(l: &[Complex64]) -> String {
    l.iter()
        .map(|z| crate::complex::format_complex(*z))
        .collect::<Vec<_>>()
        .join(";")
}

/// Input names in sorted order; `true` marks a column pair for scalars.
fn input_columns(rows: &[Row]) -> Vec<(String, bool)> {
    let mut names: std::collections::BTreeMap<String, bool> = Default::default();
    for r in rows {
        for (k, v) in &r.inputs {
            let scalar = matches!(v, Value::Scalar(_));
            let e = names.entry(k.clone()).or_insert(scalar);
            *e &= scalar;
        }
    }
    names.into_iter().collect()
}

/// Output names in order of first appearance.
fn field_columns(rows: &[Row]) -> Vec<(String, bool)> {
    let mut cols: Vec<(String, bool)> = Vec::new();
    for r in rows {
        for (k, f) in &r.out.fields {
            let pair = matches!(f, Field::Complex(_));
            match cols.iter_mut().find(|(n, _)| n == k) {
                Some(c) => c.1 |= pair,
                None => cols.push((k.to_string(), pair)),
            }
        }
    }
    cols
}

fn push_value(rec: &mut Vec<String>, v: Option<&Value>, pair: bool) {
    match (v, pair) {
        (Some(Value::Scalar(z)), true) => {
            rec.push(fmt_f64(z.re));
            rec.push(fmt_f64(z.im));
        }
        (None, true) => rec.extend([String::new(), String::new()]),
        (None, false) => rec.push(String::new()),
        (Some(Value::Scalar(z)), false) => rec.push(crate::complex::format_complex(*z)),
        (Some(Value::Bool(b)), _) => rec.push(b.to_string()),
        (Some(Value::List(l)), _) => rec.push(fmt_complex_list(l)),
    }
}

fn push_field(rec: &mut Vec<String>, f: Option<&Field>, pair: bool) {
    let one = match f {
        Some(Field::Complex(z)) if pair => {
            rec.push(fmt_f64(z.re));
            rec.push(fmt_f64(z.im));
            return;
        }
        Some(Field::Complex(z)) => crate::complex::format_complex(*z),
        Some(Field::Real(x)) => fmt_f64(*x),
        Some(Field::Int(i)) => i.to_string(),
        Some(Field::Bool(b)) => b.to_string(),
        Some(Field::Null) | None => String::new(),
    };
    rec.push(one);
    if pair {
        rec.push(String::new());
    }
}
