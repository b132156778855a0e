//! Deterministic JSON and CSV emission.
//!
//! JSON objects are `serde_json::Map`s, which keep keys sorted, and every
//! float is rounded to 15 significant digits before it is written.

use bce_core::walk::GrowthReport;
use bce_core::Interval;
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "bce/1";

/// Rounds to 15 significant digits; non-finite values become strings.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        let rounded: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
        json!(rounded)
    } else {
        json!(x.to_string())
    }
}

pub fn exact_int(n: impl Into<Value>) -> Value {
    json!({ "value": n.into(), "exact": true })
}

pub fn exact_float(x: f64) -> Value {
    json!({ "value": float(x), "exact": true })
}

/// A float known to within an absolute tolerance.
pub fn approx(x: f64, tol: f64) -> Value {
    json!({ "value": float(x), "tol": float(tol) })
}

/// A certified enclosure; the tolerance is its width.
pub fn enclosure(iv: Interval) -> Value {
    json!({ "lo": float(iv.lo), "hi": float(iv.hi), "tol": float(iv.width()) })
}

pub fn flag(b: bool) -> Value {
    json!({ "value": b, "exact": true })
}

/// Tolerance attached to a Shannon entropy computed in `f64`.
pub fn entropy_tol(h: f64) -> f64 {
    8.0 * f64::EPSILON * h.max(1.0)
}

pub fn growth_json(report: &GrowthReport) -> Value {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            let n = r.n as f64;
            json!({
                "n": exact_int(r.n),
                "supp_size": exact_int(r.supp_size),
                "H_bits": approx(r.h_bits, entropy_tol(r.h_bits)),
                "H_over_n": approx(r.h_over_n, entropy_tol(r.h_bits) / n),
                "log2_supp_over_n": approx(r.log2_supp_over_n, 2.0 * f64::EPSILON),
                "free_so_far": flag(r.free_so_far),
            })
        })
        .collect();
    json!({
        "kind": format!("{:?}", report.kind),
        "rows": rows,
        "rho_upper": approx(report.rho_upper, 2.0 * f64::EPSILON),
        "h_upper": approx(report.h_upper, report.rows.iter().map(|r| entropy_tol(r.h_bits) / r.n as f64).fold(0.0, f64::max)),
        "truncated": flag(report.truncated),
    })
}

pub fn growth_csv(report: &GrowthReport) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "supp_size", "H_bits", "H_over_n", "log2_supp_over_n", "free_so_far"])?;
    for r in &report.rows {
        w.write_record([
            r.n.to_string(),
            r.supp_size.to_string(),
            fmt15(r.h_bits),
            fmt15(r.h_over_n),
            fmt15(r.log2_supp_over_n),
            r.free_so_far.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn fmt15(x: f64) -> String {
    float(x).to_string()
}

/// Wraps a payload with the schema and command keys.
pub fn document(command: &str, body: Map<String, Value>) -> Value {
    let mut doc = body;
    doc.insert("schema".into(), json!(SCHEMA));
    doc.insert("command".into(), json!(command));
    Value::Object(doc)
}
