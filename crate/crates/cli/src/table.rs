use serde_json::Value;

use crate::Report;

fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(String::len).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r.iter().enumerate().map(|(c, s)| format!("{s:>w$}", w = widths[c])).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn numbers(v: &Value) -> Vec<String> {
    v.as_array().map(|a| a.iter().map(|x| x.to_string()).collect()).unwrap_or_default()
}

fn hilbert_rows(h: &Value) -> Vec<Vec<String>> {
    let values = numbers(&h["values"]);
    let graded = numbers(&h["graded"]);
    let mut rows = vec![vec!["t".to_string(), "H1".into(), "H0".into()]];
    for (t, (a, b)) in values.iter().zip(&graded).enumerate() {
        rows.push(vec![t.to_string(), a.clone(), b.clone()]);
    }
    rows
}

fn fiber_rows(columns: &[Vec<String>]) -> Vec<Vec<String>> {
    let mut header = vec!["t".to_string()];
    header.extend((0..columns.len()).map(|k| format!("fiber{k}")));
    let mut rows = vec![header];
    let len = columns.iter().map(Vec::len).max().unwrap_or(0);
    for t in 0..len {
        let mut r = vec![t.to_string()];
        r.extend(columns.iter().map(|c| c.get(t).cloned().unwrap_or_default()));
        rows.push(r);
    }
    rows
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Aligned text for Hilbert functions and fiber comparisons; other reports
/// become `key  value` lines.
pub fn render_table(report: &Report) -> String {
    let res = report.result();
    let command = report.value["job"]["command"].as_str().unwrap_or_default();
    let mut out = String::new();
    let mut rest: Vec<Vec<String>> = Vec::new();
    match command {
        "hilbert" => out.push_str(&align(&hilbert_rows(res))),
        "param" => out.push_str(&align(&hilbert_rows(&res["hilbert"]))),
        "normflat" => {
            let cols: Vec<Vec<String>> = if let Some(t) = res["table"].as_array() {
                t.iter().map(numbers).collect()
            } else {
                res["hilbert"].as_array().map(|h| h.iter().map(|x| numbers(&x["values"])).collect()).unwrap_or_default()
            };
            out.push_str(&align(&fiber_rows(&cols)));
        }
        "enumerate" => {
            for ideal in res["ideals"].as_array().into_iter().flatten() {
                let gens: Vec<String> = ideal.as_array().into_iter().flatten().map(scalar).collect();
                out.push_str(&gens.join(", "));
                out.push('\n');
            }
        }
        _ => {}
    }
    if let Some(obj) = res.as_object() {
        for (k, v) in obj {
            if matches!(k.as_str(), "values" | "graded" | "table" | "hilbert" | "ideals" | "spans") {
                continue;
            }
            rest.push(vec![k.clone(), scalar(v)]);
        }
    } else {
        rest.push(vec!["result".into(), scalar(res)]);
    }
    if !out.is_empty() && !rest.is_empty() {
        out.push('\n');
    }
    let kv: String = rest
        .iter()
        .map(|r| {
            let w = rest.iter().map(|r| r[0].len()).max().unwrap_or(0);
            format!("{:<w$}  {}\n", r[0], r[1])
        })
        .collect();
    out.push_str(&kv);
    out
}
