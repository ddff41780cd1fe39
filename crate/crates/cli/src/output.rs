use freeconv_core::{Rational, Scalar};
use serde_json::{json, Value};

/// JSON rendering of a scalar: rationals as `"p/q"` strings, floats as
/// numbers with shortest round-trip digits.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
}

impl JsonScalar for Rational {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl JsonScalar for f64 {
    fn to_json(&self) -> Value {
        json!(self)
    }
}

pub fn json_list<S: JsonScalar>(values: &[S]) -> Value {
    Value::Array(values.iter().map(JsonScalar::to_json).collect())
}

pub fn json_pairs<S: JsonScalar>(pairs: &[(S, S)]) -> Value {
    Value::Array(pairs.iter().map(|(a, b)| json!([a.to_json(), b.to_json()])).collect())
}

/// CSV cell text: strings unquoted, everything else as JSON.
fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Rendered command output.
pub struct Output {
    pub json: Value,
    pub csv: Option<String>,
}

impl Output {
    pub fn json_only(json: Value) -> Self {
        Self { json, csv: None }
    }

    /// Columns of equal length, the first column being `n = start, start+1, ...`.
    pub fn indexed(json: Value, index: &str, start: usize, columns: &[(&str, &[Value])]) -> Self {
        let mut csv = String::from(index);
        for (name, _) in columns {
            csv.push(',');
            csv.push_str(name);
        }
        csv.push('\n');
        let rows = columns.iter().map(|(_, c)| c.len()).max().unwrap_or(0);
        for i in 0..rows {
            csv.push_str(&(start + i).to_string());
            for (_, col) in columns {
                csv.push(',');
                csv.push_str(&col.get(i).map(cell).unwrap_or_default());
            }
            csv.push('\n');
        }
        Self { json, csv: Some(csv) }
    }

    pub fn table(json: Value, header: &[&str], rows: &[Vec<Value>]) -> Self {
        let mut csv = header.join(",");
        csv.push('\n');
        for row in rows {
            let cells: Vec<String> = row.iter().map(cell).collect();
            csv.push_str(&cells.join(","));
            csv.push('\n');
        }
        Self { json, csv: Some(csv) }
    }
}

pub fn as_values(v: &Value) -> &[Value] {
    v.as_array().map(Vec::as_slice).unwrap_or(&[])
}
