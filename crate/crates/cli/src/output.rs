use std::fs;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use logrank_core::{Error, Result};
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Rounds every non-integer number to 12 significant digits.
pub fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(0.0);
            let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
            serde_json::Number::from_f64(r).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(round_floats(serde_json::to_value(x)?))
}

/// Scalar leaves of `v` keyed by dotted path; arrays are skipped.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn go(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(o) => {
                for (k, x) in o {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    go(&key, x, out);
                }
            }
            Value::Array(_) => {}
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            Value::Null => out.push((prefix.to_string(), String::new())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    go("", v, &mut out);
    out
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(x)) => x.clone(),
        Some(x) => x.to_string(),
    }
}

/// Renders rows of objects as CSV with the given column order.
pub fn csv_table(columns: &[String], rows: &[Map<String, Value>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(columns).map_err(csv_error)?;
    for r in rows {
        w.write_record(columns.iter().map(|c| cell(r.get(c)))).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Invariant(e.to_string()))
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.into())
}

pub fn render(v: &Value, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(v)? + "\n",
        Format::Csv => {
            let cells = flatten(v);
            let cols: Vec<String> = cells.iter().map(|(k, _)| k.clone()).collect();
            let row: Map<String, Value> = cells.into_iter().map(|(k, x)| (k, Value::String(x))).collect();
            csv_table(&cols, &[row])?
        }
    })
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounding_keeps_integers() {
        let v = round_floats(json!({"a": 1, "b": 0.1234567890123456, "c": [1.0e-20 / 3.0]}));
        assert_eq!(v["a"], json!(1));
        assert_eq!(v["b"].as_f64().unwrap(), 0.123456789012);
        assert_eq!(v["c"][0].as_f64().unwrap(), 3.33333333333e-21);
    }

    #[test]
    fn flatten_and_csv() {
        let v = json!({"x": {"y": 2, "z": "a,b"}, "w": [1, 2], "n": null});
        let f = flatten(&v);
        assert_eq!(f, vec![("n".into(), "".into()), ("x.y".into(), "2".into()), ("x.z".into(), "a,b".into())]);
        let text = render(&v, Format::Csv).unwrap();
        assert_eq!(text, "n,x.y,x.z\n,2,\"a,b\"\n");
    }
}
