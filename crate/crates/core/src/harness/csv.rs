//! Flattens a summary record into one CSV header and row. Nested objects become
//! dotted column names.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// `(header, row)` for one record.
pub fn to_csv<T: Serialize>(record: &T) -> Result<(String, String)> {
    let value = serde_json::to_value(record).map_err(|e| Error::InvalidParam(format!("not a flat record: {e}")))?;
    let mut cells = Vec::new();
    flatten("", &value, &mut cells);
    let header = cells.iter().map(|(k, _)| quote(k)).collect::<Vec<_>>().join(",");
    let row = cells.iter().map(|(_, v)| quote(v)).collect::<Vec<_>>().join(",");
    Ok((header, row))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[derive(Serialize)]
    struct Row {
        name: &'static str,
        rate: f64,
        hist: BTreeMap<u64, u64>,
    }

    #[test]
    fn nested_keys_are_dotted() {
        let mut hist = BTreeMap::new();
        hist.insert(1, 3);
        hist.insert(2, 1);
        let (h, r) = to_csv(&Row { name: "a,b", rate: 0.5, hist }).unwrap();
        assert_eq!(h, "hist.1,hist.2,name,rate");
        assert_eq!(r, "3,1,\"a,b\",0.5");
    }
}
