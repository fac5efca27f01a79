use serde_json::{Map, Number, Value};

use crate::config::{RunConfig, VERSION};

/// x rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Rounds every non-integer number in place.
pub fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().map(round12).and_then(Number::from_f64) {
                *n = x;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_value),
        Value::Object(o) => o.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Scalar leaves keyed by dotted path. Arrays of `{name, value}` become one column per name;
/// other arrays are dropped.
pub fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(a) => {
            for t in a {
                if let (Some(Value::String(name)), Some(x)) = (t.get("name"), t.get("value")) {
                    out.push((key(name), x.clone()));
                }
            }
        }
        scalar => out.push((prefix.to_string(), scalar.clone())),
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Header line carrying the version and the compact config, so CSV files can be replayed.
pub fn csv_preamble(cfg: &RunConfig) -> String {
    format!("# version={VERSION} config={}\n", serde_json::to_string(cfg).unwrap_or_default())
}

/// Rows share the union of their keys, in order of first appearance.
pub fn csv_table(rows: &[Vec<(String, Value)>]) -> String {
    let mut cols: Vec<String> = Vec::new();
    for row in rows {
        for (k, _) in row {
            if !cols.contains(k) {
                cols.push(k.clone());
            }
        }
    }
    let mut s = cols.join(",");
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = cols
            .iter()
            .map(|c| row.iter().find(|(k, _)| k == c).map(|(_, v)| csv_cell(v)).unwrap_or_default())
            .collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn json_report(cfg: &RunConfig, mut result: Value) -> String {
    round_value(&mut result);
    let mut top = Map::new();
    top.insert("version".into(), Value::String(VERSION.into()));
    top.insert("config".into(), serde_json::to_value(cfg).unwrap_or(Value::Null));
    top.insert("result".into(), result);
    let mut s = serde_json::to_string_pretty(&Value::Object(top)).unwrap_or_default();
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round12(0.15177669529663687), 0.151776695297);
        assert_eq!(round12(1.0), 1.0);
        assert_eq!(round12(-2.5e-13), -2.5e-13);
        let mut v = json!({"a": [1.23456789012345, 3], "b": {"c": 2.0f64.sqrt()}});
        round_value(&mut v);
        assert_eq!(v, json!({"a": [1.23456789012, 3], "b": {"c": 1.41421356237}}));
    }

    #[test]
    fn flatten_names_terms() {
        let v = json!({"bound": {"total": 2.0, "terms": [{"name": "aep", "value": 1.5}]}, "ok": true, "xs": [1, 2]});
        let mut out = Vec::new();
        flatten("", &v, &mut out);
        let keys: Vec<&str> = out.iter().map(|(k, _)| k.as_str()).collect();
        assert_eq!(keys, ["bound.total", "bound.terms.aep", "ok"]);
    }

    #[test]
    fn csv_union_of_columns() {
        let rows = vec![
            vec![("a".to_string(), json!(1)), ("b".to_string(), json!("x,y"))],
            vec![("a".to_string(), json!(2)), ("c".to_string(), json!(null))],
        ];
        assert_eq!(csv_table(&rows), "a,b,c\n1,\"x,y\",\n2,,\n");
    }
}
