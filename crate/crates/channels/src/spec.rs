//! JSON channel-spec files:
//! `{"name": str, "din": int, "dout": int, "kraus": [K, ...]}` with each K either a flat
//! row-major list of `[re, im]` pairs (length dout·din) or a list of rows of pairs; or
//! `{"zoo": kind, "params": {...}}` with kind one of identity, erasure, dephasing,
//! depolarizing, schur, constant.

use psc_matqi::linalg::{c, CMat};
use serde::Deserialize;
use serde_json::Value;

use crate::zoo::{make_channel, Zoo};
use crate::{Channel, Error, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum MatrixRepr {
    Flat(Vec<[f64; 2]>),
    Rows(Vec<Vec<[f64; 2]>>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct KrausSpec {
    name: String,
    din: usize,
    dout: usize,
    kraus: Vec<MatrixRepr>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ZooSpec {
    zoo: String,
    #[serde(default)]
    params: serde_json::Map<String, Value>,
}

/// A parsed channel spec: a name plus the constructed channel.
#[derive(Debug, Clone)]
pub struct ChannelSpec {
    pub name: String,
    pub channel: Channel,
}

fn to_matrix(m: &MatrixRepr, rows: usize, cols: usize) -> Result<CMat> {
    match m {
        MatrixRepr::Flat(v) => {
            if v.len() != rows * cols {
                return Err(Error::Spec(format!("Kraus operator has {} entries, expected {}", v.len(), rows * cols)));
            }
            Ok(CMat::from_fn(rows, cols, |i, j| {
                let [re, im] = v[i * cols + j];
                c(re, im)
            }))
        }
        MatrixRepr::Rows(rs) => {
            if rs.len() != rows || rs.iter().any(|r| r.len() != cols) {
                return Err(Error::Spec(format!("Kraus operator is not {rows}x{cols}")));
            }
            Ok(CMat::from_fn(rows, cols, |i, j| {
                let [re, im] = rs[i][j];
                c(re, im)
            }))
        }
    }
}

/// Matrix parameter given as rows of numbers or rows of [re, im] pairs.
fn param_matrix(v: &Value, name: &str) -> Result<CMat> {
    let rows = v.as_array().ok_or_else(|| Error::Spec(format!("`{name}` must be a matrix")))?;
    let n = rows.len();
    let mut m = CMat::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().filter(|r| r.len() == n).ok_or_else(|| Error::Spec(format!("`{name}` must be square")))?;
        for (j, x) in row.iter().enumerate() {
            m[(i, j)] = match x {
                Value::Number(num) => c(num.as_f64().unwrap_or(f64::NAN), 0.0),
                Value::Array(p) if p.len() == 2 => c(p[0].as_f64().unwrap_or(f64::NAN), p[1].as_f64().unwrap_or(f64::NAN)),
                _ => return Err(Error::Spec(format!("bad entry in `{name}`"))),
            };
        }
    }
    Ok(m)
}

fn get_f64(p: &serde_json::Map<String, Value>, k: &str) -> Result<f64> {
    p.get(k).and_then(Value::as_f64).ok_or_else(|| Error::Spec(format!("missing numeric parameter `{k}`")))
}

fn get_usize(p: &serde_json::Map<String, Value>, k: &str) -> Result<usize> {
    p.get(k).and_then(Value::as_u64).map(|v| v as usize).ok_or_else(|| Error::Spec(format!("missing integer parameter `{k}`")))
}

pub fn zoo_from_params(kind: &str, p: &serde_json::Map<String, Value>) -> Result<Zoo> {
    Ok(match kind {
        "identity" => Zoo::Identity { d: get_usize(p, "d")? },
        "erasure" => Zoo::Erasure { d: get_usize(p, "d")?, q: get_f64(p, "q")? },
        "dephasing" => Zoo::Dephasing { p: get_f64(p, "p")? },
        "depolarizing" => Zoo::Depolarizing { d: get_usize(p, "d")?, p: get_f64(p, "p")? },
        "schur" => Zoo::Schur { s: param_matrix(p.get("S").ok_or_else(|| Error::Spec("missing `S`".into()))?, "S")? },
        "constant" => Zoo::Constant {
            din: get_usize(p, "din")?,
            sigma: param_matrix(p.get("sigma").ok_or_else(|| Error::Spec("missing `sigma`".into()))?, "sigma")?,
        },
        other => return Err(Error::Spec(format!("unknown zoo kind `{other}`"))),
    })
}

pub fn parse_channel_spec(text: &str) -> Result<ChannelSpec> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
    if v.get("zoo").is_some() {
        let z: ZooSpec = serde_json::from_value(v).map_err(|e| Error::Spec(e.to_string()))?;
        let kind = zoo_from_params(&z.zoo, &z.params)?;
        return Ok(ChannelSpec { name: z.zoo.clone(), channel: make_channel(&kind)? });
    }
    let k: KrausSpec = serde_json::from_value(v).map_err(|e| Error::Spec(e.to_string()))?;
    if k.kraus.is_empty() {
        return Err(Error::Spec("empty Kraus list".into()));
    }
    let ks = k.kraus.iter().map(|m| to_matrix(m, k.dout, k.din)).collect::<Result<Vec<_>>>()?;
    Ok(ChannelSpec { name: k.name, channel: Channel::new(ks)? })
}
