use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::CliError;

pub const VERSION: &str = concat!("psc-", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Where the channel came from and the spec it resolved to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSource {
    /// Path of the channel-spec file, if one was given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    /// The spec itself, so the report is self-contained.
    pub spec: Value,
}

/// Every numeric knob a command may read. Unset fields take the command's default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    /// Code dimension d (decoder, decoupling).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_a: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_convention: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_ne_sym: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub target: String,
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    /// Sub-kind: thm1|thm2|thm3|weak for `bound`, hmin|hmax for `entropy`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelSource>,
    #[serde(default)]
    pub params: Params,
    /// Private code for `privacy`, as read from the code file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    /// Worker cap from QCONV_THREADS at the time of the run.
    pub threads: usize,
}

/// Zoo selector and its parameters as given on the command line.
#[derive(Debug, Clone, Default)]
pub struct ZooArgs {
    pub kind: String,
    pub d: Option<usize>,
    pub q: Option<f64>,
    pub p: Option<f64>,
    pub din: Option<usize>,
    pub dout: Option<usize>,
    pub s01: Option<f64>,
}

fn need<T>(v: Option<T>, kind: &str, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Precondition(format!("zoo `{kind}` requires --{flag}")))
}

/// Builds the `{"zoo": .., "params": {..}}` spec for a command-line zoo selection.
pub fn zoo_spec(z: &ZooArgs) -> Result<Value, CliError> {
    let k = z.kind.as_str();
    let mut p = Map::new();
    match k {
        "identity" => {
            p.insert("d".into(), json!(z.d.unwrap_or(2)));
        }
        "erasure" => {
            p.insert("d".into(), json!(z.d.unwrap_or(2)));
            p.insert("q".into(), json!(need(z.q, k, "q")?));
        }
        "dephasing" => {
            p.insert("p".into(), json!(need(z.p, k, "p")?));
        }
        "depolarizing" => {
            p.insert("d".into(), json!(z.d.unwrap_or(2)));
            p.insert("p".into(), json!(need(z.p, k, "p")?));
        }
        "schur" => {
            let s = need(z.s01, k, "s01")?;
            p.insert("S".into(), json!([[1.0, s], [s, 1.0]]));
        }
        "constant" => {
            let dout = z.dout.unwrap_or(2);
            if dout == 0 {
                return Err(CliError::Precondition("--dout must be ≥ 1".into()));
            }
            let w = 1.0 / dout as f64;
            let sigma: Vec<Vec<f64>> = (0..dout).map(|i| (0..dout).map(|j| if i == j { w } else { 0.0 }).collect()).collect();
            p.insert("din".into(), json!(z.din.unwrap_or(2)));
            p.insert("sigma".into(), json!(sigma));
        }
        other => return Err(CliError::Precondition(format!("unknown zoo kind `{other}` (identity, erasure, dephasing, depolarizing, schur, constant)"))),
    }
    Ok(json!({ "zoo": k, "params": Value::Object(p) }))
}

/// Reads a channel-spec file; unreadable or non-JSON input is a malformed channel file.
pub fn read_channel_file(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::ChannelFile(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::ChannelFile(format!("{}: {e}", path.display())))
}

pub fn threads_from_env() -> usize {
    std::env::var("QCONV_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()).filter(|&t| t > 0).unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}
