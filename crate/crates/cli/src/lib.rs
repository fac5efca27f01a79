//! `psc`: command-line driver. Every run is described by a [`RunConfig`] that is embedded in
//! the report it produces, so `psc replay REPORT` reproduces the report byte for byte.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{error::ErrorKind, Args, Parser, Subcommand};
use serde_json::{json, Value};

pub use config::{ChannelSource, Format, Params, RunConfig, SweepSpec, VERSION};
pub use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "psc", version, about = "Strong-converse toolkit for degradable and symmetric channels")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Single-letter coherent information, re-checked through the degrading map.
    Q1(Common),
    /// Degradability verdict with slack certificates.
    Certify(Common),
    /// Min- or max-entropy of the Choi state, optionally smoothed.
    Entropy {
        #[arg(value_parser = ["hmin", "hmax"])]
        kind: String,
        #[command(flatten)]
        common: Common,
    },
    /// Finite-n converse bound.
    Bound {
        #[arg(value_parser = ["thm1", "thm2", "thm3", "weak"])]
        kind: String,
        #[command(flatten)]
        common: Common,
    },
    /// Random-projection decoupling trials on the channel's purification.
    Decouple(Common),
    /// Error and privacy of a private code.
    Privacy(Common),
    /// Optimal decoder fidelity for a maximally entangled input.
    Decoder(Common),
    /// Dual-SDP search on the multiply swap-symmetric state of the channel.
    #[command(name = "symsdp-search")]
    SymsdpSearch(Common),
    /// Runs a command over a grid of one parameter.
    Sweep {
        target: String,
        /// Sub-kind of the target (bound or entropy).
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        param: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 11)]
        steps: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Re-runs the configuration embedded in a report.
    Replay {
        report: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Channel-spec JSON file.
    #[arg(long, conflicts_with = "zoo")]
    channel: Option<PathBuf>,
    /// identity, erasure, dephasing, depolarizing, schur or constant.
    #[arg(long)]
    zoo: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    din: Option<usize>,
    #[arg(long)]
    dout: Option<usize>,
    /// Off-diagonal entry of a qubit Schur multiplier.
    #[arg(long)]
    s01: Option<f64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    code_dim: Option<usize>,
    #[arg(long)]
    dim_a: Option<usize>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long, value_parser = ["optimizer", "worst-case"])]
    mu_convention: Option<String>,
    #[arg(long)]
    log_ne_sym: Option<f64>,
    #[arg(long)]
    c0: Option<f64>,
    #[arg(long, value_parser = ["b", "e"])]
    system: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Private-code JSON file: {"signals": [..], "povm": [..]}.
    #[arg(long)]
    code: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn build_config(command: &str, kind: Option<String>, c: Common, sweep: Option<SweepSpec>) -> Result<RunConfig, CliError> {
    let channel = match (&c.channel, &c.zoo) {
        (Some(path), _) => Some(ChannelSource { path: Some(path.display().to_string()), spec: config::read_channel_file(path)? }),
        (None, Some(kind)) => {
            let z = config::ZooArgs { kind: kind.clone(), d: c.d, q: c.q, p: c.p, din: c.din, dout: c.dout, s01: c.s01 };
            Some(ChannelSource { path: None, spec: config::zoo_spec(&z)? })
        }
        (None, None) => None,
    };
    let code = match &c.code {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            Some(serde_json::from_str(&text).map_err(|e| CliError::Precondition(format!("code file {}: {e}", path.display())))?)
        }
        None => None,
    };
    let default_format = if sweep.is_some() { Format::Csv } else { Format::Json };
    Ok(RunConfig {
        command: command.into(),
        kind,
        channel,
        params: Params {
            n: c.n,
            eps: c.eps,
            delta: c.delta,
            eta: c.eta,
            code_dim: c.code_dim,
            dim_a: c.dim_a,
            mu: c.mu,
            mu_convention: c.mu_convention,
            log_ne_sym: c.log_ne_sym,
            c0: c.c0,
            system: c.system,
            seed: c.seed,
            trials: c.trials,
            restarts: c.restarts,
        },
        code,
        sweep,
        format: c.format.unwrap_or(default_format),
        output: c.out.map(|p| p.display().to_string()),
        threads: config::threads_from_env(),
    })
}

/// Grid point i of `steps` between from and to.
fn grid_point(s: &SweepSpec, i: usize) -> f64 {
    if s.steps == 1 {
        s.from
    } else {
        s.from + (s.to - s.from) * i as f64 / (s.steps - 1) as f64
    }
}

fn as_count(name: &str, v: f64) -> Result<u64, CliError> {
    if v < 0.0 || v.fract() != 0.0 {
        return Err(CliError::Precondition(format!("{name} must be a nonnegative integer, got {v}")));
    }
    Ok(v as u64)
}

/// The config of one grid point.
fn sweep_point(cfg: &RunConfig, s: &SweepSpec, v: f64) -> Result<RunConfig, CliError> {
    let mut c = cfg.clone();
    c.command = s.target.clone();
    c.sweep = None;
    let p = &mut c.params;
    match s.param.as_str() {
        "n" => p.n = Some(as_count("n", v)?),
        "eps" => p.eps = Some(v),
        "delta" => p.delta = Some(v),
        "eta" => p.eta = Some(v),
        "mu" => p.mu = Some(v),
        "c0" => p.c0 = Some(v),
        "log_ne_sym" => p.log_ne_sym = Some(v),
        "code_dim" => p.code_dim = Some(as_count("code_dim", v)? as usize),
        "dim_a" => p.dim_a = Some(as_count("dim_a", v)? as usize),
        "seed" => p.seed = Some(as_count("seed", v)?),
        "trials" => p.trials = Some(as_count("trials", v)? as usize),
        name @ ("p" | "q" | "d" | "din" | "dout" | "s01") => {
            let spec = c.channel.as_mut().map(|ch| &mut ch.spec).ok_or_else(|| CliError::Usage("sweep needs a channel".into()))?;
            let params = spec
                .get_mut("params")
                .and_then(Value::as_object_mut)
                .ok_or_else(|| CliError::Precondition(format!("`{name}` can only be swept for zoo channels")))?;
            match name {
                "s01" => {
                    params.insert("S".into(), json!([[1.0, v], [v, 1.0]]));
                }
                "d" | "din" => {
                    params.insert(name.into(), json!(as_count(name, v)?));
                }
                "dout" => {
                    let d = as_count(name, v)? as usize;
                    if d == 0 {
                        return Err(CliError::Precondition("dout must be >= 1".into()));
                    }
                    let w = 1.0 / d as f64;
                    let sigma: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| if i == j { w } else { 0.0 }).collect()).collect();
                    params.insert("sigma".into(), json!(sigma));
                }
                _ => {
                    params.insert(name.into(), json!(v));
                }
            }
        }
        other => return Err(CliError::Precondition(format!("cannot sweep `{other}`"))),
    }
    Ok(c)
}

/// Flattened row for grid point i; failures become an `error` column.
fn sweep_row(cfg: &RunConfig, s: &SweepSpec, i: usize) -> Vec<(String, Value)> {
    let v = grid_point(s, i);
    let mut row = vec![("index".to_string(), json!(i)), (s.param.clone(), json!(v))];
    match sweep_point(cfg, s, v).and_then(|c| commands::dispatch(&c)) {
        Ok(mut res) => {
            output::round_value(&mut res);
            output::flatten("", &res, &mut row);
        }
        Err(e) => row.push(("error".into(), Value::String(e.to_string()))),
    }
    row
}

fn run_sweep(cfg: &RunConfig) -> Result<Vec<Vec<(String, Value)>>, CliError> {
    let s = cfg.sweep.as_ref().ok_or_else(|| CliError::Usage("missing grid".into()))?;
    let workers = cfg.threads.clamp(1, s.steps);
    let mut rows: Vec<Option<Vec<(String, Value)>>> = vec![None; s.steps];
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| scope.spawn(move || (w..s.steps).step_by(workers).map(|i| (i, sweep_row(cfg, s, i))).collect::<Vec<_>>()))
            .collect();
        for h in handles {
            for (i, row) in h.join().expect("sweep worker panicked") {
                rows[i] = Some(row);
            }
        }
    });
    Ok(rows.into_iter().flatten().collect())
}

/// Renders the report for a config. The same config always gives the same bytes.
pub fn execute(cfg: &RunConfig) -> Result<String, CliError> {
    commands::validate(cfg)?;
    if cfg.command == "sweep" {
        let rows = run_sweep(cfg)?;
        return Ok(match cfg.format {
            Format::Csv => output::csv_preamble(cfg) + &output::csv_table(&rows),
            Format::Json => {
                let arr = rows.into_iter().map(|r| Value::Object(r.into_iter().collect())).collect();
                output::json_report(cfg, Value::Array(arr))
            }
        });
    }
    let result = commands::dispatch(cfg)?;
    Ok(match cfg.format {
        Format::Json => output::json_report(cfg, result),
        Format::Csv => {
            let mut res = result;
            output::round_value(&mut res);
            let mut row = Vec::new();
            output::flatten("", &res, &mut row);
            output::csv_preamble(cfg) + &output::csv_table(&[row])
        }
    })
}

/// The config embedded in a JSON report or in the preamble of a CSV file.
pub fn config_from_report(text: &str) -> Result<RunConfig, CliError> {
    let bad = |e: String| CliError::Usage(format!("not a psc report: {e}"));
    let value: Value = match text.strip_prefix("# ") {
        Some(rest) => {
            let line = rest.lines().next().unwrap_or("");
            let json = line.split_once("config=").map(|(_, j)| j).ok_or_else(|| bad("missing config".into()))?;
            serde_json::from_str(json).map_err(|e| bad(e.to_string()))?
        }
        None => {
            let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
            v.get("config").cloned().ok_or_else(|| bad("missing config".into()))?
        }
    };
    serde_json::from_value(value).map_err(|e| bad(e.to_string()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn run_cli(cli: Cli) -> Result<(), CliError> {
    let cfg = match cli.cmd {
        Cmd::Replay { report, out } => {
            let text = std::fs::read_to_string(&report).map_err(|e| CliError::Usage(format!("{}: {e}", report.display())))?;
            let cfg = config_from_report(&text)?;
            return emit(&execute(&cfg)?, out.as_deref());
        }
        Cmd::Q1(c) => build_config("q1", None, c, None)?,
        Cmd::Certify(c) => build_config("certify", None, c, None)?,
        Cmd::Entropy { kind, common } => build_config("entropy", Some(kind), common, None)?,
        Cmd::Bound { kind, common } => build_config("bound", Some(kind), common, None)?,
        Cmd::Decouple(c) => build_config("decouple", None, c, None)?,
        Cmd::Privacy(c) => build_config("privacy", None, c, None)?,
        Cmd::Decoder(c) => build_config("decoder", None, c, None)?,
        Cmd::SymsdpSearch(c) => build_config("symsdp-search", None, c, None)?,
        Cmd::Sweep { target, kind, param, from, to, steps, common } => {
            build_config("sweep", kind, common, Some(SweepSpec { target, param, from, to, steps }))?
        }
    };
    let text = execute(&cfg)?;
    emit(&text, cfg.output.as_deref().map(Path::new))
}

/// Parses argv (program name first), runs and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidSubcommand => 64,
                _ => 2,
            };
        }
    };
    match run_cli(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
