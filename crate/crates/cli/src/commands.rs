use std::f64::consts::FRAC_1_SQRT_2;

use psc_channels::{complementary, parse_channel_spec, Channel};
use psc_converse::{
    berta_average, embedded_max_entangled, mu_for_input, optimal_decoder_fidelity, private_code_metrics, prop4_rank, thm1_bound, thm2_bound,
    thm3_bound_with, weak_bound, DecouplingSetup, MuConvention, PrivateCode, THM3_C0,
};
use psc_degradable::{
    certify_degradability, coherent_information_via_degrading, extract_symmetric_channel, schur_direct_dilation, symmetrized_dilation,
    type_i_lift, DegradabilityCertificate, TypeIDilation,
};
use psc_entropies::minmax::{hmax_raw, hmax_smooth_raw, hmin_raw, hmin_smooth_raw};
use psc_entropies::{q1, Q1Options, Q1Result};
use psc_matqi::linalg::{self, c, r, CMat};
use psc_symsdp::{from_extraction, search};
use serde_json::{json, Value};

use crate::config::{Params, RunConfig};
use crate::error::CliError;

type Result<T> = std::result::Result<T, CliError>;

pub const COMMANDS: [&str; 9] = ["q1", "certify", "entropy", "bound", "decouple", "privacy", "decoder", "symsdp-search", "sweep"];

fn pre(msg: impl Into<String>) -> CliError {
    CliError::Precondition(msg.into())
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

/// Parameter checks that need no channel. Run before any computation.
pub fn validate(cfg: &RunConfig) -> Result<()> {
    let p = &cfg.params;
    if let Some(n) = p.n {
        if n == 0 {
            return Err(pre("n must be >= 1"));
        }
    }
    if let Some(mu) = p.mu {
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(pre("mu must be finite and >= 0"));
        }
    }
    if p.code_dim == Some(0) {
        return Err(pre("code dimension must be >= 1"));
    }
    if p.trials == Some(0) {
        return Err(pre("trials must be >= 1"));
    }
    for (name, v) in [("epsilon", p.eps), ("delta", p.delta), ("eta", p.eta)] {
        if let Some(v) = v {
            if !v.is_finite() || v < 0.0 {
                return Err(pre(format!("{name} must be finite and >= 0")));
            }
        }
    }
    let kind = cfg.kind.as_deref().unwrap_or("");
    match cfg.command.as_str() {
        "bound" => {
            let eps = p.eps.unwrap_or(0.1);
            match kind {
                "thm1" => {
                    if eps >= FRAC_1_SQRT_2 {
                        return Err(pre("epsilon must be < 0.7071 (Thm 1)"));
                    }
                    if eps <= 0.0 {
                        return Err(pre("epsilon must be > 0 (Thm 1)"));
                    }
                }
                "thm2" => {
                    let delta = p.delta.unwrap_or(0.0);
                    if (FRAC_1_SQRT_2 - eps - 2.0 * delta) / 6.0 <= 1e-12 {
                        return Err(pre("epsilon + 2 delta must be < 0.7071 (Thm 2)"));
                    }
                }
                "thm3" => {
                    if eps >= 1.0 {
                        return Err(pre("epsilon must be < 1 (Thm 3)"));
                    }
                    if let Some(l) = p.log_ne_sym {
                        if !(l >= 0.0 && l.is_finite()) {
                            return Err(pre("log-ne-sym must be finite and >= 0 (Thm 3)"));
                        }
                    }
                }
                "weak" => {
                    if eps >= 0.5 {
                        return Err(pre("epsilon must be < 0.5 (weak converse)"));
                    }
                }
                other => return Err(pre(format!("unknown bound `{other}` (thm1, thm2, thm3, weak)"))),
            }
            match p.mu_convention.as_deref() {
                None | Some("optimizer") | Some("worst-case") => {}
                Some(other) => return Err(pre(format!("unknown mu convention `{other}` (optimizer, worst-case)"))),
            }
        }
        "entropy" => {
            if !matches!(kind, "hmin" | "hmax") {
                return Err(pre(format!("unknown entropy `{kind}` (hmin, hmax)")));
            }
            if p.eps.unwrap_or(0.0) >= 1.0 {
                return Err(pre("epsilon must be < 1 (smoothing)"));
            }
            if !matches!(p.system.as_deref(), None | Some("b") | Some("e")) {
                return Err(pre("system must be b or e"));
            }
        }
        "decouple" => {
            if p.eta.unwrap_or(0.05) >= 1.0 {
                return Err(pre("eta must be < 1 (decoupling)"));
            }
            let eps = p.eps.unwrap_or(0.5);
            if !(eps > 0.0 && eps <= 1.0) {
                return Err(pre("epsilon must lie in (0, 1] (decoupling)"));
            }
        }
        "symsdp-search" => {
            let delta = p.delta.unwrap_or(0.8);
            if !(delta > 0.0 && delta < 1.0) {
                return Err(pre("delta must lie in (0, 1) (symsdp-search)"));
            }
        }
        "sweep" => {
            let s = cfg.sweep.as_ref().ok_or_else(|| pre("sweep needs a grid"))?;
            if s.steps == 0 {
                return Err(pre("steps must be >= 1"));
            }
            if !(s.from.is_finite() && s.to.is_finite()) {
                return Err(pre("grid end points must be finite"));
            }
            if !COMMANDS.contains(&s.target.as_str()) || s.target == "sweep" {
                return Err(CliError::UnknownCommand(s.target.clone()));
            }
        }
        "q1" | "certify" | "privacy" | "decoder" => {}
        other => return Err(CliError::UnknownCommand(other.into())),
    }
    Ok(())
}

pub fn load_channel(cfg: &RunConfig) -> Result<Channel> {
    let src = cfg.channel.as_ref().ok_or_else(|| CliError::Usage("a channel is required: --channel FILE or --zoo KIND".into()))?;
    let text = src.spec.to_string();
    match parse_channel_spec(&text) {
        Ok(s) => Ok(s.channel),
        Err(e) if src.path.is_some() => Err(CliError::ChannelFile(format!("{}: {e}", src.path.as_deref().unwrap_or("")))),
        Err(psc_channels::Error::Spec(m)) => Err(pre(m)),
        Err(e) => Err(e.into()),
    }
}

/// Runs one non-sweep command and returns its result object.
pub fn dispatch(cfg: &RunConfig) -> Result<Value> {
    validate(cfg)?;
    if cfg.command == "sweep" {
        return Err(CliError::Usage("sweep is handled by the driver".into()));
    }
    let ch = load_channel(cfg)?;
    let p = &cfg.params;
    match cfg.command.as_str() {
        "q1" => cmd_q1(&ch, p),
        "certify" => Ok(certificate_json(&certify_degradability(&ch)?)),
        "entropy" => cmd_entropy(&ch, cfg.kind.as_deref().unwrap_or("hmin"), p),
        "bound" => cmd_bound(&ch, cfg.kind.as_deref().unwrap_or("thm1"), p),
        "decouple" => cmd_decouple(&ch, p),
        "privacy" => cmd_privacy(&ch, cfg.code.as_ref()),
        "decoder" => cmd_decoder(&ch, p),
        "symsdp-search" => cmd_symsdp(&ch, p),
        other => Err(CliError::UnknownCommand(other.into())),
    }
}

fn q1_options(p: &Params) -> Q1Options {
    let mut o = Q1Options::default();
    if let Some(s) = p.seed {
        o.seed = s;
    }
    if let Some(r) = p.restarts {
        o.restarts = r;
    }
    o
}

fn certificate_json(cert: &DegradabilityCertificate) -> Value {
    json!({
        "verdict": to_value(&cert.verdict),
        "degrading_slack": cert.degrading.slack,
        "degrading_residual": cert.degrading.residual,
        "anti_degrading_slack": cert.anti_degrading.slack,
        "anti_degrading_residual": cert.anti_degrading.residual,
        "dim_in": cert.dim_in,
        "dim_out": cert.dim_out,
        "dim_env": cert.dim_env,
    })
}

fn degradable_dilation(ch: &Channel, cert: &DegradabilityCertificate) -> Result<TypeIDilation> {
    let j = cert
        .degrading_choi()
        .ok_or_else(|| pre(format!("channel must be degradable, certified {:?}", cert.verdict)))?;
    Ok(symmetrized_dilation(ch, j)?)
}

fn q1_json(r: &Q1Result) -> Value {
    json!({
        "value": r.value,
        "converged": r.converged,
        "iterations": r.iterations,
        "grid_value": r.grid_value,
        "optimizer_spectrum": linalg::eigvalsh(&r.optimizer),
    })
}

fn cmd_q1(ch: &Channel, p: &Params) -> Result<Value> {
    let r = q1(ch, &q1_options(p));
    let cert = certify_degradability(ch)?;
    let mut out = json!({ "q1": q1_json(&r), "verdict": to_value(&cert.verdict) });
    if cert.is_degradable() {
        let dil = degradable_dilation(ch, &cert)?;
        let id = coherent_information_via_degrading(&dil, &r.optimizer)?;
        out["check"] = json!({
            "coherent_information": id.coherent_information,
            "s_f_given_e_prime": id.s_f_given_e_prime,
            "s_af_given_e_prime": id.s_af_given_e_prime,
            "max_violation": id.max_violation(),
        });
    }
    Ok(out)
}

fn cmd_entropy(ch: &Channel, kind: &str, p: &Params) -> Result<Value> {
    let system = p.system.as_deref().unwrap_or("b");
    let eps = p.eps.unwrap_or(0.0);
    let target = if system == "e" { complementary(ch) } else { ch.clone() };
    let (da, db) = (target.din(), target.dout());
    let rho = &target.choi().matrix * r(1.0 / da as f64);
    let e = match (kind, eps > 0.0) {
        ("hmin", false) => hmin_raw(&rho, da, db)?,
        ("hmin", true) => hmin_smooth_raw(&rho, da, db, eps)?,
        (_, false) => hmax_raw(&rho, da, db)?,
        (_, true) => hmax_smooth_raw(&rho, da, db, eps)?,
    };
    Ok(json!({
        "entropy": kind,
        "system": system,
        "eps": eps,
        "dim_a": da,
        "dim_b": db,
        "value": e.value,
        "gap": e.gap,
        "iterations": e.iterations,
    }))
}

fn cmd_bound(ch: &Channel, kind: &str, p: &Params) -> Result<Value> {
    let n = p.n.unwrap_or(1000);
    let eps = p.eps.unwrap_or(0.1);
    let delta = p.delta.unwrap_or(0.0);
    let dim_a = p.dim_a.unwrap_or(ch.din());
    let cert = certify_degradability(ch)?;
    let dil = degradable_dilation(ch, &cert)?;
    let r = q1(ch, &q1_options(p));
    let conv = match (p.mu, p.mu_convention.as_deref()) {
        (Some(m), _) => MuConvention::Fixed(m),
        (None, Some("worst-case")) => MuConvention::WorstCase,
        _ => MuConvention::Optimizer,
    };
    let mu = mu_for_input(&dil, &r.optimizer, conv)?;
    let report = match kind {
        "thm1" => thm1_bound(r.value, dim_a, n, eps, mu.mu)?,
        "thm2" => thm2_bound(r.value, dim_a, n, eps, delta, mu.mu)?,
        "thm3" => thm3_bound_with(r.value, dim_a, n, eps, mu.mu, p.log_ne_sym.unwrap_or(0.0), p.c0.unwrap_or(THM3_C0))?,
        _ => weak_bound(r.value, n, eps)?,
    };
    Ok(json!({
        "verdict": to_value(&cert.verdict),
        "q1": q1_json(&r),
        "mu_convention": to_value(&conv),
        "mu": to_value(&mu),
        "bound": to_value(&report),
        "rate": report.rate(),
    }))
}

/// ψ = (1⊗U)|Φ⟩ on A⊗B⊗E for the channel's Stinespring isometry.
fn channel_purification(ch: &Channel) -> (psc_matqi::CVec, [usize; 3]) {
    let dil = ch.dilation();
    let (din, db, de) = (ch.din(), ch.dout(), dil.env_dim());
    let u = linalg::kron(&dil.out_basis, &linalg::eye(de)) * &dil.u;
    let psi = linalg::kron(&linalg::eye(din), &u) * linalg::max_entangled(din);
    (psi, [din, db, de])
}

fn cmd_decouple(ch: &Channel, p: &Params) -> Result<Value> {
    let eta = p.eta.unwrap_or(0.05);
    let eps = p.eps.unwrap_or(0.5);
    let seed = p.seed.unwrap_or(1);
    let trials = p.trials.unwrap_or(20);
    let (psi, dims) = channel_purification(ch);
    let setup = DecouplingSetup::new(&psi, dims, eta, eps)?;
    let rank = prop4_rank(setup.hmin_eta, eps);
    let d = p.code_dim.unwrap_or(rank);
    if d > dims[0] {
        return Err(pre(format!("code dimension must be <= {} (input dimension)", dims[0])));
    }
    let bound = setup.bound(d);
    let mut rows = Vec::with_capacity(trials);
    let (mut best, mut sum) = (f64::INFINITY, 0.0);
    for t in 0..trials as u64 {
        let tr = setup.trial(d, seed + t)?;
        best = best.min(tr.distance);
        sum += tr.distance;
        rows.push(json!({ "seed": tr.seed, "t_q": tr.t_q, "distance": tr.distance, "draws": tr.draws }));
    }
    let berta = if trials >= 10 { to_value(&berta_average(&psi, dims, d, trials, seed)?) } else { Value::Null };
    Ok(json!({
        "d": d,
        "prop4_rank": rank,
        "eta": eta,
        "eps": eps,
        "hmin_eta": setup.hmin_eta,
        "bound": bound,
        "best_distance": best,
        "mean_distance": sum / trials as f64,
        "holds": best <= bound,
        "trials": rows,
        "berta": berta,
    }))
}

fn parse_matrix(v: &Value) -> Result<CMat> {
    let bad = || pre("code matrices must be square lists of rows of numbers or [re, im] pairs");
    let rows = v.as_array().ok_or_else(bad)?;
    let n = rows.len();
    let mut m = linalg::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().filter(|r| r.len() == n).ok_or_else(bad)?;
        for (j, x) in row.iter().enumerate() {
            m[(i, j)] = match x {
                Value::Number(num) => c(num.as_f64().ok_or_else(bad)?, 0.0),
                Value::Array(pair) if pair.len() == 2 => {
                    c(pair[0].as_f64().ok_or_else(bad)?, pair[1].as_f64().ok_or_else(bad)?)
                }
                _ => return Err(bad()),
            };
        }
    }
    Ok(m)
}

/// Computational-basis signals decoded by basis projectors, the last one absorbing the rest of B.
fn default_code(ch: &Channel) -> Result<PrivateCode> {
    let (din, dout) = (ch.din(), ch.dout());
    let m = din.min(dout);
    let signals = (0..m).map(|x| linalg::proj(&linalg::ket(din, x))).collect();
    let mut povm: Vec<CMat> = (0..m).map(|x| linalg::proj(&linalg::ket(dout, x))).collect();
    let rest = povm.iter().fold(linalg::eye(dout), |acc, d| acc - d);
    povm[m - 1] += rest;
    Ok(PrivateCode::new(signals, povm)?)
}

fn cmd_privacy(ch: &Channel, code: Option<&Value>) -> Result<Value> {
    let code = match code {
        None => default_code(ch)?,
        Some(v) => {
            let list = |k: &str| -> Result<Vec<CMat>> {
                v.get(k).and_then(Value::as_array).ok_or_else(|| pre(format!("code needs a `{k}` list")))?.iter().map(parse_matrix).collect()
            };
            PrivateCode::new(list("signals")?, list("povm")?)?
        }
    };
    let m = private_code_metrics(ch, &code)?;
    Ok(json!({
        "size": code.size(),
        "error": m.error,
        "privacy": m.privacy,
        "mean_fidelity": m.mean_fidelity,
        "gap": m.gap,
    }))
}

fn cmd_decoder(ch: &Channel, p: &Params) -> Result<Value> {
    let d = p.code_dim.unwrap_or(ch.din());
    let phi = embedded_max_entangled(d, ch.din())?;
    let r = optimal_decoder_fidelity(ch, &phi, d)?;
    Ok(json!({ "d": d, "fidelity": r.fidelity, "overlap": r.overlap, "gap": r.gap }))
}

/// S_ij = Σ_k K_k[i,i] K_k[j,j]* when every Kraus operator is diagonal.
fn schur_matrix(ch: &Channel) -> Option<CMat> {
    let d = ch.din();
    if ch.dout() != d {
        return None;
    }
    let diagonal = ch.kraus().iter().all(|k| (0..d).all(|i| (0..d).all(|j| i == j || k[(i, j)].norm() <= 1e-14)));
    diagonal.then(|| CMat::from_fn(d, d, |i, j| ch.kraus().iter().map(|k| k[(i, i)] * k[(j, j)].conj()).sum()))
}

fn cmd_symsdp(ch: &Channel, p: &Params) -> Result<Value> {
    let n = p.n.unwrap_or(1) as usize;
    let delta = p.delta.unwrap_or(0.8);
    let (dil, route) = match schur_matrix(ch) {
        Some(s) => (schur_direct_dilation(&s)?, "schur-direct"),
        None => {
            let cert = certify_degradability(ch)?;
            let dil = degradable_dilation(ch, &cert)?;
            (type_i_lift(ch, &dil)?.dilation, "type-i-lift")
        }
    };
    let phi0 = linalg::max_entangled(dil.dim_in);
    let ext = extract_symmetric_channel(&dil, &phi0)?;
    let state = from_extraction(&ext, n)?;
    let rep = search(&state, delta, &[])?;
    Ok(json!({ "dilation": route, "search": to_value(&rep) }))
}
