use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel).display().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("psc-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn psc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psc")).args(args).env("QCONV_THREADS", "2").output().unwrap()
}

fn json_of(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn thm1_example_lambda_and_terms() {
    let v = json_of(&psc(&["bound", "thm1", "--zoo", "dephasing", "--p", "0.1", "--n", "1000", "--eps", "0.1"]));
    let b = &v["result"]["bound"];
    let lambda = b["lambda"].as_f64().unwrap();
    assert!((lambda - 0.25 * (0.5f64.sqrt() - 0.1)).abs() < 1e-11);
    assert!((lambda - 0.15178).abs() < 1e-5);
    let names: Vec<&str> = b["terms"].as_array().unwrap().iter().map(|t| t["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["n_q1", "aep", "log_n", "constant", "log_inv_lambda"]);
    let sum: f64 = b["terms"].as_array().unwrap().iter().map(|t| t["value"].as_f64().unwrap()).sum();
    assert!((sum - b["total"].as_f64().unwrap()).abs() < 1e-8);
    assert_eq!(v["version"], "psc-0.1.0");
    assert_eq!(v["config"]["threads"], 2);
}

#[test]
fn certify_erasure_is_antidegradable() {
    let v = json_of(&psc(&["certify", "--zoo", "erasure", "--d", "2", "--q", "0.7"]));
    assert_eq!(v["result"]["verdict"], "AntiDegradable");
}

#[test]
fn q1_identity_is_one() {
    let v = json_of(&psc(&["q1", "--zoo", "identity", "--d", "2"]));
    assert_eq!(v["result"]["q1"]["value"].as_f64().unwrap(), 1.0);
}

#[test]
fn precondition_violations_exit_2_and_name_the_constraint() {
    let o = psc(&["bound", "thm1", "--zoo", "dephasing", "--p", "0.1", "--eps", "0.70710678118654757"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("epsilon must be < 0.7071 (Thm 1)"), "{}", stderr(&o));

    let o = psc(&["bound", "thm2", "--zoo", "dephasing", "--p", "0.1", "--eps", "0.5", "--delta", "0.2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("(Thm 2)"));

    let o = psc(&["bound", "weak", "--zoo", "dephasing", "--p", "0.1", "--eps", "0.5"]);
    assert_eq!(o.status.code(), Some(2));

    let o = psc(&["q1", "--zoo", "dephasing", "--p", "1.5"]);
    assert_eq!(o.status.code(), Some(2));

    let o = psc(&["q1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("channel is required"));

    // anti-degradable channels have no converse bound here
    let o = psc(&["bound", "thm1", "--zoo", "erasure", "--q", "0.7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("degradable"));
}

#[test]
fn unknown_command_exits_64() {
    assert_eq!(psc(&["frobnicate"]).status.code(), Some(64));
    let o = psc(&["sweep", "frobnicate", "--param", "p", "--from", "0", "--to", "1", "--zoo", "dephasing", "--p", "0"]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn malformed_channel_files_exit_65() {
    let bad_json = scratch("bad.json");
    std::fs::write(&bad_json, "{\"zoo\": ").unwrap();
    let not_tp = scratch("not_tp.json");
    std::fs::write(&not_tp, r#"{"name":"x","din":2,"dout":2,"kraus":[[[2,0],[0,0],[0,0],[1,0]]]}"#).unwrap();
    let bad_kind = scratch("bad_kind.json");
    std::fs::write(&bad_kind, r#"{"zoo":"teleporter","params":{}}"#).unwrap();
    let missing = scratch("does_not_exist.json");
    for f in [&bad_json, &not_tp, &bad_kind, &missing] {
        let o = psc(&["certify", "--channel", f.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(65), "{}: {}", f.display(), stderr(&o));
    }
}

#[test]
fn kraus_file_matches_zoo() {
    let a = json_of(&psc(&["q1", "--channel", &data("channels/dephasing_kraus.json")]));
    let b = json_of(&psc(&["q1", "--zoo", "dephasing", "--p", "0.2"]));
    let (x, y) = (a["result"]["q1"]["value"].as_f64().unwrap(), b["result"]["q1"]["value"].as_f64().unwrap());
    assert!((x - y).abs() < 1e-10);
    assert_eq!(a["config"]["channel"]["path"], data("channels/dephasing_kraus.json"));
}

#[test]
fn privacy_from_code_file_matches_default_code() {
    let ch = data("channels/erasure_kraus.json");
    let a = json_of(&psc(&["privacy", "--channel", &ch, "--code", &data("codes/erasure_basis.json")]));
    let b = json_of(&psc(&["privacy", "--channel", &ch]));
    assert_eq!(a["result"], b["result"]);
    assert!(a["config"]["code"].is_object());
}

fn replay_identical(args: &[&str], name: &str) {
    let first = scratch(name);
    let second = scratch(&format!("replayed-{name}"));
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--out", first.to_str().unwrap()]);
    let o = psc(&full);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = psc(&["replay", first.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap(), "{name}");
}

#[test]
fn replay_reproduces_json_and_csv() {
    let ch = data("channels/dephasing_0.1.json");
    replay_identical(&["bound", "thm1", "--channel", &ch, "--n", "500"], "bound.json");
    replay_identical(&["entropy", "hmin", "--channel", &ch, "--format", "csv"], "entropy.csv");
    replay_identical(&["sweep", "bound", "--kind", "thm1", "--param", "n", "--from", "100", "--to", "1000", "--steps", "4", "--channel", &ch], "sweep.csv");
}

#[test]
fn sweep_rows_follow_grid_order() {
    let o = psc(&["sweep", "q1", "--param", "p", "--from", "0", "--to", "0.5", "--steps", "6", "--zoo", "dephasing", "--p", "0"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# version=psc-0.1.0 config="));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "q1.value").unwrap();
    let h = |p: f64| -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
    for (i, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[0], i.to_string());
        let p = 0.1 * i as f64;
        let want = if i == 0 { 1.0 } else { 1.0 - h(p) };
        assert!((cells[col].parse::<f64>().unwrap() - want).abs() < 1e-6, "row {i}");
    }
}

#[test]
fn sweep_keeps_failing_points_as_error_rows() {
    let o = psc(&["sweep", "bound", "--kind", "thm1", "--param", "eps", "--from", "0.5", "--to", "0.8", "--steps", "2", "--zoo", "dephasing", "--p", "0.1"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let last = text.lines().last().unwrap();
    assert!(last.contains("epsilon must be < 0.7071 (Thm 1)"), "{last}");
}
