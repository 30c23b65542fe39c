use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn chainlen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chainlen"))
        .args(args)
        .env_remove("CHAINLEN_SEED")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &Path, name: &str, doc: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(doc).unwrap()).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn connect_equal_forms_gives_empty_chain() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.json", &json!({ "v": [1, 2, 3, 5], "w": [1, 2, 3, 5] }));
    let out = chainlen(&["connect", "--in", &input]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["chain"]["moves"], json!([]));
    assert_eq!(doc["chain"]["total_steps"], 0);
}

#[test]
fn connect_non_isometric_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.json", &json!({ "v": [1, 1], "w": [3, 1] }));
    let out = chainlen(&["connect", "--in", &input]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"]["kind"], "not-isometric");
}

#[test]
fn twelve_slot_chain_within_bound_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let pair = chainlen(&["generate", "--kind", "pair", "--n", "12", "--seed", "11"]);
    assert_eq!(pair.status.code(), Some(0));
    let input = write(dir.path(), "pair.json", &json_of(&pair));
    let cert_path = dir.path().join("cert.json");
    let out = chainlen(&["connect", "--in", &input, "--out", cert_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    assert!(cert["chain"]["total_steps"].as_u64().unwrap() <= 199);

    let ok = chainlen(&["verify", "--in", cert_path.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json_of(&ok)["pass"], true);

    // Change the scalar of the first full move.
    let mut bad = cert.clone();
    let moves = bad["chain"]["moves"].as_array_mut().unwrap();
    let step = moves.iter().position(|m| m["t"] == "full").expect("chain has a full move");
    let c = &mut moves[step]["c"];
    let unit = if c["unit"] == "1" { "2" } else { "1" };
    c["unit"] = json!(unit);
    let bad_path = write(dir.path(), "bad.json", &bad);
    let out = chainlen(&["verify", "--in", &bad_path]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json_of(&out);
    assert_eq!(doc["pass"], false);
    assert_eq!(doc["failure"]["step"], step);
}

#[test]
fn decompositions_verify_and_tampering_breaks_ledger() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["q5", "q6-case1", "q6-case2"] {
        let gen = chainlen(&["generate", "--kind", kind, "--seed", "2"]);
        assert_eq!(gen.status.code(), Some(0), "{kind}");
        let input = write(dir.path(), "gen.json", &json_of(&gen));
        let out = chainlen(&["decompose", "--in", &input]);
        assert_eq!(out.status.code(), Some(0), "{kind}: {}", String::from_utf8_lossy(&out.stdout));
        let cert = json_of(&out);
        let bound = if kind == "q5" { 200 } else { 362 };
        assert!(cert["symbol_count"].as_u64().unwrap() <= bound);

        let path = write(dir.path(), "cert.json", &cert);
        assert_eq!(chainlen(&["verify", "--in", &path]).status.code(), Some(0), "{kind}");

        let mut bad = cert.clone();
        let tail = bad["tail"].as_array_mut().unwrap();
        tail.push(tail[0].clone());
        let path = write(dir.path(), "bad.json", &bad);
        let out = chainlen(&["verify", "--in", &path]);
        assert_eq!(out.status.code(), Some(1), "{kind}");
        assert!(!json_of(&out)["failure"]["reason"].as_str().unwrap().is_empty());
    }
}

#[test]
fn fuzz_reports_are_deterministic() {
    let strip = |mut v: Value| {
        v["aggregate"]["elapsed_us"] = json!(0);
        for r in v["results"].as_array_mut().unwrap() {
            r["elapsed_us"] = json!(0);
        }
        v
    };
    let a = chainlen(&["fuzz", "--suite", "step-symbol", "--trials", "40", "--seed", "3"]);
    let b = chainlen(&["fuzz", "--suite", "step-symbol", "--trials", "40", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(strip(json_of(&a)), strip(json_of(&b)));
    assert_eq!(json_of(&a)["aggregate"]["passed"], 40);
}

#[test]
fn fuzz_zero_trials_is_an_empty_pass() {
    let out = chainlen(&["fuzz", "--suite", "q6", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["results"], json!([]));
    assert_eq!(doc["aggregate"]["failed"], 0);
}

#[test]
fn seed_env_overrides_flag() {
    let run = |env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_chainlen"));
        cmd.args(["fuzz", "--suite", "phi-psi", "--trials", "2", "--seed", "1"]);
        match env {
            Some(s) => cmd.env("CHAINLEN_SEED", s),
            None => cmd.env_remove("CHAINLEN_SEED"),
        };
        json_of(&cmd.output().unwrap())
    };
    assert_eq!(run(None)["config"]["seed"], 1);
    assert_eq!(run(Some("99"))["config"]["seed"], 99);
}

#[test]
fn bad_config_and_input_exit_2() {
    let out = chainlen(&["fuzz", "--suite", "phi-psi", "--trials", "1", "--p", "19"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"]["kind"], "invalid-config");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("junk.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = chainlen(&["verify", "--in", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"]["kind"], "invalid-input");
}

#[test]
fn prime_field_chains() {
    let dir = tempfile::tempdir().unwrap();
    let gen = chainlen(&["generate", "--kind", "pair", "--n", "6", "--field", "fp", "--p", "13", "--m", "1"]);
    assert_eq!(gen.status.code(), Some(0));
    let input = write(dir.path(), "pair.json", &json_of(&gen));
    let out = chainlen(&["connect", "--in", &input, "--field", "fp", "--p", "13", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = write(dir.path(), "cert.json", &json_of(&out));
    let ok = chainlen(&["verify", "--in", &cert]);
    assert_eq!(ok.status.code(), Some(0));
}
