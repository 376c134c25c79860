use std::fs;
use std::path::PathBuf;
use std::process::Command;

use serde_json::{json, Value};
use wkt_cli::{run_with_env, Outcome};

fn run(args: &[&str]) -> Outcome {
    let mut argv = vec!["wkt"];
    argv.extend_from_slice(args);
    run_with_env(argv, None)
}

fn run_env(args: &[&str], env: Option<PathBuf>) -> Outcome {
    let mut argv = vec!["wkt"];
    argv.extend_from_slice(args);
    run_with_env(argv, env)
}

fn payload(o: &Outcome) -> Value {
    assert_eq!(o.code, 0, "stderr: {}", o.stderr);
    serde_json::from_str(&o.stdout).unwrap()
}

#[test]
fn documented_examples() {
    let v = payload(&run(&["factor", "lengths", "--gens", "2,3", "--element", "6"]));
    assert_eq!(v["lengths"], json!([2, 3]));

    let v = payload(&run(&["decide", "weakly-krull", "--domain", "z", "--monoid", "numerical:2,3"]));
    assert_eq!(v["answer"], json!(true));
    assert!(v["certificate"].as_array().is_some_and(|c| !c.is_empty()));

    let v = payload(&run(&["numon", "info", "--gens", "1"]));
    assert_eq!(v["frobenius"], json!(-1));
    assert_eq!(v["gaps"], json!([]));
}

#[test]
fn output_is_sorted_compact_json() {
    let o = run(&["numon", "info", "--gens", "3,5"]);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(o.stdout.ends_with("}\n") && !o.stdout.contains("\n  "));
    let raw = o.stdout.trim_end();
    let a = raw.find("\"atoms\"").unwrap();
    let z = raw.find("\"valuation\"").unwrap();
    assert!(a < z);
}

#[test]
fn exit_codes() {
    let o = run(&["numon", "info", "--gens", "0"]);
    assert_eq!(o.code, 2);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "input");
    assert!(o.stderr.starts_with("error:"));

    assert_eq!(run(&["numon", "info", "--gens", "4,6"]).code, 2);
    assert_eq!(run(&["hilbertian", "find", "--p", "2", "--prefix", "0,1", "--max-degree", "4"]).code, 2);
    assert_eq!(run(&["hilbertian", "find", "--p", "4", "--prefix", "1", "--max-degree", "4"]).code, 2);
    assert_eq!(run(&["decide", "kg", "--char", "4", "--group", "z"]).code, 2);

    let o = run(&["blocks", "davenport", "--group", "2,2,2,2,2,2,2"]);
    assert_eq!(o.code, 3);
    assert_eq!(serde_json::from_str::<Value>(&o.stdout).unwrap()["error"]["kind"], "cap_exceeded");

    // X^3 + 1 and X^3 + X^2 + 1 ... every degree-3 extension of (1, 0, 0)
    // over F_2 is X^3 + 1, which has the root 1.
    let o = run(&["hilbertian", "find", "--p", "2", "--prefix", "1,0,0", "--max-degree", "3"]);
    assert_eq!(o.code, 4);
    assert_eq!(serde_json::from_str::<Value>(&o.stdout).unwrap()["error"]["kind"], "not_found");
}

#[test]
fn usage_errors() {
    let o = run(&["frobnicate"]);
    assert_eq!(o.code, 2);
    assert!(o.stdout.is_empty());
    assert!(o.stderr.contains("Usage"));

    assert_eq!(run(&[]).code, 2);
    assert_eq!(run(&["factor", "lengths", "--gens", "2,3"]).code, 2);

    let o = run(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("numon") && o.stdout.contains("hilbertian"));
}

#[test]
fn binary_exit_status_matches() {
    let bin = env!("CARGO_BIN_EXE_wkt");
    let ok = Command::new(bin).args(["factor", "lengths", "--gens", "2,3", "--element", "6"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(ok.stdout).unwrap(),
        run(&["factor", "lengths", "--gens", "2,3", "--element", "6"]).stdout
    );
    let bad = Command::new(bin).arg("nope").env_remove("WKT_CACHE_DIR").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let capped = Command::new(bin).args(["blocks", "atoms", "--group", "128"]).output().unwrap();
    assert_eq!(capped.status.code(), Some(3));
}

#[test]
fn capped_payloads_are_flagged() {
    let spec = r#"{"group":[2],"g0":[[1]],"components":[{"monoid":{"atoms":[2,3]},"class":[1]}]}"#;
    let cases: Vec<Vec<&str>> = vec![
        vec!["factor", "delta", "--gens", "3,5", "--bound", "30"],
        vec!["factor", "uk", "--gens", "3,5", "--k", "2", "--bound", "30"],
        vec!["blocks", "delta", "--group", "3", "--cap", "8"],
        vec!["blocks", "uk", "--group", "3", "--k", "2", "--cap", "8"],
        vec!["blocks", "tblock-atoms", "--spec", spec, "--cap", "3", "--t-max", "4"],
    ];
    for args in cases {
        let v = payload(&run(&args));
        assert_eq!(v["complete"], json!(false), "{args:?}");
        assert!(!v["cap"].is_null(), "{args:?}");
    }
    let exact = payload(&run(&["blocks", "lengths", "--group", "3", "--block", "1;2"]));
    assert!(exact.get("complete").is_none());
}

#[test]
fn cache_hit_returns_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--cache-dir", d, "classgroup", "numerical", "--p", "2", "--gens", "2,5"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a, b);
    let text = fs::read_to_string(dir.path().join("results.jsonl")).unwrap();
    assert_eq!(text.lines().count(), 1);
    let rec: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert!(rec["key"].as_str().unwrap().starts_with("classgroup.numerical|"));
    assert!(rec["written_at"].is_u64());
    assert_eq!(serde_json::to_string(&rec["payload"]).unwrap() + "\n", a.stdout);
}

#[test]
fn cached_payload_is_served_without_recomputation() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--cache-dir", d, "numon", "apery", "--gens", "3,5", "--element", "3"];
    run(&args);
    // Rewrite the stored payload: a later hit must come from the store.
    let path = dir.path().join("results.jsonl");
    let mut rec: Value = serde_json::from_str(fs::read_to_string(&path).unwrap().trim()).unwrap();
    rec["payload"] = json!({"marker": 1});
    fs::write(&path, format!("{rec}\n")).unwrap();
    assert_eq!(run(&args).stdout, "{\"marker\":1}\n");
    assert_ne!(run(&["--no-cache", "numon", "apery", "--gens", "3,5", "--element", "3"]).stdout, "{\"marker\":1}\n");
}

#[test]
fn corrupt_cache_lines_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--cache-dir", d, "factor", "lengths", "--gens", "3,5", "--element", "15"];
    let clean = run(&["factor", "lengths", "--gens", "3,5", "--element", "15"]);
    fs::write(dir.path().join("results.jsonl"), "{\"key\": tru\nnot json at all\n").unwrap();
    let first = run(&args);
    assert_eq!(first.code, 0);
    assert_eq!(first.stdout, clean.stdout);
    assert!(first.stderr.contains("corrupt cache line 1"));
    assert!(first.stderr.contains("corrupt cache line 2"));
    let second = run(&args);
    assert_eq!(second.stdout, clean.stdout);
    let lines = fs::read_to_string(dir.path().join("results.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), 3);
}

#[test]
fn unusable_cache_directory_disables_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain-file");
    fs::write(&file, "x").unwrap();
    let bad = file.join("cache");
    let o = run(&["--cache-dir", bad.to_str().unwrap(), "factor", "lengths", "--gens", "2,3", "--element", "6"]);
    assert_eq!(o.code, 0);
    assert!(o.stderr.contains("warning: cache disabled"));
    assert_eq!(o.stdout, run(&["factor", "lengths", "--gens", "2,3", "--element", "6"]).stdout);
}

#[test]
fn flag_overrides_environment() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let args = ["groups", "snf", "--relations", "2,0;0,3", "--generators", "2"];
    run_env(&args, Some(env_dir.path().to_path_buf()));
    assert!(env_dir.path().join("results.jsonl").exists());

    let mut with_flag = vec!["--cache-dir", flag_dir.path().to_str().unwrap()];
    with_flag.extend_from_slice(&args);
    let before = fs::read_to_string(env_dir.path().join("results.jsonl")).unwrap();
    run_env(&with_flag, Some(env_dir.path().to_path_buf()));
    assert!(flag_dir.path().join("results.jsonl").exists());
    assert_eq!(fs::read_to_string(env_dir.path().join("results.jsonl")).unwrap(), before);

    let none = tempfile::tempdir().unwrap();
    let mut off = vec!["--no-cache"];
    off.extend_from_slice(&args);
    run_env(&off, Some(none.path().to_path_buf()));
    assert!(!none.path().join("results.jsonl").exists());
}

#[test]
fn distinct_inputs_get_distinct_records() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let a = run(&["--cache-dir", d, "factor", "lengths", "--gens", "3,5", "--element", "15"]);
    let b = run(&["--cache-dir", d, "factor", "lengths", "--gens", "3,5", "--element", "16"]);
    // Same monoid written differently shares the key.
    let c = run(&["--cache-dir", d, "factor", "lengths", "--gens", "5,3,10", "--element", "15"]);
    assert_ne!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let text = fs::read_to_string(dir.path().join("results.jsonl")).unwrap();
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn json_descriptors_round_trip() {
    let domain = r#"{"kind":"custom","flags":{"characteristic":0,"is_field":false,"weakly_krull":"attested","umt":"attested","gcd":"unknown","weakly_factorial":"unknown","generalized_krull":"unknown","mori":"unknown","conductor_nonzero":"unknown"}}"#;
    let v = payload(&run(&["decide", "weakly-krull", "--domain", domain, "--monoid", "numerical:3,5"]));
    assert_eq!(v["answer"], json!(true));
    let steps = v["certificate"].as_array().unwrap();
    assert!(steps.iter().any(|s| s["flag"] == json!("attested")));

    let monoid = r#"{"kind":"custom","flags":{"weakly_krull":true,"umt":true,"gcd":"unknown","weakly_factorial":"unknown","generalized_krull":"unknown"},"group":{"components":[{"exceptions":{"2":"inf"},"default_class":{"kind":"all_others_cap_zero"}}]}}"#;
    let a = payload(&run(&["decide", "weakly-krull", "--domain", "q", "--monoid", monoid]));
    assert_eq!(a["answer"], json!(false));
    let b = payload(&run(&["decide", "weakly-krull", "--domain", "fp:2", "--monoid", monoid]));
    assert_eq!(b["answer"], json!(true));

    // A built-in kind with contradicting flags is rejected.
    let lying = r#"{"kind":"integers_z","flags":{"characteristic":0,"is_field":true,"weakly_krull":true,"umt":true,"gcd":true,"weakly_factorial":true,"generalized_krull":true,"mori":true,"conductor_nonzero":true}}"#;
    assert_eq!(run(&["decide", "wfd", "--domain", lying, "--monoid", "n0"]).code, 2);

    let g = payload(&run(&["groups", "type", "--group", "frac:2"]));
    let again = payload(&run(&[
        "groups",
        "type",
        "--group",
        &serde_json::to_string(&json!({
            "components": [{"exceptions": {"2": "inf"}, "default_class": {"kind": "all_others_cap_zero"}}]
        }))
        .unwrap(),
    ]));
    assert_eq!(g, again);
}

#[test]
fn unknown_truth_is_not_false() {
    let v = payload(&run(&["decide", "weakly-krull", "--domain", "order:Z[sqrt(-3)]", "--monoid", "numerical:2,3"]));
    assert_eq!(v["answer"], json!(true));
    let d = r#"custom:{"characteristic":0,"is_field":false,"weakly_krull":"unknown","umt":true,"gcd":"unknown","weakly_factorial":"unknown","generalized_krull":"unknown","mori":"unknown","conductor_nonzero":"unknown"}"#;
    let v = payload(&run(&["decide", "weakly-krull", "--domain", d, "--monoid", "n0"]));
    assert_eq!(v["answer"], json!("unknown"));
}

#[test]
fn pretty_output_is_a_table() {
    let o = run(&["--pretty", "factor", "lengths", "--gens", "2,3", "--element", "6"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.lines().any(|l| l.starts_with("lengths") && l.ends_with("[2,3]")));
}

#[test]
fn block_commands_agree() {
    let l = payload(&run(&["blocks", "lengths", "--group", "3", "--block", "1;1;1;2;2;2"]));
    assert_eq!(l["lengths"], json!([2, 3]));
    assert_eq!(l["multiplicities"], json!({"1": 3, "2": 3}));
    assert_eq!(l["group"], json!([3]));
    let f = payload(&run(&["blocks", "factorizations", "--group", "3", "--block", "1;1;1;2;2;2"]));
    assert_eq!(f["count"], json!(2));
    let a = payload(&run(&["blocks", "atoms", "--group", "3", "--g0", "1;2"]));
    assert_eq!(a["count"], json!(3));
    assert_eq!(run(&["blocks", "lengths", "--group", "3", "--block", "1;1"]).code, 2);
}

#[test]
fn tblock_commands() {
    let spec = r#"{"group":[2],"g0":[[1]],"components":[{"monoid":{"atoms":[2,3]},"class":[1]}]}"#;
    let ok = payload(&run(&["blocks", "tblock-validate", "--spec", spec, "--element", r#"{"block":{"1":1},"t":[3]}"#]));
    assert_eq!(ok["valid"], json!(true));
    let bad =
        payload(&run(&["blocks", "tblock-validate", "--spec", spec, "--element", r#"{"block":{"1":1},"t":[2]}"#]));
    assert_eq!(bad["valid"], json!(false));
    assert!(bad["reason"].is_string());
    let l = payload(&run(&[
        "blocks",
        "tblock-lengths",
        "--spec",
        spec,
        "--cap",
        "4",
        "--t-max",
        "8",
        "--element",
        r#"{"block":{"1":2},"t":[6]}"#,
    ]));
    assert_eq!(l["lengths"], json!([2, 4]));
    assert_eq!(l["surrogate"], json!(true));
    let broken = r#"{"group":[2],"g0":[[1]],"components":[{"monoid":{"atoms":[2,3]},"class":[5]}]}"#;
    assert_eq!(run(&["blocks", "tblock-atoms", "--spec", broken, "--cap", "2", "--t-max", "2"]).code, 2);
}
