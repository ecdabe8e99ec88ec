use std::io::Write;
use std::process::{Command, Stdio};

use curvemoduli_cli::{cutoff_policy, parse_job, render_table, run, Job, Report};
use curvemoduli_core::trunctower::CutoffPolicy;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_curvemoduli"));
    c.env_remove("CURVEMODULI_CUTOFF");
    c
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = invoke(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

fn run_text(text: &str) -> Report {
    run(&parse_job(text).unwrap(), CutoffPolicy::default()).unwrap()
}

#[test]
fn hilbert_of_a_cube() {
    let v = json(&["hilbert", "--ideal", "x1^3", "--N", "2", "--level", "8"]);
    assert_eq!(v["result"]["e0"], 3);
    assert_eq!(v["result"]["e1"], 3);
    assert_eq!(v["result"]["values"], serde_json::json!([1, 3, 6, 9, 12, 15, 18, 21]));
}

#[test]
fn admissible_range_spot_value() {
    let v = json(&["admissible", "--b", "3", "--e0", "3"]);
    assert_eq!((v["result"]["rho0"].as_i64(), v["result"]["rho1"].as_i64()), (Some(2), Some(2)));
    let v = json(&["admissible", "--b", "2", "--e0", "4", "--e1", "5"]);
    assert_eq!(v["result"]["admissible"], false);
}

#[test]
fn semigroup_delta() {
    let v = json(&["semigroup", "--gens", "6,7,10,15"]);
    assert_eq!(v["result"]["delta"], 8);
    assert_eq!(v["result"]["mu"], 16);
    assert_eq!(v["result"]["conductor"], 12);
}

#[test]
fn cubic_job_file_is_not_a_family() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/jobs/cubic_deformation.json");
    let v = json(&["run", "--job", path]);
    assert_eq!(v["result"]["verdict"], "not a family");
    assert_eq!(v["result"]["routes_agree"], true);
    assert_eq!(v["result"]["flatness"]["flat"], false);
}

#[test]
fn enumerate_lists_every_ideal() {
    let v = json(&["enumerate", "--N", "2", "--e0", "2", "--n", "4", "--q", "2"]);
    let r = &v["result"];
    let count = r["count"].as_u64().unwrap();
    assert_eq!(r["ideals"].as_array().unwrap().len() as u64, count);
    // one level down, the fiber has q^{(N-1) e0} = 4 points over each ideal
    let below = json(&["enumerate", "--N", "2", "--e0", "2", "--n", "3", "--q", "2"]);
    assert_eq!(count, 4 * below["result"]["count"].as_u64().unwrap());
    let (_, table, _) = invoke(&["--table", "enumerate", "--N", "2", "--e0", "2", "--n", "4", "--q", "2"]);
    assert!(table.lines().count() as u64 > count);
}

#[test]
fn reports_are_byte_identical() {
    let args = ["deform", "--base", "x1^2 - x2^3", "--e0", "2", "--N", "2", "--random", "8", "--seed", "5"];
    let (_, a, _) = invoke(&args);
    let (_, b, _) = invoke(&args);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["result"]["agreements"], 8);
}

#[test]
fn embedded_job_round_trips() {
    let jobs = [
        r#"{"command":"hilbert","ideal":"x1^2 - x2^3","N":2,"level":6}"#,
        r#"{"command":"param","branches":["t^3, t^4, t^5"],"n":5}"#,
        r#"{"command":"colon","ideal":"x1^3","by":"x1, x2","a":4,"N":2}"#,
        r#"{"command":"mps","class0":"L - 1","n0":1,"N":2,"e0":1,"terms":5}"#,
        r#"{"command":"volume","terms":["0:1","2:L^3 - L"]}"#,
        r#"{"command":"determinantal","rows":["x3, 0","x1^4, x3","0, x2"],"N":3}"#,
    ];
    for text in jobs {
        let job = parse_job(text).unwrap();
        let report = run(&job, CutoffPolicy::default()).unwrap();
        let back: Job = serde_json::from_value(report.value["job"].clone()).unwrap();
        assert_eq!(back, job, "{text}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(invoke(&["hilbert", "--ideal", "x1^2", "--N", "2"]).0, 0);
    // a surface never stabilizes: soft failure
    assert_eq!(invoke(&["hilbert", "--ideal", "x1*x2*x3", "--N", "3", "--level", "6"]).0, 3);
    let (code, _, err) = invoke(&["hilbert", "--ideal", "1 + x1", "--N", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("unit"));
    assert_eq!(invoke(&["semigroup", "--gens", "4,6"]).0, 2);
    assert_eq!(invoke(&["admissible", "--b", "3", "--e0", "2"]).0, 2);
    assert_eq!(invoke(&["enumerate", "--N", "2", "--e0", "2", "--n", "5", "--q", "3", "--budget", "10"]).0, 3);
}

#[test]
fn cutoff_from_environment() {
    let out = bin().env("CURVEMODULI_CUTOFF", "5:9:2").args(["hilbert", "--ideal", "x1^2", "--N", "2"]).output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["values"].as_array().unwrap().len(), 5);
    assert_eq!(v["cutoff"]["n_max"], 9);
    let bad = bin().env("CURVEMODULI_CUTOFF", "nonsense").args(["hilbert", "--ideal", "x1", "--N", "1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(cutoff_policy(Some("2:9:2")).is_err());
}

#[test]
fn job_from_stdin() {
    let mut child = bin().args(["run", "--job", "-"]).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(br#"{"command":"specialize","class":"L^2 - 1","q":3}"#).unwrap();
    let out = child.wait_with_output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["value"], "8");
}

#[test]
fn fiber_table() {
    let r = run_text(r#"{"command":"normflat","branch_fibers":["t^2, t^3","t^2, t^5"],"n":6}"#);
    let t = render_table(&r);
    let first = t.lines().next().unwrap();
    assert_eq!(first.split_whitespace().collect::<Vec<_>>(), ["t", "fiber0", "fiber1"]);
    assert_eq!(r.result()["hilbert_function_constant"], true);
    let r = run_text(r#"{"command":"normflat","family":"x1^2 - u*x2, x3","samples":[0,1],"N":3,"n":6}"#);
    assert_eq!(r.result()["hilbert_function_constant"], false);
}

#[test]
fn remaining_commands_run() {
    let cases = [
        r#"{"command":"initial","ideal":"x1^2 - x2^3","N":2,"level":6}"#,
        r#"{"command":"stdbasis","ideal":"x1^2 - x2^3","N":2,"level":6}"#,
        r#"{"command":"nu","ideal":"x1*x2, x1*x3, x2*x3","N":3,"level":5}"#,
        r#"{"command":"gamma","ideal":"x1^2 - x2^3","other":"x1","N":2,"level":8}"#,
        r#"{"command":"tn","ideal":"x1^3","e0":3,"N":2,"level":6}"#,
        r#"{"command":"shape","ideal":"x1^3","e0":3,"N":2,"level":6}"#,
        r#"{"command":"jtilde","ideal":"x1^3 + x2^5","e0":3,"N":2,"level":6}"#,
        r#"{"command":"stratum","ideal":"x1^2","f":[1,3,5,7,9,11],"r":1,"N":2,"level":6}"#,
        r#"{"command":"superficial","ideal":"x1^3","form":"x2","e0":3,"N":2,"level":6}"#,
        r#"{"command":"cells","ideal":"x1^2","e0":2,"i":[1,2,3],"j":[5,6],"q":1,"N":2,"level":4}"#,
    ];
    for c in cases {
        let r = run_text(c);
        assert!(!r.result().is_null(), "{c}");
    }
    assert_eq!(run_text(cases[3]).result()["finite"], 3);
    assert_eq!(run_text(cases[2]).result()["nu"], 3);
    assert_eq!(run_text(cases[8]).result()["superficial"], true);
}
