use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

use effdim::cli::run;

const TWO_BLOCK: &str = r#"{"anchor_depth":0,"anchor_E":"0/1","breakpoints":[0,10],"slopes":["1/1","3/4"]}"#;
const SQRT: &str = r#"{"anchor_depth":0,"anchor_E":"0/1","breakpoints":[0],"slopes":["1/2"],"tail_rule":{"kind":"power"}}"#;

fn ok(args: &[&str]) -> String {
    let out = run(std::iter::once("effdim").chain(args.iter().copied()));
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    out.stdout
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    serde_json::from_str(&ok(&all)).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// Non-integer numbers may only appear inside an object tagged with a kind.
fn untagged_numbers(v: &Value, tagged: bool, path: &str, out: &mut Vec<String>) {
    match v {
        Value::Number(n) if !tagged && n.as_i64().is_none() && n.as_u64().is_none() => out.push(path.to_string()),
        Value::Object(m) => {
            let here = m.contains_key("kind");
            for (k, x) in m {
                untagged_numbers(x, here, &format!("{path}.{k}"), out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                untagged_numbers(x, false, &format!("{path}[{i}]"), out);
            }
        }
        _ => {}
    }
}

#[test]
fn gauge_eval_on_the_two_block_gauge() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", TWO_BLOCK);
    assert_eq!(ok(&["gauge", "eval", "--file", &g, "--depth", "14"]), "E=13\n");
    let v = json(&["gauge", "eval", "--file", &g, "--depth", "14"]);
    assert_eq!(v["result"]["value"]["kind"], "exact-log2");
    assert_eq!(v["result"]["value"]["exponent"], "13/1");
}

#[test]
fn tree_build_emits_schedule_rows() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "sqrt.json", SQRT);
    let text = ok(&["tree", "build", "--s", "1/2", "--gauge", &g, "--blocks", "2"]);
    let rows: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let got: Vec<(u64, &str, u64)> = rows
        .iter()
        .map(|r| (r["l_next"].as_u64().unwrap(), r["r_star"].as_str().unwrap(), r["c_n"].as_u64().unwrap()))
        .collect();
    assert_eq!(got, vec![(10, "1/1", 10), (37, "28/37", 18)]);

    // the emitted rows are a valid schedule file
    let sch = write(dir.path(), "s.jsonl", &text);
    let bits = write(dir.path(), "x.txt", "0110100110010110100101101001\n");
    let diluted = ok(&["tree", "dilute", "--schedule", &sch, "--bits", &bits]);
    assert_eq!(diluted.trim(), "0110100110010110100101101001000000000");
    assert_eq!(ok(&["tree", "member", "--schedule", &sch, "--word", diluted.trim()]), "member: true\n");
    let d = write(dir.path(), "d.txt", &diluted);
    assert_eq!(ok(&["tree", "dilute", "--schedule", &sch, "--bits", &d, "--inverse"]).trim(), "0110100110010110100101101001");
}

#[test]
fn premeasure_writes_its_cover() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "sqrt.json", SQRT);
    let set = write(dir.path(), "set.txt", "0000\n1111\n");
    let cover = dir.path().join("cover.txt");
    let c = cover.to_str().unwrap();
    let v = json(&["measure", "premeasure", "--set", &set, "--gauge", &g, "--min-depth", "1", "--emit-cover", c]);
    let words: Vec<String> = fs::read_to_string(&cover).unwrap().lines().map(String::from).collect();
    assert_eq!(v["result"]["cover_size"], words.len().to_string());
    assert_eq!(v["result"]["cost"]["kind"], "interval");
}

#[test]
fn dimension_rows_as_csv() {
    let out = ok(&["--seed", "5", "--format", "csv", "dim", "estimate", "--random", "4000", "--depths", "1000,2000,4000"]);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("# command=dim estimate seed=5 precision=53"));
    assert_eq!(lines.next().unwrap(), "depth,bits,ratio");
    let depths: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(depths, ["1000", "2000", "4000"]);
}

#[test]
fn structured_output_is_deterministic() {
    let a = ok(&["--seed", "9", "--format", "json", "dim", "estimate", "--random", "3000"]);
    let b = ok(&["--seed", "9", "--format", "json", "dim", "estimate", "--random", "3000"]);
    let c = ok(&["--seed", "10", "--format", "json", "dim", "estimate", "--random", "3000"]);
    assert_eq!(a, b);
    assert_ne!(a, c);
    let s1 = ok(&["separate", "--s", "2/3", "--blocks", "6", "--json"]);
    let s2 = ok(&["separate", "--s", "2/3", "--blocks", "6", "--json"]);
    assert_eq!(s1, s2);
}

#[test]
fn every_numeric_carries_its_kind() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "sqrt.json", SQRT);
    let set = write(dir.path(), "set.txt", "01\n110\n");
    let sch_text = ok(&["tree", "build", "--s", "1/2", "--blocks", "3"]);
    let sch = write(dir.path(), "s.jsonl", &sch_text);
    let runs: Vec<Vec<&str>> = vec![
        vec!["separate", "--s", "1/2", "--blocks", "6"],
        vec!["measure", "premeasure", "--set", &set, "--gauge", &g, "--min-depth", "2"],
        vec!["measure", "pushforward", "--set", &set, "--schedule", &sch, "--gauge", &g, "--block", "1"],
        vec!["dim", "estimate", "--random", "2000"],
        vec!["dim", "bound", "--schedule", &sch, "--block", "2"],
        vec!["dioph", "cf", "--rational", "49/64"],
        vec!["dioph", "reveal", "--p", "49", "--q", "64", "--s", "3/5", "--k", "20"],
        vec!["dioph", "jarnik", "--gauge", &g, "--s", "3"],
    ];
    for args in runs {
        let v = json(&args);
        assert!(v["metadata"]["seed"].is_u64() && v["metadata"]["version"].is_string());
        let mut bad = Vec::new();
        untagged_numbers(&v["result"], false, "", &mut bad);
        assert!(bad.is_empty(), "{args:?}: untagged {bad:?}");
    }
}

#[test]
fn separation_report_is_one_document() {
    let v: Value = serde_json::from_str(&ok(&["separate", "--s", "1/2", "--blocks", "8", "--json"])).unwrap();
    assert_eq!(v["result"]["verdict"]["series_converges"], true);
    assert_eq!(v["result"]["verdict"]["witnesses_found"], true);
    assert_eq!(v["result"]["properties"]["all_pass"], true);
}

#[test]
fn diophantine_commands() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(ok(&["dioph", "cf", "--rational", "49/64"]).lines().next().unwrap(), "[0, 1, 3, 3, 1, 3]");
    let reveal = ok(&["dioph", "reveal", "--p", "49", "--q", "64", "--s", "3/5", "--k", "20"]);
    assert_eq!(reveal.lines().count(), 2);
    assert_eq!(ok(&["dioph", "liouville", "--n", "8"]).trim(), "11000100");
    let x = write(dir.path(), "x.txt", "49/64");
    assert_eq!(ok(&["dioph", "witness", "--x", &x, "--p", "49", "--q", "64", "--s", "3"]), "witness: true\n");
    let digits = write(dir.path(), "d.txt", "1100010000000000000000001");
    assert_eq!(ok(&["dioph", "witness", "--x", &digits, "--p", "49", "--q", "64", "--s", "10/3"]), "witness: true\n");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_effdim");
    let status = |args: &[&str], env: Option<&str>| {
        let mut cmd = Command::new(bin);
        cmd.args(args).env_remove("EFFDIM_PRECISION");
        if let Some(p) = env {
            cmd.env("EFFDIM_PRECISION", p);
        }
        cmd.output().unwrap()
    };
    let good = status(&["dioph", "cf", "--rational", "3/7"], None);
    assert_eq!(good.status.code(), Some(0));
    assert_eq!(String::from_utf8(good.stdout).unwrap(), "[0, 2, 3]\nexponent >= 3.807355\n");
    assert_eq!(status(&["nonsense"], None).status.code(), Some(2));
    assert_eq!(status(&["dioph", "cf", "--rational", "3/0"], None).status.code(), Some(2));
    assert_eq!(status(&["gauge", "eval", "--file", "/no/such/file", "--depth", "1"], None).status.code(), Some(1));
    assert_eq!(status(&["dioph", "cf", "--rational", "3/7"], Some("53")).status.code(), Some(0));
    assert_eq!(status(&["dioph", "cf", "--rational", "3/7"], Some("128")).status.code(), Some(2));
}
