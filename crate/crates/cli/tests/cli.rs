use std::process::{Command, Output};

use serde_json::Value;

fn rsdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rsdist"))
        .args(args)
        .env_remove("RSDIST_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(stdout(o).trim()).expect("one JSON document")
}

#[test]
fn count_example() {
    let o = rsdist(&["count", "--q", "3", "--ell", "1", "--k", "1", "--class", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["counts"], serde_json::json!([1, 1, 1]));
    let brute = rsdist(&["count", "--q", "3", "--ell", "1", "--k", "1", "--brute"]);
    assert_eq!(json(&brute)["counts"], serde_json::json!([1, 1, 1]));
}

#[test]
fn count_on_a_subset_matches_enumeration() {
    let args = ["count", "--q", "7", "--ell", "2", "--d", "4", "--class", "10", "--set", "1,2,4"];
    let formula = json(&rsdist(&args));
    let mut brute_args = args.to_vec();
    brute_args.push("--brute");
    let brute = json(&rsdist(&brute_args));
    assert_eq!(formula["counts"], brute["counts"]);
}

#[test]
fn aj_methods_agree() {
    let outs: Vec<String> = ["perm", "series", "binsum"]
        .iter()
        .map(|m| {
            let o = rsdist(&["aj", "--p", "2", "--j", "2", "--u", "4", "--w", "1/2", "--method", m]);
            assert_eq!(o.status.code(), Some(0));
            stdout(&o)
        })
        .collect();
    assert_eq!(outs[0].trim(), "\"4\"");
    assert!(outs.iter().all(|o| o == &outs[0]));
    let series = json(&rsdist(&["aj", "--q", "7", "--ell", "2", "--j", "12", "--method", "series"]));
    let binsum = json(&rsdist(&["aj", "--q", "7", "--ell", "2", "--j", "12"]));
    let parse = |v: &Value| -> (f64, f64) {
        let s = v.as_str().unwrap().trim_matches(['[', ']']);
        let (lo, hi) = s.split_once(", ").unwrap();
        (lo.parse().unwrap(), hi.parse().unwrap())
    };
    let (a, b) = (parse(&series), parse(&binsum));
    assert!(a.0 <= b.1 && b.0 <= a.1);
}

#[test]
fn region_verdicts_set_exit_codes() {
    let o = rsdist(&["region", "ordinary", "--p", "2", "--q", "32", "--k", "15", "--ell", "1", "--branch", "b"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["condition"], "thm7b");
    assert_eq!(v["verdict"], "holds");
    assert_eq!(v["precision_bits"], 128);
    assert_eq!(v["margin"].as_array().unwrap().len(), 2);
    let fail = rsdist(&["region", "thm7", "--q", "32", "--k", "28", "--ell", "1", "--branch", "b"]);
    assert_eq!(fail.status.code(), Some(1));
    assert_eq!(json(&fail)["verdict"], "fails");
}

#[test]
fn usage_and_budget_errors_exit_3() {
    assert_eq!(rsdist(&["count", "--q", "3", "--bogus"]).status.code(), Some(3));
    assert_eq!(rsdist(&["count", "--q", "6", "--ell", "1", "--k", "1"]).status.code(), Some(3));
    assert_eq!(rsdist(&["aj", "--p", "2", "--j", "2", "--u", "4", "--w", "1/2", "--prec", "100"]).status.code(), Some(3));
    let o = rsdist(&["nfr", "--q", "5", "--k", "3", "--f", "0,0,0,0,1", "--budget", "5"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("estimated 625"), "{err}");
    let env = Command::new(env!("CARGO_BIN_EXE_rsdist"))
        .args(["nfr", "--q", "5", "--k", "3", "--f", "0,0,0,0,1"])
        .env("RSDIST_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));
    assert_eq!(rsdist(&["--help"]).status.code(), Some(0));
}

#[test]
fn scan_streams_json_lines() {
    let o = rsdist(&["scan-deepholes", "--q", "7", "--k", "2", "--ell", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let summary = &lines.last().unwrap()["summary"];
    assert_eq!(summary["words_scanned"], 1 + 7 + 49);
    assert_eq!(lines.len(), 1 + 7 + 49 + 1);
    assert_eq!(lines[0]["deg"], 2);
    assert_eq!(lines[0]["deep_hole"], true);
}

#[test]
fn figure_csv_and_brackets() {
    let o = rsdist(&["figure", "--p", "2", "--step", "1/10"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,c,f_lo,f_hi,sign"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9);
    assert!(rows[4].starts_with("2,0.5,") && rows[4].ends_with(",+"));
    assert!(rows[8].ends_with(",-"));
    let b = json(&rsdist(&["figure", "--p", "2", "--step", "1/10", "--brackets"]));
    assert_eq!(b[0]["lo"], "7/10");
    assert_eq!(b[0]["hi"], "4/5");
}

#[test]
fn one_shot_queries() {
    let info = json(&rsdist(&["field-info", "--q", "9"]));
    assert_eq!(info["p"], 3);
    assert_eq!(info["modulus"], serde_json::json!([1, 0, 1]));
    let wj = json(&rsdist(&["wj", "--q", "3", "--ell", "1", "--d", "2", "--j", "1"]));
    assert_eq!(wj["w"], "3");
    let d = json(&rsdist(&["distance", "--q", "3", "--k", "1", "--word", "0,1,2"]));
    assert_eq!(d["is_deep_hole"], true);
    let m = json(&rsdist(&["moments", "--q", "3", "--k", "1", "--f", "0,0,1", "--m", "2", "--brute"]));
    assert_eq!(m["moments"][0]["value"], "2/3");
    assert_eq!(m["moments"][0]["agrees"], true);
    let n = json(&rsdist(&["nfr", "--q", "3", "--k", "1", "--f", "0,0,1"]));
    assert_eq!(n["distribution"], serde_json::json!([1, 1, 1]));
    let lemma = json(&rsdist(&["bound", "lemma", "--q", "256", "--ell", "5", "--j", "64"]));
    assert_eq!(lemma["large"]["within_window"], true);
    assert!(lemma.get("saddle_p2").is_some());
    let ndr = json(&rsdist(&["bound", "ndr", "--q", "5", "--k", "1", "--ell", "2", "--r", "1"]));
    assert_eq!(ndr["limit"], "full");
    let liwan = json(&rsdist(&["compare-liwan", "--q", "7", "--ell", "2", "--j", "3"]));
    assert!(liwan["prime_field_identity"].is_string());
    let t = rsdist(&["region", "thresholds", "--c", "1/2"]);
    assert_eq!(t.status.code(), Some(0));
    assert_eq!(json(&t)["constants"]["p0"], "3");
}

#[test]
fn desk_verification_is_deterministic() {
    let a = rsdist(&["verify-all", "--desk"]);
    let b = rsdist(&["verify-all", "--desk"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 8);
    assert!(matches!(a.status.code(), Some(0..=2)));
}
