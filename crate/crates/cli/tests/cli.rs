use std::process::{Command, Output};

use serde::{Deserialize, Serialize};

/// The documented `count --format json` schema.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CountJson {
    k: usize,
    n: usize,
    variant: String,
    method: String,
    value: String,
    terms: String,
    adds: String,
    mults: String,
    elapsed_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    extrapolated: Option<bool>,
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latin-rect"))
        .args(args)
        .env_remove("LATIN_RECT_MAX_TERMS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = run(args);
    assert!(o.status.success(), "{}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn count_examples() {
    let v = json(&["count", "--k", "3", "--n", "3", "--reduced", "--format", "json"]);
    assert_eq!(v["value"], "2");
    assert_eq!(v["method"], "formula");
    assert_eq!(v["terms"], "20");
    let v = json(&["count", "--k", "1", "--n", "6", "--total", "--format", "json"]);
    assert_eq!(v["value"], "720");
    let v = json(&["count", "--k", "2", "--n", "4", "--method", "oracle", "--format", "json"]);
    assert_eq!(v["value"], "9");
    assert_eq!(v["method"], "oracle");
}

#[test]
fn count_human_output() {
    let o = run(&["count", "--k", "3", "--n", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("R_3(3) = 2\nmethod: formula\n"));
}

#[test]
fn json_fields_and_round_trip() {
    let o = run(&["count", "--k", "4", "--n", "7", "--format", "json"]);
    let text = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["variant", "method", "value", "terms", "adds", "mults"] {
        assert!(v[key].is_string(), "{key} should be a string");
    }
    assert!(v["k"].is_u64() && v["n"].is_u64() && v["elapsed_ms"].is_number());
    let extrapolated = ["count", "--k", "4", "--n", "5", "--total", "--method", "direct-L", "--format", "json"];
    for text in [text, stdout(&run(&extrapolated))] {
        let parsed: CountJson = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&parsed).unwrap() + "\n", text);
    }
}

#[test]
fn every_method_agrees() {
    for (method, variant) in [
        ("formula", "--reduced"),
        ("direct-L", "--reduced"),
        ("oracle", "--reduced"),
        ("factorial-bridge", "--total"),
        ("direct-L", "--total"),
        ("oracle", "--total"),
    ] {
        let v = json(&["count", "--k", "3", "--n", "5", variant, "--method", method, "--format", "json"]);
        let want = if variant == "--reduced" { "552" } else { "66240" };
        assert_eq!(v["value"], want, "{method} {variant}");
    }
    let v = json(&[
        "count", "--k", "2", "--n", "6", "--total", "--method", "direct-L", "--bracket", "literal", "--format", "json",
    ]);
    assert_eq!(v["value"], "190800");
}

#[test]
fn direct_l_marks_extrapolation() {
    let v = json(&["count", "--k", "4", "--n", "5", "--total", "--method", "direct-L", "--format", "json"]);
    assert_eq!(v["extrapolated"], true);
    let v = json(&["count", "--k", "3", "--n", "5", "--total", "--method", "direct-L", "--format", "json"]);
    assert!(v.get("extrapolated").is_none());
}

#[test]
fn count_csv() {
    let o = run(&["count", "--k", "2", "--n", "5", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,n,variant,method,value,terms,adds,mults,elapsed_ms"));
    assert!(lines.next().unwrap().starts_with("2,5,reduced,formula,44,6,"));
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        vec!["count", "--k", "2"],
        vec!["count", "--k", "2", "--n", "3", "--bogus"],
        vec!["count", "--k", "2", "--n", "3", "--reduced", "--total"],
        vec!["count", "--k", "2", "--n", "3", "--method", "magic"],
        vec!["count", "--k", "2", "--n", "3", "--format", "latex"],
        vec!["count", "--k", "2", "--n", "3", "--max-terms", "0"],
        vec!["count", "--k", "2", "--n", "3", "--total", "--method", "formula"],
        vec!["expr", "--k", "1"],
        vec!["table", "--k", "2", "--n", "5..3"],
        vec!["oracle", "--k", "2", "--n", "3", "--halls", "2-1"],
        vec!["frobnicate"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
    let o = run(&["expr", "--k", "1"]);
    assert!(stderr(&o).contains("at least 2"));
}

#[test]
fn help_exits_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["count", "--help"]).status.code(), Some(0));
}

#[test]
fn guard_exits_2() {
    let o = run(&["count", "--k", "4", "--n", "10", "--max-terms", "1000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("19448"));
    let o = run(&["count", "--k", "4", "--n", "8", "--method", "oracle"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["expr", "--k", "9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn env_ceiling_and_flag_precedence() {
    let bin = env!("CARGO_BIN_EXE_latin-rect");
    let o = Command::new(bin)
        .args(["count", "--k", "4", "--n", "10"])
        .env("LATIN_RECT_MAX_TERMS", "1000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(bin)
        .args(["count", "--k", "4", "--n", "10", "--max-terms", "20000"])
        .env("LATIN_RECT_MAX_TERMS", "1000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = Command::new(bin)
        .args(["count", "--k", "2", "--n", "3"])
        .env("LATIN_RECT_MAX_TERMS", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn oracle_limits_are_configurable() {
    let o = run(&["oracle", "--k", "2", "--n", "9", "--oracle-max-n", "9"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("R_2(9) = 133496\n"));
}

#[test]
fn expr_outputs() {
    let a = run(&["expr", "--k", "3"]);
    let b = run(&["expr", "--k", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let latex = stdout(&run(&["expr", "--k", "4", "--format", "latex"]));
    assert!(latex.contains("= f_{1} f_{2} f_{3} - f_{1} f_{2,3} - f_{1,3} f_{2} - f_{1,2} f_{3} + 2 f_{1,2,3}"));
    let text = stdout(&run(&["expr", "--k", "2", "--format", "text"]));
    assert!(text.starts_with("R_2(n) = sum over s0+s1=n of (-1)^s1"));
    assert_eq!(run(&["expr", "--k", "3", "--format", "json"]).status.code(), Some(1));
}

#[test]
fn table_columns() {
    let text = stdout(&run(&["table", "--k", "2", "--n", "1..6", "--format", "csv"]));
    let r: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(r, ["0", "1", "2", "9", "44", "265"]);
    let text = stdout(&run(&["table", "--k", "3", "--n", "3..6", "--format", "csv"]));
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], ["3", "2", "12"]);
    assert_eq!(rows[1], ["4", "24", "576"]);
    assert_eq!(rows[3][1], "21280");
    let lines: Vec<serde_json::Value> = stdout(&run(&["table", "--k", "2", "--n", "4", "--format", "json"]))
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["R"], "9");
    assert_eq!(lines[0]["L"], "216");
}

#[test]
fn bench_writes_csv_with_footer() {
    let dir = std::env::temp_dir().join(format!("latin-rect-bench-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.csv");
    let o = run(&["bench", "--k", "3", "--n", "8..32", "--csv", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("k,n,terms,adds,mults_actual,mults_paper_model,elapsed_ms\n"));
    assert_eq!(csv.lines().filter(|l| l.starts_with("3,")).count(), 25);
    let slope: f64 = csv
        .lines()
        .find_map(|l| l.strip_prefix("# fitted_exponent_paper_model="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(slope > 3.0 && slope < 4.4, "{slope}");
    std::fs::remove_dir_all(&dir).unwrap();
    let single = stdout(&run(&["bench", "--k", "2", "--n", "5"]));
    assert!(single.contains("# fitted_exponent_paper_model=absent"));
}

#[test]
fn oracle_halls() {
    let o = run(&["oracle", "--k", "2", "--n", "5", "--halls", "2:1,2:2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], "72");
    assert_eq!(v["formula_g"], "72");
    let o = run(&["oracle", "--k", "3", "--n", "3", "--halls", "4:1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    for suite in ["formula-vs-oracle", "g-vs-lonely-hall", "bracket-variant", "zero-for-k>n"] {
        assert!(text.lines().any(|l| l.starts_with(suite) && l.ends_with(" ok")), "{suite}\n{text}");
    }
    let o = run(&["selftest", "--max-k", "3", "--max-n", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let g = v.as_array().unwrap().iter().find(|r| r["name"] == "g-vs-lonely-hall").unwrap();
    // every hall set for k = 2 (n <= 4) and k = 3 (n <= 4), no random sample
    let exhaustive: u64 = (0..=4).map(|n| 1u64 << n).sum::<u64>() + (0..=4).map(|n| 1u64 << (2 * n)).sum::<u64>();
    assert_eq!(g["checks"], exhaustive);
}

#[test]
fn selftest_catches_injected_fault() {
    let o = run(&["selftest", "--max-k", "3", "--max-n", "4", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.contains("formula-vs-oracle: k=2, n=2:"), "{err}");
}
