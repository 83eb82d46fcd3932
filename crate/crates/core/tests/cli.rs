use std::path::PathBuf;
use std::process::{Command, Output};

fn blowdown(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blowdown")).args(args).output().expect("binary runs")
}

fn scenario(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "scenarios", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn shipped_scenarios_reproduce_builtin_reports() {
    for (file, which) in [("c7_main.scn", "main1"), ("c5_main.scn", "main2")] {
        let a = blowdown(&["verify", &scenario(file), "--json"]);
        let b = blowdown(&["report", which, "--json"]);
        assert!(a.status.success() && b.status.success());
        assert_eq!(a.stdout, b.stdout, "{file} vs {which}");
        let t1 = blowdown(&["verify", &scenario(file)]);
        let t2 = blowdown(&["report", which]);
        assert_eq!(t1.stdout, t2.stdout);
    }
}

#[test]
fn config_line_reproduces_main1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c7.scn");
    std::fs::write(&path, "config = C7-main\n").unwrap();
    let a = blowdown(&["verify", path.to_str().unwrap(), "--json"]);
    let b = blowdown(&["report", "main1", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_is_deterministic_and_exact() {
    for which in ["main1", "main2", "main3"] {
        let a = blowdown(&["report", which, "--json"]);
        let b = blowdown(&["report", which, "--json"]);
        assert_eq!(a.stdout, b.stdout);
        let text = stdout(&a);
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(doc["kind"].is_string());
        assert!(!has_decimal_number(&doc));
    }
}

/// True if any JSON number in the document is not an integer.
fn has_decimal_number(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Number(n) => !(n.is_i64() || n.is_u64()),
        serde_json::Value::Array(a) => a.iter().any(has_decimal_number),
        serde_json::Value::Object(o) => o.values().any(has_decimal_number),
        _ => false,
    }
}

#[test]
fn main1_json_fields() {
    let o = blowdown(&["report", "main1", "--json"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["kind"], "blowdown");
    assert_eq!(doc["restriction"]["canonical"]["gamma"], "7γ6");
    assert_eq!(doc["positivity"]["verdict"], "Positive");
    assert_eq!(doc["positivity"]["certificate"]["verified"], true);
    assert_eq!(doc["pairing"]["blown_down"]["coefficients"]["a"], "54/7");
    assert_eq!(doc["invariants"]["rows"][1]["c1sq"], 2);
    assert_eq!(doc["invariants"]["homeo_type"], "CP² # 7CP̄²");
    let conclusions = doc["conclusions"].as_array().unwrap();
    assert!(conclusions.iter().any(|c| c["status"] == "ASSUMED"));
    assert!(conclusions.iter().any(|c| c["status"] == "COMPUTED"));
    assert!(conclusions.iter().all(|c| c["status"] == "ASSUMED" || c["status"] == "COMPUTED"));
}

#[test]
fn main3_reports_the_contradiction() {
    let o = blowdown(&["report", "main3", "--json"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["kind"], "einstein");
    assert_eq!(doc["kotschick"]["bound"], "1/2");
    assert_eq!(doc["kotschick"]["contradiction"], true);
    assert_eq!(doc["d"], 0);
    let text = stdout(&blowdown(&["report", "main3"]));
    assert!(text.contains("1 ≤ 1/2: false, contradiction"));
}

#[test]
fn embedding_failures_exit_1() {
    let o = blowdown(&["verify", &scenario("c7_s6_last.scn")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("(6, 6): expected -9, found -2"));
    let o = blowdown(&["verify", &scenario("p2_toy.scn"), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("(1, 1): expected -4, found -2"));
}

#[test]
fn not_positive_is_a_computed_verdict() {
    let o = blowdown(&["verify", &scenario("c2_not_positive.scn"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["positivity"]["verdict"], "NotPositive");
    assert!(doc["positivity"]["witness"].is_array());
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.scn");
    std::fs::write(&bad, "n = 13\np = 7\nclass u1 = [1, 2]\n").unwrap();
    let o = blowdown(&["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"));

    let o = blowdown(&["verify", dir.path().join("missing.scn").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(blowdown(&["plumbing", "--p", "1"]).status.code(), Some(2));
    assert_eq!(blowdown(&["report", "main9"]).status.code(), Some(2));
    assert_eq!(blowdown(&[]).status.code(), Some(2));
}

#[test]
fn expect_reference_values() {
    let o = blowdown(&["verify", &scenario("c7_main.scn"), "--expect-paper"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Reference checks:"));
    assert!(!stdout(&o).contains("FAIL"));

    let o = blowdown(&["verify", &scenario("c5_main.scn"), "--expect-paper", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["reference_ok"], true);

    let o = blowdown(&["verify", &scenario("c2_not_positive.scn"), "--expect-paper"]);
    assert_eq!(o.status.code(), Some(2));

    // C_5 data under the C_7 name disagrees with the C_7 reference values.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("renamed.scn");
    let text = std::fs::read_to_string(scenario("c5_main.scn")).unwrap().replace("name = C5-main", "name = C7-main");
    std::fs::write(&path, text).unwrap();
    let o = blowdown(&["verify", path.to_str().unwrap(), "--expect-paper"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn plumbing_text_and_json() {
    let o = blowdown(&["plumbing", "--p", "5"]);
    assert!(o.status.success());
    let t = stdout(&o);
    assert!(t.contains("boundary: L(25, -4)"));
    assert!(t.contains("|det P| = 25"));
    let o = blowdown(&["plumbing", "--p", "2", "--json"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["dual_form"][0][0], "-1/4");
    assert_eq!(doc["boundary"], "L(4, -1)");
}
