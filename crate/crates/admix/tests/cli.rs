use std::path::PathBuf;
use std::process::{Command, Output};

fn admix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_admix"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("admix-cli-{}-{name}", std::process::id()))
}

#[test]
fn count_semiregular_a12() {
    let out = admix(&[
        "count", "--family", "a12", "--semiregular", "--N", "2", "--P", "2", "--a", "2", "--phi0", "2",
        "--phi1", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["count"], "18");
    assert!((v["log2_count"].as_f64().unwrap() - 4.16993).abs() < 5e-6);
    assert_eq!(v["family"], "a12");
}

#[test]
fn count_a1_with_defaults() {
    let v = json(&admix(&["count", "--family", "a1", "--N", "1", "--P", "1", "--a", "1"]));
    assert_eq!(v["count"], "8");
}

#[test]
fn count_output_round_trips_as_constraint_file() {
    let out = admix(&["count", "--family", "a2", "--N", "2", "--P", "2", "--a", "1,3", "--phi0", "1,2", "--phi1", "0,2"]);
    let v = json(&out);
    let path = scratch("roundtrip.json");
    std::fs::write(&path, serde_json::to_string(&v["constraints"]).unwrap()).unwrap();
    let again = json(&admix(&["count", "--family", "a2", "--file", path.to_str().unwrap()]));
    assert_eq!(again, v);
    std::fs::remove_file(path).ok();
}

#[test]
fn worker_count_does_not_change_output() {
    let run = |w: &str| {
        admix(&[
            "count", "--family", "a12", "--semiregular", "--N", "4", "--P", "4", "--a", "4", "--phi0", "4",
            "--phi1", "4", "--workers", w,
        ])
        .stdout
    };
    assert_eq!(run("1"), run("8"));
}

#[test]
fn input_errors_exit_2_without_output() {
    let path = scratch("bad.json");
    std::fs::write(&path, "{\"N\": 1, \"P\": ").unwrap();
    let out = admix(&["count", "--family", "a1", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    std::fs::remove_file(path).ok();

    let out = admix(&["count", "--family", "a1", "--N", "1", "--P", "1", "--a", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("a_1 = 3 > 2P = 2"));
    assert_eq!(admix(&["table2", "--max-exact", "1"]).status.code(), Some(2));
    assert_eq!(admix(&["verify", "--max-dim", "1"]).status.code(), Some(2));
    assert_eq!(admix(&["fig2", "--N", "1", "--P", "5"]).status.code(), Some(2));
}

#[test]
fn budget_refusal_exits_3() {
    let out = admix(&[
        "count", "--family", "a12", "--semiregular", "--N", "6", "--P", "6", "--a", "6", "--phi0", "6",
        "--phi1", "6", "--budget-seconds", "0",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn criterion_command() {
    let v = json(&admix(&["criterion", "--N", "1", "--P", "1", "--a", "1", "--phi0", "1", "--phi1", "1"]));
    assert_eq!(v["exactDecision"], true);
    assert_eq!(v["agree"], v["exactDecision"] == v["approxDecision"]);
    // abar = 1/2, f0 = f1 = 1/4 puts the score exactly at 0.
    let v = json(&admix(&["criterion", "--semiregular", "--N", "2", "--P", "2", "--a", "2", "--phi0", "1", "--phi1", "1"]));
    assert_eq!(v["score"], 0.0);
    assert_eq!(v["approxDecision"], false);
}

#[test]
fn table2_csv() {
    let out = admix(&["table2", "--max-exact", "3", "--large", "10000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,alpha12_exact,spa,diff_vs_indep");
    assert!(lines[1].starts_with("2,4.16992"));
    let last: Vec<&str> = lines[3].split(',').collect();
    assert_eq!(last[0], "10000");
    assert_eq!(last[1], "");
    assert!((last[3].parse::<f64>().unwrap() + 0.36060).abs() < 5e-6);
}

#[test]
fn fig2_csv_has_3600_bins() {
    let path = scratch("fig2.csv");
    let out = admix(&["fig2", "--N", "100", "--P", "100", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("agreement fraction"));
    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(
        reader.headers().unwrap(),
        vec!["abar_bin_lo", "f_bin_lo", "fraction_a1_larger", "approx_pred", "exact_frac", "disagree_frac"]
    );
    assert_eq!(reader.records().count(), 3600);
    std::fs::remove_file(path).ok();
}

#[test]
fn verify_is_reproducible_and_reports_failures() {
    let args = ["verify", "--max-dim", "3", "--samples", "20000", "--seed", "11"];
    let a = admix(&args);
    let b = admix(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    // The ratio lemma as stated is off by a factor of two, so the run fails.
    assert_eq!(v["passed"], false);
    assert_eq!(a.status.code(), Some(1));
    let checks = v["checks"].as_array().unwrap();
    assert!(checks
        .iter()
        .filter(|c| c["lemma"] != "ratio approximation")
        .all(|c| c["passed"] == true));
}
