use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn games() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("games")
}

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_enactment"));
    cmd.args(args).env_remove("ENACTMENT_LP_CAP").env_remove("ENACTMENT_ORACLE_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn fig2() -> String {
    games().join("fig2.json").display().to_string()
}

fn priced() -> String {
    games().join("fig2-priced.json").display().to_string()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error_code(out: &Output) -> String {
    let v: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    v["errors"][0]["code"].as_str().expect("code").to_owned()
}

fn write_temp(text: &str) -> tempfile::NamedTempFile {
    let file = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(file.path(), text).unwrap();
    file
}

#[test]
fn validate_summarizes_fig2() {
    let out = run(&["validate", &fig2()], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "5 services, 4 players, Cost_SP = 6");
}

#[test]
fn invalid_documents_exit_2() {
    let cyclic = write_temp(
        r#"{"budget": "9", "services": [
            {"id": "a", "cost": "1", "owner": "x"},
            {"id": "b", "cost": "1", "owner": "y"}],
            "edges": [["a", "b"], ["b", "a"]]}"#,
    );
    let out = run(&["validate", cyclic.path().to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());

    let no_owner = write_temp(r#"{"budget": "9", "services": [{"id": "a", "cost": "1"}]}"#);
    let out = run(&["analyze", no_owner.path().to_str().unwrap(), "--core"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "MalformedDocument");

    let out = run(&["validate", "/nonexistent/game.json"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_requires_a_section() {
    let out = run(&["analyze", &fig2()], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "InvalidParameters");
}

#[test]
fn imputation_core_and_threshold_on_fig2() {
    let v = json(&run(&["analyze", &fig2(), "--imputation", "--core", "--threshold"], &[]));
    let obj = v.as_object().unwrap();
    assert_eq!(obj.keys().collect::<Vec<_>>(), ["core", "imputation", "threshold"]);
    let x = &v["imputation"]["x"];
    for (player, amount) in [("Lambda", "8"), ("delta", "2"), ("gamma", "16"), ("beta", "2")] {
        assert_eq!(x[player]["exact"], amount, "{player}");
    }
    assert_eq!(v["imputation"]["sum"]["exact"], "28");
    assert_eq!(v["core"]["empty"], true);
    assert!(v["core"]["witness"].is_null());
    assert_eq!(v["threshold"]["threshold"]["exact"], "26");
    assert_eq!(v["threshold"]["critical_set"], serde_json::json!(["Lambda", "gamma"]));
}

#[test]
fn oracle_accepts_the_split_and_rejects_a_shift() {
    let v = json(&run(&["analyze", &fig2(), "--oracle"], &[]));
    assert_eq!(v["oracle"]["stable"], true);

    let shifted = ["Lambda=9", "delta=1", "gamma=16", "beta=2"];
    let mut args = vec!["analyze".to_owned(), fig2(), "--oracle".to_owned()];
    for p in shifted {
        args.push("--payoff".into());
        args.push(p.into());
    }
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let v = json(&run(&args, &[]));
    assert_eq!(v["oracle"]["imputation"], true);
    assert_eq!(v["oracle"]["stable"], false);
    assert!(v["oracle"]["justified_objection"].is_object());
}

#[test]
fn detect_and_vcg_on_priced_fig2() {
    let v = json(&run(&["analyze", &priced(), "--detect", "--vcg"], &[]));
    assert_eq!(v["detect"]["alliance"], true);
    assert_eq!(v["vcg"]["total_payment"]["exact"], "26");
    assert_eq!(v["vcg"]["equivalence"]["equal"], true);

    let out = run(&["analyze", &fig2(), "--detect"], &[]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_code(&out), "MissingAnnouncedPrices");
}

#[test]
fn caps_come_from_the_environment() {
    let out = run(&["analyze", &fig2(), "--core"], &[("ENACTMENT_LP_CAP", "3")]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(error_code(&out), "TooManyPlayers");

    let out = run(&["analyze", &fig2(), "--oracle"], &[("ENACTMENT_ORACLE_CAP", "3")]);
    assert_eq!(out.status.code(), Some(4));

    let out = run(&["analyze", &fig2(), "--core"], &[("ENACTMENT_LP_CAP", "many")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generate_is_deterministic_and_valid() {
    let args = ["generate", "--seed", "7", "--services", "9", "--layers", "3"];
    let a = run(&args, &[]);
    let b = run(&args, &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let out = run(&[&args[..], &["--output", path.to_str().unwrap()]].concat(), &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    let out = run(&["validate", path.to_str().unwrap()], &[]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("9 services, 5 players"));

    let out = run(&["generate", "--services", "0"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args =
        ["analyze", &priced(), "--values", "--core", "--imputation", "--threshold", "--vcg", "--detect", "--oracle"];
    let a = run(&args, &[]);
    let b = run(&args, &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
