use std::path::PathBuf;
use std::process::{Command, Output};

fn fibkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibkit"))
        .args(args)
        .env_remove("FIBKIT_CATALOG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn mutants() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/mutants.cat")
        .to_string_lossy()
        .into_owned()
}

#[test]
fn eval_prints_exact_values() {
    assert_eq!(stdout(&fibkit(&["eval", "F", "10"])), "55\n");
    assert_eq!(stdout(&fibkit(&["eval", "L", "-4"])), "7\n");
    assert_eq!(stdout(&fibkit(&["eval", "G", "5", "--seed", "3,7"])), "44\n");
    let o = fibkit(&["eval", "F", "300"]);
    assert_eq!(stdout(&o), "222232244629420445529739893461909967206666939096499764990979600\n");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["eval", "G", "5"][..],
        &["eval", "F", "3", "--seed", "1,2"],
        &["verify", "--id", "NoSuchEntry"],
        &["verify", "--id", "Eq1", "--n", "5..1"],
        &["prove", "--id", "Eq1", "--n", "-2"],
        &["bench", "-5"],
        &["frobnicate"],
    ] {
        assert_eq!(fibkit(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn flagship_json_report() {
    let o = fibkit(&[
        "verify", "--id", "Eq1", "--n", "0..4", "--m", "-6..6", "--p", "-6..6", "--q", "-6..6", "--seeds", "0,1",
        "2,1", "3,7", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["identity"], "Eq1");
    assert_eq!(v["paper_tag"], "Eq(1)");
    assert_eq!(v["mode"], "grid");
    assert_eq!(v["total"], 5 * 13 * 13 * 13 * 3);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    assert_eq!(v["grid"]["seeds"][2], serde_json::json!(["3", "7"]));
}

#[test]
fn json_is_reproducible_across_worker_counts() {
    let run = |w: &str| {
        stdout(&fibkit(&[
            "verify", "--file", &mutants(), "--id", "Mut06.Lemma11-sign", "Mut01.Eq1-negated", "--m", "-3..3",
            "--p", "-2..2", "--q", "-2..2", "--n", "0..2", "--format", "json", "--no-timing", "--workers", w,
        ]))
    };
    let one = run("1");
    assert!(one.contains("\"failures\""));
    assert_eq!(one, run("3"));
    assert_eq!(one, run("1"));
}

#[test]
fn mutant_file_fails_with_counterexamples() {
    let o = fibkit(&["verify", "--file", &mutants(), "--m", "-3..3", "--p", "-3..3", "--q", "-3..3", "--n", "0..3"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert_eq!(text.matches("FAIL Mut").count(), 10);
    assert!(text.contains("lhs="));
    let o = fibkit(&["prove", "--file", &mutants(), "--id", "Mut05.Case14-coefficient"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("diff="));
}

#[test]
fn catalog_env_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_fibkit"))
        .args(["verify", "--id", "Mut07.Eq8-shifted", "--m", "-2..2", "--n", "-2..2"])
        .env("FIBKIT_CATALOG", mutants())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_fibkit"))
        .args(["catalog"])
        .env("FIBKIT_CATALOG", mutants())
        .output()
        .unwrap();
    assert_eq!(stdout(&o).lines().count(), 10);
}

#[test]
fn csv_output_columns() {
    let o = fibkit(&["verify", "--file", &mutants(), "--id", "Mut07.Eq8-shifted", "--m", "0..1", "--n", "0..1", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("identity,point,seed,lhs,rhs,status"));
    // F2*F1 + F1*F2 = 2 against F2 = 1; the other three points hold
    assert_eq!(lines.next(), Some("Mut07.Eq8-shifted,m=1 n=1,,2,1,FAIL"));
    assert_eq!(lines.next(), None);
    let o = fibkit(&["verify", "--id", "Lemma12", "--m", "0..1", "--n", "0..1", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("Lemma12,,,,,PASS"));
}

#[test]
fn prove_reports_case_counts() {
    let o = fibkit(&["prove", "--id", "Eq1", "--n", "1", "2", "3", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("8 checked, 0 failed").count(), 4);
    assert_eq!(fibkit(&["prove", "--id", "Lemma11"]).status.code(), Some(0));
    assert_eq!(fibkit(&["prove", "--id", "Eq2", "--n", "1"]).status.code(), Some(0));
}

#[test]
fn oracle_flag_cross_checks() {
    let o = fibkit(&["verify", "--id", "Eq2", "Case19", "--oracle", "--m", "-4..4", "--p", "-4..4", "--q", "-4..4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("oracle cross-check"));
}

#[test]
fn bench_reports_digit_counts() {
    let o = fibkit(&["bench", "0", "1000", "20000"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.split_whitespace().take(2).eq(["1000", "209"])));
    assert!(text.lines().any(|l| l.split_whitespace().take(2).eq(["0", "1"])));
}

#[test]
fn user_catalog_file() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cat");
    std::fs::write(&bad, "name: Wrong\nparams: n\npaper: none\nidentity: F(n+1) == F(n) + 1\n").unwrap();
    let o = fibkit(&["verify", "--file", bad.to_str().unwrap(), "--n", "0..5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL Wrong [none]"));

    let broken = dir.path().join("broken.cat");
    std::fs::write(&broken, "name: Broken\nparams: n\npaper: none\nidentity: F(n+) == 1\n").unwrap();
    let o = fibkit(&["verify", "--file", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("4:15: syntax error"));
}
