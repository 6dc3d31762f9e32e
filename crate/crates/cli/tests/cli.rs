use std::process::{Command, Output};

fn polybern(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polybern"))
        .args(args)
        .env_remove("POLYBERN_MAX_N")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exact_row() {
    let o = polybern(&["exact", "--seq", "B", "--n", "2", "--k", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n,k,value\n2,2,14\n");
}

#[test]
fn exact_counts_past_f64_range_stay_exact() {
    let o = polybern(&[
        "exact", "--seq", "B", "--n", "30", "--k", "30", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let s = v[0]["value"].as_str().expect("count is a string");
    assert!(s.len() > 60 && s.bytes().all(|b| b.is_ascii_digit()));
}

#[test]
fn asym_smoke() {
    let o = polybern(&[
        "asym", "--target", "B", "--n", "7", "--k", "7", "--order", "1",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("n,k,log_exact,log_estimate,relative_error,in_band")
    );
    let rel: f64 = lines
        .next()
        .unwrap()
        .split(',')
        .nth(4)
        .unwrap()
        .parse()
        .unwrap();
    assert!(rel.is_finite() && rel.abs() < 0.5);
}

#[test]
fn json_round_trips_byte_for_byte() {
    for args in [
        &[
            "asym", "--target", "ML", "--n", "2..4", "--k", "3..5", "--format", "json",
        ][..],
        &["lclt", "--which", "D", "--n", "10", "--format", "json"][..],
        &[
            "oracle", "--which", "gamma", "--n", "0..3", "--k", "2", "--format", "json",
        ][..],
    ] {
        let o = polybern(args);
        assert!(o.status.success(), "{args:?}");
        let text = stdout(&o);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(
            serde_json::to_string_pretty(&v).unwrap() + "\n",
            text,
            "{args:?}"
        );
    }
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.csv");
    let o = polybern(&[
        "exact",
        "--seq",
        "D",
        "--n",
        "3",
        "--k",
        "3",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(path).unwrap(),
        "n,k,value\n3,3,73\n"
    );
}

#[test]
fn exit_codes() {
    assert_eq!(
        polybern(&["exact", "--seq", "B", "--n", "3..1", "--k", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        polybern(&["quad", "--which", "laplace", "--nodes", "12"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        polybern(&["asym", "--target", "D", "--n", "3", "--k", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        polybern(&["oracle", "--which", "lonesum", "--n", "5", "--k", "5"])
            .status
            .code(),
        Some(3)
    );
    let o = Command::new(env!("CARGO_BIN_EXE_polybern"))
        .args(["exact", "--seq", "B", "--n", "20", "--k", "1"])
        .env("POLYBERN_MAX_N", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
}

#[test]
fn verify_is_deterministic_and_exit_matches_report() {
    let a = polybern(&["verify"]);
    let b = polybern(&["verify"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
    let text = stdout(&a);
    let verdicts: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("criterion "))
        .collect();
    assert_eq!(verdicts.len(), 8);
    let all_pass = verdicts.iter().all(|l| l.contains(" PASS "));
    assert_eq!(a.status.code(), Some(if all_pass { 0 } else { 1 }));
    assert!(
        verdicts[7].contains(" PASS "),
        "determinism: {}",
        verdicts[7]
    );
}
