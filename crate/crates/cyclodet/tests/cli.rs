use std::path::Path;
use std::process::{Command, Output};

use cyclodet::report;

fn cyclodet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclodet"))
        .args(args)
        .env_remove("CYCLODET_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn first_line(o: &Output) -> String {
    stdout(o).lines().next().unwrap_or_default().to_string()
}

#[test]
fn det_examples() {
    let o = cyclodet(&["det", "--family", "S", "--p", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(first_line(&o), "-4");

    let o = cyclodet(&["det", "--family", "SD", "--p", "5", "--delta", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(first_line(&o), "0");

    let o = cyclodet(&["det", "--family", "C", "--p", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(first_line(&o), "1");
}

#[test]
fn det_t_and_both_backends() {
    let o = cyclodet(&["det", "--family", "T", "--p", "5", "--delta", "2", "--backend", "both"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(first_line(&o), "-4");
}

#[test]
fn det_cyclotomic_prints_decomposition() {
    let o = cyclodet(&["det", "--family", "D", "--p", "7", "--backend", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("coefficients: [7, 7, 7, 0, 7, 0]"), "{text}");
    assert!(text.contains("quadratic: 7/2 + 7/2*g"), "{text}");

    let o = cyclodet(&["det", "--family", "D", "--p", "5"]);
    let text = stdout(&o);
    assert!(text.contains("quartic: (0 - 1/2*g) * delta, delta^2 = -10 + 2*g"), "{text}");
}

#[test]
fn det_invalid_combinations() {
    for args in [
        &["det", "--family", "E", "--p", "5"][..],
        &["det", "--family", "F", "--p", "7", "--delta", "3"],
        &["det", "--family", "T", "--p", "7", "--delta", "2"],
        &["det", "--family", "S", "--p", "7", "--delta", "3"],
        &["det", "--family", "S", "--p", "9"],
        &["det", "--family", "Q", "--p", "7"],
        &["det", "--p", "7"],
    ] {
        assert_eq!(cyclodet(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn classno_examples() {
    let o = cyclodet(&["classno", "--p", "23"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "h(-23) = 3\n");

    let o = cyclodet(&["classno", "--p", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "h(5) = 1\neps = (1 + sqrt(5))/2, norm -1\n");

    for p in ["9", "3", "2", "1"] {
        assert_eq!(cyclodet(&["classno", "--p", p]).status.code(), Some(1), "p = {p}");
    }
}

#[test]
fn verify_usage() {
    let o = cyclodet(&["verify", "--pmin", "4", "--pmax", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report::from_json(&stdout(&o)).unwrap(), vec![]);

    assert_eq!(cyclodet(&["verify", "--pmin", "10", "--pmax", "5"]).status.code(), Some(1));
    assert_eq!(cyclodet(&["verify", "--pmin", "3", "--pmax", "5"]).status.code(), Some(1));
    assert_eq!(cyclodet(&["verify", "--pmin", "5"]).status.code(), Some(1));
    assert_eq!(cyclodet(&["verify", "--pmin", "5", "--pmax", "7", "--delta", "sweep:x"]).status.code(), Some(1));
    assert_eq!(cyclodet(&["verify", "--pmin", "5", "--pmax", "7", "--threads", "0"]).status.code(), Some(1));
    assert_eq!(cyclodet(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_writes_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reports.json");
    let o = cyclodet(&[
        "verify", "--pmin", "5", "--pmax", "40", "--format", "json", "--out", out.to_str().unwrap(), "--threads", "4",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let reports = report::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let ps: Vec<u32> = reports.iter().map(|r| r.p).collect();
    assert_eq!(ps, [5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
    assert!(reports.iter().all(|r| r.all_passed()));
    assert_eq!(reports[1].dets.s.as_deref(), Some("-4"));
}

#[test]
fn verify_failing_check_exits_two() {
    // 4 is a square, so the non-residue check fails for every prime.
    let o = cyclodet(&["verify", "--pmin", "5", "--pmax", "7", "--delta", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let reports = report::from_json(&stdout(&o)).unwrap();
    assert!(reports.iter().all(|r| !r.checks["delta_nonresidue"].pass));
}

#[test]
fn verify_csv_grid() {
    let o = cyclodet(&["verify", "--pmin", "5", "--pmax", "13", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let header = rdr.headers().unwrap().clone();
    assert_eq!(&header[0], "p");
    assert_eq!(&header[1], "all_pass");
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    for row in &rows {
        assert_eq!(row.len(), header.len());
        assert_eq!(&row[1], "true");
        assert!(row.iter().skip(2).all(|c| matches!(c, "" | "pass" | "skipped")));
    }
    let col = header.iter().position(|h| h == "det_e").unwrap();
    let cells: Vec<&str> = rows.iter().map(|r| &r[col]).collect();
    // det_e applies only to p ≡ 3 (mod 4): 7 and 11.
    assert_eq!(cells, ["", "pass", "pass", ""]);
}

fn run_cached(dir: &Path, pmax: &str, delta: &str, extra: &[&str]) -> Output {
    let mut args = vec!["verify", "--pmin", "5", "--pmax", pmax, "--delta", delta];
    args.extend_from_slice(extra);
    Command::new(env!("CARGO_BIN_EXE_cyclodet")).args(&args).env("CYCLODET_CACHE_DIR", dir).output().unwrap()
}

#[test]
fn cache_hit_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cold = run_cached(dir.path(), "23", "sweep:2", &[]);
    assert_eq!(cold.status.code(), Some(0));
    let files = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(files, 7);
    let warm = run_cached(dir.path(), "23", "sweep:2", &["--threads", "1"]);
    assert_eq!(warm.status.code(), Some(0));
    assert_eq!(cold.stdout, warm.stdout);
    // A hit appends nothing.
    let lines = std::fs::read_to_string(dir.path().join("p000007.jsonl")).unwrap().lines().count();
    assert_eq!(lines, 1);
    // A different Δ mode is a different key.
    let other = run_cached(dir.path(), "23", "least", &[]);
    assert_eq!(other.status.code(), Some(0));
    let lines = std::fs::read_to_string(dir.path().join("p000007.jsonl")).unwrap().lines().count();
    assert_eq!(lines, 2);
}

#[test]
fn cache_flag_overrides_env() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let o = run_cached(env_dir.path(), "7", "least", &["--cache-dir", flag_dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_dir(env_dir.path()).unwrap().count(), 0);
    assert_eq!(std::fs::read_dir(flag_dir.path()).unwrap().count(), 2);
}
