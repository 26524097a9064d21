use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unipotent")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = run(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn dims_n2_q2() {
    let o = run(&["dims", "--n", "2", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "lambda\tdim_M\tdim_S\tdim_D\n2\t3\t2\t2\n1,1\t1\t1\t1\n");
}

#[test]
fn dims_lambda_filter() {
    let o = run(&["dims", "--n", "3", "--lambda", "2,1"]);
    assert_eq!(stdout(&o), "lambda\tdim_M\tdim_S\tdim_D\n2,1\t7\t6\t6\n");
}

#[test]
fn dims_modular_radical() {
    let o = run(&["dims", "--n", "2", "--coeff", "mod:3"]);
    assert_eq!(stdout(&o), "lambda\tdim_M\tdim_S\tdim_D\n2\t3\t2\t1\n1,1\t1\t1\t1\n");
}

#[test]
fn dims_tsv_and_json_agree() {
    let tsv = stdout(&run(&["dims", "--n", "3", "--q", "2"]));
    let v = json(&["dims", "--n", "3", "--q", "2"]);
    assert_eq!(v["n"], 3);
    assert_eq!(v["q"], 2);
    assert_eq!(v["coeff"], "cyclotomic");
    let rows = v["rows"].as_array().unwrap();
    let lines: Vec<&str> = tsv.lines().skip(1).collect();
    assert_eq!(rows.len(), lines.len());
    for (row, line) in rows.iter().zip(lines) {
        let expected = format!("{}\t{}\t{}\t{}", row["lambda"].as_str().unwrap(), row["dim_M"], row["dim_S"], row["dim_D"]);
        assert_eq!(line, expected);
    }
}

#[test]
fn output_is_deterministic() {
    for args in [&["dims", "--n", "3"][..], &["verify", "lemmas", "--n", "2", "--q", "3", "--seed", "7"], &["tables", "multiplicities", "--n", "3"]] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn kostka_tables_n2() {
    let o = run(&["tables", "kostka", "--n", "2"]);
    assert_eq!(stdout(&o), "# kostka\nmu\\lambda\t2\t1,1\n2\t1\t1\n1,1\t0\t1\n");
    assert_eq!(json(&["tables", "kostka", "--n", "2"])["kostka"], serde_json::json!([[1, 1], [0, 1]]));
    let o = run(&["tables", "kostka-poly", "--n", "2"]);
    assert_eq!(stdout(&o), "# kostka_poly\nmu\\lambda\t2\t1,1\n2\t1\tt\n1,1\t0\t1\n");
    assert_eq!(json(&["tables", "kostka-poly", "--n", "2"])["kostka_poly"], serde_json::json!([[[1], [0, 1]], [[], [1]]]));
}

#[test]
fn multiplicities_match_kostka_at_q() {
    for q in ["2", "3"] {
        let v = json(&["tables", "multiplicities", "--n", "3", "--q", q]);
        assert_eq!(v["gamma"], v["kostka_poly_at_q"], "q={q}");
    }
}

#[test]
fn verify_all_passes_and_reports() {
    let o = run(&["verify", "all", "--n", "2", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().skip(1).all(|l| l.starts_with("PASS\t")));
    let v = json(&["verify", "all", "--n", "2", "--q", "2"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), text.lines().count() - 1);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["verify", "bogus", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["dims"]).status.code(), Some(2));
    assert_eq!(run(&["dims", "--n", "2", "--q", "6"]).status.code(), Some(2));
    assert_eq!(run(&["dims", "--n", "2", "--coeff", "mod:4"]).status.code(), Some(2));
    assert_eq!(run(&["dims", "--n", "2", "--lambda", "3"]).status.code(), Some(2));
}

#[test]
fn characters_in_modular_mode_is_an_error() {
    let o = run(&["verify", "characters", "--n", "2", "--coeff", "mod:3"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn budget_exceeded_exits_3() {
    let o = run(&["dims", "--n", "4", "--budget-flags", "100"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("2,2\t35\t20\t20"));
    let o = run(&["verify", "lemmas", "--n", "3", "--budget-elements", "10"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn cache_dir_is_created_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let c = cache.to_str().unwrap();
    let first = run(&["tables", "multiplicities", "--n", "3", "--cache-dir", c]);
    assert_eq!(first.status.code(), Some(0));
    let files: Vec<_> = std::fs::read_dir(&cache).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 1);
    let size = std::fs::metadata(&files[0]).unwrap().len();
    assert!(size > 0);
    let second = run(&["tables", "multiplicities", "--n", "3", "--cache-dir", c]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::metadata(&files[0]).unwrap().len(), size, "cached values should not be re-appended");
}
