use std::path::Path;
use std::process::{Command, Output};

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mertens"))
        .args(args)
        .arg("--cache-dir")
        .arg(cache)
        .output()
        .unwrap()
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(run(d, &["constants", "--q", "4", "--a", "2", "--limit", "1e5"]).status.code(), Some(2));
    assert_eq!(run(d, &["chebotarev", "bogus", "--limit", "1e5"]).status.code(), Some(2));
    assert_eq!(run(d, &["chebotarev", "quad:-5", "--limit", "1e5"]).status.code(), Some(2));
    assert_eq!(run(d, &["constants", "--q", "1", "--limit", "100"]).status.code(), Some(2));
    assert_eq!(run(d, &["nonsense"]).status.code(), Some(2));
    let out = run(d, &["mertens", "--q", "3", "--a", "1", "--x-grid", "1e12", "--limit", "1e5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--limit"));
    assert_eq!(run(d, &["constants", "--q", "1", "--limit", "1e5"]).status.code(), Some(0));
}

#[test]
fn csv_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["mertens", "--q", "5", "--a", "2", "--x-grid", "1e3:1e6:10x", "--limit", "1e6", "--no-meta"];
    let a = run(dir.path(), &args);
    let b = run(dir.path(), &args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.contains(&b'\r'));
    // second run read the cache written by the first
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 1);
}

#[test]
fn grid_rows_and_meta_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["mertens", "--q", "3", "--a", "1", "--x-grid", "1e2:1e6:10x", "--limit", "1e6"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# schema=mertens"));
    let sums = text.lines().filter(|l| l.starts_with("reciprocal-sum,")).count();
    assert_eq!(sums, 5);
}

#[test]
fn json_and_csv_agree() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["constants", "--q", "12", "--limit", "1e6"];
    let csv = run(dir.path(), &[&base[..], &["--no-meta"]].concat());
    let json = run(dir.path(), &[&base[..], &["--format", "json"]].concat());
    let rows = csv_rows(&csv);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    let cols: Vec<&str> = v["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(rows[0], cols);
    let jrows = v["rows"].as_array().unwrap();
    assert_eq!(jrows.len(), rows.len() - 1);
    for (crow, jrow) in rows[1..].iter().zip(jrows) {
        for (c, j) in crow.iter().zip(jrow.as_array().unwrap()) {
            match j {
                serde_json::Value::Null => assert!(c.is_empty()),
                serde_json::Value::String(s) => assert_eq!(s, c),
                serde_json::Value::Number(n) => assert_eq!(n.as_f64().unwrap(), c.parse::<f64>().unwrap()),
                serde_json::Value::Bool(b) => assert_eq!(b.to_string(), *c),
                other => panic!("unexpected {other}"),
            }
        }
    }
    assert_eq!(rows.last().unwrap()[0], "sum-over-classes-identity");
}

#[test]
fn every_subcommand_runs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cases: &[&[&str]] = &[
        &["integral", "--q", "4", "--a", "3", "--X", "1e6", "--limit", "1e6"],
        &["product", "--q", "7", "--a", "3", "--x-grid", "1e4,1e6", "--limit", "1e6"],
        &["pliable", "--x", "1e6", "--y", "10", "--q", "4", "--a", "1", "--limit", "1e6"],
        &["chebotarev", "cyclo:5", "--x", "1e5", "--limit", "1e6"],
        &["chebotarev", "quad:5", "--class", "1", "--x", "1e5", "--limit", "1e6"],
        &["chebotarev", "cubic-s3", "--x", "1e5", "--limit", "1e6"],
        &["mertens", "--q", "4", "--a", "1", "--x-grid", "1e4:1e5:10x", "--tail", "1e6", "--limit", "1e6"],
        &["selftest", "--limit", "1e6"],
    ];
    for args in cases {
        let out = run(d, args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(csv_rows(&out).len() >= 2, "{args:?}");
    }
}

#[test]
fn failing_selftest_exits_with_consistency_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["selftest", "--limit", "1e6", "--tol", "truncation-integral=1e-9"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stdout).contains("truncation-integral,"));
}
