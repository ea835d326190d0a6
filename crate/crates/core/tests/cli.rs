use std::fs;
use std::process::{Command, Output};

use trigroup::words::parse_presentation;

fn trigroup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trigroup"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sample_then_certify() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.txt");
    let path = file.to_str().unwrap();
    let o = trigroup(&[
        "sample", "--n", "20", "--p", "0.01/n^2", "--seed", "4", "-o", path,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&file).unwrap();
    assert!(text.contains("# source: binomial"));
    parse_presentation(&text).unwrap();

    let o = trigroup(&["certify", path]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let json = out.lines().last().unwrap();
    let record: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(record["n"], 20);
    assert!(record["t_cert"]["status"].is_string());
}

#[test]
fn certify_reports_the_cyclic_group() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("z3.txt");
    fs::write(&file, "n=1\ng1 g1 g1\n").unwrap();
    let o = trigroup(&["certify", "--json", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let record: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(record["free"]["status"], "inconclusive");
    assert_eq!(record["chi"], 1);
    assert_eq!(record["t_cert"]["status"], "certified");
}

#[test]
fn spectrum_csv() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.txt");
    fs::write(&file, "n=2\ng1 g1 g2\ng2 g2 G1\n").unwrap();
    let o = trigroup(&["spectrum", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("# m=4 tol=1e-10 residual="));
    assert_eq!(lines.next(), Some("index,eigenvalue"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn sweep_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.cfg");
    let csv = dir.path().join("out.csv");
    fs::write(
        &config,
        "seed = 1\ncell = 30 0.5/n^2 5\ncell = 20 8/n^2 3 nospectra\n",
    )
    .unwrap();
    let o = trigroup(&[
        "sweep",
        config.to_str().unwrap(),
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let rows = fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 9);
    assert!(rows.starts_with("n,p,seed,trial,t,free_cert,rank,chi,chi_witness,isolated_count,connected,lambda2,t_cert,max_h_component,degree_dev,error,elapsed_ms\n"));
    assert!(stdout(&o).contains("empty until log n >= 75"));

    let again = trigroup(&["sweep", config.to_str().unwrap(), "--sequential"]);
    assert_eq!(again.stdout, rows.as_bytes());
}

#[test]
fn exit_codes() {
    assert_eq!(trigroup(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(trigroup(&["--version"]).status.code(), Some(0));
    assert_eq!(
        trigroup(&["certify", "/no/such/file"]).status.code(),
        Some(2)
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "n=2\ng1 G1 g2\n").unwrap();
    let o = trigroup(&["certify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "cell = 1 abs:3 2\n").unwrap();
    assert_eq!(
        trigroup(&["sweep", cfg.to_str().unwrap()]).status.code(),
        Some(1)
    );
    let unwritable = dir.path().join("missing-dir").join("out.csv");
    fs::write(&cfg, "cell = 5 1/n^2 1\n").unwrap();
    let o = trigroup(&[
        "sweep",
        cfg.to_str().unwrap(),
        "-o",
        unwritable.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}
