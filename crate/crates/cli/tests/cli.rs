//! End-to-end runs of the `kbill` binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use kepler_billiards::{pt, TableSpec};

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("kbill-cli");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn table_file(name: &str, json: &str) -> PathBuf {
    let path = scratch(name);
    fs::write(&path, json).unwrap();
    path
}

fn focused() -> PathBuf {
    table_file("focused.json", &TableSpec::focused_ellipse(1.2, 0.8).to_json())
}

fn kbill(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kbill")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(i).unwrap().to_string()).collect()
}

#[test]
fn simulate_focused_ellipse() {
    let table = focused();
    let o = kbill(&["simulate", "--table", table.to_str().unwrap(), "--t0", "0.2", "--angle", "1.1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = stdout(&o);
    assert_eq!(csv.lines().count(), 102);
    assert!(csv.starts_with("index,t,x,y,in_dx,in_dy,out_dx,out_dy,s,phi,energy_residual,abs_l,joachimsthal\n"));
    for r in column(&csv, "energy_residual") {
        assert!(r.parse::<f64>().unwrap() < 1e-10, "{r}");
    }
    let j: Vec<f64> = column(&csv, "joachimsthal").iter().map(|v| v.parse().unwrap()).collect();
    assert!(j.iter().all(|v| (v - j[0]).abs() < 1e-10));
}

#[test]
fn zero_bounces_writes_the_launch_row() {
    let table = focused();
    for mode in ["kepler", "birkhoff", "lifted"] {
        let o = kbill(&["simulate", "--table", table.to_str().unwrap(), "--mode", mode, "--bounces", "0"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert_eq!(stdout(&o).lines().count(), 2, "{mode}");
    }
}

#[test]
fn jsonl_rows_carry_the_csv_columns() {
    let table = focused();
    let args = ["simulate", "--table", table.to_str().unwrap(), "--bounces", "3", "--seed", "7"];
    let csv = stdout(&kbill(&args));
    let jsonl = stdout(&kbill(&[&args[..], &["--format", "jsonl"]].concat()));
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let rows: Vec<serde_json::Value> = jsonl.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 4);
    for row in &rows {
        let keys: Vec<&str> = row.as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = header.clone();
        expected.sort_unstable();
        let mut keys = keys;
        keys.sort_unstable();
        assert_eq!(keys, expected);
    }
    assert_eq!(rows[2]["index"], 2);
}

#[test]
fn validation_failures_exit_1() {
    let bad = table_file("truncated.json", r#"{"type":"ellipse","center":[0,0],"semi_axes":[1.2"#);
    let o = kbill(&["simulate", "--table", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("invalid table JSON"), "{}", stderr(&o));

    let outside = table_file("outside.json", &TableSpec::ellipse(pt(3.0, 0.0), 1.0, 0.5, 0.0).to_json());
    for cmd in ["simulate", "kconvex"] {
        let o = kbill(&[cmd, "--table", outside.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(1));
        assert!(stderr(&o).contains("origin-interior"), "{}", stderr(&o));
    }

    let table = focused();
    let t = table.to_str().unwrap();
    assert_eq!(kbill(&["simulate", "--table", t, "--tol-energy", "-1"]).status.code(), Some(1));
    assert_eq!(kbill(&["simulate", "--table", t, "--angle", "3.5"]).status.code(), Some(1));
}

#[test]
fn kconvex_verdicts() {
    let table = focused();
    let o = kbill(&["kconvex", "--table", table.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("KConvex / KConvex, agree"), "{}", stderr(&o));

    let thin = table_file("thin.json", &TableSpec::ellipse(pt(0.0, 0.0), 5.0, 0.3, 0.0).to_json());
    let o = kbill(&["kconvex", "--table", thin.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("NotKConvex / NotKConvex, agree"));
    let csv = stdout(&o);
    let apse: f64 = column(&csv, "witness_apse")[1].parse().unwrap();
    assert!((apse - std::f64::consts::FRAC_PI_2).abs() < 0.1 || (apse + std::f64::consts::FRAC_PI_2).abs() < 0.1);
    let recheck: usize = column(&csv, "witness_recheck")[1].parse().unwrap();
    assert!(recheck >= 3);
}

#[test]
fn conjugacy_agrees_on_the_focused_ellipse() {
    let table = focused();
    let o = kbill(&["conjugacy", "--table", table.to_str().unwrap(), "--t0", "0.4", "--angle", "0.9"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let dev = column(&stdout(&o), "deviation");
    assert_eq!(dev.len(), 201);
    assert!(dev.iter().all(|d| d.parse::<f64>().unwrap() < 1e-8));

    let o = kbill(&["conjugacy", "--table", table.to_str().unwrap(), "--bounces", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(column(&stdout(&o), "deviation").len(), 2);
}

#[test]
fn conjugacy_agrees_on_a_perturbed_table() {
    let spec = TableSpec::fourier([
        (0, pt(0.4, 0.0)),
        (1, pt(1.0, 0.0)),
        (-1, pt(0.04, 0.0)),
        (2, pt(0.004, 0.002)),
        (-3, pt(0.001, -0.002)),
    ]);
    let table = table_file("perturbed.json", &spec.to_json());
    let o = kbill(&["conjugacy", "--table", table.to_str().unwrap(), "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn portraits_are_reproducible() {
    let table = focused();
    let out = |name: &str| scratch(name).to_str().unwrap().to_string();
    let (a, b) = (out("portrait-a.csv"), out("portrait-b.csv"));
    for path in [&a, &b] {
        let o =
            kbill(&["portrait", "--table", table.to_str().unwrap(), "--grid", "3x4", "--bounces", "20", "--out", path]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("seed,k,s,phi\n"));
    assert_eq!(text.lines().count(), 1 + 12 * 21);
}

#[test]
fn fit_integral_recovers_the_focused_form() {
    let table = focused();
    let o = kbill(&[
        "fit-integral",
        "--table",
        table.to_str().unwrap(),
        "--mode",
        "lifted",
        "--t0",
        "0.3",
        "--angle",
        "1.0",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = stdout(&o);
    let residual: f64 = column(&csv, "residual")[0].parse().unwrap();
    assert!(residual < 1e-9, "{residual}");
    let xx: f64 = column(&csv, "q_xx")[0].parse().unwrap();
    let yy: f64 = column(&csv, "q_yy")[0].parse().unwrap();
    // proportional to diag(1/1.2², 1/0.8²)
    assert!((yy / xx - 1.44 / 0.64).abs() < 1e-6, "{xx} {yy}");
}
