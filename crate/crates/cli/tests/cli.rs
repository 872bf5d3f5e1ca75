use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn qkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qkit")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = qkit(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn value(csv: &str, key: &str) -> f64 {
    csv.lines().find_map(|l| l.strip_prefix(&format!("{key},"))).unwrap().parse().unwrap()
}

#[test]
fn entropy_of_files() {
    let dir = TempDir::new().unwrap();
    let dist = write(&dir, "d.json", "[0.5, 0.5]");
    assert_eq!(value(&stdout(&["entropy", &dist]), "entropy"), 1.0);
    let mixed = write(&dir, "m.json", r#"{"dim": 2, "re": [0.5, 0, 0, 0.5]}"#);
    assert_eq!(value(&stdout(&["entropy", &mixed]), "entropy"), 1.0);
    let fixture = write(&dir, "f.json", r#"{"dim": 2, "re": [0.75, 0.25, 0.25, 0.25]}"#);
    assert!((value(&stdout(&["entropy", &fixture]), "entropy") - 0.600876036693).abs() < 1e-12);
    let bell = write(&dir, "b.json", r#"{"dim": 4, "re": [0.5,0,0,0.5, 0,0,0,0, 0,0,0,0, 0.5,0,0,0.5], "subsystem_dims": [2, 2]}"#);
    let out = stdout(&["entropy", &bell]);
    assert!(value(&out, "entropy").abs() < 1e-9);
    assert!((value(&out, "conditional_entropy") + 1.0).abs() < 1e-9);
    assert!((value(&out, "mutual_information") - 2.0).abs() < 1e-9);
}

#[test]
fn capacity_rows() {
    let dir = TempDir::new().unwrap();
    let id = write(&dir, "id.json", r#"{"rows": [[1, 0], [0, 1]]}"#);
    assert_eq!(stdout(&["capacity", &id]), "capacity,p0,p1\n1,0.5,0.5\n");
    let bsc = write(&dir, "bsc.json", r#"{"rows": [[0.89, 0.11], [0.11, 0.89]]}"#);
    assert_eq!(stdout(&["capacity", &bsc]), "capacity,p0,p1\n0.500084041835,0.5,0.5\n");
    let bec = write(&dir, "bec.json", r#"{"rows": [[0.7, 0.3, 0], [0, 0.3, 0.7]]}"#);
    assert!(stdout(&["capacity", &bec]).starts_with("capacity,p0,p1\n0.7,"));
}

#[test]
fn quantum_capacity_needs_seed() {
    let dir = TempDir::new().unwrap();
    let id = write(&dir, "k.json", r#"{"kraus": [{"dim": 2, "re": [1, 0, 0, 1]}]}"#);
    assert_eq!(qkit(&["capacity", "--kraus", &id]).status.code(), Some(2));
    let out = stdout(&["capacity", "--kraus", &id, "--seed", "3", "--restarts", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["rows"][0]["chi"].as_f64().unwrap() > 0.9999);
}

#[test]
fn code_report() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "h.txt", "7 4\n1110000\n1001100\n0101010\n1101001\n");
    let s = write(&dir, "s.txt", "7 3\n0001111\n0110011\n1010101\n");
    let out = stdout(&["codes", &h, "--css", &s]);
    assert_eq!(value(&out, "d"), 3.0);
    assert!(out.contains("singleton_ok,true") && out.contains("gv_ok,true"));
    assert_eq!(value(&out, "css_logical_bits"), 1.0);
    assert!(out.contains("quantum_singleton_ok,true"));
}

#[test]
fn compress_sweep() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.json", "[0.75, 0.25]");
    let out = stdout(&["compress", "--dist", &p, "--n", "12", "--eps", "0.3", "--rate", "0.95"]);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "12");
    assert!(row[4].parse::<f64>().unwrap() > 0.8);
    let rho = write(&dir, "r.json", r#"{"dim": 2, "re": [0.75, 0, 0, 0.25]}"#);
    let out = stdout(&["compress", "--density", &rho, "--n", "4,8", "--eps", "0.2"]);
    let f: Vec<f64> = out.lines().skip(1).map(|l| l.split(',').nth(4).unwrap().parse().unwrap()).collect();
    assert!(f[1] > f[0]);
}

#[test]
fn qkd_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "q.json", r#"{"n": 64, "delta": 1.0, "css": "steane", "channel": {"kind": "ideal"}}"#);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        stdout(&["qkd", &cfg, "--seed", "17", "--trials", "25", "--out", out.to_str().unwrap()]);
    }
    let (a, b) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("trial,aborted,sifted_count,qber,key_len,keys_match\n0,false,"));
    assert!(text.contains("abort_rate=0,key_match_rate=1"));
    let other = stdout(&["qkd", &cfg, "--seed", "18", "--trials", "25"]);
    assert_ne!(other, text);
}

#[test]
fn qkd_transcripts() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "q.json", r#"{"n": 32, "delta": 2.0, "css": "steane", "channel": {"kind": "depolarizing", "f": 0.1}, "seed": 5}"#);
    let tdir = dir.path().join("t");
    stdout(&["qkd", &cfg, "--trials", "3", "--transcript-dir", tdir.to_str().unwrap(), "--format", "json"]);
    let text = fs::read_to_string(tdir.join("trial_000002.json")).unwrap();
    let t = qkit::bb84sim::ProtocolTranscript::from_json(&text).unwrap();
    assert_eq!(t.trial, 2);
}

#[test]
fn usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "[0.5, 0.6]");
    let missing = dir.path().join("nope.json");
    let cfg = write(&dir, "q.json", r#"{"n": 64, "css": "steane", "channel": {"kind": "ideal"}}"#);
    let cases: Vec<Vec<&str>> = vec![
        vec![],
        vec!["frobnicate"],
        vec!["entropy"],
        vec!["entropy", &bad],
        vec!["entropy", missing.to_str().unwrap()],
        vec!["capacity", &bad],
        vec!["codes", &bad],
        vec!["qkd", &cfg],
        vec!["qkd", &bad, "--seed", "1"],
        vec!["entropy", &bad, "--format", "xml"],
    ];
    for args in cases {
        let out = qkit(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert!(!Path::new(&missing).exists());
}
