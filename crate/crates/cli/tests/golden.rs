//! Byte-for-byte comparisons of CLI output on the checked-in toy data.
//! Set `ZIP3_UPDATE_GOLDEN=1` to rewrite the expected files.

mod common;

use std::fs;
use std::path::{Path, PathBuf};

use common::{data, stderr, stdout, zip3};

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn check(name: &str, actual: &[u8]) {
    let path = golden(name);
    if std::env::var_os("ZIP3_UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(
        expected == actual,
        "{name} differs from golden file:\n{}",
        String::from_utf8_lossy(actual)
    );
}

#[test]
fn fit_output() {
    let o = zip3(&["fit", "--config", data("toy.conf").to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    check("toy_fit.txt", &o.stdout);
}

#[test]
fn diagnose_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = zip3(&[
        "diagnose",
        "--config",
        data("toy.conf").to_str().unwrap(),
        "--envelope",
        "--ld",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    for file in ["residuals.csv", "envelope.csv", "ld.csv", "diagnostics.json"] {
        check(&format!("toy_{file}"), &fs::read(dir.path().join(file)).unwrap());
    }
}

#[test]
fn simulate_output() {
    let o = zip3(&["simulate", "--scenario", data("smoke.conf").to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    check("smoke_simulate.csv", &o.stdout);
}

#[test]
fn casewise_output() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("casewise.json");
    let o = zip3(&[
        "casewise",
        "--config",
        data("toy.conf").to_str().unwrap(),
        "--drop",
        "none",
        "--drop",
        "3",
        "--drop",
        "3,17",
        "--out",
        json.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    check("toy_casewise.txt", stdout(&o).as_bytes());
    check("toy_casewise.json", &fs::read(json).unwrap());
}
