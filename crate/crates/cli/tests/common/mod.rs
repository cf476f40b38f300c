#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn data(name: &str) -> PathBuf {
    data_dir().join(name)
}

pub fn zip3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zip3"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Writes a config into `dir` whose data path is absolute.
pub fn write_config(dir: &Path, name: &str, data_path: &Path, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, format!("data = {}\n{body}", data_path.display())).unwrap();
    p
}

/// Parses a CSV file with a header into (header, rows of f64; blanks as NaN).
pub fn read_numeric_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|c| if c.is_empty() { f64::NAN } else { c.parse().unwrap() })
                .collect()
        })
        .collect();
    (header, rows)
}
