//! Plot-ready CSV and the JSON manifest written next to it.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;

use crate::cache;
use crate::config::Settings;
use crate::error::{CliError, CliResult};

pub enum Cell {
    Num(f64),
    Flag(bool),
}

/// Ten significant digits in scientific notation.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.9e}")
}

pub fn render_csv(header: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Num(v) => fmt_num(*v),
                Cell::Flag(b) => b.to_string(),
            })
            .collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

/// `results.csv` → `results.manifest.json`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

pub fn write_file(path: &Path, body: &[u8]) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(CliError::io(parent))?;
    }
    std::fs::write(path, body).map_err(CliError::io(path))
}

#[derive(Serialize)]
pub struct Manifest<'a> {
    pub command: &'a str,
    pub version: &'a str,
    pub params: &'a crate::config::Physics,
    /// SHA-256 of the canonical JSON of `command`, `version` and `params`.
    pub input_hash: String,
    pub execution: &'a crate::config::Execution,
    pub cache: serde_json::Value,
    pub duration_seconds: f64,
    pub outputs: Vec<PathBuf>,
}

pub fn input_hash(command: &str, settings: &Settings) -> String {
    let v = serde_json::json!({
        "command": command,
        "version": xyquench::VERSION,
        "params": settings.physics,
    });
    cache::digest(&cache::canonical(&v))
}

/// Writes the CSV (stdout when no path is set), any extra JSON documents,
/// and the manifest (stderr when no path is set).
pub fn emit(
    command: &str,
    settings: &Settings,
    csv: &str,
    extras: &[(&str, serde_json::Value)],
    cache_stats: serde_json::Value,
    elapsed: Duration,
) -> CliResult<()> {
    let mut outputs = Vec::new();
    match &settings.execution.out {
        Some(path) => {
            write_file(path, csv.as_bytes())?;
            outputs.push(path.clone());
            for (suffix, doc) in extras {
                let p = sibling(path, &format!("{suffix}.json"));
                write_file(&p, &pretty(doc))?;
                outputs.push(p);
            }
        }
        None => {
            std::io::stdout()
                .write_all(csv.as_bytes())
                .map_err(CliError::io("<stdout>"))?;
            for (_, doc) in extras {
                eprintln!("{}", String::from_utf8_lossy(&pretty(doc)));
            }
        }
    }
    let manifest = Manifest {
        command,
        version: xyquench::VERSION,
        params: &settings.physics,
        input_hash: input_hash(command, settings),
        execution: &settings.execution,
        cache: cache_stats,
        duration_seconds: elapsed.as_secs_f64(),
        outputs,
    };
    let body = pretty(&serde_json::to_value(&manifest).expect("manifest serializes"));
    match &settings.execution.out {
        Some(path) => write_file(&sibling(path, "manifest.json"), &body),
        None => {
            eprintln!("{}", String::from_utf8_lossy(&body));
            Ok(())
        }
    }
}

pub fn pretty(v: &serde_json::Value) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(v).expect("JSON values always serialize");
    s.push(b'\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_carry_ten_significant_digits() {
        assert_eq!(fmt_num(0.123456789012), "1.234567890e-1");
        assert_eq!(fmt_num(0.0), "0.000000000e0");
        assert_eq!(fmt_num(-2.5), "-2.500000000e0");
        let back: f64 = fmt_num(0.7162981234567).parse().unwrap();
        assert!((back - 0.7162981234567).abs() < 1e-10);
    }

    #[test]
    fn csv_layout() {
        let s = render_csv(&["x", "ok"], &[vec![Cell::Num(1.0), Cell::Flag(true)]]);
        assert_eq!(s, "x,ok\n1.000000000e0,true\n");
    }

    #[test]
    fn sibling_names() {
        assert_eq!(sibling(Path::new("out/c.csv"), "manifest.json"), PathBuf::from("out/c.manifest.json"));
        assert_eq!(sibling(Path::new("c"), "agreement.json"), PathBuf::from("c.agreement.json"));
    }
}
