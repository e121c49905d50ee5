//! CSV and JSON artifacts.
//!
//! Histogram CSV columns: `bin_left,bin_right,count,density`.
//! CCDF CSV columns: `value,tail_prob`.
//! Floats carry 17 significant digits so reloading gives back the same bits.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use kinex_core::Histogram;

use crate::error::CliError;
use crate::experiment::ExperimentReport;

pub const HISTOGRAM_FILE: &str = "histogram.csv";
pub const CCDF_FILE: &str = "ccdf.csv";
pub const REPORT_FILE: &str = "report.json";

pub const HISTOGRAM_HEADER: &str = "bin_left,bin_right,count,density";
pub const CCDF_HEADER: &str = "value,tail_prob";

/// 17 significant digits.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn histogram_csv(h: &Histogram) -> String {
    let mut out = String::from(HISTOGRAM_HEADER);
    out.push('\n');
    for i in 0..h.n_bins() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(h.edges[i]),
            fmt_f64(h.edges[i + 1]),
            h.counts[i],
            fmt_f64(h.density(i))
        );
    }
    out
}

pub fn ccdf_csv(points: &[(f64, f64)]) -> String {
    let mut out = String::from(CCDF_HEADER);
    out.push('\n');
    for &(v, p) in points {
        let _ = writeln!(out, "{},{}", fmt_f64(v), fmt_f64(p));
    }
    out
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Writes the histogram and CCDF files into `out_dir` and returns their paths.
pub fn emit_csv(
    histogram: &Histogram,
    ccdf: &[(f64, f64)],
    out_dir: &Path,
) -> Result<(PathBuf, PathBuf), CliError> {
    let hist_path = out_dir.join(HISTOGRAM_FILE);
    let ccdf_path = out_dir.join(CCDF_FILE);
    write(&hist_path, &histogram_csv(histogram))?;
    write(&ccdf_path, &ccdf_csv(ccdf))?;
    Ok((hist_path, ccdf_path))
}

pub fn write_report(report: &ExperimentReport, path: &Path) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    write(path, &text)
}

pub fn load_report(path: &Path) -> Result<ExperimentReport, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Parse {
        path: path.into(),
        message: e.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistogramRow {
    pub bin_left: f64,
    pub bin_right: f64,
    pub count: u64,
    pub density: f64,
}

fn parse_rows<T>(
    path: &Path,
    header: &str,
    columns: usize,
    mut row: impl FnMut(&[&str]) -> Option<T>,
) -> Result<Vec<T>, CliError> {
    let text = read(path)?;
    let mut lines = text.lines();
    let bad = |message: String| CliError::Parse {
        path: path.into(),
        message,
    };
    if lines.next() != Some(header) {
        return Err(bad(format!("expected header `{header}`")));
    }
    lines
        .enumerate()
        .map(|(n, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != columns {
                return Err(bad(format!("line {}: expected {columns} columns", n + 2)));
            }
            row(&fields).ok_or_else(|| bad(format!("line {}: unparsable value", n + 2)))
        })
        .collect()
}

pub fn read_histogram_csv(path: &Path) -> Result<Vec<HistogramRow>, CliError> {
    parse_rows(path, HISTOGRAM_HEADER, 4, |f| {
        Some(HistogramRow {
            bin_left: f[0].parse().ok()?,
            bin_right: f[1].parse().ok()?,
            count: f[2].parse().ok()?,
            density: f[3].parse().ok()?,
        })
    })
}

pub fn read_ccdf_csv(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    parse_rows(path, CCDF_HEADER, 2, |f| {
        Some((f[0].parse().ok()?, f[1].parse().ok()?))
    })
}

/// Reads the first column of a CSV as samples, skipping a non-numeric header.
pub fn read_samples(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = read(path)?;
    let mut samples = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let field = line.split(',').next().unwrap_or("").trim();
        if field.is_empty() {
            continue;
        }
        match field.parse::<f64>() {
            Ok(x) => samples.push(x),
            Err(_) if n == 0 => {}
            Err(_) => {
                return Err(CliError::Parse {
                    path: path.into(),
                    message: format!("line {}: `{field}` is not a number", n + 1),
                })
            }
        }
    }
    Ok(samples)
}
