use std::fmt::Write as _;
use std::path::Path;

use super::BenchRow;
use crate::error::{GmviError, Result};
use crate::geometry::GeometryChoice;

pub const CSV_HEADER: &str = "instance,n,seed,algorithm,geometry,gamma0,lambda,k,np,wall_seconds,final_gap,status";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

pub fn rows_to_csv(rows: &[BenchRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|source| GmviError::Csv { path: "<memory>".into(), source })?;
    }
    let bytes = w.into_inner().map_err(|e| GmviError::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| GmviError::Parse(e.to_string()))
}

pub fn parse_report(text: &str) -> Result<Vec<BenchRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().map(|row| row.map_err(|source| GmviError::Csv { path: "<memory>".into(), source })).collect()
}

pub fn read_report(path: &Path) -> Result<Vec<BenchRow>> {
    let text = std::fs::read_to_string(path).map_err(|source| GmviError::Io { path: path.to_path_buf(), source })?;
    parse_report(&text).map_err(|e| match e {
        GmviError::Csv { source, .. } => GmviError::Csv { path: path.to_path_buf(), source },
        other => other,
    })
}

fn fmt_cell(row: Option<&BenchRow>) -> String {
    match row {
        Some(r) if r.status == "Converged" => format!(" {} | {} | {:.4} |", r.k, r.np, r.wall_seconds),
        _ => " - | - | - |".to_string(),
    }
}

/// One line per instance and algorithm; `k | np | time` per geometry, `-` when not converged.
pub fn markdown_table(rows: &[BenchRow]) -> String {
    let geometries: Vec<&str> = GeometryChoice::ALL
        .iter()
        .map(|g| g.label())
        .filter(|g| rows.iter().any(|r| r.geometry == *g))
        .collect();
    let mut keys: Vec<(&str, usize, Option<u64>, &str)> = Vec::new();
    for r in rows {
        let key = (r.instance.as_str(), r.n, r.seed, r.algorithm.as_str());
        if !keys.contains(&key) {
            keys.push(key);
        }
    }

    let mut out = String::from("| instance | n | algorithm |");
    let mut rule = String::from("|---|---|---|");
    for g in &geometries {
        let _ = write!(out, " {g} k | {g} np | {g} time |");
        rule.push_str("---|---|---|");
    }
    out.push('\n');
    out.push_str(&rule);
    out.push('\n');
    for (inst, n, seed, algo) in keys {
        let label = match seed {
            Some(s) => format!("{inst} (seed {s})"),
            None => inst.to_string(),
        };
        let _ = write!(out, "| {label} | {n} | {algo} |");
        for g in &geometries {
            let hit = rows.iter().find(|r| (r.instance.as_str(), r.n, r.seed, r.algorithm.as_str()) == (inst, n, seed, algo) && r.geometry == *g);
            out.push_str(&fmt_cell(hit));
        }
        out.push('\n');
    }
    out
}

pub fn write_report(rows: &[BenchRow], format: ReportFormat, path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(GmviError::InvalidConfig("refusing to write an empty report".into()));
    }
    let text = match format {
        ReportFormat::Csv => rows_to_csv(rows)?,
        ReportFormat::Markdown => markdown_table(rows),
    };
    std::fs::write(path, text).map_err(|source| GmviError::Io { path: path.to_path_buf(), source })
}
