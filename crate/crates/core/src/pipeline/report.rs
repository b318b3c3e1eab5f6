//! Rendering of comparison reports: machine-readable JSON and CSV, and aligned
//! human-readable tables.
//!
//! All machine-readable output is deterministic: rows follow m_set order, JSON field
//! order follows struct declaration, and floats print in shortest-round-trip form.

use super::{ComparisonReport, ScaleComparison};
use crate::error::Result;
use std::fmt::Write as _;
use std::path::Path;

/// Pretty-printed JSON document for a comparison report (schema_version 1).
pub fn report_json(report: &ComparisonReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialization");
    s.push('\n');
    s
}

/// `deviation.csv`: one row per pattern length with the null moments alongside.
pub fn deviation_csv(report: &ComparisonReport) -> String {
    let mut out = String::from("m,deviation,z,null_mean,null_std\n");
    for row in &report.scales {
        let z = row.z.map(|z| z.to_cell()).unwrap_or_default();
        let (null_mean, null_std) = match row.null {
            Some(n) => (format!("{}", n.d_mean), format!("{}", n.d_std)),
            None => (String::new(), String::new()),
        };
        writeln!(out, "{},{},{},{},{}", row.m, row.deviation, z, null_mean, null_std).unwrap();
    }
    out
}

/// `entropy.csv`: pooled and per-sequence entropy summaries for both corpora.
pub fn entropy_csv(report: &ComparisonReport) -> String {
    let mut out = String::from(
        "m,pooled_a,pooled_b,per_seq_mean_a,per_seq_std_a,per_seq_mean_b,per_seq_std_b\n",
    );
    for row in &report.scales {
        let e = &row.entropy;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.m,
            e.pooled_a,
            e.pooled_b,
            e.per_seq_mean_a,
            e.per_seq_std_a,
            e.per_seq_mean_b,
            e.per_seq_std_b
        )
        .unwrap();
    }
    out
}

/// `recurrence.csv`: normalized recurrence bins (0, 1, 2, 3, 4+) for both corpora.
pub fn recurrence_csv(report: &ComparisonReport) -> String {
    let mut out = String::from(
        "m,a_r0,a_r1,a_r2,a_r3,a_r4plus,b_r0,b_r1,b_r2,b_r3,b_r4plus\n",
    );
    for row in &report.scales {
        write!(out, "{}", row.m).unwrap();
        for v in row.recurrence_a.iter().chain(row.recurrence_b.iter()) {
            write!(out, ",{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Format a value for human tables: fixed-point for ordinary magnitudes, scientific for
/// tiny ones, bare zero for zero.
fn fmt_value(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 1e-3 {
        format!("{v:.6}")
    } else {
        format!("{v:.3e}")
    }
}

fn fmt_z(row: &ScaleComparison) -> String {
    match row.z {
        Some(super::ZScore::Finite(z)) => format!("{z:.2}"),
        Some(super::ZScore::PlusInfinity) => "+inf".to_string(),
        None => "-".to_string(),
    }
}

/// Render one aligned table: a header row and one row per pattern length.
fn render_table(title: &str, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    writeln!(out, "{title}").unwrap();
    let line = |cells: &[String], widths: &[usize]| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            write!(s, "{cell:>width$}", width = *w).unwrap();
        }
        s
    };
    let header_cells: Vec<String> = header.iter().map(|h| h.to_string()).collect();
    writeln!(out, "  {}", line(&header_cells, &widths)).unwrap();
    for row in rows {
        writeln!(out, "  {}", line(row, &widths)).unwrap();
    }
    out
}

/// The three human-readable tables: concentration, deviation, entropy.
pub fn human_tables(report: &ComparisonReport) -> String {
    let mut out = String::new();
    writeln!(out, "corpus A: {}", report.a.describe()).unwrap();
    writeln!(out, "corpus B: {}", report.b.describe()).unwrap();
    out.push('\n');

    let concentration_rows: Vec<Vec<String>> = report
        .scales
        .iter()
        .map(|r| {
            vec![
                r.m.to_string(),
                fmt_value(r.concentration_a.max_prob),
                fmt_value(r.concentration_b.max_prob),
                fmt_value(r.concentration_a.distinct_fraction),
                fmt_value(r.concentration_b.distinct_fraction),
                fmt_value(r.concentration_a.repeated_window_fraction),
                fmt_value(r.concentration_b.repeated_window_fraction),
            ]
        })
        .collect();
    out.push_str(&render_table(
        "Pattern concentration comparison",
        &[
            "m",
            "max_prob(A)",
            "max_prob(B)",
            "distinct(A)",
            "distinct(B)",
            "repeated(A)",
            "repeated(B)",
        ],
        &concentration_rows,
    ));
    out.push('\n');

    let deviation_rows: Vec<Vec<String>> = report
        .scales
        .iter()
        .map(|r| {
            let (null_mean, null_std) = match r.null {
                Some(n) => (fmt_value(n.d_mean), fmt_value(n.d_std)),
                None => ("-".to_string(), "-".to_string()),
            };
            vec![
                r.m.to_string(),
                fmt_value(r.deviation),
                fmt_z(r),
                null_mean,
                null_std,
            ]
        })
        .collect();
    out.push_str(&render_table(
        "Pattern deviation scores",
        &["m", "deviation", "z", "null_mean", "null_std"],
        &deviation_rows,
    ));
    out.push('\n');

    let entropy_rows: Vec<Vec<String>> = report
        .scales
        .iter()
        .map(|r| {
            vec![
                r.m.to_string(),
                fmt_value(r.entropy.pooled_a),
                fmt_value(r.entropy.pooled_b),
                fmt_value(r.entropy.per_seq_mean_a),
                fmt_value(r.entropy.per_seq_std_a),
                fmt_value(r.entropy.per_seq_mean_b),
                fmt_value(r.entropy.per_seq_std_b),
            ]
        })
        .collect();
    out.push_str(&render_table(
        "Pattern entropy comparison",
        &[
            "m",
            "pooled(A)",
            "pooled(B)",
            "seq mean(A)",
            "seq sd(A)",
            "seq mean(B)",
            "seq sd(B)",
        ],
        &entropy_rows,
    ));
    out
}

/// Write `report.json`, `deviation.csv`, `entropy.csv`, and `recurrence.csv` into `dir`.
pub fn write_report_files(report: &ComparisonReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("report.json"), report_json(report))?;
    std::fs::write(dir.join("deviation.csv"), deviation_csv(report))?;
    std::fs::write(dir.join("entropy.csv"), entropy_csv(report))?;
    std::fs::write(dir.join("recurrence.csv"), recurrence_csv(report))?;
    Ok(())
}
