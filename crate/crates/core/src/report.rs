//! CSV and Markdown emitters for comparison tables.
//!
//! Columns follow the usual despeckling-table order: MSD, NMV, NSD, ENL, DR, FOM. The
//! reference (speckled) row leaves MSD empty in CSV and shows `-` in Markdown. An undefined
//! ENL is written as `inf`.

use crate::bench::BenchRow;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 8] = ["filter", "MSD", "NMV", "NSD", "ENL", "DR", "FOM", "note"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    /// Six significant digits.
    Short,
    /// Shortest representation that round-trips.
    Full,
}

/// `%g`-style formatting with `digits` significant digits.
pub fn format_significant(x: f64, digits: usize) -> String {
    if let Some(s) = non_finite(x) {
        return s;
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

pub fn format_full(x: f64) -> String {
    if let Some(s) = non_finite(x) {
        return s;
    }
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn non_finite(x: f64) -> Option<String> {
    if x.is_nan() {
        Some("nan".into())
    } else if x.is_infinite() {
        Some(if x > 0.0 { "inf" } else { "-inf" }.into())
    } else {
        None
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn cells(row: &BenchRow, fmt: &dyn Fn(f64) -> String, missing_msd: &str) -> (Vec<String>, String) {
    match &row.outcome {
        Ok(m) => {
            let msd = if row.is_reference {
                missing_msd.to_string()
            } else {
                fmt(m.msd)
            };
            let note = if row.is_reference {
                "speckled input; MSD not applicable".to_string()
            } else {
                String::new()
            };
            (
                vec![
                    msd,
                    fmt(m.nmv),
                    fmt(m.nsd),
                    fmt(m.enl),
                    fmt(m.dr),
                    fmt(m.fom),
                ],
                note,
            )
        }
        Err(e) => (vec![String::new(); 6], format!("error: {e}")),
    }
}

pub fn to_csv(rows: &[BenchRow], precision: Precision) -> Result<String> {
    let fmt: Box<dyn Fn(f64) -> String> = match precision {
        Precision::Short => Box::new(|x| format_significant(x, 6)),
        Precision::Full => Box::new(format_full),
    };
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(io)?;
    for row in rows {
        let (values, note) = cells(row, &*fmt, "");
        let mut record = vec![row.label.clone()];
        record.extend(values);
        record.push(note);
        w.write_record(&record).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Markdown table preceded by `preamble` (free text, e.g. the resolved configuration).
pub fn to_markdown(rows: &[BenchRow], preamble: &str) -> String {
    let mut out = String::new();
    if !preamble.is_empty() {
        out.push_str(preamble.trim_end());
        out.push_str("\n\n");
    }
    out.push_str("| Filter | MSD | NMV | NSD | ENL | DR | FOM |\n");
    out.push_str("|---|---:|---:|---:|---:|---:|---:|\n");
    let mut notes = Vec::new();
    for row in rows {
        let (values, note) = cells(row, &|x| format_significant(x, 6), "-");
        out.push_str(&format!("| {} | {} |\n", row.label, values.join(" | ")));
        if row.outcome.is_err() {
            notes.push(format!("- {}: {note}", row.label));
        }
    }
    if !notes.is_empty() {
        out.push('\n');
        out.push_str(&notes.join("\n"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::MetricsReport;

    fn row(label: &str, reference: bool) -> BenchRow {
        BenchRow {
            label: label.into(),
            method: label.to_lowercase(),
            is_reference: reference,
            outcome: Ok(MetricsReport {
                method: label.to_lowercase(),
                seed: Some(42),
                msd: 867.12774,
                nmv: 90.089,
                nv: 1068.53,
                nsd: 32.688412,
                enl: f64::INFINITY,
                enl_blocks: 0,
                dr: 3.2675e-15,
                fom: 0.4591,
                detected_edges: 10,
                ideal_edges: 12,
            }),
        }
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(90.0890, 6), "90.089");
        assert_eq!(format_significant(867.12774, 6), "867.128");
        assert_eq!(format_significant(3.2675e-15, 6), "3.2675e-15");
        assert_eq!(format_significant(-2.5580e-17, 6), "-2.558e-17");
        assert_eq!(format_significant(1234567.0, 6), "1.23457e6");
        assert_eq!(format_significant(0.00012345678, 6), "0.000123457");
        assert_eq!(format_significant(0.0, 6), "0");
        assert_eq!(format_significant(f64::INFINITY, 6), "inf");
        assert_eq!(format_significant(999999.7, 6), "1e6");
    }

    #[test]
    fn full_precision_round_trips() {
        for x in [0.1 + 0.2, 1e-17, 123456.789, -3.0, 1e20] {
            assert_eq!(format_full(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_layout() {
        let mut failed = row("Broken", false);
        failed.outcome = Err("metric undefined: x, y".into());
        let csv = to_csv(
            &[row("Noisy", true), row("Kalman", false), failed],
            Precision::Short,
        )
        .unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "filter,MSD,NMV,NSD,ENL,DR,FOM,note");
        assert_eq!(
            lines[1],
            "Noisy,,90.089,32.6884,inf,3.2675e-15,0.4591,speckled input; MSD not applicable"
        );
        assert_eq!(
            lines[2],
            "Kalman,867.128,90.089,32.6884,inf,3.2675e-15,0.4591,"
        );
        assert_eq!(lines[3], "Broken,,,,,,,\"error: metric undefined: x, y\"");
    }

    #[test]
    fn markdown_layout() {
        let md = to_markdown(&[row("Noisy", true), row("Kalman", false)], "seed: 42");
        assert!(md.starts_with("seed: 42\n\n| Filter | MSD | NMV | NSD | ENL | DR | FOM |"));
        assert!(md.contains("| Noisy | - | 90.089 |"));
        assert!(md.contains("| Kalman | 867.128 |"));
    }
}
