//! Report and corpus file formats.
//!
//! Scan CSV columns, in order: `n, sphere_size, failures, rate, bound, mode,
//! ci_low, ci_high, correctness_checked`. The CI columns are empty for
//! exhaustive rows. Instance files start with a `k=<int>` header line followed
//! by one instance per line in the textual symbol format (an empty line is λ).

use std::io::{BufRead, Write};

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::heuristic::FailureStats;
use crate::sigma::{Alphabet, SymString};

pub(crate) fn biguint_string<S: Serializer>(
    value: &BigUint,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

pub const SCAN_CSV_COLUMNS: [&str; 9] = [
    "n",
    "sphere_size",
    "failures",
    "rate",
    "bound",
    "mode",
    "ci_low",
    "ci_high",
    "correctness_checked",
];

#[derive(Serialize)]
struct ScanRow {
    n: usize,
    sphere_size: String,
    failures: u64,
    rate: f64,
    bound: f64,
    mode: String,
    ci_low: Option<f64>,
    ci_high: Option<f64>,
    correctness_checked: u64,
}

impl From<&FailureStats> for ScanRow {
    fn from(s: &FailureStats) -> Self {
        ScanRow {
            n: s.n,
            sphere_size: s.sphere_size.to_string(),
            failures: s.failures,
            rate: s.rate,
            bound: s.bound,
            mode: s.mode.to_string(),
            ci_low: s.ci.map(|c| c.0),
            ci_high: s.ci.map(|c| c.1),
            correctness_checked: s.correctness_checked,
        }
    }
}

pub fn write_scan_csv<W: Write>(writer: W, rows: &[FailureStats]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    if rows.is_empty() {
        csv.write_record(SCAN_CSV_COLUMNS)?;
    }
    for row in rows {
        csv.serialize(ScanRow::from(row))?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut writer: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut writer, value)?;
    writeln!(writer)?;
    Ok(())
}

pub fn write_instances<W: Write>(
    mut writer: W,
    alphabet: Alphabet,
    instances: &[SymString],
) -> Result<()> {
    writeln!(writer, "k={}", alphabet.k())?;
    for x in instances {
        writeln!(writer, "{x}")?;
    }
    Ok(())
}

pub fn read_instances<R: BufRead>(reader: R) -> Result<(Alphabet, Vec<SymString>)> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Config("instance file is empty".into()))??;
    let k: u32 = header
        .trim()
        .strip_prefix("k=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Config(format!("bad instance header {header:?}")))?;
    let alphabet = Alphabet::new(k)?;
    let instances = lines
        .map(|line| SymString::parse(&line?, alphabet))
        .collect::<Result<Vec<_>>>()?;
    Ok((alphabet, instances))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heuristic::{scan_alpha_sphere, ScanMode, ScanOptions};
    use crate::iso::IsoEngine;
    use crate::lang::Registry;

    #[test]
    fn scan_csv_layout() {
        let lang = Registry::builtin().lookup("parity-odd").unwrap();
        let engine = IsoEngine::for_language(&lang);
        let exhaustive = scan_alpha_sphere(&engine, 4, &ScanOptions::default(), None).unwrap();
        let sampled = scan_alpha_sphere(
            &engine,
            6,
            &ScanOptions {
                mode: ScanMode::Sampled,
                samples: 100,
                ..Default::default()
            },
            None,
        )
        .unwrap();
        let mut out = Vec::new();
        write_scan_csv(&mut out, &[exhaustive, sampled]).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SCAN_CSV_COLUMNS.join(","));
        assert_eq!(lines[1], "4,16,4,0.25,0.25,exhaustive,,,0");
        assert!(lines[2].starts_with("6,64,"));
        assert!(lines[2].contains(",sampled,"));
    }

    #[test]
    fn instance_file_round_trip() {
        let a = Alphabet::new(3).unwrap();
        let xs: Vec<SymString> = ["", "012", "2"]
            .iter()
            .map(|t| SymString::parse(t, a).unwrap())
            .collect();
        let mut buf = Vec::new();
        write_instances(&mut buf, a, &xs).unwrap();
        assert!(buf.starts_with(b"k=3\n"));
        let (a2, ys) = read_instances(&buf[..]).unwrap();
        assert_eq!((a2, ys), (a, xs));
        assert!(read_instances(&b"q=2\n"[..]).is_err());
    }
}
