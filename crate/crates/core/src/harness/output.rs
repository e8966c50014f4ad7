//! `records.csv`, `summary.json` and `run_manifest.json`.

use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use super::config::{code_version, ExperimentConfig, RunManifest};
use super::summary::Summary;
use crate::error::{Error, Result};
use crate::metrics::RunRecord;
use crate::selection::Algorithm;

pub const RECORDS_FILE: &str = "records.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const MANIFEST_FILE: &str = "run_manifest.json";

pub const CSV_HEADER: [&str; 8] =
    ["t_s", "algorithm", "makespan_s", "throughput_mbps", "compute_time_us", "optimal", "m", "n"];

/// Decimal rendering rounded to nine significant digits.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    rounded.to_string()
}

pub fn write_records<W: Write>(writer: W, records: &[RunRecord]) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            format_sig9(r.t_s),
            r.algorithm.to_string(),
            format_sig9(r.makespan_s),
            format_sig9(r.throughput_mbps),
            format_sig9(r.compute_time_us),
            r.optimal.to_string(),
            r.m.to_string(),
            r.n.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(reader: R) -> Result<Vec<RunRecord>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|e| Error::invalid("records.csv", e.to_string()))?
        .clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::invalid("records.csv", format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    rdr.records()
        .enumerate()
        .map(|(line, row)| {
            let row = row.map_err(|e| Error::invalid("records.csv", e.to_string()))?;
            let field = |k: usize| row.get(k).unwrap_or_default();
            let bad = |k: usize| Error::invalid(format!("records.csv row {} {}", line + 1, CSV_HEADER[k]), field(k).to_string());
            let num = |k: usize| field(k).parse::<f64>().map_err(|_| bad(k));
            let count = |k: usize| field(k).parse::<usize>().map_err(|_| bad(k));
            Ok(RunRecord {
                t_s: num(0)?,
                algorithm: field(1).parse::<Algorithm>()?,
                makespan_s: num(2)?,
                throughput_mbps: num(3)?,
                compute_time_us: num(4)?,
                optimal: field(5).parse::<bool>().map_err(|_| bad(5))?,
                m: count(6)?,
                n: count(7)?,
            })
        })
        .collect()
}

pub fn load_records(path: &Path) -> Result<Vec<RunRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_records(file)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::json(path.display().to_string(), e))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes the three output files into `output_dir`, creating it if needed.
pub fn emit(records: &[RunRecord], summary: &Summary, cfg: &ExperimentConfig, output_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(output_dir).map_err(|e| Error::io(output_dir, e))?;

    let records_path = output_dir.join(RECORDS_FILE);
    let file = File::create(&records_path).map_err(|e| Error::io(&records_path, e))?;
    write_records(file, records).map_err(|source| Error::Csv { path: records_path.clone(), source })?;

    let summary_path = output_dir.join(SUMMARY_FILE);
    write_json(&summary_path, summary)?;

    let manifest_path = output_dir.join(MANIFEST_FILE);
    let manifest = RunManifest { code_version: code_version(), seed: cfg.traffic.seed, config: cfg };
    write_json(&manifest_path, &manifest)?;

    Ok(vec![records_path, summary_path, manifest_path])
}
