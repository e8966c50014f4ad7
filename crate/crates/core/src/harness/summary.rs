//! Aggregate statistics over run records.
//!
//! Ratios between algorithms are formed per instant and then averaged
//! (mean of ratios, not ratio of means). Ratios against OP only use
//! instants where OP proved optimality; with no such instant the mean is
//! reported as unavailable (`null`), never as zero.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::metrics::RunRecord;
use crate::selection::Algorithm;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub records: usize,
    pub mean_makespan_s: f64,
    pub median_makespan_s: f64,
    pub p95_makespan_s: f64,
    pub mean_throughput_mbps: f64,
    pub mean_compute_time_us: f64,
    pub median_compute_time_us: f64,
    pub optimal_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstantRatio {
    pub t_s: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioSummary {
    pub numerator: Algorithm,
    pub denominator: Algorithm,
    pub mean: Option<f64>,
    pub instants: usize,
    pub per_instant: Vec<InstantRatio>,
}

impl RatioSummary {
    pub fn label(&self) -> String {
        format!("T_{}/T_{}", self.numerator, self.denominator)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub instants: usize,
    pub algorithms: Vec<AlgorithmSummary>,
    pub ratios: Vec<RatioSummary>,
}

impl Summary {
    pub fn algorithm(&self, algorithm: Algorithm) -> Option<&AlgorithmSummary> {
        self.algorithms.iter().find(|a| a.algorithm == algorithm)
    }

    pub fn ratio(&self, numerator: Algorithm, denominator: Algorithm) -> Option<&RatioSummary> {
        self.ratios
            .iter()
            .find(|r| r.numerator == numerator && r.denominator == denominator)
    }
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    match v.len() {
        0 => f64::NAN,
        n if n % 2 == 1 => v[n / 2],
        n => (v[n / 2 - 1] + v[n / 2]) / 2.0,
    }
}

/// Nearest-rank percentile, `q` in (0, 1].
pub fn percentile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    if v.is_empty() {
        return f64::NAN;
    }
    let rank = (q * v.len() as f64).ceil().max(1.0) as usize;
    v[rank.min(v.len()) - 1]
}

fn by_instant(records: &[RunRecord], algorithm: Algorithm) -> BTreeMap<u64, &RunRecord> {
    records
        .iter()
        .filter(|r| r.algorithm == algorithm)
        .map(|r| (r.t_s.to_bits(), r))
        .collect()
}

fn ratio(records: &[RunRecord], numerator: Algorithm, denominator: Algorithm) -> RatioSummary {
    let num = by_instant(records, numerator);
    let den = by_instant(records, denominator);
    let mut per_instant: Vec<InstantRatio> = num
        .iter()
        .filter_map(|(key, n)| {
            let d = den.get(key)?;
            let op_ok = |r: &RunRecord| r.algorithm != Algorithm::Op || r.optimal;
            (op_ok(n) && op_ok(d) && d.makespan_s > 0.0).then(|| InstantRatio {
                t_s: n.t_s,
                ratio: n.makespan_s / d.makespan_s,
            })
        })
        .collect();
    per_instant.sort_by(|a, b| a.t_s.total_cmp(&b.t_s));
    let values: Vec<f64> = per_instant.iter().map(|r| r.ratio).collect();
    RatioSummary {
        numerator,
        denominator,
        mean: (!values.is_empty()).then(|| mean(&values)),
        instants: values.len(),
        per_instant,
    }
}

pub fn summarize(records: &[RunRecord]) -> Summary {
    let mut present: Vec<Algorithm> = records.iter().map(|r| r.algorithm).collect();
    present.sort();
    present.dedup();

    let algorithms = present
        .iter()
        .map(|&algorithm| {
            let rs: Vec<&RunRecord> = records.iter().filter(|r| r.algorithm == algorithm).collect();
            let makespans: Vec<f64> = rs.iter().map(|r| r.makespan_s).collect();
            let throughputs: Vec<f64> = rs.iter().map(|r| r.throughput_mbps).collect();
            let times: Vec<f64> = rs.iter().map(|r| r.compute_time_us).collect();
            AlgorithmSummary {
                algorithm,
                records: rs.len(),
                mean_makespan_s: mean(&makespans),
                median_makespan_s: median(&makespans),
                p95_makespan_s: percentile(&makespans, 0.95),
                mean_throughput_mbps: mean(&throughputs),
                mean_compute_time_us: mean(&times),
                median_compute_time_us: median(&times),
                optimal_count: rs.iter().filter(|r| r.optimal).count(),
            }
        })
        .collect();

    let pairs = [
        (Algorithm::Sp, Algorithm::Dva),
        (Algorithm::Md, Algorithm::Dva),
        (Algorithm::Dva, Algorithm::Op),
    ];
    let ratios = pairs
        .iter()
        .filter(|(a, b)| present.contains(a) && present.contains(b))
        .map(|&(a, b)| ratio(records, a, b))
        .collect();

    let mut instants: Vec<u64> = records.iter().map(|r| r.t_s.to_bits()).collect();
    instants.sort_unstable();
    instants.dedup();

    Summary { instants: instants.len(), algorithms, ratios }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} instants", self.instants)?;
        writeln!(
            f,
            "{:<5} {:>8} {:>14} {:>14} {:>14} {:>16} {:>16}",
            "algo", "records", "mean T (s)", "median T (s)", "p95 T (s)", "mean thr (MB/s)", "median cpu (us)"
        )?;
        for a in &self.algorithms {
            writeln!(
                f,
                "{:<5} {:>8} {:>14.6} {:>14.6} {:>14.6} {:>16.3} {:>16.1}",
                a.algorithm.as_str(),
                a.records,
                a.mean_makespan_s,
                a.median_makespan_s,
                a.p95_makespan_s,
                a.mean_throughput_mbps,
                a.median_compute_time_us
            )?;
        }
        for r in &self.ratios {
            match r.mean {
                Some(m) => writeln!(f, "mean {:<12} {:.4} over {} instants", r.label(), m, r.instants)?,
                None => writeln!(f, "mean {:<12} unavailable", r.label())?,
            }
        }
        Ok(())
    }
}
