//! Experiment orchestration: load a config, sweep sampled instants, run the
//! selection algorithms on identical instances, and persist the results.

mod config;
mod output;
mod run;
mod summary;

pub use config::{code_version, load_config, parse_config, ExperimentConfig, RunManifest, OUTPUT_DIR_ENV};
pub use output::{
    emit, format_sig9, load_records, read_records, write_records, CSV_HEADER, MANIFEST_FILE, RECORDS_FILE,
    SUMMARY_FILE,
};
pub use run::{run_experiment, run_instant, run_with_edges, timed_solve, Experiment, SkippedInstant, TIMING_REPETITIONS};
pub use summary::{mean, median, percentile, summarize, AlgorithmSummary, InstantRatio, RatioSummary, Summary};
