use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use leosel::harness::{self, ExperimentConfig};
use leosel::scenario::{self, ProblemInstance};
use leosel::selection::{self, Algorithm};
use leosel::Error;

#[derive(Parser)]
#[command(name = "leosel", version, about = "Access-satellite selection for edge clouds over LEO constellations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config (or replay a run_manifest.json).
    Run {
        config: PathBuf,
        /// Write outputs here instead of the configured output_dir.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Summarize an existing records.csv.
    Summarize {
        records: PathBuf,
        /// Print the summary as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Emit a bundled edge-site file.
    GenScenario {
        #[arg(long, value_enum)]
        preset: ScenarioPreset,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Solve a small instance JSON by exhaustive enumeration and compare every algorithm against it.
    Oracle { instance: PathBuf },
    /// Build the instance a config sees at one instant and print it as JSON.
    ExportInstance {
        config: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        t_s: f64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioPreset {
    #[value(name = "north-america-20")]
    NorthAmerica20,
}

fn write_or_print(text: &str, output: Option<&Path>) -> anyhow::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(config: &Path, output_dir: Option<PathBuf>) -> Result<(), Error> {
    let mut cfg: ExperimentConfig = harness::load_config(config)?;
    if let Some(dir) = output_dir {
        cfg.output_dir = dir;
    }
    let experiment = harness::run_experiment(&cfg)?;
    let summary = harness::summarize(&experiment.records);
    let written = harness::emit(&experiment.records, &summary, &cfg, &cfg.output_dir)?;
    print!("{summary}");
    if !experiment.skipped.is_empty() {
        println!("skipped {} infeasible instants", experiment.skipped.len());
    }
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn oracle(path: &Path) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let inst = ProblemInstance::from_json(&text)?;
    let truth = selection::exhaustive_optimum(&inst)?;
    let mut algorithms = Vec::new();
    for algorithm in Algorithm::ALL {
        match selection::solve(&inst, algorithm, None) {
            Ok(r) => algorithms.push(json!({
                "algorithm": algorithm,
                "makespan_s": r.makespan_s,
                "ratio_to_optimum": if truth.makespan_s > 0.0 { r.makespan_s / truth.makespan_s } else { 1.0 },
                "choice": r.assignment.choice,
                "optimal": r.optimal,
            })),
            Err(Error::MissingOrbitalContext(_)) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    let out = json!({
        "optimum": {
            "makespan_s": truth.makespan_s,
            "choice": truth.assignment.choice,
            "assignments_checked": truth.assignments_checked.to_string(),
        },
        "algorithms": algorithms,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn export_instance(config: &Path, t_s: f64, output: Option<&Path>) -> anyhow::Result<()> {
    let cfg = harness::load_config(config)?;
    let edges = scenario::load_edges(&cfg.edges_file)?;
    let t = leosel::geometry::Instant::from_secs(t_s)?;
    let inst = scenario::build_instance(&cfg.constellation, &edges, cfg.base_capacity_mbps, &cfg.traffic, t)?;
    write_or_print(&inst.to_json(), output)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result: anyhow::Result<()> = match cli.command {
        Command::Run { config, output_dir } => match run(&config, output_dir) {
            Ok(()) => Ok(()),
            Err(e) => {
                eprintln!("error: {e}");
                return if e.is_validation() { ExitCode::from(1) } else { ExitCode::from(2) };
            }
        },
        Command::Summarize { records, json } => harness::load_records(&records)
            .map_err(anyhow::Error::from)
            .and_then(|records| {
                let summary = harness::summarize(&records);
                if json {
                    println!("{}", serde_json::to_string_pretty(&summary)?);
                } else {
                    print!("{summary}");
                }
                Ok(())
            }),
        Command::GenScenario { preset: ScenarioPreset::NorthAmerica20, output } => {
            write_or_print(scenario::NORTH_AMERICA_20.trim_end(), output.as_deref())
        }
        Command::Oracle { instance } => oracle(&instance),
        Command::ExportInstance { config, t_s, output } => export_instance(&config, t_s, output.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let validation = e.downcast_ref::<Error>().is_some_and(Error::is_validation);
            ExitCode::from(if validation { 1 } else { 2 })
        }
    }
}
