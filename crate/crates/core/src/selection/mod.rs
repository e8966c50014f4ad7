//! Access-satellite selection algorithms over a [`ProblemInstance`].
//!
//! * [`dva_select`]: data-volume-aware greedy.
//! * [`sp_select`]: every edge takes its nearest visible satellite.
//! * [`md_select`]: every edge takes the satellite that stays visible longest.
//! * [`op_select_exact`]: branch-and-bound minimum makespan.
//!
//! All of them are deterministic functions of the instance.

mod baselines;
mod dva;
mod enumerate;
mod exact;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

pub use baselines::{md_select, sp_select};
pub use dva::{bandwidth_level, dva_select, dva_select_traced, GreedyState};
pub use enumerate::{exhaustive_optimum, EnumerationResult, ENUMERATION_LIMIT};
pub use exact::op_select_exact;

use crate::error::{Error, Result};
use crate::metrics;
use crate::scenario::ProblemInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "DVA")]
    Dva,
    #[serde(rename = "SP")]
    Sp,
    #[serde(rename = "MD")]
    Md,
    #[serde(rename = "OP")]
    Op,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Dva, Algorithm::Sp, Algorithm::Md, Algorithm::Op];

    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Dva => "DVA",
            Algorithm::Sp => "SP",
            Algorithm::Md => "MD",
            Algorithm::Op => "OP",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid("algorithm", format!("unknown algorithm {s:?}")))
    }
}

/// Chosen satellite per edge: `choice[i] = Some(j)` selects `satellites[j]`
/// for `edges[i]`. Edges with no data are left as `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub algorithm: Algorithm,
    pub choice: Vec<Option<usize>>,
}

impl Assignment {
    pub fn unassigned(algorithm: Algorithm, m: usize) -> Self {
        Self { algorithm, choice: vec![None; m] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub assignment: Assignment,
    pub makespan_s: f64,
    /// Set only by the exact solver when its search tree was exhausted.
    pub optimal: bool,
    pub nodes_explored: u64,
    /// Candidate (edge, satellite) pairs inspected; instrumented for DVA.
    pub examinations: u64,
    pub compute_time_us: f64,
}

impl SolveReport {
    pub(crate) fn finish(
        inst: &ProblemInstance,
        assignment: Assignment,
        started: std::time::Instant,
    ) -> Result<Self> {
        let compute_time_us = started.elapsed().as_secs_f64() * 1e6;
        let makespan_s = metrics::makespan_s(inst, &assignment)?;
        Ok(Self {
            assignment,
            makespan_s,
            optimal: false,
            nodes_explored: 0,
            examinations: 0,
            compute_time_us,
        })
    }
}

/// Runs `algorithm` on `inst`; `op_budget` bounds the exact solver only.
pub fn solve(inst: &ProblemInstance, algorithm: Algorithm, op_budget: Option<Duration>) -> Result<SolveReport> {
    match algorithm {
        Algorithm::Dva => dva_select(inst),
        Algorithm::Sp => sp_select(inst),
        Algorithm::Md => md_select(inst),
        Algorithm::Op => op_select_exact(inst, op_budget),
    }
}

/// Edges that take part in assignment (positive data volume), in the
/// greedy processing order: data volume descending, then edge index.
pub(crate) fn volume_order(inst: &ProblemInstance) -> Vec<usize> {
    let mut order: Vec<usize> = (0..inst.m()).filter(|&i| inst.edges[i].data_volume_mb > 0.0).collect();
    order.sort_by(|&a, &b| {
        inst.edges[b]
            .data_volume_mb
            .total_cmp(&inst.edges[a].data_volume_mb)
            .then(a.cmp(&b))
    });
    order
}

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::scenario::ProblemInstance;

    /// d = [100, 50] MB, c = [200, 100] MB/s, full visibility.
    pub fn two_by_two() -> ProblemInstance {
        ProblemInstance::from_parts(&[100.0, 50.0], &[200.0, 100.0], vec![vec![true; 2]; 2]).unwrap()
    }
}
