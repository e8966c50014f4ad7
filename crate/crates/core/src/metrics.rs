//! Evaluation quantities for an assignment: makespan, throughput and
//! constraint checks.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Instant;
use crate::scenario::ProblemInstance;
use crate::selection::{Algorithm, Assignment};

/// One algorithm's result at one sampled instant.
///
/// `throughput_mbps` is total uploaded data divided by the makespan, so
/// `throughput_mbps * makespan_s` recovers the total volume.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub t_s: f64,
    pub algorithm: Algorithm,
    pub makespan_s: f64,
    pub throughput_mbps: f64,
    pub compute_time_us: f64,
    /// Only meaningful for OP.
    pub optimal: bool,
    pub m: usize,
    pub n: usize,
}

impl RunRecord {
    pub fn instant(&self) -> Instant {
        Instant::from_secs(self.t_s).unwrap_or_default()
    }
}

/// Per-satellite assigned load in MB, summed in edge order.
pub fn satellite_loads(inst: &ProblemInstance, a: &Assignment) -> Result<Vec<f64>> {
    if a.choice.len() != inst.m() {
        return Err(Error::Mismatch(format!("{} choices for {} edges", a.choice.len(), inst.m())));
    }
    let mut load = vec![0.0; inst.n()];
    for (i, choice) in a.choice.iter().enumerate() {
        if let Some(j) = *choice {
            let slot = load
                .get_mut(j)
                .ok_or_else(|| Error::Mismatch(format!("edge {i} chose satellite {j} of {}", inst.n())))?;
            *slot += inst.edges[i].data_volume_mb;
        }
    }
    Ok(load)
}

/// Access-network transmission duration: the slowest satellite's load over capacity.
pub fn makespan_s(inst: &ProblemInstance, a: &Assignment) -> Result<f64> {
    let load = satellite_loads(inst, a)?;
    let mut worst = 0.0f64;
    for (j, &l) in load.iter().enumerate() {
        if l <= 0.0 {
            continue;
        }
        let c = inst.satellites[j].capacity_mbps;
        if c <= 0.0 {
            return Err(Error::ZeroCapacityLoad { sat: j, load_mb: l });
        }
        worst = worst.max(l / c);
    }
    Ok(worst)
}

pub fn throughput_mbps(inst: &ProblemInstance, a: &Assignment) -> Result<f64> {
    let total = inst.total_data_mb();
    let t = makespan_s(inst, a)?;
    if total <= 0.0 || t <= 0.0 {
        return Err(Error::NoData);
    }
    Ok(total / t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Constraint {
    /// A chosen satellite must be visible from the edge.
    Visibility,
    /// Every edge with data has exactly one satellite.
    SingleSatellite,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub edge: usize,
    pub constraint: Constraint,
    pub satellite: Option<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.constraint, self.satellite) {
            (Constraint::Visibility, Some(j)) => write!(f, "edge {} chose satellite {j}, which it cannot see", self.edge),
            (Constraint::Visibility, None) => write!(f, "edge {} chose an unknown satellite", self.edge),
            (Constraint::SingleSatellite, _) => write!(f, "edge {} has data but no satellite", self.edge),
        }
    }
}

/// Every broken constraint; an empty list means the assignment is valid.
pub fn validate_assignment(inst: &ProblemInstance, a: &Assignment) -> Vec<Violation> {
    let mut violations = Vec::new();
    for i in 0..inst.m() {
        let choice = a.choice.get(i).copied().flatten();
        match choice {
            Some(j) if j >= inst.n() || !inst.visible(i, j) => violations.push(Violation {
                edge: i,
                constraint: Constraint::Visibility,
                satellite: Some(j),
            }),
            None if inst.edges[i].data_volume_mb > 0.0 => violations.push(Violation {
                edge: i,
                constraint: Constraint::SingleSatellite,
                satellite: None,
            }),
            _ => {}
        }
    }
    violations
}
