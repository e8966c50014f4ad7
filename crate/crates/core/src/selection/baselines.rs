//! Position-only baselines: each edge decides on its own, ignoring data
//! volume and capacity. Ties go to the lowest flat id.

use super::{Algorithm, Assignment, SolveReport};
use crate::constellation::{visibility_duration_s, DEFAULT_DURATION_HORIZON_S, DEFAULT_DURATION_STEP_S};
use crate::error::{Error, Result};
use crate::geometry::{geodetic_to_ecef, slant_range_km};
use crate::scenario::ProblemInstance;

/// Per-edge argmin of `score` over visible satellites; `score` lower is better.
fn pick_each<F>(inst: &ProblemInstance, algorithm: Algorithm, mut score: F) -> Result<Assignment>
where
    F: FnMut(usize, usize) -> Result<f64>,
{
    let mut assignment = Assignment::unassigned(algorithm, inst.m());
    for i in 0..inst.m() {
        if inst.edges[i].data_volume_mb <= 0.0 {
            continue;
        }
        let mut best: Option<(f64, usize, usize)> = None;
        for j in inst.candidates(i) {
            let s = score(i, j)?;
            let flat = inst.satellites[j].id.flat_id;
            let better = match best {
                None => true,
                Some((bs, bflat, _)) => s < bs || (s == bs && flat < bflat),
            };
            if better {
                best = Some((s, flat, j));
            }
        }
        assignment.choice[i] = best.map(|(_, _, j)| j);
    }
    Ok(assignment)
}

/// Shortest slant range.
pub fn sp_select(inst: &ProblemInstance) -> Result<SolveReport> {
    let started = std::time::Instant::now();
    inst.ensure_feasible()?;
    let grounds: Vec<_> = inst.edges.iter().map(|e| geodetic_to_ecef(&e.location)).collect();
    let assignment = pick_each(inst, Algorithm::Sp, |i, j| {
        Ok(slant_range_km(&grounds[i], &inst.satellites[j].position))
    })?;
    SolveReport::finish(inst, assignment, started)
}

/// Longest remaining visibility from the instance time, 10 s steps over a one-hour horizon.
pub fn md_select(inst: &ProblemInstance) -> Result<SolveReport> {
    let started = std::time::Instant::now();
    inst.ensure_feasible()?;
    let cfg = inst.constellation.as_ref().ok_or(Error::MissingOrbitalContext("MD"))?;
    let assignment = pick_each(inst, Algorithm::Md, |i, j| {
        let remaining = visibility_duration_s(
            cfg,
            inst.satellites[j].id,
            &inst.edges[i].location,
            inst.t,
            DEFAULT_DURATION_STEP_S,
            DEFAULT_DURATION_HORIZON_S,
        )?;
        Ok(-remaining)
    })?;
    SolveReport::finish(inst, assignment, started)
}
