//! Plain enumeration of every feasible assignment, for cross-checking the
//! branch-and-bound solver on tiny instances.

use serde::Serialize;

use super::{Algorithm, Assignment};
use crate::error::{Error, Result};
use crate::metrics;
use crate::scenario::ProblemInstance;

/// Largest assignment space [`exhaustive_optimum`] will walk.
pub const ENUMERATION_LIMIT: u128 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnumerationResult {
    pub makespan_s: f64,
    /// First minimizer in odometer order (edge 0 varies slowest).
    pub assignment: Assignment,
    pub assignments_checked: u128,
}

pub fn exhaustive_optimum(inst: &ProblemInstance) -> Result<EnumerationResult> {
    inst.ensure_feasible()?;
    let active: Vec<usize> = (0..inst.m()).filter(|&i| inst.edges[i].data_volume_mb > 0.0).collect();
    let options: Vec<Vec<usize>> = active.iter().map(|&i| inst.candidates(i)).collect();
    let space = options.iter().try_fold(1u128, |acc, o| acc.checked_mul(o.len() as u128));
    match space {
        Some(s) if s <= ENUMERATION_LIMIT => {}
        Some(s) => return Err(Error::TooLarge(s)),
        None => return Err(Error::TooLarge(u128::MAX)),
    }

    let mut digits = vec![0usize; active.len()];
    let mut current = Assignment::unassigned(Algorithm::Op, inst.m());
    let mut best: Option<(f64, Assignment)> = None;
    let mut checked = 0u128;
    loop {
        for (k, &i) in active.iter().enumerate() {
            current.choice[i] = Some(options[k][digits[k]]);
        }
        let t = metrics::makespan_s(inst, &current)?;
        checked += 1;
        if best.as_ref().is_none_or(|(bt, _)| t < *bt) {
            best = Some((t, current.clone()));
        }

        // advance the odometer, last edge fastest
        let mut k = active.len();
        loop {
            if k == 0 {
                let (makespan_s, assignment) = best.expect("at least one assignment");
                return Ok(EnumerationResult { makespan_s, assignment, assignments_checked: checked });
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < options[k].len() {
                break;
            }
            digits[k] = 0;
        }
    }
}
