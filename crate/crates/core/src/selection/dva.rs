//! Data-volume-aware greedy selection.
//!
//! Edges are served largest data volume first. For each edge the visible
//! satellites are ranked by
//!
//! 1. highest bandwidth level `floor(residual / d_i)`,
//! 2. fewest potential connections (unassigned edges that can still see it),
//! 3. smallest projected completion `(load_j + d_i) / c_j`,
//! 4. lowest flat id,
//!
//! and the winner takes the edge. Its residual capacity drops by `d_i`
//! (clamped at zero) and every satellite the edge could see loses one
//! potential connection. Volumes are read as MB/s demands when forming levels.

use std::cmp::Ordering;

use super::{volume_order, Algorithm, Assignment, SolveReport};
use crate::error::{Error, Result};
use crate::scenario::ProblemInstance;

/// Number of whole `d_mb`-per-second quanta a satellite with `capacity_mbps` can carry.
pub fn bandwidth_level(capacity_mbps: f64, d_mb: f64) -> Result<u64> {
    if !(d_mb > 0.0) {
        return Err(Error::invalid("d_mb", format!("{d_mb} must be > 0")));
    }
    if !(capacity_mbps >= 0.0) {
        return Err(Error::invalid("capacity_mbps", format!("{capacity_mbps} must be >= 0")));
    }
    // saturating float-to-int cast
    Ok((capacity_mbps / d_mb).floor() as u64)
}

/// Bookkeeping carried between greedy steps.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyState {
    pub residual_mbps: Vec<f64>,
    pub potential_connections: Vec<usize>,
    pub load_mb: Vec<f64>,
}

impl GreedyState {
    fn new(inst: &ProblemInstance, pending: &[usize]) -> Self {
        let mut potential_connections = vec![0; inst.n()];
        for &i in pending {
            for (j, v) in inst.visibility[i].iter().enumerate() {
                if *v {
                    potential_connections[j] += 1;
                }
            }
        }
        Self {
            residual_mbps: inst.satellites.iter().map(|s| s.capacity_mbps).collect(),
            potential_connections,
            load_mb: vec![0.0; inst.n()],
        }
    }
}

struct Candidate {
    sat: usize,
    level: u64,
    potential: usize,
    projected_s: f64,
    flat_id: usize,
}

impl Candidate {
    /// `Less` means `self` is preferred.
    fn rank(&self, other: &Self) -> Ordering {
        other
            .level
            .cmp(&self.level)
            .then(self.potential.cmp(&other.potential))
            .then(self.projected_s.total_cmp(&other.projected_s))
            .then(self.flat_id.cmp(&other.flat_id))
    }
}

pub fn dva_select(inst: &ProblemInstance) -> Result<SolveReport> {
    dva_select_traced(inst, |_, _, _| {})
}

/// [`dva_select`] with `observe(state, edge, sat)` called after every assignment.
pub fn dva_select_traced<F>(inst: &ProblemInstance, mut observe: F) -> Result<SolveReport>
where
    F: FnMut(&GreedyState, usize, usize),
{
    let started = std::time::Instant::now();
    inst.ensure_feasible()?;
    let adjacency = inst.adjacency();
    let order = volume_order(inst);
    let mut state = GreedyState::new(inst, &order);
    let mut assignment = Assignment::unassigned(Algorithm::Dva, inst.m());
    let mut examinations = 0u64;

    for &i in &order {
        let d = inst.edges[i].data_volume_mb;
        let mut best: Option<Candidate> = None;
        for &j in &adjacency[i] {
            examinations += 1;
            let capacity = inst.satellites[j].capacity_mbps;
            let candidate = Candidate {
                sat: j,
                level: bandwidth_level(state.residual_mbps[j], d)?,
                potential: state.potential_connections[j],
                projected_s: if capacity > 0.0 { (state.load_mb[j] + d) / capacity } else { f64::INFINITY },
                flat_id: inst.satellites[j].id.flat_id,
            };
            if best.as_ref().is_none_or(|b| candidate.rank(b) == Ordering::Less) {
                best = Some(candidate);
            }
        }
        let chosen = best.expect("feasible edge has a candidate").sat;

        assignment.choice[i] = Some(chosen);
        state.residual_mbps[chosen] = (state.residual_mbps[chosen] - d).max(0.0);
        state.load_mb[chosen] += d;
        for &j in &adjacency[i] {
            examinations += 1;
            state.potential_connections[j] -= 1;
        }
        observe(&state, i, chosen);
    }

    let mut report = SolveReport::finish(inst, assignment, started)?;
    report.examinations = examinations;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selection::fixtures::two_by_two;

    #[test]
    fn levels() {
        assert_eq!(bandwidth_level(500.0, 50.0).unwrap(), 10);
        assert_eq!(bandwidth_level(49.9, 50.0).unwrap(), 0);
        assert_eq!(bandwidth_level(125.0, 50.0).unwrap(), 2);
        assert_eq!(bandwidth_level(0.0, 50.0).unwrap(), 0);
        assert!(bandwidth_level(10.0, 0.0).is_err());
        assert!(bandwidth_level(10.0, -1.0).is_err());
    }

    #[test]
    fn worked_two_by_two() {
        // e1 (100 MB): levels {2, 1} -> s1. e2 (50 MB): levels {2, 2}, one
        // potential connection each, projected {0.75, 0.5} -> s2.
        let report = dva_select(&two_by_two()).unwrap();
        assert_eq!(report.assignment.choice, vec![Some(0), Some(1)]);
        assert_eq!(report.makespan_s, 0.5);
        assert!(!report.optimal);
        assert_eq!(report.examinations, 8);
    }

    #[test]
    fn forced_choices() {
        let single = ProblemInstance::from_parts(&[30.0], &[0.0, 120.0], vec![vec![false, true]]).unwrap();
        let r = dva_select(&single).unwrap();
        assert_eq!(r.assignment.choice, vec![Some(1)]);
        assert_eq!(r.makespan_s, 0.25);

        // the larger edge would prefer s2 by level but can only see s1
        let disjoint = ProblemInstance::from_parts(
            &[80.0, 10.0],
            &[100.0, 500.0],
            vec![vec![true, false], vec![false, true]],
        )
        .unwrap();
        let r = dva_select(&disjoint).unwrap();
        assert_eq!(r.assignment.choice, vec![Some(0), Some(1)]);
    }

    #[test]
    fn fewest_potential_connections_breaks_level_ties() {
        // e1 sees both satellites with equal level; s1 is also wanted by e2.
        let inst = ProblemInstance::from_parts(
            &[10.0, 5.0],
            &[100.0, 100.0],
            vec![vec![true, true], vec![true, false]],
        )
        .unwrap();
        let r = dva_select(&inst).unwrap();
        assert_eq!(r.assignment.choice, vec![Some(1), Some(0)]);
    }

    #[test]
    fn oversubscription_clamps_residual() {
        let inst = ProblemInstance::from_parts(&[300.0, 300.0], &[200.0], vec![vec![true]; 2]).unwrap();
        let mut residuals = Vec::new();
        let r = dva_select_traced(&inst, |s, _, _| residuals.push(s.residual_mbps[0])).unwrap();
        assert_eq!(residuals, vec![0.0, 0.0]);
        assert_eq!(r.makespan_s, 3.0);
    }

    #[test]
    fn zero_volume_edges_are_skipped() {
        let inst = ProblemInstance::from_parts(&[0.0, 10.0], &[100.0], vec![vec![false], vec![true]]).unwrap();
        let r = dva_select(&inst).unwrap();
        assert_eq!(r.assignment.choice, vec![None, Some(0)]);
    }

    #[test]
    fn infeasible_is_an_error() {
        let inst = ProblemInstance::from_parts(&[10.0], &[100.0], vec![vec![false]]).unwrap();
        assert!(matches!(dva_select(&inst), Err(Error::Infeasible { edge: 0 })));
    }
}
