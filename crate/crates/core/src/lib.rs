//! Access-satellite selection for geo-distributed edge clouds uploading to a
//! core cloud over a LEO constellation.
//!
//! The crate is layered bottom-up:
//!
//! * [`geometry`]: spherical-Earth frames, elevation and slant range.
//! * [`constellation`]: Walker constellations on circular orbits, visibility
//!   sets and remaining visibility time.
//! * [`scenario`]: edge sites, background traffic and the per-instant
//!   edge/satellite bipartite [`scenario::ProblemInstance`].
//! * [`selection`]: the data-volume-aware greedy (DVA), the nearest-satellite
//!   (SP) and longest-visibility (MD) baselines, and an exact branch-and-bound
//!   makespan solver (OP).
//! * [`metrics`]: makespan, throughput and assignment validation.
//! * [`harness`]: JSON configs, time sweeps, CSV/JSON outputs and summaries.

pub mod constellation;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod metrics;
pub mod scenario;
pub mod selection;

pub use error::{Error, Result};
