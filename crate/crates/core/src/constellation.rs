//! Walker constellations on circular orbits.
//!
//! Inertial and Earth-fixed frames coincide at t = 0; afterwards the Earth
//! turns at [`EARTH_ROTATION_RAD_S`] and satellites advance at their mean
//! motion. No perturbations are modeled.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    geodetic_to_ecef, is_visible, EcefVector, GeodeticPoint, Instant, EARTH_RADIUS_KM,
};

/// Earth's gravitational parameter, km³/s².
pub const EARTH_MU_KM3_S2: f64 = 398_600.441_8;
/// Earth's sidereal rotation rate, rad/s.
pub const EARTH_ROTATION_RAD_S: f64 = 7.292_115_9e-5;

pub const DEFAULT_DURATION_STEP_S: f64 = 10.0;
pub const DEFAULT_DURATION_HORIZON_S: f64 = 3600.0;

fn default_raan_spread() -> f64 {
    360.0
}

/// Shape of a Walker constellation. Field names match the JSON config schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstellationConfig {
    pub name: String,
    pub orbit_planes: usize,
    pub sats_per_plane: usize,
    pub altitude_km: f64,
    pub inclination_deg: f64,
    /// Walker phasing factor F.
    pub phase_shift: usize,
    pub min_elevation_deg: f64,
    /// 360 for a delta pattern, 180 for a star pattern.
    #[serde(default = "default_raan_spread")]
    pub raan_spread_deg: f64,
}

impl ConstellationConfig {
    pub fn telesat_inclined() -> Self {
        Self {
            name: "Telesat-Inclined".into(),
            orbit_planes: 5,
            sats_per_plane: 10,
            altitude_km: 1200.0,
            inclination_deg: 34.7,
            phase_shift: 0,
            min_elevation_deg: 20.0,
            raan_spread_deg: 360.0,
        }
    }

    pub fn oneweb() -> Self {
        Self {
            name: "OneWeb".into(),
            orbit_planes: 18,
            sats_per_plane: 40,
            altitude_km: 1200.0,
            inclination_deg: 87.9,
            phase_shift: 0,
            min_elevation_deg: 55.0,
            raan_spread_deg: 360.0,
        }
    }

    pub fn starlink_shell1() -> Self {
        Self {
            name: "Starlink Shell-1".into(),
            orbit_planes: 66,
            sats_per_plane: 24,
            altitude_km: 550.0,
            inclination_deg: 53.0,
            phase_shift: 1,
            min_elevation_deg: 25.0,
            raan_spread_deg: 360.0,
        }
    }

    /// Looks up one of the bundled presets: `telesat`, `oneweb`, `starlink_shell1`.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "telesat" => Some(Self::telesat_inclined()),
            "oneweb" => Some(Self::oneweb()),
            "starlink_shell1" => Some(Self::starlink_shell1()),
            _ => None,
        }
    }

    pub const PRESET_NAMES: [&'static str; 3] = ["telesat", "oneweb", "starlink_shell1"];

    pub fn validate(&self) -> Result<()> {
        if self.orbit_planes == 0 {
            return Err(Error::invalid("orbit_planes", "must be positive"));
        }
        if self.sats_per_plane == 0 {
            return Err(Error::invalid("sats_per_plane", "must be positive"));
        }
        if !(self.altitude_km.is_finite() && self.altitude_km > 0.0) {
            return Err(Error::invalid("altitude_km", format!("{} must be > 0", self.altitude_km)));
        }
        if !(self.inclination_deg > 0.0 && self.inclination_deg < 180.0) {
            return Err(Error::invalid(
                "inclination_deg",
                format!("{} not in (0, 180)", self.inclination_deg),
            ));
        }
        if self.phase_shift >= self.orbit_planes {
            return Err(Error::invalid(
                "phase_shift",
                format!("{} must be < orbit_planes ({})", self.phase_shift, self.orbit_planes),
            ));
        }
        if !(self.min_elevation_deg >= 0.0 && self.min_elevation_deg < 90.0) {
            return Err(Error::invalid(
                "min_elevation_deg",
                format!("{} not in [0, 90)", self.min_elevation_deg),
            ));
        }
        if self.raan_spread_deg != 360.0 && self.raan_spread_deg != 180.0 {
            return Err(Error::invalid(
                "raan_spread_deg",
                format!("{} must be 360 or 180", self.raan_spread_deg),
            ));
        }
        Ok(())
    }

    pub fn total_satellites(&self) -> usize {
        self.orbit_planes * self.sats_per_plane
    }

    pub fn semi_major_axis_km(&self) -> f64 {
        EARTH_RADIUS_KM + self.altitude_km
    }

    /// Mean motion in rad/s.
    pub fn mean_motion_rad_s(&self) -> f64 {
        (EARTH_MU_KM3_S2 / self.semi_major_axis_km().powi(3)).sqrt()
    }

    pub fn orbital_period_s(&self) -> f64 {
        TAU / self.mean_motion_rad_s()
    }

    pub fn satellite(&self, plane: usize, slot: usize) -> Option<SatelliteId> {
        (plane < self.orbit_planes && slot < self.sats_per_plane).then(|| SatelliteId {
            plane,
            slot,
            flat_id: plane * self.sats_per_plane + slot,
        })
    }

    pub fn satellite_by_flat_id(&self, flat_id: usize) -> Option<SatelliteId> {
        self.satellite(flat_id / self.sats_per_plane, flat_id % self.sats_per_plane)
    }

    pub fn satellites(&self) -> impl Iterator<Item = SatelliteId> + '_ {
        (0..self.total_satellites()).filter_map(|f| self.satellite_by_flat_id(f))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SatelliteId {
    pub plane: usize,
    pub slot: usize,
    pub flat_id: usize,
}

/// A satellite at one instant: where it is and how much uplink it has left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SatelliteState {
    pub id: SatelliteId,
    pub position: EcefVector,
    pub capacity_mbps: f64,
}

/// Initial orbital placement of one satellite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitalPhase {
    pub id: SatelliteId,
    pub raan_deg: f64,
    /// Argument of latitude at epoch.
    pub arg_latitude_deg: f64,
}

/// Walker placement: plane RAANs are spread evenly over `raan_spread_deg`, slots
/// evenly around each plane, and plane `p` is phased by `p·F·360/T` degrees.
pub fn generate_walker(cfg: &ConstellationConfig) -> Vec<OrbitalPhase> {
    cfg.satellites().map(|id| phase_of(cfg, id)).collect()
}

fn phase_of(cfg: &ConstellationConfig, id: SatelliteId) -> OrbitalPhase {
    let planes = cfg.orbit_planes as f64;
    let per_plane = cfg.sats_per_plane as f64;
    OrbitalPhase {
        id,
        raan_deg: id.plane as f64 * cfg.raan_spread_deg / planes,
        arg_latitude_deg: id.slot as f64 * 360.0 / per_plane
            + id.plane as f64 * cfg.phase_shift as f64 * 360.0 / (planes * per_plane),
    }
}

/// Inertial position of a circular orbit given RAAN, inclination and argument of latitude.
fn inertial_position(a: f64, raan_rad: f64, incl_rad: f64, u_rad: f64) -> EcefVector {
    let (sin_o, cos_o) = raan_rad.sin_cos();
    let (sin_i, cos_i) = incl_rad.sin_cos();
    let (sin_u, cos_u) = u_rad.sin_cos();
    EcefVector::new(
        a * (cos_o * cos_u - sin_o * sin_u * cos_i),
        a * (sin_o * cos_u + cos_o * sin_u * cos_i),
        a * sin_u * sin_i,
    )
}

/// Earth-fixed position of satellite `id` at `t`.
pub fn propagate(cfg: &ConstellationConfig, id: SatelliteId, t: Instant) -> EcefVector {
    position_at_secs(cfg, id, t.secs())
}

fn position_at_secs(cfg: &ConstellationConfig, id: SatelliteId, secs: f64) -> EcefVector {
    let phase = phase_of(cfg, id);
    let u = phase.arg_latitude_deg.to_radians() + cfg.mean_motion_rad_s() * secs;
    inertial_position(
        cfg.semi_major_axis_km(),
        phase.raan_deg.to_radians(),
        cfg.inclination_deg.to_radians(),
        u,
    )
    .rotate_z(-EARTH_ROTATION_RAD_S * secs)
}

/// Positions of every satellite at `t`, indexed by flat id.
pub fn positions_at(cfg: &ConstellationConfig, t: Instant) -> Vec<EcefVector> {
    let a = cfg.semi_major_axis_km();
    let incl = cfg.inclination_deg.to_radians();
    let advance = cfg.mean_motion_rad_s() * t.secs();
    let earth = -EARTH_ROTATION_RAD_S * t.secs();
    generate_walker(cfg)
        .into_iter()
        .map(|p| {
            inertial_position(
                a,
                p.raan_deg.to_radians(),
                incl,
                p.arg_latitude_deg.to_radians() + advance,
            )
            .rotate_z(earth)
        })
        .collect()
}

/// Visibility test that treats a coincident satellite as not visible.
pub(crate) fn sees(ground: &EcefVector, sat: &EcefVector, min_elevation_deg: f64) -> bool {
    is_visible(ground, sat, min_elevation_deg).unwrap_or(false)
}

/// Satellites visible from `ground` at `t`, ordered by flat id.
pub fn visible_satellites(
    cfg: &ConstellationConfig,
    ground: &GeodeticPoint,
    t: Instant,
) -> Vec<SatelliteId> {
    let g = geodetic_to_ecef(ground);
    positions_at(cfg, t)
        .iter()
        .enumerate()
        .filter(|(_, pos)| sees(&g, pos, cfg.min_elevation_deg))
        .filter_map(|(flat, _)| cfg.satellite_by_flat_id(flat))
        .collect()
}

/// Remaining visibility of `id` from `ground`, quantized to `step_s`.
///
/// Returns the first `k·step_s ≤ horizon_s` at which the satellite is no
/// longer visible, or `horizon_s` when it stays visible throughout.
pub fn visibility_duration_s(
    cfg: &ConstellationConfig,
    id: SatelliteId,
    ground: &GeodeticPoint,
    t: Instant,
    step_s: f64,
    horizon_s: f64,
) -> Result<f64> {
    if !(step_s > 0.0 && step_s.is_finite()) {
        return Err(Error::invalid("step_s", format!("{step_s} must be > 0")));
    }
    if !(horizon_s >= step_s && horizon_s.is_finite()) {
        return Err(Error::invalid("horizon_s", format!("{horizon_s} must be >= step_s")));
    }
    let g = geodetic_to_ecef(ground);
    let visible_at = |secs: f64| sees(&g, &position_at_secs(cfg, id, secs), cfg.min_elevation_deg);
    if !visible_at(t.secs()) {
        return Err(Error::NotVisible { flat_id: id.flat_id, t_s: t.secs() });
    }
    let mut k = 1u64;
    loop {
        let dt = k as f64 * step_s;
        if dt > horizon_s {
            return Ok(horizon_s);
        }
        if !visible_at(t.secs() + dt) {
            return Ok(dt);
        }
        k += 1;
    }
}
