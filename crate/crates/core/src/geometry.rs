//! Spherical-Earth coordinate transforms and ground-to-satellite visibility.
//!
//! Angles cross the API in degrees; everything else is kilometers and seconds.

use std::ops::Sub;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean Earth radius used for every ground and orbit computation.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Line-of-sight vectors shorter than this are treated as coincident points.
const COINCIDENT_TOLERANCE_KM: f64 = 1e-12;

/// A point above the spherical Earth.
///
/// Latitude is kept in [-90, 90] and longitude is normalized to [-180, 180)
/// on construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGeodetic")]
pub struct GeodeticPoint {
    latitude_deg: f64,
    longitude_deg: f64,
    altitude_km: f64,
}

#[derive(Deserialize)]
struct RawGeodetic {
    latitude_deg: f64,
    longitude_deg: f64,
    #[serde(default)]
    altitude_km: f64,
}

impl TryFrom<RawGeodetic> for GeodeticPoint {
    type Error = Error;

    fn try_from(raw: RawGeodetic) -> Result<Self> {
        GeodeticPoint::new(raw.latitude_deg, raw.longitude_deg, raw.altitude_km)
    }
}

impl GeodeticPoint {
    pub fn new(latitude_deg: f64, longitude_deg: f64, altitude_km: f64) -> Result<Self> {
        if !latitude_deg.is_finite() || !(-90.0..=90.0).contains(&latitude_deg) {
            return Err(Error::invalid("latitude_deg", format!("{latitude_deg} not in [-90, 90]")));
        }
        if !longitude_deg.is_finite() {
            return Err(Error::invalid("longitude_deg", format!("{longitude_deg} is not finite")));
        }
        if !altitude_km.is_finite() || altitude_km < 0.0 {
            return Err(Error::invalid("altitude_km", format!("{altitude_km} must be >= 0")));
        }
        Ok(Self {
            latitude_deg,
            longitude_deg: normalize_longitude(longitude_deg),
            altitude_km,
        })
    }

    /// Sea-level point.
    pub fn surface(latitude_deg: f64, longitude_deg: f64) -> Result<Self> {
        Self::new(latitude_deg, longitude_deg, 0.0)
    }

    pub fn latitude_deg(&self) -> f64 {
        self.latitude_deg
    }

    pub fn longitude_deg(&self) -> f64 {
        self.longitude_deg
    }

    pub fn altitude_km(&self) -> f64 {
        self.altitude_km
    }

    pub fn to_ecef(&self) -> EcefVector {
        geodetic_to_ecef(self)
    }
}

fn normalize_longitude(lon: f64) -> f64 {
    let wrapped = (lon + 180.0).rem_euclid(360.0) - 180.0;
    // rem_euclid can round up to exactly 360 for tiny negative inputs
    if wrapped >= 180.0 {
        wrapped - 360.0
    } else {
        wrapped
    }
}

/// Earth-centered Earth-fixed Cartesian position in kilometers.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EcefVector {
    pub x_km: f64,
    pub y_km: f64,
    pub z_km: f64,
}

impl EcefVector {
    pub const fn new(x_km: f64, y_km: f64, z_km: f64) -> Self {
        Self { x_km, y_km, z_km }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x_km * other.x_km + self.y_km * other.y_km + self.z_km * other.z_km
    }

    pub fn cross(&self, other: &Self) -> Self {
        Self::new(
            self.y_km * other.z_km - self.z_km * other.y_km,
            self.z_km * other.x_km - self.x_km * other.z_km,
            self.x_km * other.y_km - self.y_km * other.x_km,
        )
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Rotation about the z axis by `angle_rad` (right-handed).
    pub fn rotate_z(&self, angle_rad: f64) -> Self {
        let (s, c) = angle_rad.sin_cos();
        Self::new(c * self.x_km - s * self.y_km, s * self.x_km + c * self.y_km, self.z_km)
    }
}

impl Sub for EcefVector {
    type Output = EcefVector;

    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x_km - rhs.x_km, self.y_km - rhs.y_km, self.z_km - rhs.z_km)
    }
}

/// Seconds since the scenario epoch.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Instant(f64);

impl Instant {
    pub const EPOCH: Instant = Instant(0.0);

    pub fn from_secs(t_s: f64) -> Result<Self> {
        if !t_s.is_finite() || t_s < 0.0 {
            return Err(Error::invalid("t_s", format!("{t_s} must be finite and >= 0")));
        }
        Ok(Self(t_s))
    }

    pub fn secs(&self) -> f64 {
        self.0
    }

    pub fn offset(&self, dt_s: f64) -> Result<Self> {
        Self::from_secs(self.0 + dt_s)
    }
}

impl TryFrom<f64> for Instant {
    type Error = Error;

    fn try_from(t_s: f64) -> Result<Self> {
        Self::from_secs(t_s)
    }
}

impl From<Instant> for f64 {
    fn from(t: Instant) -> f64 {
        t.0
    }
}

pub fn geodetic_to_ecef(p: &GeodeticPoint) -> EcefVector {
    let r = EARTH_RADIUS_KM + p.altitude_km;
    let (sin_lat, cos_lat) = p.latitude_deg.to_radians().sin_cos();
    let (sin_lon, cos_lon) = p.longitude_deg.to_radians().sin_cos();
    EcefVector::new(r * cos_lat * cos_lon, r * cos_lat * sin_lon, r * sin_lat)
}

/// Elevation of `sat` above the local horizon at `ground`, in degrees.
///
/// The local zenith is the radial direction of `ground`. Computed with
/// `atan2` so the value stays accurate near the zenith.
pub fn elevation_angle_deg(ground: &EcefVector, sat: &EcefVector) -> Result<f64> {
    let radius = ground.norm();
    if radius <= 0.0 {
        return Err(Error::DegenerateGeometry("ground point at Earth's center".into()));
    }
    let los = *sat - *ground;
    if los.norm() <= COINCIDENT_TOLERANCE_KM {
        return Err(Error::DegenerateGeometry("satellite coincides with ground point".into()));
    }
    let zenith = EcefVector::new(ground.x_km / radius, ground.y_km / radius, ground.z_km / radius);
    let up = zenith.dot(&los);
    let across = zenith.cross(&los).norm();
    Ok(up.atan2(across).to_degrees())
}

pub fn slant_range_km(ground: &EcefVector, sat: &EcefVector) -> f64 {
    (*sat - *ground).norm()
}

/// Inclusive at the threshold: a satellite exactly at `min_elevation_deg` is visible.
pub fn is_visible(ground: &EcefVector, sat: &EcefVector, min_elevation_deg: f64) -> Result<bool> {
    Ok(elevation_angle_deg(ground, sat)? >= min_elevation_deg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn ecef_axis_and_pole() {
        let p = geodetic_to_ecef(&GeodeticPoint::surface(0.0, 0.0).unwrap());
        assert_eq!(p, EcefVector::new(6371.0, 0.0, 0.0));

        let pole = geodetic_to_ecef(&GeodeticPoint::surface(90.0, 0.0).unwrap());
        assert!(close(pole.x_km, 0.0, 1e-9));
        assert!(close(pole.y_km, 0.0, 1e-9));
        assert_eq!(pole.z_km, 6371.0);
    }

    #[test]
    fn ecef_mid_latitude_with_altitude() {
        // r = 6921, cos45 = sin45 = sqrt(0.5): x = y = 6921 * 0.5, z = 6921 * sqrt(0.5)
        let p = geodetic_to_ecef(&GeodeticPoint::new(45.0, 45.0, 550.0).unwrap());
        assert!(close(p.x_km, 3460.5, 1e-9));
        assert!(close(p.y_km, 3460.5, 1e-9));
        assert!(close(p.z_km, 4893.886_032_592_095, 1e-9));
    }

    #[test]
    fn longitude_is_normalized() {
        assert_eq!(GeodeticPoint::surface(0.0, 180.0).unwrap().longitude_deg(), -180.0);
        assert_eq!(GeodeticPoint::surface(0.0, 190.0).unwrap().longitude_deg(), -170.0);
        assert_eq!(GeodeticPoint::surface(0.0, -540.0).unwrap().longitude_deg(), -180.0);
        assert!(GeodeticPoint::surface(91.0, 0.0).is_err());
        assert!(GeodeticPoint::new(0.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn elevation_zenith_and_below_horizon() {
        let g = EcefVector::new(6371.0, 0.0, 0.0);
        let zenith = EcefVector::new(6921.0, 0.0, 0.0);
        assert!(close(elevation_angle_deg(&g, &zenith).unwrap(), 90.0, 1e-12));

        // 90 - acos(-6371 / |los|), evaluated in a separate script
        let side = EcefVector::new(0.0, 6921.0, 0.0);
        let e = elevation_angle_deg(&g, &side).unwrap();
        assert!(close(e, -42.630_551_289_927_3, 1e-9), "{e}");
    }

    #[test]
    fn elevation_rejects_coincident_points() {
        let g = EcefVector::new(6371.0, 0.0, 0.0);
        assert!(matches!(elevation_angle_deg(&g, &g), Err(Error::DegenerateGeometry(_))));
        assert!(elevation_angle_deg(&EcefVector::default(), &g).is_err());
    }

    #[test]
    fn slant_ranges() {
        let g = EcefVector::new(6371.0, 0.0, 0.0);
        assert_eq!(slant_range_km(&g, &EcefVector::new(6921.0, 0.0, 0.0)), 550.0);
        assert_eq!(slant_range_km(&g, &g), 0.0);
        let d = slant_range_km(&g, &EcefVector::new(0.0, 6921.0, 0.0));
        assert!(close(d, 9406.906_080_109_442, 1e-9), "{d}");
    }

    /// Places a satellite at orbit radius `r` in the x-y plane so that its
    /// elevation from (R_E, 0, 0) is `target_deg`, by solving the triangle
    /// with the law of sines.
    fn sat_at_elevation(r: f64, target_deg: f64) -> EcefVector {
        let e = target_deg.to_radians();
        let nadir = (EARTH_RADIUS_KM * e.cos() / r).asin();
        let central = std::f64::consts::FRAC_PI_2 - e - nadir;
        EcefVector::new(r * central.cos(), r * central.sin(), 0.0)
    }

    #[test]
    fn visibility_threshold_is_inclusive() {
        let g = EcefVector::new(EARTH_RADIUS_KM, 0.0, 0.0);
        let zenith = EcefVector::new(6921.0, 0.0, 0.0);
        let antipode = EcefVector::new(-6921.0, 0.0, 0.0);
        assert!(is_visible(&g, &zenith, 25.0).unwrap());
        assert!(!is_visible(&g, &antipode, 25.0).unwrap());

        let boundary = sat_at_elevation(6921.0, 25.0);
        let e = elevation_angle_deg(&g, &boundary).unwrap();
        assert!(close(e, 25.0, 1e-9), "{e}");
        assert!(is_visible(&g, &boundary, e).unwrap());
        assert!(!is_visible(&g, &boundary, e + 1e-9).unwrap());
    }

    #[test]
    fn instant_rejects_negative() {
        assert!(Instant::from_secs(-1.0).is_err());
        assert!(Instant::from_secs(f64::NAN).is_err());
        assert_eq!(Instant::from_secs(3.5).unwrap().secs(), 3.5);
    }
}
