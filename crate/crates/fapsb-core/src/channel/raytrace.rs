//! Deterministic path-loss trace over a terrain profile: free space plus a
//! two-ray ground-reflection correction and atmospheric absorption, with
//! binary line-of-sight blockage.

use super::terrain::TerrainGrid;
use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone)]
pub struct RayTraceConfig {
    pub antenna_height_m: f64,
    pub atmos_absorption_db_per_km: f64,
    pub carrier_freq_hz: f64,
    pub ground_permittivity: f64,
    pub n_trials: u32,
    pub rng_seed: u64,
}

impl RayTraceConfig {
    pub fn validate(&self) -> Result<()> {
        if self.antenna_height_m <= 0.0 {
            return Err(Error::InvalidParameter("antenna height must be positive".into()));
        }
        if self.atmos_absorption_db_per_km < 0.0 {
            return Err(Error::InvalidParameter("absorption must be non-negative".into()));
        }
        if self.n_trials == 0 {
            return Err(Error::InvalidParameter("n_trials must be at least 1".into()));
        }
        Ok(())
    }

    pub fn default_80211ad() -> Self {
        Self {
            antenna_height_m: 1.0,
            atmos_absorption_db_per_km: crate::constants::AD_ATMOS_ABSORPTION_DB_PER_KM,
            carrier_freq_hz: crate::constants::AD_CARRIER_HZ,
            ground_permittivity: 15.0,
            n_trials: 10_000,
            rng_seed: 0,
        }
    }

    pub fn default_80211ac() -> Self {
        Self {
            carrier_freq_hz: crate::constants::AC_CARRIER_HZ,
            atmos_absorption_db_per_km: crate::constants::AC_ATMOS_ABSORPTION_DB_PER_KM,
            ..Self::default_80211ad()
        }
    }
}

/// Path loss in dB between antenna tips at `a` and `b`, and whether the
/// direct ray clears the terrain. Loss is always the LoS-conditioned value;
/// blockage is reported separately.
pub fn trace_path_loss(
    grid: &TerrainGrid,
    cfg: &RayTraceConfig,
    a: (f64, f64),
    b: (f64, f64),
) -> Result<(f64, bool)> {
    cfg.validate()?;
    if a == b {
        return Err(Error::InvalidParameter("endpoints coincide".into()));
    }
    for p in [a, b] {
        if !grid.contains(p.0, p.1) {
            return Err(Error::OutOfBounds { x: p.0, y: p.1 });
        }
    }

    let za = grid.elevation_at(a.0, a.1)? + cfg.antenna_height_m;
    let zb = grid.elevation_at(b.0, b.1)? + cfg.antenna_height_m;
    let d_horiz = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();

    let los = line_of_sight(grid, a, za, b, zb, d_horiz)?;

    // Effective antenna heights above the reflecting plane, taken at the
    // path midpoint.
    let mid = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
    let z_ref = grid.elevation_at(mid.0, mid.1)?;
    let h1 = (za - z_ref).max(0.01);
    let h2 = (zb - z_ref).max(0.01);

    let loss_db = two_ray_loss_db(
        d_horiz,
        h1,
        h2,
        cfg.carrier_freq_hz,
        cfg.ground_permittivity,
    ) + cfg.atmos_absorption_db_per_km * d_horiz / 1000.0;

    Ok((loss_db, los))
}

/// Coherent sum of the direct and ground-reflected rays, horizontal
/// polarization. Reduces to free space when the reflected ray is removed.
fn two_ray_loss_db(d: f64, h1: f64, h2: f64, freq_hz: f64, permittivity: f64) -> f64 {
    let lambda = SPEED_OF_LIGHT / freq_hz;
    let k = 2.0 * core::f64::consts::PI / lambda;
    let d_dir = (d * d + (h1 - h2) * (h1 - h2)).sqrt();
    let d_ref = (d * d + (h1 + h2) * (h1 + h2)).sqrt();

    let sin_theta = (h1 + h2) / d_ref;
    let cos2 = 1.0 - sin_theta * sin_theta;
    let root = (permittivity - cos2).sqrt();
    let gamma = (sin_theta - root) / (sin_theta + root);

    // Complex field sum e^{-jkd1}/d1 + Gamma e^{-jkd2}/d2.
    let (re1, im1) = ((-(k * d_dir)).cos() / d_dir, (-(k * d_dir)).sin() / d_dir);
    let (re2, im2) = (
        gamma * (-(k * d_ref)).cos() / d_ref,
        gamma * (-(k * d_ref)).sin() / d_ref,
    );
    let mag = ((re1 + re2).powi(2) + (im1 + im2).powi(2)).sqrt();

    let path_gain = (lambda / (4.0 * core::f64::consts::PI)) * mag;
    -20.0 * path_gain.log10()
}

/// True when the straight segment between antenna tips clears the
/// (bilinearly interpolated) terrain at every interior sample.
fn line_of_sight(
    grid: &TerrainGrid,
    a: (f64, f64),
    za: f64,
    b: (f64, f64),
    zb: f64,
    d_horiz: f64,
) -> Result<bool> {
    let steps = ((d_horiz / (grid.cell_size_m / 2.0)).ceil() as usize).max(2);
    for i in 1..steps {
        let t = i as f64 / steps as f64;
        let x = a.0 + t * (b.0 - a.0);
        let y = a.1 + t * (b.1 - a.1);
        let ray_z = za + t * (zb - za);
        if grid.elevation_at(x, y)? > ray_z {
            return Ok(false);
        }
    }
    Ok(true)
}
