//! Monte-Carlo fitting of the statistical channel model.

use super::raytrace::{trace_path_loss, RayTraceConfig};
use super::terrain::TerrainGrid;
use super::ChannelStats;
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// RNG for one (distance, trial) pair; stable under any parallel schedule.
pub(crate) fn trial_rng(seed: u64, lane: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(splitmix64(seed ^ lane.wrapping_mul(0xa076_1d64_78bd_642f)) ^ trial))
}

/// Fits per-distance LoS-conditioned loss moments and LoS probability by
/// sampling random endpoint pairs at each distance. Deterministic for a
/// fixed seed regardless of thread count.
pub fn fit_channel_stats(
    grid: &TerrainGrid,
    cfg: &RayTraceConfig,
    distance_grid_m: &[f64],
) -> Result<ChannelStats> {
    cfg.validate()?;
    if distance_grid_m.is_empty() {
        return Err(Error::InvalidParameter("distance grid is empty".into()));
    }
    let mut dists = distance_grid_m.to_vec();
    dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if dists.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("distance grid must be strictly increasing".into()));
    }
    let max_span = grid.width_m().hypot(grid.height_m());
    if *dists.last().unwrap() >= max_span {
        return Err(Error::InvalidParameter(format!(
            "distance {} m exceeds grid span {} m",
            dists.last().unwrap(),
            max_span
        )));
    }

    let per_distance: Vec<(Option<f64>, Option<f64>, f64)> = dists
        .par_iter()
        .enumerate()
        .map(|(di, &d)| sample_distance(grid, cfg, d, di as u64))
        .collect();

    let mut stats = ChannelStats {
        distances_m: dists,
        mu_db: Vec::new(),
        sigma_db: Vec::new(),
        p_los: Vec::new(),
    };
    for (mu, sigma, p_los) in per_distance {
        stats.mu_db.push(mu);
        stats.sigma_db.push(sigma);
        stats.p_los.push(p_los);
    }
    Ok(stats)
}

fn sample_distance(
    grid: &TerrainGrid,
    cfg: &RayTraceConfig,
    d: f64,
    lane: u64,
) -> (Option<f64>, Option<f64>, f64) {
    let (x0, y0) = grid.origin;
    let (w, h) = (grid.width_m(), grid.height_m());
    let mut losses = Vec::new();
    for trial in 0..cfg.n_trials as u64 {
        let mut rng = trial_rng(cfg.rng_seed, lane, trial);
        // Rejection-sample an endpoint pair at separation d inside the grid.
        let (a, b) = loop {
            let a = (x0 + rng.gen::<f64>() * w, y0 + rng.gen::<f64>() * h);
            let phi = rng.gen::<f64>() * 2.0 * core::f64::consts::PI;
            let b = (a.0 + d * phi.cos(), a.1 + d * phi.sin());
            if grid.contains(b.0, b.1) {
                break (a, b);
            }
        };
        let (loss, los) = trace_path_loss(grid, cfg, a, b).expect("endpoints are inside the grid");
        if los {
            losses.push(loss);
        }
    }
    let p_los = losses.len() as f64 / cfg.n_trials as f64;
    if losses.is_empty() {
        return (None, None, 0.0);
    }
    let n = losses.len() as f64;
    let mu = losses.iter().sum::<f64>() / n;
    let var = losses.iter().map(|l| (l - mu) * (l - mu)).sum::<f64>() / n;
    (Some(mu), Some(var.sqrt()), p_los)
}
