//! Statistical path-loss and LoS channel model: terrain, ray tracing,
//! Monte-Carlo moment fitting, outage probability, and interference
//! combining.

mod raytrace;
mod stats;
mod terrain;

pub use raytrace::{trace_path_loss, RayTraceConfig, SPEED_OF_LIGHT};
pub use stats::fit_channel_stats;
pub use terrain::{generate_terrain, TerrainGrid};

use crate::dbmath::{q_function, LN10_OVER_10};
use crate::error::{Error, Result};
use crate::mcs::McsTable;
use std::fmt::Write as _;

/// Fitted statistical channel: LoS-conditioned loss moments and LoS
/// probability sampled on a distance grid. Moments are absent at distances
/// where no LoS trial occurred; such sub-links need relays.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelStats {
    pub distances_m: Vec<f64>,
    pub mu_db: Vec<Option<f64>>,
    pub sigma_db: Vec<Option<f64>>,
    pub p_los: Vec<f64>,
}

impl ChannelStats {
    /// Free-space-like reference stats on an ideal flat plane, useful for
    /// analytical checks; `sigma` is zero and `p_los` is one everywhere.
    pub fn from_closed_form(
        grid: &TerrainGrid,
        cfg: &RayTraceConfig,
        distances_m: &[f64],
    ) -> Result<Self> {
        let y = grid.origin.1 + grid.height_m() / 2.0;
        let x0 = grid.origin.0;
        let mut out = ChannelStats {
            distances_m: distances_m.to_vec(),
            mu_db: Vec::new(),
            sigma_db: Vec::new(),
            p_los: Vec::new(),
        };
        for &d in distances_m {
            let (loss, _) = trace_path_loss(grid, cfg, (x0, y), (x0 + d, y))?;
            out.mu_db.push(Some(loss));
            out.sigma_db.push(Some(0.0));
            out.p_los.push(1.0);
        }
        Ok(out)
    }

    fn interp(&self, values: &[Option<f64>], d: f64) -> Option<f64> {
        let ds = &self.distances_m;
        if d <= ds[0] {
            return values[0];
        }
        if d >= *ds.last().unwrap() {
            return *values.last().unwrap();
        }
        let i = ds.partition_point(|&x| x < d);
        let (d0, d1) = (ds[i - 1], ds[i]);
        let t = (d - d0) / (d1 - d0);
        match (values[i - 1], values[i]) {
            (Some(a), Some(b)) => Some(a + t * (b - a)),
            _ => None,
        }
    }

    /// Mean LoS path loss at distance `d`, linear interpolation with clamped
    /// extrapolation. `None` where the model has no LoS data.
    pub fn mu_at(&self, d: f64) -> Option<f64> {
        self.interp(&self.mu_db, d)
    }

    pub fn sigma_at(&self, d: f64) -> Option<f64> {
        self.interp(&self.sigma_db, d)
    }

    pub fn p_los_at(&self, d: f64) -> f64 {
        let wrapped: Vec<Option<f64>> = self.p_los.iter().map(|&p| Some(p)).collect();
        self.interp(&wrapped, d).unwrap_or(0.0)
    }

    /// CSV columns: d_m, mu_db, sigma_db, p_los. Absent moments serialize
    /// as `nan`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("d_m,mu_db,sigma_db,p_los\n");
        for i in 0..self.distances_m.len() {
            let fmt = |v: Option<f64>| v.map_or("nan".to_string(), |x| format!("{x}"));
            writeln!(
                out,
                "{},{},{},{}",
                self.distances_m[i],
                fmt(self.mu_db[i]),
                fmt(self.sigma_db[i]),
                self.p_los[i]
            )
            .unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut stats = ChannelStats {
            distances_m: Vec::new(),
            mu_db: Vec::new(),
            sigma_db: Vec::new(),
            p_los: Vec::new(),
        };
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with("d_m")) {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(Error::Parse(format!(
                    "channel stats line {}: expected 4 fields",
                    lineno + 1
                )));
            }
            let num = |s: &str| -> Result<f64> {
                s.parse()
                    .map_err(|_| Error::Parse(format!("bad number '{s}'")))
            };
            let opt = |s: &str| -> Result<Option<f64>> {
                if s.eq_ignore_ascii_case("nan") {
                    Ok(None)
                } else {
                    num(s).map(Some)
                }
            };
            stats.distances_m.push(num(fields[0])?);
            stats.mu_db.push(opt(fields[1])?);
            stats.sigma_db.push(opt(fields[2])?);
            stats.p_los.push(num(fields[3])?);
        }
        stats.validate()?;
        Ok(stats)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.distances_m.len();
        if n == 0 || self.mu_db.len() != n || self.sigma_db.len() != n || self.p_los.len() != n {
            return Err(Error::InvalidParameter("channel stats lists must be equal length".into()));
        }
        if self.distances_m.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("distances must be strictly increasing".into()));
        }
        if self.sigma_db.iter().flatten().any(|&s| s < 0.0) {
            return Err(Error::InvalidParameter("sigma must be non-negative".into()));
        }
        if self.p_los.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidParameter("p_los must lie in [0, 1]".into()));
        }
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_csv())?)
    }
}

/// Log-normal moments of the interference-plus-noise power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceMoments {
    pub mu_dbm: f64,
    pub sigma_db: f64,
}

impl InterferenceMoments {
    /// Deterministic noise floor: zero spread.
    pub fn noise(noise_floor_dbm: f64) -> Self {
        Self {
            mu_dbm: noise_floor_dbm,
            sigma_db: 0.0,
        }
    }
}

/// Fenton–Wilkinson log-normal moment matching of a sum of independent
/// log-normal powers given as (mean dBm, std dB) pairs. A singleton passes
/// through unchanged; an empty list is zero power.
pub fn combine_interferers(per_interferer: &[(f64, f64)]) -> InterferenceMoments {
    if per_interferer.is_empty() {
        return InterferenceMoments {
            mu_dbm: f64::NEG_INFINITY,
            sigma_db: 0.0,
        };
    }
    if per_interferer.len() == 1 {
        let (mu, sigma) = per_interferer[0];
        return InterferenceMoments {
            mu_dbm: mu,
            sigma_db: sigma,
        };
    }
    let c = LN10_OVER_10;
    let mut mean_sum = 0.0;
    let mut var_sum = 0.0;
    for &(mu_db, sigma_db) in per_interferer {
        let m_ln = mu_db * c;
        let s2_ln = (sigma_db * c).powi(2);
        let mean = (m_ln + s2_ln / 2.0).exp();
        mean_sum += mean;
        var_sum += (s2_ln.exp_m1()) * (2.0 * m_ln + s2_ln).exp();
    }
    let s2 = (1.0 + var_sum / (mean_sum * mean_sum)).ln();
    let m = mean_sum.ln() - s2 / 2.0;
    InterferenceMoments {
        mu_dbm: m / c,
        sigma_db: s2.sqrt() / c,
    }
}

/// Outage probability of a sub-link under log-normal shadowing: the chance
/// that the received SINR falls under the MCS threshold.
pub fn outage_probability(
    stats: &ChannelStats,
    psi: (f64, u32),
    d_m: f64,
    gains_db: (f64, f64),
    interference: InterferenceMoments,
    table: &McsTable,
) -> Result<f64> {
    let (tx_power_dbm, mcs_index) = psi;
    let mcs = table.get(mcs_index)?;
    let Some(mu) = stats.mu_at(d_m) else {
        // No LoS statistics at this distance: the link cannot close.
        return Ok(1.0);
    };
    let sigma = stats.sigma_at(d_m).unwrap_or(0.0);
    let margin =
        (tx_power_dbm + gains_db.0 + gains_db.1 - mu - interference.mu_dbm) - mcs.sinr_min_db;
    let spread = (sigma * sigma + interference.sigma_db * interference.sigma_db).sqrt();
    if spread == 0.0 {
        return Ok(if margin > 0.0 {
            0.0
        } else if margin < 0.0 {
            1.0
        } else {
            0.5
        });
    }
    Ok(q_function(margin / spread))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dbmath::dbm_to_mw;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn stats_fixture(mu: f64, sigma: f64) -> ChannelStats {
        ChannelStats {
            distances_m: vec![100.0, 1000.0],
            mu_db: vec![Some(mu), Some(mu)],
            sigma_db: vec![Some(sigma), Some(sigma)],
            p_los: vec![1.0, 1.0],
        }
    }

    #[test]
    fn zero_margin_gives_half() {
        let table = McsTable::default_80211ad();
        // MCS 13 threshold 6.95 dB: arrange received SINR exactly at it.
        let noise = -74.65;
        let mu = 120.0;
        let stats = stats_fixture(mu, 4.0);
        let tx = 6.95 + mu + noise - 92.0; // gains 46 + 46
        let p = outage_probability(
            &stats,
            (tx, 13),
            500.0,
            (46.0, 46.0),
            InterferenceMoments::noise(noise),
            &table,
        )
        .unwrap();
        assert!((p - 0.5).abs() < 1e-12);
    }

    #[test]
    fn three_sigma_margin_matches_gaussian_tail() {
        let table = McsTable::default_80211ad();
        let noise = -74.65;
        let mu = 120.0;
        let sigma = 4.0;
        let stats = stats_fixture(mu, sigma);
        let tx = 6.95 + 3.0 * sigma + mu + noise - 92.0;
        let p = outage_probability(
            &stats,
            (tx, 13),
            500.0,
            (46.0, 46.0),
            InterferenceMoments::noise(noise),
            &table,
        )
        .unwrap();
        // Frozen from the numeric integration oracle for Q(3).
        assert!((p - 1.3498980e-3).abs() < 1e-9, "{p}");
    }

    #[test]
    fn degenerate_spread_is_a_step() {
        // Integer-valued fixture so the zero-margin case is float-exact.
        let table = McsTable::new(vec![crate::mcs::McsEntry {
            index: 13,
            phy_rate_bps: 700.0e6,
            rx_sensitivity_dbm: -66.0,
            sinr_min_db: 7.0,
        }])
        .unwrap();
        let stats = stats_fixture(120.0, 0.0);
        let noise = InterferenceMoments::noise(-74.0);
        let at = |tx: f64| {
            outage_probability(&stats, (tx, 13), 500.0, (46.0, 46.0), noise, &table).unwrap()
        };
        let tx_critical = 7.0 + 120.0 - 74.0 - 92.0;
        assert_eq!(at(tx_critical + 0.1), 0.0);
        assert_eq!(at(tx_critical - 0.1), 1.0);
        assert_eq!(at(tx_critical), 0.5);
    }

    #[test]
    fn absent_moments_mean_certain_outage() {
        let stats = ChannelStats {
            distances_m: vec![100.0, 200.0],
            mu_db: vec![Some(100.0), None],
            sigma_db: vec![Some(2.0), None],
            p_los: vec![0.9, 0.0],
        };
        let table = McsTable::default_80211ad();
        let p = outage_probability(
            &stats,
            (5.0, 13),
            200.0,
            (46.0, 46.0),
            InterferenceMoments::noise(-74.65),
            &table,
        )
        .unwrap();
        assert_eq!(p, 1.0);
    }

    #[test]
    fn singleton_combination_is_identity() {
        let m = combine_interferers(&[(-90.0, 8.0)]);
        assert_eq!(m.mu_dbm, -90.0);
        assert_eq!(m.sigma_db, 8.0);
    }

    #[test]
    fn equal_pair_combined_mean_exceeds_single() {
        let m = combine_interferers(&[(-90.0, 6.0), (-90.0, 6.0)]);
        assert!(m.mu_dbm > -90.0);
    }

    #[test]
    fn moment_matching_agrees_with_monte_carlo() {
        // Oracle: sample the two log-normals, estimate the sum's linear
        // moments, and invert to log-normal parameters independently.
        let inputs = [(-90.0, 6.0), (-95.0, 6.0)];
        let fw = combine_interferers(&inputs);

        let c = std::f64::consts::LN_10 / 10.0;
        let n = 1_000_000;
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut sum = 0.0f64;
        let mut sum_sq = 0.0f64;
        for _ in 0..n {
            let mut s = 0.0;
            for &(mu, sigma) in &inputs {
                let z: f64 = {
                    // Box-Muller keeps the test free of distribution deps.
                    let u1: f64 = rng.gen::<f64>().max(1e-300);
                    let u2: f64 = rng.gen();
                    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
                };
                s += dbm_to_mw(mu + sigma * z);
            }
            sum += s;
            sum_sq += s * s;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        let s2 = (1.0 + var / (mean * mean)).ln();
        let mu_mc = (mean.ln() - s2 / 2.0) / c;
        let sigma_mc = s2.sqrt() / c;

        assert!((fw.mu_dbm - mu_mc).abs() < 0.2, "{} vs {}", fw.mu_dbm, mu_mc);
        assert!(
            (fw.sigma_db - sigma_mc).abs() < 0.2,
            "{} vs {}",
            fw.sigma_db,
            sigma_mc
        );
    }

    #[test]
    fn csv_roundtrip_with_absent_moments() {
        let stats = ChannelStats {
            distances_m: vec![100.0, 200.0, 400.0],
            mu_db: vec![Some(101.5), Some(110.25), None],
            sigma_db: vec![Some(1.0), Some(2.5), None],
            p_los: vec![1.0, 0.5, 0.0],
        };
        let back = ChannelStats::from_csv(&stats.to_csv()).unwrap();
        assert_eq!(stats, back);
    }

    #[test]
    fn interpolation_clamps_and_blends() {
        let stats = ChannelStats {
            distances_m: vec![100.0, 200.0],
            mu_db: vec![Some(100.0), Some(110.0)],
            sigma_db: vec![Some(1.0), Some(3.0)],
            p_los: vec![1.0, 0.5],
        };
        assert_eq!(stats.mu_at(50.0), Some(100.0));
        assert_eq!(stats.mu_at(300.0), Some(110.0));
        assert_eq!(stats.mu_at(150.0), Some(105.0));
        assert!((stats.p_los_at(150.0) - 0.75).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn outage_monotone_in_power_and_threshold(
            tx in -10.0f64..5.0,
            bump in 0.1f64..5.0,
            sigma in 0.5f64..8.0,
            mcs in 13u32..24,
        ) {
            let table = McsTable::default_80211ad();
            let stats = stats_fixture(125.0, sigma);
            let noise = InterferenceMoments::noise(-74.65);
            let p = |t: f64, m: u32| {
                outage_probability(&stats, (t, m), 500.0, (46.0, 46.0), noise, &table).unwrap()
            };
            // Decreasing in transmit power.
            prop_assert!(p(tx + bump, mcs) <= p(tx, mcs));
            // Increasing in the MCS threshold.
            prop_assert!(p(tx, mcs + 1) >= p(tx, mcs));
        }

        #[test]
        fn singleton_identity_property(mu in -120.0f64..-60.0, sigma in 0.0f64..10.0) {
            let m = combine_interferers(&[(mu, sigma)]);
            prop_assert_eq!(m.mu_dbm, mu);
            prop_assert_eq!(m.sigma_db, sigma);
        }
    }
}
