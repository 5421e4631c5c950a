//! Frame timing, error probabilities, semi-Markov steady state, and
//! per-exchange time/power for one sub-link running TCP over EDCA with
//! two-level aggregation and block acks.

mod aggregation;
mod exchange;
mod markov;

pub use aggregation::{ampdu_duration, AggregationShape};
pub use exchange::{exchange_power, exchange_time, ExchangeResult, StateEntry, StateKind};
pub use markov::{frame_error_probs, state_durations, steady_state, ChainDurations, ErrorProbs, SteadyState};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// MAC/PHY frame-timing constants for one standard profile. Durations are
/// seconds; frame fields that ride the PHY payload are bit counts divided
/// by the MCS rate at use.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameTiming {
    pub aifs_s: f64,
    pub sifs_s: f64,
    pub slot_s: f64,
    pub preamble_s: f64,
    pub delim_bits: f64,
    pub mpdu_header_bits: f64,
    pub msdu_header_bits: f64,
    pub fcs_bits: f64,
    pub bar_bits: f64,
    pub ba_bits: f64,
    pub cw_min: u32,
    pub cw_max: u32,
    pub max_amsdu_bytes: u64,
    pub max_ampdu_bytes: u64,
}

impl FrameTiming {
    /// Retry ladder depth: cw_max = cw_min * 2^M.
    pub fn m_max(&self) -> u32 {
        (self.cw_max / self.cw_min).trailing_zeros()
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("aifs", self.aifs_s),
            ("sifs", self.sifs_s),
            ("slot", self.slot_s),
            ("preamble", self.preamble_s),
        ] {
            if v <= 0.0 {
                return Err(Error::InvalidParameter(format!("{name} must be positive")));
            }
        }
        if self.cw_min == 0
            || self.cw_max < 2 * self.cw_min
            || self.cw_max % self.cw_min != 0
            || !(self.cw_max / self.cw_min).is_power_of_two()
        {
            return Err(Error::InvalidParameter(
                "cw_max must be cw_min times a power of two (at least 2)".into(),
            ));
        }
        Ok(())
    }

    /// Mean EDCA backoff before the m-th (re)transmission: (CW-1)*slot/2
    /// with CW doubled per retry.
    pub fn mean_backoff_s(&self, retry: u32) -> f64 {
        let cw = (self.cw_min << retry.min(self.m_max())) as f64;
        (cw - 1.0) * self.slot_s / 2.0
    }

    /// BAR frame airtime at the given PHY rate, own preamble included.
    pub fn t_bar_s(&self, phy_rate_bps: f64) -> f64 {
        self.preamble_s + self.bar_bits / phy_rate_bps
    }

    /// BA frame airtime at the given PHY rate, own preamble included.
    pub fn t_ba_s(&self, phy_rate_bps: f64) -> f64 {
        self.preamble_s + self.ba_bits / phy_rate_bps
    }

    /// 60 GHz profile: 3 us SIFS, 5 us slots, OFDM preamble.
    pub fn default_80211ad() -> Self {
        Self {
            aifs_s: 18e-6,
            sifs_s: 3e-6,
            slot_s: 5e-6,
            preamble_s: 2.133e-6,
            delim_bits: 32.0,
            mpdu_header_bits: 208.0,
            msdu_header_bits: 112.0,
            fcs_bits: 32.0,
            bar_bits: 192.0,
            ba_bits: 256.0,
            cw_min: 16,
            cw_max: 1024,
            max_amsdu_bytes: crate::constants::AD_MAX_AMSDU_BYTES,
            max_ampdu_bytes: crate::constants::AD_MAX_AMPDU_BYTES,
        }
    }

    /// 5 GHz VHT profile: 16 us SIFS, 9 us slots, 40 us preamble.
    pub fn default_80211ac() -> Self {
        Self {
            aifs_s: 43e-6,
            sifs_s: 16e-6,
            slot_s: 9e-6,
            preamble_s: 40e-6,
            max_amsdu_bytes: crate::constants::AC_MAX_AMSDU_BYTES,
            max_ampdu_bytes: crate::constants::AC_MAX_AMPDU_BYTES,
            ..Self::default_80211ad()
        }
    }
}
