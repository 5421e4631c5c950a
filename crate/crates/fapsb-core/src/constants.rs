//! Versioned numeric defaults for the supported PHY/MAC profiles.
//!
//! Everything here is overridable through configuration; these are the
//! shipped defaults, collected in one place so a profile bump is a single
//! diff.

pub const CONSTANTS_VERSION: &str = "1";

/// Maximum A-MSDU frame size in bytes (60 GHz profile).
pub const AD_MAX_AMSDU_BYTES: u64 = 7935;
/// Maximum A-MPDU frame size in bytes (60 GHz profile).
pub const AD_MAX_AMPDU_BYTES: u64 = 262_143;

/// Maximum A-MSDU frame size in bytes (5 GHz VHT profile).
pub const AC_MAX_AMSDU_BYTES: u64 = 11_426;
/// Maximum A-MPDU frame size in bytes (5 GHz VHT profile).
pub const AC_MAX_AMPDU_BYTES: u64 = 1_048_575;

/// TCP maximum segment size carried as one MSDU, bytes.
pub const TCP_MSS_BYTES: u64 = 2200;
/// TCP/IP acknowledgement payload carried as one MSDU, bytes.
pub const TCP_ACK_BYTES: u64 = 40;

/// Minimum time needed to wake from sleep mode, seconds.
pub const T_SLEEP_MIN_S: f64 = 250e-6;

/// Carrier frequency defaults, Hz.
pub const AD_CARRIER_HZ: f64 = 60.0e9;
pub const AC_CARRIER_HZ: f64 = 5.5e9;

/// Channel bandwidth defaults, Hz.
pub const AD_BANDWIDTH_HZ: f64 = 2.16e9;
pub const AC_BANDWIDTH_HZ: f64 = 80.0e6;

/// Receiver noise figure, dB.
pub const NOISE_FIGURE_DB: f64 = 6.0;

/// Atmospheric absorption at 60 GHz, dB/km.
pub const AD_ATMOS_ABSORPTION_DB_PER_KM: f64 = 17.0;
/// Atmospheric absorption at 5 GHz is negligible at these ranges.
pub const AC_ATMOS_ABSORPTION_DB_PER_KM: f64 = 0.0;

/// Outage probability threshold.
pub const P_TH_OUT: f64 = 1e-6;

/// Transmit power search bounds, dBm.
pub const AD_TX_POWER_MIN_DBM: f64 = -10.0;
pub const AD_TX_POWER_MAX_DBM: f64 = 5.0;
pub const AC_TX_POWER_MIN_DBM: f64 = -10.0;
pub const AC_TX_POWER_MAX_DBM: f64 = 13.0;

/// Realized antenna gains, dB. The 60 GHz arrays reach 46 dB, which
/// together with the 5 dBm power cap meets the 51 dBm EIRP limit.
pub const AD_ANTENNA_GAIN_DB: f64 = 46.0;
pub const AC_ANTENNA_GAIN_DB: f64 = 23.0;

/// Channels available under the frequency reuse pattern.
pub const REUSE_CHANNELS: u32 = 4;
