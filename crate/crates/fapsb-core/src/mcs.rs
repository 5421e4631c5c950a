//! Modulation and coding scheme tables and the SINR-to-BER map.

use crate::dbmath::db_to_linear;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

/// One modulation/coding point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McsEntry {
    pub index: u32,
    pub phy_rate_bps: f64,
    pub rx_sensitivity_dbm: f64,
    pub sinr_min_db: f64,
}

/// A set of MCS entries sorted by index.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McsTable {
    entries: Vec<McsEntry>,
}

impl McsTable {
    pub fn new(mut entries: Vec<McsEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("empty MCS table".into()));
        }
        entries.sort_by_key(|e| e.index);
        for pair in entries.windows(2) {
            if pair[0].index == pair[1].index {
                return Err(Error::InvalidParameter(format!(
                    "duplicate MCS index {}",
                    pair[0].index
                )));
            }
            if pair[1].sinr_min_db <= pair[0].sinr_min_db {
                return Err(Error::InvalidParameter(
                    "sinr_min must be strictly increasing with MCS index".into(),
                ));
            }
        }
        if entries.iter().any(|e| e.phy_rate_bps <= 0.0) {
            return Err(Error::InvalidParameter("phy_rate must be positive".into()));
        }
        Ok(Self { entries })
    }

    pub fn get(&self, index: u32) -> Result<&McsEntry> {
        self.entries
            .iter()
            .find(|e| e.index == index)
            .ok_or(Error::UnknownMcs(index))
    }

    pub fn entries(&self) -> &[McsEntry] {
        &self.entries
    }

    pub fn min_index(&self) -> u32 {
        self.entries.first().unwrap().index
    }

    pub fn max_index(&self) -> u32 {
        self.entries.last().unwrap().index
    }

    /// The 60 GHz OFDM table, MCS 13 through 24.
    pub fn default_80211ad() -> Self {
        let rows: [(u32, f64, f64, f64); 12] = [
            (13, 700.0e6, -66.0, 6.95),
            (14, 866.25e6, -64.0, 8.15),
            (15, 1386.0e6, -63.0, 10.05),
            (16, 1732.5e6, -62.0, 11.25),
            (17, 2079.0e6, -60.0, 12.65),
            (18, 2772.0e6, -58.0, 15.8),
            (19, 3465.0e6, -56.0, 17.85),
            (20, 4158.0e6, -54.0, 19.2),
            (21, 4504.5e6, -53.0, 20.7),
            (22, 5197.5e6, -51.0, 22.85),
            (23, 6237.0e6, -49.0, 24.8),
            (24, 6700.0e6, -47.0, 26.15),
        ];
        Self::from_rows(&rows)
    }

    /// Single-stream 80 MHz VHT table, MCS 0 through 9, for the 5 GHz
    /// comparison runs.
    pub fn default_80211ac() -> Self {
        let rows: [(u32, f64, f64, f64); 10] = [
            (0, 32.5e6, -79.0, 10.0),
            (1, 65.0e6, -76.0, 13.0),
            (2, 97.5e6, -74.0, 15.0),
            (3, 130.0e6, -71.0, 18.0),
            (4, 195.0e6, -67.0, 22.0),
            (5, 260.0e6, -63.0, 26.0),
            (6, 292.5e6, -62.0, 27.0),
            (7, 325.0e6, -61.0, 28.0),
            (8, 390.0e6, -56.0, 33.0),
            (9, 433.3e6, -54.0, 35.0),
        ];
        Self::from_rows(&rows)
    }

    fn from_rows(rows: &[(u32, f64, f64, f64)]) -> Self {
        Self::new(
            rows.iter()
                .map(|&(index, phy_rate_bps, rx_sensitivity_dbm, sinr_min_db)| McsEntry {
                    index,
                    phy_rate_bps,
                    rx_sensitivity_dbm,
                    sinr_min_db,
                })
                .collect(),
        )
        .expect("built-in table is valid")
    }

    /// CSV columns: index, phy_rate_bps, rx_sensitivity_dbm, sinr_min_db.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,phy_rate_bps,rx_sensitivity_dbm,sinr_min_db\n");
        for e in &self.entries {
            writeln!(
                out,
                "{},{},{},{}",
                e.index, e.phy_rate_bps, e.rx_sensitivity_dbm, e.sinr_min_db
            )
            .unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with("index")) {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(Error::Parse(format!(
                    "MCS table line {}: expected 4 fields, got {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let parse = |s: &str| -> Result<f64> {
                s.parse()
                    .map_err(|_| Error::Parse(format!("bad number '{s}' on line {}", lineno + 1)))
            };
            entries.push(McsEntry {
                index: fields[0]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad MCS index '{}'", fields[0])))?,
                phy_rate_bps: parse(fields[1])?,
                rx_sensitivity_dbm: parse(fields[2])?,
                sinr_min_db: parse(fields[3])?,
            });
        }
        Self::new(entries)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_csv())?)
    }
}

/// Maps SINR to a bit error rate for a given MCS.
pub trait BerModel: Send + Sync {
    fn ber(&self, sinr_db: f64, mcs: &McsEntry) -> f64;
}

/// Exponential waterfall anchored at each MCS threshold: BER is 0.5 at
/// `sinr_min` and drops to `ber_at_margin` one `margin_db` above it. The
/// decay runs in linear SINR, so every further dB of margin collapses the
/// BER by orders of magnitude.
#[derive(Debug, Clone, Copy)]
pub struct WaterfallBer {
    pub ber_at_margin: f64,
    pub margin_db: f64,
}

impl Default for WaterfallBer {
    fn default() -> Self {
        Self {
            ber_at_margin: 1e-5,
            margin_db: 1.0,
        }
    }
}

impl BerModel for WaterfallBer {
    fn ber(&self, sinr_db: f64, mcs: &McsEntry) -> f64 {
        let gamma = db_to_linear(sinr_db);
        let gamma_min = db_to_linear(mcs.sinr_min_db);
        let margin = gamma - gamma_min;
        if margin <= 0.0 {
            return 0.5;
        }
        // k chosen so that ber(sinr_min + margin_db) = ber_at_margin.
        let cal = gamma_min * (db_to_linear(self.margin_db) - 1.0);
        let k = (0.5 / self.ber_at_margin).ln() / cal;
        (0.5 * (-k * margin).exp()).min(0.5)
    }
}

/// Fixed BER irrespective of SINR; used to probe specific error regimes.
#[derive(Debug, Clone, Copy)]
pub struct FixedBer(pub f64);

impl BerModel for FixedBer {
    fn ber(&self, _sinr_db: f64, _mcs: &McsEntry) -> f64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_lookup_and_bounds() {
        let t = McsTable::default_80211ad();
        assert_eq!(t.min_index(), 13);
        assert_eq!(t.max_index(), 24);
        assert_eq!(t.get(13).unwrap().sinr_min_db, 6.95);
        assert_eq!(t.get(24).unwrap().rx_sensitivity_dbm, -47.0);
        assert!(matches!(t.get(12), Err(Error::UnknownMcs(12))));
    }

    #[test]
    fn csv_roundtrip() {
        let t = McsTable::default_80211ad();
        let back = McsTable::from_csv(&t.to_csv()).unwrap();
        assert_eq!(t.entries(), back.entries());
    }

    #[test]
    fn waterfall_anchors() {
        let t = McsTable::default_80211ad();
        let mcs = t.get(13).unwrap();
        let model = WaterfallBer::default();
        assert_eq!(model.ber(mcs.sinr_min_db, mcs), 0.5);
        assert_eq!(model.ber(mcs.sinr_min_db - 5.0, mcs), 0.5);
        let at_margin = model.ber(mcs.sinr_min_db + 1.0, mcs);
        assert!((at_margin - 1e-5).abs() / 1e-5 < 1e-9, "{at_margin}");
        // Monotone decreasing above threshold.
        let mut prev = 0.5;
        for i in 0..40 {
            let b = model.ber(mcs.sinr_min_db + 0.25 * i as f64, mcs);
            assert!(b <= prev);
            prev = b;
        }
    }

    #[test]
    fn waterfall_tracks_mcs_threshold() {
        let t = McsTable::default_80211ad();
        let model = WaterfallBer::default();
        // Same absolute SINR is worse for a more demanding MCS.
        let low = model.ber(20.0, t.get(13).unwrap());
        let high = model.ber(20.0, t.get(24).unwrap());
        assert!(low < high);
    }
}
