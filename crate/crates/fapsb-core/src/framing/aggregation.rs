//! Two-level frame aggregation: MSDUs packed into A-MSDUs, A-MSDUs into
//! one A-MPDU, and the resulting airtime.

use super::FrameTiming;
use crate::error::{Error, Result};
use crate::mcs::McsTable;

/// Concrete packing of `k` MSDUs into an A-MPDU. A-MSDUs are filled
/// greedily to the size cap, last one partial.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregationShape {
    /// Aggregation length: total MSDUs carried.
    pub k: u32,
    /// Payload bits per MSDU.
    pub msdu_payload_bits: f64,
    /// MSDUs inside each A-MSDU.
    pub n_msdu_per: Vec<u32>,
    /// Bits exposed per A-MSDU (subframe headers plus payloads).
    pub amsdu_bits: Vec<f64>,
}

impl AggregationShape {
    pub fn pack(k: u32, msdu_bytes: u64, timing: &FrameTiming) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("aggregation length must be at least 1".into()));
        }
        if msdu_bytes == 0 {
            return Err(Error::InvalidParameter("MSDU size must be positive".into()));
        }
        let subframe_bytes = timing.msdu_header_bits as u64 / 8 + msdu_bytes;
        let per_amsdu = (timing.max_amsdu_bytes / subframe_bytes) as u32;
        if per_amsdu == 0 {
            return Err(Error::InvalidParameter(format!(
                "one {msdu_bytes}-byte MSDU exceeds the {}-byte A-MSDU cap",
                timing.max_amsdu_bytes
            )));
        }
        let mut n_msdu_per = Vec::new();
        let mut remaining = k;
        while remaining > 0 {
            let n = remaining.min(per_amsdu);
            n_msdu_per.push(n);
            remaining -= n;
        }
        let shape = Self {
            k,
            msdu_payload_bits: (msdu_bytes * 8) as f64,
            amsdu_bits: n_msdu_per
                .iter()
                .map(|&n| n as f64 * (timing.msdu_header_bits + (msdu_bytes * 8) as f64))
                .collect(),
            n_msdu_per,
        };
        if shape.ampdu_bytes(timing) > timing.max_ampdu_bytes as f64 {
            return Err(Error::InvalidParameter(format!(
                "A-MPDU of {} MSDUs exceeds the {}-byte cap",
                k, timing.max_ampdu_bytes
            )));
        }
        Ok(shape)
    }

    pub fn n_amsdu(&self) -> usize {
        self.n_msdu_per.len()
    }

    /// Total A-MPDU size including delimiters, MPDU headers and FCS.
    pub fn ampdu_bytes(&self, timing: &FrameTiming) -> f64 {
        self.amsdu_bits
            .iter()
            .map(|bits| (timing.delim_bits + timing.mpdu_header_bits + bits + timing.fcs_bits) / 8.0)
            .sum()
    }
}

/// Airtime of the full A-MPDU plus its BAR: preamble, then per A-MSDU a
/// delimiter, MPDU header, subframes, and FCS, all at the MCS PHY rate.
pub fn ampdu_duration(
    shape: &AggregationShape,
    eta: u32,
    timing: &FrameTiming,
    table: &McsTable,
) -> Result<f64> {
    let rate = table.get(eta)?.phy_rate_bps;
    let mut bits = 0.0;
    for (i, &n) in shape.n_msdu_per.iter().enumerate() {
        debug_assert!((shape.amsdu_bits[i]
            - n as f64 * (timing.msdu_header_bits + shape.msdu_payload_bits))
            .abs()
            < 1e-6);
        bits += timing.delim_bits
            + timing.mpdu_header_bits
            + n as f64 * (timing.msdu_header_bits + shape.msdu_payload_bits)
            + timing.fcs_bits;
    }
    Ok(timing.t_bar_s(rate) + timing.preamble_s + bits / rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn timing() -> FrameTiming {
        FrameTiming::default_80211ad()
    }

    #[test]
    fn single_msdu_duration_matches_hand_sum() {
        let t = timing();
        let table = McsTable::default_80211ad();
        let shape = AggregationShape::pack(1, 2200, &t).unwrap();
        let got = ampdu_duration(&shape, 24, &t, &table).unwrap();
        // Hand sum: BAR (preamble + 192 bits) + preamble + one delimited
        // MPDU holding one 2200-byte MSDU, at 6.7 Gbps.
        let rate = 6.7e9;
        let bits = 32.0 + 208.0 + 112.0 + 2200.0 * 8.0 + 32.0;
        let expected = (2.133e-6 + 192.0 / rate) + 2.133e-6 + bits / rate;
        assert!((got - expected).abs() < 1e-15, "{got} vs {expected}");
    }

    #[test]
    fn duration_linear_in_msdus_within_one_amsdu() {
        let t = timing();
        let table = McsTable::default_80211ad();
        // 2200-byte MSDUs: three fit in one 7935-byte A-MSDU.
        let d1 = ampdu_duration(&AggregationShape::pack(1, 2200, &t).unwrap(), 24, &t, &table).unwrap();
        let d2 = ampdu_duration(&AggregationShape::pack(2, 2200, &t).unwrap(), 24, &t, &table).unwrap();
        let d3 = ampdu_duration(&AggregationShape::pack(3, 2200, &t).unwrap(), 24, &t, &table).unwrap();
        let per_msdu = (112.0 + 17600.0) / 6.7e9;
        assert!((d2 - d1 - per_msdu).abs() < 1e-15);
        assert!((d3 - d2 - per_msdu).abs() < 1e-15);
    }

    #[test]
    fn payload_term_ratio_between_extreme_rates() {
        let table = McsTable::default_80211ad();
        let payload_term = |eta: u32| {
            let rate = table.get(eta).unwrap().phy_rate_bps;
            2200.0 * 8.0 / rate
        };
        let ratio = payload_term(13) / payload_term(24);
        assert!((ratio - 6.7e9 / 700.0e6).abs() < 1e-9);
        assert!((ratio - 9.571).abs() < 0.01);
    }

    #[test]
    fn greedy_packing_fills_to_cap() {
        let t = timing();
        // 2214 bytes per subframe: 3 per A-MSDU.
        let shape = AggregationShape::pack(7, 2200, &t).unwrap();
        assert_eq!(shape.n_msdu_per, vec![3, 3, 1]);
        assert_eq!(shape.n_amsdu(), 3);
        assert_eq!(shape.n_msdu_per.iter().sum::<u32>(), 7);
    }

    #[test]
    fn oversized_msdu_rejected() {
        let t = timing();
        assert!(AggregationShape::pack(1, 8000, &t).is_err());
    }

    #[test]
    fn ampdu_cap_enforced() {
        let t = timing();
        // 118 * 2200-byte MSDUs overflow the 262143-byte A-MPDU cap.
        assert!(AggregationShape::pack(117, 2200, &t).is_ok());
        assert!(AggregationShape::pack(118, 2200, &t).is_err());
    }

    #[test]
    fn affine_in_k_at_full_amsdu_multiples() {
        let t = timing();
        let table = McsTable::default_80211ad();
        let d = |k: u32| {
            ampdu_duration(&AggregationShape::pack(k, 2200, &t).unwrap(), 20, &t, &table).unwrap()
        };
        // At multiples of the per-A-MSDU capacity the packing repeats, so
        // the duration is affine: equal second differences of zero.
        let (d3, d6, d9, d12) = (d(3), d(6), d(9), d(12));
        assert!(((d6 - d3) - (d9 - d6)).abs() < 1e-15);
        assert!(((d9 - d6) - (d12 - d9)).abs() < 1e-15);
    }
}
