//! Error probabilities, state durations, and the steady state of the
//! payload/ack retry chain.

use super::aggregation::{ampdu_duration, AggregationShape};
use super::FrameTiming;
use crate::error::{Error, Result};
use crate::mcs::McsTable;

/// Per-state error probabilities of one exchange. `p_p`/`p_ack` cover the
/// whole payload/ack A-MPDU plus its BAR; `p_a` covers the BA frame;
/// `p_amsdu_*` is the mean per-A-MSDU loss used by the exchange-time
/// scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorProbs {
    pub p_p: f64,
    pub p_a: f64,
    pub p_ack: f64,
    pub p_amsdu_p: f64,
    pub p_amsdu_ack: f64,
}

fn success_pow(ber: f64, bits: f64) -> f64 {
    // (1-ber)^bits, stable for tiny ber and large frames.
    (bits * (-ber).ln_1p()).exp()
}

/// Probability that a frame of the given shape (or control frame) suffers
/// at least one bit error, per the independent-bit abstraction.
pub fn frame_error_probs(
    payload: &AggregationShape,
    ack: &AggregationShape,
    ber: f64,
    timing: &FrameTiming,
) -> Result<ErrorProbs> {
    if !(0.0..=0.5).contains(&ber) {
        return Err(Error::InvalidParameter(format!("ber {ber} outside [0, 0.5]")));
    }
    let ampdu_ok = |shape: &AggregationShape, ctrl_bits: f64| {
        let mut ok = success_pow(ber, ctrl_bits);
        for &bits in &shape.amsdu_bits {
            ok *= success_pow(ber, bits);
        }
        ok
    };
    let mean_amsdu_loss = |shape: &AggregationShape| {
        let ok: f64 = shape.amsdu_bits.iter().map(|&b| success_pow(ber, b)).sum::<f64>()
            / shape.n_amsdu() as f64;
        1.0 - ok
    };
    Ok(ErrorProbs {
        p_p: 1.0 - ampdu_ok(payload, timing.bar_bits),
        p_a: 1.0 - success_pow(ber, timing.ba_bits),
        p_ack: 1.0 - ampdu_ok(ack, timing.bar_bits),
        p_amsdu_p: mean_amsdu_loss(payload),
        p_amsdu_ack: mean_amsdu_loss(ack),
    })
}

/// Durations of every chain state: first attempt plus M retries on each
/// side, and the shared SIFS + BA slot for the four ack-of-frame states.
#[derive(Debug, Clone)]
pub struct ChainDurations {
    /// T_P, then T_P-R_m for m = 1..=M.
    pub payload_s: Vec<f64>,
    /// T_ACK, then T_ACK-R_m.
    pub ack_s: Vec<f64>,
    /// SIFS + t_BA, shared by every block-ack state.
    pub ba_s: f64,
    /// Payload A-MPDU airtime including BAR (the t_p term).
    pub t_p_s: f64,
    /// Ack-side A-MPDU airtime including BAR.
    pub t_ack_s: f64,
    /// BA airtime alone.
    pub t_ba_s: f64,
}

pub fn state_durations(
    payload: &AggregationShape,
    ack: &AggregationShape,
    eta: u32,
    timing: &FrameTiming,
    table: &McsTable,
    m_max: u32,
) -> Result<ChainDurations> {
    if m_max < 1 {
        return Err(Error::InvalidParameter("m_max must be at least 1".into()));
    }
    let rate = table.get(eta)?.phy_rate_bps;
    let t_p = ampdu_duration(payload, eta, timing, table)?;
    let t_ack = ampdu_duration(ack, eta, timing, table)?;
    let t_ba = timing.t_ba_s(rate);
    let ladder = |airtime: f64| -> Vec<f64> {
        (0..=m_max)
            .map(|m| timing.aifs_s + timing.mean_backoff_s(m) + airtime)
            .collect()
    };
    Ok(ChainDurations {
        payload_s: ladder(t_p),
        ack_s: ladder(t_ack),
        ba_s: timing.sifs_s + t_ba,
        t_p_s: t_p,
        t_ack_s: t_ack,
        t_ba_s: t_ba,
    })
}

/// Steady-state probabilities of the chain, grouped by side. Index m = 0 is
/// the first attempt; 1..=M are retries.
#[derive(Debug, Clone)]
pub struct SteadyState {
    pub payload: Vec<f64>,
    pub payload_ba: Vec<f64>,
    pub ack: Vec<f64>,
    pub ack_ba: Vec<f64>,
}

impl SteadyState {
    pub fn sum(&self) -> f64 {
        self.payload.iter().sum::<f64>()
            + self.payload_ba.iter().sum::<f64>()
            + self.ack.iter().sum::<f64>()
            + self.ack_ba.iter().sum::<f64>()
    }
}

/// Closed-form stationary distribution. A retransmission round fails when
/// either the data frame or its BA is lost, so the retry states decay
/// geometrically in the combined round-failure probability.
pub fn steady_state(p_p: f64, p_a: f64, p_ack: f64, m_max: u32) -> Result<SteadyState> {
    for p in [p_p, p_a, p_ack] {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::ChainDivergence(p));
        }
    }
    let x = p_p + p_a - p_p * p_a;
    let y = p_ack + p_a - p_ack * p_a;
    let denom_poly = 4.0 - 3.0 * p_ack - 3.0 * p_p + 2.0 * p_ack * p_p;
    let geo_sum = |r: f64| (0..=m_max).map(|m| r.powi(m as i32)).sum::<f64>();

    let kappa_p = (1.0 - p_ack) / (denom_poly * geo_sum(x));
    let kappa_ack = (1.0 - p_p) / (denom_poly * geo_sum(y));

    let ladder = |base: f64, r: f64| (0..=m_max).map(|m| base * r.powi(m as i32)).collect::<Vec<_>>();
    Ok(SteadyState {
        payload: ladder(kappa_p, x),
        payload_ba: ladder(kappa_p * (1.0 - p_p), x),
        ack: ladder(kappa_ack, y),
        ack_ba: ladder(kappa_ack * (1.0 - p_ack), y),
    })
}
