//! Duty-cycle arithmetic for one sub-link: batch-service sleep duration,
//! end-to-end latency, average power with and without co-channel
//! interference, and the CCI occurrence probabilities.

use crate::error::{Error, Result};
use crate::framing::FrameTiming;
use crate::radio::RadioProfile;
use serde::{Deserialize, Serialize};

/// Decision triple for one sub-link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theta {
    pub tx_power_dbm: f64,
    pub mcs: u32,
    pub k: u32,
}

/// Operating point of one sub-link: the decision triple (plain and under
/// CCI) plus everything derived from it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubLinkPlan {
    pub link: usize,
    pub sublink: usize,
    pub d_m: f64,
    pub lambda_pps: f64,
    pub relays: u32,
    pub theta: Theta,
    pub theta_cci: Theta,
    pub t_sleep_s: f64,
    pub t_sleep_cci_s: f64,
    pub t_exchange_s: f64,
    pub t_exchange_cci_s: f64,
    pub gamma_d_w: f64,
    pub gamma_d_cci_w: f64,
    pub ber: f64,
    pub ber_cci: f64,
    pub p_out: f64,
    pub p_out_cci: f64,
    pub p_cci: f64,
    pub power_avg_w: f64,
}

/// Shared duty-cycle constants.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DutyCycleConstants {
    pub t_sl_min_s: f64,
    /// Stability slack of the sleep equation; the slot time by default.
    pub delta_s: f64,
    pub k_max: u32,
    pub latency_max_s: f64,
}

impl DutyCycleConstants {
    pub fn default_for(timing: &FrameTiming) -> Self {
        Self {
            t_sl_min_s: crate::constants::T_SLEEP_MIN_S,
            delta_s: timing.slot_s,
            k_max: u32::MAX,
            latency_max_s: 8.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.t_sl_min_s <= 0.0 || self.delta_s <= 0.0 || self.k_max < 1 {
            return Err(Error::InvalidParameter(
                "duty-cycle constants must be positive with k_max >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Sleep duration outcome; infeasibility is a value so optimizer sweeps
/// stay total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SleepDuration {
    Feasible(f64),
    /// The computed duration fell under the wake-up minimum (possibly
    /// negative); carried for diagnostics.
    Infeasible(f64),
}

impl SleepDuration {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SleepDuration::Feasible(_))
    }

    pub fn value(&self) -> f64 {
        match *self {
            SleepDuration::Feasible(v) | SleepDuration::Infeasible(v) => v,
        }
    }
}

/// Largest aggregation length whose packed A-MPDU (headers, delimiters and
/// FCS included) fits the frame cap, bounded by the configured k_max.
pub fn max_agg_len(
    msdu_bytes: u64,
    timing: &FrameTiming,
    constants: &DutyCycleConstants,
) -> Result<u32> {
    if msdu_bytes == 0 {
        return Err(Error::InvalidParameter("MSDU size must be positive".into()));
    }
    let subframe = timing.msdu_header_bits as u64 / 8 + msdu_bytes;
    let per_amsdu = timing.max_amsdu_bytes / subframe;
    let mpdu_overhead = (timing.delim_bits + timing.mpdu_header_bits + timing.fcs_bits) as u64 / 8;
    if per_amsdu == 0 || mpdu_overhead + subframe > timing.max_ampdu_bytes {
        return Err(Error::InvalidParameter(format!(
            "a single {msdu_bytes}-byte MSDU does not fit the aggregation caps"
        )));
    }
    let full_mpdu = mpdu_overhead + per_amsdu * subframe;
    let n_full = timing.max_ampdu_bytes / full_mpdu;
    let remainder = timing.max_ampdu_bytes - n_full * full_mpdu;
    let extra = if remainder > mpdu_overhead {
        ((remainder - mpdu_overhead) / subframe).min(per_amsdu - 1)
    } else {
        0
    };
    let k = n_full * per_amsdu + extra;
    Ok((k as u32).min(constants.k_max).max(1))
}

/// Longest sleep that keeps the batch-service queue stable: the batch
/// accumulation time minus the exchange time and the stability slack.
pub fn sleep_duration(
    k: u32,
    lambda_pps: f64,
    t_exchange_s: f64,
    constants: &DutyCycleConstants,
) -> Result<SleepDuration> {
    if lambda_pps <= 0.0 {
        return Err(Error::InvalidParameter("arrival rate must be positive".into()));
    }
    let t_sl = k as f64 / lambda_pps - t_exchange_s - constants.delta_s;
    Ok(if t_sl >= constants.t_sl_min_s {
        SleepDuration::Feasible(t_sl)
    } else {
        SleepDuration::Infeasible(t_sl)
    })
}

/// End-to-end transfer latency of a path: every sub-link contributes its
/// batch accumulation time, less the slack.
pub fn path_latency(sublinks: &[(u32, f64)], constants: &DutyCycleConstants) -> f64 {
    sublinks
        .iter()
        .map(|&(k, lambda)| k as f64 / lambda - constants.delta_s)
        .sum()
}

/// Path latency from planned sub-links, using the CCI aggregation lengths
/// when `cci` is set.
pub fn path_latency_plans(plans: &[&SubLinkPlan], constants: &DutyCycleConstants, cci: bool) -> f64 {
    let pairs: Vec<(u32, f64)> = plans
        .iter()
        .map(|p| {
            let k = if cci { p.theta_cci.k } else { p.theta.k };
            (k, p.lambda_pps)
        })
        .collect();
    path_latency(&pairs, constants)
}

/// Average power of one duty-cycled sub-link variant: both endpoint radios
/// sleep, spend the wake-up minimum at idle draw, and exchange at gamma_d.
pub fn variant_power_w(
    t_sleep_s: f64,
    t_exchange_s: f64,
    gamma_d_w: f64,
    radio: &RadioProfile,
    constants: &DutyCycleConstants,
) -> f64 {
    let gamma_sl = radio.power_sleep_w();
    let gamma_idle = radio.power_idle_w();
    (2.0 * gamma_sl * (t_sleep_s - constants.t_sl_min_s)
        + 2.0 * gamma_idle * constants.t_sl_min_s
        + gamma_d_w * t_exchange_s)
        / (t_sleep_s + t_exchange_s)
}

/// CCI-weighted average power of a planned sub-link.
pub fn sublink_power(plan: &SubLinkPlan, radio: &RadioProfile, constants: &DutyCycleConstants) -> f64 {
    let no_cci = variant_power_w(
        plan.t_sleep_s,
        plan.t_exchange_s,
        plan.gamma_d_w,
        radio,
        constants,
    );
    if plan.p_cci == 0.0 {
        return no_cci;
    }
    let cci = variant_power_w(
        plan.t_sleep_cci_s,
        plan.t_exchange_cci_s,
        plan.gamma_d_cci_w,
        radio,
        constants,
    );
    (1.0 - plan.p_cci) * no_cci + plan.p_cci * cci
}

/// Probability that the on-period of sub-link `l` overlaps an on-period of
/// the co-channel sub-link `m`, from the two duty cycles alone. Clamped to
/// [0, 1]: the closed form can exceed one for extreme duty cycles.
pub fn overlap_probability(
    t_l_exchange_s: f64,
    t_m_exchange_s: f64,
    t_m_sleep_s: f64,
    k_m: u32,
    lambda_m_pps: f64,
    constants: &DutyCycleConstants,
) -> f64 {
    let period_m = k_m as f64 / lambda_m_pps - constants.delta_s;
    let ratio = (t_m_exchange_s + t_l_exchange_s) / period_m;
    let p = if t_m_sleep_s > t_l_exchange_s {
        ratio
    } else {
        0.5 * (1.0 + ratio)
    };
    p.clamp(0.0, 1.0)
}

/// Overlap probability between two planned sub-links (`m` interfering with
/// `l`), reading the duty cycle of `m` from its plan.
pub fn overlap_probability_plans(
    plan_l: &SubLinkPlan,
    plan_m: &SubLinkPlan,
    constants: &DutyCycleConstants,
) -> f64 {
    overlap_probability(
        plan_l.t_exchange_s,
        plan_m.t_exchange_s,
        plan_m.t_sleep_s,
        plan_m.theta.k,
        plan_m.lambda_pps,
        constants,
    )
}

/// Probability of CCI at a sub-link given its first-tier co-channel
/// neighbors as (LoS probability, overlap probability) pairs. Interference
/// needs both a line of sight and overlapping on-periods.
pub fn cci_probability(neighbors: &[(f64, f64)]) -> f64 {
    let p = 1.0
        - neighbors
            .iter()
            .map(|&(p_los, p_ov)| 1.0 - p_los * p_ov)
            .product::<f64>();
    p.clamp(0.0, 1.0)
}
