//! Full evaluation of one sub-link operating point: outage, BER at the
//! mean SINR, exchange time/power, sleep duration, and average power.

use crate::channel::{outage_probability, ChannelStats, InterferenceMoments};
use crate::dutycycle::{sleep_duration, variant_power_w, DutyCycleConstants, SleepDuration};
use crate::error::{Error, Result};
use crate::framing::{exchange_power, frame_error_probs, AggregationShape, FrameTiming};
use crate::mcs::{BerModel, McsTable};
use crate::radio::RadioProfile;

/// Everything the planner needs to price a sub-link operating point.
pub struct EvalContext<'a> {
    pub stats: &'a ChannelStats,
    pub radio: &'a RadioProfile,
    pub timing: &'a FrameTiming,
    pub table: &'a McsTable,
    pub constants: &'a DutyCycleConstants,
    pub ber_model: &'a dyn BerModel,
    pub gains_db: (f64, f64),
    pub noise_floor_dbm: f64,
    pub msdu_bytes: u64,
    pub ack_bytes: u64,
}

/// Outcome of pricing one operating point. Present only when the channel
/// model has LoS statistics at the distance and the retry chain converges;
/// otherwise the point is simply infeasible.
#[derive(Debug, Clone)]
pub struct SublinkEval {
    pub p_out: f64,
    pub ber: f64,
    pub t_exchange_s: f64,
    pub gamma_d_w: f64,
    pub sleep: SleepDuration,
    /// Duty-cycled average power of the sub-link pair; infinite when the
    /// sleep constraint cannot be met.
    pub power_w: f64,
}

impl<'a> EvalContext<'a> {
    pub fn noise(&self) -> InterferenceMoments {
        InterferenceMoments::noise(self.noise_floor_dbm)
    }

    /// Mean received SINR over the interference-plus-noise mean, in dB.
    pub fn mean_sinr_db(
        &self,
        tx_power_dbm: f64,
        d_m: f64,
        interference: &InterferenceMoments,
    ) -> Option<f64> {
        self.stats.mu_at(d_m).map(|mu| {
            tx_power_dbm + self.gains_db.0 + self.gains_db.1 - mu - interference.mu_dbm
        })
    }

    /// Prices the operating point `(tx power, MCS, K)` on a sub-link of
    /// length `d_m` carrying `lambda_pps`, under the given interference.
    pub fn evaluate(
        &self,
        tx_power_dbm: f64,
        eta: u32,
        k: u32,
        d_m: f64,
        lambda_pps: f64,
        interference: InterferenceMoments,
    ) -> Result<Option<SublinkEval>> {
        let mcs = self.table.get(eta)?;
        let Some(sinr_db) = self.mean_sinr_db(tx_power_dbm, d_m, &interference) else {
            return Ok(None);
        };
        let p_out = outage_probability(
            self.stats,
            (tx_power_dbm, eta),
            d_m,
            self.gains_db,
            interference,
            self.table,
        )?;
        let ber = self.ber_model.ber(sinr_db, mcs);

        let payload = AggregationShape::pack(k, self.msdu_bytes, self.timing)?;
        let ack = AggregationShape::pack(k, self.ack_bytes, self.timing)?;
        let probs = frame_error_probs(&payload, &ack, ber, self.timing)?;
        let m_max = self.timing.m_max();
        let exchange = match exchange_power(
            &payload,
            &ack,
            eta,
            self.timing,
            self.table,
            &probs,
            self.radio,
            tx_power_dbm,
            m_max,
        ) {
            Ok(x) => x,
            // Retransmission-saturated operating points are infeasible, not
            // fatal: sweeps must stay total.
            Err(Error::ModelValidity(_)) | Err(Error::ChainDivergence(_)) => return Ok(None),
            Err(e) => return Err(e),
        };

        let sleep = sleep_duration(k, lambda_pps, exchange.t_exchange_s, self.constants)?;
        let power_w = match sleep {
            SleepDuration::Feasible(t_sl) => variant_power_w(
                t_sl,
                exchange.t_exchange_s,
                exchange.gamma_d_w(),
                self.radio,
                self.constants,
            ),
            SleepDuration::Infeasible(_) => f64::INFINITY,
        };
        Ok(Some(SublinkEval {
            p_out,
            ber,
            t_exchange_s: exchange.t_exchange_s,
            gamma_d_w: exchange.gamma_d_w(),
            sleep,
            power_w,
        }))
    }

    /// Smallest aggregation length whose sleep clears the wake-up minimum,
    /// by bisection on the (monotone) sleep margin. `None` when even k_max
    /// fails.
    pub fn k_lower_bound(
        &self,
        tx_power_dbm: f64,
        eta: u32,
        d_m: f64,
        lambda_pps: f64,
        k_max: u32,
        interference: InterferenceMoments,
    ) -> Result<Option<u32>> {
        let feasible = |k: u32| -> Result<bool> {
            Ok(self
                .evaluate(tx_power_dbm, eta, k, d_m, lambda_pps, interference)?
                .map(|e| e.sleep.is_feasible())
                .unwrap_or(false))
        };
        if !feasible(k_max)? {
            return Ok(None);
        }
        let (mut lo, mut hi) = (1u32, k_max);
        if feasible(lo)? {
            return Ok(Some(lo));
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if feasible(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(Some(hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{fit_channel_stats, generate_terrain, RayTraceConfig};
    use crate::dbmath::noise_floor_dbm;
    use crate::mcs::WaterfallBer;

    pub(crate) fn desk_stats() -> ChannelStats {
        let grid = generate_terrain(0.0, 3000.0, 50.0, 0).unwrap();
        let mut cfg = RayTraceConfig::default_80211ad();
        cfg.n_trials = 60;
        fit_channel_stats(
            &grid,
            &cfg,
            &[100.0, 200.0, 350.0, 500.0, 700.0, 900.0, 1200.0],
        )
        .unwrap()
    }

    #[test]
    fn evaluate_produces_consistent_point() {
        let stats = desk_stats();
        let radio = RadioProfile::default_80211ad();
        let timing = FrameTiming::default_80211ad();
        let table = McsTable::default_80211ad();
        let constants = DutyCycleConstants::default_for(&timing);
        let ber_model = WaterfallBer::default();
        let ctx = EvalContext {
            stats: &stats,
            radio: &radio,
            timing: &timing,
            table: &table,
            constants: &constants,
            ber_model: &ber_model,
            gains_db: (46.0, 46.0),
            noise_floor_dbm: noise_floor_dbm(2.16e9, 6.0),
            msdu_bytes: 2200,
            ack_bytes: 40,
        };
        let eval = ctx
            .evaluate(5.0, 24, 100, 692.8, 700.0, ctx.noise())
            .unwrap()
            .expect("within stats range");
        assert!(eval.p_out < 1e-6, "p_out {}", eval.p_out);
        assert!(eval.ber < 1e-9);
        assert!(eval.sleep.is_feasible());
        assert!(eval.power_w > 0.03 && eval.power_w < 10.0, "{}", eval.power_w);

        // Power falls with K for fixed psi (the scenario split rests on it).
        let mut prev = f64::INFINITY;
        for k in [1u32, 2, 5, 10, 20, 40, 80, 117] {
            let e = ctx
                .evaluate(5.0, 24, k, 692.8, 700.0, ctx.noise())
                .unwrap()
                .unwrap();
            assert!(
                e.power_w < prev,
                "k {k}: {} >= {prev}",
                e.power_w
            );
            prev = e.power_w;
        }
    }

    #[test]
    fn k_lower_bound_matches_linear_scan() {
        let stats = desk_stats();
        let radio = RadioProfile::default_80211ad();
        let timing = FrameTiming::default_80211ad();
        let table = McsTable::default_80211ad();
        let constants = DutyCycleConstants::default_for(&timing);
        let ber_model = WaterfallBer::default();
        let ctx = EvalContext {
            stats: &stats,
            radio: &radio,
            timing: &timing,
            table: &table,
            constants: &constants,
            ber_model: &ber_model,
            gains_db: (46.0, 46.0),
            noise_floor_dbm: noise_floor_dbm(2.16e9, 6.0),
            msdu_bytes: 2200,
            ack_bytes: 40,
        };
        // High arrival rate pushes the bound above one packet.
        let lambda = 50_000.0;
        let lb = ctx
            .k_lower_bound(5.0, 24, 692.8, lambda, 117, ctx.noise())
            .unwrap()
            .expect("k_max is feasible");
        let scan = (1..=117)
            .find(|&k| {
                ctx.evaluate(5.0, 24, k, 692.8, lambda, ctx.noise())
                    .unwrap()
                    .map(|e| e.sleep.is_feasible())
                    .unwrap_or(false)
            })
            .unwrap();
        assert_eq!(lb, scan);
        assert!(lb > 1);
    }
}
