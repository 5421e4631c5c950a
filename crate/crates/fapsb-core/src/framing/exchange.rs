//! Time and power of one successful payload/ack exchange over a sub-link.

use super::markov::{state_durations, steady_state, ChainDurations, ErrorProbs, SteadyState};
use super::{AggregationShape, FrameTiming};
use crate::error::{Error, Result};
use crate::mcs::McsTable;
use crate::radio::RadioProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    /// Payload A-MPDU attempt (first or retry).
    Payload,
    /// Block ack following a payload attempt.
    PayloadBa,
    /// TCP-ack A-MPDU attempt.
    Ack,
    /// Block ack following a TCP-ack attempt.
    AckBa,
}

/// One chain state with its duration, steady-state weight, time proportion
/// within its side, and per-visit energies for the transmitting and
/// receiving radio.
#[derive(Debug, Clone)]
pub struct StateEntry {
    pub kind: StateKind,
    pub retry: u32,
    pub duration_s: f64,
    pub kappa: f64,
    pub pi: f64,
    pub energy_tx_j: f64,
    pub energy_rx_j: f64,
}

/// Mean time and split power of a single successful TCP exchange.
#[derive(Debug, Clone)]
pub struct ExchangeResult {
    pub t_exchange_s: f64,
    pub t_payload_side_s: f64,
    pub t_ack_side_s: f64,
    /// Average power of the radio that transmits the payload.
    pub p_tx_w: f64,
    /// Average power of the radio that receives the payload.
    pub p_rx_w: f64,
    pub states: Vec<StateEntry>,
}

impl ExchangeResult {
    /// Combined pair power while exchanging.
    pub fn gamma_d_w(&self) -> f64 {
        self.p_tx_w + self.p_rx_w
    }
}

fn build_states(dur: &ChainDurations, ss: &SteadyState) -> Vec<StateEntry> {
    let mut states = Vec::new();
    let mut push = |kind: StateKind, kappas: &[f64], t_of: &dyn Fn(usize) -> f64| {
        for (m, &kappa) in kappas.iter().enumerate() {
            states.push(StateEntry {
                kind,
                retry: m as u32,
                duration_s: t_of(m),
                kappa,
                pi: 0.0,
                energy_tx_j: 0.0,
                energy_rx_j: 0.0,
            });
        }
    };
    push(StateKind::Payload, &ss.payload, &|m| dur.payload_s[m]);
    push(StateKind::PayloadBa, &ss.payload_ba, &|_| dur.ba_s);
    push(StateKind::Ack, &ss.ack, &|m| dur.ack_s[m]);
    push(StateKind::AckBa, &ss.ack_ba, &|_| dur.ba_s);
    states
}

fn fill_time_proportions(states: &mut [StateEntry]) {
    // pi is normalized inside each side's group: payload states together
    // with their BAs, and the ack side likewise.
    let is_payload_side = |k: StateKind| matches!(k, StateKind::Payload | StateKind::PayloadBa);
    for side in [true, false] {
        let total: f64 = states
            .iter()
            .filter(|s| is_payload_side(s.kind) == side)
            .map(|s| s.kappa * s.duration_s)
            .sum();
        for s in states.iter_mut().filter(|s| is_payload_side(s.kind) == side) {
            s.pi = s.kappa * s.duration_s / total;
        }
    }
}

/// Mean number of chain traversals per successful delivery, folded into a
/// side duration: the net entry rate into the side's first attempt, minus
/// the attempts that exhaust the retry ladder and restart the segment,
/// inverted and scaled by the per-A-MSDU delivery ratio.
fn side_time(
    states: &[StateEntry],
    data_kind: StateKind,
    ba_kind: StateKind,
    m_max: u32,
    p_amsdu: f64,
) -> Result<f64> {
    let group: Vec<&StateEntry> = states
        .iter()
        .filter(|s| s.kind == data_kind || s.kind == ba_kind)
        .collect();
    let first = group
        .iter()
        .find(|s| s.kind == data_kind && s.retry == 0)
        .unwrap();
    let last_data = group
        .iter()
        .find(|s| s.kind == data_kind && s.retry == m_max)
        .unwrap();
    let last_ba = group
        .iter()
        .find(|s| s.kind == ba_kind && s.retry == m_max)
        .unwrap();
    let net_rate = first.pi / first.duration_s
        - last_data.pi / last_data.duration_s
        - last_ba.pi / last_ba.duration_s;
    if net_rate <= 0.0 {
        return Err(Error::ModelValidity(net_rate));
    }
    Ok(1.0 / ((1.0 - p_amsdu) * net_rate))
}

/// Mean time of one successful exchange (payload delivered and TCP ack
/// returned), with the full state table attached. Power fields are zero
/// until `exchange_power` fills them.
pub fn exchange_time(
    payload: &AggregationShape,
    ack: &AggregationShape,
    eta: u32,
    timing: &FrameTiming,
    table: &McsTable,
    probs: &ErrorProbs,
    m_max: u32,
) -> Result<ExchangeResult> {
    let dur = state_durations(payload, ack, eta, timing, table, m_max)?;
    let ss = steady_state(probs.p_p, probs.p_a, probs.p_ack, m_max)?;
    let mut states = build_states(&dur, &ss);
    fill_time_proportions(&mut states);

    let t_payload = side_time(
        &states,
        StateKind::Payload,
        StateKind::PayloadBa,
        m_max,
        probs.p_amsdu_p,
    )?;
    let t_ack = side_time(&states, StateKind::Ack, StateKind::AckBa, m_max, probs.p_amsdu_ack)?;

    Ok(ExchangeResult {
        t_exchange_s: t_payload + t_ack,
        t_payload_side_s: t_payload,
        t_ack_side_s: t_ack,
        p_tx_w: 0.0,
        p_rx_w: 0.0,
        states,
    })
}

/// Fills per-state energies and the split average powers of the two radios
/// of the sub-link.
pub fn exchange_power(
    payload: &AggregationShape,
    ack: &AggregationShape,
    eta: u32,
    timing: &FrameTiming,
    table: &McsTable,
    probs: &ErrorProbs,
    radio: &RadioProfile,
    tx_power_dbm: f64,
    m_max: u32,
) -> Result<ExchangeResult> {
    let mut result = exchange_time(payload, ack, eta, timing, table, probs, m_max)?;
    let dur = state_durations(payload, ack, eta, timing, table, m_max)?;
    let v = radio.supply_v;
    let (i_tx, i_rx, i_idle) = (radio.i_tx(tx_power_dbm), radio.i_rx_a, radio.i_idle_a);

    for s in result.states.iter_mut() {
        // Contention time runs at idle draw, frame airtime at tx/rx draw.
        let (idle_s, air_s) = match s.kind {
            StateKind::Payload => (timing.aifs_s + timing.mean_backoff_s(s.retry), dur.t_p_s),
            StateKind::Ack => (timing.aifs_s + timing.mean_backoff_s(s.retry), dur.t_ack_s),
            StateKind::PayloadBa | StateKind::AckBa => (timing.sifs_s, dur.t_ba_s),
        };
        s.energy_tx_j = idle_s * i_idle * v + air_s * i_tx * v;
        s.energy_rx_j = idle_s * i_idle * v + air_s * i_rx * v;
    }

    // The payload transmitter sends data states and receives their BAs on
    // the payload side, and mirrors roles on the ack side.
    let weight_p = result.t_payload_side_s / result.t_exchange_s;
    let weight_a = result.t_ack_side_s / result.t_exchange_s;
    let mut p_tx = 0.0;
    let mut p_rx = 0.0;
    for s in &result.states {
        let rate_tx = s.pi * s.energy_tx_j / s.duration_s;
        let rate_rx = s.pi * s.energy_rx_j / s.duration_s;
        match s.kind {
            StateKind::Payload => {
                p_tx += weight_p * rate_tx;
                p_rx += weight_p * rate_rx;
            }
            StateKind::PayloadBa => {
                p_tx += weight_p * rate_rx;
                p_rx += weight_p * rate_tx;
            }
            StateKind::Ack => {
                p_tx += weight_a * rate_rx;
                p_rx += weight_a * rate_tx;
            }
            StateKind::AckBa => {
                p_tx += weight_a * rate_tx;
                p_rx += weight_a * rate_rx;
            }
        }
    }
    result.p_tx_w = p_tx;
    result.p_rx_w = p_rx;
    Ok(result)
}
