use thiserror::Error;

/// Errors produced by the planning and simulation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point ({x}, {y}) outside terrain grid")]
    OutOfBounds { x: f64, y: f64 },

    #[error("unknown MCS index {0}")]
    UnknownMcs(u32),

    #[error("semi-Markov chain diverges: error probability {0} = 1 means no exchange ever completes")]
    ChainDivergence(f64),

    #[error("retransmission-saturated regime: exchange-time denominator {0} is not positive")]
    ModelValidity(f64),

    #[error("relay expectation not converged after {r_cap} relays (LoS probability {q_last} < 1)")]
    RelayNotConverged { r_cap: u32, q_last: f64 },

    #[error("curve fit failed: {0}")]
    FitError(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("simulation instability: queue at node {node} exceeded {cap} packets at t = {time_s} s")]
    SimInstability { node: usize, cap: usize, time_s: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
