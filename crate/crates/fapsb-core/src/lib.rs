//! Planning and evaluation toolkit for energy-efficient, duty-cycled,
//! frame-aggregated wireless mesh backhaul over wide areas.
//!
//! The crate computes per-sub-link operating parameters (transmit power,
//! MCS, aggregation length, sleep duration) that minimize total network
//! power under outage and latency constraints, and validates the analytical
//! predictions with a built-in discrete-event simulator.

pub mod channel;
pub mod constants;
pub mod dbmath;
pub mod dutycycle;
pub mod error;
pub mod framing;
pub mod mcs;
pub mod oracles;
pub mod radio;
pub mod topology;

pub use channel::{ChannelStats, InterferenceMoments, RayTraceConfig, TerrainGrid};
pub use error::{Error, Result};
pub use framing::{AggregationShape, ExchangeResult, FrameTiming};
pub use mcs::{BerModel, FixedBer, McsEntry, McsTable, WaterfallBer};
pub use radio::RadioProfile;
