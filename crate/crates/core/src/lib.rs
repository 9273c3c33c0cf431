//! Solver library for housing markets with strict partial-order
//! preferences: strong-core emptiness and construction with forbidden and
//! forced trades, verifiable certificates, an independent brute-force
//! oracle, cross-check algorithms, an integer-program emitter, and
//! experiment harnesses.
//!
//! All data types are immutable after construction and all algorithms are
//! deterministic: identical inputs (and seeds) produce identical outputs.

pub mod graph;
pub mod market;

pub use market::{AgentId, Arc, Allocation, HousingMarket, Instance, MarketError};

/// Guard error for operations that enumerate exhaustively and therefore
/// only run at desk scale.
#[derive(Debug, Clone, thiserror::Error)]
#[error("instance too large: {n} agents exceeds the configured bound {bound}")]
pub struct InstanceTooLarge {
    pub n: usize,
    pub bound: usize,
}
