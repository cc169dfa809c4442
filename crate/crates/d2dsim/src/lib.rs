//! Trace-driven, discrete-time simulator for device-to-device replication of
//! social content across edge-network regions.
//!
//! Social content propagates over an online social graph while users move
//! between small regions served by Wi-Fi access points. Users carry content
//! for each other; a replication strategy decides each slot which user caches
//! what. This crate provides:
//!
//! * trace parsing and validation ([`trace`]), plus synthetic trace
//!   generation matched to measured distribution shapes ([`synth`]);
//! * the predictive model tables: social influence, regional preference,
//!   regional social popularity ([`propagation`]) and migration/mobility
//!   indices ([`mobility`]);
//! * the joint propagation- and mobility-aware replication strategy, two
//!   baselines, and an exact optimizer for tiny instances ([`strategy`]);
//! * the slot-based simulation engine ([`simulator`]), evaluation metrics and
//!   sensitivity sweeps ([`metrics`]), and the `d2dsim` command line
//!   ([`cli`]).

pub mod cli;
pub mod config;
pub mod error;
pub mod ids;
pub mod manifest;
pub mod metrics;
pub mod mobility;
pub mod propagation;
pub mod simulator;
pub mod strategy;
pub mod synth;
pub mod trace;

pub use error::{Error, Result};
pub use ids::{ContentId, RegionId, UserId};
