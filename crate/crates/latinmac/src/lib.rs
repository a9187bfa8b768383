//! Latin-rectangle medium-access scheduling for coexisting TDMA body-area
//! networks.
//!
//! The crate builds channel/time-slot hopping schedules from orthogonal
//! families of Latin rectangles, simulates inter-network collisions under
//! random mobility, and evaluates the closed-form collision-probability and
//! throughput model against Monte Carlo oracles.
//!
//! - [`latin`]: squares, rectangles, orthogonal families and symbol patterns
//! - [`scheduler`]: DAIL hopping schedules and CHIM default-channel/backup
//!   schedules
//! - [`analytic`]: collision probabilities, throughput bounds and oracles
//! - [`simulator`]: slot-by-slot collision simulation and metrics
//! - [`baselines`]: SMS static spectrum allocation and single-channel
//!   TDMA/GTS
//! - [`config`] / [`cli`]: experiment configuration, sweeps and CSV output
//!
//! The `examples/` directory has one runnable example per capability; the
//! thin `latinmac` binary exposes the same machinery as subcommands.

pub mod analytic;
pub mod baselines;
pub mod cli;
pub mod config;
pub mod error;
pub mod latin;
pub mod scheduler;
pub mod simulator;

pub use error::{Error, Result};
