//! Flat `key = value` experiment configuration.
//!
//! One assignment per line, `#` starts a comment, lists are comma-separated.
//! `dump` emits every key in a fixed order so that parse -> dump -> parse is
//! the identity.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scheduler::{DailTxMode, Scheme};
use crate::simulator::{EnergyModel, SimParams};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Schemes to run; the sweep grid is schemes x n_wbans.
    pub schemes: Vec<Scheme>,
    /// Network counts to sweep.
    pub n_wbans: Vec<usize>,
    pub sensors_per_wban: usize,
    pub channels: usize,
    pub slots: Option<usize>,
    /// Inactive-frame length; defaults to the sensor count.
    pub inactive_slots: Option<usize>,
    /// Radio power in dBm, carried as metadata only: the binary in-range
    /// predicate subsumes it.
    pub tx_power_dbm: f64,
    pub superframes: u64,
    pub replications: u32,
    pub seed: u64,
    pub arena_side: f64,
    pub interference_range: f64,
    pub body_radius: f64,
    pub e_tx: f64,
    pub e_rx: f64,
    pub e_hop: f64,
    pub e_retx: f64,
    pub dail_tx_per_superframe: DailTxMode,
    /// Neighbor count for the analytic commands; defaults to the sweep-derived
    /// value when absent.
    pub neighbors: Option<usize>,
    pub use_factor: f64,
    pub in_range_prob: f64,
    pub oracle_trials: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            schemes: vec![Scheme::Dail],
            n_wbans: vec![2],
            sensors_per_wban: 12,
            channels: 16,
            slots: None,
            inactive_slots: None,
            tx_power_dbm: -10.0,
            superframes: 50,
            replications: 1,
            seed: 0,
            arena_side: 10.0,
            interference_range: 3.0,
            body_radius: 1.0,
            e_tx: 1.0,
            e_rx: 0.5,
            e_hop: 0.2,
            e_retx: 1.0,
            dail_tx_per_superframe: DailTxMode::AllCells,
            neighbors: None,
            use_factor: 1.0,
            in_range_prob: 1.0,
            oracle_trials: 1_000_000,
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| Error::Config(format!("line {}: bad {what}: {value:?}", lineno + 1));
            match key {
                "scheme" => {
                    cfg.schemes = value
                        .split(',')
                        .map(|v| Scheme::parse(v.trim()))
                        .collect::<Result<_>>()?;
                }
                "n_wbans" => {
                    cfg.n_wbans = value
                        .split(',')
                        .map(|v| v.trim().parse::<usize>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| bad("n_wbans list"))?;
                }
                "sensors_per_wban" => cfg.sensors_per_wban = value.parse().map_err(|_| bad(key))?,
                "channels" => cfg.channels = value.parse().map_err(|_| bad(key))?,
                "slots" => cfg.slots = Some(value.parse().map_err(|_| bad(key))?),
                "inactive_slots" => {
                    cfg.inactive_slots = Some(value.parse().map_err(|_| bad(key))?)
                }
                "tx_power_dbm" => cfg.tx_power_dbm = value.parse().map_err(|_| bad(key))?,
                "superframes" => cfg.superframes = value.parse().map_err(|_| bad(key))?,
                "replications" => cfg.replications = value.parse().map_err(|_| bad(key))?,
                "seed" => cfg.seed = value.parse().map_err(|_| bad(key))?,
                "arena_side" => cfg.arena_side = value.parse().map_err(|_| bad(key))?,
                "interference_range" => {
                    cfg.interference_range = value.parse().map_err(|_| bad(key))?
                }
                "body_radius" => cfg.body_radius = value.parse().map_err(|_| bad(key))?,
                "e_tx" => cfg.e_tx = value.parse().map_err(|_| bad(key))?,
                "e_rx" => cfg.e_rx = value.parse().map_err(|_| bad(key))?,
                "e_hop" => cfg.e_hop = value.parse().map_err(|_| bad(key))?,
                "e_retx" => cfg.e_retx = value.parse().map_err(|_| bad(key))?,
                "dail_tx_per_superframe" => {
                    cfg.dail_tx_per_superframe = match value {
                        "all" => DailTxMode::AllCells,
                        "1" => DailTxMode::SinglePerSuperframe,
                        _ => return Err(bad("dail_tx_per_superframe (use \"all\" or \"1\")")),
                    }
                }
                "neighbors" => cfg.neighbors = Some(value.parse().map_err(|_| bad(key))?),
                "use_factor" => cfg.use_factor = value.parse().map_err(|_| bad(key))?,
                "in_range_prob" => cfg.in_range_prob = value.parse().map_err(|_| bad(key))?,
                "oracle_trials" => cfg.oracle_trials = value.parse().map_err(|_| bad(key))?,
                other => return Err(Error::Config(format!("line {}: unknown key {other:?}", lineno + 1))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(Error::Config("scheme list must not be empty".into()));
        }
        if self.n_wbans.is_empty() || self.n_wbans.contains(&0) {
            return Err(Error::Config("n_wbans must be a list of counts >= 1".into()));
        }
        if self.sensors_per_wban == 0 {
            return Err(Error::Config("sensors_per_wban must be >= 1".into()));
        }
        if self.channels < 2 {
            return Err(Error::Config("channels must be >= 2".into()));
        }
        if self.superframes == 0 {
            return Err(Error::Config("superframes must be >= 1".into()));
        }
        if self.replications == 0 {
            return Err(Error::Config("replications must be >= 1".into()));
        }
        if self.slots == Some(0) {
            return Err(Error::Config("slots must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.use_factor) || !(0.0..=1.0).contains(&self.in_range_prob) {
            return Err(Error::Config("use_factor and in_range_prob must be in [0, 1]".into()));
        }
        Ok(())
    }

    /// More channels than the standard's 16 are allowed but flagged.
    pub fn standard_compliant(&self) -> bool {
        self.channels <= 16
    }

    pub fn dump(&self) -> String {
        let mut out = String::new();
        let schemes: Vec<&str> = self.schemes.iter().map(|s| s.name()).collect();
        let _ = writeln!(out, "scheme = {}", schemes.join(","));
        let list: Vec<String> = self.n_wbans.iter().map(|n| n.to_string()).collect();
        let _ = writeln!(out, "n_wbans = {}", list.join(","));
        let _ = writeln!(out, "sensors_per_wban = {}", self.sensors_per_wban);
        let _ = writeln!(out, "channels = {}", self.channels);
        if let Some(slots) = self.slots {
            let _ = writeln!(out, "slots = {slots}");
        }
        if let Some(inactive) = self.inactive_slots {
            let _ = writeln!(out, "inactive_slots = {inactive}");
        }
        let _ = writeln!(out, "tx_power_dbm = {}", self.tx_power_dbm);
        let _ = writeln!(out, "superframes = {}", self.superframes);
        let _ = writeln!(out, "replications = {}", self.replications);
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "arena_side = {}", self.arena_side);
        let _ = writeln!(out, "interference_range = {}", self.interference_range);
        let _ = writeln!(out, "body_radius = {}", self.body_radius);
        let _ = writeln!(out, "e_tx = {}", self.e_tx);
        let _ = writeln!(out, "e_rx = {}", self.e_rx);
        let _ = writeln!(out, "e_hop = {}", self.e_hop);
        let _ = writeln!(out, "e_retx = {}", self.e_retx);
        let mode = match self.dail_tx_per_superframe {
            DailTxMode::AllCells => "all",
            DailTxMode::SinglePerSuperframe => "1",
        };
        let _ = writeln!(out, "dail_tx_per_superframe = {mode}");
        if let Some(o) = self.neighbors {
            let _ = writeln!(out, "neighbors = {o}");
        }
        let _ = writeln!(out, "use_factor = {}", self.use_factor);
        let _ = writeln!(out, "in_range_prob = {}", self.in_range_prob);
        let _ = writeln!(out, "oracle_trials = {}", self.oracle_trials);
        out
    }

    /// Simulation inputs for one grid point.
    pub fn sim_params(&self, scheme: Scheme, n_wbans: usize) -> SimParams {
        SimParams {
            scheme,
            n_wbans,
            sensors_per_wban: self.sensors_per_wban,
            channels: self.channels,
            slots_override: self.slots,
            inactive_slots: self.inactive_slots,
            superframes: self.superframes,
            arena_side: self.arena_side,
            interference_range: self.interference_range,
            body_radius: self.body_radius,
            energy: EnergyModel {
                e_tx: self.e_tx,
                e_rx: self.e_rx,
                e_hop: self.e_hop,
                e_retx: self.e_retx,
            },
            dail_tx_mode: self.dail_tx_per_superframe,
        }
    }

    /// Seed for one replication: `seed + replication * 10007`; schedule
    /// builders then add the network index.
    pub fn replication_seed(&self, replication: u32) -> u64 {
        self.seed.wrapping_add(replication as u64 * 10007)
    }
}
