//! Command implementations behind the `latinmac` binary.
//!
//! Subcommands: `gen-latin`, `dump-schedule`, `simulate`, `analytic`,
//! `compare`. Exit codes: 0 success, 2 usage/config error, 3 I/O error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::analytic::{
    chim_cfp_pmf, chim_imb_pmf, chim_q, chim_tdma_pr_x, dail_pr_x, dail_success_prob,
    dail_throughput_bounds, oracle_chim_imb, oracle_chim_q, oracle_chim_tdma_pr_x, oracle_dail,
    oracle_dail_pr_x, ChimModelParams, DailModelParams,
};
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::latin::{is_prime, mols_family};
use crate::scheduler::{chim_build, dail_build_with_slots, Scheme};
use crate::simulator::{run, MetricsRecord, RunSummary};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

const USAGE: &str = "\
usage: latinmac <command> [flags]

commands:
  gen-latin <K> --out <dir>      write the K-1 orthogonal squares of prime order K
  dump-schedule --config <path>  print per-sensor schedules [--seed <u64>]
  simulate --config <path> --out <dir>   run the sweep grid [--seed <u64>]
  analytic --config <path>       print closed-form and oracle values as CSV
  compare --config <path>        print analytic-vs-simulated CSV [--seed <u64>]
";

struct ParsedArgs {
    command: String,
    positional: Vec<String>,
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    seed: Option<u64>,
}

fn parse_args(args: &[String]) -> Result<ParsedArgs> {
    let mut it = args.iter();
    let command = it
        .next()
        .ok_or_else(|| Error::Config("missing command".into()))?
        .clone();
    let mut parsed = ParsedArgs {
        command,
        positional: Vec::new(),
        config: None,
        out: None,
        seed: None,
    };
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--config" => {
                let v = it.next().ok_or_else(|| Error::Config("--config needs a path".into()))?;
                parsed.config = Some(PathBuf::from(v));
            }
            "--out" => {
                let v = it.next().ok_or_else(|| Error::Config("--out needs a directory".into()))?;
                parsed.out = Some(PathBuf::from(v));
            }
            "--seed" => {
                let v = it.next().ok_or_else(|| Error::Config("--seed needs a value".into()))?;
                parsed.seed = Some(
                    v.parse()
                        .map_err(|_| Error::Config(format!("bad seed {v:?}")))?,
                );
            }
            flag if flag.starts_with("--") => {
                return Err(Error::Config(format!("unknown flag {flag:?}")));
            }
            other => parsed.positional.push(other.to_string()),
        }
    }
    Ok(parsed)
}

/// Entry point shared by the binary and the integration tests.
pub fn main_with_args(args: &[String]) -> i32 {
    if args.is_empty() || args[0] == "--help" || args[0] == "help" {
        print!("{USAGE}");
        return if args.is_empty() { EXIT_USAGE } else { EXIT_OK };
    }
    let parsed = match parse_args(args) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            eprint!("{USAGE}");
            return EXIT_USAGE;
        }
    };
    let result = match parsed.command.as_str() {
        "gen-latin" => cmd_gen_latin(&parsed),
        "dump-schedule" => cmd_dump_schedule(&parsed),
        "simulate" => cmd_simulate(&parsed),
        "analytic" => cmd_analytic(&parsed),
        "compare" => cmd_compare(&parsed),
        other => {
            eprintln!("error: unknown command {other:?}");
            eprint!("{USAGE}");
            return EXIT_USAGE;
        }
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) => EXIT_IO,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn load_config(parsed: &ParsedArgs) -> Result<ExperimentConfig> {
    let path = parsed
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config is required".into()))?;
    let text = fs::read_to_string(path)?;
    let mut cfg = ExperimentConfig::parse(&text)?;
    if let Some(seed) = parsed.seed {
        cfg.seed = seed;
    }
    if !cfg.standard_compliant() {
        eprintln!(
            "warning: {} channels exceeds the 16 standard channels",
            cfg.channels
        );
    }
    Ok(cfg)
}

fn cmd_gen_latin(parsed: &ParsedArgs) -> Result<()> {
    let k: usize = parsed
        .positional
        .first()
        .ok_or_else(|| Error::Config("gen-latin needs the order K".into()))?
        .parse()
        .map_err(|_| Error::Config("K must be a positive integer".into()))?;
    if !is_prime(k) {
        return Err(Error::ConstructionUnsupported(format!(
            "K = {k} is not prime; no cyclic orthogonal family exists"
        )));
    }
    let out = parsed
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&out)?;
    let family = mols_family(k)?;
    for (i, square) in family.members().iter().enumerate() {
        let rect = square.truncate(k);
        let path = out.join(format!("latin_k{k}_a{}.txt", i + 1));
        fs::write(&path, rect.dump())?;
        println!("{}", path.display());
    }
    Ok(())
}

/// One line per sensor: `wban=<i> sensor=<j> scheme=<name> cells=ch:slot,...`
/// with the default channel and TDMA slot appended for CHIM (whose cells are
/// the backup hopping cycle).
pub fn render_schedules(cfg: &ExperimentConfig) -> Result<String> {
    let n = cfg.n_wbans[0];
    let seed = cfg.seed;
    let mut out = String::new();
    for &scheme in &cfg.schemes {
        match scheme {
            Scheme::Dail => {
                let (schedules, _) =
                    dail_build_with_slots(n, cfg.sensors_per_wban, cfg.channels, cfg.slots, seed)?;
                for ws in &schedules {
                    for (j, sensor) in ws.sensors.iter().enumerate() {
                        let cells: Vec<String> = sensor
                            .pattern
                            .cells
                            .iter()
                            .map(|c| format!("{}:{}", c.channel, c.slot))
                            .collect();
                        let _ = writeln!(
                            out,
                            "wban={} sensor={} scheme=DAIL cells={}",
                            ws.wban_id,
                            j,
                            cells.join(",")
                        );
                    }
                }
            }
            Scheme::Chim => {
                let (schedules, _) = chim_build(n, cfg.sensors_per_wban, cfg.channels, seed)?;
                let cycle = cfg.channels.min(cfg.sensors_per_wban) as u64;
                for ws in &schedules {
                    for (j, sensor) in ws.sensors.iter().enumerate() {
                        let cells: Vec<String> = (0..cycle)
                            .filter_map(|f| ws.backup_for(j, f))
                            .map(|c| format!("{}:{}", c.channel, c.slot))
                            .collect();
                        let _ = writeln!(
                            out,
                            "wban={} sensor={} scheme=CHIM cells={} dfc={} tdma={}",
                            ws.wban_id,
                            j,
                            cells.join(","),
                            ws.default_channel,
                            sensor.tdma_slot
                        );
                    }
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "dump-schedule supports DAIL and CHIM, not {}",
                    other.name()
                )))
            }
        }
    }
    Ok(out)
}

fn cmd_dump_schedule(parsed: &ParsedArgs) -> Result<()> {
    let cfg = load_config(parsed)?;
    print!("{}", render_schedules(&cfg)?);
    Ok(())
}

pub fn superframe_csv_header() -> &'static str {
    "superframe,scheme,n_wbans,attempted,collided,successful,deferred,energy,hops"
}

pub fn summary_csv_header() -> &'static str {
    "scheme,n_wbans,mcp,cfp,mpc,mspr,dps,tp,replications,seed"
}

fn superframe_csv(scheme: Scheme, n: usize, records: &[MetricsRecord]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", superframe_csv_header());
    for r in records {
        let energy: f64 = r.energy_per_wban.iter().sum();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{:.6},{}",
            r.superframe,
            scheme.name(),
            n,
            r.attempted_tx,
            r.collided_tx,
            r.successful_rx,
            r.deferred_packets,
            energy,
            r.hop_count
        );
    }
    out
}

fn summary_csv_row(s: &RunSummary, replications: u32, seed: u64) -> String {
    format!(
        "{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{},{}",
        s.scheme.name(),
        s.n_wbans,
        s.mcp,
        s.cfp,
        s.mpc,
        s.mspr,
        s.dps,
        s.tp,
        replications,
        seed
    )
}

fn mean_summary(summaries: &[RunSummary]) -> RunSummary {
    let n = summaries.len() as f64;
    let mut acc = summaries[0].clone();
    acc.mcp = summaries.iter().map(|s| s.mcp).sum::<f64>() / n;
    acc.cfp = summaries.iter().map(|s| s.cfp).sum::<f64>() / n;
    acc.mpc = summaries.iter().map(|s| s.mpc).sum::<f64>() / n;
    acc.mspr = summaries.iter().map(|s| s.mspr).sum::<f64>() / n;
    acc.dps = summaries.iter().map(|s| s.dps).sum::<f64>() / n;
    acc.tp = summaries.iter().map(|s| s.tp).sum::<f64>() / n;
    acc
}

/// Runs the whole replications-by-sweep grid (schemes x network counts) and
/// writes one per-superframe CSV per (grid point, replication) plus a
/// replication-averaged `summary.csv`.
pub fn run_simulate(cfg: &ExperimentConfig, out: &Path) -> Result<Vec<RunSummary>> {
    fs::create_dir_all(out)?;
    let mut summary_rows = String::new();
    let _ = writeln!(summary_rows, "{}", summary_csv_header());
    let mut means = Vec::new();
    for &scheme in &cfg.schemes {
        for &n in &cfg.n_wbans {
            let params = cfg.sim_params(scheme, n);
            let mut summaries = Vec::new();
            for rep in 0..cfg.replications {
                let seed = cfg.replication_seed(rep);
                let (records, summary) = run(&params, seed)?;
                let csv = superframe_csv(scheme, n, &records);
                let path = out.join(format!(
                    "sf_{}_n{}_rep{}.csv",
                    scheme.name().to_ascii_lowercase(),
                    n,
                    rep
                ));
                fs::write(&path, csv)?;
                summaries.push(summary);
            }
            let mean = mean_summary(&summaries);
            let _ = writeln!(
                summary_rows,
                "{}",
                summary_csv_row(&mean, cfg.replications, cfg.seed)
            );
            means.push(mean);
        }
    }
    fs::write(out.join("summary.csv"), summary_rows)?;
    Ok(means)
}

fn cmd_simulate(parsed: &ParsedArgs) -> Result<()> {
    let cfg = load_config(parsed)?;
    let out = parsed
        .out
        .clone()
        .ok_or_else(|| Error::Config("--out is required for simulate".into()))?;
    let schemes: Vec<&str> = cfg.schemes.iter().map(|s| s.name()).collect();
    println!(
        "seed={} schemes={} grid={:?} replications={}",
        cfg.seed,
        schemes.join(","),
        cfg.n_wbans,
        cfg.replications
    );
    run_simulate(&cfg, &out)?;
    println!("wrote {}", out.join("summary.csv").display());
    Ok(())
}

/// Neighbor count for the analytic model at one grid point: every sensor of
/// every other network.
fn derived_neighbors(cfg: &ExperimentConfig, n: usize) -> usize {
    cfg.neighbors
        .unwrap_or((n.saturating_sub(1)) * cfg.sensors_per_wban)
}

fn analytic_order(cfg: &ExperimentConfig) -> usize {
    cfg.slots.unwrap_or(cfg.sensors_per_wban)
}

pub fn run_analytic(cfg: &ExperimentConfig) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "model,param_set,quantity,value,stderr");
    let order = analytic_order(cfg);
    for (&scheme, &n) in cfg
        .schemes
        .iter()
        .flat_map(|s| cfg.n_wbans.iter().map(move |n| (s, n)))
    {
        match scheme {
            Scheme::Dail => {
                let o = derived_neighbors(cfg, n);
                let params = DailModelParams::new(o, cfg.use_factor, cfg.channels, order)?;
                let set = format!(
                    "O={o};omega={};M={};K={order}",
                    cfg.use_factor, cfg.channels
                );
                let lambda = dail_success_prob(&params);
                let _ = writeln!(out, "dail,{set},lambda,{lambda:.6},0");
                let est = oracle_dail(&params, cfg.oracle_trials, cfg.seed);
                let _ = writeln!(
                    out,
                    "dail,{set},lambda_oracle,{:.6},{:.6}",
                    est.mean, est.std_err
                );
                let bounds =
                    dail_throughput_bounds(o, n, cfg.channels, order, order.saturating_sub(1));
                let _ = writeln!(out, "dail,{set},t_min,{:.6},0", bounds.t_min);
                let _ = writeln!(out, "dail,{set},t_max,{:.6},0", bounds.t_max);
            }
            Scheme::Chim => {
                let p = derived_neighbors(cfg, n);
                let params = ChimModelParams::new(p, cfg.in_range_prob, cfg.channels, order)?;
                let set = format!(
                    "P={p};alpha={};M={};K={order}",
                    cfg.in_range_prob, cfg.channels
                );
                for x in 0..=2.min(p) {
                    let v = chim_tdma_pr_x(&params, x)?;
                    let _ = writeln!(out, "chim,{set},tdma_pr_x{x},{v:.6},0");
                }
                let q = chim_q(&params, 2.min(p), 0);
                let _ = writeln!(out, "chim,{set},q_x{}_y0,{q:.6},0", 2.min(p));
                for t in 0..=3 {
                    let v = chim_imb_pmf(order, q, t);
                    let _ = writeln!(out, "chim,{set},imb_pmf_t{t},{v:.6},0");
                    let c = chim_cfp_pmf(order, q, cfg.channels, t);
                    let flag = if c > 1.0 { 1 } else { 0 };
                    let _ = writeln!(out, "chim,{set},cfp_pmf_t{t},{c:.6},{flag}");
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "analytic supports DAIL and CHIM, not {}",
                    other.name()
                )))
            }
        }
    }
    Ok(out)
}

fn cmd_analytic(parsed: &ParsedArgs) -> Result<()> {
    let cfg = load_config(parsed)?;
    print!("{}", run_analytic(&cfg)?);
    Ok(())
}

/// Analytic values against their Monte Carlo oracles, one row per quantity
/// with the absolute gap.
pub fn run_compare(cfg: &ExperimentConfig) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "model,param_set,quantity,analytic,simulated,stderr,gap");
    let order = analytic_order(cfg);
    let trials = cfg.oracle_trials;
    let mut row = |model: &str, set: &str, quantity: &str, a: f64, s: f64, se: f64| {
        let _ = writeln!(
            out,
            "{model},{set},{quantity},{a:.6},{s:.6},{se:.6},{:.6}",
            (a - s).abs()
        );
    };
    for (&scheme, &n) in cfg
        .schemes
        .iter()
        .flat_map(|s| cfg.n_wbans.iter().map(move |n| (s, n)))
    {
        match scheme {
            Scheme::Dail => {
                let o = derived_neighbors(cfg, n);
                let params = DailModelParams::new(o, cfg.use_factor, cfg.channels, order)?;
                let set = format!(
                    "O={o};omega={};M={};K={order}",
                    cfg.use_factor, cfg.channels
                );
                let est = oracle_dail(&params, trials, cfg.seed.wrapping_add(n as u64));
                row("dail", &set, "lambda", dail_success_prob(&params), est.mean, est.std_err);
                for x in 0..=2.min(o) {
                    let est = oracle_dail_pr_x(&params, x, trials, cfg.seed ^ (x as u64 + 1));
                    row(
                        "dail",
                        &set,
                        &format!("pr_x{x}"),
                        dail_pr_x(&params, x)?,
                        est.mean,
                        est.std_err,
                    );
                }
            }
            Scheme::Chim => {
                let p = derived_neighbors(cfg, n);
                let params = ChimModelParams::new(p, cfg.in_range_prob, cfg.channels, order)?;
                let set = format!(
                    "P={p};alpha={};M={};K={order}",
                    cfg.in_range_prob, cfg.channels
                );
                for x in 0..=2.min(p) {
                    let est = oracle_chim_tdma_pr_x(&params, x, trials, cfg.seed ^ (x as u64 + 9));
                    row(
                        "chim",
                        &set,
                        &format!("tdma_pr_x{x}"),
                        chim_tdma_pr_x(&params, x)?,
                        est.mean,
                        est.std_err,
                    );
                }
                let x = 3.min(p);
                let est = oracle_chim_q(&params, x, 0, trials, cfg.seed.wrapping_add(17));
                let q = chim_q(&params, x, 0);
                row("chim", &set, &format!("q_x{x}_y0"), q, est.mean, est.std_err);
                for t in 0..=2 {
                    let est = oracle_chim_imb(order, q, t, trials, cfg.seed ^ (t as u64 + 33));
                    row(
                        "chim",
                        &set,
                        &format!("imb_pmf_t{t}"),
                        chim_imb_pmf(order, q, t),
                        est.mean,
                        est.std_err,
                    );
                }
                // Single-channel CFP factor: the ratio collapses to
                // min(M, K)^t exactly. At q = 0 both PMFs vanish and the
                // ratio is taken as the factor itself.
                let mk = cfg.channels.min(order) as f64;
                let imb = chim_imb_pmf(order, q, 1);
                let ratio = if imb > 0.0 {
                    chim_cfp_pmf(order, q, cfg.channels, 1) / imb
                } else {
                    mk
                };
                row("chim", &set, "cfp_imb_ratio_t1", mk, ratio, 0.0);
            }
            other => {
                return Err(Error::Config(format!(
                    "compare supports DAIL and CHIM, not {}",
                    other.name()
                )))
            }
        }
    }
    Ok(out)
}

fn cmd_compare(parsed: &ParsedArgs) -> Result<()> {
    let cfg = load_config(parsed)?;
    print!("{}", run_compare(&cfg)?);
    Ok(())
}
