//! Sweep the number of coexisting networks and compare the schemes on mean
//! collision probability, per-sensor power and deferred packets.
//!
//! ```bash
//! cargo run --release --example sweep_comparison [arena] [reps] [dail_tx]
//! ```

use latinmac::scheduler::{DailTxMode, Scheme};
use latinmac::simulator::{run, SimParams};

fn mean_metrics(params: &SimParams, reps: u32) -> (f64, f64, f64) {
    let (mut mcp, mut mpc, mut dps) = (0.0, 0.0, 0.0);
    for rep in 0..reps {
        let seed = 1000 + rep as u64 * 10007;
        let (_, s) = run(params, seed).expect("valid params");
        mcp += s.mcp;
        mpc += s.mpc;
        dps += s.dps;
    }
    let n = reps as f64;
    (mcp / n, mpc / n, dps / n)
}

fn main() {
    let mut args = std::env::args().skip(1);
    let arena: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(27.0);
    let reps: u32 = args.next().and_then(|a| a.parse().ok()).unwrap_or(10);
    let dail_tx = match args.next().as_deref() {
        Some("all") => DailTxMode::AllCells,
        _ => DailTxMode::SinglePerSuperframe,
    };

    println!("arena {arena} m, {reps} replications, 40 superframes");
    println!(
        "{:>4} | {:>8} {:>8} {:>8} {:>8} | {:>8} {:>8} {:>8} | {:>8} {:>8}",
        "N", "McP.DAIL", "McP.SMS", "McP.CHIM", "McP.ZIG", "mPC.DAIL", "mPC.CHIM", "mPC.ZIG", "DPS.CHIM", "DPS.ZIG"
    );
    for n in (5..=45).step_by(5) {
        let base = SimParams {
            n_wbans: n,
            sensors_per_wban: 12,
            channels: 16,
            slots_override: Some(12),
            superframes: 40,
            arena_side: arena,
            dail_tx_mode: dail_tx,
            ..SimParams::default()
        };
        let dail = mean_metrics(&SimParams { scheme: Scheme::Dail, ..base.clone() }, reps);
        let sms = mean_metrics(&SimParams { scheme: Scheme::Sms, ..base.clone() }, reps);
        let chim = mean_metrics(&SimParams { scheme: Scheme::Chim, ..base.clone() }, reps);
        let zig = mean_metrics(&SimParams { scheme: Scheme::Zigbee, ..base.clone() }, reps);
        println!(
            "{n:>4} | {:>8.4} {:>8.4} {:>8.4} {:>8.4} | {:>8.4} {:>8.4} {:>8.4} | {:>8.2} {:>8.2}",
            dail.0, sms.0, chim.0, zig.0, dail.1, chim.1, zig.1, chim.2, zig.2
        );
    }
}
