//! Evaluate the closed-form collision model against its Monte Carlo oracles
//! at a few parameter points.
//!
//! ```bash
//! cargo run --release --example analytic_vs_oracle
//! ```

use latinmac::analytic::{
    chim_imb_pmf, chim_q, dail_success_prob, dail_throughput_bounds, oracle_chim_imb,
    oracle_chim_q, oracle_dail, ChimModelParams, DailModelParams,
};

fn main() -> latinmac::Result<()> {
    let trials = 200_000;
    println!("hopping-schedule success probability (lambda):");
    println!("{:>3} {:>6} {:>4} {:>4} {:>10} {:>10} {:>8}", "O", "omega", "M", "K", "closed", "oracle", "sigmas");
    for (o, omega, m, k) in [(4, 0.5, 16, 12), (8, 0.8, 16, 12), (6, 1.0, 4, 7), (10, 0.3, 8, 11)] {
        let params = DailModelParams::new(o, omega, m, k)?;
        let lambda = dail_success_prob(&params);
        let est = oracle_dail(&params, trials, 1);
        println!(
            "{o:>3} {omega:>6.2} {m:>4} {k:>4} {lambda:>10.5} {:>10.5} {:>8.2}",
            est.mean,
            est.sigma_distance(lambda)
        );
    }

    println!("\nsingle-slot collision probability Q and the two-stage backup PMF:");
    let params = ChimModelParams::new(10, 0.6, 16, 20)?;
    let q = chim_q(&params, 4, 1);
    let est = oracle_chim_q(&params, 4, 1, trials, 2);
    println!("Q(x=4,y=1)        closed {q:.5}  oracle {:.5}", est.mean);
    for t in 0..3 {
        let pmf = chim_imb_pmf(20, q, t);
        let est = oracle_chim_imb(20, q, t, trials, 3 + t as u64);
        println!("Pr(T={t})           closed {pmf:.5}  oracle {:.5}", est.mean);
    }

    println!("\nthroughput bounds:");
    for (o, n, m, k) in [(4, 10, 16, 16), (3, 100, 16, 20), (6, 30, 16, 12)] {
        let b = dail_throughput_bounds(o, n, m, k, k - 1);
        println!("O={o} N={n} M={m} K={k}: T in [{:.4}, {:.4}]", b.t_min, b.t_max);
    }
    Ok(())
}
