//! Closed-form collision probabilities and throughput bounds, with Monte
//! Carlo oracles used to certify the combinatorial coefficients.
//!
//! The per-neighbor "active in the same slot" event folds the use factor and
//! the slot-coincidence factor `min(M,K)/K` into a single Bernoulli, which
//! makes the contender-count distribution a genuine PMF. The raw product
//! form, which keeps the two factors separate and does not normalize, is
//! exposed as the `*_raw` variants.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Model inputs for the hopping-schedule success probability: a probe sensor
/// surrounded by `neighbors` foreign sensors, each active with probability
/// `use_factor`, choosing symbol patterns without replacement from the
/// `patterns = K * (K-1)` patterns of the orthogonal family.
#[derive(Debug, Clone, Copy)]
pub struct DailModelParams {
    pub neighbors: usize,
    pub use_factor: f64,
    pub channels: usize,
    pub order: usize,
    pub family_size: usize,
    pub patterns: usize,
}

impl DailModelParams {
    pub fn new(neighbors: usize, use_factor: f64, channels: usize, order: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&use_factor) {
            return Err(Error::InvalidArgument(format!(
                "use factor must be in [0, 1], got {use_factor}"
            )));
        }
        if order < 2 || channels < 1 {
            return Err(Error::InvalidArgument(
                "order must be >= 2 and channels >= 1".into(),
            ));
        }
        let family_size = order - 1;
        let patterns = order * family_size;
        if neighbors + 1 > patterns {
            return Err(Error::InvalidArgument(format!(
                "{neighbors} neighbors cannot draw distinct patterns from {} foreign ones",
                patterns - 1
            )));
        }
        Ok(Self {
            neighbors,
            use_factor,
            channels,
            order,
            family_size,
            patterns,
        })
    }

    /// Transmission slots per sensor per superframe.
    pub fn min_mk(&self) -> usize {
        self.channels.min(self.order)
    }

    fn slot_factor(&self) -> f64 {
        self.min_mk() as f64 / self.order as f64
    }
}

/// Model inputs for the default-channel TDMA frame: `coexisting` foreign
/// sensors, each within range with probability `in_range_prob`.
#[derive(Debug, Clone, Copy)]
pub struct ChimModelParams {
    pub coexisting: usize,
    pub in_range_prob: f64,
    pub channels: usize,
    pub order: usize,
    pub patterns: usize,
}

impl ChimModelParams {
    pub fn new(coexisting: usize, in_range_prob: f64, channels: usize, order: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&in_range_prob) {
            return Err(Error::InvalidArgument(format!(
                "in-range probability must be in [0, 1], got {in_range_prob}"
            )));
        }
        if order < 2 || channels < 1 {
            return Err(Error::InvalidArgument(
                "order must be >= 2 and channels >= 1".into(),
            ));
        }
        Ok(Self {
            coexisting,
            in_range_prob,
            channels,
            order,
            patterns: order * (order - 1),
        })
    }

    pub fn min_mk(&self) -> usize {
        self.channels.min(self.order)
    }

    fn slot_factor(&self) -> f64 {
        self.min_mk() as f64 / self.order as f64
    }
}

/// Successful-transmission bounds per superframe, absolute and normalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThroughputBounds {
    pub ts_min: usize,
    pub ts_max: usize,
    pub t_min: f64,
    pub t_max: f64,
}

/// Natural log of `C(n, k)`; `-inf` when the coefficient is zero.
fn ln_choose(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (0..k)
        .map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln())
        .sum()
}

/// Binomial PMF via logs; handles the degenerate p = 0 and p = 1 cases.
fn binomial_pmf(n: usize, p: f64, x: usize) -> f64 {
    if x > n {
        return 0.0;
    }
    if p <= 0.0 {
        return if x == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if x == n { 1.0 } else { 0.0 };
    }
    (ln_choose(n, x) + x as f64 * p.ln() + (n - x) as f64 * (1.0 - p).ln()).exp()
}

/// PMF of the number of neighbors contending in the probe sensor's slot:
/// binomial over `neighbors` trials with per-neighbor success probability
/// `use_factor * min(M,K)/K`.
pub fn dail_pr_x(params: &DailModelParams, x: usize) -> Result<f64> {
    if x > params.neighbors {
        return Err(Error::InvalidArgument(format!(
            "x = {x} exceeds neighbor count {}",
            params.neighbors
        )));
    }
    Ok(binomial_pmf(
        params.neighbors,
        params.use_factor * params.slot_factor(),
        x,
    ))
}

/// The unfolded product form: `C(O,x) w^x (1-w)^(O-x) (min(M,K)/K)^x`. Does
/// not sum to one when `min(M,K) < K`; kept for comparison output.
pub fn dail_pr_x_raw(params: &DailModelParams, x: usize) -> Result<f64> {
    if x > params.neighbors {
        return Err(Error::InvalidArgument(format!(
            "x = {x} exceeds neighbor count {}",
            params.neighbors
        )));
    }
    Ok(binomial_pmf(params.neighbors, params.use_factor, x) * params.slot_factor().powi(x as i32))
}

/// Hypergeometric probability that `y` of the `x` contenders drew patterns
/// from the probe sensor's own rectangle: `K-1` same-rectangle patterns and
/// `Z-K` foreign ones among the `Z-1` available.
pub fn dail_pr_y_given_x(params: &DailModelParams, x: usize, y: usize) -> Result<f64> {
    if y > x || x > params.neighbors {
        return Err(Error::InvalidArgument(format!(
            "need y <= x <= O, got y={y}, x={x}, O={}",
            params.neighbors
        )));
    }
    let same = params.order - 1;
    let other = params.patterns - params.order;
    let total = params.patterns - 1;
    let ln = ln_choose(same, y) + ln_choose(other, x - y) - ln_choose(total, x);
    Ok(if ln.is_finite() { ln.exp() } else { 0.0 })
}

/// Probability that at least one of the `x - y` cross-rectangle contenders
/// picked the probe sensor's channel: `1 - ((min(M,K)-1)/min(M,K))^(x-y)`.
pub fn dail_pr_coll_given(params: &DailModelParams, x: usize, y: usize) -> f64 {
    assert!(y <= x, "need y <= x");
    let mk = params.min_mk() as f64;
    1.0 - ((mk - 1.0) / mk).powi((x - y) as i32)
}

/// Probability of a successful transmission from the probe sensor: the
/// double sum of contender count, same-rectangle split and channel escape.
pub fn dail_success_prob(params: &DailModelParams) -> f64 {
    let mk = params.min_mk() as f64;
    let escape = (mk - 1.0) / mk;
    let mut lambda = 0.0;
    for x in 0..=params.neighbors {
        let px = dail_pr_x(params, x).expect("x in range");
        if px == 0.0 {
            continue;
        }
        for y in 0..=x {
            let py = dail_pr_y_given_x(params, x, y).expect("y in range");
            if py == 0.0 {
                continue;
            }
            lambda += px * py * escape.powi((x - y) as i32);
        }
    }
    lambda.min(1.0)
}

/// Per-sensor throughput bounds. For `K <= M` the frame is `K` slots and the
/// bounds follow the direct collision count; for `K > M` the maximal-bound
/// frame `max(M, ceil(N/m))` replaces `K`.
pub fn dail_throughput_bounds(
    neighbors: usize,
    n_wbans: usize,
    channels: usize,
    order: usize,
    family_size: usize,
) -> ThroughputBounds {
    let o = neighbors;
    if order <= channels {
        let excess = (o + 1).saturating_sub(order);
        let ts_max = order.saturating_sub(excess);
        let ts_min = order.saturating_sub(o);
        let fl = order as f64;
        ThroughputBounds {
            ts_min,
            ts_max,
            t_min: ts_min as f64 / fl,
            t_max: ts_max as f64 / fl,
        }
    } else {
        let k_eff = channels.max(n_wbans.div_ceil(family_size.max(1)));
        let excess = (o + 1).saturating_sub(k_eff);
        let ts_max = channels.saturating_sub(excess);
        let ts_min = channels.saturating_sub(o);
        ThroughputBounds {
            ts_min,
            ts_max,
            t_min: ts_min as f64 / k_eff as f64,
            t_max: ts_max as f64 / k_eff as f64,
        }
    }
}

/// PMF of the number of foreign sensors contending in the probe sensor's
/// TDMA slot, with presence probability `alpha` folded with the slot factor.
pub fn chim_tdma_pr_x(params: &ChimModelParams, x: usize) -> Result<f64> {
    if x > params.coexisting {
        return Err(Error::InvalidArgument(format!(
            "x = {x} exceeds coexisting count {}",
            params.coexisting
        )));
    }
    Ok(binomial_pmf(
        params.coexisting,
        params.in_range_prob * params.slot_factor(),
        x,
    ))
}

/// Unfolded product form of [`chim_tdma_pr_x`].
pub fn chim_tdma_pr_x_raw(params: &ChimModelParams, x: usize) -> Result<f64> {
    if x > params.coexisting {
        return Err(Error::InvalidArgument(format!(
            "x = {x} exceeds coexisting count {}",
            params.coexisting
        )));
    }
    Ok(binomial_pmf(params.coexisting, params.in_range_prob, x)
        * params.slot_factor().powi(x as i32))
}

/// Single-slot medium-access collision probability:
/// `Q = 1 - (1 - 1/min(M,K))^(x-y)`.
pub fn chim_q(params: &ChimModelParams, x: usize, y: usize) -> f64 {
    assert!(y <= x, "need y <= x");
    let mk = params.min_mk() as f64;
    1.0 - (1.0 - 1.0 / mk).powi((x - y) as i32)
}

/// PMF of the number of sensors colliding in both the TDMA and the backup
/// frame: binomial over `K` sensors with two-stage probability `Q^2`.
pub fn chim_imb_pmf(sensors: usize, q: f64, t: usize) -> f64 {
    debug_assert!((0.0..=1.0).contains(&q));
    binomial_pmf(sensors, q * q, t)
}

/// The single-channel contention-free-period comparison quantity:
/// `chim_imb_pmf * min(M,K)^t`. Exceeds 1 for large `t`; it is reported raw
/// as a comparison factor, not renormalized to a probability.
pub fn chim_cfp_pmf(sensors: usize, q: f64, channels: usize, t: usize) -> f64 {
    chim_imb_pmf(sensors, q, t) * (channels.min(sensors) as f64).powi(t as i32)
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy)]
pub struct OracleEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub trials: u64,
}

impl OracleEstimate {
    fn from_hits(hits: u64, trials: u64) -> Self {
        let mean = hits as f64 / trials as f64;
        OracleEstimate {
            mean,
            std_err: (mean * (1.0 - mean) / trials as f64).sqrt(),
            trials,
        }
    }

    /// Absolute gap to `value` measured in standard errors (infinite when
    /// the estimate is degenerate and disagrees).
    pub fn sigma_distance(&self, value: f64) -> f64 {
        let gap = (self.mean - value).abs();
        if self.std_err == 0.0 {
            if gap == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            gap / self.std_err
        }
    }
}

/// Samples one trial of the generative model behind [`dail_success_prob`]:
/// each neighbor is independently active and slot-coincident, the
/// contenders draw distinct symbol patterns, and the cross-rectangle ones
/// each pick the probe channel with probability `1/min(M,K)`.
fn dail_trial(params: &DailModelParams, rng: &mut ChaCha8Rng) -> bool {
    let slot_p = params.slot_factor();
    let mut contenders = 0usize;
    for _ in 0..params.neighbors {
        if rng.gen::<f64>() < params.use_factor && rng.gen::<f64>() < slot_p {
            contenders += 1;
        }
    }
    // Without-replacement draw over the Z-1 foreign patterns.
    let mut same_left = params.order - 1;
    let mut other_left = params.patterns - params.order;
    let mut cross = 0usize;
    for _ in 0..contenders {
        let total = (same_left + other_left) as f64;
        if rng.gen::<f64>() < same_left as f64 / total {
            same_left -= 1;
        } else {
            other_left -= 1;
            cross += 1;
        }
    }
    let hit_p = 1.0 / params.min_mk() as f64;
    (0..cross).all(|_| rng.gen::<f64>() >= hit_p)
}

/// Monte Carlo estimate of the transmission success probability.
pub fn oracle_dail(params: &DailModelParams, trials: u64, seed: u64) -> OracleEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = (0..trials).filter(|_| dail_trial(params, &mut rng)).count() as u64;
    OracleEstimate::from_hits(hits, trials)
}

/// Monte Carlo frequency of exactly `x` slot-coincident active neighbors.
pub fn oracle_dail_pr_x(params: &DailModelParams, x: usize, trials: u64, seed: u64) -> OracleEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slot_p = params.slot_factor();
    let hits = (0..trials)
        .filter(|_| {
            let c = (0..params.neighbors)
                .filter(|_| rng.gen::<f64>() < params.use_factor && rng.gen::<f64>() < slot_p)
                .count();
            c == x
        })
        .count() as u64;
    OracleEstimate::from_hits(hits, trials)
}

/// Monte Carlo frequency of exactly `x` contenders in the TDMA frame.
pub fn oracle_chim_tdma_pr_x(
    params: &ChimModelParams,
    x: usize,
    trials: u64,
    seed: u64,
) -> OracleEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slot_p = params.slot_factor();
    let hits = (0..trials)
        .filter(|_| {
            let c = (0..params.coexisting)
                .filter(|_| rng.gen::<f64>() < params.in_range_prob && rng.gen::<f64>() < slot_p)
                .count();
            c == x
        })
        .count() as u64;
    OracleEstimate::from_hits(hits, trials)
}

/// Monte Carlo estimate of the single-slot collision probability `Q`: any of
/// `x - y` contenders lands on the probe channel.
pub fn oracle_chim_q(
    params: &ChimModelParams,
    x: usize,
    y: usize,
    trials: u64,
    seed: u64,
) -> OracleEstimate {
    assert!(y <= x, "need y <= x");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hit_p = 1.0 / params.min_mk() as f64;
    let cross = x - y;
    let hits = (0..trials)
        .filter(|_| (0..cross).any(|_| rng.gen::<f64>() < hit_p))
        .count() as u64;
    OracleEstimate::from_hits(hits, trials)
}

/// Monte Carlo frequency of exactly `t` sensors failing both stages, each
/// stage an independent collision with probability `q`.
pub fn oracle_chim_imb(sensors: usize, q: f64, t: usize, trials: u64, seed: u64) -> OracleEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = (0..trials)
        .filter(|_| {
            let both = (0..sensors)
                .filter(|_| rng.gen::<f64>() < q && rng.gen::<f64>() < q)
                .count();
            both == t
        })
        .count() as u64;
    OracleEstimate::from_hits(hits, trials)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn table2_params(neighbors: usize, use_factor: f64) -> DailModelParams {
        DailModelParams::new(neighbors, use_factor, 16, 12).unwrap()
    }

    #[test]
    fn pr_x_trivial_cases() {
        let p = table2_params(0, 0.7);
        close(dail_pr_x(&p, 0).unwrap(), 1.0, 1e-12);

        let p = table2_params(5, 0.0);
        close(dail_pr_x(&p, 0).unwrap(), 1.0, 1e-12);
        close(dail_pr_x(&p, 2).unwrap(), 0.0, 1e-12);
        assert!(dail_pr_x(&p, 6).is_err());
    }

    #[test]
    fn pr_x_sums_to_one() {
        for (o, w, m, k) in [(4, 0.5, 16, 12), (7, 0.3, 8, 11), (10, 1.0, 4, 7)] {
            let p = DailModelParams::new(o, w, m, k).unwrap();
            let total: f64 = (0..=o).map(|x| dail_pr_x(&p, x).unwrap()).sum();
            close(total, 1.0, 1e-12);
        }
    }

    #[test]
    fn pr_x_matches_oracle() {
        let p = table2_params(4, 0.5);
        let est = oracle_dail_pr_x(&p, 2, 1_000_000, 42);
        assert!(est.sigma_distance(dail_pr_x(&p, 2).unwrap()) < 3.0);
    }

    #[test]
    fn raw_pr_x_equals_folded_when_slots_cover_order() {
        // min(M,K) = K makes the slot factor 1.
        let p = table2_params(4, 0.5);
        for x in 0..=4 {
            close(
                dail_pr_x_raw(&p, x).unwrap(),
                dail_pr_x(&p, x).unwrap(),
                1e-12,
            );
        }
    }

    #[test]
    fn pr_y_trivial_and_normalized() {
        let p = DailModelParams::new(8, 1.0, 16, 5).unwrap();
        close(dail_pr_y_given_x(&p, 0, 0).unwrap(), 1.0, 1e-12);
        for x in 0..=8 {
            let total: f64 = (0..=x).map(|y| dail_pr_y_given_x(&p, x, y).unwrap()).sum();
            close(total, 1.0, 1e-12);
        }
        assert!(dail_pr_y_given_x(&p, 2, 3).is_err());
    }

    #[test]
    fn pr_y_matches_exhaustive_draw_enumeration() {
        // K = 5: 4 same-rectangle patterns among the 19 available. Count all
        // C(19,3) draws with exactly one same-rectangle pick.
        let p = DailModelParams::new(10, 1.0, 16, 5).unwrap();
        let mut matching = 0u64;
        let mut total = 0u64;
        for a in 0..19usize {
            for b in a + 1..19 {
                for c in b + 1..19 {
                    total += 1;
                    let same = [a, b, c].iter().filter(|&&i| i < 4).count();
                    if same == 1 {
                        matching += 1;
                    }
                }
            }
        }
        assert_eq!((matching, total), (420, 969));
        close(
            dail_pr_y_given_x(&p, 3, 1).unwrap(),
            matching as f64 / total as f64,
            1e-12,
        );
    }

    #[test]
    fn collision_given_contenders() {
        let p16 = DailModelParams::new(4, 1.0, 16, 16).unwrap();
        close(dail_pr_coll_given(&p16, 3, 3), 0.0, 1e-12);
        close(dail_pr_coll_given(&p16, 1, 0), 1.0 / 16.0, 1e-12);

        let p12 = table2_params(4, 1.0);
        close(
            dail_pr_coll_given(&p12, 3, 0),
            1.0 - (11.0f64 / 12.0).powi(3),
            1e-12,
        );
    }

    #[test]
    fn success_prob_trivial_cases() {
        close(dail_success_prob(&table2_params(0, 0.5)), 1.0, 1e-12);
        close(dail_success_prob(&table2_params(6, 0.0)), 1.0, 1e-12);
    }

    #[test]
    fn success_prob_matches_oracle() {
        let p = DailModelParams::new(6, 0.5, 16, 12).unwrap();
        let est = oracle_dail(&p, 1_000_000, 7);
        assert!(
            est.sigma_distance(dail_success_prob(&p)) < 3.0,
            "lambda {} vs oracle {} +- {}",
            dail_success_prob(&p),
            est.mean,
            est.std_err
        );
    }

    #[test]
    fn success_prob_monotone_in_neighbors_and_use_factor() {
        let mut prev = 1.1;
        for o in 0..=10 {
            let l = dail_success_prob(&DailModelParams::new(o, 0.6, 16, 12).unwrap());
            assert!(l <= prev + 1e-12);
            assert!((0.0..=1.0).contains(&l));
            prev = l;
        }
        let mut prev = 1.1;
        for i in 0..=10 {
            let w = i as f64 / 10.0;
            let l = dail_success_prob(&DailModelParams::new(6, w, 16, 12).unwrap());
            assert!(l <= prev + 1e-12);
            prev = l;
        }
    }

    #[test]
    fn throughput_bounds_reference_points() {
        // K = M = 16, O = 4.
        let b = dail_throughput_bounds(4, 10, 16, 16, 15);
        close(b.t_max, 1.0, 1e-12);
        close(b.t_min, 0.75, 1e-12);

        // No interferers.
        let b = dail_throughput_bounds(0, 10, 16, 12, 11);
        close(b.t_min, 1.0, 1e-12);
        close(b.t_max, 1.0, 1e-12);

        // K > M regime collapses to the maximal-bound frame.
        let b = dail_throughput_bounds(3, 100, 16, 20, 15);
        close(b.t_max, 1.0, 1e-12);
        close(b.t_min, 13.0 / 16.0, 1e-12);
    }

    #[test]
    fn throughput_bounds_ordering() {
        for o in 0..20 {
            for (k, m) in [(5, 16), (12, 16), (20, 16), (16, 16)] {
                let b = dail_throughput_bounds(o, 30, m, k, k - 1);
                assert!(b.t_min <= b.t_max + 1e-12);
                assert!((0.0..=1.0).contains(&b.t_min));
                assert!((0.0..=1.0).contains(&b.t_max));
                assert!(b.ts_min <= b.ts_max);
            }
        }
    }

    #[test]
    fn chim_pr_x_reference_points() {
        let p = ChimModelParams::new(0, 0.4, 16, 20).unwrap();
        close(chim_tdma_pr_x(&p, 0).unwrap(), 1.0, 1e-12);

        // alpha = 1 and min(M,K) = K collapse to the plain binomial, which
        // concentrates on x = P.
        let p = ChimModelParams::new(5, 1.0, 20, 20).unwrap();
        close(chim_tdma_pr_x(&p, 5).unwrap(), 1.0, 1e-12);
        close(chim_tdma_pr_x(&p, 3).unwrap(), 0.0, 1e-12);

        let p = ChimModelParams::new(5, 0.4, 16, 20).unwrap();
        let est = oracle_chim_tdma_pr_x(&p, 2, 1_000_000, 11);
        assert!(est.sigma_distance(chim_tdma_pr_x(&p, 2).unwrap()) < 3.0);
        assert!(chim_tdma_pr_x(&p, 6).is_err());
    }

    #[test]
    fn chim_q_reference_points() {
        let p = ChimModelParams::new(8, 1.0, 16, 20).unwrap();
        close(chim_q(&p, 4, 4), 0.0, 1e-12);
        close(chim_q(&p, 2, 0), 31.0 / 256.0, 1e-12);
        // Monotone in the contender excess.
        let mut prev = -1.0;
        for d in 0..10 {
            let q = chim_q(&p, d, 0);
            assert!(q >= prev);
            prev = q;
        }
    }

    #[test]
    fn chim_imb_reference_points() {
        close(chim_imb_pmf(20, 0.0, 0), 1.0, 1e-12);
        close(chim_imb_pmf(20, 0.0, 3), 0.0, 1e-12);
        let total: f64 = (0..=20).map(|t| chim_imb_pmf(20, 0.35, t)).sum();
        close(total, 1.0, 1e-12);
        close(
            chim_imb_pmf(20, 0.2, 1),
            20.0 * 0.04 * 0.96f64.powi(19),
            1e-12,
        );
    }

    #[test]
    fn chim_imb_matches_two_stage_oracle() {
        for t in [0, 1, 2] {
            let est = oracle_chim_imb(20, 0.2, t, 1_000_000, 5 + t as u64);
            assert!(est.sigma_distance(chim_imb_pmf(20, 0.2, t)) < 3.0);
        }
    }

    #[test]
    fn cfp_factor() {
        close(chim_cfp_pmf(20, 0.3, 16, 0), chim_imb_pmf(20, 0.3, 0), 1e-15);
        let ratio = chim_cfp_pmf(20, 0.3, 16, 2) / chim_imb_pmf(20, 0.3, 2);
        assert_eq!(ratio, 256.0);
        close(chim_cfp_pmf(20, 0.0, 16, 0), 1.0, 1e-12);
    }

    #[test]
    fn q_oracle_agreement() {
        let p = ChimModelParams::new(8, 1.0, 16, 20).unwrap();
        let est = oracle_chim_q(&p, 5, 2, 1_000_000, 3);
        assert!(est.sigma_distance(chim_q(&p, 5, 2)) < 3.0);
    }

    #[test]
    fn oracle_is_deterministic() {
        let p = DailModelParams::new(4, 0.5, 16, 12).unwrap();
        let a = oracle_dail(&p, 10_000, 99);
        let b = oracle_dail(&p, 10_000, 99);
        assert_eq!(a.mean, b.mean);
        let p0 = DailModelParams::new(0, 0.5, 16, 12).unwrap();
        let est = oracle_dail(&p0, 10_000, 1);
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.std_err, 0.0);
    }

    #[test]
    fn params_validation() {
        assert!(DailModelParams::new(3, 1.5, 16, 12).is_err());
        assert!(DailModelParams::new(100, 0.5, 16, 5).is_err());
        assert!(ChimModelParams::new(3, -0.1, 16, 20).is_err());
    }
}
