//! Bi-dimensional Markov chain for the number of cluster heads per round.
//!
//! The chain models one epoch of a distributed randomized election as `m`
//! states deep: state `(s, i)` means the epoch is `s` election stages in
//! with `i` candidates still unelected. From the rest state `(0, N)` each
//! stage elects every remaining candidate independently with probability
//! `p`, so `(s, i) → (s+1, i−k)` carries the binomial probability of `k`
//! new CHs out of `i` candidates; after stage `m−1` the chain returns to
//! `(0, N)` deterministically (the epoch reset).
//!
//! The factor matrix `F` collects the stage occupancies: row `s` is the
//! distribution of remaining candidates after stage `s`, built by the
//! recursion `f_{s,i} = Σ_k f_{s−1,k} · binom(k−i; k, p)` from
//! `f_{1,i} = binom(N−i; N, p)`. Every row is a probability distribution
//! (sums to 1), which forces the stationary rest-state mass to
//! `π(0,N) = 1/m` — the normalization route `1/(1 + Σ_s Σ_i f_{s,i})`
//! gives the same value and is exposed as a cross-check.
//!
//! The per-round CH-count pmf is the distribution of *newly elected* CHs
//! per election transition: a uniform mixture over the `m−1` election
//! stages,
//!
//! ```text
//! P(ch = k) = 1/(m−1) · Σ_{s=1}^{m−1} Σ_i f_{s−1,i} · binom(k; i, p_s)
//! ```
//!
//! with `f_0 = δ_N`. The deterministic reset transition contributes no
//! observable election round. This is the only reading under which the
//! two-state chain (`m = 2`, a single election stage) collapses exactly to
//! the plain binomial distribution, and it matches the direct Monte-Carlo
//! simulation of the staged election process.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::SimRng;

/// The chain: node count, stage count, per-stage election probabilities,
/// factor matrix and stationary rest-state mass.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovModel {
    /// Candidate pool size N at each epoch start.
    pub n: u32,
    /// Total stages m (one rest state + m−1 election stages).
    pub m_stages: u32,
    /// Election probability per stage; `p_stage[s−1]` drives stage s.
    pub p_stage: Vec<f64>,
    /// Factor matrix rows s ∈ [1, m−1]: `factor[s−1][i]` is the
    /// probability of `i` remaining candidates after stage s.
    pub factor: Vec<Vec<f64>>,
    /// Stationary mass of the rest state, `1/m`.
    pub pi0: f64,
}

impl MarkovModel {
    /// Builds the chain with one election probability shared by all stages.
    pub fn build(n: u32, m_stages: u32, p: f64) -> Result<Self> {
        validate_probability("p", p)?;
        if m_stages < 2 {
            return Err(Error::Argument(format!(
                "m_stages: must be >= 2, got {m_stages}"
            )));
        }
        Self::build_per_stage(n, vec![p; (m_stages - 1) as usize])
    }

    /// Builds the chain with a distinct election probability per stage;
    /// the stage count is `p_stage.len() + 1`.
    pub fn build_per_stage(n: u32, p_stage: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("n: must be >= 1, got 0".into()));
        }
        if p_stage.is_empty() {
            return Err(Error::Argument(
                "p_stage: at least one election stage is required".into(),
            ));
        }
        for &p in &p_stage {
            validate_probability("p_stage", p)?;
        }
        let m_stages = (p_stage.len() + 1) as u32;
        let factor = factor_matrix_per_stage(n, &p_stage);
        for (s, row) in factor.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::Internal(format!(
                    "factor row {} sums to {sum}, expected 1",
                    s + 1
                )));
            }
        }
        Ok(Self {
            n,
            m_stages,
            p_stage,
            factor,
            pi0: stationary_pi0(m_stages),
        })
    }
}

/// A probability mass function over CH counts `k ∈ [0, N]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChCountDistribution {
    /// `pmf[k]` = P(ch = k).
    pub pmf: Vec<f64>,
    /// Expectation Σ k·pmf[k].
    pub mean: f64,
}

impl ChCountDistribution {
    fn from_pmf(pmf: Vec<f64>) -> Self {
        let mean = pmf.iter().enumerate().map(|(k, &p)| k as f64 * p).sum();
        Self { pmf, mean }
    }
}

fn validate_probability(name: &str, p: f64) -> Result<()> {
    if !p.is_finite() || !(0.0..=1.0).contains(&p) {
        return Err(Error::Argument(format!(
            "{name}: must lie in [0, 1], got {p}"
        )));
    }
    Ok(())
}

/// Binomial pmf over `k ∈ [0, n]` successes. Multiplicative recurrence for
/// small `n`; logarithmic form (ln-factorials) above that to avoid
/// overflow. `p > 1/2` is computed through the mirrored distribution so the
/// recurrence base `(1−p)^n` cannot underflow.
fn binomial_pmf(n: u32, p: f64) -> Vec<f64> {
    let size = n as usize + 1;
    if p <= 0.0 {
        let mut pmf = vec![0.0; size];
        pmf[0] = 1.0;
        return pmf;
    }
    if p >= 1.0 {
        let mut pmf = vec![0.0; size];
        pmf[n as usize] = 1.0;
        return pmf;
    }
    if p > 0.5 {
        let mut pmf = binomial_pmf(n, 1.0 - p);
        pmf.reverse();
        return pmf;
    }
    if n <= 50 {
        // P(k+1)/P(k) = (n−k)/(k+1) · p/(1−p), from P(0) = (1−p)^n.
        let ratio = p / (1.0 - p);
        let mut pmf = Vec::with_capacity(size);
        let mut prob = (1.0 - p).powi(n as i32);
        pmf.push(prob);
        for k in 0..n {
            prob *= (n - k) as f64 / (k + 1) as f64 * ratio;
            pmf.push(prob);
        }
        pmf
    } else {
        // ln C(n,k) + k·ln p + (n−k)·ln(1−p) via cumulative ln-factorials.
        let mut ln_fact = Vec::with_capacity(size);
        ln_fact.push(0.0);
        for i in 1..=n as usize {
            ln_fact.push(ln_fact[i - 1] + (i as f64).ln());
        }
        let (ln_p, ln_q) = (p.ln(), (1.0 - p).ln());
        (0..=n as usize)
            .map(|k| {
                let ln_c = ln_fact[n as usize] - ln_fact[k] - ln_fact[n as usize - k];
                (ln_c + k as f64 * ln_p + (n as usize - k) as f64 * ln_q).exp()
            })
            .collect()
    }
}

/// Stage-transition pmf: probability of `i ∈ [0, n_remaining]` new CHs when
/// each remaining candidate elects independently with probability `p`.
pub fn transition_pmf(n_remaining: u32, p: f64) -> Vec<f64> {
    debug_assert!((0.0..=1.0).contains(&p), "p out of range: {p}");
    binomial_pmf(n_remaining, p.clamp(0.0, 1.0))
}

fn factor_matrix_per_stage(n: u32, p_stage: &[f64]) -> Vec<Vec<f64>> {
    let size = n as usize + 1;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(p_stage.len());
    // Row 1: i remaining after electing N−i out of the full pool.
    let b = binomial_pmf(n, p_stage[0]);
    let mut row: Vec<f64> = (0..size).map(|i| b[n as usize - i]).collect();
    rows.push(row.clone());
    for &p in &p_stage[1..] {
        let mut next = vec![0.0; size];
        for (k, &mass) in row.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            let b = binomial_pmf(k as u32, p);
            for i in 0..=k {
                // k−i elected out of k remaining leaves i remaining.
                next[i] += mass * b[k - i];
            }
        }
        rows.push(next.clone());
        row = next;
    }
    rows
}

/// Factor matrix for a uniform per-stage probability: rows s ∈ [1, m−1],
/// columns i ∈ [0, n]; `F[s−1][i]` is the probability of `i` remaining
/// candidates after stage s. Every row sums to 1.
pub fn build_factor_matrix(n: u32, m_stages: u32, p: f64) -> Result<Vec<Vec<f64>>> {
    if n == 0 {
        return Err(Error::Argument("n: must be >= 1, got 0".into()));
    }
    if m_stages < 2 {
        return Err(Error::Argument(format!(
            "m_stages: must be >= 2, got {m_stages}"
        )));
    }
    validate_probability("p", p)?;
    Ok(factor_matrix_per_stage(
        n,
        &vec![p; (m_stages - 1) as usize],
    ))
}

/// Stationary rest-state mass `π(0,N) = 1/m`.
pub fn stationary_pi0(m_stages: u32) -> f64 {
    assert!(m_stages >= 1, "m_stages must be >= 1");
    1.0 / m_stages as f64
}

/// The same mass obtained through the normalization condition over the
/// factor matrix, `1/(1 + Σ_s Σ_i f_si)`; agrees with [`stationary_pi0`]
/// because every factor row sums to 1.
pub fn stationary_pi0_from_factor(factor: &[Vec<f64>]) -> f64 {
    let total: f64 = factor.iter().flatten().sum();
    1.0 / (1.0 + total)
}

/// Analytical per-round CH-count pmf: the uniform mixture of the chain's
/// election-stage transitions (see the module docs for why the reset
/// transition is excluded). The result is normalized by construction and
/// never renormalized; a sum drifting from 1 beyond 1e-6 reports an
/// internal-consistency error instead of being masked.
pub fn ch_count_pmf(model: &MarkovModel) -> Result<ChCountDistribution> {
    let n = model.n as usize;
    let stages = (model.m_stages - 1) as usize;
    let weight = 1.0 / stages as f64;
    let mut delta_n = vec![0.0; n + 1];
    delta_n[n] = 1.0;
    let mut pmf = vec![0.0; n + 1];
    for s in 1..=stages {
        // Occupancy entering stage s: δ_N for stage 1, else row s−1 of F.
        let occupancy: &[f64] = if s == 1 {
            &delta_n
        } else {
            &model.factor[s - 2]
        };
        let p_s = model.p_stage[s - 1];
        for (i, &mass) in occupancy.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            let b = binomial_pmf(i as u32, p_s);
            for (k, &bk) in b.iter().enumerate() {
                pmf[k] += weight * mass * bk;
            }
        }
    }
    let sum: f64 = pmf.iter().sum();
    if (sum - 1.0).abs() > 1e-6 {
        return Err(Error::Internal(format!(
            "ch-count pmf sums to {sum}, expected 1"
        )));
    }
    Ok(ChCountDistribution::from_pmf(pmf))
}

/// Expectation of a CH-count distribution, Σ k·P(ch = k).
pub fn ch_count_mean(dist: &ChCountDistribution) -> f64 {
    dist.pmf
        .iter()
        .enumerate()
        .map(|(k, &p)| k as f64 * p)
        .sum()
}

/// Per-node DEEC-style stage probabilities for the chain: node `i` gets
/// `p_opt·N·(1+a_i)/(N+Σa) · e_i/ē`, clamped to [0, 1].
pub fn stage_probability(p_opt: f64, n: u32, a: &[f64], e: &[f64], e_bar: f64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Argument("n: must be >= 1, got 0".into()));
    }
    if a.len() != n as usize || e.len() != n as usize {
        return Err(Error::Argument(format!(
            "a and e must each have one entry per node ({n}), got {} and {}",
            a.len(),
            e.len()
        )));
    }
    let sum_a: f64 = a.iter().sum();
    a.iter()
        .zip(e)
        .map(|(&a_i, &e_i)| {
            crate::protocols::deec_weighted_probability(p_opt, a_i, sum_a, n, e_i, e_bar)
        })
        .collect()
}

/// Monte-Carlo oracle for [`ch_count_pmf`]: simulates the staged election
/// process directly. One trial is one election round; every `m−1` rounds
/// the candidate pool resets to N (the rest transition itself is not an
/// observable round). Rounds that begin with an empty pool tabulate zero
/// CHs.
///
/// Trials are partitioned into fixed-size chunks of whole cycles, each on
/// its own deterministically derived RNG stream, and the histograms are
/// merged by summation — so the result is identical regardless of how many
/// threads execute the chunks.
pub fn monte_carlo_ch_distribution(
    n: u32,
    m_stages: u32,
    p: f64,
    trials: u64,
    seed: u64,
) -> Result<ChCountDistribution> {
    validate_probability("p", p)?;
    monte_carlo_per_node(&vec![p; n as usize], m_stages, trials, seed)
}

/// Monte-Carlo oracle with per-node election probabilities (the chain's
/// heterogeneous variant); `probs[i]` is node i's per-stage probability.
pub fn monte_carlo_ch_distribution_per_node(
    probs: &[f64],
    m_stages: u32,
    trials: u64,
    seed: u64,
) -> Result<ChCountDistribution> {
    for &p in probs {
        validate_probability("probs", p)?;
    }
    monte_carlo_per_node(probs, m_stages, trials, seed)
}

fn monte_carlo_per_node(
    probs: &[f64],
    m_stages: u32,
    trials: u64,
    seed: u64,
) -> Result<ChCountDistribution> {
    let n = probs.len();
    if n == 0 {
        return Err(Error::Argument("n: must be >= 1, got 0".into()));
    }
    if m_stages < 2 {
        return Err(Error::Argument(format!(
            "m_stages: must be >= 2, got {m_stages}"
        )));
    }
    if trials == 0 {
        return Err(Error::Argument("trials: must be >= 1, got 0".into()));
    }
    const CYCLES_PER_CHUNK: u64 = 4096;
    let rounds_per_cycle = (m_stages - 1) as u64;
    let chunk_rounds = CYCLES_PER_CHUNK * rounds_per_cycle;
    let n_chunks = trials.div_ceil(chunk_rounds);
    let histogram = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = SimRng::stream(seed, chunk);
            let quota = chunk_rounds.min(trials - chunk * chunk_rounds);
            let mut hist = vec![0u64; n + 1];
            let mut elected = vec![false; n];
            let mut rounds_done = 0u64;
            'cycles: loop {
                elected.fill(false);
                for _stage in 0..rounds_per_cycle {
                    if rounds_done == quota {
                        break 'cycles;
                    }
                    let mut k = 0usize;
                    for (i, done) in elected.iter_mut().enumerate() {
                        if !*done && rng.uniform() < probs[i] {
                            *done = true;
                            k += 1;
                        }
                    }
                    hist[k] += 1;
                    rounds_done += 1;
                }
            }
            hist
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut acc, hist| {
                for (a, h) in acc.iter_mut().zip(hist) {
                    *a += h;
                }
                acc
            },
        );
    let pmf: Vec<f64> = histogram
        .iter()
        .map(|&count| count as f64 / trials as f64)
        .collect();
    Ok(ChCountDistribution::from_pmf(pmf))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_binomial(n: u32, p: f64) -> Vec<f64> {
        // Independent oracle: u128 Pascal coefficients times powers.
        let mut coeff = vec![1u128];
        for _ in 0..n {
            let mut next = vec![1u128; coeff.len() + 1];
            for i in 1..coeff.len() {
                next[i] = coeff[i - 1] + coeff[i];
            }
            coeff = next;
        }
        (0..=n as usize)
            .map(|k| coeff[k] as f64 * p.powi(k as i32) * (1.0 - p).powi((n as usize - k) as i32))
            .collect()
    }

    #[test]
    fn transition_pmf_point_masses() {
        let zero = transition_pmf(7, 0.0);
        assert_eq!(zero[0], 1.0);
        assert!(zero[1..].iter().all(|&x| x == 0.0));
        let one = transition_pmf(7, 1.0);
        assert_eq!(one[7], 1.0);
        assert!(one[..7].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn transition_pmf_golden_n3_half() {
        let pmf = transition_pmf(3, 0.5);
        let expected = [0.125, 0.375, 0.375, 0.125];
        for (got, want) in pmf.iter().zip(expected) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
    }

    #[test]
    fn binomial_recurrence_matches_exact_coefficients() {
        for (n, p) in [(1u32, 0.3), (10, 0.1), (20, 0.9), (45, 0.5), (50, 0.05)] {
            let pmf = transition_pmf(n, p);
            let oracle = exact_binomial(n, p);
            for (k, (got, want)) in pmf.iter().zip(&oracle).enumerate() {
                assert!(
                    (got - want).abs() < 1e-13,
                    "n={n} p={p} k={k}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn binomial_log_path_matches_recurrence_scale() {
        // The log-form path (n > 50) must agree with the exact oracle to
        // the tolerance the chain promises.
        for (n, p) in [(60u32, 0.3), (100, 0.1), (200, 0.85)] {
            let pmf = transition_pmf(n, p);
            let sum: f64 = pmf.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12, "n={n} p={p}: sum={sum}");
            let mean: f64 = pmf.iter().enumerate().map(|(k, &q)| k as f64 * q).sum();
            assert!(
                (mean - n as f64 * p).abs() < 1e-9,
                "n={n} p={p}: mean={mean}"
            );
        }
    }

    #[test]
    fn factor_matrix_two_stage_is_reflected_binomial() {
        let f = build_factor_matrix(6, 2, 0.3).unwrap();
        assert_eq!(f.len(), 1);
        let b = transition_pmf(6, 0.3);
        for i in 0..=6usize {
            assert!((f[0][i] - b[6 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn factor_matrix_rows_are_stochastic() {
        for n in [1u32, 5, 10] {
            for m in [2u32, 3, 4] {
                for p in [0.05, 0.3, 0.9] {
                    let f = build_factor_matrix(n, m, p).unwrap();
                    assert_eq!(f.len(), (m - 1) as usize);
                    for row in &f {
                        let sum: f64 = row.iter().sum();
                        assert!(
                            (sum - 1.0).abs() < 1e-12,
                            "n={n} m={m} p={p}: row sum {sum}"
                        );
                        assert!(row.iter().all(|&x| (0.0..=1.0).contains(&x)));
                    }
                }
            }
        }
    }

    #[test]
    fn factor_matrix_certain_election_empties_pool() {
        let f = build_factor_matrix(5, 4, 1.0).unwrap();
        for row in &f {
            assert_eq!(row[0], 1.0);
            assert!(row[1..].iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn stationary_pi0_closed_form() {
        assert_eq!(stationary_pi0(1), 1.0);
        assert!((stationary_pi0(5) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn stationary_pi0_routes_agree() {
        for (n, m, p) in [(10u32, 3u32, 0.1), (20, 5, 0.3), (7, 8, 0.9)] {
            let f = build_factor_matrix(n, m, p).unwrap();
            let via_norm = stationary_pi0_from_factor(&f);
            let closed = stationary_pi0(m);
            assert!(
                (via_norm - closed).abs() < 1e-12,
                "n={n} m={m} p={p}: {via_norm} vs {closed}"
            );
        }
    }

    #[test]
    fn ch_count_pmf_certain_single_node() {
        let model = MarkovModel::build(1, 2, 1.0).unwrap();
        let dist = ch_count_pmf(&model).unwrap();
        assert_eq!(dist.pmf, vec![0.0, 1.0]);
        assert_eq!(dist.mean, 1.0);
    }

    #[test]
    fn ch_count_pmf_zero_probability() {
        for m in [2u32, 4, 7] {
            let model = MarkovModel::build(9, m, 0.0).unwrap();
            let dist = ch_count_pmf(&model).unwrap();
            // The mass at 0 is 1/(m−1) summed m−1 times, exact only up to
            // rounding of the stage weight.
            assert!((dist.pmf[0] - 1.0).abs() < 1e-12);
            assert!(dist.pmf[1..].iter().all(|&x| x == 0.0));
            assert_eq!(dist.mean, 0.0);
        }
    }

    #[test]
    fn ch_count_pmf_two_stage_collapses_to_binomial() {
        for (n, p) in [(5u32, 0.2), (20, 0.1), (15, 0.7)] {
            let model = MarkovModel::build(n, 2, p).unwrap();
            let dist = ch_count_pmf(&model).unwrap();
            let oracle = exact_binomial(n, p);
            for (k, (got, want)) in dist.pmf.iter().zip(&oracle).enumerate() {
                assert!(
                    (got - want).abs() < 1e-12,
                    "n={n} p={p} k={k}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn ch_count_mean_closed_form() {
        // Uniform p: mean = N·(1 − (1−p)^{m−1})/(m−1) — each of the m−1
        // stages contributes the expected newly elected count.
        let model = MarkovModel::build(20, 3, 0.1).unwrap();
        let dist = ch_count_pmf(&model).unwrap();
        let expected = 20.0 * (1.0 - 0.9f64.powi(2)) / 2.0;
        assert!((dist.mean - expected).abs() < 1e-12, "{}", dist.mean);
        assert!((dist.mean - 1.9).abs() < 1e-12);
        assert!((ch_count_mean(&dist) - dist.mean).abs() < 1e-15);
    }

    #[test]
    fn ch_count_pmf_normalized_across_sweep() {
        for n in [1u32, 13, 30] {
            for m in [2u32, 5, 8] {
                for p in [0.05, 0.3, 0.9] {
                    let model = MarkovModel::build(n, m, p).unwrap();
                    let dist = ch_count_pmf(&model).unwrap();
                    let sum: f64 = dist.pmf.iter().sum();
                    assert!((sum - 1.0).abs() < 1e-9, "n={n} m={m} p={p}: {sum}");
                    assert!(dist.pmf.iter().all(|&x| x >= 0.0));
                }
            }
        }
    }

    #[test]
    fn stage_probability_homogeneous_collapse() {
        let probs = stage_probability(0.1, 4, &[0.0; 4], &[0.5; 4], 0.5).unwrap();
        assert!(probs.iter().all(|&p| (p - 0.1).abs() < 1e-15));
    }

    #[test]
    fn stage_probability_golden_two_node() {
        let probs = stage_probability(0.1, 2, &[0.0, 1.0], &[0.5, 0.5], 0.5).unwrap();
        assert!((probs[0] - 0.1 * 2.0 / 3.0).abs() < 1e-15, "{}", probs[0]);
        assert!((probs[1] - 0.1 * 4.0 / 3.0).abs() < 1e-15, "{}", probs[1]);
    }

    #[test]
    fn stage_probability_mean_identity() {
        // With e_i = ē the population mean equals p_opt exactly.
        let n = 10u32;
        let a: Vec<f64> = (0..n).map(|i| (i % 3) as f64).collect();
        let probs = stage_probability(0.2, n, &a, &[0.5; 10], 0.5).unwrap();
        let mean: f64 = probs.iter().sum::<f64>() / n as f64;
        assert!((mean - 0.2).abs() < 1e-12, "{mean}");
    }

    #[test]
    fn stage_probability_rejects_mismatched_lengths() {
        assert!(matches!(
            stage_probability(0.1, 3, &[0.0; 2], &[0.5; 3], 0.5),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn monte_carlo_certain_election() {
        let dist = monte_carlo_ch_distribution(8, 3, 1.0, 100, 7).unwrap();
        // Stage 1 elects all 8; stage 2 has an empty pool → half the rounds
        // see 8 CHs, half see 0.
        assert_eq!(dist.pmf[8], 0.5);
        assert_eq!(dist.pmf[0], 0.5);
    }

    #[test]
    fn monte_carlo_single_trial_is_point_mass() {
        let dist = monte_carlo_ch_distribution(10, 3, 0.4, 1, 11).unwrap();
        let ones = dist.pmf.iter().filter(|&&x| x == 1.0).count();
        let zeros = dist.pmf.iter().filter(|&&x| x == 0.0).count();
        assert_eq!(ones, 1);
        assert_eq!(zeros, 10);
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let a = monte_carlo_ch_distribution(12, 4, 0.2, 50_000, 99).unwrap();
        let b = monte_carlo_ch_distribution(12, 4, 0.2, 50_000, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn monte_carlo_scalar_equals_uniform_per_node() {
        let scalar = monte_carlo_ch_distribution(9, 3, 0.25, 10_000, 5).unwrap();
        let vector = monte_carlo_ch_distribution_per_node(&[0.25; 9], 3, 10_000, 5).unwrap();
        assert_eq!(scalar, vector);
    }

    #[test]
    fn monte_carlo_tracks_analytical_mean() {
        let model = MarkovModel::build(10, 3, 0.2).unwrap();
        let analytical = ch_count_pmf(&model).unwrap();
        let mc = monte_carlo_ch_distribution(10, 3, 0.2, 200_000, 13).unwrap();
        // Mean of the per-round CH count has SE well under 0.01 here.
        assert!(
            (mc.mean - analytical.mean).abs() < 0.03,
            "mc {} vs analytical {}",
            mc.mean,
            analytical.mean
        );
    }

    #[test]
    fn build_rejects_bad_inputs() {
        assert!(matches!(
            MarkovModel::build(0, 3, 0.1),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            MarkovModel::build(5, 1, 0.1),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            MarkovModel::build(5, 3, 1.5),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            monte_carlo_ch_distribution(5, 3, 0.1, 0, 1),
            Err(Error::Argument(_))
        ));
    }
}
