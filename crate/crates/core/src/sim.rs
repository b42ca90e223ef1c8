//! Monte Carlo checks of likelihood-ratio calibration.
//!
//! Sequences are abstract binary signals; no bridge deals or pitch logs are
//! simulated. Randomness comes from ChaCha20 (`rand_chacha::ChaCha20Rng`):
//! the key is derived from the master seed with `SeedableRng::seed_from_u64`
//! and repetition `r` uses stream `r`, so every repetition has its own
//! generator and results do not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evidence::{
    log10_lr, log_lik_coded, log_lik_random, summarize, CodedModel, MatchSummary, RandomModel, Signal,
    SignalObservation,
};

/// Identifier written into simulation reports.
pub const RNG_ALGORITHM: &str = "chacha20/seed_from_u64/stream=rep";

/// Largest sequence length [`brute_force_normalization`] enumerates.
pub const MAX_ENUMERATION_N: usize = 12;

/// Generator for repetition `rep` under master seed `seed`.
pub fn rep_rng(seed: u64, rep: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

/// How the Bernoulli probability is chosen under the random hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum QSpec {
    Fixed {
        q: f64,
    },
    /// q drawn once per sequence, uniform on `[0, q_max]`.
    Uniform {
        q_max: f64,
    },
}

impl QSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            QSpec::Fixed { q } if (0.0..=1.0).contains(&q) => Ok(()),
            QSpec::Uniform { q_max } if q_max > 0.0 && q_max <= 1.0 => Ok(()),
            other => Err(Error::domain(format!("invalid q specification {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "hypothesis")]
pub enum Hypothesis {
    Coded { p: f64 },
    Random { q: QSpec },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub hypothesis: Hypothesis,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::domain("reps must be at least 1"));
        }
        match self.hypothesis {
            Hypothesis::Coded { p } => CodedModel::new(p).map(|_| ()),
            Hypothesis::Random { q } => q.validate(),
        }
    }
}

/// Where the code's predictions come from in each repetition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedSignals {
    /// Fresh fair coin flips per repetition.
    CoinFlips,
    /// The same vector every repetition; its length overrides `SimConfig::n`.
    Fixed(Vec<Signal>),
}

fn bernoulli<R: Rng>(rng: &mut R, prob: f64) -> bool {
    rng.random::<f64>() < prob
}

pub fn simulate_coded_with<R: Rng>(rng: &mut R, expected: &[Signal], model: &CodedModel) -> Vec<Signal> {
    expected
        .iter()
        .map(|&e| {
            if bernoulli(rng, model.p()) {
                e
            } else {
                Signal::from(e == Signal::Zero)
            }
        })
        .collect()
}

/// Observed signals that follow `expected` with probability `p` each.
pub fn simulate_coded(expected: &[Signal], model: &CodedModel, seed: u64) -> Vec<Signal> {
    simulate_coded_with(&mut rep_rng(seed, 0), expected, model)
}

pub fn simulate_random_with<R: Rng>(rng: &mut R, n: usize, q: &QSpec) -> Result<Vec<Signal>> {
    q.validate()?;
    let q = match *q {
        QSpec::Fixed { q } => q,
        QSpec::Uniform { q_max } => q_max * rng.random::<f64>(),
    };
    Ok((0..n).map(|_| Signal::from(bernoulli(rng, q))).collect())
}

/// `n` Bernoulli(q) signals, independent of any code.
pub fn simulate_random(n: usize, q: &QSpec, seed: u64) -> Result<Vec<Signal>> {
    simulate_random_with(&mut rep_rng(seed, 0), n, q)
}

fn pair(expected: &[Signal], observed: &[Signal]) -> MatchSummary {
    let obs: Vec<SignalObservation> = expected
        .iter()
        .zip(observed)
        .map(|(&e, &o)| SignalObservation::new(Some(e), o))
        .collect();
    summarize(&obs)
}

/// One log10 likelihood ratio per repetition, in repetition order.
pub fn lr_distribution(
    config: &SimConfig,
    expected: &ExpectedSignals,
    coded: &CodedModel,
    random: &RandomModel,
) -> Result<Vec<f64>> {
    config.validate()?;
    (0..config.reps as u64)
        .into_par_iter()
        .map(|rep| {
            let mut rng = rep_rng(config.seed, rep);
            let expected: Vec<Signal> = match expected {
                ExpectedSignals::CoinFlips => (0..config.n)
                    .map(|_| Signal::from(bernoulli(&mut rng, 0.5)))
                    .collect(),
                ExpectedSignals::Fixed(v) => v.clone(),
            };
            let observed = match config.hypothesis {
                Hypothesis::Coded { p } => simulate_coded_with(&mut rng, &expected, &CodedModel::new(p)?),
                Hypothesis::Random { q } => simulate_random_with(&mut rng, expected.len(), &q)?,
            };
            log10_lr(&pair(&expected, &observed), coded, random)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkovCheck {
    pub k: f64,
    pub empirical_fraction: f64,
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
}

/// Compare the empirical P(LR ≥ k) under the random hypothesis with the
/// universal bound 1/k, allowing `3·sqrt(1/(k·reps))` of Monte Carlo slack.
pub fn markov_bound_check(sample: &[f64], k: f64) -> Result<MarkovCheck> {
    if !k.is_finite() || k <= 1.0 {
        return Err(Error::domain(format!("threshold k must exceed 1, got {k}")));
    }
    if sample.is_empty() {
        return Err(Error::domain("empty sample"));
    }
    let threshold = k.log10();
    let hits = sample.iter().filter(|&&l| l >= threshold).count();
    let empirical_fraction = hits as f64 / sample.len() as f64;
    let bound = 1.0 / k;
    let slack = 3.0 * (1.0 / (k * sample.len() as f64)).sqrt();
    Ok(MarkovCheck {
        k,
        empirical_fraction,
        bound,
        slack,
        pass: empirical_fraction <= bound + slack,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationSums {
    pub sum_coded: f64,
    pub sum_random: f64,
}

/// Sum both likelihoods over every one of the 2^n observed vectors.
pub fn brute_force_normalization(
    expected: &[Signal],
    coded: &CodedModel,
    random: &RandomModel,
) -> Result<NormalizationSums> {
    let n = expected.len();
    if n > MAX_ENUMERATION_N {
        return Err(Error::domain(format!(
            "enumeration supports n <= {MAX_ENUMERATION_N}, got {n}"
        )));
    }
    let mut sums = NormalizationSums {
        sum_coded: 0.0,
        sum_random: 0.0,
    };
    for bits in 0u32..(1 << n) {
        let observed: Vec<Signal> = (0..n).map(|i| Signal::from(bits >> i & 1 == 1)).collect();
        let s = pair(expected, &observed);
        sums.sum_coded += log_lik_coded(&s, coded).exp();
        sums.sum_random += log_lik_random(&s, random)?.exp();
    }
    Ok(sums)
}

/// Descriptive statistics of a log10 LR sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub reps: usize,
    /// log10 of the mean linear-scale LR, computed without leaving log space.
    pub log10_mean_lr: f64,
    /// Linear-scale mean, omitted once it would exceed 10^300.
    pub mean_lr: Option<f64>,
    /// Standard error of `mean_lr`.
    pub std_error_lr: Option<f64>,
    /// `(probability, log10_lr)` pairs.
    pub quantiles: Vec<(f64, f64)>,
}

pub const REPORTED_QUANTILES: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

pub fn summarize_sample(sample: &[f64]) -> Result<SampleSummary> {
    if sample.is_empty() {
        return Err(Error::domain("empty sample"));
    }
    let reps = sample.len();
    let max = sample.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scaled: f64 = sample.iter().map(|l| 10f64.powf(l - max)).sum();
    let log10_mean_lr = max + (scaled / reps as f64).log10();

    let (mean_lr, std_error_lr) = if max <= 300.0 {
        let linear: Vec<f64> = sample.iter().map(|l| 10f64.powf(*l)).collect();
        let mean = linear.iter().sum::<f64>() / reps as f64;
        let se = if reps > 1 {
            let var = linear.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
            Some((var / reps as f64).sqrt())
        } else {
            None
        };
        (Some(mean), se)
    } else {
        (None, None)
    };

    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let quantiles = REPORTED_QUANTILES
        .iter()
        .map(|&q| (q, quantile_sorted(&sorted, q)))
        .collect();

    Ok(SampleSummary {
        reps,
        log10_mean_lr,
        mean_lr,
        std_error_lr,
        quantiles,
    })
}

/// Linear interpolation between order statistics.
fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coin_vector(n: usize, seed: u64) -> Vec<Signal> {
        let mut rng = rep_rng(seed, 999);
        (0..n).map(|_| Signal::from(rng.random::<bool>())).collect()
    }

    #[test]
    fn near_perfect_coding_reproduces_code() {
        let expected = coin_vector(50, 1);
        let model = CodedModel::new(1.0 - 1e-12).unwrap();
        assert_eq!(simulate_coded(&expected, &model, 7), expected);
    }

    #[test]
    fn empty_sequences() {
        assert!(simulate_coded(&[], &CodedModel::new(0.9).unwrap(), 1).is_empty());
        assert!(simulate_random(0, &QSpec::Fixed { q: 0.5 }, 1)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn coded_match_fraction_concentrates() {
        let expected = coin_vector(10_000, 2);
        let observed = simulate_coded(&expected, &CodedModel::new(0.9).unwrap(), 42);
        let m = pair(&expected, &observed).m as f64;
        assert!((m / 1e4 - 0.9).abs() < 0.02, "{m}");
    }

    #[test]
    fn random_extremes_and_concentration() {
        let zeros = simulate_random(100, &QSpec::Fixed { q: 0.0 }, 3).unwrap();
        assert!(zeros.iter().all(|&s| s == Signal::Zero));
        let ones = simulate_random(100, &QSpec::Fixed { q: 1.0 }, 3).unwrap();
        assert!(ones.iter().all(|&s| s == Signal::One));
        let v = simulate_random(10_000, &QSpec::Fixed { q: 0.3 }, 11).unwrap();
        let frac = v.iter().filter(|&&s| s == Signal::One).count() as f64 / 1e4;
        assert!((frac - 0.3).abs() < 0.02, "{frac}");
    }

    #[test]
    fn bad_q_specs() {
        assert!(simulate_random(3, &QSpec::Fixed { q: 1.5 }, 0).is_err());
        assert!(simulate_random(3, &QSpec::Uniform { q_max: 0.0 }, 0).is_err());
    }

    #[test]
    fn seeds_are_deterministic_and_streams_differ() {
        let q = QSpec::Uniform { q_max: 1.0 };
        assert_eq!(
            simulate_random(64, &q, 5).unwrap(),
            simulate_random(64, &q, 5).unwrap()
        );
        let a: Vec<u64> = (0..4).map(|_| rep_rng(5, 0).random()).collect();
        let b: u64 = rep_rng(5, 1).random();
        assert_ne!(a[0], b);
    }

    #[test]
    fn single_rep() {
        let cfg = SimConfig {
            hypothesis: Hypothesis::Coded { p: 0.9 },
            n: 10,
            reps: 1,
            seed: 1,
        };
        let out = lr_distribution(
            &cfg,
            &ExpectedSignals::CoinFlips,
            &CodedModel::new(0.9).unwrap(),
            &RandomModel::uniform(),
        )
        .unwrap();
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn zero_reps_rejected() {
        let cfg = SimConfig {
            hypothesis: Hypothesis::Coded { p: 0.9 },
            n: 10,
            reps: 0,
            seed: 1,
        };
        assert!(lr_distribution(
            &cfg,
            &ExpectedSignals::CoinFlips,
            &CodedModel::new(0.9).unwrap(),
            &RandomModel::uniform()
        )
        .is_err());
    }

    #[test]
    fn markov_degenerate_sample() {
        let c = markov_bound_check(&[-5.0; 100], 10.0).unwrap();
        assert_eq!(c.empirical_fraction, 0.0);
        assert!(c.pass);
        assert!(markov_bound_check(&[0.0], 1.0).is_err());
        assert!(markov_bound_check(&[], 10.0).is_err());
    }

    #[test]
    fn enumeration_limit() {
        let v = vec![Signal::Zero; 13];
        assert!(
            brute_force_normalization(&v, &CodedModel::new(0.7).unwrap(), &RandomModel::uniform()).is_err()
        );
    }

    #[test]
    fn sample_summary_basics() {
        let s = summarize_sample(&[0.0, 1.0, 2.0]).unwrap();
        assert!((s.mean_lr.unwrap() - 37.0).abs() < 1e-12);
        assert!((s.log10_mean_lr - 37f64.log10()).abs() < 1e-12);
        assert_eq!(s.quantiles[2], (0.5, 1.0));
        let huge = summarize_sample(&[400.0, 401.0]).unwrap();
        assert!(huge.mean_lr.is_none());
        assert!((huge.log10_mean_lr - (400.0 + 5.5f64.log10())).abs() < 1e-9);
    }
}
