//! Hypothesis models, match summaries, likelihood ratios and odds.
//!
//! Two competing explanations are scored for a sequence of observed binary
//! signals:
//!
//! * **coded**: each applicable signal agrees with the code's prediction with
//!   probability `p`, independently, giving `p^m (1−p)^(n−m)`;
//! * **random**: signals are Bernoulli(q), independent of the events, with
//!   `q` uniform on `[0, q_max]`, giving `∫₀^{q_max} q^k (1−q)^(n−k) dq`
//!   (divided by `q_max` when the proper-prior normalization is requested).
//!
//! All likelihoods are natural-log values; reported figures are log10.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{log_trunc_beta_integral, LogValue};

/// A binary signal: horizontal/vertical lead, bang/no bang.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Signal {
    Zero,
    One,
}

impl Signal {
    pub fn as_u8(self) -> u8 {
        match self {
            Signal::Zero => 0,
            Signal::One => 1,
        }
    }
}

impl From<bool> for Signal {
    fn from(b: bool) -> Self {
        if b {
            Signal::One
        } else {
            Signal::Zero
        }
    }
}

impl From<Signal> for u8 {
    fn from(s: Signal) -> u8 {
        s.as_u8()
    }
}

impl TryFrom<u8> for Signal {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            0 => Ok(Signal::Zero),
            1 => Ok(Signal::One),
            other => Err(Error::domain(format!("signal must be 0 or 1, got {other}"))),
        }
    }
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// One event: what the code predicts (`None` when it does not apply) and what was seen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignalObservation {
    pub expected: Option<Signal>,
    pub observed: Signal,
}

impl SignalObservation {
    pub fn new(expected: Option<Signal>, observed: Signal) -> Self {
        Self { expected, observed }
    }

    pub fn is_match(&self) -> Option<bool> {
        self.expected.map(|e| e == self.observed)
    }
}

/// Sufficient statistics of a coded event sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MatchSummary {
    /// Applicable events.
    pub n: u64,
    /// Applicable events whose observed signal equals the prediction.
    pub m: u64,
    /// Applicable events with observed signal 1.
    pub positives: u64,
    /// Events for which the code makes no prediction.
    pub excluded: u64,
}

impl MatchSummary {
    /// Summary entered directly from published counts.
    pub fn new(n: u64, m: u64, positives: u64) -> Result<Self> {
        if m > n {
            return Err(Error::domain(format!("match count m={m} exceeds n={n}")));
        }
        if positives > n {
            return Err(Error::domain(format!("positive count {positives} exceeds n={n}")));
        }
        Ok(Self {
            n,
            m,
            positives,
            excluded: 0,
        })
    }

    pub fn total(&self) -> u64 {
        self.n + self.excluded
    }

    /// Pointwise sum; used when pooling groups into a single summary.
    pub fn merge(&self, other: &MatchSummary) -> MatchSummary {
        MatchSummary {
            n: self.n + other.n,
            m: self.m + other.m,
            positives: self.positives + other.positives,
            excluded: self.excluded + other.excluded,
        }
    }
}

/// Count matches, positives and exclusions.
pub fn summarize<'a, I>(observations: I) -> MatchSummary
where
    I: IntoIterator<Item = &'a SignalObservation>,
{
    let mut s = MatchSummary::default();
    for obs in observations {
        match obs.expected {
            None => s.excluded += 1,
            Some(expected) => {
                s.n += 1;
                if expected == obs.observed {
                    s.m += 1;
                }
                if obs.observed == Signal::One {
                    s.positives += 1;
                }
            }
        }
    }
    s
}

/// The code is executed correctly with probability `p` on each event.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CodedModelRaw")]
pub struct CodedModel {
    p: f64,
}

#[derive(Deserialize)]
struct CodedModelRaw {
    p: f64,
}

impl TryFrom<CodedModelRaw> for CodedModel {
    type Error = Error;
    fn try_from(raw: CodedModelRaw) -> Result<Self> {
        CodedModel::new(raw.p)
    }
}

impl CodedModel {
    /// `p` must lie strictly inside (0, 1); perfect coding (`p = 1`) makes
    /// every mismatch impossible and is rejected.
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("coded model requires 0 < p < 1, got {p}")));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Signals are Bernoulli(q) with `q ~ Uniform[0, q_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RandomModelRaw")]
pub struct RandomModel {
    q_max: f64,
    normalize: bool,
}

#[derive(Deserialize)]
struct RandomModelRaw {
    q_max: f64,
    normalize: bool,
}

impl TryFrom<RandomModelRaw> for RandomModel {
    type Error = Error;
    fn try_from(raw: RandomModelRaw) -> Result<Self> {
        RandomModel::new(raw.q_max, raw.normalize)
    }
}

impl RandomModel {
    /// With `normalize == false` the likelihood is the bare integral over
    /// `[0, q_max]`; with `true` it is divided by `q_max`, i.e. a proper
    /// uniform prior on q.
    pub fn new(q_max: f64, normalize: bool) -> Result<Self> {
        if !(q_max > 0.0 && q_max <= 1.0) {
            return Err(Error::domain(format!(
                "random model requires 0 < q_max <= 1, got {q_max}"
            )));
        }
        Ok(Self { q_max, normalize })
    }

    /// q uniform on the whole unit interval.
    pub fn uniform() -> Self {
        Self {
            q_max: 1.0,
            normalize: false,
        }
    }

    pub fn q_max(&self) -> f64 {
        self.q_max
    }

    pub fn normalize(&self) -> bool {
        self.normalize
    }
}

/// Prior belief: probability `psi` that the party cheats in this way at all,
/// and the number `m_codes` of meaningful codes it could have used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PriorParamsRaw")]
pub struct PriorParams {
    psi: f64,
    m_codes: u64,
}

#[derive(Deserialize)]
struct PriorParamsRaw {
    psi: f64,
    m_codes: u64,
}

impl TryFrom<PriorParamsRaw> for PriorParams {
    type Error = Error;
    fn try_from(raw: PriorParamsRaw) -> Result<Self> {
        PriorParams::new(raw.psi, raw.m_codes)
    }
}

impl PriorParams {
    pub fn new(psi: f64, m_codes: u64) -> Result<Self> {
        if !(psi > 0.0 && psi < 1.0) {
            return Err(Error::domain(format!("prior requires 0 < psi < 1, got {psi}")));
        }
        if m_codes == 0 {
            return Err(Error::domain("number of codes M must be at least 1"));
        }
        Ok(Self { psi, m_codes })
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    pub fn m_codes(&self) -> u64 {
        self.m_codes
    }
}

/// ln P(observations | coded) = m ln p + (n − m) ln(1 − p).
pub fn log_lik_coded(summary: &MatchSummary, model: &CodedModel) -> LogValue {
    let m = summary.m as f64;
    let misses = (summary.n - summary.m) as f64;
    let mut ln = 0.0;
    if m > 0.0 {
        ln += m * model.p.ln();
    }
    if misses > 0.0 {
        ln += misses * (-model.p).ln_1p();
    }
    // p ∈ (0,1) keeps both logs finite
    LogValue::new(ln).expect("finite by construction")
}

/// ln P(observations | random).
pub fn log_lik_random(summary: &MatchSummary, model: &RandomModel) -> Result<LogValue> {
    let mut ln = log_trunc_beta_integral(summary.positives, summary.n, model.q_max)?;
    if model.normalize {
        ln -= model.q_max.ln();
    }
    LogValue::new(ln)
}

/// log10 of P(observations | coded) / P(observations | random).
pub fn log10_lr(summary: &MatchSummary, coded: &CodedModel, random: &RandomModel) -> Result<f64> {
    let num = log_lik_coded(summary, coded);
    let den = log_lik_random(summary, random)?;
    Ok(num.log10() - den.log10())
}

/// log10 of the prior odds ψ·(1/M) / (1 − ψ).
pub fn prior_odds(prior: &PriorParams) -> f64 {
    (prior.psi / (1.0 - prior.psi)).log10() - (prior.m_codes as f64).log10()
}

/// Posterior odds = likelihood ratio × prior odds, in log10.
pub fn posterior_odds(log10_lr: f64, prior: &PriorParams) -> f64 {
    log10_lr + prior_odds(prior)
}

/// log10 of the extra factor from bang timing.
///
/// Under cheating each bang falls in the pre-pitch window with probability
/// close to 1; under the random hypothesis only with probability
/// `window / frame`. Each bang therefore contributes `log10(frame / window)`.
pub fn timing_log10_factor(bang_count: u64, window_seconds: f64, frame_seconds: f64) -> Result<f64> {
    if !window_seconds.is_finite() || window_seconds <= 0.0 {
        return Err(Error::domain(format!(
            "timing window must be positive, got {window_seconds}"
        )));
    }
    if !frame_seconds.is_finite() || frame_seconds < window_seconds {
        return Err(Error::domain(format!(
            "timing window ({window_seconds}s) must not exceed the frame ({frame_seconds}s)"
        )));
    }
    Ok(bang_count as f64 * (frame_seconds / window_seconds).log10())
}

/// Which model parameter a sensitivity sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    P,
    QMax,
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepParameter::P => f.write_str("p"),
            SweepParameter::QMax => f.write_str("q_max"),
        }
    }
}

/// Evenly spaced grid, both ends included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl Grid {
    pub fn points(&self) -> Result<Vec<f64>> {
        if self.steps < 2 {
            return Err(Error::domain(format!(
                "a sweep needs at least 2 steps, got {}",
                self.steps
            )));
        }
        if self.from.is_nan() || self.to.is_nan() || self.from > self.to {
            return Err(Error::domain(format!(
                "sweep grid must be ascending, got {} .. {}",
                self.from, self.to
            )));
        }
        let last = (self.steps - 1) as f64;
        Ok((0..self.steps)
            .map(|i| {
                if i == self.steps - 1 {
                    self.to
                } else {
                    self.from + (self.to - self.from) * (i as f64 / last)
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub log10_lr: f64,
}

/// Recompute the likelihood ratio across a grid of one model parameter,
/// holding the other fixed.
pub fn sweep(
    summary: &MatchSummary,
    parameter: SweepParameter,
    grid: &Grid,
    coded: &CodedModel,
    random: &RandomModel,
) -> Result<Vec<SweepRow>> {
    let points = grid.points()?;
    // validate the whole grid before computing anything
    let models: Vec<(CodedModel, RandomModel)> = points
        .iter()
        .map(|&v| match parameter {
            SweepParameter::P => Ok((CodedModel::new(v)?, *random)),
            SweepParameter::QMax => Ok((*coded, RandomModel::new(v, random.normalize)?)),
        })
        .collect::<Result<_>>()?;

    points
        .into_iter()
        .zip(models)
        .map(|(value, (c, r))| {
            Ok(SweepRow {
                value,
                log10_lr: log10_lr(summary, &c, &r)?,
            })
        })
        .collect()
}

/// Render a log10 magnitude as `d.dddE+NN`.
///
/// Works for magnitudes far beyond the range of `f64` since only the log is
/// ever exponentiated after reduction to `[0, 1)`.
pub fn format_scientific(log10: f64) -> String {
    if log10.is_nan() {
        return "NaN".to_string();
    }
    if log10 == f64::INFINITY {
        return "inf".to_string();
    }
    if log10 == f64::NEG_INFINITY {
        return "0.000E+00".to_string();
    }
    let mut exponent = log10.floor();
    let mut mantissa = ((10f64.powf(log10 - exponent)) * 1000.0).round() / 1000.0;
    if mantissa >= 10.0 {
        mantissa /= 10.0;
        exponent += 1.0;
    }
    let sign = if exponent < 0.0 { '-' } else { '+' };
    format!("{mantissa:.3}E{sign}{:02}", exponent.abs() as i64)
}

/// Inverse of [`format_scientific`]: the log10 of the rendered value.
pub fn parse_scientific(text: &str) -> Option<f64> {
    let (mantissa, exponent) = text.split_once(['E', 'e'])?;
    let mantissa: f64 = mantissa.parse().ok()?;
    let exponent: i64 = exponent.parse().ok()?;
    if mantissa.is_nan() || mantissa <= 0.0 {
        return None;
    }
    Some(mantissa.log10() + exponent as f64)
}

/// Largest log10 gap between a value and its rendered `d.ddd` form.
pub const SCIENTIFIC_LOG10_RESOLUTION: f64 = 2.2e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PosteriorBlock {
    pub log10_prior_odds: f64,
    pub log10_posterior_odds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingBlock {
    pub bang_count: u64,
    pub window_seconds: f64,
    pub frame_seconds: f64,
    pub log10_factor: f64,
    /// `log10_lr + log10_factor`; the headline ratio itself never includes timing.
    pub log10_lr_with_timing: f64,
}

/// Everything computed for one summary under one pair of models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceReport {
    pub summary: MatchSummary,
    pub log10_lik_coded: f64,
    pub log10_lik_random: f64,
    pub log10_lr: f64,
    pub lr_scientific: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub posterior: Option<PosteriorBlock>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing: Option<TimingBlock>,
}

impl EvidenceReport {
    pub fn evaluate(summary: MatchSummary, coded: &CodedModel, random: &RandomModel) -> Result<Self> {
        let log10_lik_coded = log_lik_coded(&summary, coded).log10();
        let log10_lik_random = log_lik_random(&summary, random)?.log10();
        let log10_lr = log10_lik_coded - log10_lik_random;
        Ok(Self {
            summary,
            log10_lik_coded,
            log10_lik_random,
            log10_lr,
            lr_scientific: format_scientific(log10_lr),
            posterior: None,
            timing: None,
        })
    }

    pub fn with_prior(mut self, prior: &PriorParams) -> Self {
        self.posterior = Some(PosteriorBlock {
            log10_prior_odds: prior_odds(prior),
            log10_posterior_odds: posterior_odds(self.log10_lr, prior),
        });
        self
    }

    pub fn with_timing(mut self, bang_count: u64, window_seconds: f64, frame_seconds: f64) -> Result<Self> {
        let log10_factor = timing_log10_factor(bang_count, window_seconds, frame_seconds)?;
        self.timing = Some(TimingBlock {
            bang_count,
            window_seconds,
            frame_seconds,
            log10_factor,
            log10_lr_with_timing: self.log10_lr + log10_factor,
        });
        Ok(self)
    }
}
