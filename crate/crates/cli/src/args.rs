use std::path::PathBuf;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use hiddencode_core::bridge::HvCode;
use hiddencode_core::evidence::SweepParameter;
use hiddencode_core::sim::QSpec;

use crate::request::{
    AnalysisRequest, BaseballRequest, BridgeRequest, ModelInput, PriorInput, RateRequest, SimHypothesis,
    SimulateRequest, SummaryInput, SweepRequest, TimingInput,
};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "hiddencode",
    version,
    about = "Likelihood-ratio evidence for hidden signalling codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Also write the full report as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evidence for a lead-orientation code in bridge.
    Bridge(BridgeArgs),
    /// Evidence for a pitch-signalling code in baseball.
    Baseball(BaseballArgs),
    /// Baseline bang rate over a date window.
    Rate(RateArgs),
    /// Monte Carlo distribution of the likelihood ratio.
    Simulate(SimulateArgs),
    /// Likelihood ratio across a grid of one model parameter.
    Sweep(SweepArgs),
    /// Re-run a request echoed in an earlier JSON report.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct PriorArgs {
    /// Prior probability that some code is in use.
    #[arg(long, requires = "m_codes")]
    pub psi: Option<f64>,
    /// Number of candidate codes considered.
    #[arg(long, requires = "psi")]
    pub m_codes: Option<u64>,
}

impl PriorArgs {
    fn to_input(&self) -> Option<PriorInput> {
        match (self.psi, self.m_codes) {
            (Some(psi), Some(m_codes)) => Some(PriorInput { psi, m_codes }),
            _ => None,
        }
    }
}

#[derive(Debug, Args)]
pub struct BridgeArgs {
    /// CSV with columns board, hand, lead, orientation.
    #[arg(long, conflicts_with_all = ["summary_n", "summary_m", "summary_h"])]
    pub input: Option<PathBuf>,
    #[arg(long, requires_all = ["summary_m", "summary_h"])]
    pub summary_n: Option<u64>,
    #[arg(long, requires = "summary_n")]
    pub summary_m: Option<u64>,
    /// Number of horizontal (signal 1) leads.
    #[arg(long, requires = "summary_n")]
    pub summary_h: Option<u64>,
    #[arg(long, default_value = "c", value_parser = parse_code)]
    pub code: HvCode,
    #[arg(long, default_value_t = 0.9)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub qmax: f64,
    /// Divide the random-model integral by q_max.
    #[arg(long)]
    pub normalize_prior: bool,
    #[command(flatten)]
    pub prior: PriorArgs,
}

fn parse_code(s: &str) -> Result<HvCode, String> {
    s.parse().map_err(|e: hiddencode_core::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct BaseballArgs {
    /// Pitch log CSV.
    #[arg(long, conflicts_with_all = ["summary_n", "summary_m", "summary_b"])]
    pub input: Option<PathBuf>,
    #[arg(long, requires_all = ["summary_m", "summary_b"])]
    pub summary_n: Option<u64>,
    #[arg(long, requires = "summary_n")]
    pub summary_m: Option<u64>,
    /// Number of banged pitches.
    #[arg(long, requires = "summary_n")]
    pub summary_b: Option<u64>,
    /// CSV with columns pitch_type, class (fastball or offspeed).
    #[arg(long)]
    pub taxonomy: Option<PathBuf>,
    /// Leave out pitches of unknown type instead of failing.
    #[arg(long)]
    pub skip_unknown: bool,
    /// Leave out malformed rows instead of failing.
    #[arg(long)]
    pub skip_malformed: bool,
    #[arg(long, default_value_t = 0.8)]
    pub p: f64,
    #[arg(long, default_value_t = 0.1)]
    pub qmax: f64,
    #[arg(long)]
    pub normalize_prior: bool,
    /// Add a per-game table and its combined ratio.
    #[arg(long)]
    pub per_game: bool,
    /// First date included (YYYY-MM-DD).
    #[arg(long)]
    pub from: Option<NaiveDate>,
    /// Last date included (YYYY-MM-DD).
    #[arg(long)]
    pub to: Option<NaiveDate>,
    /// Seconds within which a bang counts as timed to a pitch.
    #[arg(long, requires = "timing_frame")]
    pub timing_window: Option<f64>,
    /// Seconds over which a bang could have occurred by chance.
    #[arg(long, requires = "timing_window")]
    pub timing_frame: Option<f64>,
    #[command(flatten)]
    pub prior: PriorArgs,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub from: NaiveDate,
    #[arg(long)]
    pub to: NaiveDate,
    #[arg(long)]
    pub skip_malformed: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum HypothesisArg {
    Coded,
    Random,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub hypothesis: HypothesisArg,
    /// Signals per repetition.
    #[arg(long)]
    pub n: usize,
    /// Coding probability of the model, and of the generator under `coded`.
    #[arg(long, default_value_t = 0.9)]
    pub p: f64,
    /// Fixed Bernoulli probability for the random generator.
    #[arg(long, conflicts_with = "gen_qmax")]
    pub gen_q: Option<f64>,
    /// Random generator draws q uniformly on [0, gen-qmax] per repetition.
    #[arg(long)]
    pub gen_qmax: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub qmax: f64,
    #[arg(long)]
    pub normalize_prior: bool,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Thresholds for P(LR >= k) checks; defaults to 10 and 100 under `random`.
    #[arg(long = "markov-k", value_delimiter = ',')]
    pub markov_k: Vec<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SweepParamArg {
    P,
    Qmax,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub summary_n: u64,
    #[arg(long)]
    pub summary_m: u64,
    /// Signal-1 count (h in bridge, b in baseball).
    #[arg(long, visible_aliases = ["summary-h", "summary-b"])]
    pub summary_positives: u64,
    #[arg(long, value_enum)]
    pub param: SweepParamArg,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    #[arg(long, default_value_t = 11)]
    pub steps: usize,
    /// Fixed p while sweeping q_max.
    #[arg(long, default_value_t = 0.9)]
    pub p: f64,
    /// Fixed q_max while sweeping p.
    #[arg(long, default_value_t = 1.0)]
    pub qmax: f64,
    #[arg(long)]
    pub normalize_prior: bool,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// A JSON report, or a bare request object.
    pub report: PathBuf,
}

fn summary(n: Option<u64>, m: Option<u64>, positives: Option<u64>) -> Option<SummaryInput> {
    Some(SummaryInput {
        n: n?,
        m: m?,
        positives: positives?,
    })
}

impl Command {
    /// Translate parsed arguments into a request.
    pub fn into_request(self) -> Result<AnalysisRequest, CliError> {
        Ok(match self {
            Command::Bridge(a) => AnalysisRequest::Bridge(BridgeRequest {
                input: a.input,
                summary: summary(a.summary_n, a.summary_m, a.summary_h),
                code: a.code,
                model: ModelInput {
                    p: a.p,
                    q_max: a.qmax,
                    normalize: a.normalize_prior,
                },
                prior: a.prior.to_input(),
            }),
            Command::Baseball(a) => AnalysisRequest::Baseball(BaseballRequest {
                input: a.input,
                summary: summary(a.summary_n, a.summary_m, a.summary_b),
                taxonomy: a.taxonomy,
                skip_unknown: a.skip_unknown,
                skip_malformed: a.skip_malformed,
                per_game: a.per_game,
                from: a.from,
                to: a.to,
                model: ModelInput {
                    p: a.p,
                    q_max: a.qmax,
                    normalize: a.normalize_prior,
                },
                prior: a.prior.to_input(),
                timing: match (a.timing_window, a.timing_frame) {
                    (Some(window_seconds), Some(frame_seconds)) => Some(TimingInput {
                        window_seconds,
                        frame_seconds,
                    }),
                    _ => None,
                },
            }),
            Command::Rate(a) => AnalysisRequest::Rate(RateRequest {
                input: a.input,
                from: a.from,
                to: a.to,
                skip_malformed: a.skip_malformed,
            }),
            Command::Simulate(a) => {
                let hypothesis = match a.hypothesis {
                    HypothesisArg::Coded => SimHypothesis::Coded,
                    HypothesisArg::Random => SimHypothesis::Random,
                };
                let markov_k = if a.markov_k.is_empty() && hypothesis == SimHypothesis::Random {
                    vec![10.0, 100.0]
                } else {
                    a.markov_k
                };
                let generator_q = match (a.gen_q, a.gen_qmax) {
                    (Some(q), _) => QSpec::Fixed { q },
                    (None, Some(q_max)) => QSpec::Uniform { q_max },
                    (None, None) => QSpec::Uniform { q_max: 1.0 },
                };
                AnalysisRequest::Simulate(SimulateRequest {
                    hypothesis,
                    n: a.n,
                    generator_q,
                    model: ModelInput {
                        p: a.p,
                        q_max: a.qmax,
                        normalize: a.normalize_prior,
                    },
                    reps: a.reps,
                    seed: a.seed,
                    markov_k,
                })
            }
            Command::Sweep(a) => AnalysisRequest::Sweep(SweepRequest {
                summary: SummaryInput {
                    n: a.summary_n,
                    m: a.summary_m,
                    positives: a.summary_positives,
                },
                parameter: match a.param {
                    SweepParamArg::P => SweepParameter::P,
                    SweepParamArg::Qmax => SweepParameter::QMax,
                },
                from: a.from,
                to: a.to,
                steps: a.steps,
                model: ModelInput {
                    p: a.p,
                    q_max: a.qmax,
                    normalize: a.normalize_prior,
                },
            }),
            Command::Replay(a) => read_request(&a.report)?,
        })
    }
}

/// Load a request from a saved report, or from a bare request object.
pub fn read_request(path: &std::path::Path) -> Result<AnalysisRequest, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let request = value.get("request").cloned().unwrap_or(value);
    serde_json::from_value(request).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}
