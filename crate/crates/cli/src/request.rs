use std::path::PathBuf;

use chrono::NaiveDate;
use hiddencode_core::bridge::HvCode;
use hiddencode_core::evidence::SweepParameter;
use hiddencode_core::sim::QSpec;
use serde::{Deserialize, Serialize};

/// Counts entered directly instead of raw records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryInput {
    pub n: u64,
    pub m: u64,
    pub positives: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelInput {
    pub p: f64,
    pub q_max: f64,
    pub normalize: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorInput {
    pub psi: f64,
    pub m_codes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingInput {
    pub window_seconds: f64,
    pub frame_seconds: f64,
}

/// Exactly one of `input` and `summary` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeRequest {
    pub input: Option<PathBuf>,
    pub summary: Option<SummaryInput>,
    pub code: HvCode,
    pub model: ModelInput,
    pub prior: Option<PriorInput>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseballRequest {
    pub input: Option<PathBuf>,
    pub summary: Option<SummaryInput>,
    pub taxonomy: Option<PathBuf>,
    pub skip_unknown: bool,
    pub skip_malformed: bool,
    pub per_game: bool,
    pub from: Option<NaiveDate>,
    pub to: Option<NaiveDate>,
    pub model: ModelInput,
    pub prior: Option<PriorInput>,
    pub timing: Option<TimingInput>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRequest {
    pub input: PathBuf,
    pub from: NaiveDate,
    pub to: NaiveDate,
    pub skip_malformed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimHypothesis {
    Coded,
    Random,
}

/// `model.p` doubles as the generator's coding probability under `Coded`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateRequest {
    pub hypothesis: SimHypothesis,
    pub n: usize,
    pub generator_q: QSpec,
    pub model: ModelInput,
    pub reps: usize,
    pub seed: u64,
    pub markov_k: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRequest {
    pub summary: SummaryInput,
    pub parameter: SweepParameter,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub model: ModelInput,
}

/// A complete, replayable description of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum AnalysisRequest {
    Bridge(BridgeRequest),
    Baseball(BaseballRequest),
    Rate(RateRequest),
    Simulate(SimulateRequest),
    Sweep(SweepRequest),
}
