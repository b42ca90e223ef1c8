//! Command-line front end for `hiddencode-core`.
//!
//! Every run is described by an [`AnalysisRequest`]. The request is echoed
//! verbatim in the JSON report, so feeding it back to [`run`] reproduces the
//! same numbers.

pub mod args;
pub mod report;
pub mod request;

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use hiddencode_core::baseball::{self, PitchRecord, PitchTaxonomy, RowPolicy};
use hiddencode_core::bridge;
use hiddencode_core::evidence::{self, format_scientific, Grid};
use hiddencode_core::sim::{self, ExpectedSignals, Hypothesis, SimConfig, RNG_ALGORITHM};
use hiddencode_core::{CodedModel, EvidenceReport, MatchSummary, PriorParams, RandomModel};
use thiserror::Error;

pub use report::{render_text, JsonReport};
pub use request::AnalysisRequest;

use report::{PerGameTable, SimulationReport, SweepReport};
use request::{
    BaseballRequest, BridgeRequest, ModelInput, PriorInput, RateRequest, SimHypothesis, SimulateRequest,
    SummaryInput, SweepRequest,
};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or input data.
    #[error("{0}")]
    Input(String),
    /// The numerical machinery failed to converge.
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}

impl From<hiddencode_core::Error> for CliError {
    fn from(e: hiddencode_core::Error) -> Self {
        if e.is_numeric() {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn input_err(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: hiddencode_core::Result<T>) -> Result<T> {
    r.map_err(|e| {
        let numeric = e.is_numeric();
        let msg = format!("{}: {e}", path.display());
        if numeric {
            CliError::Numeric(msg)
        } else {
            CliError::Input(msg)
        }
    })
}

fn models(m: &ModelInput) -> Result<(CodedModel, RandomModel)> {
    Ok((CodedModel::new(m.p)?, RandomModel::new(m.q_max, m.normalize)?))
}

fn prior(p: &Option<PriorInput>) -> Result<Option<PriorParams>> {
    p.map(|p| PriorParams::new(p.psi, p.m_codes))
        .transpose()
        .map_err(Into::into)
}

fn summary(s: &SummaryInput) -> Result<MatchSummary> {
    Ok(MatchSummary::new(s.n, s.m, s.positives)?)
}

fn one_source(input: bool, summary: bool) -> Result<()> {
    match (input, summary) {
        (true, false) | (false, true) => Ok(()),
        (true, true) => Err(input_err("give either an input file or summary counts, not both")),
        (false, false) => Err(input_err("give an input file or summary counts")),
    }
}

/// Execute one request.
pub fn run(request: &AnalysisRequest) -> Result<JsonReport> {
    let mut report = JsonReport::new(request.clone());
    match request {
        AnalysisRequest::Bridge(r) => run_bridge(r, &mut report)?,
        AnalysisRequest::Baseball(r) => run_baseball(r, &mut report)?,
        AnalysisRequest::Rate(r) => run_rate(r, &mut report)?,
        AnalysisRequest::Simulate(r) => run_simulate(r, &mut report)?,
        AnalysisRequest::Sweep(r) => run_sweep(r, &mut report)?,
    }
    Ok(report)
}

fn run_bridge(r: &BridgeRequest, report: &mut JsonReport) -> Result<()> {
    one_source(r.input.is_some(), r.summary.is_some())?;
    let (coded, random) = models(&r.model)?;
    let prior = prior(&r.prior)?;
    let summary = match (&r.input, &r.summary) {
        (Some(path), _) => {
            let records = with_path(path, bridge::read_leads_csv(open(path)?))?;
            let obs = with_path(path, bridge::evaluate_code(r.code, &records))?;
            evidence::summarize(&obs)
        }
        (None, Some(s)) => summary(s)?,
        (None, None) => unreachable!(),
    };
    let mut e = EvidenceReport::evaluate(summary, &coded, &random)?;
    if let Some(p) = &prior {
        e = e.with_prior(p);
    }
    report.evidence = Some(e);
    Ok(())
}

fn read_pitches(path: &Path, skip_malformed: bool, warnings: &mut Vec<String>) -> Result<Vec<PitchRecord>> {
    let policy = if skip_malformed {
        RowPolicy::SkipWithWarning
    } else {
        RowPolicy::Fail
    };
    let log = with_path(path, baseball::parse_pitch_csv(open(path)?, policy))?;
    warnings.extend(
        log.warnings
            .into_iter()
            .map(|w| format!("{}: {w}", path.display())),
    );
    Ok(log.records)
}

fn run_baseball(r: &BaseballRequest, report: &mut JsonReport) -> Result<()> {
    one_source(r.input.is_some(), r.summary.is_some())?;
    let (coded, random) = models(&r.model)?;
    let prior = prior(&r.prior)?;
    if r.summary.is_some() && (r.per_game || r.from.is_some() || r.to.is_some() || r.taxonomy.is_some()) {
        return Err(input_err(
            "per-game tables, date ranges and taxonomies need an input file",
        ));
    }
    if let (Some(from), Some(to)) = (r.from, r.to) {
        if from > to {
            return Err(input_err(format!("empty date range {from} .. {to}")));
        }
    }
    let unknown = if r.skip_unknown {
        RowPolicy::SkipWithWarning
    } else {
        RowPolicy::Fail
    };

    let summary = match (&r.input, &r.summary) {
        (Some(path), _) => {
            let taxonomy = match &r.taxonomy {
                Some(t) => with_path(t, PitchTaxonomy::from_csv(open(t)?))?,
                None => PitchTaxonomy::default(),
            };
            let records: Vec<PitchRecord> = read_pitches(path, r.skip_malformed, &mut report.warnings)?
                .into_iter()
                .filter(|p| r.from.is_none_or(|d| p.date >= d) && r.to.is_none_or(|d| p.date <= d))
                .collect();
            let (obs, warnings) =
                with_path(path, baseball::code_b_observations(&records, &taxonomy, unknown))?;
            report.warnings.extend(warnings);
            if r.per_game {
                let pg = with_path(
                    path,
                    baseball::per_game_evidence(&records, &taxonomy, unknown, &coded, &random),
                )?;
                report.per_game = Some(PerGameTable {
                    combined_lr_scientific: format_scientific(pg.combined_log10_lr),
                    posterior: prior.as_ref().map(|p| evidence::PosteriorBlock {
                        log10_prior_odds: evidence::prior_odds(p),
                        log10_posterior_odds: evidence::posterior_odds(pg.combined_log10_lr, p),
                    }),
                    games: pg.games,
                    combined_log10_lr: pg.combined_log10_lr,
                    assumption: pg.assumption,
                });
            }
            evidence::summarize(&obs)
        }
        (None, Some(s)) => summary(s)?,
        (None, None) => unreachable!(),
    };
    let mut e = EvidenceReport::evaluate(summary, &coded, &random)?;
    if let Some(p) = &prior {
        e = e.with_prior(p);
    }
    if let Some(t) = &r.timing {
        e = e.with_timing(summary.positives, t.window_seconds, t.frame_seconds)?;
    }
    report.evidence = Some(e);
    Ok(())
}

fn run_rate(r: &RateRequest, report: &mut JsonReport) -> Result<()> {
    let records = read_pitches(&r.input, r.skip_malformed, &mut report.warnings)?;
    report.rate = Some(baseball::estimate_bang_rate(&records, r.from, r.to)?);
    Ok(())
}

fn run_simulate(r: &SimulateRequest, report: &mut JsonReport) -> Result<()> {
    let (coded, random) = models(&r.model)?;
    let hypothesis = match r.hypothesis {
        SimHypothesis::Coded => Hypothesis::Coded { p: r.model.p },
        SimHypothesis::Random => Hypothesis::Random { q: r.generator_q },
    };
    let config = SimConfig {
        hypothesis,
        n: r.n,
        reps: r.reps,
        seed: r.seed,
    };
    let sample = sim::lr_distribution(&config, &ExpectedSignals::CoinFlips, &coded, &random)?;
    let markov = r
        .markov_k
        .iter()
        .map(|&k| sim::markov_bound_check(&sample, k))
        .collect::<hiddencode_core::Result<_>>()?;
    report.simulation = Some(SimulationReport {
        rng_algorithm: RNG_ALGORITHM.to_string(),
        sample: sim::summarize_sample(&sample)?,
        markov,
    });
    Ok(())
}

fn run_sweep(r: &SweepRequest, report: &mut JsonReport) -> Result<()> {
    let (coded, random) = models(&r.model)?;
    let grid = Grid {
        from: r.from,
        to: r.to,
        steps: r.steps,
    };
    let rows = evidence::sweep(&summary(&r.summary)?, r.parameter, &grid, &coded, &random)?;
    report.sweep = Some(SweepReport {
        parameter: r.parameter.to_string(),
        rows,
    });
    Ok(())
}
