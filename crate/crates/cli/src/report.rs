use hiddencode_core::baseball::{BangRate, GameEvidence};
use hiddencode_core::evidence::{PosteriorBlock, SweepRow};
use hiddencode_core::sim::{MarkovCheck, SampleSummary};
use hiddencode_core::EvidenceReport;
use serde::{Deserialize, Serialize};

use crate::request::AnalysisRequest;

pub const TOOL_NAME: &str = "hiddencode";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerGameTable {
    pub games: Vec<GameEvidence>,
    pub combined_log10_lr: f64,
    pub combined_lr_scientific: String,
    pub assumption: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub posterior: Option<PosteriorBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub rng_algorithm: String,
    pub sample: SampleSummary,
    pub markov: Vec<MarkovCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub parameter: String,
    pub rows: Vec<SweepRow>,
}

/// Machine-readable output of one run.
///
/// Floats are written in shortest round-trip form, so every value parses
/// back to the exact `f64` that was computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub tool: String,
    pub version: String,
    pub request: AnalysisRequest,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub evidence: Option<EvidenceReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub per_game: Option<PerGameTable>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rate: Option<BangRate>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub simulation: Option<SimulationReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sweep: Option<SweepReport>,
    pub warnings: Vec<String>,
}

impl JsonReport {
    pub fn new(request: AnalysisRequest) -> Self {
        Self {
            tool: TOOL_NAME.to_string(),
            version: TOOL_VERSION.to_string(),
            request,
            evidence: None,
            per_game: None,
            rate: None,
            simulation: None,
            sweep: None,
            warnings: Vec::new(),
        }
    }
}

/// Conventional verbal equivalent of a likelihood ratio.
pub fn verbal_scale(log10_lr: f64) -> String {
    let (mag, side) = if log10_lr >= 0.0 {
        (log10_lr, "coded")
    } else {
        (-log10_lr, "random")
    };
    let strength = if mag < std::f64::consts::LOG10_2 {
        return "no meaningful support for either hypothesis".to_string();
    } else if mag < 1.0 {
        "weak"
    } else if mag < 2.0 {
        "moderate"
    } else if mag < 3.0 {
        "moderately strong"
    } else if mag < 4.0 {
        "strong"
    } else if mag < 6.0 {
        "very strong"
    } else {
        "extremely strong"
    };
    format!("{strength} support for the {side} hypothesis")
}

fn row(out: &mut String, label: &str, value: impl std::fmt::Display) {
    out.push_str(&format!("  {label:<28} {value}\n"));
}

fn render_evidence(out: &mut String, e: &EvidenceReport) {
    row(out, "n (applicable)", e.summary.n);
    row(out, "m (matches)", e.summary.m);
    row(out, "positives", e.summary.positives);
    row(out, "excluded", e.summary.excluded);
    row(out, "log10 P(obs | coded)", format!("{:.6}", e.log10_lik_coded));
    row(out, "log10 P(obs | random)", format!("{:.6}", e.log10_lik_random));
    row(out, "log10 LR", format!("{:.6}", e.log10_lr));
    row(out, "LR", &e.lr_scientific);
    row(out, "verbal scale", verbal_scale(e.log10_lr));
    if let Some(p) = &e.posterior {
        row(out, "log10 prior odds", format!("{:.6}", p.log10_prior_odds));
        row(
            out,
            "log10 posterior odds",
            format!("{:.6}", p.log10_posterior_odds),
        );
    }
    if let Some(t) = &e.timing {
        row(out, "timing bangs", t.bang_count);
        row(out, "log10 timing factor", format!("{:.6}", t.log10_factor));
        row(
            out,
            "log10 LR with timing",
            format!("{:.6}", t.log10_lr_with_timing),
        );
    }
}

/// Aligned plain-text rendering for terminals.
pub fn render_text(report: &JsonReport) -> String {
    let mut out = String::new();
    let title = match &report.request {
        AnalysisRequest::Bridge(b) => format!("bridge evidence, code {}", b.code.id()),
        AnalysisRequest::Baseball(_) => "baseball evidence, code B".to_string(),
        AnalysisRequest::Rate(_) => "bang rate".to_string(),
        AnalysisRequest::Simulate(_) => "likelihood ratio simulation".to_string(),
        AnalysisRequest::Sweep(_) => "sensitivity sweep".to_string(),
    };
    out.push_str(&format!("{} {}: {title}\n", report.tool, report.version));

    if let Some(e) = &report.evidence {
        render_evidence(&mut out, e);
    }
    if let Some(t) = &report.per_game {
        out.push_str(&format!(
            "\n  {:<10} {:<10} {:<12} {:>5} {:>5} {:>5} {:>12}\n",
            "game", "date", "opponent", "n", "m", "pos", "log10 LR"
        ));
        for g in &t.games {
            out.push_str(&format!(
                "  {:<10} {:<10} {:<12} {:>5} {:>5} {:>5} {:>12.6}\n",
                g.game_id, g.date, g.opponent, g.summary.n, g.summary.m, g.summary.positives, g.log10_lr
            ));
        }
        row(
            &mut out,
            "combined log10 LR",
            format!("{:.6}", t.combined_log10_lr),
        );
        row(&mut out, "combined LR", &t.combined_lr_scientific);
        if let Some(p) = &t.posterior {
            row(
                &mut out,
                "combined log10 posterior odds",
                format!("{:.6}", p.log10_posterior_odds),
            );
        }
        row(&mut out, "assumption", &t.assumption);
    }
    if let Some(r) = &report.rate {
        row(&mut out, "games", r.games);
        row(&mut out, "pitches", r.pitches);
        row(&mut out, "per-pitch rate", format!("{:.6}", r.per_pitch_rate));
        row(
            &mut out,
            "peak per-game rate",
            format!("{:.6}", r.per_game_max_rate),
        );
    }
    if let Some(s) = &report.simulation {
        row(&mut out, "rng", &s.rng_algorithm);
        row(&mut out, "repetitions", s.sample.reps);
        row(
            &mut out,
            "log10 mean LR",
            format!("{:.6}", s.sample.log10_mean_lr),
        );
        if let Some(m) = s.sample.mean_lr {
            row(&mut out, "mean LR", format!("{m:.6}"));
        }
        if let Some(se) = s.sample.std_error_lr {
            row(&mut out, "std error of mean", format!("{se:.6}"));
        }
        for (q, v) in &s.sample.quantiles {
            row(&mut out, &format!("log10 LR quantile {q}"), format!("{v:.6}"));
        }
        for m in &s.markov {
            row(
                &mut out,
                &format!("P(LR >= {})", m.k),
                format!(
                    "{:.6} (bound {:.6} + slack {:.6}: {})",
                    m.empirical_fraction,
                    m.bound,
                    m.slack,
                    if m.pass { "ok" } else { "VIOLATED" }
                ),
            );
        }
    }
    if let Some(s) = &report.sweep {
        out.push_str(&format!("  {:>12} {:>14}\n", s.parameter, "log10 LR"));
        for r in &s.rows {
            out.push_str(&format!("  {:>12.6} {:>14.6}\n", r.value, r.log10_lr));
        }
    }
    for w in &report.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    out
}
