//! Acceptance checks, one line per criterion.
//!
//! Runs without the libtest harness so the report is always printed; the
//! process exits non-zero if any criterion fails.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hiddencode_cli::request::{AnalysisRequest, BridgeRequest, ModelInput, SummaryInput};
use hiddencode_core::baseball::{self, PitchTaxonomy, RowPolicy};
use hiddencode_core::bridge::HvCode;
use hiddencode_core::evidence::{self, posterior_odds, timing_log10_factor};
use hiddencode_core::numerics::{log_trunc_beta_integral, quadrature_oracle};
use hiddencode_core::sim::{self, ExpectedSignals, Hypothesis, QSpec, SimConfig};
use hiddencode_core::{CodedModel, EvidenceReport, MatchSummary, PriorParams, RandomModel, Signal};
use num_bigint::BigUint;
use serde_json::Value;

enum Outcome {
    Pass(String),
    Fail(String),
    /// Cannot be reproduced with shipped data; substitutes ran and passed.
    Substituted(String),
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

/// log10 of a big integer, exact to f64 precision.
fn big_log10(x: &BigUint) -> f64 {
    let digits = x.to_str_radix(10);
    let lead = &digits[..digits.len().min(17)];
    lead.parse::<f64>().unwrap().log10() + (digits.len() - lead.len()) as f64
}

fn binomial(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

/// Closed-form log10 LR for p = 9/10, q_max = 1, unnormalized:
/// 9^m * (n+1) * C(n, h) / 10^n.
fn closed_form_log10_lr(n: u64, m: u64, h: u64) -> f64 {
    let num = BigUint::from(9u32).pow(m as u32) * BigUint::from(n + 1) * binomial(n, h);
    big_log10(&num) - n as f64
}

/// Running maximum that turns NaN into a failure instead of skipping it.
fn worse(acc: f64, err: f64) -> f64 {
    if err.is_nan() {
        f64::INFINITY
    } else {
        acc.max(err)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let summary = MatchSummary::new(267, 201, 85).unwrap();
    let report = EvidenceReport::evaluate(
        summary,
        &CodedModel::new(0.8).unwrap(),
        &RandomModel::new(0.1, false).unwrap(),
    )
    .unwrap();
    let elapsed = start.elapsed();
    check(
        (report.log10_lr - 30.53).abs() <= 0.05 && elapsed < Duration::from_secs(1),
        format!(
            "log10 LR = {:.6} (LR {}), target 30.53 +/- 0.05, {elapsed:?}",
            report.log10_lr, report.lr_scientific
        ),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let request = AnalysisRequest::Bridge(BridgeRequest {
        input: None,
        summary: Some(SummaryInput {
            n: 85,
            m: 83,
            positives: 45,
        }),
        code: HvCode::C,
        model: ModelInput {
            p: 0.9,
            q_max: 1.0,
            normalize: false,
        },
        prior: None,
    });
    let report = hiddencode_cli::run(&request).unwrap();
    let elapsed = start.elapsed();
    let e = report.evidence.unwrap();
    let oracle = closed_form_log10_lr(85, 83, 45);
    let err = rel(e.log10_lr, oracle);
    let published = 4e19f64.log10();
    check(
        err <= 1e-9 && elapsed < Duration::from_secs(1),
        format!(
            "log10 LR = {:.12}, big-integer oracle {oracle:.12}, rel err {err:.1e}, {elapsed:?}; \
             published figure ~4E+19 vs computed {}: {:.2} orders of magnitude apart (oracle authoritative)",
            e.log10_lr,
            e.lr_scientific,
            e.log10_lr - published
        ),
    )
}

fn criterion_3() -> Outcome {
    let prior = PriorParams::new(0.5, 10).unwrap();
    let mut ls: Vec<f64> = vec![0.0, 1.0, -1.0, 20.596972703351245, 30.537197, -58.4, 1e-300, 1e6];
    ls.extend((0..1000).map(|i| (i as f64 - 500.0) * 0.0731));
    let bad: Vec<f64> = ls
        .iter()
        .copied()
        .filter(|&l| posterior_odds(l, &prior) != l - 1.0)
        .collect();
    let via_report = EvidenceReport::evaluate(
        MatchSummary::new(85, 83, 45).unwrap(),
        &CodedModel::new(0.9).unwrap(),
        &RandomModel::uniform(),
    )
    .unwrap()
    .with_prior(&prior);
    let post = via_report.posterior.unwrap().log10_posterior_odds;
    check(
        bad.is_empty() && post == via_report.log10_lr - 1.0,
        format!(
            "posterior == L - 1 exactly for {} values of L ({} mismatches)",
            ls.len() + 1,
            bad.len()
        ),
    )
}

fn criterion_4() -> Outcome {
    let factor = 10f64.powf(timing_log10_factor(1, 6.0, 30.0).unwrap());
    check(
        (factor - 5.0).abs() <= 1e-12,
        format!("linear factor = {factor:.15}, target 5 +/- 1e-12"),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in [10u64, 85, 267, 1000] {
        for h in [0, n / 4, n / 2, 3 * n / 4, n] {
            for q_max in [0.05, 0.1, 0.5, 1.0] {
                let fast = log_trunc_beta_integral(h, n, q_max).unwrap();
                let oracle = quadrature_oracle(h, n, q_max).unwrap();
                worst = worse(worst, rel(fast, oracle));
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        worst <= 1e-8 && elapsed < Duration::from_secs(10),
        format!("{cases} grid points, worst relative log error {worst:.2e}, {elapsed:?}"),
    )
}

fn criterion_6() -> Outcome {
    let mut worst_coded = 0.0f64;
    let mut worst_random = 0.0f64;
    let random = RandomModel::new(0.1, false).unwrap();
    for n in 1..=sim::MAX_ENUMERATION_N {
        for p in [0.5, 0.8, 0.9] {
            // alternate the expected vector so both signal values appear
            let expected: Vec<Signal> = (0..n).map(|i| Signal::from(i % 3 == 0)).collect();
            let sums =
                sim::brute_force_normalization(&expected, &CodedModel::new(p).unwrap(), &random).unwrap();
            worst_coded = worse(worst_coded, (sums.sum_coded - 1.0).abs());
            worst_random = worse(worst_random, (sums.sum_random - 0.1).abs());
        }
    }
    check(
        worst_coded <= 1e-9 && worst_random <= 1e-9,
        format!("n = 1..=12: |sum coded - 1| <= {worst_coded:.1e}, |sum random - 0.1| <= {worst_random:.1e}"),
    )
}

fn calibration_sample() -> Vec<f64> {
    let config = SimConfig {
        hypothesis: Hypothesis::Random {
            q: QSpec::Uniform { q_max: 1.0 },
        },
        n: 20,
        reps: 100_000,
        seed: 20240601,
    };
    sim::lr_distribution(
        &config,
        &ExpectedSignals::CoinFlips,
        &CodedModel::new(0.7).unwrap(),
        &RandomModel::new(1.0, true).unwrap(),
    )
    .unwrap()
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let sample = calibration_sample();
    let summary = sim::summarize_sample(&sample).unwrap();
    let k10 = sim::markov_bound_check(&sample, 10.0).unwrap();
    let k100 = sim::markov_bound_check(&sample, 100.0).unwrap();
    let elapsed = start.elapsed();
    let mean = summary.mean_lr.unwrap();
    let se = summary.std_error_lr.unwrap();
    check(
        (mean - 1.0).abs() <= 3.0 * se && k10.pass && k100.pass && elapsed < Duration::from_secs(30),
        format!(
            "mean LR = {mean:.4} (se {se:.4}), P(LR>=10) = {:.4} <= {:.4}, P(LR>=100) = {:.5} <= {:.5}, {elapsed:?}",
            k10.empirical_fraction,
            k10.bound + k10.slack,
            k100.empirical_fraction,
            k100.bound + k100.slack
        ),
    )
}

fn criterion_8() -> Outcome {
    let log = baseball::parse_pitch_csv(
        std::fs::File::open(fixture("quiet_period.csv")).unwrap(),
        RowPolicy::Fail,
    )
    .unwrap();
    let from = "2017-04-03".parse().unwrap();
    let to = "2017-05-24".parse().unwrap();
    let r = baseball::estimate_bang_rate(&log.records, from, to).unwrap();
    check(
        r.games == 22 && r.per_pitch_rate == 0.015 && r.per_game_max_rate == 0.03,
        format!(
            "games = {}, per-pitch rate = {}, peak per-game rate = {}",
            r.games, r.per_pitch_rate, r.per_game_max_rate
        ),
    )
}

fn criterion_9() -> Outcome {
    // substitutes: normalization and calibration (criteria 6, 7) and log-additivity
    let normalization = matches!(criterion_6(), Outcome::Pass(_));
    let calibration = matches!(criterion_7(), Outcome::Pass(_));
    let log = baseball::parse_pitch_csv(
        std::fs::File::open(fixture("pitches10.csv")).unwrap(),
        RowPolicy::SkipWithWarning,
    )
    .unwrap();
    let taxonomy = PitchTaxonomy::default();
    let coded = CodedModel::new(0.8).unwrap();
    let random = RandomModel::new(0.1, false).unwrap();
    let combined =
        baseball::per_game_evidence(&log.records, &taxonomy, RowPolicy::Fail, &coded, &random).unwrap();
    let separate: f64 = baseball::group_by_game(&log.records)
        .iter()
        .map(|g| {
            let (obs, _) = baseball::code_b_observations(&g.records, &taxonomy, RowPolicy::Fail).unwrap();
            evidence::log10_lr(&evidence::summarize(&obs), &coded, &random).unwrap()
        })
        .sum();
    let additive = combined.combined_log10_lr == separate;
    let detail = format!(
        "per-series orders need the original pitch data, which is not available; \
         substitutes: normalization {}, calibration {}, two-game additivity {} ({:.6} == {:.6})",
        if normalization { "PASS" } else { "FAIL" },
        if calibration { "PASS" } else { "FAIL" },
        if additive { "PASS" } else { "FAIL" },
        combined.combined_log10_lr,
        separate
    );
    if normalization && calibration && additive {
        Outcome::Substituted(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let status = Command::new(env!("CARGO_BIN_EXE_hiddencode"))
        .args(["bridge", "--code", "c", "--input"])
        .arg(fixture("leads12.csv"))
        .arg("--json")
        .arg(&json)
        .output()
        .unwrap();
    if !status.status.success() {
        return Outcome::Fail(format!(
            "bridge run failed: {}",
            String::from_utf8_lossy(&status.stderr)
        ));
    }
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let e = &report["evidence"];
    let counts = (
        e["summary"]["n"].as_u64().unwrap(),
        e["summary"]["m"].as_u64().unwrap(),
        e["summary"]["positives"].as_u64().unwrap(),
    );
    let lr = e["log10_lr"].as_f64().unwrap();
    // hand count: 12 leads, 2 singletons, 7 of 10 orientations match code C, 6 horizontal
    let expected = (10, 7, 6);
    let oracle = closed_form_log10_lr(10, 7, 6);
    let err = rel(lr, oracle);
    check(
        counts == expected && err <= 1e-9,
        format!(
            "(n, m, h) = {counts:?}, expected {expected:?}; log10 LR = {lr:.12}, closed form {oracle:.12}, rel err {err:.1e}"
        ),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "baseball headline", criterion_1),
        (2, "bridge headline", criterion_2),
        (3, "posterior odds arithmetic", criterion_3),
        (4, "timing factor", criterion_4),
        (5, "truncated integral vs quadrature", criterion_5),
        (6, "brute-force normalization", criterion_6),
        (7, "calibration", criterion_7),
        (8, "quiet-period estimator", criterion_8),
        (9, "per-series orders", criterion_9),
        (10, "end-to-end bridge fixture", criterion_10),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        match f() {
            Outcome::Pass(d) => println!("criterion {id:>2} PASS  {name}: {d}"),
            Outcome::Substituted(d) => {
                println!("criterion {id:>2} NOT REPRODUCIBLE (substitutes pass)  {name}: {d}")
            }
            Outcome::Fail(d) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {d}")
            }
        }
    }
    println!("acceptance: {} of 10 criteria failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
