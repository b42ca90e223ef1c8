//! Shared inputs for the likelihood benchmarks.

use hiddencode_core::sim::{Hypothesis, QSpec, SimConfig};
use hiddencode_core::{CodedModel, MatchSummary, RandomModel};

/// One benchmark case: a summary and the models it is scored under.
pub struct Case {
    pub label: &'static str,
    pub summary: MatchSummary,
    pub coded: CodedModel,
    pub random: RandomModel,
}

/// Small, headline-sized and large inputs.
pub fn cases() -> Vec<Case> {
    let case = |label, n, m, positives, p, q_max| Case {
        label,
        summary: MatchSummary::new(n, m, positives).unwrap(),
        coded: CodedModel::new(p).unwrap(),
        random: RandomModel::new(q_max, false).unwrap(),
    };
    vec![
        case("bridge-85", 85, 83, 45, 0.9, 1.0),
        case("baseball-267", 267, 201, 85, 0.8, 0.1),
        case("season-20000", 20_000, 15_000, 4_000, 0.8, 0.1),
    ]
}

/// Calibration run under the random hypothesis.
pub fn calibration_config(reps: usize) -> SimConfig {
    SimConfig {
        hypothesis: Hypothesis::Random {
            q: QSpec::Uniform { q_max: 1.0 },
        },
        n: 20,
        reps,
        seed: 1,
    }
}
