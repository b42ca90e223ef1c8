//! Bayesian likelihood-ratio evaluation of alleged covert signaling codes.
//!
//! A code maps each recorded event to the binary signal a cheating party
//! would have sent. Comparing those predictions with the observed signals
//! gives match counts, which are scored under two hypotheses: the code is
//! followed with probability `p` per event, or the signals are independent
//! Bernoulli(q) draws with `q` uniform over `[0, q_max]`.
//!
//! * [`numerics`]: log-space gamma, beta and incomplete-beta functions.
//! * [`evidence`]: summaries, likelihoods, likelihood ratios, odds, sweeps.
//! * [`bridge`]: hands, leads and horizontal/vertical lead codes.
//! * [`baseball`]: pitch logs, the bang code, quiet-period rates, per-game evidence.
//! * [`sim`]: Monte Carlo calibration checks.

pub mod baseball;
pub mod bridge;
pub mod error;
pub mod evidence;
pub mod numerics;
pub mod sim;

pub use error::{Error, Result};
pub use evidence::{
    CodedModel, EvidenceReport, MatchSummary, PriorParams, RandomModel, Signal, SignalObservation,
};
pub use numerics::LogValue;
