//! Adaptive-quadrature oracle for the truncated Beta integral.
//!
//! Deliberately shares nothing with the continued-fraction path beyond the
//! integrand itself: it integrates `q^k (1−q)^{n−k}` directly, after
//! rescaling by the integrand's peak so the log-space result never
//! underflows. Used to cross-check [`super::log_trunc_beta_integral`].

use super::beta::{check_counts, check_q_max, log_binomial_kernel};
use crate::error::{Error, Result};

/// Largest `n` the oracle accepts.
pub const MAX_ORACLE_N: u64 = 10_000;

const MAX_DEPTH: u32 = 48;
/// Allowed absolute error per unit length of q, relative to the peak-normalized
/// integrand (whose maximum is 1).
const ERROR_DENSITY: f64 = 1e-13;

/// ln ∫₀^{q_max} q^k (1−q)^{n−k} dq by adaptive Simpson quadrature.
///
/// The range is cut into panels at geometrically spaced offsets from the
/// integrand's mode so that even very narrow peaks (n in the thousands) are
/// resolved before the adaptive refinement starts.
pub fn quadrature_oracle(positives: u64, n: u64, q_max: f64) -> Result<f64> {
    check_counts(positives, n)?;
    check_q_max(q_max)?;
    if n > MAX_ORACLE_N {
        return Err(Error::domain(format!(
            "quadrature oracle supports n <= {MAX_ORACLE_N}, got {n}"
        )));
    }

    let nf = n as f64;
    let k = positives as f64;
    let mode = if n == 0 { 0.0 } else { k / nf };
    let peak_at = mode.min(q_max);
    let log_peak = log_binomial_kernel(peak_at, positives, n);

    // width of the peak, floored so that modes at 0 or 1 still get a scale
    let mut sigma = (mode * (1.0 - mode) / (nf + 2.0)).sqrt().max(1.0 / (nf + 2.0));
    if mode > q_max {
        // monotone up to q_max; mass sits within ~1/slope of the endpoint
        let slope = k / q_max - (nf - k) / (1.0 - q_max);
        if slope > 0.0 {
            sigma = sigma.min(1.0 / slope);
        }
    }

    let mut cuts = vec![0.0, q_max, peak_at];
    let mut offset = 0.5 * sigma;
    while offset < 1.0 {
        for c in [peak_at - offset, peak_at + offset] {
            if c > 0.0 && c < q_max {
                cuts.push(c);
            }
        }
        offset *= 2.0;
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let f = |q: f64| (log_binomial_kernel(q, positives, n) - log_peak).exp();

    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        total += adaptive_simpson(&f, lo, hi)?;
    }

    if !total.is_finite() || total <= 0.0 {
        return Err(Error::NumericFailure(format!(
            "quadrature produced a non-positive integral for k={positives}, n={n}, q_max={q_max}"
        )));
    }
    Ok(total.ln() + log_peak)
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<f64> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    refine(f, a, b, fa, fm, fb, whole, 0)
}

#[inline]
fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let diff = left + right - whole;

    if diff.abs() <= 15.0 * ERROR_DENSITY * (b - a) && depth >= 3 {
        return Ok(left + right + diff / 15.0);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::NumericFailure(format!(
            "adaptive quadrature exceeded depth {MAX_DEPTH} on [{a}, {b}]"
        )));
    }
    Ok(refine(f, a, m, fa, flm, fm, left, depth + 1)? + refine(f, m, b, fm, frm, fb, right, depth + 1)?)
}
