use super::{ln_one_minus_exp, log_gamma, xlog1my, xlogy, MAX_ITERATIONS, RELATIVE_TOLERANCE};
use crate::error::{Error, Result};

const TINY: f64 = 1e-300;

/// ln B(a, b) = ln Γ(a) + ln Γ(b) − ln Γ(a + b).
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    check_shape(a, b)?;
    Ok(log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?)
}

fn check_shape(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && b > 0.0) || a.is_infinite() || b.is_infinite() {
        return Err(Error::domain(format!(
            "beta shape parameters must be finite and positive, got a={a}, b={b}"
        )));
    }
    Ok(())
}

/// ln I_x(a, b), the log of the regularized incomplete beta function.
///
/// The continued fraction is evaluated on whichever side of the mean it
/// converges fastest, with `I_x(a,b) = 1 − I_{1−x}(b,a)` for the upper side.
/// If the fraction does not settle within [`MAX_ITERATIONS`] the power series
/// is tried before giving up with [`Error::NumericFailure`].
pub fn log_reg_inc_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    check_shape(a, b)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!(
            "incomplete beta requires 0 <= x <= 1, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if x == 1.0 {
        return Ok(0.0);
    }

    let lbeta = log_beta(a, b)?;
    // ln(x^a (1-x)^b / B(a,b))
    let log_front = a * x.ln() + b * (-x).ln_1p() - lbeta;

    let direct = x < (a + 1.0) / (a + b + 2.0);
    let cf = if direct {
        continued_fraction(x, a, b).map(|f| log_front + f.ln() - a.ln())
    } else {
        continued_fraction(1.0 - x, b, a).map(|f| ln_one_minus_exp(log_front + f.ln() - b.ln()))
    };

    match cf {
        Ok(v) => Ok(v.min(0.0)),
        Err(cf_err) => power_series(x, a, b, lbeta)
            .map(|v| v.min(0.0))
            .map_err(|_| cf_err),
    }
}

/// Modified Lentz evaluation of the incomplete-beta continued fraction.
fn continued_fraction(x: f64, a: f64, b: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;

    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    let mut last_delta = f64::INFINITY;

    for m in 1..=MAX_ITERATIONS {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;

        last_delta = (delta - 1.0).abs();
        if last_delta <= 4.0 * f64::EPSILON {
            return Ok(h);
        }
    }

    if last_delta <= RELATIVE_TOLERANCE {
        Ok(h)
    } else {
        Err(Error::NumericFailure(format!(
            "incomplete beta continued fraction did not converge for x={x}, a={a}, b={b} \
             (last relative change {last_delta:e})"
        )))
    }
}

/// I_x(a,b) = x^a / B(a,b) · Σ_k (1−b)_k x^k / (k! (a + k)).
fn power_series(x: f64, a: f64, b: f64, lbeta: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0 / a;
    for k in 1..=MAX_ITERATIONS {
        let kf = k as f64;
        term *= (kf - b) / kf * x;
        let contrib = term / (a + kf);
        sum += contrib;
        if contrib.abs() <= 4.0 * f64::EPSILON * sum.abs() {
            if sum.is_nan() || sum <= 0.0 {
                break;
            }
            return Ok(a * x.ln() - lbeta + sum.ln());
        }
    }
    Err(Error::NumericFailure(format!(
        "incomplete beta power series did not converge for x={x}, a={a}, b={b}"
    )))
}

/// ln ∫₀^{q_max} q^k (1−q)^{n−k} dq for integer counts `0 <= k <= n`.
///
/// Equals ln B(k+1, n−k+1) + ln I_{q_max}(k+1, n−k+1); with `q_max = 1` the
/// incomplete-beta factor is skipped.
pub fn log_trunc_beta_integral(positives: u64, n: u64, q_max: f64) -> Result<f64> {
    check_counts(positives, n)?;
    check_q_max(q_max)?;

    let a = positives as f64 + 1.0;
    let b = (n - positives) as f64 + 1.0;
    let full = log_beta(a, b)?;
    if q_max == 1.0 {
        return Ok(full);
    }
    Ok(full + log_reg_inc_beta(q_max, a, b)?)
}

pub(crate) fn check_counts(positives: u64, n: u64) -> Result<()> {
    if positives > n {
        return Err(Error::domain(format!(
            "positive count {positives} exceeds total {n}"
        )));
    }
    Ok(())
}

pub(crate) fn check_q_max(q_max: f64) -> Result<()> {
    if !(q_max > 0.0 && q_max <= 1.0) {
        return Err(Error::domain(format!("q_max must lie in (0, 1], got {q_max}")));
    }
    Ok(())
}

/// Log of the (unnormalized) integrand q^k (1−q)^{n−k}.
pub(crate) fn log_binomial_kernel(q: f64, positives: u64, n: u64) -> f64 {
    xlogy(positives as f64, q) + xlog1my((n - positives) as f64, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn beta_small_cases() {
        assert_eq!(log_beta(1.0, 1.0).unwrap(), 0.0);
        assert!(close(log_beta(2.0, 1.0).unwrap(), 0.5f64.ln(), 1e-14));
        assert!(close(log_beta(3.0, 4.0).unwrap(), (1.0f64 / 60.0).ln(), 1e-14));
    }

    #[test]
    fn beta_is_symmetric() {
        for (a, b) in [(0.5, 3.0), (46.0, 41.0), (1000.5, 2.25)] {
            assert_eq!(log_beta(a, b).unwrap(), log_beta(b, a).unwrap());
        }
    }

    #[test]
    fn beta_rejects_bad_shapes() {
        assert!(log_beta(0.0, 1.0).is_err());
        assert!(log_beta(1.0, -2.0).is_err());
        assert!(log_beta(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn inc_beta_endpoints() {
        for (a, b) in [(1.0, 1.0), (86.0, 183.0), (0.3, 7.0)] {
            assert_eq!(log_reg_inc_beta(1.0, a, b).unwrap(), 0.0);
            assert_eq!(log_reg_inc_beta(0.0, a, b).unwrap(), f64::NEG_INFINITY);
        }
    }

    #[test]
    fn inc_beta_uniform_is_identity() {
        for x in [1e-9, 0.1, 0.3, 0.5, 0.77, 0.999] {
            assert!(
                close(log_reg_inc_beta(x, 1.0, 1.0).unwrap(), x.ln(), 1e-13),
                "{x}"
            );
        }
    }

    #[test]
    fn inc_beta_closed_forms() {
        // I_x(a,1) = x^a and I_x(1,b) = 1 − (1−x)^b
        for x in [0.05, 0.4, 0.9] {
            for s in [0.5, 2.0, 17.0] {
                let want = s * f64::ln(x);
                assert!(close(log_reg_inc_beta(x, s, 1.0).unwrap(), want, 1e-12));
                let want = (-(1.0 - x).powf(s)).ln_1p();
                let got = log_reg_inc_beta(x, 1.0, s).unwrap();
                assert!(
                    (got - want).abs() < 1e-12 * want.abs().max(1e-300),
                    "{x} {s}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn inc_beta_rejects_out_of_domain() {
        assert!(matches!(log_reg_inc_beta(-0.1, 1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(log_reg_inc_beta(1.1, 1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(log_reg_inc_beta(0.5, 0.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn power_series_agrees_with_fraction() {
        for (x, a, b) in [(0.1, 3.0, 2.0), (0.2, 0.5, 4.0), (0.05, 10.0, 15.0)] {
            let lb = log_beta(a, b).unwrap();
            let s = power_series(x, a, b, lb).unwrap();
            let c = log_reg_inc_beta(x, a, b).unwrap();
            assert!(close(s, c, 1e-12), "{x} {a} {b}: {s} vs {c}");
        }
    }

    #[test]
    fn huge_shapes_fail_loudly() {
        let r = log_reg_inc_beta(0.5, 1e12, 1e12);
        assert!(matches!(r, Err(Error::NumericFailure(_))), "{r:?}");
    }

    #[test]
    fn trunc_integral_trivial_cases() {
        assert!(close(
            log_trunc_beta_integral(0, 0, 0.1).unwrap(),
            0.1f64.ln(),
            1e-13
        ));
        assert_eq!(
            log_trunc_beta_integral(45, 85, 1.0).unwrap(),
            log_beta(46.0, 41.0).unwrap()
        );
        assert_eq!(log_trunc_beta_integral(0, 0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn trunc_integral_rejects_bad_inputs() {
        assert!(log_trunc_beta_integral(5, 4, 0.5).is_err());
        assert!(log_trunc_beta_integral(1, 4, 0.0).is_err());
        assert!(log_trunc_beta_integral(1, 4, 1.5).is_err());
    }
}
