use super::gamma::gamma_fn;
use super::{NumericsError, Result};

const MAX_ITER: usize = 10_000;
const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Upper incomplete gamma Γ(a, x) = ∫_x^∞ t^{a-1} e^{-t} dt for x > 0 and any real `a`.
///
/// Negative `a` with small `x` is reached through
/// Γ(a, x) = (Γ(a+1, x) − x^a e^{-x}) / a; large `x` goes straight to the
/// continued fraction, which avoids the cancellation that recurrence suffers there.
pub fn upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || a.is_nan() {
        return Err(NumericsError::Domain(format!(
            "upper incomplete gamma needs x > 0 (got a = {a}, x = {x})"
        )));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    if x >= 1.0 && x >= a + 1.0 {
        return continued_fraction(a, x);
    }
    if a > 0.0 {
        return Ok(gamma_fn(a)? - lower_series(a, x)?);
    }
    if a == 0.0 {
        return exp_integral_e1(x);
    }
    let up = upper_incomplete_gamma(a + 1.0, x)?;
    Ok((up - x.powf(a) * (-x).exp()) / a)
}

/// γ(a, x) by its power series, a > 0.
fn lower_series(a: f64, x: f64) -> Result<f64> {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            return Ok(sum * (a * x.ln() - x).exp());
        }
    }
    Err(NumericsError::NonConvergence {
        terms: MAX_ITER,
        partial: sum,
    })
}

/// Γ(a, x) by the Legendre continued fraction (modified Lentz).
fn continued_fraction(a: f64, x: f64) -> Result<f64> {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            return Ok((a * x.ln() - x).exp() * h);
        }
    }
    Err(NumericsError::NonConvergence {
        terms: MAX_ITER,
        partial: h,
    })
}

/// E₁(x) = Γ(0, x) for 0 < x < 1 by its convergent series.
fn exp_integral_e1(x: f64) -> Result<f64> {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..MAX_ITER {
        term *= -x / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() < EPS * sum.abs().max(TINY) {
            return Ok(-EULER_GAMMA - x.ln() - sum);
        }
    }
    Err(NumericsError::NonConvergence {
        terms: MAX_ITER,
        partial: sum,
    })
}
