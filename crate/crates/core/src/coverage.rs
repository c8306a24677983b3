//! Analytical SINR coverage of the buyer's typical user.
//!
//! Per band the coverage is πλ_A ∫_0^∞ exp{-(Az + Bz^{α/2})} dz with
//! A = π[λ_I(β-1) + λ_A] and B = Tσ²/p. Across bands the per-band values are
//! summed over purchased bands; that aggregate is a band-summed metric and is
//! reported as is, so it can exceed 1.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::{
    gamma_fn, integrate_semi_infinite, rho, upper_incomplete_gamma, QuadratureSpec,
};
use crate::scenario::{linear_to_db, RadioParams, SharingScenario, SubBand};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoverageMethod {
    ExactIntegral,
    ClosedForm,
    InterferenceLimited,
    MonteCarlo,
}

impl CoverageMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CoverageMethod::ExactIntegral => "exact-integral",
            CoverageMethod::ClosedForm => "closed-form",
            CoverageMethod::InterferenceLimited => "interference-limited",
            CoverageMethod::MonteCarlo => "monte-carlo",
        }
    }
}

impl fmt::Display for CoverageMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Fading model of the interfering links.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GainModel {
    RayleighUnitMean,
    DeterministicUnit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub per_band: Vec<(String, f64)>,
    /// Sum of per-band coverage over purchased bands.
    pub aggregate: f64,
    pub method: CoverageMethod,
    pub threshold_db: f64,
}

fn check_threshold(t_lin: f64) -> Result<()> {
    if !(t_lin > 0.0) || !t_lin.is_finite() {
        return Err(Error::invalid(
            "threshold",
            format!("linear SINR threshold must be positive and finite (got {t_lin})"),
        ));
    }
    Ok(())
}

fn check_intensity(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::invalid(
            name,
            format!("intensity must be non-negative (got {v})"),
        ));
    }
    Ok(())
}

/// β = 1 + ρ(T, α) for Rayleigh-faded interferers.
pub fn beta_rayleigh(t_lin: f64, alpha: f64) -> Result<f64> {
    Ok(1.0 + rho(t_lin, alpha)?)
}

/// β = (2/α)(T/p)^{2/α} E_g[g^{2/α}(Γ(-2/α, Tg/p) - Γ(-2/α))].
///
/// `g` is the received interferer gain including transmit power, g = p·g̃ with
/// g̃ drawn from `gain`, so for either model the result does not depend on `p`.
pub fn beta_general(t_lin: f64, alpha: f64, p: f64, gain: GainModel) -> Result<f64> {
    check_threshold(t_lin)?;
    if !(alpha > 2.0) {
        return Err(Error::invalid(
            "alpha",
            format!("must exceed 2 (got {alpha})"),
        ));
    }
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::invalid(
            "tx power",
            format!("must be positive (got {p})"),
        ));
    }
    let delta = 2.0 / alpha;
    let s = t_lin / p;
    let gamma_neg = gamma_fn(-delta)?;
    let bracket = |g: f64| -> Result<f64> {
        Ok(g.powf(delta) * (upper_incomplete_gamma(-delta, s * g)? - gamma_neg))
    };
    let expectation = match gain {
        GainModel::DeterministicUnit => bracket(p)?,
        GainModel::RayleighUnitMean => {
            let spec = QuadratureSpec::new(1e-300, 1e-11, 4000)?;
            let mut failure = None;
            let value = integrate_semi_infinite(
                |x| {
                    let w = (-x).exp();
                    if w == 0.0 {
                        return 0.0;
                    }
                    match bracket(p * x) {
                        Ok(v) => w * v,
                        Err(e) => {
                            failure.get_or_insert(e);
                            0.0
                        }
                    }
                },
                &spec,
            )?;
            if let Some(e) = failure {
                return Err(e);
            }
            value
        }
    };
    Ok(delta * s.powf(delta) * expectation)
}

/// A = π[λ_I(β-1) + λ_A].
pub fn interference_coefficient(lambda_a: f64, lambda_i: f64, beta: f64) -> f64 {
    PI * (lambda_i * (beta - 1.0) + lambda_a)
}

/// Coverage from a known β by quadrature of the exact integral.
pub(crate) fn exact_with_beta(
    lambda_a: f64,
    lambda_i: f64,
    beta: f64,
    noise_coef: f64,
    alpha: f64,
) -> Result<f64> {
    if lambda_a == 0.0 {
        return Ok(0.0);
    }
    let a = interference_coefficient(lambda_a, lambda_i, beta);
    // z = x / A puts the integrand on a unit scale: ∫ exp(-x - B' x^{α/2}) dx / A
    let scaled_noise = noise_coef / a.powf(0.5 * alpha);
    let half = 0.5 * alpha;
    let integral = integrate_semi_infinite(
        |x| (-(x + scaled_noise * x.powf(half))).exp(),
        &QuadratureSpec::new(1e-13, 1e-11, 2000)?,
    )?;
    Ok((PI * lambda_a / a * integral).clamp(0.0, 1.0))
}

/// Closed-form coverage πλ_A / (A + (α/2) B^{2/α} / Γ(2/α)) from a known β.
pub(crate) fn approx_with_beta(
    lambda_a: f64,
    lambda_i: f64,
    beta: f64,
    noise_coef: f64,
    alpha: f64,
) -> Result<f64> {
    if lambda_a == 0.0 {
        return Ok(0.0);
    }
    let a = interference_coefficient(lambda_a, lambda_i, beta);
    let delta = 2.0 / alpha;
    let noise = if noise_coef == 0.0 {
        0.0
    } else {
        0.5 * alpha * noise_coef.powf(delta) / gamma_fn(delta)?
    };
    Ok((PI * lambda_a / (a + noise)).clamp(0.0, 1.0))
}

/// Single-band coverage by quadrature of the exact integral.
pub fn coverage_exact(
    lambda_a: f64,
    lambda_i: f64,
    t_lin: f64,
    radio: &RadioParams,
) -> Result<f64> {
    check_threshold(t_lin)?;
    check_intensity("lambda_a", lambda_a)?;
    check_intensity("lambda_i", lambda_i)?;
    let beta = beta_rayleigh(t_lin, radio.alpha)?;
    exact_with_beta(
        lambda_a,
        lambda_i,
        beta,
        radio.noise_coefficient(t_lin),
        radio.alpha,
    )
}

/// Single-band closed-form approximation; exact when there is no noise.
pub fn coverage_approx(
    lambda_a: f64,
    lambda_i: f64,
    t_lin: f64,
    radio: &RadioParams,
) -> Result<f64> {
    check_threshold(t_lin)?;
    check_intensity("lambda_a", lambda_a)?;
    check_intensity("lambda_i", lambda_i)?;
    let beta = beta_rayleigh(t_lin, radio.alpha)?;
    approx_with_beta(
        lambda_a,
        lambda_i,
        beta,
        radio.noise_coefficient(t_lin),
        radio.alpha,
    )
}

/// Interference-limited coverage 1/(β + (β-1) ν_k λ_k / λ_0) of one band.
fn interference_limited_band(s: &SharingScenario, band: &SubBand, beta: f64) -> f64 {
    1.0 / (beta + (beta - 1.0) * band.active_tenant_intensity() / s.buyer_intensity)
}

/// Band coverage without checking the purchase flag; the planner evaluates
/// candidate bands the buyer does not hold yet.
pub(crate) fn band_coverage(
    s: &SharingScenario,
    band: &SubBand,
    t_lin: f64,
    method: CoverageMethod,
) -> Result<f64> {
    check_threshold(t_lin)?;
    let lambda_a = s.buyer_intensity;
    let lambda_i = s.buyer_intensity + band.active_tenant_intensity();
    let alpha = s.radio.alpha;
    let beta = beta_rayleigh(t_lin, alpha)?;
    let noise = s.radio.noise_coefficient(t_lin);
    match method {
        CoverageMethod::ExactIntegral => exact_with_beta(lambda_a, lambda_i, beta, noise, alpha),
        CoverageMethod::ClosedForm => approx_with_beta(lambda_a, lambda_i, beta, noise, alpha),
        CoverageMethod::InterferenceLimited => Ok(interference_limited_band(s, band, beta)),
        CoverageMethod::MonteCarlo => Err(Error::invalid(
            "method",
            "Monte Carlo coverage is produced by the montecarlo module",
        )),
    }
}

/// Coverage P_c(L_j) of one purchased band.
pub fn coverage_band(
    s: &SharingScenario,
    band_id: &str,
    t_lin: f64,
    method: CoverageMethod,
) -> Result<f64> {
    let band = s.band(band_id)?;
    if !band.purchased {
        return Err(Error::BandNotPurchased(band_id.to_string()));
    }
    band_coverage(s, band, t_lin, method)
}

/// Per-band coverage and their sum over the purchased bands.
pub fn coverage_total(
    s: &SharingScenario,
    t_lin: f64,
    method: CoverageMethod,
) -> Result<CoverageReport> {
    let per_band = s
        .purchased_bands()
        .map(|b| Ok((b.id.clone(), band_coverage(s, b, t_lin, method)?)))
        .collect::<Result<Vec<_>>>()?;
    if per_band.is_empty() {
        return Err(Error::NoPurchasedBands);
    }
    Ok(CoverageReport {
        aggregate: per_band.iter().map(|(_, v)| v).sum(),
        per_band,
        method,
        threshold_db: linear_to_db(t_lin),
    })
}

/// Noise-free coverage at the scenario's own threshold.
pub fn coverage_interference_limited(s: &SharingScenario) -> Result<CoverageReport> {
    coverage_total(
        s,
        s.radio.threshold_lin(),
        CoverageMethod::InterferenceLimited,
    )
}
