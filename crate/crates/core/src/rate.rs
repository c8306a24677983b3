//! Average rate E[ln(1 + SINR)] of the buyer's typical user.
//!
//! The rate is ∫_0^∞ P_c(e^T - 1) dT with T in nats. Per band the coverage
//! under the integral is the closed-form approximation; the hypergeometric
//! route evaluates ρ through ₂F₁ at argument -T̂ (T̂ = e^T - 1), the
//! coverage-integral route through the quadrature definition of ρ. No rate
//! function takes an SINR threshold.

use std::f64::consts::LN_2;
use std::fmt;

use crate::coverage::{approx_with_beta, band_coverage, CoverageMethod};
use crate::error::{Error, Result};
use crate::numerics::{
    rho_hypergeometric, try_integrate_semi_infinite, QuadratureSpec, SemiInfiniteError,
};
use crate::scenario::{SharingScenario, SubBand};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateMethod {
    CoverageIntegral,
    Hypergeometric,
    MonteCarlo,
}

impl RateMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            RateMethod::CoverageIntegral => "coverage-integral",
            RateMethod::Hypergeometric => "hypergeometric",
            RateMethod::MonteCarlo => "monte-carlo",
        }
    }
}

impl fmt::Display for RateMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    /// Nats per unit bandwidth.
    pub per_band: Vec<(String, f64)>,
    pub total: f64,
    pub method: RateMethod,
}

pub fn nats_to_bits(nats: f64) -> f64 {
    nats / LN_2
}

/// ∫_0^∞ cov(e^T - 1) dT for a coverage curve over linear thresholds.
pub fn rate_from_coverage<F>(mut cov: F, quad: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let value = try_integrate_semi_infinite(
        |t| {
            let t_hat = t.exp_m1();
            if !t_hat.is_finite() {
                return Ok(0.0);
            }
            cov(t_hat)
        },
        quad,
    )
    .map_err(|e| match e {
        SemiInfiniteError::Numerics(e) => Error::Numerics(e),
        SemiInfiniteError::Integrand(e) => e,
    })?;
    Ok(value.max(0.0))
}

pub(crate) fn band_rate(s: &SharingScenario, band: &SubBand, quad: &QuadratureSpec) -> Result<f64> {
    let lambda_0 = s.buyer_intensity;
    let lambda_i = lambda_0 + band.active_tenant_intensity();
    let alpha = s.radio.alpha;
    rate_from_coverage(
        |t_hat| {
            let beta = 1.0 + rho_hypergeometric(t_hat, alpha)?;
            approx_with_beta(
                lambda_0,
                lambda_i,
                beta,
                s.radio.noise_coefficient(t_hat),
                alpha,
            )
        },
        quad,
    )
}

/// Rate on one purchased band through the hypergeometric expansion.
pub fn rate_band(s: &SharingScenario, band_id: &str, quad: &QuadratureSpec) -> Result<f64> {
    let band = s.band(band_id)?;
    if !band.purchased {
        return Err(Error::BandNotPurchased(band_id.to_string()));
    }
    band_rate(s, band, quad)
}

/// Rate on one purchased band by integrating the closed-form band coverage,
/// with ρ taken from its quadrature definition.
pub fn rate_band_via_coverage(
    s: &SharingScenario,
    band_id: &str,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let band = s.band(band_id)?;
    if !band.purchased {
        return Err(Error::BandNotPurchased(band_id.to_string()));
    }
    rate_from_coverage(
        |t| band_coverage(s, band, t, CoverageMethod::ClosedForm),
        quad,
    )
}

/// Per-band rates summed over purchased bands.
pub fn rate_total(s: &SharingScenario, quad: &QuadratureSpec) -> Result<RateReport> {
    rate_total_with(s, quad, RateMethod::Hypergeometric)
}

pub fn rate_total_with(
    s: &SharingScenario,
    quad: &QuadratureSpec,
    method: RateMethod,
) -> Result<RateReport> {
    let per_band = s
        .purchased_bands()
        .map(|b| {
            let r = match method {
                RateMethod::Hypergeometric => band_rate(s, b, quad)?,
                RateMethod::CoverageIntegral => rate_from_coverage(
                    |t| band_coverage(s, b, t, CoverageMethod::ClosedForm),
                    quad,
                )?,
                RateMethod::MonteCarlo => {
                    return Err(Error::invalid(
                        "method",
                        "Monte Carlo rates are produced by the montecarlo module",
                    ))
                }
            };
            Ok((b.id.clone(), r))
        })
        .collect::<Result<Vec<_>>>()?;
    if per_band.is_empty() {
        return Err(Error::NoPurchasedBands);
    }
    Ok(RateReport {
        total: per_band.iter().map(|(_, r)| r).sum(),
        per_band,
        method,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rho;
    use crate::scenario::{intensity_from_count, RadioParams, Tenant};

    fn scenario(buyer: f64, tenant: f64, noise_dbm: f64, bands: usize) -> SharingScenario {
        let bands = (0..bands)
            .map(|i| {
                SubBand::new(
                    format!("L{}", i + 1),
                    1.0,
                    Some(Tenant {
                        intensity: intensity_from_count(tenant, 500.0),
                        activity: 1.0,
                    }),
                )
            })
            .collect();
        let radio = RadioParams {
            alpha: 4.0,
            tx_power_dbm: 10.0,
            max_power_dbm: 10.0,
            noise_dbm,
            sinr_threshold_db: 10.0,
        };
        SharingScenario::new(intensity_from_count(buyer, 500.0), bands, radio, 500.0).unwrap()
    }

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn zero_coverage_zero_rate() {
        assert_eq!(rate_from_coverage(|_| Ok(0.0), &quad()).unwrap(), 0.0);
    }

    #[test]
    fn exponential_coverage_curve() {
        // ∫_0^∞ exp(-(e^T - 1)) dT = e·E₁(1); reference from mpmath
        let v = rate_from_coverage(|t| Ok((-t).exp()), &quad()).unwrap();
        assert!((v - 0.596_347_362_323_194).abs() < 1e-9);
    }

    #[test]
    fn single_operator_no_noise_matches_coverage_curve() {
        let s = scenario(10.0, 0.0, f64::NEG_INFINITY, 1);
        let hyp = rate_band(&s, "L1", &quad()).unwrap();
        let curve = rate_from_coverage(|t| Ok(1.0 / (1.0 + rho(t, 4.0)?)), &quad()).unwrap();
        assert!((hyp - curve).abs() <= 1e-6, "{hyp} vs {curve}");
    }

    #[test]
    fn no_noise_rate_is_intensity_free() {
        let a = rate_band(&scenario(10.0, 0.0, f64::NEG_INFINITY, 1), "L1", &quad()).unwrap();
        let b = rate_band(&scenario(100.0, 0.0, f64::NEG_INFINITY, 1), "L1", &quad()).unwrap();
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn two_routes_agree() {
        for (buyer, tenant, noise) in [
            (10.0, 10.0, -150.0),
            (10.0, 0.0, -90.0),
            (2.0, 30.0, -80.0),
            (50.0, 5.0, -150.0),
        ] {
            let s = scenario(buyer, tenant, noise, 1);
            let h = rate_band(&s, "L1", &quad()).unwrap();
            let c = rate_band_via_coverage(&s, "L1", &quad()).unwrap();
            assert!(
                ((h - c) / c).abs() <= 1e-6,
                "{buyer}/{tenant}/{noise}: {h} vs {c}"
            );
        }
    }

    #[test]
    fn baseline_band_positive() {
        let s = scenario(10.0, 10.0, -150.0, 2);
        let r = rate_band(&s, "L1", &quad()).unwrap();
        assert!(r.is_finite() && r > 0.0);
        assert!(nats_to_bits(r) > r);
    }

    #[test]
    fn totals_are_linear_in_band_count() {
        let one = rate_total(&scenario(10.0, 10.0, -150.0, 1), &quad()).unwrap();
        let two = rate_total(&scenario(10.0, 10.0, -150.0, 2), &quad()).unwrap();
        let six = rate_total(&scenario(10.0, 10.0, -150.0, 6), &quad()).unwrap();
        assert_eq!(one.total, one.per_band[0].1);
        assert!((two.total - 2.0 * one.total).abs() < 1e-12);
        assert!((six.total - 3.0 * two.total).abs() < 1e-12);
        assert_eq!(six.per_band.len(), 6);
    }

    #[test]
    fn errors() {
        let mut s = scenario(10.0, 10.0, -150.0, 2);
        assert!(matches!(
            rate_band(&s, "X", &quad()),
            Err(Error::UnknownBand(_))
        ));
        s.bands[0].purchased = false;
        assert!(matches!(
            rate_band(&s, "L1", &quad()),
            Err(Error::BandNotPurchased(_))
        ));
        s.bands[1].purchased = false;
        assert!(matches!(
            rate_total(&s, &quad()),
            Err(Error::NoPurchasedBands)
        ));
    }

    #[test]
    fn monotone_in_intensities() {
        let q = quad();
        let by_tenant: Vec<f64> = [0.0, 2.0, 10.0, 40.0]
            .iter()
            .map(|&k| rate_band(&scenario(10.0, k, -150.0, 1), "L1", &q).unwrap())
            .collect();
        assert!(by_tenant.windows(2).all(|w| w[1] <= w[0]));
        let by_buyer: Vec<f64> = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0]
            .iter()
            .map(|&k| rate_band(&scenario(k, 10.0, -150.0, 1), "L1", &q).unwrap())
            .collect();
        assert!(by_buyer.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn saturates_with_dense_buyer() {
        let q = quad();
        let r100 = rate_band(&scenario(1000.0, 10.0, -150.0, 1), "L1", &q).unwrap();
        let r1000 = rate_band(&scenario(10_000.0, 10.0, -150.0, 1), "L1", &q).unwrap();
        assert!(((r100 - r1000) / r1000).abs() <= 0.01, "{r100} vs {r1000}");
    }
}
