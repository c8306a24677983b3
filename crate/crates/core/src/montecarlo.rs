//! Poisson-network Monte Carlo for the buyer's typical user.
//!
//! Each trial drops buyer and tenant SBSs as homogeneous Poisson processes
//! on a disk around the user at the origin, serves the user from the nearest
//! buyer SBS, draws unit-mean exponential power gains on every link, switches
//! each tenant SBS on with probability ν_k, and records the SINR.
//!
//! The analytical coverage expressions treat every interferer, tenant SBSs
//! included, as lying beyond the serving distance. [`TenantField::BeyondServing`]
//! reproduces that geometry and is the default. [`TenantField::Unrestricted`]
//! lets tenant SBSs sit anywhere in the window, which lowers coverage. Trials draw
//! from independent ChaCha streams keyed by (seed, band, trial index), so
//! estimates are identical for any worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson};
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::scenario::{SharingScenario, SubBand};

/// Which tenant SBSs contribute interference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TenantField {
    /// Only tenant SBSs farther from the user than its serving buyer SBS.
    #[default]
    BeyondServing,
    /// Every active tenant SBS in the window.
    Unrestricted,
}

impl TenantField {
    pub fn as_str(self) -> &'static str {
        match self {
            TenantField::BeyondServing => "beyond_serving",
            TenantField::Unrestricted => "unrestricted",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "beyond_serving" | "beyond-serving" => Some(TenantField::BeyondServing),
            "unrestricted" => Some(TenantField::Unrestricted),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    /// Radius of the simulation window around the typical user.
    pub region_radius_m: f64,
    pub confidence: f64,
    pub tenant_field: TenantField,
}

impl McConfig {
    /// Fewest trials for which a confidence interval is reported as reliable.
    pub const MIN_TRIALS_FOR_CI: u64 = 1000;

    pub fn new(trials: u64, seed: u64, region_radius_m: f64, confidence: f64) -> Result<Self> {
        let c = Self {
            trials,
            seed,
            region_radius_m,
            confidence,
            tenant_field: TenantField::default(),
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid(
                "montecarlo.trials",
                "need at least one trial",
            ));
        }
        if !(self.region_radius_m > 0.0) || !self.region_radius_m.is_finite() {
            return Err(Error::invalid(
                "montecarlo.region_radius_m",
                format!(
                    "window radius must be positive (got {})",
                    self.region_radius_m
                ),
            ));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::invalid(
                "montecarlo.confidence",
                format!("confidence must lie in (0, 1) (got {})", self.confidence),
            ));
        }
        Ok(())
    }

    pub fn has_reliable_ci(&self) -> bool {
        self.trials >= Self::MIN_TRIALS_FOR_CI
    }
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            trials: 100_000,
            seed: 0,
            region_radius_m: 500.0,
            confidence: 0.95,
            tenant_field: TenantField::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
}

impl McEstimate {
    fn new(mean: f64, std_error: f64, trials: u64, confidence: f64) -> Self {
        let z = Normal::standard().inverse_cdf(0.5 * (1.0 + confidence));
        Self {
            mean,
            std_error,
            ci_low: mean - z * std_error,
            ci_high: mean + z * std_error,
            trials,
        }
    }

    /// |mean - value| in units of the standard error.
    pub fn z_score(&self, value: f64) -> f64 {
        (self.mean - value).abs() / self.std_error
    }
}

/// Homogeneous PPP of `intensity` points per m² on a disk of `radius` centred at the origin.
pub fn sample_ppp<R: Rng + ?Sized>(intensity: f64, radius: f64, rng: &mut R) -> Vec<[f64; 2]> {
    let n = poisson_count(intensity * std::f64::consts::PI * radius * radius, rng);
    (0..n)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let theta = std::f64::consts::TAU * rng.random::<f64>();
            [r * theta.cos(), r * theta.sin()]
        })
        .collect()
}

fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let d = Poisson::new(mean).expect("positive finite Poisson mean");
    d.sample(rng) as u64
}

/// Per-band constants for drawing trials.
#[derive(Debug, Clone, Copy)]
struct TrialModel {
    buyer_mean: f64,
    tenant_mean: f64,
    activity: f64,
    radius_sq: f64,
    half_alpha: f64,
    tx_power: f64,
    noise: f64,
    field: TenantField,
}

impl TrialModel {
    fn new(s: &SharingScenario, band: &SubBand, radius: f64, field: TenantField) -> Self {
        let area = std::f64::consts::PI * radius * radius;
        Self {
            buyer_mean: s.buyer_intensity * area,
            tenant_mean: band.tenant_intensity() * area,
            activity: band.tenant_activity(),
            radius_sq: radius * radius,
            half_alpha: 0.5 * s.radio.alpha,
            tx_power: s.radio.tx_power_w(),
            noise: s.radio.noise_w(),
            field,
        }
    }

    fn path_loss(&self, dist_sq: f64) -> f64 {
        if self.half_alpha == 2.0 {
            1.0 / (dist_sq * dist_sq)
        } else {
            dist_sq.powf(-self.half_alpha)
        }
    }

    /// One SINR draw plus the number of empty buyer deployments redrawn.
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, u32) {
        let mut resampled = 0;
        let buyers = loop {
            let n = poisson_count(self.buyer_mean, rng);
            if n > 0 {
                break n;
            }
            resampled += 1;
        };
        // Only distances matter for a user at the origin: r² is uniform on [0, R²].
        let mut nearest = f64::INFINITY;
        let mut nearest_gain = 0.0;
        let mut interference = 0.0;
        for _ in 0..buyers {
            let d2 = self.radius_sq * rng.random::<f64>();
            let g: f64 = Exp1.sample(rng);
            if d2 < nearest {
                if nearest.is_finite() {
                    interference += nearest_gain * self.path_loss(nearest);
                }
                nearest = d2;
                nearest_gain = g;
            } else {
                interference += g * self.path_loss(d2);
            }
        }
        let tenants = poisson_count(self.tenant_mean, rng);
        for _ in 0..tenants {
            let d2 = self.radius_sq * rng.random::<f64>();
            let g: f64 = Exp1.sample(rng);
            let active = rng.random::<f64>() < self.activity;
            let counted = self.field == TenantField::Unrestricted || d2 >= nearest;
            if active && counted {
                interference += g * self.path_loss(d2);
            }
        }
        let signal = nearest_gain * self.path_loss(nearest) * self.tx_power;
        (
            signal / (interference * self.tx_power + self.noise),
            resampled,
        )
    }
}

/// One SINR realization for `band_id` in a window of `radius` metres.
pub fn sinr_trial<R: Rng + ?Sized>(
    s: &SharingScenario,
    band_id: &str,
    radius: f64,
    field: TenantField,
    rng: &mut R,
) -> Result<f64> {
    let band = s.band(band_id)?;
    if !band.purchased {
        return Err(Error::BandNotPurchased(band_id.to_string()));
    }
    Ok(TrialModel::new(s, band, radius, field).draw(rng).0)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Deterministic generator for trial `trial` of band number `band`.
pub fn trial_rng(seed: u64, band: usize, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(band as u64)));
    rng.set_stream(trial);
    rng
}

/// Raw SINR draws for one band, in trial order.
#[derive(Debug, Clone, PartialEq)]
pub struct SinrSamples {
    pub sinr: Vec<f64>,
    /// Empty buyer deployments that were redrawn.
    pub resampled: u64,
    pub confidence: f64,
}

impl SinrSamples {
    pub fn trials(&self) -> u64 {
        self.sinr.len() as u64
    }

    /// Fraction of redraws relative to trials.
    pub fn resample_rate(&self) -> f64 {
        self.resampled as f64 / self.trials() as f64
    }

    /// P(SINR ≥ T) with a binomial standard error.
    pub fn coverage(&self, t_lin: f64) -> McEstimate {
        let n = self.trials();
        let hits = self.sinr.iter().filter(|&&x| x >= t_lin).count();
        let p = hits as f64 / n as f64;
        McEstimate::new(p, (p * (1.0 - p) / n as f64).sqrt(), n, self.confidence)
    }

    /// Mean of ln(1 + SINR) with the sample standard error.
    pub fn rate(&self) -> McEstimate {
        let n = self.trials();
        let values = self.sinr.iter().map(|&x| x.ln_1p());
        let mean = values.clone().sum::<f64>() / n as f64;
        let var = if n > 1 {
            values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        McEstimate::new(mean, (var / n as f64).sqrt(), n, self.confidence)
    }
}

/// Run `mc.trials` independent trials for one purchased band on the current rayon pool.
pub fn simulate_band(s: &SharingScenario, band_id: &str, mc: &McConfig) -> Result<SinrSamples> {
    mc.validate()?;
    let index = s.band_index(band_id)?;
    let band = &s.bands[index];
    if !band.purchased {
        return Err(Error::BandNotPurchased(band_id.to_string()));
    }
    let model = TrialModel::new(s, band, mc.region_radius_m, mc.tenant_field);
    let draws: Vec<(f64, u32)> = (0..mc.trials)
        .into_par_iter()
        .map(|trial| model.draw(&mut trial_rng(mc.seed, index, trial)))
        .collect();
    let resampled = draws.iter().map(|&(_, r)| r as u64).sum();
    Ok(SinrSamples {
        sinr: draws.into_iter().map(|(x, _)| x).collect(),
        resampled,
        confidence: mc.confidence,
    })
}

pub fn estimate_coverage(
    s: &SharingScenario,
    band_id: &str,
    t_lin: f64,
    mc: &McConfig,
) -> Result<McEstimate> {
    Ok(simulate_band(s, band_id, mc)?.coverage(t_lin))
}

pub fn estimate_rate(s: &SharingScenario, band_id: &str, mc: &McConfig) -> Result<McEstimate> {
    Ok(simulate_band(s, band_id, mc)?.rate())
}
