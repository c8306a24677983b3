//! Operators, subbands and radio parameters, plus the JSON scenario file.
//!
//! Intensities are held per square metre and powers in watts. Config files
//! express intensities as an expected SBS count inside a reference disk, and
//! powers in dBm; conversion happens once, on load.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::montecarlo::{McConfig, TenantField};

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0) * 1e-3
}

/// Intensity (per m²) of `count` expected points in a disk of `radius_m`.
pub fn intensity_from_count(count: f64, radius_m: f64) -> f64 {
    count / (PI * radius_m * radius_m)
}

pub fn count_from_intensity(intensity: f64, radius_m: f64) -> f64 {
    intensity * PI * radius_m * radius_m
}

/// Physical-layer constants shared by every SBS and band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams {
    /// Path-loss exponent, must exceed 2.
    pub alpha: f64,
    pub tx_power_dbm: f64,
    pub max_power_dbm: f64,
    /// Noise variance in dBm; `f64::NEG_INFINITY` means no noise.
    pub noise_dbm: f64,
    pub sinr_threshold_db: f64,
}

impl RadioParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 2.0) || !self.alpha.is_finite() {
            return Err(Error::invalid(
                "radio.alpha",
                format!("path-loss exponent must be > 2 (got {})", self.alpha),
            ));
        }
        if !self.tx_power_dbm.is_finite() || !self.max_power_dbm.is_finite() {
            return Err(Error::invalid(
                "radio.tx_power_dbm",
                "powers must be finite",
            ));
        }
        if self.tx_power_dbm > self.max_power_dbm {
            return Err(Error::invalid(
                "radio.tx_power_dbm",
                format!(
                    "transmit power {} dBm exceeds max_power_dbm {} dBm",
                    self.tx_power_dbm, self.max_power_dbm
                ),
            ));
        }
        if self.noise_dbm.is_nan() || self.noise_dbm == f64::INFINITY {
            return Err(Error::invalid(
                "radio.noise_dbm",
                "noise power must be a number",
            ));
        }
        if !self.sinr_threshold_db.is_finite() {
            return Err(Error::invalid(
                "radio.sinr_threshold_db",
                "threshold must be finite",
            ));
        }
        Ok(())
    }

    pub fn tx_power_w(&self) -> f64 {
        dbm_to_watts(self.tx_power_dbm)
    }

    pub fn noise_w(&self) -> f64 {
        dbm_to_watts(self.noise_dbm)
    }

    /// Linear SINR threshold.
    pub fn threshold_lin(&self) -> f64 {
        db_to_linear(self.sinr_threshold_db)
    }

    /// Noise coefficient B = T σ² / p at linear threshold `t_lin`.
    pub fn noise_coefficient(&self, t_lin: f64) -> f64 {
        t_lin * self.noise_w() / self.tx_power_w()
    }
}

/// The single other operator allowed on a band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tenant {
    /// SBSs per m².
    pub intensity: f64,
    /// Probability that a tenant SBS is active on the band.
    pub activity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubBand {
    pub id: String,
    pub cost: f64,
    pub tenant: Option<Tenant>,
    pub purchased: bool,
}

impl SubBand {
    pub fn new(id: impl Into<String>, cost: f64, tenant: Option<Tenant>) -> Self {
        Self {
            id: id.into(),
            cost,
            tenant,
            purchased: true,
        }
    }

    pub fn tenant_intensity(&self) -> f64 {
        self.tenant.map_or(0.0, |t| t.intensity)
    }

    pub fn tenant_activity(&self) -> f64 {
        self.tenant.map_or(0.0, |t| t.activity)
    }

    /// Thinned tenant intensity ν_k λ_k.
    pub fn active_tenant_intensity(&self) -> f64 {
        self.tenant.map_or(0.0, |t| t.activity * t.intensity)
    }

    fn validate(&self) -> Result<()> {
        let field = |name: &str| format!("bands[{}].{name}", self.id);
        if self.id.is_empty() {
            return Err(Error::invalid("bands[].id", "band id must be non-empty"));
        }
        if !(self.cost >= 0.0) || !self.cost.is_finite() {
            return Err(Error::invalid(
                field("cost"),
                format!("cost must be finite and non-negative (got {})", self.cost),
            ));
        }
        if let Some(t) = self.tenant {
            if !(t.intensity >= 0.0) || !t.intensity.is_finite() {
                return Err(Error::invalid(
                    field("tenant_count"),
                    format!(
                        "tenant intensity must be non-negative (got {})",
                        t.intensity
                    ),
                ));
            }
            if !(0.0..=1.0).contains(&t.activity) {
                return Err(Error::invalid(
                    field("tenant_activity"),
                    format!("activity must lie in [0, 1] (got {})", t.activity),
                ));
            }
        }
        Ok(())
    }
}

/// Everything the coverage, rate and planning analyses need.
#[derive(Debug, Clone, PartialEq)]
pub struct SharingScenario {
    /// Buyer SBSs per m².
    pub buyer_intensity: f64,
    pub bands: Vec<SubBand>,
    pub radio: RadioParams,
    /// Radius of the reference disk in which counts are expressed; also the
    /// default Monte Carlo window.
    pub region_radius_m: f64,
}

impl SharingScenario {
    pub fn new(
        buyer_intensity: f64,
        bands: Vec<SubBand>,
        radio: RadioParams,
        region_radius_m: f64,
    ) -> Result<Self> {
        let s = Self {
            buyer_intensity,
            bands,
            radio,
            region_radius_m,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.radio.validate()?;
        if !(self.buyer_intensity > 0.0) || !self.buyer_intensity.is_finite() {
            return Err(Error::invalid(
                "buyer.intensity_count",
                format!(
                    "buyer intensity must be positive (got {})",
                    self.buyer_intensity
                ),
            ));
        }
        if !(self.region_radius_m > 0.0) || !self.region_radius_m.is_finite() {
            return Err(Error::invalid(
                "buyer.region_radius_m",
                format!("radius must be positive (got {})", self.region_radius_m),
            ));
        }
        if self.bands.is_empty() {
            return Err(Error::invalid("bands", "at least one band is required"));
        }
        let mut seen = HashSet::new();
        for band in &self.bands {
            band.validate()?;
            if !seen.insert(band.id.as_str()) {
                return Err(Error::invalid(
                    "bands[].id",
                    format!("duplicate band id `{}`", band.id),
                ));
            }
        }
        Ok(())
    }

    pub fn band(&self, id: &str) -> Result<&SubBand> {
        self.bands
            .iter()
            .find(|b| b.id == id)
            .ok_or_else(|| Error::UnknownBand(id.to_string()))
    }

    pub(crate) fn band_index(&self, id: &str) -> Result<usize> {
        self.bands
            .iter()
            .position(|b| b.id == id)
            .ok_or_else(|| Error::UnknownBand(id.to_string()))
    }

    pub fn purchased_bands(&self) -> impl Iterator<Item = &SubBand> {
        self.bands.iter().filter(|b| b.purchased)
    }

    /// λ_A: the buyer serves its own users on every band it holds.
    pub fn association_intensity(&self, band_id: &str) -> Result<f64> {
        self.band(band_id)?;
        Ok(self.buyer_intensity)
    }

    /// λ_I = λ_0 + ν_k λ_k on the given band.
    pub fn interference_intensity(&self, band_id: &str) -> Result<f64> {
        let band = self.band(band_id)?;
        Ok(self.buyer_intensity + band.active_tenant_intensity())
    }

    pub fn buyer_count(&self) -> f64 {
        count_from_intensity(self.buyer_intensity, self.region_radius_m)
    }
}

/// Coverage slack and minimum rate the buyer must guarantee.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QosTargets {
    pub epsilon: f64,
    /// Nats per unit bandwidth.
    pub min_rate: f64,
}

impl QosTargets {
    pub fn new(epsilon: f64, min_rate: f64) -> Result<Self> {
        let q = Self { epsilon, min_rate };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::invalid(
                "qos.epsilon",
                format!("epsilon must lie in (0, 1) (got {})", self.epsilon),
            ));
        }
        if !(self.min_rate >= 0.0) || !self.min_rate.is_finite() {
            return Err(Error::invalid(
                "qos.min_rate_nats",
                format!("minimum rate must be non-negative (got {})", self.min_rate),
            ));
        }
        Ok(())
    }

    /// Coverage the purchased set must reach, 1 - ε.
    pub fn coverage_target(&self) -> f64 {
        1.0 - self.epsilon
    }
}

/// A parsed and validated scenario file.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedScenario {
    pub scenario: SharingScenario,
    pub qos: Option<QosTargets>,
    pub montecarlo: McConfig,
}

// On-disk layout.

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub radio: RadioSection,
    pub buyer: BuyerSection,
    pub bands: Vec<BandSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qos: Option<QosSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub montecarlo: Option<MonteCarloSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioSection {
    pub alpha: f64,
    pub tx_power_dbm: f64,
    pub max_power_dbm: f64,
    /// `null` for a noise-free link; the key itself is required.
    #[serde(deserialize_with = "Option::deserialize")]
    pub noise_dbm: Option<f64>,
    pub sinr_threshold_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuyerSection {
    pub intensity_count: f64,
    pub region_radius_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandSection {
    pub id: String,
    pub cost: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tenant_count: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tenant_activity: Option<f64>,
    #[serde(default = "default_true")]
    pub purchased: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QosSection {
    pub epsilon: f64,
    pub min_rate_nats: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence: Option<f64>,
    /// Simulation window radius; defaults to the buyer reference radius.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region_radius_m: Option<f64>,
    /// "beyond_serving" (default) or "unrestricted".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tenant_field: Option<String>,
}

impl ScenarioFile {
    pub fn into_loaded(self) -> Result<LoadedScenario> {
        let radius = self.buyer.region_radius_m;
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::invalid(
                "buyer.region_radius_m",
                format!("radius must be positive (got {radius})"),
            ));
        }
        let radio = RadioParams {
            alpha: self.radio.alpha,
            tx_power_dbm: self.radio.tx_power_dbm,
            max_power_dbm: self.radio.max_power_dbm,
            noise_dbm: self.radio.noise_dbm.unwrap_or(f64::NEG_INFINITY),
            sinr_threshold_db: self.radio.sinr_threshold_db,
        };
        let bands = self
            .bands
            .into_iter()
            .map(|b| {
                let tenant = match (b.tenant_count, b.tenant_activity) {
                    (None, None) => None,
                    (count, activity) => Some(Tenant {
                        intensity: intensity_from_count(count.unwrap_or(0.0), radius),
                        activity: activity.unwrap_or(1.0),
                    }),
                };
                SubBand {
                    id: b.id,
                    cost: b.cost,
                    tenant,
                    purchased: b.purchased,
                }
            })
            .collect();
        let scenario = SharingScenario::new(
            intensity_from_count(self.buyer.intensity_count, radius),
            bands,
            radio,
            radius,
        )?;
        let qos = self
            .qos
            .map(|q| QosTargets::new(q.epsilon, q.min_rate_nats))
            .transpose()?;
        let mc = self.montecarlo.unwrap_or(MonteCarloSection {
            trials: None,
            seed: None,
            confidence: None,
            region_radius_m: None,
            tenant_field: None,
        });
        let defaults = McConfig::default();
        let mut montecarlo = McConfig::new(
            mc.trials.unwrap_or(defaults.trials),
            mc.seed.unwrap_or(defaults.seed),
            mc.region_radius_m.unwrap_or(radius),
            mc.confidence.unwrap_or(defaults.confidence),
        )?;
        if let Some(name) = mc.tenant_field {
            montecarlo.tenant_field = TenantField::parse(&name).ok_or_else(|| {
                Error::invalid(
                    "montecarlo.tenant_field",
                    format!("expected \"beyond_serving\" or \"unrestricted\" (got {name:?})"),
                )
            })?;
        }
        Ok(LoadedScenario {
            scenario,
            qos,
            montecarlo,
        })
    }

    pub fn from_loaded(loaded: &LoadedScenario) -> Self {
        let s = &loaded.scenario;
        let radius = s.region_radius_m;
        ScenarioFile {
            radio: RadioSection {
                alpha: s.radio.alpha,
                tx_power_dbm: s.radio.tx_power_dbm,
                max_power_dbm: s.radio.max_power_dbm,
                noise_dbm: Some(s.radio.noise_dbm).filter(|n| n.is_finite()),
                sinr_threshold_db: s.radio.sinr_threshold_db,
            },
            buyer: BuyerSection {
                intensity_count: count_from_intensity(s.buyer_intensity, radius),
                region_radius_m: radius,
            },
            bands: s
                .bands
                .iter()
                .map(|b| BandSection {
                    id: b.id.clone(),
                    cost: b.cost,
                    tenant_count: b.tenant.map(|t| count_from_intensity(t.intensity, radius)),
                    tenant_activity: b.tenant.map(|t| t.activity),
                    purchased: b.purchased,
                })
                .collect(),
            qos: loaded.qos.map(|q| QosSection {
                epsilon: q.epsilon,
                min_rate_nats: q.min_rate,
            }),
            montecarlo: Some(MonteCarloSection {
                trials: Some(loaded.montecarlo.trials),
                seed: Some(loaded.montecarlo.seed),
                confidence: Some(loaded.montecarlo.confidence),
                region_radius_m: Some(loaded.montecarlo.region_radius_m),
                tenant_field: Some(loaded.montecarlo.tenant_field.as_str().to_string()),
            }),
        }
    }
}

/// Parse a scenario from JSON text; `origin` names the source in errors.
pub fn parse_scenario(text: &str, origin: &str) -> Result<LoadedScenario> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|cause| Error::Parse {
        path: origin.to_string(),
        cause,
    })?;
    file.into_loaded()
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<LoadedScenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|cause| Error::Io {
        path: path.display().to_string(),
        cause,
    })?;
    parse_scenario(&text, &path.display().to_string())
}

pub fn to_json(loaded: &LoadedScenario) -> String {
    serde_json::to_string_pretty(&ScenarioFile::from_loaded(loaded))
        .expect("scenario file serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) const BASELINE: &str = r#"{
        "radio": {"alpha": 4.0, "tx_power_dbm": 10.0, "max_power_dbm": 10.0,
                  "noise_dbm": -150.0, "sinr_threshold_db": 10.0},
        "buyer": {"intensity_count": 10.0, "region_radius_m": 500.0},
        "bands": [
            {"id": "L1", "cost": 1.0, "tenant_count": 10.0, "tenant_activity": 1.0},
            {"id": "L2", "cost": 1.0, "tenant_count": 10.0, "tenant_activity": 1.0}
        ],
        "qos": {"epsilon": 0.1, "min_rate_nats": 1.0}
    }"#;

    fn u() -> f64 {
        1.0 / (PI * 500.0 * 500.0)
    }

    #[test]
    fn unit_conversions() {
        assert_eq!(dbm_to_watts(0.0), 1e-3);
        assert_eq!(db_to_linear(10.0), 10.0);
        assert_eq!(db_to_linear(0.0), 1.0);
        assert!((dbm_to_watts(-150.0) - 1e-18).abs() < 1e-30);
        assert_eq!(dbm_to_watts(f64::NEG_INFINITY), 0.0);
    }

    #[test]
    fn loads_baseline() {
        let l = parse_scenario(BASELINE, "baseline").unwrap();
        let s = &l.scenario;
        assert_eq!(s.radio.alpha, 4.0);
        assert_eq!(s.radio.noise_dbm, -150.0);
        assert_eq!(s.radio.threshold_lin(), 10.0);
        assert_eq!(s.region_radius_m, 500.0);
        assert_eq!(s.bands.len(), 2);
        assert!((s.buyer_intensity - 1.2732e-5).abs() < 1e-9);
        assert!(((s.buyer_intensity - 10.0 * u()) / s.buyer_intensity).abs() < 1e-15);
        assert_eq!(
            l.qos,
            Some(QosTargets {
                epsilon: 0.1,
                min_rate: 1.0
            })
        );
        assert_eq!(l.montecarlo.region_radius_m, 500.0);
    }

    #[test]
    fn association_is_buyer_intensity_on_every_band() {
        let s = parse_scenario(BASELINE, "b").unwrap().scenario;
        for b in &s.bands {
            assert_eq!(s.association_intensity(&b.id).unwrap(), s.buyer_intensity);
        }
        assert!(matches!(
            s.association_intensity("nope"),
            Err(Error::UnknownBand(_))
        ));
    }

    #[test]
    fn interference_intensity_cases() {
        let mut s = parse_scenario(BASELINE, "b").unwrap().scenario;
        let li = s.interference_intensity("L1").unwrap();
        assert!(((li - 20.0 * u()) / li).abs() < 1e-14);
        s.bands[0].tenant = Some(Tenant {
            intensity: 10.0 * u(),
            activity: 0.0,
        });
        assert_eq!(s.interference_intensity("L1").unwrap(), s.buyer_intensity);
        s.bands[0].tenant = Some(Tenant {
            intensity: 0.0,
            activity: 1.0,
        });
        assert_eq!(s.interference_intensity("L1").unwrap(), s.buyer_intensity);
        s.bands[0].tenant = None;
        assert_eq!(s.interference_intensity("L1").unwrap(), s.buyer_intensity);
        assert!(s.interference_intensity("L9").is_err());
    }

    fn expect_invalid(text: &str, field: &str) {
        match parse_scenario(text, "t") {
            Err(Error::Validation { field: f, .. }) => assert!(f.contains(field), "{f}"),
            other => panic!("expected validation error on {field}, got {other:?}"),
        }
    }

    #[test]
    fn rejects_alpha_two() {
        expect_invalid(
            &BASELINE.replace("\"alpha\": 4.0", "\"alpha\": 2.0"),
            "alpha",
        );
    }

    #[test]
    fn rejects_activity_above_one() {
        expect_invalid(
            &BASELINE.replacen("\"tenant_activity\": 1.0", "\"tenant_activity\": 1.5", 1),
            "tenant_activity",
        );
    }

    #[test]
    fn rejects_duplicate_ids_and_power() {
        expect_invalid(&BASELINE.replace("\"L2\"", "\"L1\""), "id");
        expect_invalid(
            &BASELINE.replace("\"tx_power_dbm\": 10.0", "\"tx_power_dbm\": 20.0"),
            "tx_power_dbm",
        );
        expect_invalid(
            &BASELINE.replace("\"epsilon\": 0.1", "\"epsilon\": 1.0"),
            "epsilon",
        );
        expect_invalid(
            &BASELINE.replace("\"intensity_count\": 10.0", "\"intensity_count\": 0.0"),
            "intensity_count",
        );
    }

    #[test]
    fn parse_errors_carry_position_and_field() {
        let err = parse_scenario(&BASELINE.replace("\"alpha\": 4.0,", ""), "cfg.json").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("alpha") && msg.contains("line"), "{msg}");
        let err = parse_scenario("{ \"radio\": ", "cfg.json").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = parse_scenario(
            &BASELINE.replace("\"cost\": 1.0,", "\"cost\": 1.0, \"colour\": 3,"),
            "c",
        )
        .unwrap_err();
        assert!(err.to_string().contains("colour"));
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            load_scenario("/nonexistent/x.json"),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn null_noise_means_noise_free() {
        let text = BASELINE.replace("\"noise_dbm\": -150.0", "\"noise_dbm\": null");
        let loaded = parse_scenario(&text, "t").unwrap();
        assert_eq!(loaded.scenario.radio.noise_dbm, f64::NEG_INFINITY);
        assert_eq!(loaded.scenario.radio.noise_w(), 0.0);
        let again = parse_scenario(&to_json(&loaded), "t").unwrap();
        assert_eq!(again.scenario.radio.noise_dbm, f64::NEG_INFINITY);
        let missing = BASELINE.replace("\"noise_dbm\": -150.0,", "");
        let err = parse_scenario(&missing, "t").unwrap_err();
        assert!(err.to_string().contains("noise_dbm"), "{err}");
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        std::fs::write(&path, BASELINE).unwrap();
        let first = load_scenario(&path).unwrap();
        std::fs::write(&path, to_json(&first)).unwrap();
        let second = load_scenario(&path).unwrap();
        assert_close(&first, &second);
    }

    fn assert_close(a: &LoadedScenario, b: &LoadedScenario) {
        let rel = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs());
        assert_eq!(a.scenario.radio, b.scenario.radio);
        assert!(rel(a.scenario.buyer_intensity, b.scenario.buyer_intensity));
        assert_eq!(a.scenario.bands.len(), b.scenario.bands.len());
        for (x, y) in a.scenario.bands.iter().zip(&b.scenario.bands) {
            assert_eq!((&x.id, x.cost, x.purchased), (&y.id, y.cost, y.purchased));
            assert!(rel(x.tenant_intensity(), y.tenant_intensity()));
            assert_eq!(x.tenant_activity(), y.tenant_activity());
        }
        assert_eq!(a.qos, b.qos);
        assert_eq!(a.montecarlo, b.montecarlo);
    }

    proptest! {
        #[test]
        fn serialize_then_load_is_stable(
            alpha in 2.01f64..6.0,
            count in 0.1f64..500.0,
            radius in 10.0f64..5000.0,
            tenants in proptest::collection::vec((0.0f64..100.0, 0.0f64..=1.0, 0.0f64..50.0), 1..6),
            eps in 0.001f64..0.999,
        ) {
            let bands = tenants.iter().enumerate().map(|(i, &(c, a, cost))| SubBand {
                id: format!("B{i}"),
                cost,
                tenant: Some(Tenant { intensity: intensity_from_count(c, radius), activity: a }),
                purchased: i % 2 == 0,
            }).collect();
            let radio = RadioParams { alpha, tx_power_dbm: 5.0, max_power_dbm: 10.0,
                                      noise_dbm: -140.0, sinr_threshold_db: 3.0 };
            let loaded = LoadedScenario {
                scenario: SharingScenario::new(intensity_from_count(count, radius), bands, radio, radius).unwrap(),
                qos: Some(QosTargets::new(eps, 0.5).unwrap()),
                montecarlo: McConfig::new(5000, 9, radius * 4.0, 0.9).unwrap(),
            };
            let back = parse_scenario(&to_json(&loaded), "mem").unwrap();
            assert_close(&loaded, &back);
        }

        #[test]
        fn interference_never_below_association(
            count in 0.1f64..100.0, tenant in 0.0f64..100.0, act in 0.0f64..=1.0,
        ) {
            let radio = RadioParams { alpha: 4.0, tx_power_dbm: 10.0, max_power_dbm: 10.0,
                                      noise_dbm: -150.0, sinr_threshold_db: 0.0 };
            let s = SharingScenario::new(
                intensity_from_count(count, 500.0),
                vec![SubBand::new("A", 1.0, Some(Tenant { intensity: intensity_from_count(tenant, 500.0), activity: act }))],
                radio, 500.0).unwrap();
            prop_assert!(s.interference_intensity("A").unwrap() >= s.association_intensity("A").unwrap());
        }
    }
}
