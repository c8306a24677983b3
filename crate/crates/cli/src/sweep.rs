//! Parameter sweeps over a loaded scenario.

use rayon::prelude::*;
use specshare::coverage::coverage_total;
use specshare::montecarlo::simulate_band;
use specshare::numerics::QuadratureSpec;
use specshare::rate::rate_total;
use specshare::scenario::intensity_from_count;
use specshare::{CoverageMethod, LoadedScenario, McConfig, SharingScenario, SubBand, Tenant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    SinrThresholdDb,
    BuyerCount,
    TenantCount,
    BandCount,
}

impl SweepVar {
    pub const ALL: [SweepVar; 4] = [
        SweepVar::SinrThresholdDb,
        SweepVar::BuyerCount,
        SweepVar::TenantCount,
        SweepVar::BandCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepVar::SinrThresholdDb => "sinr_threshold_db",
            SweepVar::BuyerCount => "buyer_count",
            SweepVar::TenantCount => "tenant_count",
            SweepVar::BandCount => "band_count",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub var: SweepVar,
    pub values: Vec<f64>,
}

impl SweepSpec {
    /// Parse `VAR=v1,v2,...`; values must be strictly monotone.
    pub fn parse(text: &str) -> Result<Self, String> {
        let (name, list) = text
            .split_once('=')
            .ok_or_else(|| format!("expected VAR=v1,v2,... (got {text:?})"))?;
        let var = SweepVar::from_name(name.trim()).ok_or_else(|| {
            let names: Vec<_> = SweepVar::ALL.iter().map(|v| v.name()).collect();
            format!(
                "unknown sweep variable {name:?}; expected one of {}",
                names.join(", ")
            )
        })?;
        let values = list
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("{}: {v:?} is not a number", var.name()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(format!("{}: values must be finite", var.name()));
        }
        let up = values.windows(2).all(|w| w[1] > w[0]);
        let down = values.windows(2).all(|w| w[1] < w[0]);
        if !(up || down) {
            return Err(format!("{}: values must be strictly monotone", var.name()));
        }
        match var {
            SweepVar::BuyerCount if values.iter().any(|&v| v <= 0.0) => {
                return Err("buyer_count: counts must be positive".into())
            }
            SweepVar::TenantCount if values.iter().any(|&v| v < 0.0) => {
                return Err("tenant_count: counts must be non-negative".into())
            }
            SweepVar::BandCount if values.iter().any(|&v| v < 1.0 || v.fract() != 0.0) => {
                return Err("band_count: values must be positive integers".into())
            }
            _ => {}
        }
        Ok(Self { var, values })
    }
}

/// One combination of sweep values, in flag order.
pub type SweepPoint = Vec<(SweepVar, f64)>;

/// Cartesian product of the sweeps; the first flag varies slowest.
pub fn sweep_points(specs: &[SweepSpec]) -> Vec<SweepPoint> {
    let mut points = vec![Vec::new()];
    for spec in specs {
        points = points
            .into_iter()
            .flat_map(|p| {
                spec.values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push((spec.var, v));
                    q
                })
            })
            .collect();
    }
    points
}

/// Keep the first `k` bands purchased, cloning the last band's terms when the market is smaller.
fn resize_market(bands: &[SubBand], k: usize) -> Vec<SubBand> {
    let template = bands
        .last()
        .expect("validated scenarios have bands")
        .clone();
    (0..k)
        .map(|i| match bands.get(i) {
            Some(b) => SubBand {
                purchased: true,
                ..b.clone()
            },
            None => SubBand {
                id: format!("{}+{}", template.id, i + 1 - bands.len()),
                purchased: true,
                ..template.clone()
            },
        })
        .collect()
}

/// The scenario with every assignment of `point` applied.
pub fn apply_point(
    base: &SharingScenario,
    point: &SweepPoint,
) -> specshare::Result<SharingScenario> {
    let mut s = base.clone();
    // Band count first so that cloned bands pick up tenant overrides.
    if let Some(&(_, k)) = point.iter().find(|(var, _)| *var == SweepVar::BandCount) {
        s.bands = resize_market(&s.bands, k as usize);
    }
    for &(var, v) in point {
        match var {
            SweepVar::SinrThresholdDb => s.radio.sinr_threshold_db = v,
            SweepVar::BuyerCount => s.buyer_intensity = intensity_from_count(v, s.region_radius_m),
            SweepVar::TenantCount => {
                let intensity = intensity_from_count(v, s.region_radius_m);
                for b in &mut s.bands {
                    let activity = b.tenant.map_or(1.0, |t| t.activity);
                    b.tenant = Some(Tenant {
                        intensity,
                        activity,
                    });
                }
            }
            SweepVar::BandCount => {}
        }
    }
    s.validate()?;
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McValue {
    pub coverage: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub point: SweepPoint,
    pub band_count: usize,
    /// Band id, or `aggregate` for the sum over purchased bands.
    pub band_id: String,
    pub coverage: f64,
    pub rate: f64,
    pub mc: Option<McValue>,
}

pub struct SweepSettings {
    pub method: CoverageMethod,
    pub quad: QuadratureSpec,
    pub mc: Option<McConfig>,
}

fn evaluate_point(
    base: &SharingScenario,
    point: &SweepPoint,
    settings: &SweepSettings,
) -> specshare::Result<Vec<SweepRow>> {
    let s = apply_point(base, point)?;
    let t = s.radio.threshold_lin();
    let cov = coverage_total(&s, t, settings.method)?;
    let rate = rate_total(&s, &settings.quad)?;
    let mc = match &settings.mc {
        Some(cfg) => Some(
            s.purchased_bands()
                .map(|b| {
                    let samples = simulate_band(&s, &b.id, cfg)?;
                    Ok(McValue {
                        coverage: samples.coverage(t).mean,
                        rate: samples.rate().mean,
                    })
                })
                .collect::<specshare::Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let band_count = cov.per_band.len();
    let mut rows: Vec<SweepRow> = cov
        .per_band
        .iter()
        .zip(&rate.per_band)
        .enumerate()
        .map(|(i, ((id, c), (_, r)))| SweepRow {
            point: point.clone(),
            band_count,
            band_id: id.clone(),
            coverage: *c,
            rate: *r,
            mc: mc.as_ref().map(|m| m[i]),
        })
        .collect();
    rows.push(SweepRow {
        point: point.clone(),
        band_count,
        band_id: "aggregate".into(),
        coverage: cov.aggregate,
        rate: rate.total,
        mc: mc.as_ref().map(|m| McValue {
            coverage: m.iter().map(|v| v.coverage).sum(),
            rate: m.iter().map(|v| v.rate).sum(),
        }),
    });
    Ok(rows)
}

/// Rows for every sweep point, in sweep order regardless of scheduling.
pub fn run_sweep(
    loaded: &LoadedScenario,
    specs: &[SweepSpec],
    settings: &SweepSettings,
) -> specshare::Result<Vec<SweepRow>> {
    let points = sweep_points(specs);
    let per_point = points
        .par_iter()
        .map(|p| evaluate_point(&loaded.scenario, p, settings))
        .collect::<specshare::Result<Vec<_>>>()?;
    Ok(per_point.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_specs() {
        let s = SweepSpec::parse("sinr_threshold_db=-10,0,10").unwrap();
        assert_eq!(s.var, SweepVar::SinrThresholdDb);
        assert_eq!(s.values, [-10.0, 0.0, 10.0]);
        assert!(SweepSpec::parse("band_count=6,4,2").is_ok());
        assert!(SweepSpec::parse("band_count=2,2").is_err());
        assert!(SweepSpec::parse("band_count=1.5").is_err());
        assert!(SweepSpec::parse("buyer_count=0,1").is_err());
        assert!(SweepSpec::parse("colour=1")
            .unwrap_err()
            .contains("buyer_count"));
        assert!(SweepSpec::parse("tenant_count").is_err());
        assert!(SweepSpec::parse("tenant_count=1,x").is_err());
    }

    #[test]
    fn nested_product_order() {
        let a = SweepSpec::parse("sinr_threshold_db=0,5").unwrap();
        let b = SweepSpec::parse("band_count=2,4,6").unwrap();
        let pts = sweep_points(&[a, b]);
        assert_eq!(pts.len(), 6);
        assert_eq!(
            pts[0],
            [(SweepVar::SinrThresholdDb, 0.0), (SweepVar::BandCount, 2.0)]
        );
        assert_eq!(
            pts[2],
            [(SweepVar::SinrThresholdDb, 0.0), (SweepVar::BandCount, 6.0)]
        );
        assert_eq!(pts[3][0], (SweepVar::SinrThresholdDb, 5.0));
    }

    #[test]
    fn resize_clones_last_band() {
        let bands = vec![SubBand::new("A", 1.0, None), SubBand::new("B", 2.0, None)];
        let three = resize_market(&bands, 3);
        let ids: Vec<_> = three.iter().map(|b| b.id.as_str()).collect();
        assert_eq!(ids, ["A", "B", "B+1"]);
        assert_eq!(three[2].cost, 2.0);
        assert_eq!(resize_market(&bands, 1).len(), 1);
    }
}
