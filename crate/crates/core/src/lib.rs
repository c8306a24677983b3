//! Downlink coverage and rate analysis for a micro-operator that buys
//! licensed subbands shared with one tenant operator per band, with a
//! Poisson-network Monte Carlo cross-check and a greedy purchase planner.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod coverage;
pub mod error;
pub mod montecarlo;
pub mod numerics;
pub mod planner;
pub mod rate;
pub mod scenario;

pub use coverage::{CoverageMethod, CoverageReport, GainModel};
pub use error::{Error, Result};
pub use montecarlo::{McConfig, McEstimate, TenantField};
pub use planner::{BandMetrics, PlannerSettings, PurchasePlan};
pub use rate::{RateMethod, RateReport};
pub use scenario::{LoadedScenario, QosTargets, RadioParams, SharingScenario, SubBand, Tenant};
