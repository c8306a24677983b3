use std::path::PathBuf;

use specshare::coverage::coverage_total;
use specshare::montecarlo::simulate_band;
use specshare::numerics::QuadratureSpec;
use specshare::planner::{brute_force_select, greedy_select};
use specshare::rate::{rate_band, rate_band_via_coverage};
use specshare::scenario::load_scenario;
use specshare::{CoverageMethod, McConfig};

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

#[test]
fn baseline_methods_are_consistent() {
    let loaded = load_scenario(config("baseline.json")).unwrap();
    let s = &loaded.scenario;
    let t = s.radio.threshold_lin();
    let exact = coverage_total(s, t, CoverageMethod::ExactIntegral).unwrap();
    let approx = coverage_total(s, t, CoverageMethod::ClosedForm).unwrap();
    let limit = coverage_total(s, t, CoverageMethod::InterferenceLimited).unwrap();
    assert_eq!(exact.per_band.len(), 2);
    assert!(((approx.aggregate - exact.aggregate) / exact.aggregate).abs() < 0.05);
    // noise at -150 dBm is negligible next to interference
    assert!(((limit.aggregate - exact.aggregate) / exact.aggregate).abs() < 1e-4);

    let quad = QuadratureSpec::default();
    let a = rate_band(s, "L1", &quad).unwrap();
    let b = rate_band_via_coverage(s, "L1", &quad).unwrap();
    assert!(((a - b) / a).abs() <= 1e-6, "{a} vs {b}");
}

#[test]
fn baseline_monte_carlo_window_comes_from_file() {
    let loaded = load_scenario(config("baseline.json")).unwrap();
    assert_eq!(loaded.montecarlo.region_radius_m, 5000.0);
    let cfg = McConfig { trials: 2000, ..loaded.montecarlo };
    let samples = simulate_band(&loaded.scenario, "L2", &cfg).unwrap();
    assert_eq!(samples.trials(), 2000);
    assert_eq!(samples.resampled, 0);
}

#[test]
fn six_band_market_plan() {
    let loaded = load_scenario(config("six_band_market.json")).unwrap();
    let qos = loaded.qos.unwrap();
    let greedy = greedy_select(&loaded.scenario, &qos).unwrap();
    let brute = brute_force_select(&loaded.scenario, &qos).unwrap();
    assert!(greedy.feasible);
    assert_eq!(greedy.selected_band_ids, ["L1", "L2", "L3"]);
    assert_eq!((greedy.l_max, greedy.total_cost), (brute.l_max, brute.total_cost));
}
