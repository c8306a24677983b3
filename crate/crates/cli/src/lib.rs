//! The `specshare` command-line tool.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 infeasible purchase plan.

pub mod args;
pub mod output;
pub mod sweep;

use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, Context};
use specshare::coverage::{coverage_band, coverage_total};
use specshare::montecarlo::simulate_band;
use specshare::numerics::QuadratureSpec;
use specshare::planner::{greedy_from_metrics, market_metrics, rank_candidates, PlannerSettings};
use specshare::rate::{nats_to_bits, rate_band, rate_total};
use specshare::scenario::load_scenario;
use specshare::{CoverageMethod, LoadedScenario, McConfig, McEstimate, TenantField};

use args::{AnalyzeArgs, Cli, Command, McArgs, PlanArgs, SimulateArgs, SweepArgs};
use output::{num, Panel, Series};
use sweep::{SweepSettings, SweepVar};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;

/// Expected buyer SBS count in the window below which edge effects are flagged.
const MIN_WINDOW_BUYERS: f64 = 100.0;
/// Share of redrawn empty deployments above which a warning is printed.
const MAX_RESAMPLE_RATE: f64 = 0.01;

#[derive(Debug)]
pub enum Failure {
    Config(anyhow::Error),
    Numeric(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Numeric(_) => EXIT_NUMERIC,
        }
    }

    pub fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Config(e) | Failure::Numeric(e) => e,
        }
    }
}

impl From<specshare::Error> for Failure {
    fn from(e: specshare::Error) -> Self {
        if e.is_config() {
            Failure::Config(e.into())
        } else {
            Failure::Numeric(e.into())
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Config(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Config(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    Infeasible,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Done => 0,
            Outcome::Infeasible => EXIT_INFEASIBLE,
        }
    }
}

/// Parse `SPECSHARE_THREADS`; `None` when unset or empty.
pub fn threads_from_env(value: Option<&str>) -> Result<Option<usize>, Failure> {
    match value.map(str::trim) {
        None | Some("") => Ok(None),
        Some(v) => match v.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Config(anyhow!(
                "SPECSHARE_THREADS must be a positive integer (got {v:?})"
            ))),
        },
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Analyze(a) => analyze(a, out, err),
        Command::Simulate(a) => simulate(a, out, err),
        Command::Plan(a) => plan(a, out, err),
        Command::Sweep(a) => run_sweep_command(a, out, err),
    }
}

fn load(path: &Path) -> Result<LoadedScenario, Failure> {
    Ok(load_scenario(path)?)
}

fn rate_unit(bits: bool) -> &'static str {
    if bits {
        "bits"
    } else {
        "nats"
    }
}

fn in_unit(nats: f64, bits: bool) -> f64 {
    if bits {
        nats_to_bits(nats)
    } else {
        nats
    }
}

fn analyze(a: &AnalyzeArgs, out: &mut dyn Write, _err: &mut dyn Write) -> Result<Outcome, Failure> {
    let loaded = load(&a.scenario)?;
    let s = &loaded.scenario;
    let method = CoverageMethod::from(a.method);
    let quad = QuadratureSpec::default();
    let cov = coverage_total(s, s.radio.threshold_lin(), method)?;
    let rate = rate_total(s, &quad)?;
    let unit = rate_unit(a.bits);

    writeln!(
        out,
        "threshold {} dB, coverage method {}",
        s.radio.sinr_threshold_db, method
    )?;
    writeln!(
        out,
        "{:<16} {:>12} {:>14}",
        "band",
        "coverage",
        format!("rate ({unit})")
    )?;
    let mut rows = Vec::new();
    for ((id, c), (_, r)) in cov.per_band.iter().zip(&rate.per_band) {
        let r = in_unit(*r, a.bits);
        writeln!(out, "{id:<16} {c:>12.6} {r:>14.6}")?;
        rows.push(vec![id.clone(), num(*c), num(r)]);
    }
    let total = in_unit(rate.total, a.bits);
    writeln!(
        out,
        "{:<16} {:>12.6} {:>14.6}",
        "aggregate", cov.aggregate, total
    )?;
    rows.push(vec!["aggregate".into(), num(cov.aggregate), num(total)]);
    if cov.aggregate > 1.0 {
        writeln!(
            out,
            "note: aggregate coverage is a sum over bands, not a probability"
        )?;
    }
    if let Some(path) = &a.csv {
        for r in &mut rows {
            r.extend([
                method.as_str().to_string(),
                num(s.radio.sinr_threshold_db),
                unit.to_string(),
            ]);
        }
        output::write_csv(
            path,
            &[
                "band_id",
                "coverage",
                "rate",
                "method",
                "threshold_db",
                "rate_unit",
            ],
            &rows,
        )?;
    }
    Ok(Outcome::Done)
}

/// Scenario Monte Carlo settings with command-line overrides applied.
fn mc_config(loaded: &LoadedScenario, o: &McArgs) -> Result<McConfig, Failure> {
    let mut cfg = loaded.montecarlo;
    if let Some(t) = o.trials {
        cfg.trials = t;
    }
    if let Some(s) = o.seed {
        cfg.seed = s;
    }
    if let Some(w) = o.window {
        cfg.region_radius_m = w;
    }
    if let Some(f) = o.tenant_field {
        cfg.tenant_field = f.into();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn mc_warnings(
    loaded: &LoadedScenario,
    cfg: &McConfig,
    err: &mut dyn Write,
) -> std::io::Result<()> {
    if !cfg.has_reliable_ci() {
        writeln!(
            err,
            "warning: {} trials is below {}; confidence intervals are too wide to rely on",
            cfg.trials,
            McConfig::MIN_TRIALS_FOR_CI
        )?;
    }
    let r = cfg.region_radius_m;
    let buyers = loaded.scenario.buyer_intensity * std::f64::consts::PI * r * r;
    if buyers < MIN_WINDOW_BUYERS {
        writeln!(
            err,
            "warning: the {r} m window holds about {buyers:.0} buyer SBSs; cutting interference at its edge \
             biases coverage upward (raise montecarlo.region_radius_m or pass --window)"
        )?;
    }
    Ok(())
}

fn estimate_cells(band: &str, metric: &str, e: &McEstimate, seed: u64) -> Vec<String> {
    vec![
        band.to_string(),
        metric.to_string(),
        num(e.mean),
        num(e.std_error),
        num(e.ci_low),
        num(e.ci_high),
        e.trials.to_string(),
        seed.to_string(),
    ]
}

fn scale(e: McEstimate, k: f64) -> McEstimate {
    McEstimate {
        mean: e.mean * k,
        std_error: e.std_error * k,
        ci_low: e.ci_low * k,
        ci_high: e.ci_high * k,
        trials: e.trials,
    }
}

fn simulate(
    a: &SimulateArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<Outcome, Failure> {
    let loaded = load(&a.scenario)?;
    let s = &loaded.scenario;
    let cfg = mc_config(&loaded, &a.mc)?;
    mc_warnings(&loaded, &cfg, err)?;
    let t = s.radio.threshold_lin();
    let quad = QuadratureSpec::default();
    let unit = rate_unit(a.bits);
    let k = in_unit(1.0, a.bits);

    writeln!(
        out,
        "{} trials, seed {}, window {} m, tenant field {}",
        cfg.trials,
        cfg.seed,
        cfg.region_radius_m,
        cfg.tenant_field.as_str()
    )?;
    if cfg.tenant_field == TenantField::Unrestricted {
        writeln!(
            out,
            "note: analytical values assume tenant interference from beyond the serving distance"
        )?;
    }
    writeln!(
        out,
        "{:<12} {:<10} {:>10} {:>10} {:>23} {:>11} {:>6}",
        "band", "metric", "mean", "std_err", "ci", "analytical", "z"
    )?;
    let mut rows = Vec::new();
    for band in s.purchased_bands() {
        let samples = simulate_band(s, &band.id, &cfg)?;
        if samples.resample_rate() > MAX_RESAMPLE_RATE {
            writeln!(
                err,
                "warning: band {}: {:.1}% of trials had no buyer SBS in the window and were redrawn",
                band.id,
                100.0 * samples.resample_rate()
            )?;
        }
        let cov = samples.coverage(t);
        let rate = scale(samples.rate(), k);
        let exact_cov = coverage_band(s, &band.id, t, CoverageMethod::ExactIntegral)?;
        let exact_rate = in_unit(rate_band(s, &band.id, &quad)?, a.bits);
        let rate_metric = format!("rate_{unit}");
        for (metric, e, analytical) in [
            ("coverage", cov, exact_cov),
            (rate_metric.as_str(), rate, exact_rate),
        ] {
            writeln!(
                out,
                "{:<12} {:<10} {:>10.6} {:>10.6} [{:>10.6}, {:>10.6}] {:>11.6} {:>6.2}",
                band.id,
                metric,
                e.mean,
                e.std_error,
                e.ci_low,
                e.ci_high,
                analytical,
                e.z_score(analytical)
            )?;
            rows.push(estimate_cells(&band.id, metric, &e, cfg.seed));
        }
    }
    if let Some(path) = &a.csv {
        output::write_csv(
            path,
            &[
                "band_id",
                "metric",
                "mean",
                "std_error",
                "ci_low",
                "ci_high",
                "trials",
                "seed",
            ],
            &rows,
        )?;
    }
    Ok(Outcome::Done)
}

fn plan(a: &PlanArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<Outcome, Failure> {
    let loaded = load(&a.scenario)?;
    let qos = loaded.qos.ok_or_else(|| {
        Failure::Config(anyhow!("{}: plan needs a qos block", a.scenario.display()))
    })?;
    let settings = PlannerSettings {
        coverage_method: a.method.into(),
        quad: QuadratureSpec::default(),
    };
    let metrics = market_metrics(&loaded.scenario, &settings)?;
    let ranked = rank_candidates(&metrics);
    let plan = greedy_from_metrics(&metrics, &qos)?;

    writeln!(
        out,
        "targets: coverage >= {} (epsilon {}), rate >= {} nats",
        qos.coverage_target(),
        qos.epsilon,
        qos.min_rate
    )?;
    writeln!(
        out,
        "{:>4} {:<12} {:>8} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "rank", "band", "cost", "coverage", "rate", "cum_cost", "cum_cov", "cum_rate"
    )?;
    let mut rows = Vec::new();
    for (i, c) in ranked.iter().enumerate() {
        let m = &c.metrics;
        let selected = i < plan.l_max;
        writeln!(
            out,
            "{:>4} {:<12} {:>8.3} {:>10.6} {:>10.6} {:>10.3} {:>10.6} {:>10.6}{}",
            i + 1,
            m.id,
            m.cost,
            m.coverage,
            m.rate,
            c.cumulative_cost,
            c.cumulative_coverage,
            c.cumulative_rate,
            if selected { "  *" } else { "" }
        )?;
        rows.push(vec![
            (i + 1).to_string(),
            m.id.clone(),
            num(m.cost),
            num(m.coverage),
            num(m.rate),
            num(c.cumulative_cost),
            num(c.cumulative_coverage),
            num(c.cumulative_rate),
            selected.to_string(),
        ]);
    }
    let show = |v: Option<usize>| v.map_or("unmet".to_string(), |n| n.to_string());
    writeln!(
        out,
        "N (rate) = {}, M (coverage) = {}, L_max = {}, cost = {}",
        show(plan.n_rate),
        show(plan.m_coverage),
        plan.l_max,
        plan.total_cost
    )?;
    writeln!(
        out,
        "selected: {} (coverage {:.6}, rate {:.6} nats)",
        plan.selected_band_ids.join(", "),
        plan.achieved_coverage,
        plan.achieved_rate
    )?;
    if let Some(path) = &a.csv {
        output::write_csv(
            path,
            &[
                "rank",
                "band_id",
                "cost",
                "coverage",
                "rate",
                "cumulative_cost",
                "cumulative_coverage",
                "cumulative_rate",
                "selected",
            ],
            &rows,
        )?;
    }
    if plan.feasible {
        Ok(Outcome::Done)
    } else {
        writeln!(
            err,
            "infeasible: targets are not met even with all {} bands; best partial plan shown",
            plan.l_max
        )?;
        Ok(Outcome::Infeasible)
    }
}

fn run_sweep_command(
    a: &SweepArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<Outcome, Failure> {
    let loaded = load(&a.scenario)?;
    let mc = if a.mc {
        let cfg = mc_config(&loaded, &a.mc_args)?;
        mc_warnings(&loaded, &cfg, err)?;
        Some(cfg)
    } else {
        None
    };
    let settings = SweepSettings {
        method: a.method.into(),
        quad: QuadratureSpec::default(),
        mc,
    };
    let rows = sweep::run_sweep(&loaded, &a.sweeps, &settings)?;
    let primary = a.sweeps[0].var;
    // Outer variables other than the first flag get their own columns; band
    // count already has one.
    let extra: Vec<SweepVar> = a.sweeps[1..]
        .iter()
        .map(|s| s.var)
        .filter(|v| *v != SweepVar::BandCount && *v != primary)
        .collect();
    let mut header = vec!["sweep_var", "value"];
    header.extend(extra.iter().map(|v| v.name()));
    header.extend([
        "band_count",
        "band_id",
        "coverage_analytical",
        "coverage_mc",
        "rate_analytical",
        "rate_mc",
        "rate_unit",
    ]);
    let value_of = |row: &sweep::SweepRow, var: SweepVar| {
        row.point
            .iter()
            .find(|(v, _)| *v == var)
            .map_or(f64::NAN, |p| p.1)
    };
    let unit = rate_unit(a.bits);
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut c = vec![primary.name().to_string(), num(value_of(r, primary))];
            c.extend(extra.iter().map(|&v| num(value_of(r, v))));
            c.extend([
                r.band_count.to_string(),
                r.band_id.clone(),
                num(r.coverage),
                num(r.mc.map_or(f64::NAN, |m| m.coverage)),
                num(in_unit(r.rate, a.bits)),
                num(r.mc.map_or(f64::NAN, |m| in_unit(m.rate, a.bits))),
                unit.to_string(),
            ]);
            c
        })
        .collect();

    match &a.csv {
        Some(path) => output::write_csv(path, &header, &cells)?,
        None => out.write_all(&output::csv_bytes(&header, &cells)?)?,
    }
    if let Some(path) = &a.svg {
        let svg = output::svg_document(&sweep_panels(&rows, primary, a.bits));
        std::fs::write(path, svg).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(Outcome::Done)
}

/// Aggregate coverage and rate against the first sweep variable, one series
/// per combination of the remaining ones.
fn sweep_panels(rows: &[sweep::SweepRow], primary: SweepVar, bits: bool) -> Vec<Panel> {
    let mut groups: Vec<(String, Vec<&sweep::SweepRow>)> = Vec::new();
    for r in rows.iter().filter(|r| r.band_id == "aggregate") {
        let label = r
            .point
            .iter()
            .filter(|(v, _)| *v != primary)
            .map(|(v, x)| format!("{}={x}", v.name()))
            .collect::<Vec<_>>()
            .join(", ");
        let label = if label.is_empty() {
            "aggregate".to_string()
        } else {
            label
        };
        match groups.iter_mut().find(|g| g.0 == label) {
            Some(g) => g.1.push(r),
            None => groups.push((label, vec![r])),
        }
    }
    let x_of = |r: &sweep::SweepRow| {
        r.point
            .iter()
            .find(|(v, _)| *v == primary)
            .map_or(f64::NAN, |p| p.1)
    };
    let series = |f: &dyn Fn(&sweep::SweepRow) -> Option<f64>, suffix: &str| -> Vec<Series> {
        groups
            .iter()
            .filter(|g| g.1.iter().all(|r| f(r).is_some()))
            .map(|(label, rs)| Series {
                label: format!("{label}{suffix}"),
                points: rs.iter().map(|r| (x_of(r), f(r).unwrap())).collect(),
            })
            .collect()
    };
    let mut cov = series(&|r| Some(r.coverage), "");
    cov.extend(series(&|r| r.mc.map(|m| m.coverage), " (MC)"));
    let mut rate = series(&|r| Some(in_unit(r.rate, bits)), "");
    rate.extend(series(&|r| r.mc.map(|m| in_unit(m.rate, bits)), " (MC)"));
    vec![
        Panel {
            title: "aggregate coverage".into(),
            x_label: primary.name().into(),
            y_label: "coverage (band sum)".into(),
            series: cov,
        },
        Panel {
            title: "aggregate rate".into(),
            x_label: primary.name().into(),
            y_label: format!("rate ({})", rate_unit(bits)),
            series: rate,
        },
    ]
}
