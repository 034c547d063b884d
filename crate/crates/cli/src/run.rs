//! Executes a [`Plan`] and writes its rows.

use std::fs;
use std::path::{Path, PathBuf};

use dwlan_core::analytic::{
    cell_edge_ts, cycle_time_md1, cycle_time_md2, cycle_time_md3, cycle_time_md4, expected_failures, p_fail,
};
use dwlan_core::channel::{average_outage, mu_average_outage};
use dwlan_core::sim::{rt_wifi_cycle, run_campaign, Design, TrialConfig};
use log::info;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::spec::{plan, ExperimentSpec, OutputFormat, Plan, Point, Series, Study};

/// Environment variable naming the output directory when neither the
/// command line nor the config gives one.
pub const OUTPUT_DIR_ENV: &str = "DWLAN_OUTPUT_DIR";
const FALLBACK_OUTPUT_DIR: &str = "results";

/// One statistic at one sweep point. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub design: String,
    pub beta_db: f64,
    pub r_a: f64,
    pub m: u32,
    pub k: u32,
    pub h: u32,
    pub n_sf: u32,
    pub metric: String,
    pub value: f64,
    /// Zero for closed-form rows.
    pub trials: u32,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub experiment: String,
    pub seed: u64,
    pub trials: u32,
    pub rows: Vec<Row>,
}

impl Report {
    /// Rows of `design` carrying `metric`, in canonical order.
    pub fn select<'a>(&'a self, design: &'a str, metric: &'a str) -> impl Iterator<Item = &'a Row> + 'a {
        self.rows.iter().filter(move |r| r.design == design && r.metric == metric)
    }
}

fn closed_form(series: &Series, cfg: &TrialConfig) -> Result<Vec<(&'static str, f64)>> {
    let p = &cfg.protocol;
    let t = &cfg.timing;
    let k = p.mu_group_size;
    Ok(match series.study {
        Study::DlOutage => {
            let single = average_outage(cfg.budget.pap_tx_power_w, &cfg.env, cfg.budget.snr_threshold)?;
            vec![("dl_outage", mu_average_outage(single, k)?)]
        }
        Study::FailureProbability => {
            let fm = p_fail(&cfg.env, &cfg.budget, k)?;
            let (one, two) = if k > 1 {
                (fm.multi_user.p_fail_pap, fm.multi_user.p_fail)
            } else {
                (fm.p_fail_pap, fm.p_fail)
            };
            vec![("p_fail_one_ap", one), ("p_fail_two_aps", two)]
        }
        Study::ExpectedFailures => {
            let fm = p_fail(&cfg.env, &cfg.budget, 1)?;
            let p_one = if series.design == Design::RtWifi { fm.p_fail_pap } else { fm.p_fail };
            vec![("expected_failures", expected_failures(p.n_stations as f64, p_one))]
        }
        Study::CycleTime => {
            let fm = || p_fail(&cfg.env, &cfg.budget, k);
            let value = match series.design {
                Design::Md1 => cycle_time_md1(p, t),
                Design::Md2 => cycle_time_md2(p, t, &fm()?),
                Design::Md3 => cycle_time_md3(p, t, &fm()?, series.options.praw),
                Design::Md4 => {
                    let ts = cell_edge_ts(p, t, &cfg.env, &cfg.budget, &cfg.mcs)?;
                    cycle_time_md4(p, t, &fm()?, series.options.with_csi, ts)
                }
                Design::RtWifi => rt_wifi_cycle(cfg),
                Design::WiRed => unreachable!("rejected by validation"),
            };
            vec![("cycle_time_s", value)]
        }
        Study::Campaign => Vec::new(),
    })
}

fn simulated(series: &Series, cfg: &TrialConfig) -> Result<Vec<(&'static str, f64)>> {
    Ok(match series.study {
        Study::ExpectedFailures => {
            let s = run_campaign(cfg)?;
            vec![("sim_mean_failures", s.mean_initial_failures)]
        }
        Study::Campaign => {
            let s = run_campaign(cfg)?;
            let c = &s.cycle_time;
            let r = &s.reliability;
            vec![
                ("cycle_time_mean_s", c.mean),
                ("cycle_time_min_s", c.min),
                ("cycle_time_p10_s", c.p10),
                ("cycle_time_p50_s", c.p50),
                ("cycle_time_p90_s", c.p90),
                ("cycle_time_max_s", c.max),
                ("reliability_mean", r.mean),
                ("reliability_min", r.min),
                ("reliability_p10", r.p10),
                ("reliability_p50", r.p50),
                ("reliability_p90", r.p90),
                ("reliability_pooled", s.pooled_reliability),
                ("mean_initial_failures", s.mean_initial_failures),
            ]
        }
        _ => Vec::new(),
    })
}

fn point_rows(plan: &Plan, series: &Series, point: &Point) -> Result<Vec<Row>> {
    let cfg = plan.base.trial_config(series, point, plan.seed, plan.trials);
    let row = |metric: &str, value: f64, trials: u32| Row {
        design: series.label.clone(),
        beta_db: point.beta_db,
        r_a: point.r_a,
        m: point.m,
        k: point.k,
        h: point.h,
        n_sf: point.n_sf,
        metric: metric.to_owned(),
        value,
        trials,
        seed: plan.seed,
    };
    let mut rows: Vec<Row> = closed_form(series, &cfg)?.into_iter().map(|(m, v)| row(m, v, 0)).collect();
    rows.extend(simulated(series, &cfg)?.into_iter().map(|(m, v)| row(m, v, plan.trials)));
    Ok(rows)
}

/// Runs every series at every point. Rows come out in series order, then
/// ascending sweep axes; campaigns parallelise over trials internally.
pub fn execute(plan: &Plan) -> Result<Report> {
    let mut rows = Vec::new();
    for (series, points) in &plan.series {
        info!("{}: {} point(s)", series.label, points.len());
        for point in points {
            rows.extend(point_rows(plan, series, point)?);
        }
    }
    Ok(Report {
        experiment: plan.name.clone(),
        seed: plan.seed,
        trials: plan.trials,
        rows,
    })
}

/// Renders `report` in `format`.
pub fn render(report: &Report, format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &report.rows {
                w.serialize(row).expect("in-memory CSV writes cannot fail");
            }
            Ok(w.into_inner().expect("in-memory CSV flush cannot fail"))
        }
        OutputFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("rows serialize to JSON");
            out.push(b'\n');
            Ok(out)
        }
    }
}

/// Writes `report` to `dir/<experiment>.<ext>` and returns the path.
pub fn write_report(report: &Report, format: OutputFormat, dir: &Path) -> Result<PathBuf> {
    let path = dir.join(format!("{}.{}", report.experiment, format.extension()));
    let bytes = render(report, format)?;
    fs::create_dir_all(dir)
        .and_then(|()| fs::write(&path, bytes))
        .map_err(|source| CliError::Output {
            path: path.clone(),
            source,
        })?;
    Ok(path)
}

/// Output directory: explicit override, then the config, then
/// [`OUTPUT_DIR_ENV`], then `results`.
pub fn output_dir(spec: &ExperimentSpec, cli_override: Option<&Path>) -> PathBuf {
    cli_override
        .map(Path::to_path_buf)
        .or_else(|| spec.output_dir.clone())
        .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(FALLBACK_OUTPUT_DIR))
}

/// Validates, runs and writes `spec`; returns the result file.
pub fn run_experiment(spec: &ExperimentSpec, cli_output_dir: Option<&Path>) -> Result<PathBuf> {
    let plan = plan(spec)?;
    let report = execute(&plan)?;
    write_report(&report, spec.format, &output_dir(spec, cli_output_dir))
}
