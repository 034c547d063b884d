//! Experiment description and its validation.
//!
//! An experiment is read from a TOML file. It names either one of the
//! built-in figure presets or an inline scenario, optionally overrides the
//! sweep axes, and fixes the seed, trial count and output format:
//!
//! ```toml
//! preset = "fig10"
//! seed = 7
//! trials = 100
//! format = "csv"
//!
//! [sweep]
//! beta_db = [30.0, 35.0]
//! r_a = [100.0]
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use dwlan_core::params::TimingParams;
use dwlan_core::presets as core_presets;
use dwlan_core::sim::{Design, DesignOptions, TrialConfig};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::presets;

/// Output encoding of the result file.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// What is computed at every sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Study {
    /// Position-averaged downlink outage, multi-user when `K > 1`.
    DlOutage,
    /// Failure probability through one AP and through both.
    FailureProbability,
    /// Expected first-pass failures, closed form and simulated.
    ExpectedFailures,
    /// Closed-form cycle time.
    CycleTime,
    /// Monte-Carlo campaign: cycle-time and reliability statistics.
    Campaign,
}

/// Sweep axes. Axes left out fall back to the preset, then to the
/// evaluation scenario (β = 30 dB, R_A = 100 m, M = 4, K = 9, H = 3).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sweep {
    pub beta_db: Option<Vec<f64>>,
    pub r_a: Option<Vec<f64>>,
    pub m: Option<Vec<i64>>,
    pub k: Option<Vec<i64>>,
    pub h: Option<Vec<i64>>,
}

/// Inline single-series experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Value of the `design` column; defaults to the design name.
    #[serde(default)]
    pub label: Option<String>,
    pub study: Study,
    pub design: Design,
    /// Overrides of [`DesignOptions`] fields.
    #[serde(default)]
    pub options: toml::Table,
    #[serde(default)]
    pub n_stations: Option<i64>,
    #[serde(default)]
    pub n_superframes: Option<i64>,
    /// Noise power σ² in watts.
    #[serde(default)]
    pub noise_power_w: Option<f64>,
    #[serde(default)]
    pub ap_tx_power_w: Option<f64>,
    #[serde(default)]
    pub sta_tx_power_w: Option<f64>,
    /// Overrides of [`TimingParams`] fields, in seconds.
    #[serde(default)]
    pub timing: toml::Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    pub preset: Option<String>,
    pub scenario: Option<Scenario>,
    pub sweep: Sweep,
    pub seed: u64,
    /// Trials per simulated sweep point.
    pub trials: i64,
    pub format: OutputFormat,
    pub output_dir: Option<PathBuf>,
    /// Stem of the result file; defaults to the preset name.
    pub name: Option<String>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            preset: None,
            scenario: None,
            sweep: Sweep::default(),
            seed: 1,
            trials: 100,
            format: OutputFormat::Csv,
            output_dir: None,
            name: None,
        }
    }
}

impl ExperimentSpec {
    pub fn from_preset(name: &str) -> Self {
        Self {
            preset: Some(name.to_owned()),
            ..Self::default()
        }
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Parse {
            origin: origin.to_owned(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn file_stem(&self) -> String {
        self.name
            .clone()
            .or_else(|| self.preset.clone())
            .unwrap_or_else(|| "experiment".to_owned())
    }
}

/// One problem with a config, located by its field path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Axis values a series holds fixed whatever the sweep says.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Pins {
    pub beta_db: Option<f64>,
    pub r_a: Option<f64>,
    pub m: Option<u32>,
    pub k: Option<u32>,
    pub h: Option<u32>,
    pub n_sf: Option<u32>,
}

/// One curve of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub design: Design,
    pub study: Study,
    pub options: DesignOptions,
    pub pins: Pins,
}

/// Fully resolved sweep axes.
#[derive(Debug, Clone, PartialEq)]
pub struct Axes {
    pub beta_db: Vec<f64>,
    pub r_a: Vec<f64>,
    pub m: Vec<u32>,
    pub k: Vec<u32>,
    pub h: Vec<u32>,
}

impl Default for Axes {
    fn default() -> Self {
        Self {
            beta_db: vec![30.0],
            r_a: vec![100.0],
            m: vec![4],
            k: vec![9],
            h: vec![3],
        }
    }
}

/// One sweep point of one series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub beta_db: f64,
    pub r_a: f64,
    pub m: u32,
    pub k: u32,
    pub h: u32,
    pub n_sf: u32,
}

/// Scenario-wide overrides applied to every series.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Base {
    pub n_stations: Option<u32>,
    pub n_superframes: Option<u32>,
    pub noise_power_w: Option<f64>,
    pub ap_tx_power_w: Option<f64>,
    pub sta_tx_power_w: Option<f64>,
    pub timing: serde_json::Map<String, serde_json::Value>,
}

impl Base {
    /// Calibrated scenario at `point` with these overrides.
    pub fn trial_config(&self, series: &Series, point: &Point, seed: u64, trials: u32) -> TrialConfig {
        let mut cfg = TrialConfig::preset(series.design, point.beta_db, point.r_a);
        cfg.seed = seed;
        cfg.n_trials = trials;
        cfg.options = series.options;
        let p = &mut cfg.protocol;
        p.n_groups = point.m;
        p.mu_group_size = point.k;
        p.max_retx_phases = point.h;
        p.n_superframes = point.n_sf;
        if let Some(n) = self.n_stations {
            p.n_stations = n;
        }
        if let Some(s) = self.noise_power_w {
            cfg.env.sigma2 = s;
        }
        if let Some(w) = self.ap_tx_power_w {
            cfg.budget.pap_tx_power_w = w;
            cfg.budget.sap_tx_power_w = w;
        }
        if let Some(w) = self.sta_tx_power_w {
            cfg.budget.sta_tx_power_w = w;
        }
        cfg.timing = overlay(&core_presets::timing_for(&cfg.protocol), &self.timing)
            .expect("timing overrides are checked by validation");
        cfg
    }
}

/// The resolved work of an experiment: each series with its points.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub name: String,
    pub base: Base,
    pub series: Vec<(Series, Vec<Point>)>,
    pub seed: u64,
    pub trials: u32,
}

/// Replaces the fields named in `patch` on a serde image of `base`.
fn overlay<T: Serialize + DeserializeOwned>(
    base: &T,
    patch: &serde_json::Map<String, serde_json::Value>,
) -> std::result::Result<T, String> {
    let mut value = serde_json::to_value(base).map_err(|e| e.to_string())?;
    let obj = value.as_object_mut().ok_or("not a table")?;
    for (key, v) in patch {
        match obj.get_mut(key) {
            Some(slot) => *slot = v.clone(),
            None => return Err(format!("unknown field `{key}`")),
        }
    }
    serde_json::from_value(value).map_err(|e| e.to_string())
}

fn toml_to_json(table: &toml::Table) -> serde_json::Map<String, serde_json::Value> {
    match serde_json::to_value(table) {
        Ok(serde_json::Value::Object(m)) => m,
        _ => serde_json::Map::new(),
    }
}

fn sorted_f64(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn sorted_u32(v: &[i64]) -> Vec<u32> {
    let mut v: Vec<u32> = v.iter().map(|&x| x as u32).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn check_float_axis(out: &mut Vec<Violation>, name: &str, axis: &Option<Vec<f64>>, positive: bool) {
    let Some(values) = axis else { return };
    let path = format!("sweep.{name}");
    if values.is_empty() {
        out.push(Violation::new(path, "sweep axis must not be empty"));
        return;
    }
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            out.push(Violation::new(format!("{path}[{i}]"), format!("must be finite, got {v}")));
        } else if positive && v <= 0.0 {
            out.push(Violation::new(format!("{path}[{i}]"), format!("must be > 0, got {v}")));
        }
    }
}

fn check_int_axis(out: &mut Vec<Violation>, name: &str, axis: &Option<Vec<i64>>, max: Option<(i64, &str)>) {
    let Some(values) = axis else { return };
    let path = format!("sweep.{name}");
    if values.is_empty() {
        out.push(Violation::new(path, "sweep axis must not be empty"));
        return;
    }
    for (i, &v) in values.iter().enumerate() {
        if v < 1 {
            out.push(Violation::new(format!("{path}[{i}]"), format!("must be >= 1, got {v}")));
        } else if v > u32::MAX as i64 {
            out.push(Violation::new(format!("{path}[{i}]"), format!("{v} is out of range")));
        } else if let Some((limit, why)) = max {
            if v > limit {
                out.push(Violation::new(format!("{path}[{i}]"), format!("{v} exceeds {limit}: {why}")));
            }
        }
    }
}

fn check_count(out: &mut Vec<Violation>, path: &str, v: Option<i64>) {
    if let Some(v) = v {
        if !(1..=u32::MAX as i64).contains(&v) {
            out.push(Violation::new(path, format!("must be >= 1, got {v}")));
        }
    }
}

fn check_power(out: &mut Vec<Violation>, path: &str, v: Option<f64>) {
    if let Some(v) = v {
        if !(v.is_finite() && v > 0.0) {
            out.push(Violation::new(path, format!("must be a finite power > 0 W, got {v}")));
        }
    }
}

/// Core parameter names mapped back to the config field that sets them.
fn field_path(core_name: &str) -> String {
    match core_name {
        "n_groups" => "sweep.m".into(),
        "mu_group_size" => "sweep.k".into(),
        "max_retx_phases" => "sweep.h".into(),
        "cell_radius" => "sweep.r_a".into(),
        "snr_threshold" => "sweep.beta_db".into(),
        "sigma2" => "scenario.noise_power_w".into(),
        "n_stations" | "n_superframes" => format!("scenario.{core_name}"),
        "n_trials" => "trials".into(),
        other if TimingParams::zero().fields().iter().any(|(n, _)| *n == other) => format!("scenario.timing.{other}"),
        other => format!("scenario.{other}"),
    }
}

/// Checks every invariant of `spec` and returns all violations found;
/// an empty list means the spec can run.
pub fn validate_config(spec: &ExperimentSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    match (&spec.preset, &spec.scenario) {
        (Some(_), Some(_)) => out.push(Violation::new("preset", "give either a preset or a [scenario] table, not both")),
        (None, None) => out.push(Violation::new("preset", "give a preset name or a [scenario] table")),
        (Some(name), None) if presets::preset(name).is_none() => out.push(Violation::new(
            "preset",
            format!("unknown preset `{name}`; known: {}", presets::PRESET_NAMES.join(", ")),
        )),
        _ => {}
    }
    if spec.trials < 1 || spec.trials > u32::MAX as i64 {
        out.push(Violation::new("trials", format!("must be >= 1, got {}", spec.trials)));
    }

    let sw = &spec.sweep;
    check_float_axis(&mut out, "beta_db", &sw.beta_db, false);
    check_float_axis(&mut out, "r_a", &sw.r_a, true);
    check_int_axis(&mut out, "m", &sw.m, None);
    let proto = core_presets::protocol_config();
    let k_max = proto.max_mu_group_size() as i64;
    let why = format!(
        "a {} MHz channel carries at most {k_max} simultaneous users on its narrowest sub-channels",
        proto.channel_bw_hz / 1e6
    );
    check_int_axis(&mut out, "k", &sw.k, Some((k_max, &why)));
    check_int_axis(&mut out, "h", &sw.h, None);

    if let Some(sc) = &spec.scenario {
        check_count(&mut out, "scenario.n_stations", sc.n_stations);
        check_count(&mut out, "scenario.n_superframes", sc.n_superframes);
        check_power(&mut out, "scenario.noise_power_w", sc.noise_power_w);
        check_power(&mut out, "scenario.ap_tx_power_w", sc.ap_tx_power_w);
        check_power(&mut out, "scenario.sta_tx_power_w", sc.sta_tx_power_w);
        for (key, v) in &sc.timing {
            let path = format!("scenario.timing.{key}");
            match v.as_float().or_else(|| v.as_integer().map(|i| i as f64)) {
                None => out.push(Violation::new(path, "must be a number of seconds")),
                Some(x) if !(x.is_finite() && x >= 0.0) => {
                    out.push(Violation::new(path, format!("must be a finite duration >= 0 s, got {x}")))
                }
                Some(_) => {}
            }
        }
        if let Err(e) = overlay(&core_presets::timing(), &toml_to_json(&sc.timing)) {
            out.push(Violation::new("scenario.timing", e));
        }
        if let Err(e) = overlay(&DesignOptions::default(), &toml_to_json(&sc.options)) {
            out.push(Violation::new("scenario.options", e));
        }
        if sc.study == Study::CycleTime && sc.design == Design::WiRed {
            out.push(Violation::new(
                "scenario.design",
                "wi-red has no closed-form cycle time; use study = \"campaign\"",
            ));
        }
    }

    if out.is_empty() {
        // field-level checks passed; let the model catch anything left
        let plan = resolve(spec);
        for (series, points) in &plan.series {
            for point in points {
                let cfg = plan.base.trial_config(series, point, plan.seed, plan.trials);
                if let Err(e) = cfg.validate() {
                    let path = match &e {
                        dwlan_core::Error::InvalidParameter { name, .. } => field_path(name),
                        _ => "scenario".into(),
                    };
                    let v = Violation::new(path, e.to_string());
                    if !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
        }
    }
    out
}

/// Resolves a spec that passed field-level validation into a [`Plan`].
fn resolve(spec: &ExperimentSpec) -> Plan {
    let (series, defaults, base) = match (&spec.preset, &spec.scenario) {
        (Some(name), _) => {
            let p = presets::preset(name).expect("preset name checked");
            (p.series, p.axes, Base::default())
        }
        (None, Some(sc)) => {
            let mut options = TrialConfig::preset(sc.design, 30.0, 100.0).options;
            options = overlay(&options, &toml_to_json(&sc.options)).expect("options checked");
            let series = Series {
                label: sc.label.clone().unwrap_or_else(|| sc.design.name().to_owned()),
                design: sc.design,
                study: sc.study,
                options,
                pins: Pins::default(),
            };
            let base = Base {
                n_stations: sc.n_stations.map(|v| v as u32),
                n_superframes: sc.n_superframes.map(|v| v as u32),
                noise_power_w: sc.noise_power_w,
                ap_tx_power_w: sc.ap_tx_power_w,
                sta_tx_power_w: sc.sta_tx_power_w,
                timing: toml_to_json(&sc.timing),
            };
            (vec![series], Axes::default(), base)
        }
        (None, None) => unreachable!("checked by validation"),
    };
    let sw = &spec.sweep;
    let axes = Axes {
        beta_db: sorted_f64(sw.beta_db.clone().unwrap_or(defaults.beta_db)),
        r_a: sorted_f64(sw.r_a.clone().unwrap_or(defaults.r_a)),
        m: sw.m.as_deref().map(sorted_u32).unwrap_or(defaults.m),
        k: sw.k.as_deref().map(sorted_u32).unwrap_or(defaults.k),
        h: sw.h.as_deref().map(sorted_u32).unwrap_or(defaults.h),
    };
    let default_n_sf = base.n_superframes.unwrap_or(core_presets::protocol_config().n_superframes);
    let series = series
        .into_iter()
        .map(|s| {
            let pins = s.pins;
            let pick_f = |pin: Option<f64>, axis: &Vec<f64>| pin.map_or_else(|| axis.clone(), |v| vec![v]);
            let pick_u = |pin: Option<u32>, axis: &Vec<u32>| pin.map_or_else(|| axis.clone(), |v| vec![v]);
            let n_sf = pins.n_sf.unwrap_or(default_n_sf);
            let mut points = Vec::new();
            for &beta_db in &pick_f(pins.beta_db, &axes.beta_db) {
                for &r_a in &pick_f(pins.r_a, &axes.r_a) {
                    for &m in &pick_u(pins.m, &axes.m) {
                        for &k in &pick_u(pins.k, &axes.k) {
                            for &h in &pick_u(pins.h, &axes.h) {
                                points.push(Point { beta_db, r_a, m, k, h, n_sf });
                            }
                        }
                    }
                }
            }
            (s, points)
        })
        .collect();
    Plan {
        name: spec.file_stem(),
        base,
        series,
        seed: spec.seed,
        trials: spec.trials as u32,
    }
}

/// Validates `spec` and resolves it into the work to run.
pub fn plan(spec: &ExperimentSpec) -> Result<Plan> {
    let violations = validate_config(spec);
    if violations.is_empty() {
        Ok(resolve(spec))
    } else {
        Err(CliError::Invalid(violations))
    }
}
