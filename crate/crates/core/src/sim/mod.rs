//! Monte-Carlo engine: places stations, plays each design's timeline
//! against the fading channel and aggregates cycle time and reliability.
//!
//! Every trial owns a ChaCha8 stream selected by `(seed, trial_index)`, so
//! campaigns give identical results whatever the thread count.

mod baselines;
mod evaluate;
mod stats;

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{cell_edge_ts, Md4Options, PcfFrameCount};
use crate::channel::{sample_distance, LinkBudget, RadioEnvironment};
use crate::error::{invalid, Result};
use crate::mac::ts::{CsiReportSet, McsTable};
use crate::mac::{
    build_md1_superframe, build_md1_superframes, build_md3_raws, build_md4_cycle, build_md4_cycle_with_ts,
    build_md4_retx_phase, build_pcf_frame, Md1Options, PcfHandler,
};
use crate::params::{ProtocolConfig, TimingParams};
use crate::presets;
use crate::protocol::{assign_groups, ApRole, Position, Station, StationId, Timeline};

pub use baselines::{rt_wifi_cycle, wi_red_attempt_duration};
use evaluate::Evaluator;
pub use stats::{empirical_cdf, percentile, CdfPoint, Distribution, StatsSummary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Design {
    Md1,
    Md2,
    Md3,
    Md4,
    RtWifi,
    WiRed,
}

impl Design {
    pub fn name(self) -> &'static str {
        match self {
            Design::Md1 => "md1",
            Design::Md2 => "md2",
            Design::Md3 => "md3",
            Design::Md4 => "md4",
            Design::RtWifi => "rt-wifi",
            Design::WiRed => "wi-red",
        }
    }
}

/// Design-specific switches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DesignOptions {
    pub with_csi: bool,
    pub bdt: bool,
    pub pcf_handler: PcfHandler,
    /// Append the uplink-only PRAW to MAC Design 3.
    pub praw: bool,
    pub mu_dl: bool,
    pub mu_rts_cts: bool,
    /// RT-WiFi: reserve a second slot per direction for a retry.
    pub in_slot_retx: bool,
    /// Wi-Red: MAC retransmissions per frame after the first attempt.
    pub max_mac_retx: u32,
}

impl Default for DesignOptions {
    fn default() -> Self {
        Self {
            with_csi: true,
            bdt: false,
            pcf_handler: PcfHandler::Primary,
            praw: true,
            mu_dl: false,
            mu_rts_cts: false,
            in_slot_retx: false,
            max_mac_retx: 3,
        }
    }
}

impl DesignOptions {
    pub fn md4(&self) -> Md4Options {
        Md4Options {
            with_csi: self.with_csi,
            mu_dl: self.mu_dl,
            mu_rts_cts: self.mu_rts_cts,
        }
    }
}

/// Everything a campaign needs; `seed` fixes all randomness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub seed: u64,
    pub n_trials: u32,
    pub design: Design,
    pub options: DesignOptions,
    pub protocol: ProtocolConfig,
    pub timing: TimingParams,
    pub env: RadioEnvironment,
    pub budget: LinkBudget,
    pub mcs: McsTable,
}

impl TrialConfig {
    /// Calibrated scenario for `design` at threshold `beta_db` and radius `cell_radius`.
    pub fn preset(design: Design, beta_db: f64, cell_radius: f64) -> Self {
        let protocol = presets::protocol_config();
        let options = DesignOptions {
            pcf_handler: presets::SIM_PCF_HANDLER,
            ..DesignOptions::default()
        };
        Self {
            seed: 1,
            n_trials: 100,
            design,
            options,
            timing: presets::timing_for(&protocol),
            protocol,
            env: presets::radio_environment(cell_radius),
            budget: presets::link_budget(beta_db),
            mcs: presets::mcs_table(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.protocol.validate()?;
        self.timing.validate()?;
        self.env.validate()?;
        self.budget.validate()?;
        if self.n_trials == 0 {
            return Err(invalid("n_trials", "must be >= 1"));
        }
        Ok(())
    }

    /// Stream for one trial.
    pub fn rng(&self, trial_index: u32) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial_index as u64);
        rng
    }
}

/// Outcome of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub index: u32,
    /// seconds
    pub cycle_time: f64,
    /// Both directions delivered within the cycle, per station.
    pub delivered: Vec<bool>,
    /// Transmission attempts handled by the P-AP and the S-AP.
    pub attempts: [u32; 2],
    /// Stations not served by the first pass of the schedule.
    pub initial_failures: u32,
    /// PCF frames actually sent (designs 2 and 3).
    pub pcf_frames: Vec<PcfFrameCount>,
    /// Rounds of each retransmission phase (design 4).
    pub md4_retx_rounds: Vec<u32>,
    /// Scheduling interval used (design 4).
    pub ts: Option<f64>,
}

impl TrialResult {
    pub fn reliability(&self) -> f64 {
        if self.delivered.is_empty() {
            return 1.0;
        }
        self.delivered.iter().filter(|&&d| d).count() as f64 / self.delivered.len() as f64
    }
}

fn place_stations<R: Rng>(cfg: &TrialConfig, rng: &mut R) -> Vec<Station> {
    let groups = assign_groups(cfg.protocol.n_stations, cfg.protocol.n_groups);
    (0..cfg.protocol.n_stations)
        .map(|i| {
            let r = sample_distance(cfg.env.cell_radius, rng);
            let theta = rng.random::<f64>() * TAU;
            let id = StationId(i);
            Station::new(id, Position { r, theta }, groups[&id])
        })
        .collect()
}

struct TrialState<'a> {
    eval: Evaluator<'a>,
    delivered: BTreeSet<StationId>,
    stations: Vec<StationId>,
}

impl TrialState<'_> {
    fn play<R: Rng>(&mut self, timeline: &Timeline, rng: &mut R) {
        let served = self.eval.play(timeline, rng);
        self.delivered.extend(served);
    }

    fn failed(&self) -> Vec<StationId> {
        self.stations
            .iter()
            .copied()
            .filter(|s| !self.delivered.contains(s))
            .collect()
    }
}

/// Runs one trial of a TDMA-based or multi-user design, or a baseline.
pub fn run_trial(cfg: &TrialConfig, trial_index: u32) -> Result<TrialResult> {
    cfg.validate()?;
    let mut rng = cfg.rng(trial_index);
    let stations = place_stations(cfg, &mut rng);
    let distance: Vec<f64> = stations.iter().map(|s| s.position.r).collect();
    match cfg.design {
        Design::RtWifi => return Ok(baselines::rt_wifi_trial(cfg, trial_index, &distance, &mut rng)),
        Design::WiRed => return Ok(baselines::wi_red_trial(cfg, trial_index, &distance, &mut rng)),
        _ => {}
    }
    let groups = stations.iter().map(|s| (s.id, s.group_id)).collect();
    let mut st = TrialState {
        eval: Evaluator {
            env: &cfg.env,
            budget: &cfg.budget,
            distance: &distance,
            attempts: [0, 0],
        },
        delivered: BTreeSet::new(),
        stations: stations.iter().map(|s| s.id).collect(),
    };
    let mut result = TrialResult {
        index: trial_index,
        cycle_time: 0.0,
        delivered: Vec::new(),
        attempts: [0, 0],
        initial_failures: 0,
        pcf_frames: Vec::new(),
        md4_retx_rounds: Vec::new(),
        ts: None,
    };
    let md1 = Md1Options { bdt: cfg.options.bdt };
    let p = &cfg.protocol;
    let t = &cfg.timing;

    let timeline = match cfg.design {
        Design::Md1 => {
            let tl = build_md1_superframes(p, t, &groups, md1)?;
            st.play(&tl, &mut rng);
            result.initial_failures = st.failed().len() as u32;
            tl
        }
        Design::Md2 | Design::Md3 => {
            let mut tl = if cfg.design == Design::Md2 {
                build_md1_superframe(p, t, &groups, md1)?
            } else {
                build_md3_raws(p, t, &groups, cfg.options.praw)?.timeline
            };
            st.play(&tl, &mut rng);
            result.initial_failures = st.failed().len() as u32;
            let mut next_x = tl.events().iter().filter_map(|e| e.exchange).max().map_or(0, |x| x + 1);
            let mut end = tl.end();
            let mut last_ap: Option<ApRole> = None;
            'phases: for _ in 0..p.max_retx_phases {
                for &ap in cfg.options.pcf_handler.aps() {
                    let failed = st.failed();
                    if !result.pcf_frames.is_empty() && failed.is_empty() {
                        break 'phases;
                    }
                    if last_ap.is_some_and(|prev| prev != ap) {
                        end += t.hifs;
                    }
                    let frame = build_pcf_frame(&failed, t, ap, end, next_x);
                    next_x += failed.len() as u32;
                    st.play(&frame, &mut rng);
                    result.pcf_frames.push(PcfFrameCount {
                        ap,
                        polled: failed.len() as u32,
                    });
                    end = frame.end();
                    last_ap = Some(ap);
                    tl.extend(frame);
                }
            }
            tl
        }
        Design::Md4 => {
            let opts = cfg.options.md4();
            let cycle = if opts.with_csi {
                let reports: CsiReportSet = st
                    .stations
                    .iter()
                    .map(|&s| (s, cfg.env.mean_snr(distance[s.0 as usize], cfg.budget.sta_tx_power_w)))
                    .collect();
                build_md4_cycle(p, t, &reports, &cfg.mcs, opts)?
            } else {
                let ts = cell_edge_ts(p, t, &cfg.env, &cfg.budget, &cfg.mcs)?;
                build_md4_cycle_with_ts(p, t, &st.stations, ts, opts)?
            };
            let mut tl = cycle.timeline;
            st.play(&tl, &mut rng);
            result.initial_failures = st.failed().len() as u32;
            result.ts = Some(cycle.ts);
            let mut next_x = cycle.next_exchange;
            for _ in 0..p.max_retx_phases {
                let failed = st.failed();
                if failed.is_empty() {
                    break;
                }
                let phase = build_md4_retx_phase(p, t, &failed, cycle.ts, opts, tl.end() + t.hifs, next_x)?;
                next_x += 1;
                st.play(&phase, &mut rng);
                result.md4_retx_rounds.push(failed.len().div_ceil(p.mu_group_size as usize) as u32);
                tl.extend(phase);
            }
            tl
        }
        Design::RtWifi | Design::WiRed => unreachable!("handled above"),
    };
    result.cycle_time = timeline.end();
    result.attempts = st.eval.attempts;
    result.delivered = st.stations.iter().map(|s| st.delivered.contains(s)).collect();
    Ok(result)
}

/// All trials of a campaign, in trial order.
pub fn run_trials(cfg: &TrialConfig) -> Result<Vec<TrialResult>> {
    cfg.validate()?;
    (0..cfg.n_trials).into_par_iter().map(|i| run_trial(cfg, i)).collect()
}

pub fn run_campaign(cfg: &TrialConfig) -> Result<StatsSummary> {
    Ok(StatsSummary::from_trials(&run_trials(cfg)?))
}

/// Single-AP TDMA baseline.
pub fn run_rt_wifi(cfg: &TrialConfig) -> Result<StatsSummary> {
    run_campaign(&TrialConfig {
        design: Design::RtWifi,
        ..cfg.clone()
    })
}

/// Dual-radio duplication baseline over DCF.
pub fn run_wi_red(cfg: &TrialConfig) -> Result<StatsSummary> {
    run_campaign(&TrialConfig {
        design: Design::WiRed,
        ..cfg.clone()
    })
}
