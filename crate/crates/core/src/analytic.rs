//! Closed-form failure and cycle-time calculators for the four MAC designs.
//!
//! Failure counts (`Θ`) are real-valued expectations here. The `*_realized`
//! and `*_span` variants take the integer counts a simulated cycle actually
//! produced and give the exact length of the schedule the builders emit.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::channel::{average_outage, mu_average_outage, LinkBudget, RadioEnvironment};
use crate::error::{invalid, Result};
use crate::mac::ts::{compute_ts_fixed, CsiReportSet, McsTable};
use crate::params::{ProtocolConfig, TimingParams};
use crate::protocol::{ApRole, StationId};

/// Single timeslot `T_Data + T_SIFS + T_ACK + T_guard`.
pub fn slot_duration(cfg: &ProtocolConfig, timing: &TimingParams) -> Result<f64> {
    if !(cfg.data_rate_bps > 0.0 && cfg.base_rate_bps > 0.0) {
        return Err(invalid("data_rate_bps", "rates must be > 0"));
    }
    Ok(cfg.data_airtime() + timing.sifs + cfg.ack_airtime() + timing.guard)
}

/// Per-AP and combined failure probabilities of one exchange.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FailureModel {
    /// `P^o_{P-AP}`
    pub p_fail_pap: f64,
    /// `P^o_{S-AP}`
    pub p_fail_sap: f64,
    /// `P_fail = P^o_{P-AP} · P^o_{S-AP}`
    pub p_fail: f64,
    /// The same quantities for a `K`-user multi-user exchange.
    pub multi_user: MuFailure,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuFailure {
    pub k: u32,
    pub p_fail_pap: f64,
    pub p_fail_sap: f64,
    pub p_fail: f64,
}

fn union_clamped(dl: f64, ul: f64, what: &str) -> f64 {
    let sum = dl + ul;
    if sum > 1.0 {
        warn!("{what}: DL + UL outage {sum:.4} exceeds 1, clamped");
        1.0
    } else {
        sum
    }
}

impl FailureModel {
    /// Builds the model from average outages of each link.
    pub fn from_outages(dl_pap: f64, dl_sap: f64, ul: f64, k: u32) -> Result<Self> {
        let pap = union_clamped(dl_pap, ul, "P-AP");
        let sap = union_clamped(dl_sap, ul, "S-AP");
        let ul_mu = mu_average_outage(ul, k)?;
        let pap_mu = union_clamped(mu_average_outage(dl_pap, k)?, ul_mu, "P-AP multi-user");
        let sap_mu = union_clamped(mu_average_outage(dl_sap, k)?, ul_mu, "S-AP multi-user");
        Ok(Self {
            p_fail_pap: pap,
            p_fail_sap: sap,
            p_fail: pap * sap,
            multi_user: MuFailure {
                k,
                p_fail_pap: pap_mu,
                p_fail_sap: sap_mu,
                p_fail: pap_mu * sap_mu,
            },
        })
    }

    /// Failure-free links.
    pub fn perfect(k: u32) -> Self {
        Self::from_outages(0.0, 0.0, 0.0, k.max(1)).expect("zero outages are valid")
    }

    /// `Θ_r = N · P_fail`
    pub fn theta_r(&self, n: u32) -> f64 {
        expected_failures(n as f64, self.p_fail)
    }

    /// `Θ_{p,j}` for `j = 2..=h`.
    pub fn theta_p(&self, n: u32, h: u32) -> Vec<f64> {
        residual_chain(self.theta_r(n), self.p_fail, h)
    }
}

/// Position-averaged failure model for the given geometry and powers.
pub fn p_fail(env: &RadioEnvironment, budget: &LinkBudget, k: u32) -> Result<FailureModel> {
    budget.validate()?;
    let beta = budget.snr_threshold;
    let dl_pap = average_outage(budget.pap_tx_power_w, env, beta)?;
    let dl_sap = average_outage(budget.sap_tx_power_w, env, beta)?;
    let ul = average_outage(budget.sta_tx_power_w, env, beta)?;
    FailureModel::from_outages(dl_pap, dl_sap, ul, k.max(1))
}

/// Binomial mean `n · p` of failures among `n` independent exchanges.
pub fn expected_failures(n: f64, p_fail: f64) -> f64 {
    n * p_fail
}

/// `Θ_p = Θ · P_fail`, the failures left after one more PCF frame.
pub fn residual_failures(theta: f64, p_fail: f64) -> f64 {
    theta * p_fail
}

/// Iterates [`residual_failures`] to produce `Θ_{p,2} … Θ_{p,h}`.
fn residual_chain(theta_r: f64, p: f64, h: u32) -> Vec<f64> {
    let mut theta = theta_r;
    (2..=h)
        .map(|_| {
            theta = residual_failures(theta, p);
            theta
        })
        .collect()
}

/// Cycle time of MAC Design 1; independent of failures.
pub fn cycle_time_md1(cfg: &ProtocolConfig, timing: &TimingParams) -> f64 {
    let slot = cfg.data_airtime() + timing.sifs + cfg.ack_airtime() + timing.guard;
    let m = cfg.n_groups as f64;
    let n = cfg.n_stations as f64;
    let n_sf = cfg.n_superframes as f64;
    (m + 1.0) * (timing.beacon + 2.0 * n * slot / m) * n_sf + n_sf * m * timing.hifs
}

fn md1_single_superframe(cfg: &ProtocolConfig, timing: &TimingParams) -> f64 {
    cycle_time_md1(
        &ProtocolConfig {
            n_superframes: 1,
            ..*cfg
        },
        timing,
    )
}

/// Length of a PCF frame polling `theta` stations. With no polls only the
/// beacon and CF-End remain.
pub fn pcf_frame_duration(theta: f64, timing: &TimingParams) -> f64 {
    timing.beacon
        + theta * (timing.cf_poll + timing.sifs + timing.cf_ack)
        + (theta - 1.0).max(0.0) * timing.pifs
        + timing.cf_end
}

/// PCF retransmission terms shared by designs 2 and 3, with later frames
/// weighted by their expected failure count.
fn pcf_retx_terms(cfg: &ProtocolConfig, timing: &TimingParams, failure: &FailureModel) -> f64 {
    let theta_r = failure.theta_r(cfg.n_stations);
    pcf_frame_duration(theta_r, timing)
        + failure
            .theta_p(cfg.n_stations, cfg.max_retx_phases)
            .into_iter()
            .map(|t| t * pcf_frame_duration(t, timing))
            .sum::<f64>()
}

/// Cycle time of MAC Design 2.
pub fn cycle_time_md2(cfg: &ProtocolConfig, timing: &TimingParams, failure: &FailureModel) -> f64 {
    md1_single_superframe(cfg, timing) + pcf_retx_terms(cfg, timing, failure)
}

/// A PCF frame that was actually transmitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcfFrameCount {
    pub ap: ApRole,
    pub polled: u32,
}

/// Back-to-back PCF frames, with a HIFS gap wherever the polling AP changes.
pub fn pcf_frames_span(frames: &[PcfFrameCount], timing: &TimingParams) -> f64 {
    let switches = frames.windows(2).filter(|w| w[0].ap != w[1].ap).count();
    frames
        .iter()
        .map(|f| pcf_frame_duration(f.polled as f64, timing))
        .sum::<f64>()
        + switches as f64 * timing.hifs
}

/// MAC Design 2 cycle with the realized PCF frames in place of expectations.
pub fn cycle_time_md2_realized(cfg: &ProtocolConfig, timing: &TimingParams, frames: &[PcfFrameCount]) -> f64 {
    md1_single_superframe(cfg, timing) + pcf_frames_span(frames, timing)
}

/// `T_RAW = T_B + 2 T_slot N/M`
pub fn raw_duration(cfg: &ProtocolConfig, timing: &TimingParams) -> f64 {
    let slot = cfg.data_airtime() + timing.sifs + cfg.ack_airtime() + timing.guard;
    timing.beacon + 2.0 * slot * cfg.n_stations as f64 / cfg.n_groups as f64
}

/// `T_PRAW`, a fraction of the `M+1` RAW superframe.
pub fn praw_duration(cfg: &ProtocolConfig, timing: &TimingParams) -> f64 {
    cfg.praw_fraction * (cfg.n_groups as f64 + 1.0) * raw_duration(cfg, timing)
}

fn md3_head(cfg: &ProtocolConfig, timing: &TimingParams, with_praw: bool) -> f64 {
    let praw = if with_praw { praw_duration(cfg, timing) } else { 0.0 };
    (cfg.n_groups as f64 + 1.0) * raw_duration(cfg, timing) + praw
}

/// Cycle time of MAC Design 3.
pub fn cycle_time_md3(cfg: &ProtocolConfig, timing: &TimingParams, failure: &FailureModel, with_praw: bool) -> f64 {
    md3_head(cfg, timing, with_praw) + pcf_retx_terms(cfg, timing, failure)
}

pub fn cycle_time_md3_realized(
    cfg: &ProtocolConfig,
    timing: &TimingParams,
    with_praw: bool,
    frames: &[PcfFrameCount],
) -> f64 {
    md3_head(cfg, timing, with_praw) + pcf_frames_span(frames, timing)
}

/// `T_MU-UL = T_TF-D + 2 T_SIFS + T_s + T_B-ACK`
pub fn mu_uplink_duration(timing: &TimingParams, ts: f64) -> f64 {
    timing.trigger_data + 2.0 * timing.sifs + ts + timing.block_ack
}

/// `T_CSI = N'(T_TF-S + T_CSI-R) + (2N' − 1) T_SIFS`; zero for no rounds.
pub fn csi_duration(rounds: u32, timing: &TimingParams) -> f64 {
    if rounds == 0 {
        return 0.0;
    }
    let n = rounds as f64;
    n * (timing.trigger_sounding + timing.csi_report) + (2.0 * n - 1.0) * timing.sifs
}

/// `C₄'`, the MAC Design 4 cycle without retransmissions.
pub fn cycle_time_md4_no_retx(rounds: u32, timing: &TimingParams, ts: f64, with_csi: bool) -> f64 {
    let n = rounds as f64;
    let csi = if with_csi { csi_duration(rounds, timing) } else { 0.0 };
    timing.beacon
        + csi
        + (n + 1.0) * (ts + mu_uplink_duration(timing, ts))
        + 2.0 * (n + 2.0) * timing.sifs
        + 2.0 * (n - 1.0).max(0.0) * timing.pifs
}

/// `T_Ret`: one retransmission phase covering `⌈Θ/K⌉` rounds, no CSI.
pub fn md4_retx_phase_duration(theta: f64, k: u32, timing: &TimingParams, ts: f64) -> f64 {
    let rounds = (theta / k.max(1) as f64 - 1e-12).ceil().max(0.0) as u32;
    cycle_time_md4_no_retx(rounds, timing, ts, false)
}

/// Cycle time of MAC Design 4 with up to `H` retransmission phases.
///
/// `Θ_r⁴ = N'·P_fail` uses the single-user failure probability, and the
/// later phases shrink by the multi-user `P_fail,4`.
pub fn cycle_time_md4(
    cfg: &ProtocolConfig,
    timing: &TimingParams,
    failure: &FailureModel,
    with_csi: bool,
    ts: f64,
) -> f64 {
    let k = cfg.mu_group_size.max(1);
    let rounds = cfg.mu_rounds();
    let theta_r4 = expected_failures(rounds as f64, failure.p_fail);
    let base = cycle_time_md4_no_retx(rounds, timing, ts, with_csi);
    let later: f64 = residual_chain(theta_r4, failure.multi_user.p_fail, cfg.max_retx_phases)
        .into_iter()
        .map(|t| t * md4_retx_phase_duration(t, k, timing, ts))
        .sum();
    base + timing.hifs + md4_retx_phase_duration(theta_r4, k, timing, ts) + later
}

/// Options that change the shape of a MAC Design 4 round.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Md4Options {
    pub with_csi: bool,
    /// Multi-user downlink per round instead of one broadcast.
    pub mu_dl: bool,
    /// MU-RTS/CTS protection ahead of each trigger.
    pub mu_rts_cts: bool,
}

/// One multi-user round: optional protection and MU-DL, trigger, uplinks,
/// block ACK.
pub fn md4_round_duration(timing: &TimingParams, ts: f64, opts: Md4Options) -> f64 {
    let protect = if opts.mu_rts_cts {
        timing.mu_rts + timing.sifs + timing.cts + timing.sifs
    } else {
        0.0
    };
    let dl = if opts.mu_dl { ts + timing.sifs } else { 0.0 };
    protect + dl + timing.trigger_data + timing.sifs + ts + timing.sifs + timing.block_ack
}

/// Exact length of the two-AP MAC Design 4 schedule: P-AP rounds, the
/// S-AP trailing by one round plus its beacon, then retransmission phases
/// of the given sizes on the P-AP.
pub fn md4_schedule_span(timing: &TimingParams, ts: f64, rounds: u32, opts: Md4Options, retx_rounds: &[u32]) -> f64 {
    if rounds == 0 {
        return 0.0;
    }
    let round = md4_round_duration(timing, ts, opts);
    let broadcast = if opts.mu_dl { 0.0 } else { timing.sifs + ts };
    let csi = if opts.with_csi {
        timing.sifs + csi_duration(rounds, timing)
    } else {
        0.0
    };
    let p_first_end = timing.beacon + csi + broadcast + timing.sifs + round;
    let s_first_start = p_first_end + timing.hifs + timing.beacon + timing.sifs;
    let n = rounds as f64;
    let s_end = s_first_start + n * round + (n - 1.0) * timing.pifs + broadcast;
    let retx: f64 = retx_rounds
        .iter()
        .filter(|&&r| r > 0)
        .map(|&r| {
            let r = r as f64;
            timing.hifs + timing.beacon + broadcast + timing.sifs + r * round + (r - 1.0) * timing.pifs
        })
        .sum();
    s_end + retx
}

/// Scheduling interval for the analytic curve: the PPDU of a cell-edge
/// station, i.e. PHY preamble plus the fixed-payload scheduling time at the MCS its
/// mean uplink SNR maps to.
pub fn cell_edge_ts(
    cfg: &ProtocolConfig,
    timing: &TimingParams,
    env: &RadioEnvironment,
    budget: &LinkBudget,
    mcs: &McsTable,
) -> Result<f64> {
    let snr = env.mean_snr(env.cell_radius, budget.sta_tx_power_w);
    let reports = CsiReportSet::from([(StationId(0), snr)]);
    let payload = compute_ts_fixed(cfg.mu_payload_bits(), &reports, mcs, cfg.subchannel_bw_hz())?;
    Ok(timing.phy_preamble_md4 + payload)
}
