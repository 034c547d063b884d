//! Behavioral models of the two reference protocols.
//!
//! RT-WiFi is single-AP TDMA: one beacon and one double slot per station,
//! each slot optionally doubled to hold one retry. Wi-Red duplicates each
//! frame on two radios attached to independent networks and retries over
//! DCF; contention is replaced by the mean backoff, and a frame is done as
//! soon as either copy gets through.

use rand::Rng;

use super::{TrialConfig, TrialResult};
use crate::channel::transmission_succeeds;
use crate::presets::CW_MIN;

fn attempt<R: Rng>(cfg: &TrialConfig, r: f64, power: f64, rng: &mut R) -> bool {
    transmission_succeeds(r, power, &cfg.env, cfg.budget.snr_threshold, rng)
}

fn result(index: u32, cycle_time: f64, delivered: Vec<bool>, attempts: [u32; 2]) -> TrialResult {
    let initial_failures = delivered.iter().filter(|&&d| !d).count() as u32;
    TrialResult {
        index,
        cycle_time,
        delivered,
        attempts,
        initial_failures,
        pcf_frames: Vec::new(),
        md4_retx_rounds: Vec::new(),
        ts: None,
    }
}

/// Fixed cycle `T_B + 2N·T_slot`, doubled slots with in-slot retries.
pub fn rt_wifi_cycle(cfg: &TrialConfig) -> f64 {
    let p = &cfg.protocol;
    let t = &cfg.timing;
    let slot = p.data_airtime() + t.sifs + p.ack_airtime() + t.guard;
    let per_dir = if cfg.options.in_slot_retx { 2.0 } else { 1.0 };
    t.beacon + 2.0 * per_dir * p.n_stations as f64 * slot
}

pub(super) fn rt_wifi_trial<R: Rng>(cfg: &TrialConfig, index: u32, distance: &[f64], rng: &mut R) -> TrialResult {
    let tries = if cfg.options.in_slot_retx { 2 } else { 1 };
    let mut attempts = 0;
    let mut delivered = Vec::with_capacity(distance.len());
    for &r in distance {
        let mut ok = true;
        for power in [cfg.budget.pap_tx_power_w, cfg.budget.sta_tx_power_w] {
            let mut dir_ok = false;
            for _ in 0..tries {
                attempts += 1;
                if attempt(cfg, r, power, rng) {
                    dir_ok = true;
                    break;
                }
            }
            ok &= dir_ok;
        }
        delivered.push(ok);
    }
    result(index, rt_wifi_cycle(cfg), delivered, [attempts, 0])
}

/// Air-time of one DCF attempt with mean backoff.
pub fn wi_red_attempt_duration(cfg: &TrialConfig) -> f64 {
    let p = &cfg.protocol;
    let t = &cfg.timing;
    let backoff = (CW_MIN - 1) as f64 / 2.0 * t.backoff_slot;
    t.difs + backoff + p.data_airtime() + t.sifs + p.ack_airtime()
}

pub(super) fn wi_red_trial<R: Rng>(cfg: &TrialConfig, index: u32, distance: &[f64], rng: &mut R) -> TrialResult {
    let per_attempt = wi_red_attempt_duration(cfg);
    let max_attempts = 1 + cfg.options.max_mac_retx;
    let mut clock = 0.0;
    let mut attempts = [0u32; 2];
    let mut delivered = Vec::with_capacity(distance.len());
    for &r in distance {
        let mut ok = true;
        // downlink from the two APs, then uplink from the station's two radios
        for radio_powers in [
            [cfg.budget.pap_tx_power_w, cfg.budget.sap_tx_power_w],
            [cfg.budget.sta_tx_power_w, cfg.budget.sta_tx_power_w],
        ] {
            let mut dir_ok = false;
            for _ in 0..max_attempts {
                clock += per_attempt;
                attempts[0] += 1;
                attempts[1] += 1;
                let a = attempt(cfg, r, radio_powers[0], rng);
                let b = attempt(cfg, r, radio_powers[1], rng);
                if a || b {
                    dir_ok = true;
                    break;
                }
            }
            ok &= dir_ok;
        }
        delivered.push(ok);
    }
    result(index, clock, delivered, attempts)
}
