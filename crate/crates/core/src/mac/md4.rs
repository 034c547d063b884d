//! OFDMA multi-user cycle. The P-AP sends a beacon, optionally sounds every
//! round for CSI, broadcasts the downlink, then runs `⌈N/K⌉` uplink rounds
//! (trigger, parallel uplinks of exactly `T_s`, block ACK). The S-AP trails
//! one round behind, serving only groups the P-AP has finished, and sends
//! its own downlink broadcast after its last round.

use serde::{Deserialize, Serialize};

use super::ts::{compute_ts_fixed, CsiReportSet, McsTable};
use super::Emitter;
use crate::analytic::Md4Options;
use crate::error::{invalid, Result};
use crate::params::{ProtocolConfig, TimingParams};
use crate::protocol::{ApRole, Channel, FrameKind, Node, StationId, SubChannel, Timeline};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Md4Cycle {
    pub timeline: Timeline,
    /// Scheduling interval used by every round, PHY preamble included.
    pub ts: f64,
    pub rounds: Vec<Vec<StationId>>,
    /// First exchange id not used by this cycle.
    pub next_exchange: u32,
}

fn sub(i: usize) -> SubChannel {
    SubChannel::Index(i as u8)
}

fn emit_round(
    em: &mut Emitter,
    timing: &TimingParams,
    ap: ApRole,
    start: f64,
    stas: &[StationId],
    ts: f64,
    opts: Md4Options,
    x: u32,
) -> f64 {
    let ch: Channel = ap.channel();
    let ap_node = Node::Ap(ap);
    let mut t = start;
    if opts.mu_rts_cts {
        t = em.ap_frame(ap, t, timing.mu_rts, Node::Broadcast, FrameKind::MuRts, None) + timing.sifs;
        for (i, &s) in stas.iter().enumerate() {
            em.emit(t, timing.cts, Node::Sta(s), ap_node, FrameKind::Cts, ch, sub(i), None);
        }
        t += timing.cts + timing.sifs;
    }
    if opts.mu_dl {
        for (i, &s) in stas.iter().enumerate() {
            em.emit(t, ts, ap_node, Node::Sta(s), FrameKind::Data, ch, sub(i), Some(x));
        }
        t += ts + timing.sifs;
    }
    let allocation = stas.iter().enumerate().map(|(i, &s)| (s, i as u8)).collect();
    t = em.ap_frame(ap, t, timing.trigger_data, Node::Broadcast, FrameKind::TriggerData { ts, allocation }, None)
        + timing.sifs;
    for (i, &s) in stas.iter().enumerate() {
        em.emit(t, ts, Node::Sta(s), ap_node, FrameKind::Data, ch, sub(i), Some(x));
    }
    t += ts + timing.sifs;
    em.ap_frame(ap, t, timing.block_ack, Node::Broadcast, FrameKind::BlockAck, None)
}

fn emit_rounds(
    em: &mut Emitter,
    timing: &TimingParams,
    ap: ApRole,
    mut t: f64,
    rounds: &[Vec<StationId>],
    ts: f64,
    opts: Md4Options,
    x: u32,
) -> f64 {
    for (j, stas) in rounds.iter().enumerate() {
        t += if j == 0 { timing.sifs } else { timing.pifs };
        t = emit_round(em, timing, ap, t, stas, ts, opts, x);
    }
    t
}

fn check(cfg: &ProtocolConfig, ts: f64) -> Result<()> {
    cfg.validate()?;
    if !(ts.is_finite() && ts > 0.0) {
        return Err(invalid("ts", format!("must be > 0, got {ts}")));
    }
    Ok(())
}

fn chunk(stations: &[StationId], k: u32) -> Vec<Vec<StationId>> {
    stations.chunks(k.max(1) as usize).map(<[StationId]>::to_vec).collect()
}

/// Cycle for the reporting stations, with `T_s` from the worst report.
pub fn build_md4_cycle(
    cfg: &ProtocolConfig,
    timing: &TimingParams,
    reports: &CsiReportSet,
    mcs: &McsTable,
    opts: Md4Options,
) -> Result<Md4Cycle> {
    let payload = compute_ts_fixed(cfg.mu_payload_bits(), reports, mcs, cfg.subchannel_bw_hz())?;
    let stations: Vec<StationId> = reports.keys().copied().collect();
    build_md4_cycle_with_ts(cfg, timing, &stations, timing.phy_preamble_md4 + payload, opts)
}

/// Cycle with a given scheduling interval.
pub fn build_md4_cycle_with_ts(
    cfg: &ProtocolConfig,
    timing: &TimingParams,
    stations: &[StationId],
    ts: f64,
    opts: Md4Options,
) -> Result<Md4Cycle> {
    check(cfg, ts)?;
    let rounds = chunk(stations, cfg.mu_group_size);
    let mut em = Emitter::default();
    let (xp, xs) = (em.exchange(), em.exchange());
    let p = ApRole::Primary;
    let s = ApRole::Secondary;

    let mut t = em.ap_frame(p, 0.0, timing.beacon, Node::Broadcast, FrameKind::Beacon, None);
    if opts.with_csi {
        for stas in &rounds {
            t += timing.sifs;
            t = em.ap_frame(p, t, timing.trigger_sounding, Node::Broadcast, FrameKind::TriggerSounding, None)
                + timing.sifs;
            for (i, &sta) in stas.iter().enumerate() {
                em.emit(t, timing.csi_report, Node::Sta(sta), Node::Ap(p), FrameKind::CsiReport, p.channel(), sub(i), None);
            }
            t += timing.csi_report;
        }
    }
    if !opts.mu_dl {
        t = em.ap_frame(p, t + timing.sifs, ts, Node::Broadcast, FrameKind::Data, Some(xp));
    }
    let mut p_ends = Vec::with_capacity(rounds.len());
    for (j, stas) in rounds.iter().enumerate() {
        t += if j == 0 { timing.sifs } else { timing.pifs };
        t = emit_round(&mut em, timing, p, t, stas, ts, opts, xp);
        p_ends.push(t);
    }

    if let Some(&first_end) = p_ends.first() {
        let mut t = em.ap_frame(s, first_end + timing.hifs, timing.beacon, Node::Broadcast, FrameKind::Beacon, None);
        for (j, stas) in rounds.iter().enumerate() {
            let gap = if j == 0 { timing.sifs } else { timing.pifs };
            let start = (t + gap).max(p_ends[j] + timing.hifs);
            t = emit_round(&mut em, timing, s, start, stas, ts, opts, xs);
        }
        if !opts.mu_dl {
            em.ap_frame(s, t + timing.sifs, ts, Node::Broadcast, FrameKind::Data, Some(xs));
        }
    }
    Ok(Md4Cycle {
        next_exchange: em.next_exchange,
        timeline: em.timeline,
        ts,
        rounds,
    })
}

/// P-AP retransmission phase for `stations`, beacon at `start`.
pub fn build_md4_retx_phase(
    cfg: &ProtocolConfig,
    timing: &TimingParams,
    stations: &[StationId],
    ts: f64,
    opts: Md4Options,
    start: f64,
    exchange_base: u32,
) -> Result<Timeline> {
    check(cfg, ts)?;
    let mut em = Emitter::with_exchange_base(exchange_base);
    let x = em.exchange();
    let p = ApRole::Primary;
    let mut t = em.ap_frame(p, start, timing.beacon, Node::Broadcast, FrameKind::Beacon, None);
    if !opts.mu_dl {
        t = em.ap_frame(p, t + timing.sifs, ts, Node::Broadcast, FrameKind::Data, Some(x));
    }
    emit_rounds(&mut em, timing, p, t, &chunk(stations, cfg.mu_group_size), ts, opts, x);
    Ok(em.timeline)
}
