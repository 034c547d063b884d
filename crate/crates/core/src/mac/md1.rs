//! Staggered two-channel TDMA. A superframe has `M+1` frames separated by
//! HIFS; group `g` is served by the P-AP in frame `g` and repeated on the
//! S-AP in frame `g+1`, so every exchange happens twice.

use serde::{Deserialize, Serialize};

use super::Emitter;
use crate::error::{invalid, Result};
use crate::params::{ProtocolConfig, TimingParams};
use crate::protocol::{group_members, ApRole, FrameKind, GroupMap, Node, StationId, Timeline};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Md1Options {
    /// Bidirectional transmit: the uplink data frame replaces the
    /// downlink ACK, shortening each double slot.
    pub bdt: bool,
}

/// Air-time of one station's double slot.
pub fn double_slot_duration(cfg: &ProtocolConfig, timing: &TimingParams, opts: Md1Options) -> f64 {
    let data = cfg.data_airtime();
    let ack = cfg.ack_airtime();
    if opts.bdt {
        2.0 * data + 2.0 * timing.sifs + ack + timing.guard
    } else {
        2.0 * (data + timing.sifs + ack + timing.guard)
    }
}

pub(crate) fn checked_members(cfg: &ProtocolConfig, groups: &GroupMap) -> Result<Vec<Vec<StationId>>> {
    cfg.validate()?;
    if let Some((sta, g)) = groups.iter().find(|(_, &g)| g == 0 || g > cfg.n_groups) {
        return Err(invalid("groups", format!("{sta} has group {g} outside 1..={}", cfg.n_groups)));
    }
    let members = group_members(groups, cfg.n_groups);
    let cap = cfg.group_capacity() as usize;
    if let Some((i, m)) = members.iter().enumerate().find(|(_, m)| m.len() > cap) {
        return Err(invalid(
            "groups",
            format!("group {} has {} stations but a frame holds {cap}", i + 1, m.len()),
        ));
    }
    Ok(members)
}

fn emit_double_slot(
    em: &mut Emitter,
    cfg: &ProtocolConfig,
    timing: &TimingParams,
    ap: ApRole,
    sta: StationId,
    start: f64,
    opts: Md1Options,
) {
    let data = cfg.data_airtime();
    let ack = cfg.ack_airtime();
    let slot = data + timing.sifs + ack + timing.guard;
    let x = Some(em.exchange());
    let to_sta = Node::Sta(sta);
    let dl_end = em.ap_frame(ap, start, data, to_sta, FrameKind::Data, x);
    if opts.bdt {
        let ul_end = em.sta_frame(sta, ap, dl_end + timing.sifs, data, FrameKind::Data, x);
        em.ap_frame(ap, ul_end + timing.sifs, ack, to_sta, FrameKind::Ack, x);
    } else {
        em.sta_frame(sta, ap, dl_end + timing.sifs, ack, FrameKind::Ack, x);
        let ul_end = em.sta_frame(sta, ap, start + slot, data, FrameKind::Data, x);
        em.ap_frame(ap, ul_end + timing.sifs, ack, to_sta, FrameKind::Ack, x);
    }
}

/// `cfg.n_superframes` consecutive superframes.
pub fn build_md1_superframes(
    cfg: &ProtocolConfig,
    timing: &TimingParams,
    groups: &GroupMap,
    opts: Md1Options,
) -> Result<Timeline> {
    let members = checked_members(cfg, groups)?;
    let m = cfg.n_groups as usize;
    let double = double_slot_duration(cfg, timing, opts);
    let frame = timing.beacon + cfg.group_capacity() as f64 * double;
    let superframe = (m as f64 + 1.0) * frame + m as f64 * timing.hifs;
    let mut em = Emitter::default();
    for sf in 0..cfg.n_superframes {
        let sf_start = sf as f64 * superframe;
        for f in 0..=m {
            let start = sf_start + f as f64 * (frame + timing.hifs);
            // slots are reserved whether or not a frame fills them
            em.timeline.reserve_until(start + frame);
            for (ap, group) in [(ApRole::Primary, f), (ApRole::Secondary, f.wrapping_sub(1))] {
                em.ap_frame(ap, start, timing.beacon, Node::Broadcast, FrameKind::Beacon, None);
                let Some(stas) = members.get(group) else { continue };
                for (k, &sta) in stas.iter().enumerate() {
                    emit_double_slot(&mut em, cfg, timing, ap, sta, start + timing.beacon + k as f64 * double, opts);
                }
            }
        }
    }
    Ok(em.timeline)
}

/// A single superframe regardless of `cfg.n_superframes`.
pub fn build_md1_superframe(
    cfg: &ProtocolConfig,
    timing: &TimingParams,
    groups: &GroupMap,
    opts: Md1Options,
) -> Result<Timeline> {
    let one = ProtocolConfig {
        n_superframes: 1,
        ..*cfg
    };
    build_md1_superframes(&one, timing, groups, opts)
}
