//! Restricted access windows. A superframe has `M+1` RAWs, each a beacon
//! followed by a downlink subframe and an uplink subframe for one group,
//! staggered across the two APs as in MAC Design 1, optionally closed by an
//! uplink-only periodic RAW.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::md1::checked_members;
use super::Emitter;
use crate::params::{ProtocolConfig, TimingParams};
use crate::protocol::{ApRole, FrameKind, GroupMap, Node, StationId, Timeline};

/// Slot indices a station is given inside its RAW.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimEntry {
    pub dl_slot: u32,
    pub ul_slot: u32,
}

/// Traffic information map announced in each RAW beacon.
pub type Tim = BTreeMap<StationId, TimEntry>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Md3Schedule {
    pub timeline: Timeline,
    pub tim: Tim,
}

/// Builds one RAW superframe; `praw` appends the uplink-only window.
pub fn build_md3_raws(
    cfg: &ProtocolConfig,
    timing: &TimingParams,
    groups: &GroupMap,
    praw: bool,
) -> crate::Result<Md3Schedule> {
    let members = checked_members(cfg, groups)?;
    let m = cfg.n_groups as usize;
    let data = cfg.data_airtime();
    let ack = cfg.ack_airtime();
    let slot = data + timing.sifs + ack + timing.guard;
    let cap = cfg.group_capacity() as f64;
    let raw = timing.beacon + 2.0 * cap * slot;

    let mut tim = Tim::new();
    for stas in &members {
        for (k, &sta) in stas.iter().enumerate() {
            tim.insert(
                sta,
                TimEntry {
                    dl_slot: k as u32,
                    ul_slot: k as u32,
                },
            );
        }
    }

    let mut em = Emitter::default();
    for r in 0..=m {
        let start = r as f64 * raw;
        em.timeline.reserve_until(start + raw);
        for (ap, group) in [(ApRole::Primary, r), (ApRole::Secondary, r.wrapping_sub(1))] {
            em.ap_frame(ap, start, timing.beacon, Node::Broadcast, FrameKind::Beacon, None);
            let Some(stas) = members.get(group) else { continue };
            let dl_base = start + timing.beacon;
            let ul_base = dl_base + cap * slot;
            for &sta in stas {
                let e = tim[&sta];
                let x = Some(em.exchange());
                let t = dl_base + e.dl_slot as f64 * slot;
                let end = em.ap_frame(ap, t, data, Node::Sta(sta), FrameKind::Data, x);
                em.sta_frame(sta, ap, end + timing.sifs, ack, FrameKind::Ack, x);
                let t = ul_base + e.ul_slot as f64 * slot;
                let end = em.sta_frame(sta, ap, t, data, FrameKind::Data, x);
                em.ap_frame(ap, end + timing.sifs, ack, Node::Sta(sta), FrameKind::Ack, x);
            }
        }
    }
    if praw {
        let start = (m as f64 + 1.0) * raw;
        let len = cfg.praw_fraction * (m as f64 + 1.0) * raw;
        if len > 0.0 {
            em.ap_frame(ApRole::Primary, start, len, Node::Broadcast, FrameKind::Praw, None);
        }
    }
    Ok(Md3Schedule {
        timeline: em.timeline,
        tim,
    })
}
