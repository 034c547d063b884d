//! Contention-free polling of the stations whose exchanges failed.
//!
//! A PCF frame is a beacon, then for every station a CF-Poll carrying its
//! downlink data answered by a CF-ACK carrying its uplink data, polls
//! separated by PIFS, closed by CF-End.

use serde::{Deserialize, Serialize};

use super::Emitter;
use crate::params::TimingParams;
use crate::protocol::{ApRole, FrameKind, Node, StationId, Timeline};

/// Which AP runs the retransmission phases.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PcfHandler {
    #[default]
    Primary,
    Secondary,
    /// Each phase polls on the P-AP, then on the S-AP for what remains.
    Both,
}

impl PcfHandler {
    pub fn aps(self) -> &'static [ApRole] {
        match self {
            PcfHandler::Primary => &[ApRole::Primary],
            PcfHandler::Secondary => &[ApRole::Secondary],
            PcfHandler::Both => &[ApRole::Primary, ApRole::Secondary],
        }
    }
}

pub(crate) fn emit_pcf_frame(em: &mut Emitter, failed: &[StationId], timing: &TimingParams, ap: ApRole, start: f64) -> f64 {
    let mut t = em.ap_frame(ap, start, timing.beacon, Node::Broadcast, FrameKind::Beacon, None);
    for (i, &sta) in failed.iter().enumerate() {
        if i > 0 {
            t += timing.pifs;
        }
        let x = Some(em.exchange());
        let poll_end = em.ap_frame(ap, t, timing.cf_poll, Node::Sta(sta), FrameKind::CfPoll, x);
        t = em.sta_frame(sta, ap, poll_end + timing.sifs, timing.cf_ack, FrameKind::CfAck, x);
    }
    em.ap_frame(ap, t, timing.cf_end, Node::Broadcast, FrameKind::CfEnd, None)
}

/// One PCF frame beginning at `start`; exchange ids start at `exchange_base`.
pub fn build_pcf_frame(
    failed: &[StationId],
    timing: &TimingParams,
    ap: ApRole,
    start: f64,
    exchange_base: u32,
) -> Timeline {
    let mut em = Emitter::with_exchange_base(exchange_base);
    emit_pcf_frame(&mut em, failed, timing, ap, start);
    em.timeline
}

/// One PCF frame on its own, starting at time zero.
pub fn build_pcf_phase(failed: &[StationId], timing: &TimingParams, ap: ApRole) -> Timeline {
    build_pcf_frame(failed, timing, ap, 0.0, 0)
}
