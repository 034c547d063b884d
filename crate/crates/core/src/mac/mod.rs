//! Schedule builders for the four MAC designs and the scheduling-interval
//! algorithms used by the multi-user design.
//!
//! Builders are pure: the same inputs give the same [`Timeline`]. Frames
//! that belong to one delivery opportunity share an exchange id so the
//! simulator can decide per station whether its downlink and uplink both
//! got through.

pub mod md1;
pub mod md3;
pub mod md4;
pub mod pcf;
pub mod ts;

use crate::protocol::{ApRole, Channel, FrameKind, Node, StationId, SubChannel, Timeline, TransmissionEvent};

pub use md1::{build_md1_superframe, build_md1_superframes, Md1Options};
pub use md3::{build_md3_raws, Md3Schedule, Tim, TimEntry};
pub use md4::{build_md4_cycle, build_md4_cycle_with_ts, build_md4_retx_phase, Md4Cycle};
pub use pcf::{build_pcf_frame, build_pcf_phase, PcfHandler};

/// Allocates exchange ids and appends events.
#[derive(Debug, Default)]
pub(crate) struct Emitter {
    pub timeline: Timeline,
    pub next_exchange: u32,
}

impl Emitter {
    pub fn with_exchange_base(next_exchange: u32) -> Self {
        Self {
            timeline: Timeline::new(),
            next_exchange,
        }
    }

    pub fn exchange(&mut self) -> u32 {
        let x = self.next_exchange;
        self.next_exchange += 1;
        x
    }

    #[allow(clippy::too_many_arguments)]
    pub fn emit(
        &mut self,
        start: f64,
        duration: f64,
        src: Node,
        dst: Node,
        kind: FrameKind,
        channel: Channel,
        sub_channel: SubChannel,
        exchange: Option<u32>,
    ) -> f64 {
        self.timeline.push(TransmissionEvent {
            start,
            duration,
            src,
            dst,
            kind,
            channel,
            sub_channel,
            exchange,
        });
        start + duration
    }

    /// Full-band frame from an AP.
    pub fn ap_frame(&mut self, ap: ApRole, start: f64, duration: f64, dst: Node, kind: FrameKind, x: Option<u32>) -> f64 {
        self.emit(start, duration, Node::Ap(ap), dst, kind, ap.channel(), SubChannel::FullBand, x)
    }

    /// Full-band frame from a station to an AP.
    pub fn sta_frame(
        &mut self,
        sta: StationId,
        ap: ApRole,
        start: f64,
        duration: f64,
        kind: FrameKind,
        x: Option<u32>,
    ) -> f64 {
        self.emit(start, duration, Node::Sta(sta), Node::Ap(ap), kind, ap.channel(), SubChannel::FullBand, x)
    }
}
