use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Channel, FrameKind, Node, SubChannel};
use crate::error::{Error, Result};

/// Slack for floating-point comparisons of event boundaries, in seconds.
const EPS: f64 = 1e-12;

/// One frame on the air.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransmissionEvent {
    /// seconds from the start of the cycle
    pub start: f64,
    /// seconds
    pub duration: f64,
    pub src: Node,
    pub dst: Node,
    pub kind: FrameKind,
    pub channel: Channel,
    pub sub_channel: SubChannel,
    /// Groups the frames of one bidirectional exchange (DL and UL of a
    /// double slot, a poll and its reply, one station's part of a round).
    pub exchange: Option<u32>,
}

impl TransmissionEvent {
    pub fn end(&self) -> f64 {
        self.start + self.duration
    }

    fn collides(&self, other: &TransmissionEvent) -> bool {
        self.channel == other.channel
            && self.sub_channel.overlaps(other.sub_channel)
            && self.start < other.end() - EPS
            && other.start < self.end() - EPS
    }

    /// One line of the text trace, times in microseconds.
    pub fn trace_line(&self) -> String {
        let mut s = format!(
            "{:.3} {:.3} {} {} {} {} {}",
            self.start * 1e6,
            self.duration * 1e6,
            self.src,
            self.dst,
            self.kind,
            self.channel,
            self.sub_channel
        );
        if let Some(x) = self.exchange {
            let _ = write!(s, " x{x}");
        }
        s
    }
}

/// Ordered list of transmission events.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timeline {
    events: Vec<TransmissionEvent>,
    /// Air-time reserved past the last event, such as a trailing guard.
    reserved_until: f64,
}

impl Timeline {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, event: TransmissionEvent) {
        self.events.push(event);
    }

    pub fn extend(&mut self, other: Timeline) {
        self.events.extend(other.events);
        self.reserved_until = self.reserved_until.max(other.reserved_until);
    }

    /// Keeps the medium reserved up to `t` even if no frame is on the air.
    pub fn reserve_until(&mut self, t: f64) {
        self.reserved_until = self.reserved_until.max(t);
    }

    pub fn events(&self) -> &[TransmissionEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn start(&self) -> f64 {
        self.events.iter().map(|e| e.start).fold(f64::INFINITY, f64::min).min(self.end())
    }

    /// Latest end time of any event or reservation, zero when empty.
    pub fn end(&self) -> f64 {
        self.events
            .iter()
            .map(TransmissionEvent::end)
            .fold(self.reserved_until, f64::max)
    }

    /// Same events moved later by `offset` seconds.
    pub fn shifted(mut self, offset: f64) -> Self {
        for e in &mut self.events {
            e.start += offset;
        }
        self.reserved_until += offset;
        self
    }

    /// Fails on the first pair of events that share spectrum and time.
    pub fn check_non_overlap(&self) -> Result<()> {
        let mut order: Vec<&TransmissionEvent> = self.events.iter().collect();
        order.sort_by(|a, b| a.start.total_cmp(&b.start));
        let mut active: Vec<&TransmissionEvent> = Vec::new();
        for e in order {
            active.retain(|a| a.end() > e.start + EPS);
            if let Some(a) = active.iter().find(|a| a.collides(e)) {
                return Err(Error::Schedule(format!(
                    "overlap: [{}] and [{}]",
                    a.trace_line(),
                    e.trace_line()
                )));
            }
            active.push(e);
        }
        Ok(())
    }

    /// Line-oriented trace, stably sorted by start time, closed by the
    /// timeline end.
    pub fn export_trace(&self) -> String {
        let mut order: Vec<&TransmissionEvent> = self.events.iter().collect();
        order.sort_by(|a, b| a.start.total_cmp(&b.start));
        let mut out = String::new();
        for e in order {
            out.push_str(&e.trace_line());
            out.push('\n');
        }
        if !self.events.is_empty() {
            let _ = writeln!(out, "{:.3} end", self.end() * 1e6);
        }
        out
    }
}
