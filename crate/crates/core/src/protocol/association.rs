//! Dual association: a station authenticates and associates with the
//! S-AP, which shares the association with the P-AP, and then
//! re-associates with the P-AP without authenticating again.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ApRole, FrameKind, Node, StationId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AssocPhase {
    Scan,
    SwitchToS,
    AuthPending,
    Authenticated,
    AssocPending,
    AssociatedS,
    ReassocPending,
    DualAssociated,
}

/// Inputs seen by one station.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AssocEvent {
    Beacon(ApRole),
    AuthResponse,
    /// Station decides to associate; carries one frame duration.
    Associate { frame_duration: f64 },
    /// S-AP grants a TTT in seconds.
    AssocResponse { ttt: f64 },
    /// S-AP has forwarded the association to the P-AP.
    AssociationShared,
    Reassociate,
    ReassocResponse,
    Data,
}

impl fmt::Display for AssocEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AssocEvent::Beacon(r) => write!(f, "Beacon({r})"),
            AssocEvent::Associate { frame_duration } => write!(f, "Associate({:.3}us)", frame_duration * 1e6),
            AssocEvent::AssocResponse { ttt } => write!(f, "AssocResponse({:.3}us)", ttt * 1e6),
            other => write!(f, "{other:?}"),
        }
    }
}

/// Frame a station sends in response to an event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmittedFrame {
    pub src: Node,
    pub dst: Node,
    pub kind: FrameKind,
}

/// Association state of one station.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Association {
    pub phase: AssocPhase,
    /// TTT currently in force, seconds.
    pub ttt: Option<f64>,
    pub with_primary: bool,
    pub with_secondary: bool,
    /// The P-AP has been told about the S-AP association.
    pub shared_with_primary: bool,
}

impl Default for Association {
    fn default() -> Self {
        Self {
            phase: AssocPhase::Scan,
            ttt: None,
            with_primary: false,
            with_secondary: false,
            shared_with_primary: false,
        }
    }
}

impl Association {
    pub fn can_send_data(&self) -> bool {
        self.phase == AssocPhase::DualAssociated
    }

    /// Advances the machine. On error the receiver is left untouched.
    pub fn step(&self, sta: StationId, event: AssocEvent) -> Result<(Association, Vec<EmittedFrame>)> {
        use AssocPhase::*;
        let to = |role: ApRole, kind: FrameKind| EmittedFrame {
            src: Node::Sta(sta),
            dst: Node::Ap(role),
            kind,
        };
        let mut next = self.clone();
        let mut out = Vec::new();
        match (self.phase, event) {
            (Scan, AssocEvent::Beacon(ApRole::Primary)) => next.phase = SwitchToS,
            // the S-AP has priority during association, wherever it is heard first
            (Scan | SwitchToS, AssocEvent::Beacon(ApRole::Secondary)) => {
                next.phase = AuthPending;
                out.push(to(ApRole::Secondary, FrameKind::AuthRequest));
            }
            (_, AssocEvent::Beacon(_)) => {}
            (AuthPending, AssocEvent::AuthResponse) => next.phase = Authenticated,
            (Authenticated, AssocEvent::Associate { frame_duration }) if frame_duration >= 0.0 => {
                next.phase = AssocPending;
                next.ttt = Some(frame_duration);
                out.push(to(ApRole::Secondary, FrameKind::AssocRequest { ttt: frame_duration }));
            }
            (AssocPending, AssocEvent::AssocResponse { ttt }) if ttt >= 0.0 => {
                next.phase = AssociatedS;
                next.ttt = Some(ttt);
                next.with_secondary = true;
            }
            (AssociatedS, AssocEvent::AssociationShared) => next.shared_with_primary = true,
            (AssociatedS, AssocEvent::Reassociate) if self.shared_with_primary => {
                next.phase = ReassocPending;
                out.push(to(ApRole::Primary, FrameKind::ReassocRequest));
            }
            (ReassocPending, AssocEvent::ReassocResponse) => {
                next.phase = DualAssociated;
                next.with_primary = true;
            }
            (DualAssociated, AssocEvent::Data) => {}
            (phase, event) => {
                return Err(Error::ProtocolViolation {
                    state: format!("{phase:?}"),
                    event: event.to_string(),
                })
            }
        }
        Ok((next, out))
    }
}

/// Runs a sequence of events from `Scan`, returning the final state and a
/// text trace with one line per event and emitted frame.
pub fn association_replay(sta: StationId, events: &[AssocEvent]) -> Result<(Association, String)> {
    let mut state = Association::default();
    let mut trace = String::new();
    for (i, &ev) in events.iter().enumerate() {
        let (next, frames) = state.step(sta, ev)?;
        trace.push_str(&format!("{i} {sta} {ev} {:?} -> {:?}\n", state.phase, next.phase));
        for f in frames {
            trace.push_str(&format!("{i} emit {} {} {}\n", f.src, f.dst, f.kind));
        }
        state = next;
    }
    Ok((state, trace))
}
