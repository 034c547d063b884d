//! Shared protocol vocabulary: stations, access points, frame kinds and
//! the event timeline every scheduler produces.

mod association;
mod groups;
mod timeline;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use association::{association_replay, AssocEvent, AssocPhase, Association, EmittedFrame};
pub use groups::{assign_groups, compute_ttt, group_members, initial_ttt, GroupMap};
pub use timeline::{Timeline, TransmissionEvent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StationId(pub u32);

impl fmt::Display for StationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "STA{}", self.0)
    }
}

/// Which of the two co-located access points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ApRole {
    Primary,
    Secondary,
}

impl ApRole {
    pub fn channel(self) -> Channel {
        match self {
            ApRole::Primary => Channel::P,
            ApRole::Secondary => Channel::S,
        }
    }

    pub fn other(self) -> ApRole {
        match self {
            ApRole::Primary => ApRole::Secondary,
            ApRole::Secondary => ApRole::Primary,
        }
    }
}

impl fmt::Display for ApRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ApRole::Primary => "P-AP",
            ApRole::Secondary => "S-AP",
        })
    }
}

/// Radio channel; each AP owns one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Channel {
    P,
    S,
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Channel::P => "chP",
            Channel::S => "chS",
        })
    }
}

/// Whole band or one OFDMA sub-channel of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SubChannel {
    FullBand,
    Index(u8),
}

impl SubChannel {
    /// Whether two allocations share spectrum.
    pub fn overlaps(self, other: SubChannel) -> bool {
        match (self, other) {
            (SubChannel::Index(a), SubChannel::Index(b)) => a == b,
            _ => true,
        }
    }
}

impl fmt::Display for SubChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubChannel::FullBand => f.write_str("full"),
            SubChannel::Index(i) => write!(f, "sub{i}"),
        }
    }
}

/// Transmitter or receiver of an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Node {
    Ap(ApRole),
    Sta(StationId),
    Broadcast,
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Ap(r) => r.fmt(f),
            Node::Sta(s) => s.fmt(f),
            Node::Broadcast => f.write_str("*"),
        }
    }
}

/// Frame kinds that appear on a schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FrameKind {
    Beacon,
    AuthRequest,
    AuthResponse,
    /// Carries the station's requested TTT in seconds.
    AssocRequest { ttt: f64 },
    /// Carries the TTT granted by the S-AP.
    AssocResponse { ttt: f64 },
    ReassocRequest,
    ReassocResponse,
    Data,
    Ack,
    CfPoll,
    CfAck,
    CfEnd,
    TriggerSounding,
    /// Scheduling interval and sub-channel of every station in the round.
    TriggerData { ts: f64, allocation: Vec<(StationId, u8)> },
    CsiReport,
    BlockAck,
    MuRts,
    Cts,
    /// Reserved uplink-only window.
    Praw,
}

/// Nominal management-frame body used for air-time of association frames.
const MGMT_MAC_BITS: u32 = 272;

impl FrameKind {
    pub fn name(&self) -> &'static str {
        match self {
            FrameKind::Beacon => "Beacon",
            FrameKind::AuthRequest => "AuthRequest",
            FrameKind::AuthResponse => "AuthResponse",
            FrameKind::AssocRequest { .. } => "AssocRequest",
            FrameKind::AssocResponse { .. } => "AssocResponse",
            FrameKind::ReassocRequest => "ReassocRequest",
            FrameKind::ReassocResponse => "ReassocResponse",
            FrameKind::Data => "Data",
            FrameKind::Ack => "Ack",
            FrameKind::CfPoll => "CfPoll",
            FrameKind::CfAck => "CfAck",
            FrameKind::CfEnd => "CfEnd",
            FrameKind::TriggerSounding => "TriggerSounding",
            FrameKind::TriggerData { .. } => "TriggerData",
            FrameKind::CsiReport => "CsiReport",
            FrameKind::BlockAck => "BlockAck",
            FrameKind::MuRts => "MuRts",
            FrameKind::Cts => "Cts",
            FrameKind::Praw => "Praw",
        }
    }

    /// MAC-layer size for frames whose air-time follows from their length.
    /// Frames sized by a timing constant return `None`.
    pub fn mac_bits(&self, cfg: &crate::params::ProtocolConfig) -> Option<u32> {
        use crate::presets::{CF_END_MAC_BITS, CTS_MAC_BITS, MU_RTS_MAC_BITS};
        match self {
            FrameKind::Data | FrameKind::CfPoll | FrameKind::CfAck => Some(cfg.payload_bits + cfg.mac_header_bits),
            FrameKind::Ack => Some(cfg.ack_mac_bits),
            FrameKind::CfEnd => Some(CF_END_MAC_BITS),
            FrameKind::MuRts => Some(MU_RTS_MAC_BITS),
            FrameKind::Cts => Some(CTS_MAC_BITS),
            FrameKind::AuthRequest
            | FrameKind::AuthResponse
            | FrameKind::AssocRequest { .. }
            | FrameKind::AssocResponse { .. }
            | FrameKind::ReassocRequest
            | FrameKind::ReassocResponse => Some(MGMT_MAC_BITS),
            _ => None,
        }
    }
}

impl fmt::Display for FrameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameKind::AssocRequest { ttt } | FrameKind::AssocResponse { ttt } => {
                write!(f, "{}(ttt={:.3}us)", self.name(), ttt * 1e6)
            }
            FrameKind::TriggerData { ts, allocation } => {
                write!(f, "TriggerData(ts={:.3}us;", ts * 1e6)?;
                for (i, (sta, sub)) in allocation.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{sta}:{sub}")?;
                }
                f.write_str(")")
            }
            other => f.write_str(other.name()),
        }
    }
}

/// Station position in polar coordinates around the AP pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    /// meters
    pub r: f64,
    /// radians
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Station {
    pub id: StationId,
    pub position: Position,
    /// 1-based group index.
    pub group_id: u32,
    pub association: Association,
    /// Target transmission time in seconds.
    pub ttt: f64,
    pub current_channel: Channel,
}

impl Station {
    pub fn new(id: StationId, position: Position, group_id: u32) -> Self {
        Self {
            id,
            position,
            group_id,
            association: Association::default(),
            ttt: 0.0,
            current_channel: Channel::P,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccessPoint {
    pub role: ApRole,
    pub channel: Channel,
    /// watts
    pub tx_power: f64,
    pub known_associations: BTreeSet<StationId>,
    pub schedule: Timeline,
}

impl AccessPoint {
    pub fn new(role: ApRole, tx_power: f64) -> Self {
        Self {
            role,
            channel: role.channel(),
            tx_power,
            known_associations: BTreeSet::new(),
            schedule: Timeline::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ap_channels_are_distinct() {
        assert_ne!(ApRole::Primary.channel(), ApRole::Secondary.channel());
        assert_eq!(ApRole::Primary.other(), ApRole::Secondary);
    }

    #[test]
    fn subchannel_overlap() {
        assert!(SubChannel::FullBand.overlaps(SubChannel::Index(3)));
        assert!(SubChannel::Index(2).overlaps(SubChannel::Index(2)));
        assert!(!SubChannel::Index(2).overlaps(SubChannel::Index(3)));
    }

    #[test]
    fn trigger_display_lists_allocation() {
        let k = FrameKind::TriggerData {
            ts: 50e-6,
            allocation: vec![(StationId(1), 0), (StationId(4), 1)],
        };
        assert_eq!(k.to_string(), "TriggerData(ts=50.000us;STA1:0,STA4:1)");
    }
}
