use std::collections::BTreeMap;

use super::StationId;

/// 1-based group index for every station.
pub type GroupMap = BTreeMap<StationId, u32>;

/// Round-robin assignment: station `i` joins group `(i mod m) + 1`.
pub fn assign_groups(n: u32, m: u32) -> GroupMap {
    let m = m.max(1);
    (0..n).map(|i| (StationId(i), i % m + 1)).collect()
}

/// Stations of each group in ascending id order, indexed from group 1.
pub fn group_members(groups: &GroupMap, m: u32) -> Vec<Vec<StationId>> {
    let mut out = vec![Vec::new(); m as usize];
    for (&sta, &g) in groups {
        out[(g - 1) as usize].push(sta);
    }
    out
}

/// TTT a station asks for before the S-AP answers: one frame.
pub fn initial_ttt(frame_duration: f64) -> f64 {
    frame_duration
}

/// TTT granted by the S-AP: the frames that precede the station's group
/// within the superframe.
pub fn compute_ttt(group_id: u32, m_groups: u32, frame_duration: f64) -> f64 {
    debug_assert!((1..=m_groups).contains(&group_id));
    (group_id - 1) as f64 * frame_duration
}
