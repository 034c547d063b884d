use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::channel::{transmission_succeeds, LinkBudget, RadioEnvironment};
use crate::protocol::{ApRole, FrameKind, Node, StationId, Timeline};

/// Plays timelines against the fading channel for one trial.
pub(crate) struct Evaluator<'a> {
    pub env: &'a RadioEnvironment,
    pub budget: &'a LinkBudget,
    /// Distance of every station, indexed by id.
    pub distance: &'a [f64],
    /// Transmission attempts drawn per AP (P-AP, S-AP).
    pub attempts: [u32; 2],
}

fn carries_payload(kind: &FrameKind) -> bool {
    matches!(kind, FrameKind::Data | FrameKind::CfPoll | FrameKind::CfAck)
}

fn ap_index(ap: ApRole) -> usize {
    match ap {
        ApRole::Primary => 0,
        ApRole::Secondary => 1,
    }
}

impl Evaluator<'_> {
    fn ap_power(&self, ap: ApRole) -> f64 {
        match ap {
            ApRole::Primary => self.budget.pap_tx_power_w,
            ApRole::Secondary => self.budget.sap_tx_power_w,
        }
    }

    fn draw<R: Rng + ?Sized>(&mut self, ap: ApRole, sta: StationId, power: f64, rng: &mut R) -> bool {
        self.attempts[ap_index(ap)] += 1;
        let r = self.distance[sta.0 as usize];
        transmission_succeeds(r, power, self.env, self.budget.snr_threshold, rng)
    }

    /// Draws one fading realization per payload reception, in event order,
    /// and returns the stations whose downlink and uplink of at least one
    /// exchange both succeeded.
    pub fn play<R: Rng + ?Sized>(&mut self, timeline: &Timeline, rng: &mut R) -> BTreeSet<StationId> {
        let mut members: BTreeMap<u32, BTreeSet<StationId>> = BTreeMap::new();
        for e in timeline.events() {
            if let (Some(x), true) = (e.exchange, carries_payload(&e.kind)) {
                for node in [e.src, e.dst] {
                    if let Node::Sta(s) = node {
                        members.entry(x).or_default().insert(s);
                    }
                }
            }
        }
        let mut dl: BTreeSet<(u32, StationId)> = BTreeSet::new();
        let mut ul: BTreeSet<(u32, StationId)> = BTreeSet::new();
        for e in timeline.events() {
            let Some(x) = e.exchange else { continue };
            if !carries_payload(&e.kind) {
                continue;
            }
            match (e.src, e.dst) {
                (Node::Ap(ap), Node::Sta(s)) => {
                    if self.draw(ap, s, self.ap_power(ap), rng) {
                        dl.insert((x, s));
                    }
                }
                (Node::Ap(ap), Node::Broadcast) => {
                    let power = self.ap_power(ap);
                    for &s in members.get(&x).into_iter().flatten() {
                        if self.draw(ap, s, power, rng) {
                            dl.insert((x, s));
                        }
                    }
                }
                (Node::Sta(s), Node::Ap(ap)) => {
                    if self.draw(ap, s, self.budget.sta_tx_power_w, rng) {
                        ul.insert((x, s));
                    }
                }
                _ => {}
            }
        }
        dl.intersection(&ul).map(|&(_, s)| s).collect()
    }
}
