//! Scheduling interval `T_s` for multi-user uplink rounds.
//!
//! Every station in a round is given the same air-time so that all
//! uplinks end together. The interval is set by the station whose channel
//! is worst, after quantizing its reported SNR through an MCS table.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::protocol::StationId;

/// One row of the SNR-to-MCS mapping table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McsEntry {
    /// Lowest linear SNR at which the entry may be used.
    pub min_snr: f64,
    pub rate_bps: f64,
}

/// Mapping table, strictly increasing in both SNR and rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<McsEntry>", into = "Vec<McsEntry>")]
pub struct McsTable {
    entries: Vec<McsEntry>,
}

impl McsTable {
    pub fn new(entries: Vec<McsEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(invalid("mcs_table", "needs at least one entry"));
        }
        for e in &entries {
            if !(e.min_snr.is_finite() && e.min_snr >= 0.0 && e.rate_bps.is_finite() && e.rate_bps > 0.0) {
                return Err(invalid("mcs_table", format!("bad entry {e:?}")));
            }
        }
        for w in entries.windows(2) {
            if !(w[1].min_snr > w[0].min_snr && w[1].rate_bps > w[0].rate_bps) {
                return Err(invalid("mcs_table", "entries must be strictly increasing"));
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[McsEntry] {
        &self.entries
    }

    /// Highest entry whose threshold does not exceed `snr`.
    pub fn lookup(&self, snr: f64) -> Option<&McsEntry> {
        self.entries.iter().rev().find(|e| e.min_snr <= snr)
    }
}

impl TryFrom<Vec<McsEntry>> for McsTable {
    type Error = Error;

    fn try_from(entries: Vec<McsEntry>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<McsTable> for Vec<McsEntry> {
    fn from(t: McsTable) -> Self {
        t.entries
    }
}

/// Reported linear SNR per station.
pub type CsiReportSet = BTreeMap<StationId, f64>;

/// Result of the variable-payload algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableTs {
    pub ts: f64,
    /// `T_s − t_i`, filled with padding bits.
    pub padding: BTreeMap<StationId, f64>,
}

/// Shannon rate on the quantized SNR floor.
fn quantized_rate(snr: f64, mcs: &McsTable, bw: f64) -> Result<f64> {
    let entry = mcs.lookup(snr).ok_or(Error::Unschedulable { snr })?;
    Ok(bw * (1.0 + entry.min_snr).log2())
}

/// `⌈bits / rate⌉` on a one-microsecond grid.
fn ceil_us(bits: u32, rate: f64) -> Result<f64> {
    if bits == 0 {
        return Ok(0.0);
    }
    if !(rate > 0.0) {
        return Err(Error::Schedule(format!("zero rate for a {bits}-bit payload")));
    }
    let us = bits as f64 * 1e6 / rate;
    // absorb rounding noise so exact multiples do not round up a whole µs
    let tol = 1e-9 * us.max(1.0);
    Ok((us - tol).ceil().max(0.0) / 1e6)
}

fn check_bw(bw: f64) -> Result<()> {
    if !(bw.is_finite() && bw > 0.0) {
        return Err(invalid("subchannel_bw", format!("must be > 0, got {bw}")));
    }
    Ok(())
}

/// Fixed payload: the minimum-SNR station sets the rate for everyone.
pub fn compute_ts_fixed(payload_bits: u32, reports: &CsiReportSet, mcs: &McsTable, subchannel_bw: f64) -> Result<f64> {
    check_bw(subchannel_bw)?;
    let worst = reports
        .values()
        .copied()
        .min_by(f64::total_cmp)
        .ok_or_else(|| Error::Schedule("empty CSI report set".into()))?;
    ceil_us(payload_bits, quantized_rate(worst, mcs, subchannel_bw)?)
}

/// Per-station payloads: each station's own time, the maximum over them,
/// and the padding each needs to finish with the slowest.
pub fn compute_ts_variable(
    payloads: &BTreeMap<StationId, u32>,
    reports: &CsiReportSet,
    mcs: &McsTable,
    subchannel_bw: f64,
) -> Result<VariableTs> {
    check_bw(subchannel_bw)?;
    if payloads.is_empty() {
        return Err(Error::Schedule("empty payload set".into()));
    }
    let mut times = BTreeMap::new();
    for (&sta, &bits) in payloads {
        let snr = *reports
            .get(&sta)
            .ok_or_else(|| Error::Schedule(format!("{sta} has no CSI report")))?;
        times.insert(sta, ceil_us(bits, quantized_rate(snr, mcs, subchannel_bw)?)?);
    }
    let ts = times.values().copied().fold(0.0, f64::max);
    let padding = times.into_iter().map(|(s, t)| (s, ts - t)).collect();
    Ok(VariableTs { ts, padding })
}
