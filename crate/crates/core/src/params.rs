//! Timing constants and protocol dimensions shared by every MAC design.

use serde::{Deserialize, Serialize};

use crate::error::{finite, invalid, Result};

/// Smallest OFDMA sub-channel width and the widths a station may be given.
pub const SUBCHANNEL_WIDTHS_HZ: [f64; 3] = [2.22e6, 5e6, 10e6];

/// Inter-frame spaces and frame air-times, all in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingParams {
    pub sifs: f64,
    pub pifs: f64,
    pub difs: f64,
    /// Gap between frames covering a channel switch.
    pub hifs: f64,
    pub guard: f64,
    /// Beacon air-time `T_B`.
    pub beacon: f64,
    pub cf_poll: f64,
    pub cf_ack: f64,
    pub cf_end: f64,
    pub block_ack: f64,
    pub csi_report: f64,
    pub trigger_data: f64,
    pub trigger_sounding: f64,
    /// PHY preamble of an OFDMA PPDU.
    pub phy_preamble_md4: f64,
    /// DCF backoff slot.
    pub backoff_slot: f64,
    pub mu_rts: f64,
    pub cts: f64,
}

impl TimingParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in self.fields() {
            if !(finite(name, v)? >= 0.0) {
                return Err(invalid(name, format!("must be >= 0, got {v}")));
            }
        }
        if !(self.sifs < self.pifs && self.pifs < self.difs) {
            return Err(invalid("pifs", "inter-frame spaces must satisfy sifs < pifs < difs"));
        }
        Ok(())
    }

    pub fn fields(&self) -> [(&'static str, f64); 17] {
        [
            ("sifs", self.sifs),
            ("pifs", self.pifs),
            ("difs", self.difs),
            ("hifs", self.hifs),
            ("guard", self.guard),
            ("beacon", self.beacon),
            ("cf_poll", self.cf_poll),
            ("cf_ack", self.cf_ack),
            ("cf_end", self.cf_end),
            ("block_ack", self.block_ack),
            ("csi_report", self.csi_report),
            ("trigger_data", self.trigger_data),
            ("trigger_sounding", self.trigger_sounding),
            ("phy_preamble_md4", self.phy_preamble_md4),
            ("backoff_slot", self.backoff_slot),
            ("mu_rts", self.mu_rts),
            ("cts", self.cts),
        ]
    }

    /// Every duration set to zero; the inter-frame ordering check fails on
    /// this value, which is only meant for formula edge cases.
    pub fn zero() -> Self {
        Self {
            sifs: 0.0,
            pifs: 0.0,
            difs: 0.0,
            hifs: 0.0,
            guard: 0.0,
            beacon: 0.0,
            cf_poll: 0.0,
            cf_ack: 0.0,
            cf_end: 0.0,
            block_ack: 0.0,
            csi_report: 0.0,
            trigger_data: 0.0,
            trigger_sounding: 0.0,
            phy_preamble_md4: 0.0,
            backoff_slot: 0.0,
            mu_rts: 0.0,
            cts: 0.0,
        }
    }
}

/// Network dimensions and frame sizing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    /// `N`
    pub n_stations: u32,
    /// `M`
    pub n_groups: u32,
    /// `N_SF`
    pub n_superframes: u32,
    /// `H`, maximum number of retransmission phases.
    pub max_retx_phases: u32,
    /// `K = W_ch / W_s`, stations per multi-user transmission.
    pub mu_group_size: u32,
    /// Net payload `L` in bits.
    pub payload_bits: u32,
    pub mac_header_bits: u32,
    pub phy_header_bits: u32,
    pub ack_mac_bits: u32,
    pub data_rate_bps: f64,
    pub base_rate_bps: f64,
    /// PRAW length as a fraction of the RAW superframe.
    pub praw_fraction: f64,
    /// Full channel bandwidth `W_ch`.
    pub channel_bw_hz: f64,
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_stations == 0 {
            return Err(invalid("n_stations", "must be >= 1"));
        }
        if self.n_groups == 0 {
            return Err(invalid("n_groups", "must be >= 1"));
        }
        if self.n_superframes == 0 {
            return Err(invalid("n_superframes", "must be >= 1"));
        }
        if self.max_retx_phases == 0 {
            return Err(invalid("max_retx_phases", "must be >= 1"));
        }
        if self.mu_group_size == 0 {
            return Err(invalid("mu_group_size", "must be >= 1"));
        }
        if self.mu_group_size > self.max_mu_group_size() {
            return Err(invalid(
                "mu_group_size",
                format!(
                    "{} stations exceed the {} sub-channels of {} MHz",
                    self.mu_group_size,
                    self.max_mu_group_size(),
                    self.channel_bw_hz / 1e6
                ),
            ));
        }
        for (name, v) in [
            ("data_rate_bps", self.data_rate_bps),
            ("base_rate_bps", self.base_rate_bps),
            ("channel_bw_hz", self.channel_bw_hz),
        ] {
            if !(finite(name, v)? > 0.0) {
                return Err(invalid(name, format!("must be > 0, got {v}")));
            }
        }
        if !(finite("praw_fraction", self.praw_fraction)? >= 0.0 && self.praw_fraction < 1.0) {
            return Err(invalid("praw_fraction", "must lie in [0, 1)"));
        }
        Ok(())
    }

    /// `W_ch / W_s` with the narrowest supported sub-channel.
    pub fn max_mu_group_size(&self) -> u32 {
        // 20 MHz / 2.22 MHz is 9.009; a hair of slack keeps 9 admissible
        (self.channel_bw_hz / SUBCHANNEL_WIDTHS_HZ[0] + 1e-9).floor() as u32
    }

    /// Widest supported sub-channel that still fits `K` users in the band.
    pub fn subchannel_bw_hz(&self) -> f64 {
        let k = self.mu_group_size.max(1) as f64;
        SUBCHANNEL_WIDTHS_HZ
            .iter()
            .rev()
            .copied()
            .find(|w| (self.channel_bw_hz / w + 1e-9).floor() >= k)
            .unwrap_or(SUBCHANNEL_WIDTHS_HZ[0])
    }

    /// `N' = ⌈N/K⌉` multi-user rounds.
    pub fn mu_rounds(&self) -> u32 {
        self.n_stations.div_ceil(self.mu_group_size.max(1))
    }

    /// Stations per group, rounded up.
    pub fn group_capacity(&self) -> u32 {
        self.n_stations.div_ceil(self.n_groups.max(1))
    }

    /// PHY header at base rate plus MAC bits at the data rate.
    pub fn frame_airtime(&self, mac_bits: u32) -> f64 {
        self.phy_header_bits as f64 / self.base_rate_bps + mac_bits as f64 / self.data_rate_bps
    }

    /// `T_Data`
    pub fn data_airtime(&self) -> f64 {
        self.frame_airtime(self.payload_bits + self.mac_header_bits)
    }

    /// `T_ACK`
    pub fn ack_airtime(&self) -> f64 {
        self.frame_airtime(self.ack_mac_bits)
    }

    /// Uplink bits carried in one multi-user PPDU.
    pub fn mu_payload_bits(&self) -> u32 {
        self.payload_bits + self.mac_header_bits
    }
}
