//! Deterministic industrial WLAN laboratory.
//!
//! Hybrid channel access MAC designs (TDMA over DCF, TDMA with a PCF
//! retransmission phase, RAW-based windows and OFDMA virtual TDMA) over a
//! two-AP temporal-redundancy topology, together with the closed-form
//! outage/failure/cycle-time framework they are validated against.
//!
//! Module map:
//!
//! - [`channel`]: SNR, Rayleigh fading, outage probabilities, distance laws.
//! - [`analytic`]: closed-form slot, failure and cycle-time calculators.
//! - [`protocol`]: stations, APs, frames, timelines and dual association.
//! - [`mac`]: schedule builders for the four MAC designs and `T_s`.
//! - [`sim`]: Monte-Carlo trial engine, campaigns and baselines.
//! - [`presets`]: calibrated defaults shared by tests and the CLI.

pub mod analytic;
pub mod channel;
pub mod error;
pub mod mac;
pub mod params;
pub mod presets;
pub mod protocol;
pub mod quadrature;
pub mod sim;
pub mod units;

pub use error::{Error, Result};
