//! Built-in experiments, one per evaluation figure.
//!
//! | preset | content | expected headline |
//! |--------|---------|-------------------|
//! | `fig8a` | average DL outage vs β, R_A = 50 m | multi-user (K = 9) curve above the single-user one |
//! | `fig8b` | failure probability vs β, one AP vs two | two-AP column orders of magnitude below one-AP |
//! | `fig8c` | mean first-pass failures vs R_A, one AP | grows with R_A and β; closed form tracks simulation |
//! | `fig8d` | mean first-pass failures vs R_A, two APs | far below `fig8c` at equal R_A |
//! | `fig9a` | MD1 cycle time vs M, N_SF = 1 | decreases, then increases in M |
//! | `fig9b` | MD1–MD3 cycle time vs R_A, H = 3 | 41.3 ms; 21.6 / 22.8 ms at 100 m, 30 dB; MD2 29.4 ms at 35 dB |
//! | `fig9c` | MD4 cycle time vs R_A, H = 3 | 9.9 / 17.2 ms (K = 9 / 4) with CSI, 7.4 / 12.1 ms without |
//! | `fig10` | simulated cycle-time statistics, R_A = 100 m | MD2 21.1–21.9 ms (30 dB); MD4 H = 2 3.9–5.4 ms / 6.1–7.9 ms |
//! | `fig11` | RT-WiFi, Wi-Red and the MAC designs | RT-WiFi 15.9 / 29.7 ms; Wi-Red 36.5 / 54.6 ms |

use dwlan_core::sim::{Design, DesignOptions, TrialConfig};

use crate::spec::{Axes, Pins, Series, Study};

pub const PRESET_NAMES: [&str; 9] = [
    "fig8a", "fig8b", "fig8c", "fig8d", "fig9a", "fig9b", "fig9c", "fig10", "fig11",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub headline: &'static str,
    pub axes: Axes,
    pub series: Vec<Series>,
}

fn options(design: Design) -> DesignOptions {
    TrialConfig::preset(design, 30.0, 100.0).options
}

fn series(label: &str, design: Design, study: Study) -> Series {
    Series {
        label: label.to_owned(),
        design,
        study,
        options: options(design),
        pins: Pins::default(),
    }
}

fn with_pins(mut s: Series, pins: Pins) -> Series {
    s.pins = pins;
    s
}

fn with_options(mut s: Series, f: impl FnOnce(&mut DesignOptions)) -> Series {
    f(&mut s.options);
    s
}

fn range(from: f64, to: f64, step: f64) -> Vec<f64> {
    let n = ((to - from) / step).round() as usize;
    (0..=n).map(|i| from + step * i as f64).collect()
}

/// The preset called `name`, if any.
pub fn preset(name: &str) -> Option<Preset> {
    let single_user = Pins {
        k: Some(1),
        ..Pins::default()
    };
    let p = match name {
        "fig8a" => Preset {
            name: "fig8a",
            description: "average downlink outage vs SNR threshold at R_A = 50 m",
            headline: "multi-user (K = 9) outage above the single-user curve at every threshold",
            axes: Axes {
                beta_db: range(20.0, 50.0, 2.0),
                r_a: vec![50.0],
                ..Axes::default()
            },
            series: vec![
                with_pins(series("md1-3", Design::Md1, Study::DlOutage), single_user),
                series("md4", Design::Md4, Study::DlOutage),
            ],
        },
        "fig8b" => Preset {
            name: "fig8b",
            description: "failure probability vs SNR threshold through one AP and through both",
            headline: "the two-AP probability sits orders of magnitude below the one-AP one",
            axes: Axes {
                beta_db: range(20.0, 50.0, 2.0),
                ..Axes::default()
            },
            series: vec![with_pins(
                series("md1-3", Design::Md1, Study::FailureProbability),
                single_user,
            )],
        },
        "fig8c" => Preset {
            name: "fig8c",
            description: "mean first-pass failures of 100 stations vs cell radius, one AP",
            headline: "failures grow with radius and threshold; closed form tracks simulation",
            axes: Axes {
                beta_db: vec![30.0, 35.0],
                r_a: range(20.0, 160.0, 20.0),
                ..Axes::default()
            },
            series: vec![with_pins(
                series("rt-wifi", Design::RtWifi, Study::ExpectedFailures),
                single_user,
            )],
        },
        "fig8d" => Preset {
            name: "fig8d",
            description: "mean first-pass failures of 100 stations vs cell radius, two APs",
            headline: "far fewer failures than fig8c at the same radius",
            axes: Axes {
                beta_db: vec![30.0, 35.0],
                r_a: range(20.0, 160.0, 20.0),
                ..Axes::default()
            },
            series: vec![with_pins(
                series("md2", Design::Md2, Study::ExpectedFailures),
                single_user,
            )],
        },
        "fig9a" => Preset {
            name: "fig9a",
            description: "MAC Design 1 cycle time vs number of groups, one superframe",
            headline: "cycle time first decreases, then increases in M",
            axes: Axes {
                m: (1..=12).collect(),
                ..Axes::default()
            },
            series: vec![with_pins(
                series("md1", Design::Md1, Study::CycleTime),
                Pins {
                    n_sf: Some(1),
                    ..Pins::default()
                },
            )],
        },
        "fig9b" => Preset {
            name: "fig9b",
            description: "MAC Designs 1-3 cycle time vs cell radius, H = 3",
            headline: "MD1 41.3 ms; MD2 21.6 ms and MD3 22.8 ms at 100 m and 30 dB; MD2 29.4 ms at 35 dB",
            axes: Axes {
                beta_db: vec![30.0, 35.0],
                r_a: range(20.0, 150.0, 10.0),
                ..Axes::default()
            },
            series: vec![
                series("md1", Design::Md1, Study::CycleTime),
                series("md2", Design::Md2, Study::CycleTime),
                series("md3", Design::Md3, Study::CycleTime),
            ],
        },
        "fig9c" => Preset {
            name: "fig9c",
            description: "MAC Design 4 cycle time vs cell radius, H = 3, with and without CSI",
            headline: "at 100 m and 30 dB: 9.9 / 17.2 ms (K = 9 / 4) with CSI, 7.4 / 12.1 ms without; 14.1 ms with CSI at 35 dB",
            axes: Axes {
                beta_db: vec![30.0, 35.0],
                r_a: range(20.0, 150.0, 10.0),
                k: vec![4, 9],
                ..Axes::default()
            },
            series: vec![
                with_options(series("md4-csi", Design::Md4, Study::CycleTime), |o| o.with_csi = true),
                with_options(series("md4", Design::Md4, Study::CycleTime), |o| o.with_csi = false),
            ],
        },
        "fig10" => {
            let h = |h| Pins {
                h: Some(h),
                ..Pins::default()
            };
            Preset {
                name: "fig10",
                description: "simulated cycle-time distributions at R_A = 100 m",
                headline: "MD2 21.1-21.9 ms at 30 dB and 27-32.5 ms (median 29.4 ms) at 35 dB; MD4 K = 9, H = 2: 3.9-5.4 ms without CSI, 6.1-7.9 ms with",
                axes: Axes {
                    beta_db: vec![30.0, 35.0],
                    ..Axes::default()
                },
                series: vec![
                    with_pins(series("md2", Design::Md2, Study::Campaign), h(3)),
                    with_pins(series("md3", Design::Md3, Study::Campaign), h(3)),
                    with_pins(
                        with_options(series("md4", Design::Md4, Study::Campaign), |o| o.with_csi = false),
                        h(2),
                    ),
                    with_pins(
                        with_options(series("md4-csi", Design::Md4, Study::Campaign), |o| o.with_csi = true),
                        h(2),
                    ),
                ],
            }
        }
        "fig11" => {
            let h = |h| Pins {
                h: Some(h),
                ..Pins::default()
            };
            Preset {
                name: "fig11",
                description: "baselines against the MAC designs: cycle time and reliability",
                headline: "RT-WiFi 15.9 / 29.7 ms (single / in-slot retry); Wi-Red 36.5 / 54.6 ms (3 / 7 retries) and 94.7% at 30 dB",
                axes: Axes {
                    beta_db: vec![30.0, 35.0],
                    ..Axes::default()
                },
                series: vec![
                    series("rt-wifi", Design::RtWifi, Study::Campaign),
                    with_options(series("rt-wifi-retx", Design::RtWifi, Study::Campaign), |o| {
                        o.in_slot_retx = true
                    }),
                    with_options(series("wi-red-3", Design::WiRed, Study::Campaign), |o| o.max_mac_retx = 3),
                    with_options(series("wi-red-7", Design::WiRed, Study::Campaign), |o| o.max_mac_retx = 7),
                    series("md1", Design::Md1, Study::Campaign),
                    with_pins(series("md2", Design::Md2, Study::Campaign), h(3)),
                    with_pins(
                        with_options(series("md4-h2", Design::Md4, Study::Campaign), |o| o.with_csi = false),
                        h(2),
                    ),
                    with_pins(
                        with_options(series("md4-h4", Design::Md4, Study::Campaign), |o| o.with_csi = false),
                        h(4),
                    ),
                    with_pins(
                        with_options(series("md4-h4-csi", Design::Md4, Study::Campaign), |o| o.with_csi = true),
                        h(4),
                    ),
                ],
            }
        }
        _ => return None,
    };
    Some(p)
}
