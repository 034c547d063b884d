//! Monte-Carlo engine properties.

use dwlan_core::analytic::{
    cycle_time_md1, cycle_time_md2_realized, cycle_time_md3_realized, md4_schedule_span,
};
use dwlan_core::channel::instantaneous_outage;
use dwlan_core::mac::PcfHandler;
use dwlan_core::quadrature::integrate;
use dwlan_core::presets;
use dwlan_core::sim::{
    rt_wifi_cycle, run_campaign, run_rt_wifi, run_trial, run_trials, run_wi_red, Design, StatsSummary, TrialConfig,
};

fn config(design: Design, beta_db: f64, trials: u32) -> TrialConfig {
    TrialConfig {
        n_trials: trials,
        seed: 42,
        ..TrialConfig::preset(design, beta_db, 100.0)
    }
}

const DESIGNS: [Design; 4] = [Design::Md1, Design::Md2, Design::Md3, Design::Md4];

#[test]
fn zero_threshold_delivers_everything_in_the_failure_free_time() {
    for d in DESIGNS {
        let mut cfg = config(d, 30.0, 5);
        cfg.budget.snr_threshold = 0.0;
        for r in run_trials(&cfg).unwrap() {
            assert_eq!(r.reliability(), 1.0, "{d:?}");
            assert_eq!(r.initial_failures, 0);
            let expect = match d {
                Design::Md1 => cycle_time_md1(&cfg.protocol, &cfg.timing),
                Design::Md2 => cycle_time_md2_realized(&cfg.protocol, &cfg.timing, &r.pcf_frames),
                Design::Md3 => cycle_time_md3_realized(&cfg.protocol, &cfg.timing, true, &r.pcf_frames),
                _ => md4_schedule_span(&cfg.timing, r.ts.unwrap(), cfg.protocol.mu_rounds(), cfg.options.md4(), &[]),
            };
            assert!((r.cycle_time - expect).abs() < 1e-12, "{d:?}");
            // one empty PCF frame closes designs 2 and 3
            if matches!(d, Design::Md2 | Design::Md3) {
                assert_eq!(r.pcf_frames.len(), 1);
                assert_eq!(r.pcf_frames[0].polled, 0);
            }
        }
    }
}

#[test]
fn infinite_noise_delivers_nothing() {
    for d in DESIGNS {
        let mut cfg = config(d, 30.0, 3);
        cfg.env.sigma2 = 1e30;
        cfg.options.with_csi = false;
        if d == Design::Md4 {
            // the multi-user design cannot even pick an MCS; no payload fits
            assert!(run_trials(&cfg).is_err());
            continue;
        }
        for r in run_trials(&cfg).unwrap() {
            assert_eq!(r.reliability(), 0.0, "{d:?}");
        }
    }
}

#[test]
fn realized_cycle_times_equal_formulas() {
    for d in DESIGNS {
        for beta in [30.0, 35.0] {
            let cfg = config(d, beta, 40);
            for r in run_trials(&cfg).unwrap() {
                let f = match d {
                    Design::Md1 => cycle_time_md1(&cfg.protocol, &cfg.timing),
                    Design::Md2 => cycle_time_md2_realized(&cfg.protocol, &cfg.timing, &r.pcf_frames),
                    Design::Md3 => cycle_time_md3_realized(&cfg.protocol, &cfg.timing, true, &r.pcf_frames),
                    _ => md4_schedule_span(
                        &cfg.timing,
                        r.ts.unwrap(),
                        cfg.protocol.mu_rounds(),
                        cfg.options.md4(),
                        &r.md4_retx_rounds,
                    ),
                };
                assert!((r.cycle_time - f).abs() < 1e-12, "{d:?} β={beta}: {} vs {f}", r.cycle_time);
            }
        }
    }
}

#[test]
fn md1_is_a_point_mass() {
    let s = run_campaign(&config(Design::Md1, 35.0, 50)).unwrap();
    assert_eq!(s.cycle_time.cdf.len(), 1);
    assert_eq!(s.cycle_time.cdf[0].probability, 1.0);
}

#[test]
fn campaigns_ignore_thread_count() {
    let cfg = config(Design::Md2, 35.0, 24);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_trials(&cfg).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    let summary = |t: &[_]| serde_json_like(&StatsSummary::from_trials(t));
    assert_eq!(summary(&one), summary(&run(3)));
    let other_seed = run_trials(&TrialConfig { seed: 43, ..cfg.clone() }).unwrap();
    assert_ne!(one, other_seed);
}

/// Byte-level rendering used to compare summaries.
fn serde_json_like(s: &StatsSummary) -> String {
    format!("{s:?}")
}

#[test]
fn trial_streams_are_independent_of_order() {
    let cfg = config(Design::Md4, 35.0, 10);
    let forward: Vec<_> = (0..10).map(|i| run_trial(&cfg, i).unwrap()).collect();
    let backward: Vec<_> = (0..10).rev().map(|i| run_trial(&cfg, i).unwrap()).collect();
    assert!(forward.iter().eq(backward.iter().rev()));
}

fn pooled(cfg: &TrialConfig) -> f64 {
    run_campaign(cfg).unwrap().pooled_reliability
}

#[test]
fn reliability_orderings() {
    for d in [Design::Md2, Design::Md4] {
        let base = config(d, 30.0, 200);
        let harsher = config(d, 35.0, 200);
        assert!(pooled(&base) >= pooled(&harsher), "{d:?} β");
        let wide = TrialConfig {
            env: presets::radio_environment(130.0),
            ..base.clone()
        };
        assert!(pooled(&base) >= pooled(&wide), "{d:?} R_A");
        let mut h1 = harsher.clone();
        h1.protocol.max_retx_phases = 1;
        assert!(pooled(&harsher) >= pooled(&h1), "{d:?} H");
    }
}

#[test]
fn pcf_handlers_all_run() {
    for h in [PcfHandler::Primary, PcfHandler::Secondary, PcfHandler::Both] {
        let mut cfg = config(Design::Md2, 35.0, 20);
        cfg.options.pcf_handler = h;
        let trials = run_trials(&cfg).unwrap();
        for r in &trials {
            assert!(r.pcf_frames.iter().all(|f| h.aps().contains(&f.ap)));
            let f = cycle_time_md2_realized(&cfg.protocol, &cfg.timing, &r.pcf_frames);
            assert!((r.cycle_time - f).abs() < 1e-12);
        }
    }
}

#[test]
fn baselines_behave() {
    let mut cfg = config(Design::RtWifi, 35.0, 50);
    let plain = run_rt_wifi(&cfg).unwrap();
    assert_eq!(plain.cycle_time.min, rt_wifi_cycle(&cfg));
    cfg.options.in_slot_retx = true;
    let retx = run_rt_wifi(&cfg).unwrap();
    assert!(retx.pooled_reliability > plain.pooled_reliability);
    assert!(retx.cycle_time.min > plain.cycle_time.min);

    cfg.budget.snr_threshold = 0.0;
    assert_eq!(run_rt_wifi(&cfg).unwrap().pooled_reliability, 1.0);
    assert_eq!(run_wi_red(&cfg).unwrap().pooled_reliability, 1.0);
}

#[test]
fn wi_red_duplicate_discard_is_one_minus_p_squared() {
    // one station, one attempt per direction, equal power on every link:
    // a direction is lost only when both copies are, so delivery at distance
    // r is (1 − p(r)²)², averaged over the disc
    let mut cfg = config(Design::WiRed, 30.0, 40_000);
    cfg.protocol.n_stations = 1;
    cfg.options.max_mac_retx = 0;
    cfg.budget.sta_tx_power_w = cfg.budget.pap_tx_power_w;
    cfg.env.sigma2 = 2e-12;
    let (env, budget) = (cfg.env, cfg.budget);
    let outage = |r: f64| instantaneous_outage(r, budget.pap_tx_power_w, &env, budget.snr_threshold).unwrap();
    let radius = env.cell_radius;
    let expect = integrate(
        |r| 2.0 * r / (radius * radius) * (1.0 - outage(r).powi(2)).powi(2),
        0.0,
        radius,
        1e-12,
        1000,
    )
    .unwrap()
    .value;
    assert!(expect < 0.9, "regime should be lossy, got {expect}");
    let s = run_wi_red(&cfg).unwrap();
    let se = (expect * (1.0 - expect) / 40_000.0).sqrt();
    assert!((s.pooled_reliability - expect).abs() <= 3.0 * se, "{} vs {expect}", s.pooled_reliability);
}
