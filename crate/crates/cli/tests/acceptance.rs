//! Acceptance report: one line per criterion, pinned tolerances.
//!
//! Runs without the libtest harness so every line is printed on a green run
//! too. Baseline comparisons print `FLAG` instead of failing; every other
//! criterion exits non-zero on `FAIL`.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use dwlan_cli::{execute, plan, ExperimentSpec};
use dwlan_core::analytic::{
    cell_edge_ts, cycle_time_md1, cycle_time_md2, cycle_time_md2_realized, cycle_time_md3, cycle_time_md3_realized,
    cycle_time_md4, expected_failures, md4_schedule_span, p_fail, residual_failures, FailureModel,
};
use dwlan_core::channel::{
    average_outage, instantaneous_outage, neighbor_distance_pdf, sample_distance, transmission_succeeds,
    RadioEnvironment,
};
use dwlan_core::mac::ts::{compute_ts_fixed, compute_ts_variable, CsiReportSet};
use dwlan_core::mac::{build_md1_superframes, build_md3_raws, build_md4_cycle_with_ts, Md1Options};
use dwlan_core::presets;
use dwlan_core::protocol::{
    association_replay, assign_groups, ApRole, AssocEvent, FrameKind, Node, StationId, Timeline,
};
use dwlan_core::quadrature::integrate;
use dwlan_core::sim::{run_campaign, run_trials, Design, StatsSummary, TrialConfig};
use dwlan_core::units::{db_to_linear, watts_to_dbm};

const SEED: u64 = 1;
const R_A: f64 = 100.0;
const MS: f64 = 1e-3;

const MD1_TOL: f64 = 0.05;
const ANALYTIC_TOL: f64 = 0.10;
const BAND_WIDEN: f64 = 0.10;
const MEDIAN_TOL_MS: f64 = 0.5;
const RELIABILITY_FLOOR: f64 = 0.995;
const RELIABILITY_TRIALS: u32 = 1000;
const BASELINE_TIME_TOL: f64 = 0.10;
const BASELINE_POINTS: f64 = 0.03;
const IDENTITY_TOL: f64 = 1e-12;
const CAMPAIGN_BUDGET: Duration = Duration::from_secs(60);

#[derive(Clone, Copy, PartialEq)]
enum Verdict {
    Pass,
    Fail,
    Flag,
}

#[derive(Default)]
struct Report {
    lines: Vec<(Verdict, String)>,
}

impl Report {
    fn check(&mut self, id: &str, ok: bool, what: String) {
        let v = if ok { Verdict::Pass } else { Verdict::Fail };
        self.push(v, id, what);
    }

    /// Soft check: a miss asks for a calibration review.
    fn soft(&mut self, id: &str, ok: bool, what: String) {
        let v = if ok { Verdict::Pass } else { Verdict::Flag };
        self.push(v, id, what);
    }

    fn push(&mut self, v: Verdict, id: &str, what: String) {
        let tag = match v {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Flag => "FLAG",
        };
        println!("[{tag}] {id:4} {what}");
        self.lines.push((v, what));
    }

    fn count(&self, v: Verdict) -> usize {
        self.lines.iter().filter(|(x, _)| *x == v).count()
    }
}

fn within(value: f64, target: f64, rel: f64) -> bool {
    (value - target).abs() <= rel * target
}

fn rel_text(value: f64, target: f64) -> String {
    format!("{:+.1}%", 100.0 * (value / target - 1.0))
}

fn sim(design: Design, beta_db: f64, trials: u32, tweak: impl FnOnce(&mut TrialConfig)) -> (StatsSummary, Duration) {
    let mut cfg = TrialConfig::preset(design, beta_db, R_A);
    cfg.seed = SEED;
    cfg.n_trials = trials;
    tweak(&mut cfg);
    let t0 = Instant::now();
    let s = run_campaign(&cfg).expect("campaign runs");
    (s, t0.elapsed())
}

fn criterion_1(r: &mut Report) {
    let t0 = Instant::now();
    let cfg = presets::protocol_config();
    let analytic = cycle_time_md1(&cfg, &presets::timing());
    let (s, _) = sim(Design::Md1, 30.0, 100, |_| {});
    let elapsed = t0.elapsed();
    r.check(
        "1a",
        within(analytic, 41.3 * MS, MD1_TOL),
        format!(
            "MD1 analytic cycle time N=100 M=4 N_SF=2: {:.3} ms vs 41.3 ms ± 5% ({})",
            analytic / MS,
            rel_text(analytic, 41.3 * MS)
        ),
    );
    let spread = (s.cycle_time.max - analytic).abs().max((s.cycle_time.min - analytic).abs());
    r.check(
        "1b",
        spread < IDENTITY_TOL,
        format!("MD1 simulated CDF is a point mass at the analytic value: max deviation {spread:.1e} s over 100 trials"),
    );
    r.check(
        "1c",
        elapsed < Duration::from_secs(1),
        format!("MD1 analytic + 100-trial campaign runtime {:.3} s < 1 s", elapsed.as_secs_f64()),
    );
}

fn analytic_failure(beta_db: f64, k: u32) -> FailureModel {
    p_fail(&presets::radio_environment(R_A), &presets::link_budget(beta_db), k).unwrap()
}

fn criterion_2(r: &mut Report) {
    let cfg = presets::protocol_config();
    let t = presets::timing();
    for (id, label, beta, target, value) in [
        ("2a", "MD2", 30.0, 21.6, cycle_time_md2(&cfg, &t, &analytic_failure(30.0, 1))),
        ("2b", "MD3", 30.0, 22.8, cycle_time_md3(&cfg, &t, &analytic_failure(30.0, 1), true)),
        ("2c", "MD2", 35.0, 29.4, cycle_time_md2(&cfg, &t, &analytic_failure(35.0, 1))),
    ] {
        r.check(
            id,
            within(value, target * MS, ANALYTIC_TOL),
            format!(
                "{label} analytic β={beta} dB R_A=100 m H=3: {:.2} ms vs {target} ms ± 10% ({})",
                value / MS,
                rel_text(value, target * MS)
            ),
        );
    }
}

fn criterion_3(r: &mut Report) {
    let t = presets::timing();
    let env = presets::radio_environment(R_A);
    let mcs = presets::mcs_table();
    let cases = [
        ("3a", 30.0, 9, true, 9.9),
        ("3b", 30.0, 4, true, 17.2),
        ("3c", 30.0, 9, false, 7.4),
        ("3d", 30.0, 4, false, 12.1),
        ("3e", 35.0, 9, true, 14.1),
    ];
    for (id, beta, k, csi, target) in cases {
        let cfg = dwlan_core::params::ProtocolConfig {
            mu_group_size: k,
            ..presets::protocol_config()
        };
        let budget = presets::link_budget(beta);
        let ts = cell_edge_ts(&cfg, &t, &env, &budget, &mcs).unwrap();
        let value = cycle_time_md4(&cfg, &t, &analytic_failure(beta, k), csi, ts);
        r.check(
            id,
            within(value, target * MS, ANALYTIC_TOL),
            format!(
                "MD4 analytic β={beta} dB K={k} {}: {:.2} ms vs {target} ms ± 10% ({})",
                if csi { "with CSI" } else { "without CSI" },
                value / MS,
                rel_text(value, target * MS)
            ),
        );
    }
}

fn band_check(r: &mut Report, id: &str, label: &str, s: &StatsSummary, lo: f64, hi: f64, took: Duration) {
    let (lo_w, hi_w) = (lo * (1.0 - BAND_WIDEN), hi * (1.0 + BAND_WIDEN));
    let (min, max) = (s.cycle_time.min / MS, s.cycle_time.max / MS);
    r.check(
        id,
        min >= lo_w && max <= hi_w && took < CAMPAIGN_BUDGET,
        format!(
            "{label}: 100 trials span {min:.2}-{max:.2} ms within [{lo_w:.2}, {hi_w:.2}] ms ({lo}-{hi} ms ± 10%), {:.2} s",
            took.as_secs_f64()
        ),
    );
}

fn criterion_4(r: &mut Report) {
    let (s, took) = sim(Design::Md2, 30.0, 100, |_| {});
    band_check(r, "4a", "MD2 β=30 dB", &s, 21.1, 21.9, took);
    let (s, took) = sim(Design::Md2, 35.0, 100, |_| {});
    band_check(r, "4b", "MD2 β=35 dB", &s, 27.0, 32.5, took);
    let median = s.cycle_time.p50 / MS;
    r.check(
        "4c",
        (median - 29.4).abs() <= MEDIAN_TOL_MS,
        format!("MD2 β=35 dB median {median:.2} ms vs 29.4 ± 0.5 ms"),
    );
    let h2 = |csi: bool| {
        move |c: &mut TrialConfig| {
            c.protocol.max_retx_phases = 2;
            c.options.with_csi = csi;
        }
    };
    let (s, took) = sim(Design::Md4, 30.0, 100, h2(false));
    band_check(r, "4d", "MD4 K=9 H=2 without CSI", &s, 3.9, 5.4, took);
    let (s, took) = sim(Design::Md4, 30.0, 100, h2(true));
    band_check(r, "4e", "MD4 K=9 H=2 with CSI", &s, 6.1, 7.9, took);
}

fn criterion_5(r: &mut Report) {
    for (id, design) in [("5a", Design::Md2), ("5b", Design::Md4)] {
        let (s, _) = sim(design, 30.0, 100, |_| {});
        r.check(
            id,
            s.reliability.p90 == 1.0,
            format!(
                "{} β=30 dB 90th-percentile reliability {:.1}% (mean {:.2}%) vs 100%",
                design.name(),
                100.0 * s.reliability.p90,
                100.0 * s.reliability.mean
            ),
        );
    }
    for (id, design) in [("5c", Design::Md2), ("5d", Design::Md4)] {
        let (s, _) = sim(design, 30.0, RELIABILITY_TRIALS, |_| {});
        r.check(
            id,
            s.pooled_reliability >= RELIABILITY_FLOOR,
            format!(
                "{} β=30 dB R_A=100 m pooled reliability over {RELIABILITY_TRIALS} trials {:.3}% >= 99.5% (headline 99.75%)",
                design.name(),
                100.0 * s.pooled_reliability
            ),
        );
    }
}

fn criterion_6(r: &mut Report) {
    let retx = |on: bool| move |c: &mut TrialConfig| c.options.in_slot_retx = on;
    for (id, on, target) in [("6a", false, 15.9), ("6b", true, 29.7)] {
        let (s, _) = sim(Design::RtWifi, 35.0, 100, retx(on));
        let v = s.cycle_time.mean;
        r.soft(
            id,
            within(v, target * MS, BASELINE_TIME_TOL),
            format!(
                "RT-WiFi{} cycle time {:.2} ms vs {target} ms ± 10% ({})",
                if on { " with in-slot retry" } else { "" },
                v / MS,
                rel_text(v, target * MS)
            ),
        );
    }
    for (id, beta, on, target) in [
        ("6c", 35.0, false, 0.308),
        ("6d", 35.0, true, 0.509),
        ("6e", 30.0, false, 0.777),
        ("6f", 30.0, true, 0.924),
    ] {
        let (s, _) = sim(Design::RtWifi, beta, 100, retx(on));
        let v = s.reliability.p90;
        r.soft(
            id,
            (v - target).abs() <= BASELINE_POINTS,
            format!(
                "RT-WiFi{} β={beta} dB 90th-percentile reliability {:.1}% vs {:.1}% ± 3 points",
                if on { " with in-slot retry" } else { "" },
                100.0 * v,
                100.0 * target
            ),
        );
    }
    for (id, n, target) in [("6g", 3, 36.5), ("6h", 7, 54.6)] {
        let (s, _) = sim(Design::WiRed, 35.0, 100, |c| c.options.max_mac_retx = n);
        let v = s.cycle_time.mean;
        r.soft(
            id,
            within(v, target * MS, BASELINE_TIME_TOL),
            format!(
                "Wi-Red {n} retries β=35 dB mean cycle time {:.2} ms vs {target} ms ± 10% ({})",
                v / MS,
                rel_text(v, target * MS)
            ),
        );
    }
    let (s, _) = sim(Design::WiRed, 30.0, 100, |c| c.options.max_mac_retx = 3);
    r.soft(
        "6i",
        (s.reliability.mean - 0.947).abs() <= BASELINE_POINTS,
        format!(
            "Wi-Red 3 retries β=30 dB mean reliability {:.1}% vs 94.7% ± 3 points",
            100.0 * s.reliability.mean
        ),
    );
}

fn binomial_pmf(n: u32, k: u32, p: f64) -> f64 {
    let c = (0..k).fold(1.0, |c, i| c * (n - i) as f64 / (i + 1) as f64);
    c * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
}

fn binomial_mean_by_sum(n: u32, p: f64) -> f64 {
    (0..=n).map(|k| k as f64 * binomial_pmf(n, k, p)).sum()
}

fn data_pairs(tl: &Timeline, ap: ApRole) -> Vec<(StationId, bool)> {
    let mut v: Vec<_> = tl
        .events()
        .iter()
        .filter(|e| e.kind == FrameKind::Data)
        .filter_map(|e| match (e.src, e.dst) {
            (Node::Ap(a), Node::Sta(s)) if a == ap => Some((s, true)),
            (Node::Sta(s), Node::Ap(a)) if a == ap => Some((s, false)),
            _ => None,
        })
        .collect();
    v.sort();
    v
}

fn criterion_7(r: &mut Report) {
    let env = presets::radio_environment(R_A);
    let mut rng = TrialConfig::preset(Design::Md1, 30.0, R_A).rng(7);

    // single-link outage against Bernoulli draws
    let (dist, power, beta) = (70.0, 0.2, db_to_linear(35.0));
    let p = instantaneous_outage(dist, power, &env, beta).unwrap();
    let n = 1_000_000;
    let fails = (0..n).filter(|_| !transmission_succeeds(dist, power, &env, beta, &mut rng)).count();
    let observed = fails as f64 / n as f64;
    let se = (p * (1.0 - p) / n as f64).sqrt();
    r.check(
        "7a",
        (observed - p).abs() < 3.0 * se,
        format!("link outage Monte-Carlo {observed:.5} vs closed form {p:.5}, |Δ| < 3σ = {:.5}", 3.0 * se),
    );

    // order-statistic distance pdf normalization
    let worst = (1..=12)
        .map(|k| {
            let q = integrate(|x| neighbor_distance_pdf(x, k, 12, R_A).unwrap(), 0.0, R_A, 1e-10, 2000).unwrap();
            (q.value - 1.0).abs()
        })
        .fold(0.0, f64::max);
    r.check("7b", worst < 1e-6, format!("distance pdf integrates to 1 for ranks 1..12: worst error {worst:.1e} < 1e-6"));

    // averaged outage against 1e7 uniform-disc samples, ζ = 1e-9
    let e = RadioEnvironment::new(4.0, 1.0, 1e-12, R_A).unwrap();
    let analytic = average_outage(1e-3, &e, 1.0).unwrap();
    let samples = 10_000_000u64;
    let (mut sum, mut sum2) = (0.0, 0.0);
    for _ in 0..samples {
        let x = sample_distance(R_A, &mut rng);
        let v = -(-1e-9 * x.powi(4)).exp_m1();
        sum += v;
        sum2 += v * v;
    }
    let mean = sum / samples as f64;
    let se = ((sum2 / samples as f64 - mean * mean) / samples as f64).sqrt();
    r.check(
        "7c",
        (analytic - mean).abs() < 3.0 * se,
        format!("averaged outage quadrature {analytic:.6} vs 1e7-sample mean {mean:.6}, |Δ| < 3 SE = {:.1e}", 3.0 * se),
    );

    // binomial sums against closed-form means
    let mut worst: f64 = 0.0;
    for n in 0..=20u32 {
        for p in [0.0, 0.01, 0.1, 0.3, 0.5, 0.77, 1.0] {
            worst = worst.max((binomial_mean_by_sum(n, p) - expected_failures(n as f64, p)).abs());
            let two_stage: f64 = (0..=n).map(|k| binomial_pmf(n, k, p) * binomial_mean_by_sum(k, p)).sum();
            worst = worst.max((two_stage - residual_failures(expected_failures(n as f64, p), p)).abs());
        }
    }
    r.check("7d", worst < 1e-12, format!("binomial sums vs closed-form means, N <= 20: worst {worst:.1e} < 1e-12"));

    // builder spans equal the formulas; simulated cycles equal realized identities
    let t = presets::timing();
    let cfg = presets::protocol_config();
    let md1 = build_md1_superframes(&cfg, &t, &assign_groups(100, 4), Md1Options::default()).unwrap();
    let mut span_err = (md1.end() - cycle_time_md1(&cfg, &t)).abs();
    for design in [Design::Md2, Design::Md3, Design::Md4] {
        for beta in [30.0, 35.0] {
            let mut c = TrialConfig::preset(design, beta, R_A);
            c.n_trials = 30;
            for tr in run_trials(&c).unwrap() {
                let f = match design {
                    Design::Md2 => cycle_time_md2_realized(&c.protocol, &c.timing, &tr.pcf_frames),
                    Design::Md3 => cycle_time_md3_realized(&c.protocol, &c.timing, true, &tr.pcf_frames),
                    _ => md4_schedule_span(
                        &c.timing,
                        tr.ts.unwrap(),
                        c.protocol.mu_rounds(),
                        c.options.md4(),
                        &tr.md4_retx_rounds,
                    ),
                };
                span_err = span_err.max((tr.cycle_time - f).abs());
            }
        }
    }
    r.check(
        "7e",
        span_err < IDENTITY_TOL,
        format!("builder span = formula (MD1 builder, MD2-MD4 simulated cycles): worst {span_err:.1e} s < 1e-12 s"),
    );

    // non-overlap
    let md3 = build_md3_raws(&cfg, &t, &assign_groups(100, 4), true).unwrap().timeline;
    let stations: Vec<StationId> = (0..100).map(StationId).collect();
    let md4 = build_md4_cycle_with_ts(&cfg, &t, &stations, 106e-6, TrialConfig::preset(Design::Md4, 30.0, R_A).options.md4())
        .unwrap()
        .timeline;
    let overlaps: Vec<String> = [&md1, &md3, &md4]
        .iter()
        .filter_map(|tl| tl.check_non_overlap().err().map(|e| e.to_string()))
        .collect();
    r.check("7f", overlaps.is_empty(), format!("MD1/MD3/MD4 timelines have no overlapping transmissions {overlaps:?}"));

    // redundancy twins
    let twins = data_pairs(&md1, ApRole::Primary) == data_pairs(&md1, ApRole::Secondary)
        && data_pairs(&md1, ApRole::Primary).len() == 2 * 100 * 2;
    r.check("7g", twins, "MD1 every P-AP exchange has its S-AP twin (100 stations, 2 superframes)".into());

    // variable-payload Ts with equal payloads
    let mut mismatch = 0;
    for trial in 0..200u32 {
        let reports: CsiReportSet = (0..9)
            .map(|i| (StationId(i), db_to_linear(5.0 + ((trial * 7 + i * 13) % 17) as f64)))
            .collect();
        let bits = 200 + trial * 17;
        let payloads: BTreeMap<_, _> = reports.keys().map(|&s| (s, bits)).collect();
        let fixed = compute_ts_fixed(bits, &reports, &presets::mcs_table(), 2.22e6).unwrap();
        let var = compute_ts_variable(&payloads, &reports, &presets::mcs_table(), 2.22e6).unwrap();
        if fixed != var.ts {
            mismatch += 1;
        }
    }
    r.check("7h", mismatch == 0, format!("variable-payload Ts equals fixed-payload Ts on equal payloads: {mismatch}/200 mismatches"));

    // seed determinism of a campaign and of a CLI run
    let render = |s: &StatsSummary| format!("{s:?}");
    let c = TrialConfig::preset(Design::Md4, 35.0, R_A);
    let same = render(&run_campaign(&c).unwrap()) == render(&run_campaign(&c).unwrap());
    let spec = ExperimentSpec {
        trials: 20,
        ..ExperimentSpec::from_preset("fig10")
    };
    let rows = |s: &ExperimentSpec| dwlan_cli::render(&execute(&plan(s).unwrap()).unwrap(), s.format).unwrap();
    let same_cli = rows(&spec) == rows(&spec);
    r.check("7i", same && same_cli, "same seed gives byte-identical campaign summaries and CLI output".into());

    // association golden trace
    let events = [
        AssocEvent::Beacon(ApRole::Primary),
        AssocEvent::Beacon(ApRole::Secondary),
        AssocEvent::AuthResponse,
        AssocEvent::Associate { frame_duration: 10.5e-3 },
        AssocEvent::AssocResponse { ttt: 21e-3 },
        AssocEvent::AssociationShared,
        AssocEvent::Reassociate,
        AssocEvent::ReassocResponse,
        AssocEvent::Data,
    ];
    let (_, trace) = association_replay(StationId(7), &events).unwrap();
    let golden = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden/association_happy_path.trace");
    let expected = std::fs::read_to_string(&golden).unwrap_or_default();
    r.check("7j", trace == expected, "dual-association replay matches its golden trace".into());
}

fn criterion_8(r: &mut Report) {
    let report = execute(&plan(&ExperimentSpec::from_preset("fig9a")).unwrap()).unwrap();
    let v: Vec<f64> = report.select("md1", "cycle_time_s").map(|row| row.value).collect();
    let argmin = (0..v.len()).min_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap();
    let quasi_convex = v.len() == 12
        && argmin > 0
        && argmin + 1 < v.len()
        && v[..=argmin].windows(2).all(|w| w[1] < w[0])
        && v[argmin..].windows(2).all(|w| w[1] > w[0]);
    r.check(
        "8",
        quasi_convex,
        format!(
            "fig9a MD1 cycle time vs M=1..12 (N_SF=1) decreases to {:.2} ms at M={} then increases (M=1: {:.2} ms, M=12: {:.2} ms)",
            v[argmin] / MS,
            argmin + 1,
            v[0] / MS,
            v[v.len() - 1] / MS
        ),
    );
}

fn main() {
    let start = Instant::now();
    println!(
        "acceptance: noise power σ² = {:.3e} W ({:.2} dBm), T_B = {:.3} µs, R_A = {R_A} m, seed {SEED}",
        presets::NOISE_POWER_W,
        watts_to_dbm(presets::NOISE_POWER_W),
        presets::BEACON_S * 1e6
    );
    let mut r = Report::default();
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);
    criterion_4(&mut r);
    criterion_5(&mut r);
    criterion_6(&mut r);
    criterion_7(&mut r);
    criterion_8(&mut r);
    println!(
        "acceptance: {} pass, {} fail, {} flag in {:.1} s",
        r.count(Verdict::Pass),
        r.count(Verdict::Fail),
        r.count(Verdict::Flag),
        start.elapsed().as_secs_f64()
    );
    if r.count(Verdict::Fail) > 0 {
        std::process::exit(1);
    }
}
