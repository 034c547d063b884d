//! Statistical oracles for the channel model.

use dwlan_core::channel::{
    average_outage, instantaneous_outage, neighbor_distance_pdf, sample_distance, sample_fading,
    transmission_succeeds, RadioEnvironment,
};
use dwlan_core::quadrature::integrate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn env(sigma2: f64, radius: f64) -> RadioEnvironment {
    RadioEnvironment::new(4.0, 1.0, sigma2, radius).unwrap()
}

#[test]
fn link_failure_rate_matches_closed_form() {
    let e = env(2e-13, 100.0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 1_000_000;
    for (r, beta_db) in [(50.0, 30.0), (80.0, 30.0), (70.0, 35.0)] {
        let beta = 10f64.powf(beta_db / 10.0);
        let p = instantaneous_outage(r, 0.2, &e, beta).unwrap();
        let fails = (0..n).filter(|_| !transmission_succeeds(r, 0.2, &e, beta, &mut rng)).count();
        let observed = fails as f64 / n as f64;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((observed - p).abs() < 3.0 * se, "r={r} β={beta_db}: {observed} vs {p} (se {se})");
    }
}

#[test]
fn distance_pdf_normalizes_for_every_rank() {
    let n_total = 12;
    for n in 1..=n_total {
        let q = integrate(|r| neighbor_distance_pdf(r, n, n_total, 100.0).unwrap(), 0.0, 100.0, 1e-10, 2000).unwrap();
        assert!((q.value - 1.0).abs() < 1e-6, "n={n}: {}", q.value);
    }
}

#[test]
fn average_outage_matches_monte_carlo() {
    // ζ = μβσ²/P = 1e-9 with α = 4, R_A = 100
    let e = env(1e-12, 100.0);
    let (power, beta) = (1e-3, 1.0);
    assert!((e.zeta(power, beta) - 1e-9).abs() < 1e-24);
    let analytic = average_outage(power, &e, beta).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 10_000_000u64;
    let (mut sum, mut sum2) = (0.0, 0.0);
    for _ in 0..n {
        let r = sample_distance(100.0, &mut rng);
        let v = -(-1e-9 * r.powi(4)).exp_m1();
        sum += v;
        sum2 += v * v;
    }
    let mean = sum / n as f64;
    let se = ((sum2 / n as f64 - mean * mean) / n as f64).sqrt();
    assert!((analytic - mean).abs() < 3.0 * se, "{analytic} vs {mean} ± {se}");
}

#[test]
fn fading_mean_and_ks_statistic() {
    let e = env(2e-13, 100.0);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 1_000_000;
    let mut draws: Vec<f64> = (0..n).map(|_| sample_fading(&e, &mut rng)).collect();
    let mean = draws.iter().sum::<f64>() / n as f64;
    assert!((mean - 1.0).abs() < 0.01, "{mean}");

    draws.sort_by(f64::total_cmp);
    let ks = draws
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = -(-x).exp_m1();
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            (cdf - lo).abs().max((hi - cdf).abs())
        })
        .fold(0.0, f64::max);
    assert!(ks < 0.005, "KS {ks}");
}

#[test]
fn same_seed_same_fading_sequence() {
    let e = env(2e-13, 100.0);
    let draw = |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..64).map(|_| sample_fading(&e, &mut rng)).collect::<Vec<_>>()
    };
    assert_eq!(draw(9), draw(9));
    assert_ne!(draw(9), draw(10));
    let mut a = ChaCha8Rng::seed_from_u64(1);
    let mut b = ChaCha8Rng::seed_from_u64(1);
    assert_eq!(a.random::<u64>(), b.random::<u64>());
}
