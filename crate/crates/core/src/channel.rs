//! Link-level stochastic channel: path loss, Rayleigh fading and outage.
//!
//! A link of length `r` succeeds when `P·|h|²·r^{-α}/σ² > β`, with `|h|²`
//! exponentially distributed (mean `1/μ`). Averages over station position
//! assume stations uniformly distributed in a disc of radius `R_A` around
//! the co-located access points.

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};
use statrs::function::beta::ln_beta;

use crate::error::{finite, invalid, Result};
use crate::quadrature;

/// Absolute tolerance used for the position-averaged outage integral.
pub const AVERAGE_OUTAGE_TOL: f64 = 1e-9;
const MAX_INTERVALS: usize = 4096;

/// Propagation and noise parameters shared by every link in the cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioEnvironment {
    /// Path-loss exponent.
    pub alpha: f64,
    /// Fading-rate parameter; mean of `|h|²` is `1/mu`.
    pub mu: f64,
    /// Noise power in watts.
    pub sigma2: f64,
    /// Coverage radius `R_A` in meters.
    pub cell_radius: f64,
}

impl RadioEnvironment {
    pub fn new(alpha: f64, mu: f64, sigma2: f64, cell_radius: f64) -> Result<Self> {
        let env = Self {
            alpha,
            mu,
            sigma2,
            cell_radius,
        };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("mu", self.mu),
            ("sigma2", self.sigma2),
            ("cell_radius", self.cell_radius),
        ] {
            if !(finite(name, v)? > 0.0) {
                return Err(invalid(name, format!("must be > 0, got {v}")));
            }
        }
        Ok(())
    }

    /// `ζ = μβσ²/P`, the exponent scale of the outage law.
    pub fn zeta(&self, tx_power: f64, beta: f64) -> f64 {
        self.mu * beta * self.sigma2 / tx_power
    }

    /// Mean SNR at distance `r` (fading averaged out).
    pub fn mean_snr(&self, r: f64, tx_power: f64) -> f64 {
        tx_power * r.powf(-self.alpha) / (self.mu * self.sigma2)
    }
}

/// Transmit powers of both AP roles and of the stations, plus the SNR
/// threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub pap_tx_power_w: f64,
    pub sap_tx_power_w: f64,
    pub sta_tx_power_w: f64,
    /// Linear SNR threshold β.
    pub snr_threshold: f64,
}

impl LinkBudget {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("pap_tx_power_w", self.pap_tx_power_w),
            ("sap_tx_power_w", self.sap_tx_power_w),
            ("sta_tx_power_w", self.sta_tx_power_w),
        ] {
            if !(finite(name, v)? > 0.0) {
                return Err(invalid(name, format!("must be > 0, got {v}")));
            }
        }
        if !(finite("snr_threshold", self.snr_threshold)? >= 0.0) {
            return Err(invalid("snr_threshold", "must be >= 0"));
        }
        Ok(())
    }
}

fn check_power_beta(tx_power: f64, beta: f64) -> Result<()> {
    if !(finite("tx_power", tx_power)? > 0.0) {
        return Err(invalid("tx_power", format!("must be > 0, got {tx_power}")));
    }
    if !(finite("beta", beta)? >= 0.0) {
        return Err(invalid("beta", format!("must be >= 0, got {beta}")));
    }
    Ok(())
}

/// Outage probability of a single transmission over distance `r`:
/// `1 − exp(−μβσ² r^α / P)`.
pub fn instantaneous_outage(r: f64, tx_power: f64, env: &RadioEnvironment, beta: f64) -> Result<f64> {
    if !(finite("r", r)? >= 0.0) {
        return Err(invalid("r", format!("must be >= 0, got {r}")));
    }
    check_power_beta(tx_power, beta)?;
    env.validate()?;
    let x = env.zeta(tx_power, beta) * r.powf(env.alpha);
    Ok(-(-x).exp_m1())
}

/// Density of the distance to the `n`th nearest of `n_total` stations
/// uniformly placed in a disc of radius `cell_radius`.
pub fn neighbor_distance_pdf(r: f64, n: u32, n_total: u32, cell_radius: f64) -> Result<f64> {
    if n_total == 0 || n == 0 || n > n_total {
        return Err(invalid("n", format!("need 1 <= n <= n_total, got n={n}, n_total={n_total}")));
    }
    if !(finite("cell_radius", cell_radius)? > 0.0) {
        return Err(invalid("cell_radius", "must be > 0"));
    }
    if !(finite("r", r)? >= 0.0 && r <= cell_radius) {
        return Err(invalid("r", format!("must lie in [0, {cell_radius}], got {r}")));
    }
    let x = (r / cell_radius).powi(2);
    let a = n_total - n + 1;
    let b = n;
    let shape = (1.0 - x).powi((a - 1) as i32) * x.powi((b - 1) as i32);
    let norm = (-ln_beta(a as f64, b as f64)).exp();
    Ok(shape * norm * 2.0 * r / (cell_radius * cell_radius))
}

/// Outage averaged over a uniform station position in the cell:
/// `(2/R²)∫₀^R r(1 − e^{−ζ r^α}) dr`.
pub fn average_outage(tx_power: f64, env: &RadioEnvironment, beta: f64) -> Result<f64> {
    check_power_beta(tx_power, beta)?;
    env.validate()?;
    // substitute u = r/R so the integral lives on [0, 1]
    let scale = env.zeta(tx_power, beta) * env.cell_radius.powf(env.alpha);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let alpha = env.alpha;
    let q = quadrature::integrate(
        |u| 2.0 * u * -(-scale * u.powf(alpha)).exp_m1(),
        0.0,
        1.0,
        AVERAGE_OUTAGE_TOL,
        MAX_INTERVALS,
    )?;
    Ok(q.value.clamp(0.0, 1.0))
}

/// Outage of a `k`-user multi-user transmission: `1 − (1 − p)^k`.
pub fn mu_average_outage(per_user_outage: f64, k: u32) -> Result<f64> {
    if !(finite("per_user_outage", per_user_outage)? >= 0.0 && per_user_outage <= 1.0) {
        return Err(invalid("per_user_outage", format!("must lie in [0, 1], got {per_user_outage}")));
    }
    if k == 0 {
        return Err(invalid("k", "must be >= 1"));
    }
    Ok(-((k as f64) * (-per_user_outage).ln_1p()).exp_m1())
}

/// Draws a Rayleigh power gain `|h|²` (exponential, mean `1/μ`).
pub fn sample_fading<R: Rng + ?Sized>(env: &RadioEnvironment, rng: &mut R) -> f64 {
    Exp::new(env.mu)
        .expect("mu validated positive")
        .sample(rng)
}

/// Fading gain a transmission must exceed to clear the threshold.
///
/// Zero at `r = 0` or `β = 0`, where every transmission succeeds.
pub fn fading_threshold(r: f64, tx_power: f64, env: &RadioEnvironment, beta: f64) -> f64 {
    beta * env.sigma2 * r.powf(env.alpha) / tx_power
}

/// One transmission attempt with a fresh fading draw.
///
/// The SNR is infinite at `r = 0` and the link always succeeds there.
pub fn transmission_succeeds<R: Rng + ?Sized>(
    r: f64,
    tx_power: f64,
    env: &RadioEnvironment,
    beta: f64,
    rng: &mut R,
) -> bool {
    let threshold = fading_threshold(r, tx_power, env, beta);
    let gain = sample_fading(env, rng);
    threshold <= 0.0 || gain > threshold
}

/// Success test for an already drawn fading gain.
pub fn snr_exceeds(r: f64, tx_power: f64, gain: f64, env: &RadioEnvironment, beta: f64) -> bool {
    if r == 0.0 || beta == 0.0 {
        return true;
    }
    tx_power * gain * r.powf(-env.alpha) / env.sigma2 > beta
}

/// Distance of a station placed uniformly in the disc.
pub fn sample_distance<R: Rng + ?Sized>(cell_radius: f64, rng: &mut R) -> f64 {
    cell_radius * rng.random::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn env(sigma2: f64) -> RadioEnvironment {
        RadioEnvironment::new(4.0, 1.0, sigma2, 100.0).unwrap()
    }

    #[test]
    fn outage_vanishes_at_zero_distance() {
        assert_eq!(instantaneous_outage(0.0, 0.2, &env(2e-13), 1e3).unwrap(), 0.0);
    }

    #[test]
    fn outage_is_one_half_when_exponent_is_ln2() {
        // choose P so that μβσ² r^α / P = ln 2 at r = 10
        let e = env(1e-12);
        let p = 1e3 * 1e-12 * 1e4 / std::f64::consts::LN_2;
        let o = instantaneous_outage(10.0, p, &e, 1e3).unwrap();
        assert!((o - 0.5).abs() < 1e-14);
    }

    #[test]
    fn outage_matches_high_precision_oracle() {
        // 1 - exp(-6.25e-3), evaluated at 40 significant digits
        let o = instantaneous_outage(50.0, 0.2, &env(2e-13), 1e3).unwrap();
        assert!((o - 0.006_230_509_376_605_269).abs() < 1e-17);
    }

    #[test]
    fn non_finite_inputs_rejected() {
        assert!(instantaneous_outage(f64::NAN, 0.2, &env(2e-13), 1e3).is_err());
        assert!(instantaneous_outage(1.0, f64::INFINITY, &env(2e-13), 1e3).is_err());
        assert!(instantaneous_outage(-1.0, 0.2, &env(2e-13), 1e3).is_err());
        assert!(RadioEnvironment::new(4.0, 0.0, 1e-13, 100.0).is_err());
    }

    #[test]
    fn single_station_distance_is_disc_radial_law() {
        for r in [0.0, 12.5, 50.0, 99.0, 100.0] {
            let f = neighbor_distance_pdf(r, 1, 1, 100.0).unwrap();
            assert!((f - 2.0 * r / 1e4).abs() < 1e-15);
        }
    }

    #[test]
    fn order_statistic_mixture_recovers_parent_density() {
        let n_total = 25;
        for r in [1.0, 33.0, 70.0, 99.5] {
            let mix: f64 = (1..=n_total)
                .map(|n| neighbor_distance_pdf(r, n, n_total, 100.0).unwrap())
                .sum::<f64>()
                / n_total as f64;
            assert!((mix - 2.0 * r / 1e4).abs() < 1e-12, "r={r}: {mix}");
        }
    }

    #[test]
    fn distance_pdf_range_checks() {
        assert!(neighbor_distance_pdf(10.0, 0, 5, 100.0).is_err());
        assert!(neighbor_distance_pdf(10.0, 6, 5, 100.0).is_err());
        assert!(neighbor_distance_pdf(100.5, 1, 5, 100.0).is_err());
        assert!(neighbor_distance_pdf(-0.1, 1, 5, 100.0).is_err());
    }

    #[test]
    fn average_outage_limits() {
        let e = env(1e-13);
        assert_eq!(average_outage(0.2, &e, 0.0).unwrap(), 0.0);
        let tiny = average_outage(1e30, &e, 1e-3).unwrap();
        assert!(tiny < 1e-9);
        let huge = average_outage(1e-30, &e, 1e6).unwrap();
        assert!((huge - 1.0).abs() < 1e-6, "{huge}");
    }

    #[test]
    fn average_outage_matches_high_precision_oracle() {
        // ζ R^α = 0.1; 2∫₀¹ u(1 − e^{−0.1 u⁴}) du at 40 digits
        let e = env(1e-13);
        let p = 1e-13 / 1e-9; // ζ = μβσ²/P = 1e-9 with β = 1
        let o = average_outage(p, &e, 1.0).unwrap();
        assert!((o - 0.032_356_687_364_408_17).abs() < 1e-9);
    }

    #[test]
    fn mu_outage_examples() {
        assert_eq!(mu_average_outage(0.37, 1).unwrap(), 0.37);
        assert_eq!(mu_average_outage(0.0, 9).unwrap(), 0.0);
        let v = mu_average_outage(0.1, 9).unwrap();
        assert!((v - (1.0 - 0.9f64.powi(9))).abs() < 1e-15);
        assert!(mu_average_outage(1.1, 2).is_err());
        assert!(mu_average_outage(0.1, 0).is_err());
    }

    #[test]
    fn fading_is_reproducible_per_seed() {
        let e = env(1e-13);
        let a: Vec<f64> = {
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            (0..32).map(|_| sample_fading(&e, &mut rng)).collect()
        };
        let b: Vec<f64> = {
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            (0..32).map(|_| sample_fading(&e, &mut rng)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn degenerate_links_always_succeed() {
        let e = env(1e-13);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            assert!(transmission_succeeds(30.0, 0.2, &e, 0.0, &mut rng));
            assert!(transmission_succeeds(0.0, 0.2, &e, 1e9, &mut rng));
        }
    }

    #[test]
    fn fixed_gain_at_twice_threshold_succeeds() {
        let e = env(1e-13);
        let (r, p, beta): (f64, f64, f64) = (40.0, 0.1, 1e3);
        let gain = 2.0 * beta * e.sigma2 * r.powf(e.alpha) / p;
        assert!(snr_exceeds(r, p, gain, &e, beta));
        assert!(!snr_exceeds(r, p, 0.5 * gain, &e, beta));
    }

    proptest! {
        #[test]
        fn outage_monotone(r in 0.0f64..200.0, dr in 0.0f64..50.0,
                           b_db in 0.0f64..40.0, db in 0.0f64..10.0,
                           s in 1e-14f64..1e-11, ds in 0.0f64..1e-11,
                           p in 0.01f64..1.0, dp in 0.0f64..1.0) {
            let e = env(s);
            let beta = 10f64.powf(b_db / 10.0);
            let base = instantaneous_outage(r, p, &e, beta).unwrap();
            prop_assert!((0.0..=1.0).contains(&base));
            prop_assert!(instantaneous_outage(r + dr, p, &e, beta).unwrap() >= base);
            prop_assert!(instantaneous_outage(r, p, &e, beta * 10f64.powf(db / 10.0)).unwrap() >= base);
            prop_assert!(instantaneous_outage(r, p, &env(s + ds), beta).unwrap() >= base);
            prop_assert!(instantaneous_outage(r, p + dp, &e, beta).unwrap() <= base);
        }

        #[test]
        fn average_outage_between_center_and_edge(log_zeta in -14.0f64..-4.0) {
            let e = env(1e-13);
            let zeta = 10f64.powf(log_zeta);
            let p = e.sigma2 / zeta;
            let avg = average_outage(p, &e, 1.0).unwrap();
            let edge = instantaneous_outage(e.cell_radius, p, &e, 1.0).unwrap();
            prop_assert!(avg > 0.0 && avg < edge, "avg {} edge {}", avg, edge);
        }

        #[test]
        fn mu_outage_monotone(p in 0.0f64..1.0, dp in 0.0f64..0.5, k in 1u32..20) {
            let base = mu_average_outage(p, k).unwrap();
            prop_assert!(base >= p - 1e-15);
            prop_assert!(mu_average_outage((p + dp).min(1.0), k).unwrap() >= base);
            prop_assert!(mu_average_outage(p, k + 1).unwrap() >= base);
        }
    }
}
