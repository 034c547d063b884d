use serde::{Deserialize, Serialize};

use super::TrialResult;

/// Point of an empirical CDF: `P(X ≤ value) = probability`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdfPoint {
    pub value: f64,
    pub probability: f64,
}

/// Empirical CDF with one step per distinct value.
pub fn empirical_cdf(samples: &[f64]) -> Vec<CdfPoint> {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut out: Vec<CdfPoint> = Vec::new();
    for (i, &x) in v.iter().enumerate() {
        let p = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.value == x => last.probability = p,
            _ => out.push(CdfPoint { value: x, probability: p }),
        }
    }
    out
}

/// Nearest-rank percentile, `q` in (0, 1].
pub fn percentile(samples: &[f64], q: f64) -> f64 {
    if samples.is_empty() {
        return f64::NAN;
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = (q * v.len() as f64).ceil().max(1.0) as usize;
    v[rank.min(v.len()) - 1]
}

/// Distribution summary of one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub p10: f64,
    pub p50: f64,
    pub p90: f64,
    pub cdf: Vec<CdfPoint>,
}

impl Distribution {
    pub fn of(samples: &[f64]) -> Self {
        let n = samples.len() as f64;
        Self {
            mean: samples.iter().sum::<f64>() / n,
            min: samples.iter().copied().fold(f64::INFINITY, f64::min),
            max: samples.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            p10: percentile(samples, 0.1),
            p50: percentile(samples, 0.5),
            p90: percentile(samples, 0.9),
            cdf: empirical_cdf(samples),
        }
    }
}

/// Campaign aggregate over trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsSummary {
    pub trials: usize,
    /// Cycle time in seconds.
    pub cycle_time: Distribution,
    /// Per-trial delivered fraction.
    pub reliability: Distribution,
    /// Delivered fraction over all stations of all trials.
    pub pooled_reliability: f64,
    /// Mean number of stations failing the first pass.
    pub mean_initial_failures: f64,
}

impl StatsSummary {
    pub fn from_trials(trials: &[TrialResult]) -> Self {
        let cycle: Vec<f64> = trials.iter().map(|t| t.cycle_time).collect();
        let rel: Vec<f64> = trials.iter().map(TrialResult::reliability).collect();
        let delivered: usize = trials.iter().map(|t| t.delivered.iter().filter(|&&d| d).count()).sum();
        let total: usize = trials.iter().map(|t| t.delivered.len()).sum();
        let n = trials.len() as f64;
        Self {
            trials: trials.len(),
            cycle_time: Distribution::of(&cycle),
            reliability: Distribution::of(&rel),
            pooled_reliability: delivered as f64 / total.max(1) as f64,
            mean_initial_failures: trials.iter().map(|t| t.initial_failures as f64).sum::<f64>() / n,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_steps_and_ends_at_one() {
        let c = empirical_cdf(&[3.0, 1.0, 3.0, 2.0]);
        let expect = [(1.0, 0.25), (2.0, 0.5), (3.0, 1.0)];
        assert_eq!(c.len(), 3);
        for (p, (v, q)) in c.iter().zip(expect) {
            assert_eq!((p.value, p.probability), (v, q));
        }
    }

    #[test]
    fn nearest_rank() {
        let v: Vec<f64> = (1..=10).map(f64::from).collect();
        assert_eq!(percentile(&v, 0.9), 9.0);
        assert_eq!(percentile(&v, 0.5), 5.0);
        assert_eq!(percentile(&v, 1.0), 10.0);
        assert_eq!(percentile(&v, 0.01), 1.0);
    }
}
