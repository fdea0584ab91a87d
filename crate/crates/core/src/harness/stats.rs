//! Summary statistics for residual and timing series.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

pub fn rms(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    (xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64).sqrt()
}

/// Sample autocorrelation at lags `1..=max_lag`. A constant series has no
/// structure to correlate and yields zeros.
pub fn autocorrelation(xs: &[f64], max_lag: usize) -> Vec<f64> {
    let n = xs.len();
    let mean = xs.iter().sum::<f64>() / n.max(1) as f64;
    let c0: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    (1..=max_lag)
        .map(|k| {
            if c0 == 0.0 || k >= n {
                return 0.0;
            }
            let ck: f64 = (0..n - k)
                .map(|i| (xs[i] - mean) * (xs[i + k] - mean))
                .sum();
            ck / c0
        })
        .collect()
}

/// Half-width of the 95% white-noise band.
pub fn white_band(n: usize) -> f64 {
    2.0 / (n.max(1) as f64).sqrt()
}

/// Linear-interpolated quantile of unsorted data.
pub fn quantile(xs: &[f64], p: f64) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = p.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}

pub fn median(xs: &[f64]) -> f64 {
    quantile(xs, 0.5)
}

pub fn iqr(xs: &[f64]) -> f64 {
    quantile(xs, 0.75) - quantile(xs, 0.25)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankSum {
    /// Mann–Whitney U of the first sample.
    pub u: f64,
    pub z: f64,
    /// Two-sided, normal approximation with tie correction.
    pub p_value: f64,
}

/// Wilcoxon rank-sum test of `a` against `b`.
pub fn rank_sum(a: &[f64], b: &[f64]) -> RankSum {
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let mut all: Vec<(f64, bool)> = a
        .iter()
        .map(|&x| (x, true))
        .chain(b.iter().map(|&x| (x, false)))
        .collect();
    all.sort_by(|x, y| x.0.total_cmp(&y.0));
    let n = all.len();
    let mut r1 = 0.0;
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && all[j + 1].0 == all[i].0 {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        r1 += all[i..=j].iter().filter(|x| x.1).count() as f64 * rank;
        i = j + 1;
    }
    let u = r1 - n1 * (n1 + 1.0) / 2.0;
    let nt = n1 + n2;
    let var = n1 * n2 / 12.0 * ((nt + 1.0) - tie_term / (nt * (nt - 1.0)).max(1.0));
    if !(var > 0.0) {
        return RankSum {
            u,
            z: 0.0,
            p_value: 1.0,
        };
    }
    let z = (u - n1 * n2 / 2.0) / var.sqrt();
    let norm = Normal::new(0.0, 1.0).expect("standard normal");
    RankSum {
        u,
        z,
        p_value: (2.0 * (1.0 - norm.cdf(z.abs()))).min(1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn autocorrelation_of_alternating_series() {
        let xs: Vec<f64> = (0..100)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let ac = autocorrelation(&xs, 2);
        assert!((ac[0] + 0.99).abs() < 1e-12 && (ac[1] - 0.98).abs() < 1e-12);
        assert_eq!(autocorrelation(&[3.0; 10], 3), vec![0.0; 3]);
    }

    #[test]
    fn quantiles() {
        let xs = [5.0, 1.0, 3.0, 2.0, 4.0];
        assert_eq!(median(&xs), 3.0);
        assert_eq!(iqr(&xs), 2.0);
    }

    #[test]
    fn rank_sum_separates_shifted_samples() {
        let a: Vec<f64> = (0..50).map(f64::from).collect();
        let b: Vec<f64> = (0..50).map(|i| f64::from(i) + 100.0).collect();
        assert!(rank_sum(&a, &b).p_value < 1e-10);
        let same = rank_sum(&a, &a);
        assert!((same.p_value - 1.0).abs() < 1e-12);
    }
}
