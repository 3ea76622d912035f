//! Kolmogorov–Smirnov statistics.

use serde::Serialize;

/// Asymptotic critical coefficient at `α = 0.01`.
pub const KS_C_ALPHA_01: f64 = 1.628;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub critical: f64,
    pub passed: bool,
}

impl KsResult {
    fn new(statistic: f64, critical: f64) -> Self {
        KsResult { statistic, critical, passed: statistic < critical }
    }
}

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// `sup_x |F_n(x) − F(x)|`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let xs = sorted(samples);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

pub fn ks_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64) -> KsResult {
    let n = samples.len() as f64;
    KsResult::new(ks_statistic(samples, cdf), KS_C_ALPHA_01 / n.sqrt())
}

/// `sup_x |F_n(x) − G_m(x)|`.
pub fn ks_two_sample_statistic(a: &[f64], b: &[f64]) -> f64 {
    let (a, b) = (sorted(a), sorted(b));
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsResult {
    let (n, m) = (a.len() as f64, b.len() as f64);
    KsResult::new(ks_two_sample_statistic(a, b), KS_C_ALPHA_01 * ((n + m) / (n * m)).sqrt())
}
