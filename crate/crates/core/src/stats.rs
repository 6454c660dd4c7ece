//! Goodness-of-fit statistics for count and waiting-time samples.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Number of bins after pooling sparse cells.
    pub bins: usize,
}

/// Kolmogorov limiting survival function `Q(λ) = 2 Σ (−1)^{k−1} e^{−2k²λ²}`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Stephens' small-sample correction to the asymptotic p-value.
fn ks_p(d: f64, n_eff: f64) -> f64 {
    let s = n_eff.sqrt();
    kolmogorov_q((s + 0.12 + 0.11 / s) * d)
}

/// One-sample KS test of `sample` against a continuous CDF.
pub fn ks_one_sample(sample: &[f64], cdf: impl Fn(f64) -> f64) -> KsResult {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    KsResult {
        statistic: d,
        p_value: ks_p(d, n),
    }
}

/// Two-sample KS test. Ties are handled by comparing the empirical CDFs
/// only after each run of equal values, which is what makes the statistic
/// valid for integer counts (the p-value is then conservative).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsResult {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    KsResult {
        statistic: d,
        p_value: ks_p(d, na * nb / (na + nb)),
    }
}

/// Empirical pmf from integer frequencies.
pub fn pmf(freq: &BTreeMap<u64, u64>) -> BTreeMap<u64, f64> {
    let n: u64 = freq.values().sum();
    freq.iter().map(|(&k, &c)| (k, c as f64 / n as f64)).collect()
}

/// Total variation distance `½ Σ |p(k) − q(k)|` over the union of supports.
pub fn tv_distance(p: &BTreeMap<u64, f64>, q: &BTreeMap<u64, f64>) -> f64 {
    let mut sum = 0.0;
    for (k, &pk) in p {
        sum += (pk - q.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, &qk) in q {
        if !p.contains_key(k) {
            sum += qk;
        }
    }
    0.5 * sum
}

/// Pearson chi-square goodness of fit of observed frequencies against a
/// reference pmf defined on all of `0..`. Cells are pooled from the left
/// until each expected count reaches `min_expected`, with everything past
/// the last full cell folded into an upper tail cell.
pub fn chi_square_gof(freq: &BTreeMap<u64, u64>, reference: impl Fn(u64) -> f64, min_expected: f64) -> ChiSquareResult {
    let n: u64 = freq.values().sum();
    let nf = n as f64;
    let kmax = freq.keys().next_back().copied().unwrap_or(0);
    // (observed, expected) per pooled cell
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    let mut used = 0.0;
    for k in 0..=kmax {
        obs += freq.get(&k).copied().unwrap_or(0) as f64;
        let e = nf * reference(k);
        exp += e;
        used += e;
        if exp >= min_expected {
            cells.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    // Upper tail beyond kmax carries no observations.
    exp += (nf - used).max(0.0);
    if exp > 0.0 || obs > 0.0 {
        if exp >= min_expected || cells.is_empty() {
            cells.push((obs, exp));
        } else if let Some(last) = cells.last_mut() {
            last.0 += obs;
            last.1 += exp;
        }
    }
    let statistic: f64 = cells
        .iter()
        .map(|&(o, e)| if e > 0.0 { (o - e).powi(2) / e } else { 0.0 })
        .sum();
    let dof = cells.len().saturating_sub(1).max(1);
    let p_value = ChiSquared::new(dof as f64).map(|d| d.sf(statistic)).unwrap_or(f64::NAN);
    ChiSquareResult {
        statistic,
        dof,
        p_value,
        bins: cells.len(),
    }
}

/// Sample mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Poisson pmf, computed in log space.
pub fn poisson_pmf(mean: f64, k: u64) -> f64 {
    if mean == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let kf = k as f64;
    (kf * mean.ln() - mean - crate::mlspec::gamma::ln_gamma(kf + 1.0)).exp()
}
