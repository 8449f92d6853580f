//! Shared statistical utilities: two-sample Kolmogorov-Smirnov tests,
//! least-squares fits, bootstrap confidence intervals and Monte Carlo
//! standard errors.

use crate::rng::RngStream;
use rand::Rng;

/// Standard error of a binomial proportion estimate.
pub fn binomial_std_err(p_hat: f64, n: usize) -> f64 {
    (p_hat * (1.0 - p_hat) / n as f64).sqrt()
}

/// Conservative noise floor for a proportion estimate: the rule-of-three
/// scale `3/n` keeps zero-count cells from reporting zero uncertainty.
pub fn binomial_noise_floor(p_hat: f64, n: usize) -> f64 {
    binomial_std_err(p_hat, n).max(1.0 / n as f64)
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// q-quantile (linear interpolation) of an unsorted sample.
pub fn quantile(xs: &[f64], q: f64) -> f64 {
    assert!(!xs.is_empty());
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    quantile_sorted(&v, q)
}

pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q.clamp(0.0, 1.0) * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[hi] * frac
}

/// Least-squares line fit; returns `(slope, intercept)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2);
    let mx = mean(xs);
    let my = mean(ys);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return (0.0, my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Two-sample Kolmogorov-Smirnov statistic `sup |F1 - F2|`.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
    ys.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let (n, m) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let t = xs[i].min(ys[j]);
        while i < n && xs[i] <= t {
            i += 1;
        }
        while j < m && ys[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    d
}

/// Asymptotic Kolmogorov survival function `Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64) * (k as f64) * lambda * lambda).exp();
        sum += sign * term;
        sign = -sign;
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample KS p-value with the usual finite-sample correction.
pub fn ks_two_sample_pvalue(a: &[f64], b: &[f64]) -> f64 {
    let d = ks_statistic(a, b);
    let ne = (a.len() * b.len()) as f64 / (a.len() + b.len()) as f64;
    let ne_sqrt = ne.sqrt();
    kolmogorov_survival((ne_sqrt + 0.12 + 0.11 / ne_sqrt) * d)
}

/// Outcome of a two-sample KS test at a fixed level.
#[derive(Debug, Clone, Copy)]
pub struct KsOutcome {
    pub statistic: f64,
    pub p_value: f64,
    pub level: f64,
}

impl KsOutcome {
    /// The samples pass (are not distinguished) when `p > level`.
    pub fn passes(&self) -> bool {
        self.p_value > self.level
    }
}

pub fn ks_two_sample(a: &[f64], b: &[f64], level: f64) -> KsOutcome {
    KsOutcome {
        statistic: ks_statistic(a, b),
        p_value: ks_two_sample_pvalue(a, b),
        level,
    }
}

/// Percentile bootstrap CI for a statistic of `(x, y)` scale points,
/// resampling points with replacement. Returns `(lo, hi)` at 95%.
pub fn bootstrap_ci_xy<F>(xs: &[f64], ys: &[f64], reps: usize, stream: RngStream, stat: F) -> (f64, f64)
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let mut rng = stream.rng();
    let mut vals = Vec::with_capacity(reps);
    let mut rx = vec![0.0; n];
    let mut ry = vec![0.0; n];
    for _ in 0..reps {
        for k in 0..n {
            let idx = rng.random_range(0..n);
            rx[k] = xs[idx];
            ry[k] = ys[idx];
        }
        vals.push(stat(&rx, &ry));
    }
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    (quantile_sorted(&vals, 0.025), quantile_sorted(&vals, 0.975))
}

/// Percentile bootstrap CI for a statistic of a scalar sample.
pub fn bootstrap_ci<F>(xs: &[f64], reps: usize, stream: RngStream, stat: F) -> (f64, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let n = xs.len();
    let mut rng = stream.rng();
    let mut vals = Vec::with_capacity(reps);
    let mut r = vec![0.0; n];
    for _ in 0..reps {
        for slot in r.iter_mut() {
            *slot = xs[rng.random_range(0..n)];
        }
        vals.push(stat(&r));
    }
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    (quantile_sorted(&vals, 0.025), quantile_sorted(&vals, 0.975))
}

/// Empirical characteristic function of a scalar sample at frequency `xi`.
pub fn empirical_cf(sample: &[f64], xi: f64) -> num_complex::Complex64 {
    let n = sample.len() as f64;
    let (mut re, mut im) = (0.0, 0.0);
    for &x in sample {
        let (s, c) = (xi * x).sin_cos();
        re += c;
        im += s;
    }
    num_complex::Complex64::new(re / n, im / n)
}

/// Empirical Laplace transform of a nonnegative sample at `lambda`.
pub fn empirical_laplace(sample: &[f64], lambda: f64) -> f64 {
    sample.iter().map(|&x| (-lambda * x).exp()).sum::<f64>() / sample.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn linear_fit_recovers_exact_line() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.5).collect();
        let (s, b) = linear_fit(&xs, &ys);
        assert_abs_diff_eq!(s, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b, -1.5, epsilon = 1e-12);
    }

    #[test]
    fn ks_same_distribution_passes() {
        let mut rng = RngStream::new(11, 0).rng();
        let a: Vec<f64> = (0..4000).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let b: Vec<f64> = (0..4000).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        assert!(ks_two_sample(&a, &b, 1e-3).passes());
    }

    #[test]
    fn ks_shifted_distribution_fails() {
        let mut rng = RngStream::new(11, 1).rng();
        let a: Vec<f64> = (0..4000).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let b: Vec<f64> = (0..4000).map(|_| rng.sample::<f64, _>(StandardNormal) + 0.25).collect();
        assert!(!ks_two_sample(&a, &b, 1e-3).passes());
    }

    #[test]
    fn kolmogorov_survival_known_values() {
        // Q(0.8276) ~ 0.5; classic table value.
        assert!((kolmogorov_survival(0.8276) - 0.5).abs() < 5e-3);
        assert!(kolmogorov_survival(3.0) < 1e-7);
    }

    #[test]
    fn quantile_interpolates() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_abs_diff_eq!(quantile(&xs, 0.5), 2.5);
        assert_abs_diff_eq!(quantile(&xs, 0.0), 1.0);
        assert_abs_diff_eq!(quantile(&xs, 1.0), 4.0);
    }
}
