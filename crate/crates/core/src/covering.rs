//! Stopping-time covering constructions on simulated paths: ball covers
//! of images `X(I)` over interval families, and interval covers of
//! preimages `X^{-1}(B)` over dyadic cube families, with ensemble
//! statistics for the cover-count tails.

use crate::error::{Error, Result};
use crate::paths::{simulate, ProcessSpec, SamplePath};
use crate::rng::{mc_fanout, RngStream};
use crate::stats;
use serde::{Deserialize, Serialize};

/// Families for the image-cover experiment at one level `n`: `2^n`
/// intervals of length `t_n = 2^-n` tiling `[0, 1]`, ball radius
/// `theta_n = t_n^gamma`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ImageCoverConfig {
    /// Interval length (also the tiling pitch).
    pub t_n: f64,
    /// Covering ball radius.
    pub theta_n: f64,
    /// Interval start points `a` with `[a, a + t_n]` within `[0, 1]`.
    pub starts: Vec<f64>,
}

impl ImageCoverConfig {
    /// The full dyadic family at level `n` with `theta_n = t_n^gamma`.
    pub fn dyadic(n: u32, gamma: f64) -> Self {
        let t_n = 0.5f64.powi(n as i32);
        Self {
            t_n,
            theta_n: t_n.powf(gamma),
            starts: (0..(1u64 << n)).map(|j| j as f64 * t_n).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_n > 0.0 && self.theta_n > 0.0) {
            return Err(Error::invalid("interval length and radius must be positive"));
        }
        if self.starts.iter().any(|&a| a < 0.0 || a + self.t_n > 1.0 + 1e-12) {
            return Err(Error::invalid("intervals must lie within [0, 1]"));
        }
        Ok(())
    }
}

/// Dyadic-cube family for the preimage-cover experiment: side `r_n`,
/// revisit gap `t_n`, horizon `T`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PreimageCoverConfig {
    /// Cube side (the diameter scale of the family).
    pub r_n: f64,
    /// Interval length of the cover (minimum gap between revisit times).
    pub t_n: f64,
    /// Horizon.
    pub t_horizon: f64,
}

impl PreimageCoverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_n > 0.0 && self.t_n > 0.0 && self.t_horizon > 0.0) {
            return Err(Error::invalid("preimage config fields must be positive"));
        }
        if self.t_n >= self.t_horizon {
            return Err(Error::precondition("need t_n < T"));
        }
        Ok(())
    }
}

fn grid_index_range(path: &SamplePath, a: f64, b: f64) -> (usize, usize) {
    let lo = ((a - path.t0) / path.dt).ceil().max(0.0) as usize;
    let hi = (((b - path.t0) / path.dt).floor() as usize).min(path.len() - 1);
    (lo, hi)
}

/// Run the stopping-time chain `tau_0 = a`,
/// `tau_j = inf{grid s > tau_{j-1} : |X_s - X_{tau_j-1}| > theta}` over
/// one interval and return the ball centers `X(tau_j)`. The grid points
/// of `X([a, a + t_n])` are covered by balls of radius `theta` around
/// the returned centers.
pub fn image_cover_centers(path: &SamplePath, a: f64, t_n: f64, theta: f64) -> Vec<usize> {
    let (lo, hi) = grid_index_range(path, a, a + t_n);
    let mut centers = Vec::new();
    if lo > hi {
        return centers;
    }
    let mut anchor = lo;
    centers.push(anchor);
    for i in lo + 1..=hi {
        if path.dist(i, anchor) > theta {
            anchor = i;
            centers.push(anchor);
        }
    }
    centers
}

/// Number of balls of radius `theta` the chain uses to cover
/// `X([a, a + t_n])` at grid resolution.
pub fn image_cover_count(path: &SamplePath, a: f64, t_n: f64, theta: f64) -> usize {
    image_cover_centers(path, a, t_n, theta).len().max(1)
}

/// Validity of the cover: every grid point of the interval lies within
/// `theta` of some returned center.
pub fn verify_image_cover(path: &SamplePath, a: f64, t_n: f64, theta: f64) -> bool {
    let centers = image_cover_centers(path, a, t_n, theta);
    let (lo, hi) = grid_index_range(path, a, a + t_n);
    if lo > hi {
        return true;
    }
    (lo..=hi).all(|i| centers.iter().any(|&c| path.dist(i, c) <= theta + 1e-12))
}

/// Max of `image_cover_count` over the whole interval family.
pub fn max_image_cover_count(path: &SamplePath, config: &ImageCoverConfig) -> Result<usize> {
    config.validate()?;
    if path.horizon() < 1.0 - 1e-9 {
        return Err(Error::precondition("image covering expects a path over [0, 1]"));
    }
    Ok(config
        .starts
        .iter()
        .map(|&a| image_cover_count(path, a, config.t_n, config.theta_n))
        .max()
        .unwrap_or(1))
}

/// Revisit times of the chain `tau_0 = first grid entry into the ball`,
/// `tau_k = first grid time >= tau_{k-1} + t_n with X in the ball`;
/// `tau_0` is pinned to 0 per the construction, so the returned list
/// holds the `tau_k <= T` for `k >= 1` and the count is its length.
pub fn preimage_cover_times(
    path: &SamplePath,
    center: &[f64],
    half_width: f64,
    t_n: f64,
    t_horizon: f64,
) -> Vec<f64> {
    let mut taus = Vec::new();
    let mut next_allowed = t_n; // tau_0 = 0, so tau_1 >= t_n
    let n_max = (((t_horizon - path.t0) / path.dt).floor() as usize).min(path.len() - 1);
    let mut i = ((next_allowed - path.t0) / path.dt).ceil() as usize;
    while i <= n_max {
        let t = path.time(i);
        if t >= next_allowed && in_ball(path.point(i), center, half_width) {
            taus.push(t);
            next_allowed = t + t_n;
            i = ((next_allowed - path.t0) / path.dt).ceil() as usize;
        } else {
            i += 1;
        }
    }
    taus
}

fn in_ball(x: &[f64], center: &[f64], radius: f64) -> bool {
    let d2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
    d2.sqrt() <= radius
}

/// Count of revisit times `tau_k <= T` (`k >= 1`): the grid-time preimage
/// of the ball is covered by `count + 1` intervals of length `t_n`
/// (including the one anchored at `tau_0 = 0`).
pub fn preimage_cover_count(
    path: &SamplePath,
    center: &[f64],
    half_width: f64,
    t_n: f64,
    t_horizon: f64,
) -> Result<usize> {
    if !(t_n < t_horizon) {
        return Err(Error::precondition("need t_n < T"));
    }
    Ok(preimage_cover_times(path, center, half_width, t_n, t_horizon).len())
}

/// Validity of the preimage cover: every grid time with `X_t` in the ball
/// lies in some `[tau_i, tau_i + t_n)` with `tau_0 = 0`.
pub fn verify_preimage_cover(
    path: &SamplePath,
    center: &[f64],
    half_width: f64,
    t_n: f64,
    t_horizon: f64,
) -> bool {
    let mut taus = vec![0.0];
    taus.extend(preimage_cover_times(path, center, half_width, t_n, t_horizon));
    let n_max = (((t_horizon - path.t0) / path.dt).floor() as usize).min(path.len() - 1);
    for i in 0..=n_max {
        let t = path.time(i);
        if in_ball(path.point(i), center, half_width)
            && !taus.iter().any(|&tau| tau <= t && t < tau + t_n)
        {
            return false;
        }
    }
    true
}

/// Ensemble statistics of cover counts at one family level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverLevelStats {
    pub n: u32,
    pub family_size: usize,
    pub max_count: usize,
    pub q50: f64,
    pub q95: f64,
    /// LS slope of `log P(count > k)` against `k`; negative slope is the
    /// geometric-tail signature.
    pub tail_slope: Option<f64>,
}

impl CoverLevelStats {
    pub fn csv_header() -> &'static str {
        "n,family_size,max_count,q50,q95,tail_slope\n"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}\n",
            self.n,
            self.family_size,
            self.max_count,
            self.q50,
            self.q95,
            self.tail_slope.map_or(String::from("NA"), |s| s.to_string())
        )
    }
}

fn tail_slope(counts: &[usize]) -> Option<f64> {
    let n = counts.len() as f64;
    let max = *counts.iter().max()?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in 0..max {
        let surv = counts.iter().filter(|&&c| c > k).count() as f64 / n;
        if surv <= 0.0 {
            break;
        }
        xs.push(k as f64);
        ys.push(surv.ln());
    }
    if xs.len() < 3 {
        return None;
    }
    Some(stats::linear_fit(&xs, &ys).0)
}

/// Image-cover statistics across an ensemble of paths for the dyadic
/// families at levels `n_range`, with `theta_n = t_n^gamma`.
pub fn image_covering_statistics(
    spec: &ProcessSpec,
    gamma: f64,
    n_range: std::ops::RangeInclusive<u32>,
    n_paths: usize,
    n_steps: usize,
    stream: RngStream,
) -> Result<Vec<CoverLevelStats>> {
    let x0 = vec![0.0; spec.dim()];
    let finest = 0.5f64.powi(*n_range.end() as i32);
    if 1.0 / n_steps as f64 > finest / 4.0 {
        return Err(Error::precondition(
            "path resolution too coarse for the finest interval family",
        ));
    }
    let per_path: Vec<Vec<Vec<usize>>> = mc_fanout(n_paths, stream, |_, s| {
        let path = simulate(spec, &x0, 1.0, n_steps, s).expect("simulation failed");
        n_range
            .clone()
            .map(|n| {
                let cfg = ImageCoverConfig::dyadic(n, gamma);
                cfg.starts
                    .iter()
                    .map(|&a| image_cover_count(&path, a, cfg.t_n, cfg.theta_n))
                    .collect()
            })
            .collect()
    });
    let mut out = Vec::new();
    for (li, n) in n_range.clone().enumerate() {
        let mut counts: Vec<usize> = Vec::new();
        for path_counts in &per_path {
            counts.extend_from_slice(&path_counts[li]);
        }
        let as_f: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
        out.push(CoverLevelStats {
            n,
            family_size: counts.len(),
            max_count: *counts.iter().max().unwrap_or(&1),
            q50: stats::quantile(&as_f, 0.5),
            q95: stats::quantile(&as_f, 0.95),
            tail_slope: tail_slope(&counts),
        });
    }
    Ok(out)
}

/// Preimage-cover statistics: dyadic cube families of side `2^-n` over
/// `[-m, m]^d`, gap `t_n = 2^{-gamma n}`, pooled over an ensemble.
/// Only cubes visited by the path contribute counts (unvisited cubes
/// have count zero and carry no covering burden).
pub fn preimage_covering_statistics(
    spec: &ProcessSpec,
    gamma: f64,
    n_range: std::ops::RangeInclusive<u32>,
    n_paths: usize,
    n_steps: usize,
    t_horizon: f64,
    stream: RngStream,
) -> Result<Vec<CoverLevelStats>> {
    let d = spec.dim();
    let x0 = vec![0.0; d];
    let per_path: Vec<Vec<Vec<usize>>> = mc_fanout(n_paths, stream, |_, s| {
        let path = simulate(spec, &x0, t_horizon, n_steps, s).expect("simulation failed");
        n_range
            .clone()
            .map(|n| {
                let side = 0.5f64.powi(n as i32);
                let t_n = t_horizon * side.powf(gamma);
                occupied_cube_counts(&path, side, t_n, t_horizon)
            })
            .collect()
    });
    let mut out = Vec::new();
    for (li, n) in n_range.clone().enumerate() {
        let mut counts: Vec<usize> = Vec::new();
        for path_counts in &per_path {
            counts.extend_from_slice(&path_counts[li]);
        }
        if counts.is_empty() {
            counts.push(0);
        }
        let as_f: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
        out.push(CoverLevelStats {
            n,
            family_size: counts.len(),
            max_count: *counts.iter().max().unwrap_or(&0),
            q50: stats::quantile(&as_f, 0.5),
            q95: stats::quantile(&as_f, 0.95),
            tail_slope: tail_slope(&counts),
        });
    }
    Ok(out)
}

/// Per-cube revisit counts over the dyadic cube grid of the given side,
/// computed in one pass from each grid point's cube key.
fn occupied_cube_counts(path: &SamplePath, side: f64, t_n: f64, t_horizon: f64) -> Vec<usize> {
    use std::collections::HashMap;
    let n_max = (((t_horizon - path.t0) / path.dt).floor() as usize).min(path.len() - 1);
    // next admissible revisit time per cube
    let mut next_allowed: HashMap<Vec<i64>, (f64, usize)> = HashMap::new();
    for i in 0..=n_max {
        let t = path.time(i);
        let key: Vec<i64> = path.point(i).iter().map(|&c| (c / side).floor() as i64).collect();
        let entry = next_allowed.entry(key).or_insert((t_n, 0));
        if t >= entry.0 {
            entry.1 += 1;
            entry.0 = t + t_n;
        }
    }
    next_allowed.into_values().map(|(_, c)| c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_path(n: usize, value: &[f64]) -> SamplePath {
        let mut values = Vec::with_capacity((n + 1) * value.len());
        for _ in 0..=n {
            values.extend_from_slice(value);
        }
        SamplePath::new(0.0, 1.0 / n as f64, value.len(), values).unwrap()
    }

    #[test]
    fn constant_path_needs_one_ball() {
        let path = constant_path(128, &[0.3, 0.3]);
        assert_eq!(image_cover_count(&path, 0.25, 0.25, 0.1), 1);
        assert!(verify_image_cover(&path, 0.25, 0.25, 0.1));
    }

    #[test]
    fn one_big_jump_needs_two_balls() {
        let n = 128;
        let theta = 0.05;
        let mut values = Vec::new();
        for i in 0..=n {
            values.push(if i < 64 { 0.0 } else { 3.0 * theta });
        }
        let path = SamplePath::new(0.0, 1.0 / n as f64, 1, values).unwrap();
        assert_eq!(image_cover_count(&path, 0.25, 0.5, theta), 2);
        assert!(verify_image_cover(&path, 0.25, 0.5, theta));
    }

    #[test]
    fn linear_drift_count_matches_hand_value() {
        // X_t = v t: the chain advances every theta/v, so an interval of
        // length t_n needs ceil(v t_n / theta) balls.
        let n = 100_000;
        let v = 2.0;
        let values: Vec<f64> = (0..=n).map(|i| v * i as f64 / n as f64).collect();
        let path = SamplePath::new(0.0, 1.0 / n as f64, 1, values).unwrap();
        for (t_n, theta) in [(0.5, 0.4), (0.25, 0.12), (0.4, 0.1)] {
            let expect = (v * t_n / theta).ceil() as usize;
            let got = image_cover_count(&path, 0.1, t_n, theta);
            assert_eq!(got, expect, "t_n {t_n} theta {theta}");
            let cfg = ImageCoverConfig {
                t_n,
                theta_n: theta,
                starts: (0..((1.0 - t_n) / t_n) as usize).map(|j| j as f64 * t_n).collect(),
            };
            assert_eq!(max_image_cover_count(&path, &cfg).unwrap(), expect);
        }
    }

    #[test]
    fn preimage_counts_for_constant_and_missing_paths() {
        let path = constant_path(1000, &[0.5]);
        // never entering the ball
        assert_eq!(preimage_cover_count(&path, &[5.0], 0.1, 0.25, 1.0).unwrap(), 0);
        // constant at the center: revisits at t_n spacing, count T/t_n
        for parts in [4usize, 5, 8] {
            let t_n = 1.0 / parts as f64;
            let c = preimage_cover_count(&path, &[0.5], 0.1, t_n, 1.0).unwrap();
            assert_eq!(c, parts, "t_n = 1/{parts}");
        }
        assert!(verify_preimage_cover(&path, &[0.5], 0.1, 0.25, 1.0));
    }

    #[test]
    fn cover_validity_on_random_ensembles() {
        use rand::Rng;
        let spec = ProcessSpec::isotropic_stable(1.5, 2).unwrap();
        let root = RngStream::new(71, 0);
        for rep in 0..40 {
            let s = root.substream(rep);
            let path = simulate(&spec, &[0.0, 0.0], 1.0, 512, s).unwrap();
            let mut rng = s.substream(99).rng();
            for _ in 0..5 {
                let a = rng.random::<f64>() * 0.75;
                let t_n = rng.random::<f64>() * 0.2 + 0.01;
                let theta = rng.random::<f64>() * 0.5 + 0.01;
                assert!(verify_image_cover(&path, a, t_n, theta));
                let center = [rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0];
                let r = rng.random::<f64>() * 0.5 + 0.05;
                assert!(verify_preimage_cover(&path, &center, r, t_n, 1.0));
            }
        }
    }

    #[test]
    fn counts_monotone_in_radius() {
        let spec = ProcessSpec::brownian(2);
        let path = simulate(&spec, &[0.0, 0.0], 1.0, 2048, RngStream::new(72, 0)).unwrap();
        let mut last = usize::MAX;
        for theta in [0.4, 0.2, 0.1, 0.05] {
            let c = image_cover_count(&path, 0.25, 0.5, theta);
            assert!(c >= 1);
            assert!(c <= last || last == usize::MAX);
            last = c.max(1);
        }
    }

    #[test]
    fn brownian_tail_slope_is_negative() {
        let spec = ProcessSpec::brownian(2);
        let stats = image_covering_statistics(&spec, 0.45, 8..=10, 8, 1 << 14, RngStream::new(73, 0)).unwrap();
        for s in &stats {
            if let Some(slope) = s.tail_slope {
                assert!(slope < 0.0, "level {} slope {slope}", s.n);
            }
        }
    }
}
