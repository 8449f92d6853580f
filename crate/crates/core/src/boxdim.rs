//! Box-counting machinery: occupancy counts over dyadic grids, the
//! lower/upper box-dimension regression estimates that stand in for
//! packing dimension, and the subordinator inverse-image dimension
//! formula.

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::stats;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// A multiset of points in `R^d`, flat row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub dim: usize,
    pub coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(dim: usize, coords: Vec<f64>) -> Self {
        assert!(dim > 0 && coords.len() % dim == 0);
        Self { dim, coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn diameter(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let d = self.dim;
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for i in 0..self.len() {
            for (k, &c) in self.point(i).iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        lo.iter().zip(&hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt()
    }
}

/// `(epsilon, count)` pairs, epsilons strictly decreasing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoxCountCurve {
    pub entries: Vec<(f64, u64)>,
    pub ambient_dim: usize,
}

impl BoxCountCurve {
    pub fn new(entries: Vec<(f64, u64)>, ambient_dim: usize) -> Result<Self> {
        for w in entries.windows(2) {
            if !(w[1].0 < w[0].0) {
                return Err(Error::invalid("epsilons must be strictly decreasing"));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::invalid("counts must be nondecreasing as epsilon shrinks"));
            }
        }
        if entries.iter().any(|&(e, c)| !(e > 0.0) || c == 0) {
            return Err(Error::invalid("epsilons must be positive and counts nonzero"));
        }
        Ok(Self { entries, ambient_dim })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("epsilon,count\n");
        for (e, c) in &self.entries {
            out.push_str(&format!("{e},{c}\n"));
        }
        out
    }
}

/// Count occupied cells of the grid `eps * Z^d` (anchored at the origin,
/// half-open cells) for each ladder scale.
pub fn box_count(points: &PointCloud, epsilon_ladder: &[f64]) -> Result<BoxCountCurve> {
    if points.is_empty() {
        return Err(Error::precondition("box_count needs a nonempty cloud"));
    }
    for w in epsilon_ladder.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::precondition("epsilon ladder must be strictly decreasing"));
        }
    }
    if epsilon_ladder.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::precondition("epsilon ladder must be positive"));
    }
    let d = points.dim;
    let n = points.len();
    let counts: Vec<u64> = epsilon_ladder
        .par_iter()
        .map(|&eps| {
            if d <= 4 {
                // pack each floor index into 32 bits of a u128 key
                let mut keys: Vec<u128> = Vec::with_capacity(n);
                for i in 0..n {
                    let mut key: u128 = 0;
                    for &c in points.point(i) {
                        let idx = (c / eps).floor() as i64;
                        debug_assert!(idx.unsigned_abs() < (1 << 31), "cell index overflow");
                        key = (key << 32) | ((idx as u32) as u128);
                    }
                    keys.push(key);
                }
                keys.par_sort_unstable();
                keys.dedup();
                keys.len() as u64
            } else {
                let mut keys: Vec<Vec<i64>> = (0..n)
                    .map(|i| points.point(i).iter().map(|&c| (c / eps).floor() as i64).collect())
                    .collect();
                keys.par_sort_unstable();
                keys.dedup();
                keys.len() as u64
            }
        })
        .collect();
    BoxCountCurve::new(epsilon_ladder.iter().cloned().zip(counts).collect(), d)
}

/// Scale-window selection: drop a fixed number of the coarsest and finest
/// ladder points.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WindowPolicy {
    pub drop_coarsest: usize,
    pub drop_finest: usize,
}

impl Default for WindowPolicy {
    fn default() -> Self {
        Self { drop_coarsest: 2, drop_finest: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMode {
    LsFit,
    MinSlope,
    MaxSlope,
}

/// A regression dimension estimate with a bootstrap confidence interval.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub slope: f64,
    pub lower_ci: f64,
    pub upper_ci: f64,
    /// Window as ladder indices `(i_min, i_max)`, inclusive.
    pub window: (usize, usize),
    pub mode: EstimateMode,
    /// Set when every count in the window is equal (no scaling signal).
    pub saturated: bool,
}

const BOOTSTRAP_REPS: usize = 500;
const SLOPE_SLACK: f64 = 0.2;

fn window_points(curve: &BoxCountCurve, policy: &WindowPolicy) -> Result<(usize, usize, Vec<f64>, Vec<f64>)> {
    let n = curve.entries.len();
    let lo = policy.drop_coarsest;
    let hi = n.saturating_sub(policy.drop_finest);
    if hi.saturating_sub(lo) < 4 {
        return Err(Error::precondition(format!(
            "window keeps {} ladder points; need at least 4",
            hi.saturating_sub(lo)
        )));
    }
    let xs: Vec<f64> = curve.entries[lo..hi].iter().map(|(e, _)| (1.0 / e).ln()).collect();
    let ys: Vec<f64> = curve.entries[lo..hi].iter().map(|(_, c)| (*c as f64).ln()).collect();
    Ok((lo, hi - 1, xs, ys))
}

fn clamp_slope(s: f64, ambient: usize) -> f64 {
    s.clamp(0.0, ambient as f64 + SLOPE_SLACK)
}

fn estimate_with_mode(
    curve: &BoxCountCurve,
    policy: &WindowPolicy,
    mode: EstimateMode,
    stream: RngStream,
) -> Result<DimensionEstimate> {
    let (i_min, i_max, xs, ys) = window_points(curve, policy)?;
    let saturated = ys.windows(2).all(|w| w[0] == w[1]);
    if saturated {
        return Ok(DimensionEstimate {
            slope: 0.0,
            lower_ci: 0.0,
            upper_ci: 0.0,
            window: (i_min, i_max),
            mode,
            saturated: true,
        });
    }
    let ambient = curve.ambient_dim;
    let stat = move |xs: &[f64], ys: &[f64]| -> f64 {
        match mode {
            EstimateMode::LsFit => stats::linear_fit(xs, ys).0,
            EstimateMode::MinSlope | EstimateMode::MaxSlope => {
                // pairwise slopes between consecutive (sorted) scales
                let mut idx: Vec<usize> = (0..xs.len()).collect();
                idx.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap());
                let mut best = if mode == EstimateMode::MinSlope {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                };
                for w in idx.windows(2) {
                    let dx = xs[w[1]] - xs[w[0]];
                    if dx.abs() < 1e-12 {
                        continue;
                    }
                    let s = (ys[w[1]] - ys[w[0]]) / dx;
                    best = if mode == EstimateMode::MinSlope { best.min(s) } else { best.max(s) };
                }
                if best.is_finite() {
                    best
                } else {
                    0.0
                }
            }
        }
    };
    let slope = clamp_slope(stat(&xs, &ys), ambient);
    let (lo, hi) = stats::bootstrap_ci_xy(&xs, &ys, BOOTSTRAP_REPS, stream, &stat);
    Ok(DimensionEstimate {
        slope,
        lower_ci: clamp_slope(lo, ambient).min(slope),
        upper_ci: clamp_slope(hi, ambient).max(slope),
        window: (i_min, i_max),
        mode,
        saturated: false,
    })
}

/// Central least-squares estimate of `log N` against `log(1/eps)`.
pub fn estimate_box_dimension_ls(
    curve: &BoxCountCurve,
    policy: &WindowPolicy,
    stream: RngStream,
) -> Result<DimensionEstimate> {
    estimate_with_mode(curve, policy, EstimateMode::LsFit, stream)
}

/// Lower and upper box-dimension estimates via the extreme two-point
/// slopes inside the window (min approximates the lower box dimension,
/// max the upper).
pub fn estimate_box_dimensions(
    curve: &BoxCountCurve,
    policy: &WindowPolicy,
    stream: RngStream,
) -> Result<(DimensionEstimate, DimensionEstimate)> {
    let lower = estimate_with_mode(curve, policy, EstimateMode::MinSlope, stream.substream(1))?;
    let upper = estimate_with_mode(curve, policy, EstimateMode::MaxSlope, stream.substream(2))?;
    Ok((lower, upper))
}

/// Hawkes' formula for the dimension of a stable subordinator's inverse
/// image: `max(0, (rho + dimE - 1) / rho)`.
pub fn hawkes_inverse_image_dimension(rho: f64, dim_e: f64) -> f64 {
    assert!(rho > 0.0 && rho < 1.0, "rho must lie in (0, 1)");
    assert!((0.0..=1.0).contains(&dim_e), "dimE must lie in [0, 1]");
    ((rho + dim_e - 1.0) / rho).max(0.0)
}
