//! The symbol-based maximal inequality: evaluate the Pruitt-type upper
//! bound `t sup_{|y-x|<=r} sup_{|xi|<=1/r} |q(y, xi)|` and compare it to
//! Monte Carlo maximal tails.

use super::report::{BoundCheckEntry, BoundCheckReport};
use super::tail::estimate_max_tail;
use super::McControls;
use crate::error::{Error, Result};
use crate::paths::ProcessSpec;
use crate::rng::RngStream;
use crate::symbols::sphere_directions;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Search controls for the double supremum.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct XiSearchConfig {
    pub n_radial: usize,
    pub n_directions: usize,
    pub refine_levels: usize,
    pub rel_tol: f64,
}

impl Default for XiSearchConfig {
    fn default() -> Self {
        Self {
            n_radial: 48,
            n_directions: 16,
            refine_levels: 12,
            rel_tol: 1e-6,
        }
    }
}

/// `t * sup_{|y-x|<=r} sup_{|xi|<=1/r} |q(y, xi)|` by grid search with
/// radial refinement around the maximizer. The spatial sup runs over a
/// deterministic probe set (center, axis points at distance r, and the
/// scaled diagonal); for x-free symbols it collapses to one evaluation.
///
/// The multiplicative constant of the maximal inequality is fitted by
/// the caller, never baked in here.
pub fn pruitt_upper_bound<Q>(
    symbol: Q,
    x: &[f64],
    t: f64,
    r: f64,
    spatially_homogeneous: bool,
    search: &XiSearchConfig,
) -> Result<f64>
where
    Q: Fn(&[f64], &[f64]) -> Complex64,
{
    if !(t > 0.0 && r > 0.0) {
        return Err(Error::precondition("need t > 0 and r > 0"));
    }
    let d = x.len();
    let xi_cap = 1.0 / r;
    let dirs = sphere_directions(d, search.n_directions);
    let probes: Vec<Vec<f64>> = if spatially_homogeneous {
        vec![x.to_vec()]
    } else {
        let mut ps = vec![x.to_vec()];
        for i in 0..d {
            for sign in [1.0, -1.0] {
                let mut p = x.to_vec();
                p[i] += sign * r;
                ps.push(p);
            }
        }
        let diag = r / (d as f64).sqrt();
        let mut p = x.to_vec();
        for c in p.iter_mut() {
            *c += diag;
        }
        ps.push(p);
        ps
    };

    let eval_sup_over_y = |xi: &[f64]| -> f64 {
        probes.iter().map(|y| symbol(y, xi).norm()).fold(0.0, f64::max)
    };

    // radial grid search with window refinement around the best radius
    let mut lo = xi_cap * 1e-6;
    let mut hi = xi_cap;
    let mut best = 0.0f64;
    let mut previous = f64::NAN;
    for level in 0..=search.refine_levels {
        let mut best_rho = hi;
        for i in 0..search.n_radial {
            let frac = i as f64 / (search.n_radial - 1) as f64;
            let rho = lo * (hi / lo).powf(frac);
            for (u, _) in &dirs {
                let xi: Vec<f64> = u.iter().map(|c| c * rho).collect();
                let v = eval_sup_over_y(&xi);
                if v > best {
                    best = v;
                    best_rho = rho;
                }
            }
        }
        if level > 0 && (best - previous).abs() <= search.rel_tol * best.abs().max(1e-300) {
            return Ok(t * best);
        }
        previous = best;
        // shrink the radial window around the maximizer, staying in range
        let width = (hi / lo).powf(0.25);
        lo = (best_rho / width).max(xi_cap * 1e-9);
        hi = (best_rho * width).min(xi_cap);
        if lo >= hi {
            lo = hi / 2.0;
        }
    }
    Err(Error::SearchNonConvergence { low: previous, high: best * t })
}

/// Verify `max-tail(t, r) <= C_fit * pruitt_upper_bound(t, r)` across a
/// `(t, r)` grid with one fitted constant (minimal `C` passing every cell
/// at the 3-sigma allowance); the report carries `C_fit` and flags cells
/// that would need more than `C_fit` even after the allowance.
pub fn check_pruitt<Q>(
    spec: &ProcessSpec,
    symbol: Q,
    grid: &[(f64, f64)],
    n_mc: usize,
    controls: &McControls,
    stream: RngStream,
) -> Result<BoundCheckReport>
where
    Q: Fn(&[f64], &[f64]) -> Complex64,
{
    let x0 = vec![0.0; spec.dim()];
    let homogeneous = spec.is_spatially_homogeneous();
    let search = XiSearchConfig::default();
    let mut report = BoundCheckReport::new("pruitt", format!("{spec:?}"));
    let mut cells = Vec::with_capacity(grid.len());
    for (gi, &(t, r)) in grid.iter().enumerate() {
        let tail = estimate_max_tail(spec, &x0, t, r, n_mc, controls, stream.substream(gi as u64 + 1))?;
        let bound = pruitt_upper_bound(&symbol, &x0, t, r, homogeneous, &search)?;
        cells.push((t, r, tail, bound));
    }
    let mut c_fit = 0.0f64;
    for (_, _, tail, bound) in &cells {
        if *bound > 0.0 {
            c_fit = c_fit.max((tail.prob_hat - 3.0 * tail.std_err).max(0.0) / bound);
        } else if tail.prob_hat - 3.0 * tail.std_err > 0.0 {
            return Err(Error::numeric(
                "symbol bound vanished on a cell with a positive tail".to_string(),
            ));
        }
    }
    report.push_constant("C_fit", c_fit);
    for (t, r, tail, bound) in cells {
        let idx = report.entries.len();
        let rhs = c_fit * bound;
        report.entries.push(BoundCheckEntry {
            params: vec![("t".into(), t), ("r".into(), r)],
            lhs: tail.prob_hat,
            rhs,
            std_err: tail.std_err,
        });
        if tail.prob_hat - 3.0 * tail.std_err > rhs {
            report.violations.push(idx);
        }
    }
    Ok(report)
}
