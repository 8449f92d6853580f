//! The escape-probability function `alpha(h, a)`, the scaling class
//! membership check built on it, and the Ottaviani-type inequality.

use super::report::{BoundCheckEntry, BoundCheckReport};
use super::{default_x_grid, McControls};
use crate::error::{Error, Result};
use crate::paths::{sample_endpoint, ProcessSpec};
use crate::rng::{mc_fanout, RngStream};
use crate::stats;
use serde::{Deserialize, Serialize};

/// Parameters of the scaling class: membership means
/// `alpha(h, a) <= C (h / a^{1/H})^beta` for small `h`, `a`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MClassSpec {
    pub h_index: f64,
    pub beta: f64,
    pub c: f64,
    pub h0: f64,
    pub a0: f64,
}

impl MClassSpec {
    pub fn validate(&self) -> Result<()> {
        if [self.h_index, self.beta, self.c, self.h0, self.a0].iter().any(|&v| !(v > 0.0)) {
            return Err(Error::invalid("all M-class parameters must be positive"));
        }
        Ok(())
    }
}

/// Monte Carlo estimate of
/// `alpha(h, a) = sup { P(s, x, B(x, a)^c) : x in grid, 0 <= s <= h }`,
/// the sup taken over a geometric `s`-grid ending at `h` and the spatial
/// spot-check grid (one point for homogeneous processes).
pub fn estimate_alpha_function(
    spec: &ProcessSpec,
    h: f64,
    a: f64,
    n_mc: usize,
    controls: &McControls,
    stream: RngStream,
) -> Result<f64> {
    if h < 0.0 || !(a > 0.0) {
        return Err(Error::precondition("need h >= 0 and a > 0"));
    }
    if h == 0.0 {
        return Ok(0.0); // X(0) = x surely
    }
    let xs = default_x_grid(spec);
    let s_grid: Vec<f64> = (0..6).map(|k| h * 0.5f64.powi(k)).collect();
    let mut sup = 0.0f64;
    for (xi, x) in xs.iter().enumerate() {
        for (si, &s) in s_grid.iter().enumerate() {
            let hits: usize = mc_fanout(
                n_mc,
                stream.substream((xi * s_grid.len() + si) as u64 + 1),
                |_, st| {
                    let end = sample_endpoint(spec, x, s, controls.endpoint_steps, st)
                        .expect("simulation failed");
                    let dist: f64 = end
                        .iter()
                        .zip(x)
                        .map(|(p, q)| (p - q) * (p - q))
                        .sum::<f64>()
                        .sqrt();
                    usize::from(dist >= a)
                },
            )
            .into_iter()
            .sum();
            sup = sup.max(hits as f64 / n_mc as f64);
        }
    }
    Ok(sup)
}

/// Verify `alpha_hat(h, a) <= C (h a^{-1/H})^beta` over an `(h, a)` grid,
/// fitting the minimal `C` with a 3-sigma allowance.
pub fn check_m_class(
    spec: &ProcessSpec,
    mspec: &MClassSpec,
    grid: &[(f64, f64)],
    n_mc: usize,
    controls: &McControls,
    stream: RngStream,
) -> Result<BoundCheckReport> {
    mspec.validate()?;
    for &(h, a) in grid {
        if !(h * a.powf(-1.0 / mspec.h_index) < 1.0) {
            return Err(Error::precondition(format!(
                "grid point (h={h}, a={a}) violates h a^(-1/H) < 1"
            )));
        }
        if !(h < mspec.h0 && a < mspec.a0) {
            return Err(Error::precondition(format!(
                "grid point (h={h}, a={a}) outside the cutoffs (h0={}, a0={})",
                mspec.h0, mspec.a0
            )));
        }
    }
    let mut report = BoundCheckReport::new("m_class", format!("{spec:?}"));
    let mut c_fit = 0.0f64;
    let mut cells = Vec::with_capacity(grid.len());
    for (gi, &(h, a)) in grid.iter().enumerate() {
        let alpha_hat =
            estimate_alpha_function(spec, h, a, n_mc, controls, stream.substream(gi as u64 + 1))?;
        let envelope = (h * a.powf(-1.0 / mspec.h_index)).powf(mspec.beta);
        let std_err = stats::binomial_std_err(alpha_hat, n_mc);
        c_fit = c_fit.max(((alpha_hat - 3.0 * std_err).max(0.0)) / envelope);
        cells.push((h, a, alpha_hat, envelope, std_err));
    }
    report.push_constant("C_fit", c_fit);
    for (h, a, alpha_hat, envelope, std_err) in cells {
        let idx = report.entries.len();
        let rhs = mspec.c * envelope;
        report.entries.push(BoundCheckEntry {
            params: vec![("h".into(), h), ("a".into(), a)],
            lhs: alpha_hat,
            rhs,
            std_err,
        });
        if alpha_hat - 3.0 * std_err > rhs {
            report.violations.push(idx);
        }
    }
    Ok(report)
}

/// Check the Ottaviani-type inequality
/// `P{sup_{s<=h} |X - x| > a} <= P{|X(h) - x| > a/2} / (1 - alpha(h, a/2))`
/// within three combined standard errors.
pub fn verify_ottaviani(
    spec: &ProcessSpec,
    x: &[f64],
    h: f64,
    a: f64,
    n_mc: usize,
    controls: &McControls,
    stream: RngStream,
) -> Result<BoundCheckReport> {
    let alpha_half = estimate_alpha_function(spec, h, a / 2.0, n_mc, controls, stream.substream(1))?;
    let alpha_se = stats::binomial_std_err(alpha_half, n_mc);
    if alpha_half + 3.0 * alpha_se >= 1.0 {
        return Err(Error::numeric(format!(
            "alpha(h, a/2) = {alpha_half} is too close to 1 for the Ottaviani denominator"
        )));
    }
    let sup_tail = super::tail::estimate_max_tail(spec, x, h, a, n_mc, controls, stream.substream(2))?;
    let end_hits: usize = mc_fanout(n_mc, stream.substream(3), |_, st| {
        let end = sample_endpoint(spec, x, h, controls.endpoint_steps, st).expect("simulation failed");
        let dist: f64 = end.iter().zip(x).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
        usize::from(dist > a / 2.0)
    })
    .into_iter()
    .sum();
    let end_tail = end_hits as f64 / n_mc as f64;
    let end_se = stats::binomial_std_err(end_tail, n_mc);

    let denom = 1.0 - alpha_half;
    let rhs = end_tail / denom;
    // first-order error propagation through the ratio
    let rhs_se = end_se / denom + end_tail * alpha_se / (denom * denom);
    let combined = (sup_tail.std_err.powi(2) + rhs_se.powi(2)).sqrt();

    let mut report = BoundCheckReport::new("ottaviani", format!("{spec:?}"));
    report.entries.push(BoundCheckEntry {
        params: vec![("h".into(), h), ("a".into(), a)],
        lhs: sup_tail.prob_hat,
        rhs,
        std_err: combined,
    });
    if sup_tail.prob_hat > rhs + 3.0 * combined {
        report.violations.push(0);
    }
    report.push_constant("alpha(h,a/2)", alpha_half);
    Ok(report)
}
