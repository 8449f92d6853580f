//! Distributional self-similarity: two-sample KS between `r^-H X(rt)` and
//! `X(t)`.

use super::report::{BoundCheckEntry, BoundCheckReport};
use super::McControls;
use crate::error::{Error, Result};
use crate::paths::{sample_endpoint, ProcessSpec};
use crate::rng::{mc_fanout, RngStream};
use crate::stats;

const KS_LEVEL: f64 = 1e-3;

/// Two-sample KS test of `law(r^-H X(rt)) = law(X(t))` for a process
/// started at the origin; the comparison runs on the signed value in
/// d = 1 and on the Euclidean norm in higher dimensions. Passes at level
/// 1e-3; a wrong `H` separates the scales and fails.
pub fn check_self_similarity(
    spec: &ProcessSpec,
    h_index: f64,
    r_scale: f64,
    t: f64,
    n_mc: usize,
    controls: &McControls,
    stream: RngStream,
) -> Result<BoundCheckReport> {
    if !(r_scale > 0.0 && t > 0.0) {
        return Err(Error::precondition("need r > 0 and t > 0"));
    }
    let d = spec.dim();
    let x0 = vec![0.0; d];
    let reduce = |v: Vec<f64>| -> f64 {
        if d == 1 {
            v[0]
        } else {
            v.iter().map(|c| c * c).sum::<f64>().sqrt()
        }
    };
    let scaled: Vec<f64> = mc_fanout(n_mc, stream.substream(1), |_, s| {
        let end = sample_endpoint(spec, &x0, r_scale * t, controls.endpoint_steps, s)
            .expect("simulation failed");
        reduce(end) * r_scale.powf(-h_index)
    });
    let base: Vec<f64> = mc_fanout(n_mc, stream.substream(2), |_, s| {
        let end = sample_endpoint(spec, &x0, t, controls.endpoint_steps, s).expect("simulation failed");
        reduce(end)
    });
    let outcome = stats::ks_two_sample(&scaled, &base, KS_LEVEL);
    let mut report = BoundCheckReport::new("self_similarity", format!("{spec:?}"));
    report.entries.push(BoundCheckEntry {
        params: vec![("H".into(), h_index), ("r".into(), r_scale), ("t".into(), t)],
        lhs: outcome.statistic,
        rhs: outcome.p_value,
        std_err: 0.0,
    });
    report.push_constant("ks_statistic", outcome.statistic);
    report.push_constant("p_value", outcome.p_value);
    if !outcome.passes() {
        report.violations.push(0);
    }
    Ok(report)
}
