//! Stable subordinators and subordination of a base process.

use super::sampler::standard_positive_stable;
use super::{simulate, ProcessSpec, SamplePath};
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Guard against pathological subordinator excursions: `tau_T` beyond
/// this multiple of the typical scale `T^{1/rho}` aborts the run.
pub const DEFAULT_HORIZON_MULTIPLIER: f64 = 1e6;

/// Nondecreasing path of the rho-stable subordinator with
/// `E exp(-lambda tau_t) = exp(-t lambda^rho)`.
pub fn simulate_subordinator(
    rho: f64,
    t_horizon: f64,
    n_steps: usize,
    stream: RngStream,
) -> Result<SamplePath> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::invalid("subordinator index must lie in (0, 1)"));
    }
    let dt = t_horizon / n_steps as f64;
    let inc_scale = dt.powf(1.0 / rho);
    let mut rng = stream.rng();
    let mut values = Vec::with_capacity(n_steps + 1);
    let mut level = 0.0f64;
    values.push(level);
    for _ in 0..n_steps {
        level += inc_scale * standard_positive_stable(rho, &mut rng);
        values.push(level);
    }
    SamplePath::new(0.0, dt, 1, values)
}

/// Read a path at arbitrary times using the last grid point `<= t`
/// (the cadlag left-of-jump convention for grid approximation).
pub fn read_path_at_times(base: &SamplePath, times: &[f64], out_dt: f64) -> Result<SamplePath> {
    let n_max = base.len() - 1;
    let mut values = Vec::with_capacity(times.len() * base.dim);
    for &t in times {
        if t < base.t0 {
            return Err(Error::precondition(format!(
                "time {t} precedes the base grid start {}",
                base.t0
            )));
        }
        let idx = (((t - base.t0) / base.dt).floor() as usize).min(n_max);
        values.extend_from_slice(base.point(idx));
    }
    SamplePath::new(0.0, out_dt, base.dim, values)
}

/// Subordinate a base process: `Y_t = X(tau_t)`. The subordinator runs on
/// the requested grid; the base process runs on an adaptive grid of the
/// same step count covering `[0, tau_T]`, and `Y` reads `X` off at the
/// last base-grid point below each `tau_{t_i}`.
pub fn subordinate_path(
    base: &ProcessSpec,
    rho: f64,
    x0: &[f64],
    t_horizon: f64,
    n_steps: usize,
    stream: RngStream,
) -> Result<SamplePath> {
    subordinate_path_with_horizon(base, rho, x0, t_horizon, n_steps, DEFAULT_HORIZON_MULTIPLIER, stream)
}

pub fn subordinate_path_with_horizon(
    base: &ProcessSpec,
    rho: f64,
    x0: &[f64],
    t_horizon: f64,
    n_steps: usize,
    horizon_multiplier: f64,
    stream: RngStream,
) -> Result<SamplePath> {
    let tau = simulate_subordinator(rho, t_horizon, n_steps, stream.substream(1))?;
    let tau_end = tau.last()[0];
    let cap = horizon_multiplier * t_horizon.powf(1.0 / rho);
    if tau_end > cap {
        return Err(Error::numeric(format!(
            "subordinator reached {tau_end:.3e}, beyond the configured horizon \
             {cap:.3e}; rerun with a larger horizon multiplier"
        )));
    }
    let base_path = simulate(base, x0, tau_end.max(f64::MIN_POSITIVE), n_steps, stream.substream(2))?;
    let times: Vec<f64> = (0..tau.len()).map(|i| tau.point(i)[0]).collect();
    read_path_at_times(&base_path, &times, t_horizon / n_steps as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::mc_fanout;
    use crate::stats;

    #[test]
    fn subordinator_paths_nondecreasing() {
        for rho in [0.3, 0.5, 0.8] {
            let p = simulate_subordinator(rho, 1.0, 2048, RngStream::new(31, 0)).unwrap();
            for i in 1..p.len() {
                assert!(p.point(i)[0] >= p.point(i - 1)[0]);
            }
        }
    }

    #[test]
    fn subordinator_laplace_transform_at_unit_time() {
        let n = 100_000;
        let rho = 0.7;
        let draws: Vec<f64> = mc_fanout(n, RngStream::new(32, 0), |_, s| {
            simulate_subordinator(rho, 1.0, 8, s).unwrap().last()[0]
        });
        for lam in [0.5, 1.0, 2.0, 4.0] {
            let lt = stats::empirical_laplace(&draws, lam);
            let target = (-(lam as f64).powf(rho)).exp();
            assert!(
                (lt - target).abs() < 4.0 / (n as f64).sqrt(),
                "lambda {lam}: {lt} vs {target}"
            );
        }
    }

    #[test]
    fn identity_time_change_reproduces_base_path() {
        let spec = ProcessSpec::brownian(2);
        let base = simulate(&spec, &[0.0, 0.0], 1.0, 256, RngStream::new(33, 0)).unwrap();
        let times: Vec<f64> = (0..base.len()).map(|i| base.time(i)).collect();
        let replay = read_path_at_times(&base, &times, base.dt).unwrap();
        assert_eq!(base.values, replay.values);
    }

    #[test]
    fn brownian_half_subordination_is_cauchy() {
        // BM time-changed by a 1/2-stable subordinator is Cauchy with
        // scale 1/sqrt(2): CF exp(-t |xi| / sqrt(2)).
        let spec = ProcessSpec::Subordinated {
            base: Box::new(ProcessSpec::brownian(1)),
            rho: 0.5,
        };
        let n = 60_000;
        let t = 1.0;
        let draws: Vec<f64> = mc_fanout(n, RngStream::new(34, 0), |_, s| {
            simulate(&spec, &[0.0], t, 64, s).unwrap().last()[0]
        });
        let c = 1.0 / 2.0f64.sqrt();
        for xi in [0.5, 1.0, 2.0] {
            let cf = stats::empirical_cf(&draws, xi);
            let target = (-c * t * (xi as f64).abs()).exp();
            // grid reading adds a small negative time-bias; allow MC tol
            // plus a bias budget of one grid step in the exponent
            let bias = c * xi * (t / 64.0) * 2.0;
            let tol = 4.0 / (n as f64).sqrt() + bias;
            assert!(
                (cf.re - target).abs() < tol && cf.im.abs() < tol,
                "xi {xi}: {cf} vs {target}"
            );
        }
    }

    #[test]
    fn refinement_shrinks_distribution_gap() {
        // distributional self-convergence: the KS distance from a coarse
        // subordinated grid to a fine reference drops as the grid refines.
        let spec = ProcessSpec::Subordinated {
            base: Box::new(ProcessSpec::brownian(1)),
            rho: 0.5,
        };
        let n = 30_000;
        let sample = |steps: usize, tag: u64| -> Vec<f64> {
            mc_fanout(n, RngStream::new(35, tag), |_, s| {
                simulate(&spec, &[0.0], 1.0, steps, s).unwrap().last()[0]
            })
        };
        let reference = sample(4096, 1);
        let coarse = stats::ks_statistic(&sample(16, 2), &reference);
        let fine = stats::ks_statistic(&sample(256, 3), &reference);
        let noise_floor = 2.0 / (n as f64).sqrt();
        assert!(
            fine < 0.6 * coarse + noise_floor,
            "coarse gap {coarse}, fine gap {fine}"
        );
    }

    #[test]
    fn horizon_guard_fires() {
        let base = ProcessSpec::brownian(1);
        // multiplier below the median excursion scale trips immediately
        let err = subordinate_path_with_horizon(
            &base,
            0.5,
            &[0.0],
            1.0,
            64,
            1e-9,
            RngStream::new(36, 0),
        );
        assert!(err.is_err());
    }
}
