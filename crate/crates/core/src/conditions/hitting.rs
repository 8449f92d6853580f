//! Delayed hitting probabilities: the occupation-ratio upper bound
//! `int_t^{2T} P(s, x, B) ds / inf_y int_0^{T-t} P(s, y, B) ds` and the
//! Monte Carlo estimate it dominates.

use super::ball::estimate_ball_probability;
use super::tail::TailEstimate;
use super::McControls;
use crate::error::{Error, Result};
use crate::paths::{simulate, ProcessSpec};
use crate::rng::{mc_fanout, RngStream};
use crate::stats;

/// Transition probability of the target set, either closed-form or
/// Monte Carlo. The bound is valid for any fixed target set containing
/// the ball, evaluated consistently in numerator and denominator.
pub enum TransitionBallProb<'a> {
    /// `f(s, start, center, half_width)` for the chosen target set.
    Closed(&'a (dyn Fn(f64, &[f64], &[f64], f64) -> f64 + Sync)),
    MonteCarlo {
        spec: &'a ProcessSpec,
        n_mc: usize,
        controls: McControls,
    },
}

impl TransitionBallProb<'_> {
    fn eval(&self, s: f64, start: &[f64], center: &[f64], r: f64, stream: RngStream) -> Result<f64> {
        match self {
            TransitionBallProb::Closed(f) => Ok(f(s, start, center, r)),
            TransitionBallProb::MonteCarlo { spec, n_mc, controls } => Ok(estimate_ball_probability(
                spec, s, start, center, r, *n_mc, controls, stream,
            )?
            .prob_hat),
        }
    }
}

/// Closed-form transition probability of the axis cube
/// `[x - r, x + r]^d` for Brownian motion with per-coordinate scale
/// `sigma` (product of erf differences). The cube contains the ball of
/// radius `r`, so hitting the ball implies hitting the cube and the
/// occupation-ratio bound computed from cubes dominates ball hitting.
pub fn brownian_cube_prob(sigma: f64) -> impl Fn(f64, &[f64], &[f64], f64) -> f64 {
    move |s: f64, start: &[f64], center: &[f64], r: f64| {
        if s <= 0.0 {
            return if start.iter().zip(center).all(|(y, c)| (y - c).abs() <= r) {
                1.0
            } else {
                0.0
            };
        }
        let scale = sigma * s.sqrt() * 2.0f64.sqrt();
        start
            .iter()
            .zip(center)
            .map(|(y, c)| {
                let hi = statrs::function::erf::erf((c + r - y) / scale);
                let lo = statrs::function::erf::erf((c - r - y) / scale);
                0.5 * (hi - lo)
            })
            .product()
    }
}

/// Composite Simpson on a geometric grid (log substitution), `nodes`
/// intervals.
fn simpson_log<F: FnMut(f64) -> Result<f64>>(mut f: F, s_min: f64, s_max: f64, nodes: usize) -> Result<f64> {
    debug_assert!(s_min > 0.0 && s_min < s_max);
    let n = nodes + nodes % 2;
    let (a, b) = (s_min.ln(), s_max.ln());
    let h = (b - a) / n as f64;
    let mut acc = 0.0;
    for i in 0..=n {
        let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        let s = (a + i as f64 * h).exp();
        acc += w * f(s)? * s; // ds = s du
    }
    Ok(acc * h / 3.0)
}

/// Evaluate the occupation-ratio bound
/// `int_t^{2T} P(s, x, B(x, r)) ds / inf_y int_0^{T-t} P(s, y, B(x, r)) ds`,
/// the infimum taken over the center, the axis boundary points and the
/// cube corners at distance scale `r` (the extreme starts for radially
/// monotone transition densities). The denominator integral drops
/// `[0, (T-t) * 1e-6]`, which only strengthens the bound.
pub fn hitting_probability_bound(
    prob: &TransitionBallProb<'_>,
    x: &[f64],
    r: f64,
    t: f64,
    t_horizon: f64,
    s_nodes: usize,
    stream: RngStream,
) -> Result<f64> {
    if !(t > 0.0 && t <= t_horizon / 2.0) {
        return Err(Error::precondition("need 0 < t <= T/2"));
    }
    let d = x.len();
    let mut tick = 0u64;
    let mut next_stream = || {
        tick += 1;
        stream.substream(tick)
    };

    let numerator = simpson_log(
        |s| prob.eval(s, x, x, r, next_stream()),
        t,
        2.0 * t_horizon,
        s_nodes,
    )?;

    // inf over starts in the target: center, faces, corners
    let mut starts = vec![x.to_vec()];
    for i in 0..d {
        for sign in [1.0, -1.0] {
            let mut y = x.to_vec();
            y[i] += sign * r;
            starts.push(y);
        }
    }
    for mask in 0..(1u32 << d) {
        let mut y = x.to_vec();
        for (i, yc) in y.iter_mut().enumerate() {
            *yc += if mask & (1 << i) != 0 { r } else { -r };
        }
        starts.push(y);
    }

    let s_min = (t_horizon - t) * 1e-6;
    let mut denominator = f64::INFINITY;
    for y in &starts {
        let v = simpson_log(
            |s| prob.eval(s, y, x, r, next_stream()),
            s_min,
            t_horizon - t,
            s_nodes,
        )?;
        denominator = denominator.min(v);
    }
    if denominator < 1e-12 {
        return Err(Error::numeric(format!(
            "hitting-bound denominator {denominator:.3e} too small"
        )));
    }
    Ok(numerator / denominator)
}

/// Monte Carlo `P^x { inf_{t<=s<=T} |X(s) - center| <= r }` via the grid
/// minimum. Errors out when `r` is below four typical one-step
/// displacements (tunnel-through danger).
pub fn estimate_hitting_probability(
    spec: &ProcessSpec,
    x: &[f64],
    target_center: &[f64],
    r: f64,
    t: f64,
    t_horizon: f64,
    n_mc: usize,
    controls: &McControls,
    stream: RngStream,
) -> Result<TailEstimate> {
    if !(t > 0.0 && t <= t_horizon) {
        return Err(Error::precondition("need 0 < t <= T"));
    }
    let steps = controls.path_steps;
    // probe the typical one-step displacement on an out-of-band stream
    let probe = simulate(spec, x, t_horizon, steps, stream.substream(u64::MAX))?;
    let mut step_norms: Vec<f64> = (1..probe.len().min(257)).map(|i| probe.dist(i, i - 1)).collect();
    step_norms.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let typical = stats::quantile_sorted(&step_norms, 0.5);
    if r < 4.0 * typical {
        return Err(Error::precondition(format!(
            "target radius {r} below 4x the typical one-step displacement {typical:.3e}; \
             refine the grid"
        )));
    }
    let first = ((t / t_horizon) * steps as f64).floor() as usize;
    let hits: usize = mc_fanout(n_mc, stream, |_, s| {
        let path = simulate(spec, x, t_horizon, steps, s).expect("simulation failed");
        let hit = (first..path.len()).any(|i| {
            let d2: f64 = path
                .point(i)
                .iter()
                .zip(target_center)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            d2.sqrt() <= r
        });
        usize::from(hit)
    })
    .into_iter()
    .sum();
    let prob_hat = hits as f64 / n_mc as f64;
    Ok(TailEstimate {
        t,
        threshold: r,
        prob_hat,
        n_mc,
        std_err: stats::binomial_std_err(prob_hat, n_mc),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_radius_hits_surely() {
        let spec = ProcessSpec::brownian(2);
        let est = estimate_hitting_probability(
            &spec,
            &[0.0, 0.0],
            &[0.0, 0.0],
            100.0,
            0.5,
            1.0,
            300,
            &Default::default(),
            RngStream::new(1, 0),
        )
        .unwrap();
        assert_eq!(est.prob_hat, 1.0);
    }

    #[test]
    fn interval_collapse_matches_single_time_ball_probability() {
        // t = T: the event is |X(T) - center| <= r (up to the endpoint grid
        // point), cross-checked against the endpoint estimator
        let spec = ProcessSpec::brownian(1);
        let (r, t_hor) = (0.5, 1.0);
        let n_mc = 8000;
        let controls = McControls { path_steps: 256, ..Default::default() };
        let hit = estimate_hitting_probability(
            &spec,
            &[0.0],
            &[0.0],
            r,
            t_hor,
            t_hor,
            n_mc,
            &controls,
            RngStream::new(2, 0),
        )
        .unwrap();
        let ball = estimate_ball_probability(
            &spec,
            t_hor,
            &[0.0],
            &[0.0],
            r,
            n_mc,
            &controls,
            RngStream::new(2, 1),
        )
        .unwrap();
        let tol = 3.0 * (hit.std_err.powi(2) + ball.std_err.powi(2)).sqrt();
        assert!(
            (hit.prob_hat - ball.prob_hat).abs() <= tol,
            "{} vs {}",
            hit.prob_hat,
            ball.prob_hat
        );
    }

    #[test]
    fn guard_rejects_too_small_targets() {
        let spec = ProcessSpec::brownian(2);
        let res = estimate_hitting_probability(
            &spec,
            &[0.0, 0.0],
            &[0.5, 0.0],
            1e-6,
            0.25,
            1.0,
            300,
            &Default::default(),
            RngStream::new(3, 0),
        );
        assert!(res.is_err());
    }

    #[test]
    fn numerator_cap_bounds_the_ratio() {
        // the numerator integrand is a probability, so the ratio is at
        // most 2T / denominator
        let closed = brownian_cube_prob(1.0);
        let prob = TransitionBallProb::Closed(&closed);
        let (t, t_hor, r) = (0.25, 1.0, 0.2);
        let bound =
            hitting_probability_bound(&prob, &[0.0, 0.0], r, t, t_hor, 64, RngStream::new(4, 0)).unwrap();
        let denom_field = simpson_log(
            |s| Ok(closed(s, &[r, r], &[0.0, 0.0], r)),
            (t_hor - t) * 1e-6,
            t_hor - t,
            64,
        )
        .unwrap();
        assert!(bound <= 2.0 * t_hor / denom_field * (1.0 + 1e-9));
        assert!(bound.is_finite() && bound > 0.0);
    }

    #[test]
    fn monte_carlo_hitting_stays_below_closed_form_bound() {
        let spec = ProcessSpec::brownian(2);
        let closed = brownian_cube_prob(1.0);
        let prob = TransitionBallProb::Closed(&closed);
        let t_hor = 1.0;
        let controls = McControls { path_steps: 4096, ..Default::default() };
        for (t, r) in [(0.25, 0.1), (0.5, 0.15)] {
            let bound = hitting_probability_bound(
                &prob,
                &[0.0, 0.0],
                r,
                t,
                t_hor,
                64,
                RngStream::new(5, 0),
            )
            .unwrap();
            let est = estimate_hitting_probability(
                &spec,
                &[0.0, 0.0],
                &[0.0, 0.0],
                r,
                t,
                t_hor,
                4000,
                &controls,
                RngStream::new(5, 1),
            )
            .unwrap();
            assert!(
                est.prob_hat <= bound + 3.0 * est.std_err,
                "t={t} r={r}: MC {} vs bound {bound}",
                est.prob_hat
            );
        }
    }
}
