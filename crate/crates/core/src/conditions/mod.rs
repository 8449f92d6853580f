//! Statistical verifiers for the hypotheses behind the dimension
//! identity: maximal-inequality tails, transition-ball probability
//! envelopes, the Ottaviani and Pruitt inequalities, delayed hitting
//! bounds, moment bounds and self-similarity tests.

mod alpha_fn;
mod ball;
mod hitting;
mod moment;
mod pruitt;
mod report;
mod selfsim;
mod tail;

pub use alpha_fn::{check_m_class, estimate_alpha_function, verify_ottaviani, MClassSpec};
pub use ball::{
    ball_probability_via_exponent, check_ball_bounds, estimate_ball_probability,
    BallBoundsParams, BallProbEstimate,
};
pub use hitting::{
    brownian_cube_prob, estimate_hitting_probability, hitting_probability_bound, TransitionBallProb,
};
pub use moment::check_moment_bound;
pub use pruitt::{check_pruitt, pruitt_upper_bound, XiSearchConfig};
pub use report::{BoundCheckEntry, BoundCheckReport};
pub use selfsim::check_self_similarity;
pub use tail::{check_a1, estimate_max_tail, TailEstimate};

/// Grid resolution used when a verifier needs whole paths; condition
/// estimates quote the grid sup/inf, which biases tails low and hitting
/// probabilities low (the safe direction for the inequalities checked).
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct McControls {
    /// Path steps per simulation when a sup/inf over time is needed.
    pub path_steps: usize,
    /// Euler steps for endpoint draws of state-dependent processes.
    pub endpoint_steps: usize,
    /// Ratio cap for the spread-based violation rule of two-sided
    /// envelope checks.
    pub spread_cap: f64,
}

impl Default for McControls {
    fn default() -> Self {
        Self {
            path_steps: 512,
            endpoint_steps: 64,
            spread_cap: 5.0,
        }
    }
}

/// Deterministic spatial spot-check grid for "for all x" hypotheses:
/// the origin, one unit vector and one off-axis point. Homogeneous
/// processes collapse it to the origin alone.
pub fn default_x_grid(spec: &crate::paths::ProcessSpec) -> Vec<Vec<f64>> {
    let d = spec.dim();
    if spec.is_spatially_homogeneous() {
        return vec![vec![0.0; d]];
    }
    let mut grid = vec![vec![0.0; d]];
    let mut e1 = vec![0.0; d];
    e1[0] = 1.0;
    grid.push(e1.clone());
    let mut far = vec![0.0; d];
    far[0] = 2.5;
    grid.push(far);
    grid
}
