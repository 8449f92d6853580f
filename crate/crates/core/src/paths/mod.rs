//! Sample-path simulation for every supported process family, on uniform
//! time grids with deterministic, splittable randomness.

mod dump;
mod levy;
mod sampler;
mod sde;
mod subordinate;

pub use dump::{read_path_dump, write_path_dump};
pub use levy::{sample_stable_increment, simulate_brownian_path, simulate_levy_path, stable_increment_vec};
pub use sampler::{
    standard_isotropic_stable, standard_normal_vec, standard_positive_stable,
    standard_symmetric_stable, uniform_direction,
};
pub use sde::{simulate_jump_diffusion, simulate_stable_like_sde};
pub use subordinate::{
    read_path_at_times, simulate_subordinator, subordinate_path, DEFAULT_HORIZON_MULTIPLIER,
};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::symbols::{JumpDiffusionSpec, StableLikeKernel, StableSpectralSpec};
use serde::{Deserialize, Serialize};

/// A cadlag path sampled on a uniform grid: `values` holds `n + 1` points
/// of dimension `dim`, row-major, starting at `start_x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePath {
    pub t0: f64,
    pub dt: f64,
    pub dim: usize,
    pub values: Vec<f64>,
}

impl SamplePath {
    pub fn new(t0: f64, dt: f64, dim: usize, values: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::invalid("path grid step must be positive"));
        }
        if dim == 0 || values.len() % dim != 0 || values.is_empty() {
            return Err(Error::invalid("path value buffer must hold whole points"));
        }
        let path = Self { t0, dt, dim, values };
        path.check_finite()?;
        Ok(path)
    }

    /// Number of grid points (`n_steps + 1`).
    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn start(&self) -> &[f64] {
        self.point(0)
    }

    pub fn last(&self) -> &[f64] {
        self.point(self.len() - 1)
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn horizon(&self) -> f64 {
        self.time(self.len() - 1)
    }

    /// Any non-finite coordinate is a hard error, never a silent NaN.
    pub fn check_finite(&self) -> Result<()> {
        if let Some(pos) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::numeric(format!(
                "non-finite path value at flat index {pos}"
            )));
        }
        Ok(())
    }

    /// Euclidean distance between points `i` and `j`.
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.point(i)
            .iter()
            .zip(self.point(j))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Largest distance from the start over grid times `<= t`.
    pub fn sup_distance_from_start(&self, upto: usize) -> f64 {
        let x0 = self.start();
        let mut sup = 0.0f64;
        for i in 1..=upto.min(self.len() - 1) {
            let d: f64 = self
                .point(i)
                .iter()
                .zip(x0)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            sup = sup.max(d);
        }
        sup
    }
}

/// Process family selector.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProcessSpec {
    BrownianMotion { d: usize, sigma: f64 },
    StableLevy(StableSpectralSpec),
    Subordinator { rho: f64 },
    Subordinated { base: Box<ProcessSpec>, rho: f64 },
    StableLike(StableLikeKernel),
    JumpDiffusion(JumpDiffusionSpec),
}

impl ProcessSpec {
    pub fn isotropic_stable(alpha: f64, d: usize) -> Result<Self> {
        Ok(ProcessSpec::StableLevy(StableSpectralSpec::isotropic(alpha, d, 1.0)?))
    }

    pub fn brownian(d: usize) -> Self {
        ProcessSpec::BrownianMotion { d, sigma: 1.0 }
    }

    pub fn dim(&self) -> usize {
        match self {
            ProcessSpec::BrownianMotion { d, .. } => *d,
            ProcessSpec::StableLevy(spec) => spec.d,
            ProcessSpec::Subordinator { .. } => 1,
            ProcessSpec::Subordinated { base, .. } => base.dim(),
            ProcessSpec::StableLike(kernel) => kernel.d,
            ProcessSpec::JumpDiffusion(spec) => spec.d,
        }
    }

    /// Self-similarity index `H` with `X(ct) ~ c^H X(t)`: exact for the
    /// Lévy families, the nominal local index for state-dependent ones.
    pub fn expected_h(&self) -> f64 {
        match self {
            ProcessSpec::BrownianMotion { .. } => 0.5,
            ProcessSpec::StableLevy(spec) => 1.0 / spec.alpha,
            ProcessSpec::Subordinator { rho } => 1.0 / rho,
            ProcessSpec::Subordinated { base, rho } => base.expected_h() / rho,
            ProcessSpec::StableLike(kernel) => 1.0 / kernel.alpha,
            ProcessSpec::JumpDiffusion(spec) => 1.0 / spec.alpha,
        }
    }

    /// Whether the law of increments is independent of the state.
    pub fn is_spatially_homogeneous(&self) -> bool {
        match self {
            ProcessSpec::BrownianMotion { .. }
            | ProcessSpec::StableLevy(_)
            | ProcessSpec::Subordinator { .. } => true,
            ProcessSpec::Subordinated { base, .. } => base.is_spatially_homogeneous(),
            ProcessSpec::StableLike(kernel) => matches!(
                kernel.form,
                crate::symbols::KappaForm::Constant { .. }
            ),
            ProcessSpec::JumpDiffusion(spec) => {
                spec.drift.is_zero()
                    && matches!(spec.spectral, crate::symbols::SpectralField::Constant(_))
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ProcessSpec::BrownianMotion { d, sigma } => {
                if *d == 0 || !(*sigma > 0.0) {
                    return Err(Error::invalid("Brownian motion needs d >= 1 and sigma > 0"));
                }
            }
            ProcessSpec::StableLevy(spec) => spec.validate()?,
            ProcessSpec::Subordinator { rho } => {
                if !(*rho > 0.0 && *rho < 1.0) {
                    return Err(Error::invalid("subordinator index must lie in (0, 1)"));
                }
            }
            ProcessSpec::Subordinated { base, rho } => {
                if !(*rho > 0.0 && *rho < 1.0) {
                    return Err(Error::invalid("subordination index must lie in (0, 1)"));
                }
                base.validate()?;
            }
            ProcessSpec::StableLike(kernel) => kernel.validate()?,
            ProcessSpec::JumpDiffusion(spec) => spec.validate()?,
        }
        Ok(())
    }
}

/// Simulate one path of any process family on `[0, T]` with `n_steps`
/// uniform steps, started at `x0`.
pub fn simulate(
    spec: &ProcessSpec,
    x0: &[f64],
    t_horizon: f64,
    n_steps: usize,
    stream: RngStream,
) -> Result<SamplePath> {
    spec.validate()?;
    if !(t_horizon > 0.0) || n_steps == 0 {
        return Err(Error::precondition("need T > 0 and n_steps >= 1"));
    }
    if x0.len() != spec.dim() {
        return Err(Error::precondition(format!(
            "x0 has dimension {}, process needs {}",
            x0.len(),
            spec.dim()
        )));
    }
    match spec {
        ProcessSpec::BrownianMotion { sigma, .. } => {
            simulate_brownian_path(x0, *sigma, t_horizon, n_steps, stream)
        }
        ProcessSpec::StableLevy(s) => simulate_levy_path(s, x0, t_horizon, n_steps, stream),
        ProcessSpec::Subordinator { rho } => {
            simulate_subordinator(*rho, t_horizon, n_steps, stream)
        }
        ProcessSpec::Subordinated { base, rho } => {
            subordinate_path(base, *rho, x0, t_horizon, n_steps, stream)
        }
        ProcessSpec::StableLike(kernel) => {
            simulate_stable_like_sde(kernel, x0, t_horizon, n_steps, stream)
        }
        ProcessSpec::JumpDiffusion(s) => {
            simulate_jump_diffusion(s, x0, t_horizon, n_steps, stream)
        }
    }
}

/// Draw one endpoint `X_t` started at `x0`. For the Lévy families this is
/// a single exact increment; state-dependent schemes step an Euler grid of
/// `endpoint_steps` points.
pub fn sample_endpoint(
    spec: &ProcessSpec,
    x0: &[f64],
    t: f64,
    endpoint_steps: usize,
    stream: RngStream,
) -> Result<Vec<f64>> {
    let steps = match spec {
        ProcessSpec::BrownianMotion { .. } | ProcessSpec::StableLevy(_) | ProcessSpec::Subordinator { .. } => 1,
        ProcessSpec::Subordinated { .. } => endpoint_steps.max(4),
        _ => endpoint_steps.max(4),
    };
    let path = simulate(spec, x0, t, steps, stream)?;
    Ok(path.last().to_vec())
}
