//! Characteristic exponents and state-dependent symbols.
//!
//! Everything here follows one sign convention: an exponent/symbol `psi`
//! is stored so that `E exp(i<xi, X_t>) = exp(-t psi(xi))` (and the
//! state-dependent analogue for Lévy-type processes), hence `Re psi >= 0`
//! always. Evaluators return `psi`, never `-psi`.

mod growth;
mod levy;
mod quadrature;
mod stable;
mod stable_like;
mod statedep;

pub use growth::{check_growth_condition, GrowthConditionSpec};
pub use levy::{eval_levy_exponent, isotropic_density_coefficient, LevyMeasure, LevyTriplet};
pub use quadrature::{sphere_directions, QuadratureConfig};
pub use stable::{
    eval_stable_exponent, isotropic_projection_moment, SpectralMeasure, StableSpectralSpec,
};
pub use stable_like::{
    eval_stable_like_symbol, isotropic_stable_like_symbol, KappaForm, StableLikeKernel,
};
pub use statedep::{eval_jump_diffusion_symbol, DriftField, JumpDiffusionSpec, SpectralField, StateDependentSymbol};

/// Surface area of the unit sphere in `R^d`.
pub fn unit_sphere_area(d: usize) -> f64 {
    let d = d as f64;
    2.0 * std::f64::consts::PI.powf(d / 2.0) / statrs::function::gamma::gamma(d / 2.0)
}

/// The radial constant `c_alpha = int_0^inf (1 - cos s) s^{-1-alpha} ds`
/// for `alpha` in (0, 2): equals `Gamma(1-alpha) cos(pi alpha / 2) / alpha`
/// away from 1 and `pi/2` at 1.
pub fn radial_one_minus_cos_moment(alpha: f64) -> f64 {
    use statrs::function::gamma::gamma;
    assert!(alpha > 0.0 && alpha < 2.0);
    if (alpha - 1.0).abs() < 1e-9 {
        return std::f64::consts::FRAC_PI_2;
    }
    gamma(1.0 - alpha) * (std::f64::consts::FRAC_PI_2 * alpha).cos() / alpha
}
