//! State-dependent symbols: the stable jump diffusion's drift/spectral
//! pair and the generic evaluator interface used by the Pruitt bound.

use super::stable::{isotropic_projection_moment, SpectralMeasure};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Parametric state-dependent drift fields.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriftField {
    Zero,
    Constant(Vec<f64>),
    /// `v * sin^2(x_1)` along a fixed vector: bounded, Lipschitz.
    SineSq { v: Vec<f64> },
}

impl DriftField {
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        match self {
            DriftField::Zero => vec![0.0; x.len()],
            DriftField::Constant(v) => v.clone(),
            DriftField::SineSq { v } => {
                let s = x[0].sin().powi(2);
                v.iter().map(|c| c * s).collect()
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            DriftField::Zero => true,
            DriftField::Constant(v) | DriftField::SineSq { v } => v.iter().all(|&c| c == 0.0),
        }
    }
}

/// Parametric state-dependent spectral measures `M~(x, .)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralField {
    /// Measure independent of the state.
    Constant(SpectralMeasure),
    /// Atom weights modulated by `1 + amp * sin^2(x_1)`, amp > -1.
    AtomsModulated {
        atoms: Vec<(Vec<f64>, f64)>,
        amp: f64,
    },
}

impl SpectralField {
    /// Materialize the measure at state `x`.
    pub fn at(&self, x: &[f64]) -> SpectralMeasure {
        match self {
            SpectralField::Constant(m) => m.clone(),
            SpectralField::AtomsModulated { atoms, amp } => {
                let f = 1.0 + amp * x[0].sin().powi(2);
                SpectralMeasure::Atoms(atoms.iter().map(|(y, w)| (y.clone(), w * f)).collect())
            }
        }
    }
}

/// A stable jump-diffusion specification: index, drift field and
/// state-dependent spectral measure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JumpDiffusionSpec {
    pub alpha: f64,
    pub d: usize,
    pub drift: DriftField,
    pub spectral: SpectralField,
}

impl JumpDiffusionSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return Err(Error::invalid(format!(
                "jump diffusion index must lie in (0, 2], got {}",
                self.alpha
            )));
        }
        if self.alpha <= 1.0 && !self.drift.is_zero() {
            return Err(Error::invalid(
                "jump diffusion with alpha <= 1 requires zero drift",
            ));
        }
        match &self.spectral {
            SpectralField::Constant(m) => validate_measure(m, self.d)?,
            SpectralField::AtomsModulated { atoms, amp } => {
                if *amp <= -1.0 {
                    return Err(Error::invalid("atom modulation must keep weights positive"));
                }
                validate_measure(&SpectralMeasure::Atoms(atoms.clone()), self.d)?;
            }
        }
        Ok(())
    }
}

fn validate_measure(m: &SpectralMeasure, d: usize) -> Result<()> {
    let spec = super::stable::StableSpectralSpec {
        alpha: 1.0,
        d,
        measure: m.clone(),
        shift: vec![0.0; d],
    };
    spec.validate()
}

/// A state-dependent symbol `q(x, xi)` with `Re q >= 0`.
pub enum StateDependentSymbol {
    JumpDiffusion(JumpDiffusionSpec),
    StableLike(super::stable_like::StableLikeKernel),
}

impl StateDependentSymbol {
    /// Evaluate `q(x, xi)`. Stable-like kernels integrate numerically with
    /// the default quadrature controls.
    pub fn eval(&self, x: &[f64], xi: &[f64]) -> Result<Complex64> {
        match self {
            StateDependentSymbol::JumpDiffusion(spec) => eval_jump_diffusion_symbol(spec, x, xi),
            StateDependentSymbol::StableLike(kernel) => {
                super::stable_like::eval_stable_like_symbol(kernel, x, xi, &Default::default())
            }
        }
    }
}

/// Symbol of the stable jump diffusion:
/// `q(x, xi) = int |<xi, s>|^alpha M~(x, ds) - i <A(x), xi>`, normalized so
/// that `Re q >= 0` and `E^x exp(i<xi, X_t - x>) ~ exp(-t q(x, xi))` for
/// small `t`.
pub fn eval_jump_diffusion_symbol(
    spec: &JumpDiffusionSpec,
    x: &[f64],
    xi: &[f64],
) -> Result<Complex64> {
    spec.validate()?;
    let jump = match spec.spectral.at(x) {
        SpectralMeasure::Uniform { total_mass } => {
            let norm = xi.iter().map(|c| c * c).sum::<f64>().sqrt();
            total_mass * isotropic_projection_moment(spec.alpha, spec.d) * norm.powf(spec.alpha)
        }
        SpectralMeasure::Atoms(atoms) => atoms
            .iter()
            .map(|(y, w)| {
                let p: f64 = xi.iter().zip(y).map(|(a, b)| a * b).sum();
                w * p.abs().powf(spec.alpha)
            })
            .sum(),
    };
    let a = spec.drift.eval(x);
    let drift: f64 = xi.iter().zip(&a).map(|(a, b)| a * b).sum();
    Ok(Complex64::new(jump, -drift))
}
