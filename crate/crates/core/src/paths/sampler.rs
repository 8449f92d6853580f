//! Exact one-dimensional stable draws (polar/transform method) and the
//! isotropic multivariate draw via Gaussian subordination.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use std::f64::consts::PI;

#[inline]
fn clamp_open01(u: f64) -> f64 {
    u.clamp(1e-12, 1.0 - 1e-12)
}

/// One draw of the standard symmetric alpha-stable law with
/// `E exp(i xi X) = exp(-|xi|^alpha)`, `alpha` in (0, 2]. At `alpha = 2`
/// this is `N(0, 2)` (stable convention).
pub fn standard_symmetric_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    debug_assert!(alpha > 0.0 && alpha <= 2.0);
    let u = PI * (clamp_open01(rng.random::<f64>()) - 0.5);
    if (alpha - 1.0).abs() < 1e-12 {
        return u.tan();
    }
    let w: f64 = rng.sample(Exp1);
    let w = w.max(1e-300);
    let s1 = (alpha * u).sin() / u.cos().powf(1.0 / alpha);
    let s2 = ((u - alpha * u).cos() / w).powf((1.0 - alpha) / alpha);
    s1 * s2
}

/// One draw of the standard positive rho-stable law with Laplace
/// transform `E exp(-lambda S) = exp(-lambda^rho)`, `rho` in (0, 1).
pub fn standard_positive_stable<R: Rng + ?Sized>(rho: f64, rng: &mut R) -> f64 {
    debug_assert!(rho > 0.0 && rho < 1.0);
    let u = PI * clamp_open01(rng.random::<f64>());
    let w: f64 = rng.sample(Exp1);
    let w = w.max(1e-300);
    let a = (rho * u).sin() / u.sin().powf(1.0 / rho);
    let b = (((1.0 - rho) * u).sin() / w).powf((1.0 - rho) / rho);
    a * b
}

/// Standard isotropic alpha-stable vector in `R^d` with
/// `E exp(i<xi, X>) = exp(-|xi|^alpha)`: for `alpha < 2`, `sqrt(2 T) Z`
/// with `T` positive (alpha/2)-stable; exact Gaussian at `alpha = 2`.
pub fn standard_isotropic_stable<R: Rng + ?Sized>(alpha: f64, d: usize, rng: &mut R) -> Vec<f64> {
    debug_assert!(alpha > 0.0 && alpha <= 2.0);
    let factor = if alpha >= 2.0 {
        2.0f64.sqrt()
    } else {
        (2.0 * standard_positive_stable(alpha / 2.0, rng)).sqrt()
    };
    (0..d).map(|_| factor * rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Standard Gaussian vector.
pub fn standard_normal_vec<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Uniform direction on the unit sphere of `R^d`.
pub fn uniform_direction<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v = standard_normal_vec(d, rng);
        let n: f64 = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|c| c / n).collect();
        }
    }
}
