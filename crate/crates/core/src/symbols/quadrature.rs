//! Quadrature helpers shared by the symbol evaluators: Gauss-Legendre
//! nodes, fixed sphere grids and the refinement policy.

use serde::{Deserialize, Serialize};

/// Controls for the numeric symbol/ball-probability integrals.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Inner truncation radius for singular integrands.
    pub eps_in: f64,
    /// Outer truncation radius.
    pub r_out: f64,
    /// Relative tolerance between successive refinements.
    pub rel_tol: f64,
    /// Maximum number of refinement levels.
    pub max_refine: usize,
    /// Low-frequency cutoff used by the lower ball-probability bound;
    /// zero disables the correction.
    pub tau: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            eps_in: 1e-4,
            r_out: 1e4,
            rel_tol: 1e-6,
            max_refine: 20,
            tau: 0.0,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.eps_in > 0.0 && self.eps_in < self.r_out) {
            return Err(crate::Error::precondition(format!(
                "quadrature truncation radii must satisfy 0 < eps_in < r_out, got {} and {}",
                self.eps_in, self.r_out
            )));
        }
        Ok(())
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` via Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Equal-weight direction set on the unit sphere of `R^d`.
///
/// d=1 gives {-1, +1}; d=2 a uniform angle grid; d=3 a fixed
/// latitude-longitude product grid with area weights folded in (weights
/// sum to 1 in every dimension).
pub fn sphere_directions(d: usize, resolution: usize) -> Vec<(Vec<f64>, f64)> {
    match d {
        1 => vec![(vec![1.0], 0.5), (vec![-1.0], 0.5)],
        2 => {
            let n = resolution.max(4);
            (0..n)
                .map(|i| {
                    let th = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / n as f64;
                    (vec![th.cos(), th.sin()], 1.0 / n as f64)
                })
                .collect()
        }
        3 => {
            // Gauss-Legendre in cos(polar) x uniform azimuth: exact for
            // moderate-degree spherical polynomials.
            let n_polar = resolution.max(8);
            let n_azi = 2 * n_polar;
            let (nodes, weights) = gauss_legendre(n_polar);
            let mut out = Vec::with_capacity(n_polar * n_azi);
            for (mu, w) in nodes.iter().zip(&weights) {
                let sin_th = (1.0 - mu * mu).sqrt();
                for j in 0..n_azi {
                    let phi = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / n_azi as f64;
                    out.push((
                        vec![sin_th * phi.cos(), sin_th * phi.sin(), *mu],
                        w / 2.0 / n_azi as f64,
                    ));
                }
            }
            out
        }
        _ => panic!("sphere quadrature supports d <= 3; use atomic spectral measures for d >= 4"),
    }
}
