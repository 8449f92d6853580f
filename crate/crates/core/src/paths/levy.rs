//! Lévy processes with exact i.i.d. increments: Brownian motion and
//! stable processes in spectral form.

use super::sampler::{standard_isotropic_stable, standard_symmetric_stable};
use super::SamplePath;
use crate::error::Result;
use crate::rng::RngStream;
use crate::symbols::{SpectralMeasure, StableSpectralSpec};
use rand::Rng;
use rand_distr::StandardNormal;

/// One increment of the standard symmetric alpha-stable law over time
/// `scale_t` (d = 1): `scale_t^{1/alpha} S` with `S` standard symmetric
/// stable, so the increment has CF `exp(-t |xi|^alpha)`.
pub fn sample_stable_increment<R: Rng + ?Sized>(alpha: f64, scale_t: f64, rng: &mut R) -> f64 {
    debug_assert!(scale_t > 0.0);
    scale_t.powf(1.0 / alpha) * standard_symmetric_stable(alpha, rng)
}

/// One increment of the stable law in spectral form over time `scale_t`:
/// a weighted sum of independent symmetric one-dimensional stable draws
/// along the atom directions, or the subordinated-Gaussian isotropic draw
/// for a uniform measure.
pub fn stable_increment_vec<R: Rng + ?Sized>(
    spec: &StableSpectralSpec,
    scale_t: f64,
    rng: &mut R,
) -> Vec<f64> {
    let alpha = spec.alpha;
    match &spec.measure {
        SpectralMeasure::Uniform { .. } => {
            let c = spec.isotropic_coefficient().expect("uniform measure");
            let factor = (c * scale_t).powf(1.0 / alpha);
            standard_isotropic_stable(alpha, spec.d, rng)
                .into_iter()
                .map(|v| v * factor)
                .collect()
        }
        SpectralMeasure::Atoms(atoms) => {
            let mut out = vec![0.0; spec.d];
            for (y, w) in atoms {
                if *w == 0.0 {
                    continue;
                }
                let s = (w * scale_t).powf(1.0 / alpha) * standard_symmetric_stable(alpha, rng);
                for (o, c) in out.iter_mut().zip(y) {
                    *o += s * c;
                }
            }
            out
        }
    }
}

/// Brownian motion with per-coordinate scale `sigma` (exponent
/// `sigma^2 |xi|^2 / 2`).
pub fn simulate_brownian_path(
    x0: &[f64],
    sigma: f64,
    t_horizon: f64,
    n_steps: usize,
    stream: RngStream,
) -> Result<SamplePath> {
    let d = x0.len();
    let dt = t_horizon / n_steps as f64;
    let step_scale = sigma * dt.sqrt();
    let mut rng = stream.rng();
    let mut values = Vec::with_capacity((n_steps + 1) * d);
    values.extend_from_slice(x0);
    let mut x = x0.to_vec();
    for _ in 0..n_steps {
        for c in x.iter_mut() {
            *c += step_scale * rng.sample::<f64, _>(StandardNormal);
        }
        values.extend_from_slice(&x);
    }
    SamplePath::new(0.0, dt, d, values)
}

/// Stable Lévy path with exact increments per step.
pub fn simulate_levy_path(
    spec: &StableSpectralSpec,
    x0: &[f64],
    t_horizon: f64,
    n_steps: usize,
    stream: RngStream,
) -> Result<SamplePath> {
    let d = spec.d;
    let dt = t_horizon / n_steps as f64;
    let mut rng = stream.rng();
    let mut values = Vec::with_capacity((n_steps + 1) * d);
    values.extend_from_slice(x0);
    let mut x = x0.to_vec();
    for _ in 0..n_steps {
        let inc = stable_increment_vec(spec, dt, &mut rng);
        for (c, i) in x.iter_mut().zip(&inc) {
            *c += i;
        }
        values.extend_from_slice(&x);
    }
    SamplePath::new(0.0, dt, d, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::ProcessSpec;
    use crate::stats;

    #[test]
    fn single_step_brownian_is_one_gaussian_draw() {
        let stream = RngStream::new(3, 3);
        let path = simulate_brownian_path(&[0.0], 1.0, 1.0, 1, stream).unwrap();
        assert_eq!(path.len(), 2);
        let mut rng = stream.rng();
        let z: f64 = rng.sample(rand_distr::StandardNormal);
        assert_eq!(path.point(1)[0], z);
    }

    #[test]
    fn x0_offset_is_pathwise_translation() {
        let spec = StableSpectralSpec::isotropic(1.5, 2, 1.0).unwrap();
        let s = RngStream::new(8, 1);
        let a = simulate_levy_path(&spec, &[0.0, 0.0], 1.0, 64, s).unwrap();
        let b = simulate_levy_path(&spec, &[2.0, -1.0], 1.0, 64, s).unwrap();
        for i in 0..a.len() {
            assert!((a.point(i)[0] + 2.0 - b.point(i)[0]).abs() < 1e-12);
            assert!((a.point(i)[1] - 1.0 - b.point(i)[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn stable_scaling_two_sample_ks() {
        // law(X_{ct}) = law(c^{1/alpha} X_t) on marginals.
        let alpha = 1.5;
        let spec = ProcessSpec::isotropic_stable(alpha, 2).unwrap();
        let c = 4.0f64;
        let root = RngStream::new(21, 0);
        let n = 20_000;
        let a: Vec<f64> = crate::rng::mc_fanout(n, root.substream(1), |_, s| {
            crate::paths::sample_endpoint(&spec, &[0.0, 0.0], c * 0.25, 4, s).unwrap()[0]
        });
        let b: Vec<f64> = crate::rng::mc_fanout(n, root.substream(2), |_, s| {
            c.powf(1.0 / alpha) * crate::paths::sample_endpoint(&spec, &[0.0, 0.0], 0.25, 4, s).unwrap()[0]
        });
        assert!(stats::ks_two_sample(&a, &b, 1e-3).passes());
    }

    #[test]
    fn atoms_and_uniform_cf_through_path() {
        // exp(-T psi(xi)) must match the empirical CF of X_T for a
        // two-atom measure evaluated through the exponent module.
        let spec = StableSpectralSpec::with_atoms(
            1.3,
            2,
            vec![(vec![1.0, 0.0], 0.6), (vec![0.0, 1.0], 0.4)],
        )
        .unwrap();
        let n = 40_000;
        let t = 0.7;
        let draws: Vec<Vec<f64>> = crate::rng::mc_fanout(n, RngStream::new(77, 0), |_, s| {
            let mut rng = s.rng();
            stable_increment_vec(&spec, t, &mut rng)
        });
        for xi in [[0.8, 0.0], [0.5, 0.5]] {
            let proj: Vec<f64> = draws.iter().map(|v| v[0] * xi[0] + v[1] * xi[1]).collect();
            let cf = stats::empirical_cf(&proj, 1.0);
            // symmetrized atoms: CF is exp(-t sum w |<xi,y>|^alpha)
            let psi: f64 = 0.6 * xi[0].abs().powf(1.3) + 0.4 * xi[1].abs().powf(1.3);
            let target = (-t * psi).exp();
            let tol = 4.0 / (n as f64).sqrt();
            assert!((cf.re - target).abs() < tol, "xi {xi:?}: {} vs {target}", cf.re);
            assert!(cf.im.abs() < tol);
        }
    }
}
