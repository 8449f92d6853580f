//! Power-law growth envelopes for symmetric Lévy exponents.

use crate::conditions::{BoundCheckEntry, BoundCheckReport};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Parameters of the two-sided growth envelope
/// `K5^{-1} |xi|^{alpha - zeta'} <= psi(xi) <= K5 |xi|^{alpha + zeta'}`
/// for `|xi| >= tau` (the `alpha = 2` branch uses exponent 2 on the
/// right). With `global_lower` set, the lower envelope is required for
/// every `xi`, not only beyond `tau`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowthConditionSpec {
    pub alpha: f64,
    pub zeta_prime: f64,
    pub k5: f64,
    pub tau: f64,
    pub global_lower: bool,
}

impl GrowthConditionSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return Err(Error::invalid(format!("alpha must lie in (0, 2], got {}", self.alpha)));
        }
        let zeta_cap = if self.alpha < 2.0 { 2.0 - self.alpha } else { 2.0 };
        if !(self.zeta_prime > 0.0 && self.zeta_prime < zeta_cap) {
            return Err(Error::invalid(format!(
                "zeta' must lie in (0, {zeta_cap}), got {}",
                self.zeta_prime
            )));
        }
        if self.k5 < 1.0 {
            return Err(Error::invalid("K5 must be >= 1"));
        }
        if !(self.tau > 0.0) {
            return Err(Error::invalid("tau must be positive"));
        }
        Ok(())
    }

    fn upper_exponent(&self) -> f64 {
        if self.alpha == 2.0 {
            2.0
        } else {
            self.alpha + self.zeta_prime
        }
    }

    fn lower_exponent(&self) -> f64 {
        self.alpha - self.zeta_prime
    }
}

/// Check the growth envelope pointwise on a frequency grid.
///
/// Cells below `tau` are skipped entirely unless `global_lower` is set,
/// in which case only their lower envelope is enforced. Alongside the
/// violation list, the report carries the fitted minimal `K5` that would
/// make every tested cell pass.
pub fn check_growth_condition<F>(
    exponent: F,
    spec: &GrowthConditionSpec,
    xi_grid: &[Vec<f64>],
) -> Result<BoundCheckReport>
where
    F: Fn(&[f64]) -> Complex64,
{
    spec.validate()?;
    if !spec.global_lower {
        for xi in xi_grid {
            let norm = xi.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm < spec.tau {
                return Err(Error::precondition(format!(
                    "grid point with |xi| = {norm} below tau = {} while global_lower is unset",
                    spec.tau
                )));
            }
        }
    }

    let mut report = BoundCheckReport::new(
        "growth_condition",
        format!("alpha={} zeta'={} K5={} tau={}", spec.alpha, spec.zeta_prime, spec.k5, spec.tau),
    );
    let mut fitted_k5: f64 = 1.0;
    for xi in xi_grid {
        let norm = xi.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let psi = exponent(xi);
        if psi.im.abs() > 1e-8 * (1.0 + psi.norm()) {
            return Err(Error::precondition(format!(
                "exponent has non-negligible imaginary part {} at |xi| = {norm}; \
                 the growth condition applies to symmetric processes",
                psi.im
            )));
        }
        let value = psi.re;
        let beyond_tau = norm >= spec.tau;

        let lower_env = spec.k5.recip() * norm.powf(spec.lower_exponent());
        let upper_env = spec.k5 * norm.powf(spec.upper_exponent());

        let check_lower = spec.global_lower || beyond_tau;
        let mut violated = false;
        if check_lower && value < lower_env * (1.0 - 1e-12) {
            violated = true;
        }
        if beyond_tau && value > upper_env * (1.0 + 1e-12) {
            violated = true;
        }
        // minimal K5 for this cell: lower needs K5 >= env_base/value,
        // upper needs K5 >= value/env_base
        if check_lower && value > 0.0 {
            fitted_k5 = fitted_k5.max(norm.powf(spec.lower_exponent()) / value);
        }
        if beyond_tau {
            fitted_k5 = fitted_k5.max(value / norm.powf(spec.upper_exponent()));
        }

        let idx = report.entries.len();
        report.entries.push(BoundCheckEntry {
            params: vec![("xi_norm".into(), norm)],
            lhs: value,
            rhs: upper_env,
            std_err: 0.0,
        });
        if violated {
            report.violations.push(idx);
        }
    }
    report.push_constant("K5_min", fitted_k5);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{eval_levy_exponent, isotropic_density_coefficient, LevyTriplet};

    fn radial_grid(lo: f64, hi: f64, n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                vec![lo * (hi / lo).powf(t), 0.0]
            })
            .collect()
    }

    #[test]
    fn exact_power_law_passes_at_k5_bound_and_fails_below() {
        // psi = c |xi|^alpha: passes for every K5 >= max(c, 1/c) and fails
        // just below it; boundary probed at +/- 1%.
        let c = 3.0f64;
        let alpha = 1.4;
        let exponent = move |xi: &[f64]| {
            let n = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
            Complex64::new(c * n.powf(alpha), 0.0)
        };
        // grid includes |xi| = tau = 1 exactly, where the envelope is sharp
        let grid = radial_grid(1.0, 1000.0, 25);
        let k_crit = c.max(1.0 / c);
        for (k5, should_pass) in [(k_crit * 1.01, true), (k_crit * 0.99, false)] {
            let spec = GrowthConditionSpec {
                alpha,
                zeta_prime: 0.3,
                k5,
                tau: 1.0,
                global_lower: false,
            };
            let rep = check_growth_condition(exponent, &spec, &grid).unwrap();
            assert_eq!(rep.passed(), should_pass, "K5 = {k5}");
        }
        // the fitted minimal constant lands on the critical value
        let spec = GrowthConditionSpec {
            alpha,
            zeta_prime: 0.3,
            k5: 10.0,
            tau: 1.0,
            global_lower: false,
        };
        let rep = check_growth_condition(exponent, &spec, &grid).unwrap();
        assert!((rep.fitted_constants["K5_min"] - k_crit).abs() < 1e-9);
    }

    #[test]
    fn brownian_passes_alpha_two_branch() {
        let t = LevyTriplet::brownian(2);
        let exponent = move |xi: &[f64]| eval_levy_exponent(&t, xi);
        let spec = GrowthConditionSpec {
            alpha: 2.0,
            zeta_prime: 0.5,
            k5: 2.0,
            tau: 1.0,
            global_lower: false,
        };
        let rep = check_growth_condition(exponent, &spec, &radial_grid(1.0, 100.0, 20)).unwrap();
        assert!(rep.passed(), "violations: {:?}", rep.violations);
    }

    #[test]
    fn mixed_index_sum_table_matches_direct_evaluation() {
        // sum of alpha = 1.2 and alpha = 1.8 isotropic exponents checked
        // against a spec pinned at the heavier index.
        let t12 = LevyTriplet::isotropic_stable(2, 1.0, 1.2).unwrap();
        let t18 = LevyTriplet::isotropic_stable(2, 1.0, 1.8).unwrap();
        let exponent =
            move |xi: &[f64]| eval_levy_exponent(&t12, xi) + eval_levy_exponent(&t18, xi);
        let spec = GrowthConditionSpec {
            alpha: 1.8,
            zeta_prime: 0.61,
            k5: 4.0,
            tau: 1.0,
            global_lower: false,
        };
        let grid = radial_grid(1.0, 1000.0, 30);
        let rep = check_growth_condition(&exponent, &spec, &grid).unwrap();

        // oracle: scalar arithmetic per grid point
        let c12 = isotropic_density_coefficient(1.0, 1.2, 2);
        let c18 = isotropic_density_coefficient(1.0, 1.8, 2);
        let mut expect_viol = Vec::new();
        for (i, xi) in grid.iter().enumerate() {
            let n = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
            let psi = c12 * n.powf(1.2) + c18 * n.powf(1.8);
            let lo = n.powf(1.8 - 0.61) / 4.0;
            let hi = 4.0 * n.powf(1.8 + 0.61);
            if psi < lo || psi > hi {
                expect_viol.push(i);
            }
        }
        assert_eq!(rep.violations, expect_viol);
    }

    #[test]
    fn rejects_grid_below_tau_without_global_lower() {
        let exponent = |xi: &[f64]| Complex64::new(xi[0].abs(), 0.0);
        let spec = GrowthConditionSpec {
            alpha: 1.0,
            zeta_prime: 0.5,
            k5: 2.0,
            tau: 1.0,
            global_lower: false,
        };
        let grid = vec![vec![0.5, 0.0]];
        assert!(check_growth_condition(exponent, &spec, &grid).is_err());
    }

    #[test]
    fn rejects_complex_exponent() {
        let exponent = |xi: &[f64]| Complex64::new(xi[0].abs(), 0.7 * xi[0]);
        let spec = GrowthConditionSpec {
            alpha: 1.0,
            zeta_prime: 0.5,
            k5: 2.0,
            tau: 0.5,
            global_lower: false,
        };
        let grid = vec![vec![2.0]];
        assert!(check_growth_condition(exponent, &spec, &grid).is_err());
    }
}
