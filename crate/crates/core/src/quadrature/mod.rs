//! Quadrature rules realizing the Haar measures of K, A, N, ℝⁿ and ℝ₊*, and
//! weighted sums over their products.

pub mod chart;
mod invariance;
mod modulus;
mod rule;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use chart::Chart;
pub use invariance::{invariance_pairs, invariance_residual, Side};
pub use modulus::{log_modulus, modulus_from_log, modulus_half_sum, modulus_of_diagonal};
pub use rule::{build_rule, Axis1d, FactorKind, ProductRule, QuadratureRule, RuleParams};

/// Largest coordinate tuple handled without allocation.
const MAX_DIM: usize = 32;

/// Σ wᵢ f(xᵢ) over the nodes of `rule`.
pub fn integrate<F>(rule: &ProductRule, f: F) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Complex64 + Sync + Send,
{
    let dim = rule.dim();
    if dim > MAX_DIM {
        return Err(Error::contract(format!("rule has {dim} coordinates, at most {MAX_DIM} supported")));
    }
    Ok(crate::par::sum_complex(rule.len(), |i| {
        let mut x = [0.0; MAX_DIM];
        rule.node_into(i, &mut x[..dim]);
        f(&x[..dim]) * rule.weight(i)
    }))
}

/// Σ wᵢ vᵢ for values sampled on the nodes of `rule` in node order.
pub fn integrate_samples(rule: &ProductRule, values: &[Complex64]) -> Result<Complex64> {
    if values.len() != rule.len() {
        return Err(Error::contract(format!(
            "{} samples for a rule with {} nodes",
            values.len(),
            rule.len()
        )));
    }
    Ok(crate::par::sum_complex(values.len(), |i| values[i] * rule.weight(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gaussian(x: &[f64]) -> Complex64 {
        Complex64::new((-0.5 * x[0] * x[0]).exp(), 0.0)
    }

    #[test]
    fn zero_and_constant() {
        let so2 = build_rule(FactorKind::KSo2, &RuleParams::compact(8)).unwrap();
        let rule = ProductRule::new(vec![so2.clone(), so2]);
        assert_eq!(integrate(&rule, |_| Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
        let one = integrate(&rule, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!((one - 1.0).norm() < 1e-15);
        let so3 = build_rule(FactorKind::KSo3, &RuleParams::so3_band_limit(3)).unwrap();
        let one = integrate(&so3.into(), |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!((one - 1.0).norm() < 1e-12);
    }

    #[test]
    fn gaussian_closed_form() {
        let rule: ProductRule = build_rule(FactorKind::EuclideanRn, &RuleParams::grid(256, -8.0, 8.0))
            .unwrap()
            .into();
        let v = integrate(&rule, gaussian).unwrap();
        assert!((v.re - (2.0 * PI).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn refinement_gains_a_factor_four() {
        let exact = (2.0 * PI).sqrt();
        let mut rule = build_rule(FactorKind::EuclideanRn, &RuleParams::grid(6, -8.0, 8.0)).unwrap();
        let mut prev = (integrate(&rule.clone().into(), gaussian).unwrap().re - exact).abs();
        for _ in 0..4 {
            rule = rule.refined().unwrap();
            let err = (integrate(&rule.clone().into(), gaussian).unwrap().re - exact).abs();
            assert!(err <= prev / 4.0 || (err < 1e-12 && prev < 1e-12), "{prev} -> {err}");
            prev = err;
        }
    }

    #[test]
    fn sample_count_mismatch() {
        let rule: ProductRule = build_rule(FactorKind::KSo2, &RuleParams::compact(4)).unwrap().into();
        assert!(matches!(integrate_samples(&rule, &[Complex64::new(1.0, 0.0)]), Err(Error::Contract(_))));
    }
}
