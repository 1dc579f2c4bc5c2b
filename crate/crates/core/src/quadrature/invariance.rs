//! Numerical check of the Haar property of a rule.

use num_complex::Complex64;

use super::rule::{ProductRule, QuadratureRule};
use super::integrate;
use crate::error::Result;
use crate::group::{compose, GroupElement};

/// Which side the sampled element acts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// (∫ f dμ, ∫ f(h·x) dμ) for each h in `translations` (x·h for [`Side::Right`]).
pub fn invariance_pairs<F>(rule: &QuadratureRule, side: Side, f: F, translations: &[GroupElement]) -> Result<Vec<(Complex64, Complex64)>>
where
    F: Fn(&[f64]) -> Complex64 + Sync + Send,
{
    let product = ProductRule::from(rule.clone());
    let base = integrate(&product, &f)?;
    let chart = rule.chart();
    let mut out = Vec::with_capacity(translations.len());
    for h in translations {
        let values = crate::par::map_indexed(rule.len(), |i| -> Result<Complex64> {
            let x = chart.element(&rule.node(i))?;
            let moved = match side {
                Side::Left => compose(h, &x)?,
                Side::Right => compose(&x, h)?,
            };
            Ok(f(&chart.coordinates(&moved)?))
        });
        let values = values.into_iter().collect::<Result<Vec<_>>>()?;
        out.push((base, super::integrate_samples(&product, &values)?));
    }
    Ok(out)
}

/// max_h |∫ f(h·x) dμ − ∫ f(x) dμ| / |∫ f dμ| over `translations`
/// (x·h for [`Side::Right`]). When ∫ f dμ = 0 the absolute deviation is used.
pub fn invariance_residual<F>(rule: &QuadratureRule, side: Side, f: F, translations: &[GroupElement]) -> Result<f64>
where
    F: Fn(&[f64]) -> Complex64 + Sync + Send,
{
    let pairs = invariance_pairs(rule, side, f, translations)?;
    Ok(pairs
        .iter()
        .map(|(base, moved)| {
            let scale = if base.norm() > 0.0 { base.norm() } else { 1.0 };
            (moved - base).norm() / scale
        })
        .fold(0.0, f64::max))
}
