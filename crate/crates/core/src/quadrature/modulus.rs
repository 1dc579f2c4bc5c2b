//! The modulus ∏_{i<j} a_i/a_j of the conjugation n ↦ a n a⁻¹ on N.

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupTag};

/// ∏_{i<j} a_i/a_j for a positive-diagonal element.
pub fn modulus_half_sum(a: &GroupElement) -> Result<f64> {
    if a.tag() != GroupTag::PositiveDiagonal {
        return Err(Error::contract(format!("modulus needs a positive-diagonal element, got {}", a.tag())));
    }
    let m = a.matrix();
    let d: Vec<f64> = (0..a.dim()).map(|i| m[(i, i)]).collect();
    modulus_of_diagonal(&d)
}

/// ∏_{i<j} d_i/d_j.
pub fn modulus_of_diagonal(d: &[f64]) -> Result<f64> {
    if let Some(bad) = d.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::domain(format!("diagonal entry {bad} is not positive")));
    }
    let mut prod = 1.0;
    for i in 0..d.len() {
        for j in (i + 1)..d.len() {
            prod *= d[i] / d[j];
        }
    }
    Ok(prod)
}

/// Modulus at the A-chart point u ∈ ℝⁿ⁻¹ (a_i = e^{u_i}, a_n = e^{−Σu}).
pub fn modulus_from_log(u: &[f64]) -> f64 {
    log_modulus(u).exp()
}

/// log of [`modulus_from_log`]: Σ_{i<j} (log a_i − log a_j).
pub fn log_modulus(u: &[f64]) -> f64 {
    let n = u.len() + 1;
    let last = -u.iter().sum::<f64>();
    let log_a = |i: usize| if i + 1 == n { last } else { u[i] };
    (0..n).map(|i| (n as f64 - 1.0 - 2.0 * i as f64) * log_a(i)).sum()
}
