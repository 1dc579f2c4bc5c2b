//! Residual reports.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::level::Level;

/// Smallest denominator used in relative residuals.
pub const RESIDUAL_FLOOR: f64 = 1e-300;

/// Both sides of one identity and their relative discrepancy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub level: Level,
    pub n: usize,
    pub left: Complex64,
    pub right: Complex64,
    pub residual: f64,
    pub grid: String,
    pub seconds: f64,
    /// Tolerance the residual is checked against; `None` for reported-only identities.
    pub tolerance: Option<f64>,
}

/// |left − right| / max(|left|, floor).
pub fn relative_residual(left: Complex64, right: Complex64) -> f64 {
    if left == right {
        return 0.0;
    }
    (left - right).norm() / left.norm().max(RESIDUAL_FLOOR)
}

impl IdentityReport {
    pub fn new(identity: impl Into<String>, level: Level, n: usize, left: Complex64, right: Complex64, grid: impl Into<String>) -> Self {
        IdentityReport {
            identity: identity.into(),
            level,
            n,
            left,
            right,
            residual: relative_residual(left, right),
            grid: grid.into(),
            seconds: 0.0,
            tolerance: None,
        }
    }

    /// Report for a vector identity: the point with the largest relative
    /// deviation among the points where |left| is at least 1e-3 of its maximum.
    pub fn worst_of(identity: impl Into<String>, level: Level, n: usize, pairs: &[(Complex64, Complex64)], grid: impl Into<String>) -> Self {
        let peak = pairs.iter().map(|(l, _)| l.norm()).fold(0.0, f64::max);
        let mut best = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        let mut worst = -1.0;
        for &(l, r) in pairs {
            if l.norm() < 1e-3 * peak {
                continue;
            }
            let res = relative_residual(l, r);
            if res > worst {
                worst = res;
                best = (l, r);
            }
        }
        if peak == 0.0 {
            best = pairs
                .iter()
                .copied()
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                .unwrap_or(best);
        }
        IdentityReport::new(identity, level, n, best.0, best.1, grid)
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }

    pub fn with_seconds(mut self, seconds: f64) -> Self {
        self.seconds = seconds;
        self
    }

    /// True unless a tolerance is set and exceeded (NaN fails).
    pub fn passed(&self) -> bool {
        match self.tolerance {
            Some(t) => self.residual <= t,
            None => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn zero_sides_give_zero_residual() {
        assert_eq!(relative_residual(c(0.0), c(0.0)), 0.0);
        let r = IdentityReport::new("x", Level::N, 2, c(0.0), c(1e-320), "");
        assert!(r.residual > 0.0 && r.residual < 1e-19);
    }

    #[test]
    fn worst_point_ignores_negligible_left_values() {
        let r = IdentityReport::worst_of("x", Level::S, 2, &[(c(1.0), c(1.01)), (c(1e-6), c(2e-6)), (c(0.5), c(0.5))], "");
        assert!((r.residual - 0.01).abs() < 1e-12);
    }

    #[test]
    fn tolerance_check() {
        let r = IdentityReport::new("x", Level::N, 2, c(1.0), c(1.1), "").with_tolerance(1e-3);
        assert!(!r.passed());
        let mut nan = r.clone();
        nan.residual = f64::NAN;
        assert!(!nan.passed());
    }
}
