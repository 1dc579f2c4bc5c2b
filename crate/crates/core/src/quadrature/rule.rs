//! Quadrature rules for the Haar measures of K, A, N, ℝⁿ and ℝ₊*.

use std::f64::consts::PI;
use std::fmt;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};

use super::chart::Chart;
use crate::error::{Error, Result};

/// The factor a rule integrates over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    KSo2,
    KSo3,
    ADiag,
    NUnipotent,
    EuclideanRn,
    ScaleRplus,
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            FactorKind::KSo2 => "K_SO2",
            FactorKind::KSo3 => "K_SO3",
            FactorKind::ADiag => "A_diag",
            FactorKind::NUnipotent => "N_unipotent",
            FactorKind::EuclideanRn => "EuclideanRn",
            FactorKind::ScaleRplus => "ScaleRplus",
        };
        f.write_str(name)
    }
}

/// One-dimensional rule; a factor rule is a tensor product of these.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Set for angle axes sampled uniformly over a full period.
    pub period: Option<f64>,
}

impl Axis1d {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Spacing of a uniform axis.
    pub fn step(&self) -> f64 {
        if self.nodes.len() < 2 {
            return 0.0;
        }
        self.nodes[1] - self.nodes[0]
    }

    /// Composite trapezoid rule with `count` nodes on `[lo, hi]`.
    pub fn trapezoid(count: usize, lo: f64, hi: f64) -> Self {
        let h = (hi - lo) / (count - 1) as f64;
        let nodes = (0..count).map(|i| lo + h * i as f64).collect();
        let weights = (0..count)
            .map(|i| if i == 0 || i + 1 == count { 0.5 * h } else { h })
            .collect();
        Axis1d { nodes, weights, period: None }
    }

    /// `count` equally spaced angles on `[0, 2π)`, each with weight `1/count`.
    pub fn periodic(count: usize) -> Self {
        let h = 2.0 * PI / count as f64;
        Axis1d {
            nodes: (0..count).map(|i| h * i as f64).collect(),
            weights: vec![1.0 / count as f64; count],
            period: Some(2.0 * PI),
        }
    }
}

/// Parameters for [`build_rule`].
///
/// `range` is the coordinate interval: log-coordinates for `A_diag`, the
/// t-interval itself for `ScaleRplus` (converted to log t internally), plain
/// coordinates for `N_unipotent` and `EuclideanRn`. `dim` is the number of
/// coordinates of the non-compact factors. For `K_SO3`, `count` is the number
/// of α and γ nodes and `beta_count` (default `count / 2`) the number of
/// Gauss–Legendre nodes in cos β.
#[derive(Clone, Debug, PartialEq)]
pub struct RuleParams {
    pub count: usize,
    pub range: Option<(f64, f64)>,
    pub dim: usize,
    pub beta_count: Option<usize>,
}

impl RuleParams {
    pub fn compact(count: usize) -> Self {
        RuleParams { count, range: None, dim: 1, beta_count: None }
    }

    pub fn grid(count: usize, lo: f64, hi: f64) -> Self {
        RuleParams { count, range: Some((lo, hi)), dim: 1, beta_count: None }
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    /// SO(3) rule exact for products of two functions of band-limit `l`.
    pub fn so3_band_limit(l: usize) -> Self {
        RuleParams { count: 2 * l + 2, range: None, dim: 3, beta_count: Some(l + 1) }
    }
}

/// Quadrature rule for one factor: a tensor product of 1-D rules, read through `chart`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    factor: FactorKind,
    chart: Chart,
    axes: Vec<Axis1d>,
}

fn unipotent_size(entries: usize) -> Option<usize> {
    (2..64).find(|s| s * (s - 1) / 2 == entries)
}

/// Builds the rule for `factor`. Invalid parameters give a configuration error.
pub fn build_rule(factor: FactorKind, params: &RuleParams) -> Result<QuadratureRule> {
    if params.count < 2 {
        return Err(Error::config(format!("{factor} rule needs count ≥ 2, got {}", params.count)));
    }
    let range = || -> Result<(f64, f64)> {
        let (lo, hi) = params
            .range
            .ok_or_else(|| Error::config(format!("{factor} rule needs a range")))?;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::config(format!("{factor} rule needs a finite range lo < hi, got [{lo}, {hi}]")));
        }
        Ok((lo, hi))
    };
    let repeated = |dim: usize, lo: f64, hi: f64| -> Result<Vec<Axis1d>> {
        if dim == 0 {
            return Err(Error::config(format!("{factor} rule needs dim ≥ 1")));
        }
        Ok(vec![Axis1d::trapezoid(params.count, lo, hi); dim])
    };
    let (chart, axes) = match factor {
        FactorKind::KSo2 => (Chart::Angle, vec![Axis1d::periodic(params.count)]),
        FactorKind::KSo3 => {
            let nb = params.beta_count.unwrap_or(params.count / 2).max(1);
            let gl = GaussLegendre::new(NonZeroUsize::new(nb).expect("nb ≥ 1"));
            // Nodes sorted by increasing β.
            let mut pairs: Vec<(f64, f64)> = gl.as_node_weight_pairs().to_vec();
            pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
            let beta = Axis1d {
                nodes: pairs.iter().map(|(x, _)| x.clamp(-1.0, 1.0).acos()).collect(),
                weights: pairs.iter().map(|(_, w)| 0.5 * w).collect(),
                period: None,
            };
            let ang = Axis1d::periodic(params.count);
            (Chart::EulerZyz, vec![ang.clone(), beta, ang])
        }
        FactorKind::ADiag => {
            let (lo, hi) = range()?;
            (Chart::LogDiagonal { n: params.dim + 1 }, repeated(params.dim, lo, hi)?)
        }
        FactorKind::NUnipotent => {
            let (lo, hi) = range()?;
            let size = unipotent_size(params.dim).ok_or_else(|| {
                Error::config(format!("N_unipotent dim {} is not n(n-1)/2 for any n", params.dim))
            })?;
            (Chart::UnipotentEntries { size }, repeated(params.dim, lo, hi)?)
        }
        FactorKind::EuclideanRn => {
            let (lo, hi) = range()?;
            (Chart::Cartesian { dim: params.dim }, repeated(params.dim, lo, hi)?)
        }
        FactorKind::ScaleRplus => {
            let (lo, hi) = range()?;
            if lo <= 0.0 {
                return Err(Error::config(format!("ScaleRplus range must be positive, got [{lo}, {hi}]")));
            }
            (Chart::LogScale, vec![Axis1d::trapezoid(params.count, lo.ln(), hi.ln())])
        }
    };
    Ok(QuadratureRule { factor, chart, axes })
}

impl QuadratureRule {
    /// Rule over an explicit list of 1-D axes.
    pub fn from_axes(factor: FactorKind, chart: Chart, axes: Vec<Axis1d>) -> Result<Self> {
        if axes.len() != chart.dim() {
            return Err(Error::contract(format!(
                "chart {chart:?} has {} coordinates but {} axes were given",
                chart.dim(),
                axes.len()
            )));
        }
        for ax in &axes {
            if ax.nodes.len() != ax.weights.len() || ax.nodes.is_empty() {
                return Err(Error::contract("axis node and weight counts differ"));
            }
            if ax.weights.iter().any(|w| !(*w > 0.0)) {
                return Err(Error::contract("quadrature weights must be positive"));
            }
        }
        Ok(QuadratureRule { factor, chart, axes })
    }

    pub fn factor(&self) -> FactorKind {
        self.factor
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn axes(&self) -> &[Axis1d] {
        &self.axes
    }

    /// Number of coordinates per node.
    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(Axis1d::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node(&self, index: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        decode(&self.axes, index, &mut out);
        out
    }

    pub fn weight(&self, index: usize) -> f64 {
        weight_of(&self.axes, index)
    }

    pub fn nodes(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.node(i)).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.weight(i)).collect()
    }

    /// Σ weights.
    pub fn total_mass(&self) -> f64 {
        self.axes.iter().map(|a| a.weights.iter().sum::<f64>()).product()
    }

    /// Same factor with every axis resampled at twice the density.
    pub fn refined(&self) -> Result<Self> {
        let axes = self
            .axes
            .iter()
            .enumerate()
            .map(|(i, ax)| match (self.factor, i) {
                (FactorKind::KSo3, 1) => {
                    let p = RuleParams { count: 2, range: None, dim: 3, beta_count: Some(2 * ax.len()) };
                    Ok(build_rule(FactorKind::KSo3, &p)?.axes[1].clone())
                }
                _ if ax.period.is_some() => Ok(Axis1d::periodic(2 * ax.len())),
                _ => Ok(Axis1d::trapezoid(
                    2 * ax.len() - 1,
                    ax.nodes[0],
                    *ax.nodes.last().expect("non-empty axis"),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        QuadratureRule::from_axes(self.factor, self.chart, axes)
    }
}

/// Ordered product of factor rules; coordinates of a node are the
/// concatenation of the factor coordinates, first factor first.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductRule {
    factors: Vec<QuadratureRule>,
    axes: Vec<Axis1d>,
}

impl ProductRule {
    pub fn new(factors: Vec<QuadratureRule>) -> Self {
        let axes = factors.iter().flat_map(|f| f.axes.iter().cloned()).collect();
        ProductRule { factors, axes }
    }

    pub fn factors(&self) -> &[QuadratureRule] {
        &self.factors
    }

    /// All 1-D axes, in coordinate order.
    pub fn axes(&self) -> &[Axis1d] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(Axis1d::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node_into(&self, index: usize, out: &mut [f64]) {
        decode(&self.axes, index, out);
    }

    pub fn node(&self, index: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        decode(&self.axes, index, &mut out);
        out
    }

    pub fn weight(&self, index: usize) -> f64 {
        weight_of(&self.axes, index)
    }

    pub fn total_mass(&self) -> f64 {
        self.factors.iter().map(QuadratureRule::total_mass).product()
    }
}

impl From<QuadratureRule> for ProductRule {
    fn from(rule: QuadratureRule) -> Self {
        ProductRule::new(vec![rule])
    }
}

/// Row-major decode: the last axis varies fastest.
fn decode(axes: &[Axis1d], mut index: usize, out: &mut [f64]) {
    for (k, ax) in axes.iter().enumerate().rev() {
        let len = ax.len();
        out[k] = ax.nodes[index % len];
        index /= len;
    }
}

fn weight_of(axes: &[Axis1d], mut index: usize) -> f64 {
    let mut w = 1.0;
    for ax in axes.iter().rev() {
        let len = ax.len();
        w *= ax.weights[index % len];
        index /= len;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn so2_four_nodes() {
        let r = build_rule(FactorKind::KSo2, &RuleParams::compact(4)).unwrap();
        let nodes: Vec<f64> = r.nodes().into_iter().map(|v| v[0]).collect();
        for (got, want) in nodes.iter().zip([0.0, PI / 2.0, PI, 1.5 * PI]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
        assert_eq!(r.weights(), vec![0.25; 4]);
    }

    #[test]
    fn scale_rule_uses_log_nodes() {
        let e = 1f64.exp();
        let r = build_rule(FactorKind::ScaleRplus, &RuleParams::grid(3, 1.0 / e, e)).unwrap();
        let nodes: Vec<f64> = r.nodes().into_iter().map(|v| v[0]).collect();
        for (got, want) in nodes.iter().zip([-1.0, 0.0, 1.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
        for (got, want) in r.weights().iter().zip([0.5, 1.0, 0.5]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn so3_rule_is_normalized() {
        let r = build_rule(FactorKind::KSo3, &RuleParams::so3_band_limit(4)).unwrap();
        assert_abs_diff_eq!(r.total_mass(), 1.0, epsilon = 1e-12);
        assert!(r.weights().iter().all(|w| *w > 0.0));
    }

    #[test]
    fn invalid_params_are_configuration_errors() {
        let bad = [
            (FactorKind::KSo2, RuleParams::compact(1)),
            (FactorKind::ADiag, RuleParams { count: 8, range: None, dim: 1, beta_count: None }),
            (FactorKind::EuclideanRn, RuleParams::grid(8, 1.0, f64::INFINITY)),
            (FactorKind::NUnipotent, RuleParams::grid(8, -1.0, 1.0).with_dim(2)),
            (FactorKind::ScaleRplus, RuleParams::grid(8, -1.0, 1.0)),
        ];
        for (f, p) in bad {
            assert!(matches!(build_rule(f, &p), Err(Error::Configuration(_))), "{f}");
        }
    }

    #[test]
    fn product_rule_decodes_last_axis_fastest() {
        let a = build_rule(FactorKind::EuclideanRn, &RuleParams::grid(3, 0.0, 2.0)).unwrap();
        let b = build_rule(FactorKind::KSo2, &RuleParams::compact(2)).unwrap();
        let p = ProductRule::new(vec![a, b]);
        assert_eq!(p.len(), 6);
        assert_eq!(p.node(1), vec![0.0, PI]);
        assert_eq!(p.node(2), vec![1.0, 0.0]);
        assert_abs_diff_eq!(p.weight(2), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn refinement_doubles_density() {
        let r = build_rule(FactorKind::EuclideanRn, &RuleParams::grid(5, -1.0, 1.0)).unwrap();
        let f = r.refined().unwrap();
        assert_eq!(f.len(), 9);
        assert_abs_diff_eq!(f.axes()[0].step(), r.axes()[0].step() / 2.0, epsilon = 1e-15);
    }
}
