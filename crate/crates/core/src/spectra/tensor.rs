//! Sampled functions on product grids and per-axis linear transforms.

use std::collections::HashSet;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{Axis1d, FactorKind, QuadratureRule};

/// What an axis samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxisKind {
    /// A Lebesgue coordinate (N entry or ℝⁿ coordinate).
    Linear,
    /// A log coordinate (A or ℝ₊*), measure du.
    Log,
    /// SO(2) angle, normalized measure.
    Angle,
    /// SO(3) as flattened (α, β, γ) tuples, normalized measure.
    So3,
    /// Dual variable of a linear or log axis; weights carry the 1/(2π).
    Frequency,
    /// SO(2) characters m, unit weights.
    So2Irrep,
    /// SO(3) matrix entries (ℓ, a, b), weight d_ℓ = 2ℓ + 1.
    So3Irrep,
}

impl AxisKind {
    pub fn is_spatial(self) -> bool {
        matches!(self, AxisKind::Linear | AxisKind::Log | AxisKind::Angle | AxisKind::So3)
    }
}

/// One tensor axis: a list of points (each `arity` coordinates) with weights.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub label: String,
    pub kind: AxisKind,
    pub arity: usize,
    pub coords: Vec<f64>,
    pub weights: Vec<f64>,
    /// Tensor structure of the points, when they form a product grid.
    pub grid: Vec<Axis1d>,
}

impl Axis {
    fn one_dim(label: &str, kind: AxisKind, rule: Axis1d, scale: f64) -> Self {
        Axis {
            label: label.to_string(),
            kind,
            arity: 1,
            coords: rule.nodes.clone(),
            weights: rule.weights.iter().map(|w| w * scale).collect(),
            grid: vec![rule],
        }
    }

    pub fn linear(label: &str, rule: Axis1d) -> Self {
        Self::one_dim(label, AxisKind::Linear, rule, 1.0)
    }

    pub fn log(label: &str, rule: Axis1d) -> Self {
        Self::one_dim(label, AxisKind::Log, rule, 1.0)
    }

    pub fn angle(label: &str, count: usize) -> Self {
        Self::one_dim(label, AxisKind::Angle, Axis1d::periodic(count), 1.0)
    }

    /// Frequency axis integrated with trapezoid weights times 1/(2π).
    pub fn frequency(label: &str, rule: Axis1d) -> Self {
        Self::one_dim(label, AxisKind::Frequency, rule, 1.0 / (2.0 * PI))
    }

    /// Flattened SO(3) axis from a `K_SO3` rule.
    pub fn so3(label: &str, rule: &QuadratureRule) -> Result<Self> {
        if rule.factor() != FactorKind::KSo3 {
            return Err(Error::contract(format!("SO(3) axis needs a K_SO3 rule, got {}", rule.factor())));
        }
        let mut coords = Vec::with_capacity(3 * rule.len());
        for i in 0..rule.len() {
            coords.extend(rule.node(i));
        }
        Ok(Axis {
            label: label.to_string(),
            kind: AxisKind::So3,
            arity: 3,
            coords,
            weights: rule.weights(),
            grid: rule.axes().to_vec(),
        })
    }

    pub fn so2_irreps(label: &str, band_limit: usize) -> Self {
        let l = band_limit as i64;
        let coords: Vec<f64> = (-l..=l).map(|m| m as f64).collect();
        Axis {
            label: label.to_string(),
            kind: AxisKind::So2Irrep,
            arity: 1,
            weights: vec![1.0; coords.len()],
            coords,
            grid: Vec::new(),
        }
    }

    /// Entries (ℓ, a, b), ℓ ascending, then a, then b.
    pub fn so3_irreps(label: &str, band_limit: usize) -> Self {
        let mut coords = Vec::new();
        let mut weights = Vec::new();
        for l in 0..=band_limit as i64 {
            for a in -l..=l {
                for b in -l..=l {
                    coords.extend([l as f64, a as f64, b as f64]);
                    weights.push((2 * l + 1) as f64);
                }
            }
        }
        Axis {
            label: label.to_string(),
            kind: AxisKind::So3Irrep,
            arity: 3,
            coords,
            weights,
            grid: Vec::new(),
        }
    }

    /// Axes for a factor rule; multi-coordinate non-compact factors give one
    /// axis per coordinate, labelled `prefix1`, `prefix2`, ...
    pub fn from_rule(prefix: &str, rule: &QuadratureRule) -> Result<Vec<Axis>> {
        let kind = match rule.factor() {
            FactorKind::KSo3 => return Ok(vec![Axis::so3(prefix, rule)?]),
            FactorKind::KSo2 => AxisKind::Angle,
            FactorKind::ADiag | FactorKind::ScaleRplus => AxisKind::Log,
            FactorKind::NUnipotent | FactorKind::EuclideanRn => AxisKind::Linear,
        };
        let many = rule.axes().len() > 1;
        Ok(rule
            .axes()
            .iter()
            .enumerate()
            .map(|(i, ax)| {
                let label = if many { format!("{prefix}{}", i + 1) } else { prefix.to_string() };
                Axis::one_dim(&label, kind, ax.clone(), 1.0)
            })
            .collect())
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.arity..(i + 1) * self.arity]
    }
}

/// Complex samples on the product of `axes`, last axis fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    axes: Vec<Axis>,
    values: Vec<Complex64>,
}

/// Largest total arity handled without allocation in [`SampledFunction::from_fn`].
const MAX_ARITY: usize = 32;

impl SampledFunction {
    pub fn new(axes: Vec<Axis>, values: Vec<Complex64>) -> Result<Self> {
        let expected: usize = axes.iter().map(Axis::len).product();
        if values.len() != expected {
            return Err(Error::contract(format!(
                "{} values for a grid of {expected} points",
                values.len()
            )));
        }
        let mut seen = HashSet::new();
        for ax in &axes {
            if !seen.insert(ax.label.as_str()) {
                return Err(Error::contract(format!("duplicate axis label `{}`", ax.label)));
            }
            if ax.coords.len() != ax.arity * ax.len() {
                return Err(Error::contract(format!("axis `{}` has inconsistent coordinates", ax.label)));
            }
        }
        Ok(SampledFunction { axes, values })
    }

    /// Samples `f` at every grid point; `f` sees the concatenated axis coordinates.
    pub fn from_fn<F>(axes: Vec<Axis>, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Complex64 + Sync + Send,
    {
        let arity: usize = axes.iter().map(|a| a.arity).sum();
        if arity > MAX_ARITY {
            return Err(Error::contract(format!("total arity {arity} exceeds {MAX_ARITY}")));
        }
        let shape: Vec<usize> = axes.iter().map(Axis::len).collect();
        let len = shape.iter().product();
        let values = crate::par::map_indexed(len, |idx| {
            let mut x = [0.0; MAX_ARITY];
            let mut rest = idx;
            let mut end = arity;
            for (ax, &n) in axes.iter().zip(&shape).rev() {
                let i = rest % n;
                rest /= n;
                end -= ax.arity;
                x[end..end + ax.arity].copy_from_slice(ax.point(i));
            }
            f(&x[..arity])
        });
        SampledFunction::new(axes, values)
    }

    pub fn zeros(axes: Vec<Axis>) -> Result<Self> {
        let len = axes.iter().map(Axis::len).product();
        SampledFunction::new(axes, vec![Complex64::new(0.0, 0.0); len])
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Axis::len).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn axis_index(&self, label: &str) -> Option<usize> {
        self.axes.iter().position(|a| a.label == label)
    }

    /// Per-axis indices of flat index `idx`.
    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.axes.len()];
        for (k, ax) in self.axes.iter().enumerate().rev() {
            out[k] = idx % ax.len();
            idx /= ax.len();
        }
        out
    }

    /// Product of axis weights at flat index `idx`.
    pub fn weight(&self, mut idx: usize) -> f64 {
        let mut w = 1.0;
        for ax in self.axes.iter().rev() {
            w *= ax.weights[idx % ax.len()];
            idx /= ax.len();
        }
        w
    }

    /// Σ w v.
    pub fn integral(&self) -> Complex64 {
        crate::par::sum_complex(self.len(), |i| self.values[i] * self.weight(i))
    }

    /// Σ w |v|², the squared L² norm in the measure of the axes.
    pub fn norm_sq(&self) -> f64 {
        crate::par::sum_real(self.len(), |i| self.values[i].norm_sqr() * self.weight(i))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// α·self + β·other on the same grid.
    pub fn combine(&self, alpha: Complex64, other: &SampledFunction, beta: Complex64) -> Result<Self> {
        if self.axes != other.axes {
            return Err(Error::contract("combining functions on different grids"));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| alpha * a + beta * b).collect();
        SampledFunction::new(self.axes.clone(), values)
    }

    /// Fails if |f| on the boundary of a linear or log axis exceeds
    /// `threshold · max|f|`.
    pub fn check_decay(&self, threshold: f64) -> Result<()> {
        let peak = self.max_abs();
        if peak == 0.0 {
            return Ok(());
        }
        let shape = self.shape();
        for (k, ax) in self.axes.iter().enumerate() {
            if !matches!(ax.kind, AxisKind::Linear | AxisKind::Log) {
                continue;
            }
            let inner: usize = shape[k + 1..].iter().product();
            let n = shape[k];
            let boundary = (0..self.len())
                .filter(|i| {
                    let pos = (i / inner) % n;
                    pos == 0 || pos + 1 == n
                })
                .map(|i| self.values[i].norm())
                .fold(0.0, f64::max);
            if boundary > threshold * peak {
                return Err(Error::BoundaryDecay {
                    axis: ax.label.clone(),
                    boundary,
                    peak,
                    threshold,
                });
            }
        }
        Ok(())
    }

    /// Applies `matrix` (row-major, `new_axis.len() × axes[k].len()`) along axis `k`,
    /// replacing that axis by `new_axis`.
    pub fn apply_axis(&self, k: usize, new_axis: Axis, matrix: &[Complex64]) -> Result<Self> {
        let shape = self.shape();
        let n_in = shape[k];
        let n_out = new_axis.len();
        if matrix.len() != n_in * n_out {
            return Err(Error::contract(format!(
                "axis matrix is {} entries, expected {n_out}×{n_in}",
                matrix.len()
            )));
        }
        let inner: usize = shape[k + 1..].iter().product();
        let outer: usize = shape[..k].iter().product();
        let blocks = crate::par::map_indexed(outer * n_out, |b| {
            let (o, j) = (b / n_out, b % n_out);
            let row = &matrix[j * n_in..(j + 1) * n_in];
            let mut acc = vec![Complex64::new(0.0, 0.0); inner];
            for (i, m) in row.iter().enumerate() {
                if *m == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let src = &self.values[(o * n_in + i) * inner..(o * n_in + i + 1) * inner];
                for (a, s) in acc.iter_mut().zip(src) {
                    *a += m * s;
                }
            }
            acc
        });
        let mut axes = self.axes.clone();
        axes[k] = new_axis;
        SampledFunction::new(axes, blocks.concat())
    }

    /// Restriction to index `i` of axis `k` (the axis is dropped).
    pub fn slice(&self, k: usize, i: usize) -> Result<Self> {
        let shape = self.shape();
        if k >= shape.len() || i >= shape[k] {
            return Err(Error::contract("slice index out of range"));
        }
        let inner: usize = shape[k + 1..].iter().product();
        let outer: usize = shape[..k].iter().product();
        let mut values = Vec::with_capacity(outer * inner);
        for o in 0..outer {
            let start = (o * shape[k] + i) * inner;
            values.extend_from_slice(&self.values[start..start + inner]);
        }
        let mut axes = self.axes.clone();
        axes.remove(k);
        SampledFunction::new(axes, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn shape_and_labels_checked() {
        let ax = Axis::linear("x", Axis1d::trapezoid(3, 0.0, 1.0));
        assert!(SampledFunction::new(vec![ax.clone()], vec![c(1.0); 2]).is_err());
        assert!(SampledFunction::new(vec![ax.clone(), ax], vec![c(1.0); 9]).is_err());
    }

    #[test]
    fn from_fn_orders_last_axis_fastest() {
        let x = Axis::linear("x", Axis1d::trapezoid(2, 0.0, 1.0));
        let y = Axis::linear("y", Axis1d::trapezoid(3, 0.0, 2.0));
        let f = SampledFunction::from_fn(vec![x, y], |p| c(10.0 * p[0] + p[1])).unwrap();
        let v: Vec<f64> = f.values().iter().map(|z| z.re).collect();
        assert_eq!(v, vec![0.0, 1.0, 2.0, 10.0, 11.0, 12.0]);
        assert_eq!(f.slice(0, 1).unwrap().values()[2], c(12.0));
        assert_eq!(f.slice(1, 0).unwrap().values(), &[c(0.0), c(10.0)]);
    }

    #[test]
    fn apply_axis_matches_explicit_sum() {
        let x = Axis::linear("x", Axis1d::trapezoid(2, 0.0, 1.0));
        let y = Axis::linear("y", Axis1d::trapezoid(3, 0.0, 2.0));
        let f = SampledFunction::from_fn(vec![x, y], |p| c(10.0 * p[0] + p[1])).unwrap();
        // Sum over y into a single point.
        let out = f.apply_axis(1, Axis::linear("s", Axis1d::trapezoid(2, 0.0, 1.0)), &[c(1.0), c(1.0), c(1.0), c(0.0), c(0.0), c(1.0)]).unwrap();
        let v: Vec<f64> = out.values().iter().map(|z| z.re).collect();
        assert_eq!(v, vec![3.0, 2.0, 33.0, 12.0]);
    }

    #[test]
    fn decay_check_flags_wide_function() {
        let x = Axis::linear("x", Axis1d::trapezoid(65, -8.0, 8.0));
        let narrow = SampledFunction::from_fn(vec![x.clone()], |p| c((-p[0] * p[0] / (2.0 * 0.64)).exp())).unwrap();
        assert!(narrow.check_decay(1e-14).is_ok());
        let wide = SampledFunction::from_fn(vec![x], |p| c((-p[0] * p[0] / 8.0).exp())).unwrap();
        assert!(matches!(wide.check_decay(1e-14), Err(Error::BoundaryDecay { .. })));
    }
}
