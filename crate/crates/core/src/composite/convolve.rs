//! Group convolution g∗f(X) = ∫ f(Y⁻¹X) g(Y) dY by quadrature in chart coordinates.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::Axis1d;
use crate::spectra::{Axis, AxisKind, SampledFunction, DECAY_THRESHOLD};

/// Largest chart dimension handled by the interpolants.
const MAX_DIM: usize = 8;

/// Group law in a coordinate chart, with the density of the convolution
/// measure relative to Lebesgue measure in the chart.
pub trait ChartGroup: Sync {
    fn dim(&self) -> usize;
    fn multiply(&self, x: &[f64], y: &[f64], out: &mut [f64]);
    fn inverse(&self, x: &[f64], out: &mut [f64]);
    fn haar_density(&self, x: &[f64]) -> f64;
}

/// ℝᵈ under addition.
#[derive(Clone, Copy, Debug)]
pub struct Euclidean {
    pub dim: usize,
}

impl ChartGroup for Euclidean {
    fn dim(&self) -> usize {
        self.dim
    }

    fn multiply(&self, x: &[f64], y: &[f64], out: &mut [f64]) {
        for i in 0..self.dim {
            out[i] = x[i] + y[i];
        }
    }

    fn inverse(&self, x: &[f64], out: &mut [f64]) {
        for i in 0..self.dim {
            out[i] = -x[i];
        }
    }

    fn haar_density(&self, _: &[f64]) -> f64 {
        1.0
    }
}

/// S = N⋊A for n = 2 in the chart (x, u) ↦ n(x)·a(u); dx du is right invariant.
#[derive(Clone, Copy, Debug)]
pub struct Solvable2;

impl ChartGroup for Solvable2 {
    fn dim(&self) -> usize {
        2
    }

    fn multiply(&self, x: &[f64], y: &[f64], out: &mut [f64]) {
        out[0] = x[0] + (2.0 * x[1]).exp() * y[0];
        out[1] = x[1] + y[1];
    }

    fn inverse(&self, x: &[f64], out: &mut [f64]) {
        out[0] = -(-2.0 * x[1]).exp() * x[0];
        out[1] = -x[1];
    }

    fn haar_density(&self, _: &[f64]) -> f64 {
        1.0
    }
}

/// Row-major 2×2 matrix.
pub type Mat2 = [f64; 4];

pub fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

pub fn inv2(a: &Mat2) -> Mat2 {
    let d = a[0] * a[3] - a[1] * a[2];
    [a[3] / d, -a[1] / d, -a[2] / d, a[0] / d]
}

pub fn apply2(a: &Mat2, v: [f64; 2]) -> [f64; 2] {
    [a[0] * v[0] + a[1] * v[1], a[2] * v[0] + a[3] * v[1]]
}

/// e^s · n(x) a(u) k(θ) for the chart point (x, u, θ, s).
pub fn glplus2_matrix(c: &[f64]) -> Mat2 {
    let (x, u, th, s) = (c[0], c[1], c[2], c[3]);
    let (sn, cs) = th.sin_cos();
    let (eu, emu, t) = (u.exp(), (-u).exp(), s.exp());
    [
        t * (eu * cs + x * emu * sn),
        t * (x * emu * cs - eu * sn),
        t * emu * sn,
        t * emu * cs,
    ]
}

/// Chart point of a 2×2 matrix with positive determinant.
pub fn glplus2_coords(m: &Mat2) -> [f64; 4] {
    let t = (m[0] * m[3] - m[1] * m[2]).sqrt();
    let (p, q) = (m[2] / t, m[3] / t);
    let a2 = p.hypot(q);
    let (sn, cs) = (p / a2, q / a2);
    let u = -a2.ln();
    let x = (m[0] * sn + m[1] * cs) / t * u.exp();
    [x, u, sn.atan2(cs).rem_euclid(2.0 * PI), t.ln()]
}

/// GL₊(2) in the chart (x, u, θ, s) with its Haar measure.
#[derive(Clone, Copy, Debug)]
pub struct LinearPlus2;

impl ChartGroup for LinearPlus2 {
    fn dim(&self) -> usize {
        4
    }

    fn multiply(&self, x: &[f64], y: &[f64], out: &mut [f64]) {
        out[..4].copy_from_slice(&glplus2_coords(&mul2(&glplus2_matrix(x), &glplus2_matrix(y))));
    }

    fn inverse(&self, x: &[f64], out: &mut [f64]) {
        out[..4].copy_from_slice(&glplus2_coords(&inv2(&glplus2_matrix(x))));
    }

    fn haar_density(&self, x: &[f64]) -> f64 {
        (-2.0 * x[1]).exp()
    }
}

/// GA₊(2) in the chart (B₁, B₂, x, u, θ, s) with the measure dB dQ.
#[derive(Clone, Copy, Debug)]
pub struct Affine2;

impl ChartGroup for Affine2 {
    fn dim(&self) -> usize {
        6
    }

    fn multiply(&self, x: &[f64], y: &[f64], out: &mut [f64]) {
        let q = glplus2_matrix(&x[2..6]);
        let b = apply2(&q, [y[0], y[1]]);
        out[0] = x[0] + b[0];
        out[1] = x[1] + b[1];
        out[2..6].copy_from_slice(&glplus2_coords(&mul2(&q, &glplus2_matrix(&y[2..6]))));
    }

    fn inverse(&self, x: &[f64], out: &mut [f64]) {
        let qi = inv2(&glplus2_matrix(&x[2..6]));
        let b = apply2(&qi, [x[0], x[1]]);
        out[0] = -b[0];
        out[1] = -b[1];
        out[2..6].copy_from_slice(&glplus2_coords(&qi));
    }

    fn haar_density(&self, x: &[f64]) -> f64 {
        (-2.0 * x[3]).exp()
    }
}

/// Something that can be evaluated anywhere in chart coordinates.
pub trait Field: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> Complex64;
}

/// One uniform interpolation axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridAxis {
    pub lo: f64,
    pub step: f64,
    pub count: usize,
    /// Some(period) for wrapped axes.
    pub period: Option<f64>,
}

impl GridAxis {
    pub fn from_rule(rule: &Axis1d) -> Result<Self> {
        if rule.len() < 2 {
            return Err(Error::contract("interpolation needs at least two nodes per axis"));
        }
        let step = match rule.period {
            Some(p) => p / rule.len() as f64,
            None => rule.step(),
        };
        Ok(GridAxis { lo: rule.nodes[0], step, count: rule.len(), period: rule.period })
    }

    pub fn uniform(count: usize, lo: f64, hi: f64) -> Self {
        GridAxis { lo, step: (hi - lo) / (count - 1) as f64, count, period: None }
    }

    pub fn node(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.step
    }

    /// Lower node, upper node and fraction; `None` outside a non-periodic axis.
    fn locate(&self, x: f64) -> Option<(usize, usize, f64)> {
        let t = (x - self.lo) / self.step;
        if self.period.is_some() {
            let t = t.rem_euclid(self.count as f64);
            let i = (t.floor() as usize).min(self.count - 1);
            return Some((i, (i + 1) % self.count, t - i as f64));
        }
        let top = (self.count - 1) as f64;
        let eps = 1e-9;
        if !(t >= -eps && t <= top + eps) {
            return None;
        }
        let i = (t.floor().max(0.0) as usize).min(self.count - 2);
        Some((i, i + 1, (t - i as f64).clamp(0.0, 1.0)))
    }
}

/// Multilinear interpolation of node values given by `node`; zero outside the box.
fn multilinear<F>(axes: &[GridAxis], x: &[f64], mut node: F) -> Complex64
where
    F: FnMut(&[usize]) -> Complex64,
{
    let d = axes.len();
    let mut lo = [0usize; MAX_DIM];
    let mut hi = [0usize; MAX_DIM];
    let mut fr = [0.0f64; MAX_DIM];
    for k in 0..d {
        match axes[k].locate(x[k]) {
            Some((a, b, f)) => {
                lo[k] = a;
                hi[k] = b;
                fr[k] = f;
            }
            None => return Complex64::new(0.0, 0.0),
        }
    }
    let mut idx = [0usize; MAX_DIM];
    let mut total = Complex64::new(0.0, 0.0);
    for corner in 0..(1usize << d) {
        let mut w = 1.0;
        for k in 0..d {
            if corner >> k & 1 == 1 {
                idx[k] = hi[k];
                w *= fr[k];
            } else {
                idx[k] = lo[k];
                w *= 1.0 - fr[k];
            }
        }
        if w != 0.0 {
            total += node(&idx[..d]) * w;
        }
    }
    total
}

/// Multilinear interpolant of a function sampled on a product of one-coordinate axes.
#[derive(Clone, Debug)]
pub struct Interpolant<'a> {
    f: &'a SampledFunction,
    axes: Vec<GridAxis>,
    strides: Vec<usize>,
}

impl<'a> Interpolant<'a> {
    pub fn new(f: &'a SampledFunction) -> Result<Self> {
        if f.axes().len() > MAX_DIM {
            return Err(Error::Unsupported(format!("interpolation in {} dimensions", f.axes().len())));
        }
        let mut axes = Vec::with_capacity(f.axes().len());
        for a in f.axes() {
            axes.push(grid_axis(a)?);
        }
        let shape = f.shape();
        let mut strides = vec![1; shape.len()];
        for k in (0..shape.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * shape[k + 1];
        }
        Ok(Interpolant { f, axes, strides })
    }
}

fn grid_axis(a: &Axis) -> Result<GridAxis> {
    match a.kind {
        AxisKind::Linear | AxisKind::Log | AxisKind::Angle => GridAxis::from_rule(&a.grid[0]),
        AxisKind::So3 => Err(Error::Unsupported("interpolation on SO(3)".into())),
        k => Err(Error::contract(format!("cannot interpolate along {k:?} axis `{}`", a.label))),
    }
}

impl Field for Interpolant<'_> {
    fn dim(&self) -> usize {
        self.axes.len()
    }

    fn eval(&self, x: &[f64]) -> Complex64 {
        let values = self.f.values();
        multilinear(&self.axes, x, |idx| {
            values[idx.iter().zip(&self.strides).map(|(i, s)| i * s).sum::<usize>()]
        })
    }
}

/// Multilinear interpolant of an analytic function on a virtual grid: node
/// values are computed on demand, so the grid is never stored.
pub struct LazyGrid<F> {
    axes: Vec<GridAxis>,
    f: F,
}

impl<F> LazyGrid<F>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    pub fn new(axes: Vec<GridAxis>, f: F) -> Result<Self> {
        if axes.is_empty() || axes.len() > MAX_DIM {
            return Err(Error::Unsupported(format!("lazy grid in {} dimensions", axes.len())));
        }
        Ok(LazyGrid { axes, f })
    }

    pub fn axes(&self) -> &[GridAxis] {
        &self.axes
    }
}

impl<F> Field for LazyGrid<F>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    fn dim(&self) -> usize {
        self.axes.len()
    }

    fn eval(&self, x: &[f64]) -> Complex64 {
        let mut p = [0.0; MAX_DIM];
        multilinear(&self.axes, x, |idx| {
            for (k, &i) in idx.iter().enumerate() {
                p[k] = self.axes[k].node(i);
            }
            (self.f)(&p[..idx.len()])
        })
    }
}

/// An analytic function used as a field without interpolation.
pub struct Analytic<F> {
    pub dim: usize,
    pub f: F,
}

impl<F> Field for Analytic<F>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> Complex64 {
        (self.f)(x)
    }
}

/// Quadrature nodes of `g` with their inverse coordinates and weights
/// w·ρ·g, skipping zero terms.
struct Kernel {
    inverses: Vec<f64>,
    weights: Vec<Complex64>,
    dim: usize,
}

fn kernel(g: &SampledFunction, group: &dyn ChartGroup) -> Result<Kernel> {
    let dim = group.dim();
    let arity: usize = g.axes().iter().map(|a| a.arity).sum();
    if arity != dim {
        return Err(Error::contract(format!("g has {arity} coordinates, the group chart has {dim}")));
    }
    let mut inverses = Vec::new();
    let mut weights = Vec::new();
    let mut y = vec![0.0; dim];
    let mut yi = vec![0.0; dim];
    for (i, v) in g.values().iter().enumerate() {
        if *v == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mi = g.multi_index(i);
        let mut off = 0;
        for (a, &j) in g.axes().iter().zip(&mi) {
            y[off..off + a.arity].copy_from_slice(a.point(j));
            off += a.arity;
        }
        group.inverse(&y, &mut yi);
        inverses.extend_from_slice(&yi);
        weights.push(v * g.weight(i) * group.haar_density(&y));
    }
    Ok(Kernel { inverses, weights, dim })
}

/// g∗f at each of `points`, with g sampled on its quadrature grid and f any field.
pub fn convolve_at(f: &dyn Field, g: &SampledFunction, group: &dyn ChartGroup, points: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    if f.dim() != group.dim() {
        return Err(Error::contract(format!("f has {} coordinates, the group chart has {}", f.dim(), group.dim())));
    }
    if let Some(p) = points.iter().find(|p| p.len() != group.dim()) {
        return Err(Error::contract(format!("evaluation point of dimension {}", p.len())));
    }
    let k = kernel(g, group)?;
    Ok(crate::par::map_indexed(points.len(), |p| {
        let x = &points[p];
        let mut z = [0.0; MAX_DIM];
        let mut total = Complex64::new(0.0, 0.0);
        for (j, w) in k.weights.iter().enumerate() {
            group.multiply(&k.inverses[j * k.dim..(j + 1) * k.dim], x, &mut z);
            total += w * f.eval(&z[..k.dim]);
        }
        total
    }))
}

/// g∗f on the grid of f, with f interpolated multilinearly and zero outside its box.
pub fn convolve(f: &SampledFunction, g: &SampledFunction, group: &dyn ChartGroup) -> Result<SampledFunction> {
    f.check_decay(DECAY_THRESHOLD)?;
    g.check_decay(DECAY_THRESHOLD)?;
    let interp = Interpolant::new(f)?;
    let points: Vec<Vec<f64>> = (0..f.len())
        .map(|i| {
            f.multi_index(i)
                .iter()
                .zip(f.axes())
                .flat_map(|(&j, a)| a.point(j).to_vec())
                .collect()
        })
        .collect();
    let values = convolve_at(&interp, g, group, &points)?;
    SampledFunction::new(f.axes().to_vec(), values)
}
