//! Group levels, their coordinate layouts and sampled functions on them.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{iwasawa_decompose_matrix, split_gl_plus_matrix, GroupElement, GroupTag, IwasawaOrdering};
use crate::quadrature::chart::{euler_zyz_angles, euler_zyz_matrix, log_diagonal, unipotent_entries, unipotent_from_entries};
use crate::quadrature::{build_rule, Axis1d, FactorKind, QuadratureRule, RuleParams};
use crate::spectra::{Axis, AxisKind, SampledFunction};

/// The groups of the transform chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    #[serde(rename = "N")]
    N,
    #[serde(rename = "S")]
    S,
    #[serde(rename = "SL")]
    SL,
    #[serde(rename = "GL+")]
    GLPlus,
    #[serde(rename = "GL")]
    GL,
    #[serde(rename = "GA+")]
    GAPlus,
    #[serde(rename = "GA")]
    GA,
}

impl Level {
    pub const ALL: [Level; 7] = [Level::N, Level::S, Level::SL, Level::GLPlus, Level::GL, Level::GAPlus, Level::GA];

    /// Number of connected components (GL and GA have two).
    pub fn components(self) -> usize {
        match self {
            Level::GL | Level::GA => 2,
            _ => 1,
        }
    }

    /// Level whose chart describes one component.
    pub fn connected(self) -> Level {
        match self {
            Level::GL => Level::GLPlus,
            Level::GA => Level::GAPlus,
            l => l,
        }
    }

    /// Factors in coordinate order: (axis prefix, factor, coordinate count).
    pub fn layout(self, n: usize) -> Vec<(&'static str, FactorKind, usize)> {
        let compact = if n == 3 { FactorKind::KSo3 } else { FactorKind::KSo2 };
        let sl = vec![
            ("n", FactorKind::NUnipotent, n * (n - 1) / 2),
            ("u", FactorKind::ADiag, n - 1),
            ("k", compact, if n == 3 { 3 } else { 1 }),
        ];
        match self {
            Level::N => vec![("x", FactorKind::NUnipotent, n * (n + 1) / 2)],
            Level::S => sl[..2].to_vec(),
            Level::SL => sl,
            Level::GLPlus | Level::GL => [sl, vec![("t", FactorKind::ScaleRplus, 1)]].concat(),
            Level::GAPlus | Level::GA => {
                [vec![("A", FactorKind::EuclideanRn, n)], sl, vec![("t", FactorKind::ScaleRplus, 1)]].concat()
            }
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::N => "N",
            Level::S => "S",
            Level::SL => "SL",
            Level::GLPlus => "GL+",
            Level::GL => "GL",
            Level::GAPlus => "GA+",
            Level::GA => "GA",
        })
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "N" => Ok(Level::N),
            "S" => Ok(Level::S),
            "SL" => Ok(Level::SL),
            "GL+" | "GLPlus" | "GL_plus" => Ok(Level::GLPlus),
            "GL" => Ok(Level::GL),
            "GA+" | "GAPlus" | "GA_plus" => Ok(Level::GAPlus),
            "GA" => Ok(Level::GA),
            other => Err(Error::Parse(format!("unknown level `{other}`"))),
        }
    }
}

/// Uniform grid on one coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisGrid {
    pub count: usize,
    pub lo: f64,
    pub hi: f64,
}

impl AxisGrid {
    pub fn new(count: usize, lo: f64, hi: f64) -> Self {
        AxisGrid { count, lo, hi }
    }

    pub fn rule(&self) -> Axis1d {
        Axis1d::trapezoid(self.count, self.lo, self.hi)
    }

    /// Twice as dense on the same interval.
    pub fn refined(&self) -> Self {
        self.refined_by(2)
    }

    /// `factor` times as dense on the same interval, keeping the old nodes.
    pub fn refined_by(&self, factor: usize) -> Self {
        AxisGrid { count: (self.count - 1) * factor + 1, ..*self }
    }
}

/// Grids for every factor kind. A and t ranges are in log coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_grid: AxisGrid,
    pub a_grid: AxisGrid,
    pub t_grid: AxisGrid,
    pub translation_grid: AxisGrid,
    /// SO(2) nodes, or α/γ nodes on SO(3).
    pub k_count: usize,
    pub band_limit: usize,
}

impl GridSpec {
    /// Same grid and count on every non-compact axis.
    pub fn uniform(count: usize, lo: f64, hi: f64, k_count: usize, band_limit: usize) -> Self {
        let g = AxisGrid::new(count, lo, hi);
        GridSpec { n_grid: g, a_grid: g, t_grid: g, translation_grid: g, k_count, band_limit }
    }

    pub fn refined(&self) -> Self {
        GridSpec {
            n_grid: self.n_grid.refined(),
            a_grid: self.a_grid.refined(),
            t_grid: self.t_grid.refined(),
            translation_grid: self.translation_grid.refined(),
            k_count: 2 * self.k_count,
            band_limit: self.band_limit,
        }
    }

    pub fn describe(&self) -> String {
        let g = |a: &AxisGrid| format!("{}@[{},{}]", a.count, a.lo, a.hi);
        format!(
            "N {} A {} t {} R^n {} K {} L {}",
            g(&self.n_grid),
            g(&self.a_grid),
            g(&self.t_grid),
            g(&self.translation_grid),
            self.k_count,
            self.band_limit
        )
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("n = {n}; only n = 2 and n = 3 are supported")))
    }
}

/// Quadrature rule of one factor on the grids of `spec`.
pub fn factor_rule(factor: FactorKind, dim: usize, spec: &GridSpec) -> Result<QuadratureRule> {
    let grid = |g: &AxisGrid| RuleParams::grid(g.count, g.lo, g.hi).with_dim(dim);
    match factor {
        FactorKind::KSo2 => build_rule(factor, &RuleParams::compact(spec.k_count)),
        FactorKind::KSo3 => build_rule(
            factor,
            &RuleParams { count: spec.k_count, range: None, dim: 3, beta_count: Some((spec.k_count / 2).max(spec.band_limit + 1)) },
        ),
        FactorKind::ADiag => build_rule(factor, &grid(&spec.a_grid)),
        FactorKind::NUnipotent => build_rule(factor, &grid(&spec.n_grid)),
        FactorKind::EuclideanRn => build_rule(factor, &grid(&spec.translation_grid)),
        FactorKind::ScaleRplus => {
            let t = spec.t_grid;
            build_rule(factor, &RuleParams::grid(t.count, t.lo.exp(), t.hi.exp()))
        }
    }
}

/// Axes of one factor of `level`.
pub fn factor_axes(prefix: &str, factor: FactorKind, dim: usize, spec: &GridSpec) -> Result<Vec<Axis>> {
    Axis::from_rule(prefix, &factor_rule(factor, dim, spec)?)
}

/// All axes of `level` in coordinate order.
pub fn level_axes(level: Level, n: usize, spec: &GridSpec) -> Result<Vec<Axis>> {
    check_n(n)?;
    let mut axes = Vec::new();
    for (prefix, factor, dim) in level.layout(n) {
        axes.extend(factor_axes(prefix, factor, dim, spec)?);
    }
    Ok(axes)
}

/// Axes grouped by factor.
pub fn level_factor_axes(level: Level, n: usize, spec: &GridSpec) -> Result<Vec<Vec<Axis>>> {
    check_n(n)?;
    level.layout(n).into_iter().map(|(p, f, d)| factor_axes(p, f, d, spec)).collect()
}

/// Checks that `axes` have the kinds and order of `level`'s chart.
pub fn check_layout(level: Level, n: usize, axes: &[Axis]) -> Result<()> {
    check_n(n)?;
    let mut expected = Vec::new();
    for (_, factor, dim) in level.connected().layout(n) {
        match factor {
            FactorKind::KSo2 => expected.push(AxisKind::Angle),
            FactorKind::KSo3 => expected.push(AxisKind::So3),
            FactorKind::ADiag | FactorKind::ScaleRplus => expected.extend(std::iter::repeat_n(AxisKind::Log, dim)),
            FactorKind::NUnipotent | FactorKind::EuclideanRn => {
                expected.extend(std::iter::repeat_n(AxisKind::Linear, dim))
            }
        }
    }
    let got: Vec<AxisKind> = axes.iter().map(|a| a.kind).collect();
    if got != expected {
        return Err(Error::contract(format!(
            "axes {got:?} do not match the {level} (n = {n}) chart {expected:?}"
        )));
    }
    Ok(())
}

/// Total coordinate count of `level`'s chart.
pub fn chart_dim(level: Level, n: usize) -> usize {
    level.connected().layout(n).iter().map(|(_, _, d)| d).sum()
}

fn nak_matrix(n: usize, coords: &[f64]) -> DMatrix<f64> {
    let nd = n * (n - 1) / 2;
    let nm = unipotent_from_entries(&coords[..nd], n);
    let a = DMatrix::from_diagonal(&DVector::from_vec(log_diagonal(&coords[nd..nd + n - 1], n)));
    let kc = &coords[nd + n - 1..];
    let k = if n == 2 {
        let (s, c) = kc[0].sin_cos();
        DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
    } else {
        euler_zyz_matrix(kc[0], kc[1], kc[2])
    };
    nm * a * k
}

/// Linear part of a chart point: n·a (S), n·a·k (SL) or t·n·a·k (GL₊).
pub fn chart_matrix(level: Level, n: usize, coords: &[f64]) -> DMatrix<f64> {
    match level.connected() {
        Level::N => unipotent_from_entries(coords, n + 1),
        Level::S => {
            let nd = n * (n - 1) / 2;
            let nm = unipotent_from_entries(&coords[..nd], n);
            nm * DMatrix::from_diagonal(&DVector::from_vec(log_diagonal(&coords[nd..], n)))
        }
        Level::SL => nak_matrix(n, coords),
        Level::GLPlus => {
            let d = coords.len();
            nak_matrix(n, &coords[..d - 1]) * coords[d - 1].exp()
        }
        _ => {
            let d = coords.len();
            nak_matrix(n, &coords[n..d - 1]) * coords[d - 1].exp()
        }
    }
}

/// Group element at a chart point of one component.
pub fn level_element(level: Level, n: usize, coords: &[f64]) -> Result<GroupElement> {
    check_n(n)?;
    if coords.len() != chart_dim(level, n) {
        return Err(Error::contract(format!(
            "{level} chart (n = {n}) has {} coordinates, got {}",
            chart_dim(level, n),
            coords.len()
        )));
    }
    let m = chart_matrix(level, n, coords);
    match level.connected() {
        Level::N => GroupElement::unipotent(m),
        Level::S | Level::SL => GroupElement::new(GroupTag::SpecialLinear, m, None),
        Level::GLPlus => GroupElement::new(GroupTag::GeneralLinearPlus, m, None),
        _ => GroupElement::affine(DVector::from_column_slice(&coords[..n]), m),
    }
}

fn nak_coordinates(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = m.nrows();
    let f = iwasawa_decompose_matrix(m, IwasawaOrdering::Nak)?;
    let mut out = unipotent_entries(f.n().matrix(), n);
    let d = f.a_diagonal();
    out.extend(d[..n - 1].iter().map(|v| v.ln()));
    let k = f.k().matrix();
    if n == 2 {
        out.push(k[(1, 0)].atan2(k[(0, 0)]).rem_euclid(2.0 * std::f64::consts::PI));
    } else {
        let (a, b, c) = euler_zyz_angles(k);
        out.extend([a, b, c]);
    }
    Ok(out)
}

/// Chart coordinates of `g`; inverse of [`level_element`].
pub fn level_coordinates(level: Level, n: usize, g: &GroupElement) -> Result<Vec<f64>> {
    let m = g.matrix();
    match level.connected() {
        Level::N => Ok(unipotent_entries(m, n + 1)),
        Level::S => {
            let mut c = nak_coordinates(m)?;
            c.truncate(n * (n - 1) / 2 + n - 1);
            Ok(c)
        }
        Level::SL => nak_coordinates(m),
        Level::GLPlus => {
            let split = split_gl_plus_matrix(m)?;
            let mut c = nak_coordinates(split.s.matrix())?;
            c.push(split.t.ln());
            Ok(c)
        }
        _ => {
            let t = g.translation().ok_or_else(|| Error::contract("affine chart needs a translation"))?;
            let split = split_gl_plus_matrix(m)?;
            let mut c: Vec<f64> = t.iter().copied().collect();
            c.extend(nak_coordinates(split.s.matrix())?);
            c.push(split.t.ln());
            Ok(c)
        }
    }
}

/// Samples a function of group elements on the chart grid of `level`.
pub fn sample_on_level<F>(level: Level, n: usize, axes: Vec<Axis>, f: F) -> Result<SampledFunction>
where
    F: Fn(&GroupElement) -> Complex64 + Sync + Send,
{
    check_layout(level, n, &axes)?;
    let d = chart_dim(level, n);
    let err = std::sync::Mutex::new(None);
    let out = SampledFunction::from_fn(axes, |x| match level_element(level, n, &x[..d]) {
        Ok(g) => f(&g),
        Err(e) => {
            *err.lock().expect("poisoned") = Some(e);
            Complex64::new(0.0, 0.0)
        }
    })?;
    match err.into_inner().expect("poisoned") {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Outer product of functions on disjoint groups of axes.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparableFunction {
    factors: Vec<SampledFunction>,
}

impl SeparableFunction {
    pub fn new(factors: Vec<SampledFunction>) -> Result<Self> {
        let mut labels = std::collections::HashSet::new();
        for f in &factors {
            for a in f.axes() {
                if !labels.insert(a.label.clone()) {
                    return Err(Error::contract(format!("axis `{}` appears in two factors", a.label)));
                }
            }
        }
        Ok(SeparableFunction { factors })
    }

    pub fn factors(&self) -> &[SampledFunction] {
        &self.factors
    }

    pub fn axes(&self) -> Vec<Axis> {
        self.factors.iter().flat_map(|f| f.axes().iter().cloned()).collect()
    }

    /// Σ w |f|², as the product of the factor norms.
    pub fn norm_sq(&self) -> f64 {
        self.factors.iter().map(SampledFunction::norm_sq).product()
    }

    /// Value at one point of the product grid, given per-factor flat indices.
    pub fn value(&self, indices: &[usize]) -> Complex64 {
        self.factors.iter().zip(indices).map(|(f, &i)| f.values()[i]).product()
    }

    /// The full tensor. Memory grows as the product of the factor sizes.
    pub fn to_dense(&self) -> Result<SampledFunction> {
        let mut values = vec![Complex64::new(1.0, 0.0)];
        for f in &self.factors {
            let mut next = Vec::with_capacity(values.len() * f.len());
            for v in &values {
                next.extend(f.values().iter().map(|w| v * w));
            }
            values = next;
        }
        SampledFunction::new(self.axes(), values)
    }

    pub fn is_zero(&self) -> bool {
        self.factors.iter().any(|f| f.max_abs() == 0.0)
    }
}

/// A function on one component, stored densely or as a product of factors.
#[derive(Clone, Debug, PartialEq)]
pub enum LevelFunction {
    Dense(SampledFunction),
    Separable(SeparableFunction),
}

impl LevelFunction {
    pub fn axes(&self) -> Vec<Axis> {
        match self {
            LevelFunction::Dense(f) => f.axes().to_vec(),
            LevelFunction::Separable(s) => s.axes(),
        }
    }

    pub fn norm_sq(&self) -> f64 {
        match self {
            LevelFunction::Dense(f) => f.norm_sq(),
            LevelFunction::Separable(s) => s.norm_sq(),
        }
    }

    /// ∫ f in the coordinate measure.
    pub fn integral(&self) -> Complex64 {
        match self {
            LevelFunction::Dense(f) => f.integral(),
            LevelFunction::Separable(s) => s.factors().iter().map(SampledFunction::integral).product(),
        }
    }

    pub fn to_dense(&self) -> Result<SampledFunction> {
        match self {
            LevelFunction::Dense(f) => Ok(f.clone()),
            LevelFunction::Separable(s) => s.to_dense(),
        }
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.axes().iter().map(Axis::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl From<SampledFunction> for LevelFunction {
    fn from(f: SampledFunction) -> Self {
        LevelFunction::Dense(f)
    }
}

impl From<SeparableFunction> for LevelFunction {
    fn from(f: SeparableFunction) -> Self {
        LevelFunction::Separable(f)
    }
}
