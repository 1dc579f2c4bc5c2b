//! Test-function bundles: one analytic descriptor per factor of a level.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::composite::{level_factor_axes, GridSpec, Level, LevelFunction, SeparableFunction};
use crate::error::{Error, Result};
use crate::quadrature::FactorKind;
use crate::spectra::SampledFunction;

/// Relative size of the spectrum at the Nyquist frequency below which a
/// Gaussian counts as resolved.
pub const ALIAS_THRESHOLD: f64 = 1e-14;

/// A function of one factor's chart coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FunctionDescriptor {
    /// ∏ exp(−(xᵢ − c)² / 2w²) in the chart coordinates.
    Gaussian { center: f64, width: f64 },
    /// ∏ exp(−(uᵢ − ln c)² / 2w²) on log coordinates uᵢ = ln tᵢ; `center` is a
    /// point of ℝ₊*.
    LogGaussian { center: f64, width: f64 },
    /// Σ c_m e^{imθ} on SO(2); on SO(3), Σ c_m e^{im(α+γ)} cos^{2|m|}(β/2),
    /// which has band-limit max |m|. Terms are (m, re, im).
    Trig { terms: Vec<(i64, f64, f64)> },
    /// exp(1 − 1/(1 − r²)) for r = |x − c| / radius < 1, else 0.
    Bump { center: f64, radius: f64 },
    Zero,
}

impl FunctionDescriptor {
    /// Value at a chart point of a factor of kind `factor`.
    pub fn eval(&self, factor: FactorKind, x: &[f64]) -> Complex64 {
        let real = |v: f64| Complex64::new(v, 0.0);
        match self {
            FunctionDescriptor::Gaussian { center, width } => {
                real((-x.iter().map(|v| (v - center).powi(2)).sum::<f64>() / (2.0 * width * width)).exp())
            }
            FunctionDescriptor::LogGaussian { center, width } => {
                let c = center.ln();
                real((-x.iter().map(|v| (v - c).powi(2)).sum::<f64>() / (2.0 * width * width)).exp())
            }
            FunctionDescriptor::Trig { terms } => {
                let (phase, envelope) = match factor {
                    FactorKind::KSo3 => (x[0] + x[2], (0.5 * x[1]).cos().powi(2)),
                    _ => (x[0], 1.0),
                };
                terms
                    .iter()
                    .map(|&(m, re, im)| {
                        Complex64::new(re, im)
                            * Complex64::from_polar(1.0, m as f64 * phase)
                            * envelope.powi(m.unsigned_abs() as i32)
                    })
                    .sum()
            }
            FunctionDescriptor::Bump { center, radius } => {
                let r2 = x.iter().map(|v| (v - center).powi(2)).sum::<f64>() / (radius * radius);
                if r2 < 1.0 {
                    real((1.0 - 1.0 / (1.0 - r2)).exp())
                } else {
                    real(0.0)
                }
            }
            FunctionDescriptor::Zero => real(0.0),
        }
    }

    /// One-dimensional profile along a single coordinate, for boundary checks.
    pub fn profile(&self, v: f64) -> f64 {
        self.eval(FactorKind::NUnipotent, &[v]).norm()
    }

    /// Largest |m| of a trigonometric descriptor.
    pub fn degree(&self) -> usize {
        match self {
            FunctionDescriptor::Trig { terms } => terms.iter().map(|t| t.0.unsigned_abs() as usize).max().unwrap_or(0),
            _ => 0,
        }
    }

    /// Closed-form ∫|f|² over `dim` coordinates, where one exists.
    pub fn norm_sq_exact(&self, factor: FactorKind, dim: usize) -> Option<f64> {
        match self {
            FunctionDescriptor::Gaussian { width, .. } | FunctionDescriptor::LogGaussian { width, .. } => {
                Some((width * PI.sqrt()).powi(dim as i32))
            }
            FunctionDescriptor::Trig { terms } if factor == FactorKind::KSo2 => {
                let mut by_m = std::collections::BTreeMap::new();
                for &(m, re, im) in terms {
                    *by_m.entry(m).or_insert(Complex64::new(0.0, 0.0)) += Complex64::new(re, im);
                }
                Some(by_m.values().map(|c| c.norm_sqr()).sum())
            }
            FunctionDescriptor::Zero => Some(0.0),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FunctionDescriptor::Zero => true,
            FunctionDescriptor::Trig { terms } => terms.iter().all(|t| t.1 == 0.0 && t.2 == 0.0),
            _ => false,
        }
    }

    /// Problems with using this descriptor on a factor of kind `factor`.
    pub fn check(&self, factor: FactorKind) -> Vec<String> {
        let compact = matches!(factor, FactorKind::KSo2 | FactorKind::KSo3);
        let log = matches!(factor, FactorKind::ADiag | FactorKind::ScaleRplus);
        let mut errs = Vec::new();
        match self {
            FunctionDescriptor::Gaussian { width, .. } | FunctionDescriptor::Bump { radius: width, .. } => {
                if compact {
                    errs.push(format!("{} does not live on the compact factor {factor}", self.name()));
                }
                if !(*width > 0.0 && width.is_finite()) {
                    errs.push(format!("width must be positive and finite, got {width}"));
                }
            }
            FunctionDescriptor::LogGaussian { center, width } => {
                if !log {
                    errs.push(format!("log-gaussian needs a log axis, {factor} is not one"));
                }
                if !(*center > 0.0) {
                    errs.push(format!("log-gaussian center must be positive, got {center}"));
                }
                if !(*width > 0.0 && width.is_finite()) {
                    errs.push(format!("width must be positive and finite, got {width}"));
                }
            }
            FunctionDescriptor::Trig { .. } => {
                if !compact {
                    errs.push(format!("trig needs a compact factor, {factor} is not one"));
                }
            }
            FunctionDescriptor::Zero => {}
        }
        errs
    }

    fn name(&self) -> &'static str {
        match self {
            FunctionDescriptor::Gaussian { .. } => "gaussian",
            FunctionDescriptor::LogGaussian { .. } => "log-gaussian",
            FunctionDescriptor::Trig { .. } => "trig",
            FunctionDescriptor::Bump { .. } => "bump",
            FunctionDescriptor::Zero => "zero",
        }
    }

    /// Width of the coordinate profile, for the aliasing check; `None` for
    /// descriptors without a Gaussian spectrum.
    pub fn gaussian_width(&self) -> Option<f64> {
        match self {
            FunctionDescriptor::Gaussian { width, .. } | FunctionDescriptor::LogGaussian { width, .. } => Some(*width),
            _ => None,
        }
    }
}

/// Named presets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BundleName {
    Gaussian,
    LogGaussian,
    Trig,
    Bump,
    Zero,
}

impl fmt::Display for BundleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BundleName::Gaussian => "gaussian",
            BundleName::LogGaussian => "log-gaussian",
            BundleName::Trig => "trig",
            BundleName::Bump => "bump",
            BundleName::Zero => "zero",
        })
    }
}

impl FromStr for BundleName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "gaussian" => Ok(BundleName::Gaussian),
            "log-gaussian" => Ok(BundleName::LogGaussian),
            "trig" => Ok(BundleName::Trig),
            "bump" => Ok(BundleName::Bump),
            "zero" => Ok(BundleName::Zero),
            other => Err(Error::Parse(format!("unknown bundle `{other}`"))),
        }
    }
}

/// One descriptor per factor kind; multi-coordinate factors use the product
/// of the descriptor over their coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionBundle {
    pub name: String,
    /// Entries of N.
    pub n: FunctionDescriptor,
    /// Log coordinates of A.
    pub a: FunctionDescriptor,
    /// SO(2) or SO(3).
    pub k: FunctionDescriptor,
    /// log t on ℝ₊*.
    pub t: FunctionDescriptor,
    /// Translation part of GA.
    pub translation: FunctionDescriptor,
}

impl TestFunctionBundle {
    pub fn preset(name: BundleName) -> Self {
        let g = |center, width| FunctionDescriptor::Gaussian { center, width };
        let lg = |center, width| FunctionDescriptor::LogGaussian { center, width };
        let k = FunctionDescriptor::Trig { terms: vec![(0, 1.0, 0.0), (1, 0.5, 0.0), (-2, 0.0, 0.3)] };
        let mut b = TestFunctionBundle {
            name: name.to_string(),
            n: g(0.2, 0.8),
            a: g(0.1, 0.7),
            k,
            t: lg(1.0, 0.75),
            translation: g(-0.3, 0.9),
        };
        match name {
            BundleName::Gaussian => {}
            BundleName::LogGaussian => {
                b.a = lg(1.2, 0.8);
                b.t = lg(0.8, 0.8);
            }
            BundleName::Trig => {
                b.k = FunctionDescriptor::Trig {
                    terms: vec![(0, 1.0, 0.0), (1, 0.4, -0.2), (-1, 0.1, 0.3), (3, 0.0, 0.25), (-4, 0.2, 0.0)],
                };
            }
            BundleName::Bump => {
                let bump = |center| FunctionDescriptor::Bump { center, radius: 3.0 };
                b.n = bump(0.2);
                b.a = bump(0.1);
                b.t = bump(0.0);
                b.translation = bump(-0.3);
            }
            BundleName::Zero => {
                b.n = FunctionDescriptor::Zero;
                b.a = FunctionDescriptor::Zero;
                b.k = FunctionDescriptor::Zero;
                b.t = FunctionDescriptor::Zero;
                b.translation = FunctionDescriptor::Zero;
            }
        }
        b
    }

    pub fn descriptor(&self, factor: FactorKind) -> &FunctionDescriptor {
        match factor {
            FactorKind::NUnipotent => &self.n,
            FactorKind::ADiag => &self.a,
            FactorKind::KSo2 | FactorKind::KSo3 => &self.k,
            FactorKind::ScaleRplus => &self.t,
            FactorKind::EuclideanRn => &self.translation,
        }
    }

    /// Descriptors keyed by the configuration name of their factor.
    pub fn named(&self) -> [(&'static str, FactorKind, &FunctionDescriptor); 5] {
        [
            ("n", FactorKind::NUnipotent, &self.n),
            ("a", FactorKind::ADiag, &self.a),
            ("k", FactorKind::KSo2, &self.k),
            ("t", FactorKind::ScaleRplus, &self.t),
            ("translation", FactorKind::EuclideanRn, &self.translation),
        ]
    }

    /// True if any factor vanishes, so every sample of the product does.
    pub fn is_zero(&self) -> bool {
        self.named().iter().any(|(_, _, d)| d.is_zero())
    }

    /// The bundle as a separable function on `level`'s chart grid.
    pub fn sample(&self, level: Level, n: usize, spec: &GridSpec) -> Result<LevelFunction> {
        let layout = level.connected().layout(n);
        let axes = level_factor_axes(level.connected(), n, spec)?;
        let factors = layout
            .iter()
            .zip(axes)
            .map(|(&(_, kind, _), axes)| {
                let d = self.descriptor(kind);
                SampledFunction::from_fn(axes, |x| d.eval(kind, x))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SeparableFunction::new(factors)?.into())
    }

    /// One function per connected component of `level`; the second component
    /// of GL and GA is the symmetric extension (the same chart function).
    pub fn components(&self, level: Level, n: usize, spec: &GridSpec) -> Result<Vec<LevelFunction>> {
        let f = self.sample(level, n, spec)?;
        Ok(vec![f; level.components()])
    }
}
