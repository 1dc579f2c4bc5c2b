//! Identity suites driven by a [`RunConfig`].

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::RunConfig;
use crate::composite::{
    convolution_identity_residual, factor_rule, gl_full_integrals, level_transform, plancherel_residual,
    ConvolutionGrids, ConvolutionIdentity, IdentityReport, Level, LevelFunction, SeparableFunction,
};
use crate::error::{Error, Result};
use crate::group::sample;
use crate::quadrature::{invariance_pairs, FactorKind, Side};
use crate::spectra::SampledFunction;

/// Tolerances asserted by the suites.
pub mod tolerance {
    use crate::composite::Level;

    pub fn plancherel(level: Level) -> f64 {
        match level {
            Level::N => 1e-6,
            Level::S | Level::SL => 1e-4,
            _ => 1e-3,
        }
    }

    pub const DOUBLING: f64 = 1e-12;
    pub const CONVOLUTION: f64 = 5e-2;
    pub const EQUIVARIANCE: f64 = 1e-8;
    pub const INVARIANCE: f64 = 1e-8;
}

/// Which identities a run evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Plancherel,
    Convolution,
    Invariance,
    All,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Plancherel => "plancherel",
            Suite::Convolution => "convolution",
            Suite::Invariance => "invariance",
            Suite::All => "all",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "plancherel" => Ok(Suite::Plancherel),
            "convolution" => Ok(Suite::Convolution),
            "invariance" => Ok(Suite::Invariance),
            "all" => Ok(Suite::All),
            other => Err(Error::Parse(format!("unknown suite `{other}`"))),
        }
    }
}

impl Suite {
    fn includes(self, part: Suite) -> bool {
        self == Suite::All || self == part
    }
}

/// Convolution identities evaluated for `cfg`: those of its levels, n = 2 only.
pub fn convolution_identities(cfg: &RunConfig) -> Vec<ConvolutionIdentity> {
    if cfg.n != 2 {
        return Vec::new();
    }
    ConvolutionIdentity::ALL
        .into_iter()
        .filter(|c| {
            let home = c.level();
            cfg.levels.iter().any(|&l| l == home || (home == Level::GAPlus && l == Level::GA))
        })
        .collect()
}

/// Tolerance of a convolution identity; the spectral identity on GA₊ is
/// reported without one.
pub fn convolution_tolerance(which: ConvolutionIdentity) -> Option<f64> {
    match which {
        ConvolutionIdentity::Cor51 => None,
        _ => Some(tolerance::CONVOLUTION),
    }
}

struct Runner<'a> {
    cfg: &'a RunConfig,
    reports: Vec<IdentityReport>,
}

impl Runner<'_> {
    fn run(&mut self, name: &str, level: Level, op: impl FnOnce() -> Result<IdentityReport>) -> Result<()> {
        let start = Instant::now();
        let report = op().map_err(|e| e.context(format!("{name} on {level} (n = {})", self.cfg.n)))?;
        let seconds = start.elapsed().as_secs_f64();
        if seconds > self.cfg.budget_seconds {
            return Err(Error::OverBudget { identity: report.identity, seconds, budget: self.cfg.budget_seconds });
        }
        self.reports.push(report.with_seconds(seconds));
        Ok(())
    }
}

/// Runs `suite` over every level of `cfg`. Reports come in a fixed order:
/// per level Plancherel, doubling, convolution identities, invariance and
/// equivariance, then one zero-function sanity report per suite part.
pub fn run_suite(cfg: &RunConfig, suite: Suite) -> Result<Vec<IdentityReport>> {
    let errs = cfg.violations();
    if !errs.is_empty() {
        return Err(Error::InvalidConfig(errs));
    }
    let mut r = Runner { cfg, reports: Vec::new() };
    let grid = cfg.grids.describe();
    let scale = if cfg.bundle.is_zero() { 0.0 } else { 1.0 };
    let conv = convolution_identities(cfg);
    let mut conv_done = Vec::new();
    for &level in &cfg.levels {
        if suite.includes(Suite::Plancherel) {
            let parts = cfg.bundle.components(level, cfg.n, &cfg.grids)?;
            r.run("plancherel", level, || {
                Ok(plancherel_residual(level, cfg.n, &parts, cfg.grids.band_limit, &grid)?
                    .with_tolerance(tolerance::plancherel(level)))
            })?;
            if level.components() == 2 {
                r.run("doubling", level, || {
                    Ok(gl_full_integrals(level, cfg.n, &parts[0], &parts[1], &grid)?.with_tolerance(tolerance::DOUBLING))
                })?;
            }
        }
        if suite.includes(Suite::Convolution) {
            for &which in conv.iter().filter(|c| c.level() == level.connected()) {
                if conv_done.contains(&which) {
                    continue;
                }
                conv_done.push(which);
                let grids = ConvolutionGrids::coarse(which, cfg.seed);
                r.run(&which.to_string(), level, || {
                    let mut rep = convolution_identity_residual(which, &grids, scale)?;
                    rep.level = level;
                    rep.tolerance = convolution_tolerance(which);
                    Ok(rep)
                })?;
            }
        }
        if suite.includes(Suite::Invariance) {
            for (prefix, kind, dim) in level.connected().layout(cfg.n) {
                r.run("invariance", level, || factor_invariance(cfg, level, prefix, kind, dim))?;
            }
            if matches!(level, Level::GAPlus | Level::GA) {
                r.run("equivariance", level, || shift_equivariance(cfg, level))?;
            }
        }
    }
    let first = cfg.levels[0];
    let zero_cfg = RunConfig { bundle: super::TestFunctionBundle::preset(super::BundleName::Zero), ..cfg.clone() };
    if suite.includes(Suite::Plancherel) {
        r.run("zero plancherel", first, || {
            let parts = zero_cfg.bundle.components(first, cfg.n, &cfg.grids)?;
            let mut rep = plancherel_residual(first, cfg.n, &parts, cfg.grids.band_limit, &grid)?;
            rep.identity = format!("zero_{}", rep.identity);
            Ok(rep.with_tolerance(0.0))
        })?;
    }
    if suite.includes(Suite::Convolution) {
        if let Some(&which) = conv.first() {
            r.run("zero convolution", which.level(), || {
                let mut rep = convolution_identity_residual(which, &ConvolutionGrids::coarse(which, cfg.seed), 0.0)?;
                rep.identity = format!("zero_{}", rep.identity);
                Ok(rep.with_tolerance(0.0))
            })?;
        }
    }
    if suite.includes(Suite::Invariance) {
        let (prefix, kind, dim) = first.connected().layout(cfg.n)[0];
        r.run("zero invariance", first, || {
            let mut rep = factor_invariance(&zero_cfg, first, prefix, kind, dim)?;
            rep.identity = format!("zero_{}", rep.identity);
            Ok(rep.with_tolerance(0.0))
        })?;
    }
    Ok(r.reports)
}

/// Left-invariance of one factor's rule under four random factor elements,
/// integrating the bundle's descriptor for that factor.
fn factor_invariance(cfg: &RunConfig, level: Level, prefix: &str, kind: FactorKind, dim: usize) -> Result<IdentityReport> {
    let rule = factor_rule(kind, dim, &cfg.grids)?;
    let chart = rule.chart();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (kind as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let translations = (0..4)
        .map(|_| match kind {
            FactorKind::KSo3 => Ok(sample::random_rotation(&mut rng, 3)),
            FactorKind::KSo2 => chart.element(&[rng.random_range(0.0..std::f64::consts::TAU)]),
            _ => {
                let c: Vec<f64> = (0..chart.dim()).map(|_| rng.random_range(-0.75..0.75)).collect();
                chart.element(&c)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let desc = cfg.bundle.descriptor(kind);
    let pairs = invariance_pairs(&rule, Side::Left, |x| desc.eval(kind, x), &translations)?;
    let grid = format!("{} nodes", rule.len());
    Ok(IdentityReport::worst_of(format!("invariance_{prefix}"), level, cfg.n, &pairs, grid)
        .with_tolerance(tolerance::INVARIANCE))
}

/// Shift of the translation part by c against the phase e^{−i⟨μ,c⟩} on the
/// μ axes of the transform.
fn shift_equivariance(cfg: &RunConfig, level: Level) -> Result<IdentityReport> {
    let n = cfg.n;
    let c = &[0.37, -0.21, 0.13][..n];
    let base = cfg.bundle.sample(Level::GAPlus, n, &cfg.grids)?;
    let LevelFunction::Separable(sep) = &base else {
        return Err(Error::contract("bundle samples are separable"));
    };
    let desc = &cfg.bundle.translation;
    let a_axes = sep.factors()[0].axes().to_vec();
    let shifted_a = SampledFunction::from_fn(a_axes, |x| {
        let moved: Vec<f64> = x.iter().zip(c).map(|(v, s)| v - s).collect();
        desc.eval(FactorKind::EuclideanRn, &moved)
    })?;
    let mut factors = sep.factors().to_vec();
    factors[0] = shifted_a;
    let shifted: LevelFunction = SeparableFunction::new(factors)?.into();

    let band = cfg.grids.band_limit;
    let spec = level_transform(Level::GAPlus, n, &[base], band)?;
    let moved = level_transform(Level::GAPlus, n, &[shifted], band)?;
    let first = |s: &crate::composite::CompositeSpectrum| -> Result<SampledFunction> {
        match &s.components[0] {
            LevelFunction::Separable(f) => Ok(f.factors()[0].clone()),
            LevelFunction::Dense(_) => Err(Error::contract("transform of a separable function is separable")),
        }
    };
    let (spec_a, moved_a) = (first(&spec)?, first(&moved)?);
    let pairs: Vec<(Complex64, Complex64)> = (0..spec_a.len())
        .map(|i| {
            let idx = spec_a.multi_index(i);
            let phase: f64 = spec_a.axes().iter().zip(&idx).zip(c).map(|((ax, &j), s)| ax.coords[j] * s).sum();
            (moved_a.values()[i], spec_a.values()[i] * Complex64::from_polar(1.0, -phase))
        })
        .collect();
    Ok(IdentityReport::worst_of("equivariance_A", level, n, &pairs, cfg.grids.describe())
        .with_tolerance(tolerance::EQUIVARIANCE))
}
