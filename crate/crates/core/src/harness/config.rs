//! Run configuration: profiles, the TOML schema and validation.
//!
//! A configuration file names a base profile and overrides any of its fields:
//!
//! ```toml
//! profile = "default"        # default | deep | so3
//! levels = ["S", "GA+"]      # or: level = "GA+"
//! n = 2
//! seed = 7
//! bundle = "gaussian"        # gaussian | log-gaussian | trig | bump | zero
//! budget_seconds = 120.0
//! output = "reports"
//! format = "line-json"       # line-json | csv
//!
//! [grid.n]                   # also grid.a, grid.t, grid.translation
//! count = 64
//! lo = -8.0
//! hi = 8.0
//!
//! [grid.k]
//! count = 64
//! band_limit = 8
//!
//! [functions.a]              # also functions.n, .k, .t, .translation
//! kind = "gaussian"
//! center = 0.1
//! width = 0.7
//! ```
//!
//! Ranges of `grid.a` and `grid.t` are log coordinates.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::bundle::{BundleName, FunctionDescriptor, TestFunctionBundle, ALIAS_THRESHOLD};
use crate::composite::{AxisGrid, GridSpec, Level};
use crate::error::{Error, Result};
use crate::quadrature::FactorKind;
use crate::spectra::DECAY_THRESHOLD;

/// Smallest grid size accepted on a non-compact axis.
pub const MIN_GRID: usize = 8;

/// Largest number of grid points one sampled factor may hold.
pub const MAX_FACTOR_POINTS: usize = 1 << 24;

/// Default per-report runtime budget.
pub const DEFAULT_BUDGET_SECONDS: f64 = 120.0;

/// Output format of [`super::emit_report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportFormat {
    LineJson,
    Csv,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::LineJson => "jsonl",
            ReportFormat::Csv => "csv",
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::LineJson => "line-json",
            ReportFormat::Csv => "csv",
        })
    }
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "line-json" | "jsonl" => Ok(ReportFormat::LineJson),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::Parse(format!("unknown report format `{other}` (expected line-json or csv)"))),
        }
    }
}

/// Built-in starting points for a configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// n = 2, 64 points on [−8, 8], 64 SO(2) nodes, band-limit 8.
    Default,
    /// Twice every grid size and the band-limit.
    Deep,
    /// n = 3 with SO(3) up to ℓ = 4.
    So3,
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Default => "default",
            Profile::Deep => "deep",
            Profile::So3 => "so3",
        })
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "default" => Ok(Profile::Default),
            "deep" => Ok(Profile::Deep),
            "so3" => Ok(Profile::So3),
            other => Err(Error::Parse(format!("unknown profile `{other}` (expected default, deep or so3)"))),
        }
    }
}

/// A validated run configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub profile: Profile,
    pub levels: Vec<Level>,
    pub n: usize,
    pub grids: GridSpec,
    pub bundle: TestFunctionBundle,
    pub seed: u64,
    pub budget_seconds: f64,
    pub output: Option<PathBuf>,
    pub format: ReportFormat,
}

impl RunConfig {
    /// The profile's configuration; profiles always validate.
    pub fn profile(profile: Profile) -> Self {
        let base = RunConfig {
            profile,
            levels: Level::ALL.to_vec(),
            n: 2,
            grids: GridSpec::uniform(64, -8.0, 8.0, 64, 8),
            bundle: TestFunctionBundle::preset(BundleName::Gaussian),
            seed: 1,
            budget_seconds: DEFAULT_BUDGET_SECONDS,
            output: None,
            format: ReportFormat::LineJson,
        };
        match profile {
            Profile::Default => base,
            Profile::Deep => {
                let g = |a: AxisGrid| AxisGrid::new(2 * a.count, a.lo, a.hi);
                let s = base.grids;
                RunConfig {
                    grids: GridSpec {
                        n_grid: g(s.n_grid),
                        a_grid: g(s.a_grid),
                        t_grid: g(s.t_grid),
                        translation_grid: g(s.translation_grid),
                        k_count: 2 * s.k_count,
                        band_limit: 2 * s.band_limit,
                    },
                    ..base
                }
            }
            Profile::So3 => RunConfig {
                n: 3,
                levels: Level::ALL.iter().copied().filter(|&l| l != Level::N).collect(),
                grids: GridSpec { k_count: 16, band_limit: 4, ..base.grids },
                ..base
            },
        }
    }

    /// Every invariant violation, each naming the offending field.
    pub fn violations(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if self.n != 2 && self.n != 3 {
            errs.push(format!("n: must be 2 or 3, got {}", self.n));
        }
        if self.levels.is_empty() {
            errs.push("levels: at least one level is required".to_string());
        }
        if !(self.budget_seconds > 0.0) {
            errs.push(format!("budget_seconds: must be positive, got {}", self.budget_seconds));
        }
        let mut used: Vec<FactorKind> = Vec::new();
        for level in &self.levels {
            for (_, kind, dim) in level.layout(self.n.clamp(2, 3)) {
                if !used.contains(&kind) {
                    used.push(kind);
                }
                let points = match self.axis_grid(kind) {
                    Some(g) => g.count.checked_pow(dim as u32).unwrap_or(usize::MAX),
                    None if kind == FactorKind::KSo3 => {
                        self.grids.k_count.pow(2) * (self.grids.k_count / 2).max(self.grids.band_limit + 1)
                    }
                    None => self.grids.k_count,
                };
                if points > MAX_FACTOR_POINTS {
                    errs.push(format!(
                        "levels: the {kind} factor of {level} (n = {}) would hold {points} grid points, above the limit {MAX_FACTOR_POINTS}",
                        self.n
                    ));
                }
            }
        }
        for (name, kind, desc) in self.bundle.named() {
            let kind = if kind == FactorKind::KSo2 && self.n == 3 { FactorKind::KSo3 } else { kind };
            if !used.contains(&kind) {
                continue;
            }
            for e in desc.check(kind) {
                errs.push(format!("functions.{name}: {e}"));
            }
            if let Some(grid) = self.axis_grid(kind) {
                errs.extend(check_axis(name, grid, desc));
            }
        }
        if used.iter().any(|k| matches!(k, FactorKind::KSo2 | FactorKind::KSo3)) {
            let g = &self.grids;
            let degree = self.bundle.k.degree();
            if degree > g.band_limit {
                errs.push(format!(
                    "grid.k: band_limit {} is below the degree {degree} of functions.k",
                    g.band_limit
                ));
            }
            let needed = 2 * g.band_limit + 1;
            if g.k_count < needed {
                errs.push(format!(
                    "grid.k: {} nodes cannot resolve band-limit {}; need at least {needed}",
                    g.k_count, g.band_limit
                ));
            }
        }
        errs
    }

    fn axis_grid(&self, kind: FactorKind) -> Option<&AxisGrid> {
        match kind {
            FactorKind::NUnipotent => Some(&self.grids.n_grid),
            FactorKind::ADiag => Some(&self.grids.a_grid),
            FactorKind::ScaleRplus => Some(&self.grids.t_grid),
            FactorKind::EuclideanRn => Some(&self.grids.translation_grid),
            FactorKind::KSo2 | FactorKind::KSo3 => None,
        }
    }

    pub fn validate(self) -> Result<Self> {
        let errs = self.violations();
        if errs.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidConfig(errs))
        }
    }

    /// Path of the report file for `format` under the output directory.
    pub fn report_path(&self, stem: &str) -> Option<PathBuf> {
        self.output.as_ref().map(|d| d.join(format!("{stem}.{}", self.format.extension())))
    }
}

fn check_axis(name: &str, grid: &AxisGrid, desc: &FunctionDescriptor) -> Vec<String> {
    let mut errs = Vec::new();
    if grid.count < MIN_GRID {
        errs.push(format!("grid.{name}: {} points on a non-compact axis, need at least {MIN_GRID}", grid.count));
    }
    if !(grid.lo < grid.hi) || !grid.lo.is_finite() || !grid.hi.is_finite() {
        errs.push(format!("grid.{name}: range [{}, {}] is empty or not finite", grid.lo, grid.hi));
        return errs;
    }
    if desc.is_zero() || grid.count < 2 {
        return errs;
    }
    let nodes = AxisGrid::new(grid.count, grid.lo, grid.hi).rule().nodes;
    let peak = nodes.iter().map(|&v| desc.profile(v)).fold(0.0, f64::max);
    let boundary = desc.profile(grid.lo).max(desc.profile(grid.hi));
    if peak == 0.0 {
        errs.push(format!("grid.{name}: functions.{name} vanishes on every node of [{}, {}]", grid.lo, grid.hi));
    } else if boundary > DECAY_THRESHOLD * peak {
        errs.push(format!(
            "grid.{name}: functions.{name} is {:.3e} of its peak at the boundary of [{}, {}], above the decay threshold {:.0e}",
            boundary / peak,
            grid.lo,
            grid.hi,
            DECAY_THRESHOLD
        ));
    }
    if let Some(w) = desc.gaussian_width() {
        let h = (grid.hi - grid.lo) / (grid.count - 1) as f64;
        let nyquist = PI / h;
        let alias = (-0.5 * (nyquist * w).powi(2)).exp();
        if alias > ALIAS_THRESHOLD {
            errs.push(format!(
                "grid.{name}: spacing {h:.4} puts the Nyquist frequency {nyquist:.3} where the spectrum of functions.{name} is still {alias:.1e}; refine to at most {:.4}",
                PI * w / (2.0 * ALIAS_THRESHOLD.recip().ln()).sqrt()
            ));
        }
    }
    errs
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxis {
    count: Option<usize>,
    lo: Option<f64>,
    hi: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCompact {
    count: Option<usize>,
    band_limit: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrids {
    n: Option<RawAxis>,
    a: Option<RawAxis>,
    t: Option<RawAxis>,
    translation: Option<RawAxis>,
    k: Option<RawCompact>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunctions {
    n: Option<FunctionDescriptor>,
    a: Option<FunctionDescriptor>,
    k: Option<FunctionDescriptor>,
    t: Option<FunctionDescriptor>,
    translation: Option<FunctionDescriptor>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    profile: Option<String>,
    level: Option<String>,
    levels: Option<Vec<String>>,
    n: Option<usize>,
    seed: Option<u64>,
    bundle: Option<String>,
    budget_seconds: Option<f64>,
    output: Option<PathBuf>,
    format: Option<String>,
    grid: Option<RawGrids>,
    functions: Option<RawFunctions>,
}

fn merge_axis(base: AxisGrid, raw: Option<RawAxis>) -> AxisGrid {
    match raw {
        None => base,
        Some(r) => AxisGrid::new(r.count.unwrap_or(base.count), r.lo.unwrap_or(base.lo), r.hi.unwrap_or(base.hi)),
    }
}

/// Parses and validates a configuration text. `profile` overrides the file's
/// `profile` key.
pub fn parse_config(text: &str, profile: Option<Profile>) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut errs = Vec::new();
    let profile = match (profile, raw.profile.as_deref()) {
        (Some(p), _) => p,
        (None, Some(name)) => name.parse().unwrap_or_else(|e: Error| {
            errs.push(format!("profile: {e}"));
            Profile::Default
        }),
        (None, None) => Profile::Default,
    };
    let mut cfg = RunConfig::profile(profile);

    let mut level_names = raw.levels.unwrap_or_default();
    if let Some(l) = raw.level {
        level_names.insert(0, l);
    }
    if !level_names.is_empty() {
        cfg.levels.clear();
        for name in level_names {
            match name.parse::<Level>() {
                Ok(l) if !cfg.levels.contains(&l) => cfg.levels.push(l),
                Ok(_) => {}
                Err(e) => errs.push(format!("levels: {e}")),
            }
        }
    }
    if let Some(n) = raw.n {
        cfg.n = n;
    }
    if let Some(seed) = raw.seed {
        cfg.seed = seed;
    }
    if let Some(b) = raw.budget_seconds {
        cfg.budget_seconds = b;
    }
    cfg.output = raw.output.or(cfg.output);
    if let Some(f) = raw.format {
        match f.parse() {
            Ok(f) => cfg.format = f,
            Err(e) => errs.push(format!("format: {e}")),
        }
    }
    if let Some(name) = raw.bundle {
        match name.parse() {
            Ok(b) => cfg.bundle = TestFunctionBundle::preset(b),
            Err(e) => errs.push(format!("bundle: {e}")),
        }
    }
    if let Some(g) = raw.grid {
        let s = &mut cfg.grids;
        s.n_grid = merge_axis(s.n_grid, g.n);
        s.a_grid = merge_axis(s.a_grid, g.a);
        s.t_grid = merge_axis(s.t_grid, g.t);
        s.translation_grid = merge_axis(s.translation_grid, g.translation);
        if let Some(k) = g.k {
            s.k_count = k.count.unwrap_or(s.k_count);
            s.band_limit = k.band_limit.unwrap_or(s.band_limit);
        }
    }
    if let Some(f) = raw.functions {
        let b = &mut cfg.bundle;
        let custom = f.n.is_some() || f.a.is_some() || f.k.is_some() || f.t.is_some() || f.translation.is_some();
        b.n = f.n.unwrap_or(b.n.clone());
        b.a = f.a.unwrap_or(b.a.clone());
        b.k = f.k.unwrap_or(b.k.clone());
        b.t = f.t.unwrap_or(b.t.clone());
        b.translation = f.translation.unwrap_or(b.translation.clone());
        if custom {
            b.name = format!("{}+custom", b.name);
        }
    }
    errs.extend(cfg.violations());
    if errs.is_empty() {
        Ok(cfg)
    } else {
        Err(Error::InvalidConfig(errs))
    }
}

/// Reads, parses and validates the configuration file at `path`.
pub fn load_config(path: &Path, profile: Option<Profile>) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::from(e).context(format!("reading {}", path.display())))?;
    parse_config(&text, profile).map_err(|e| e.context(format!("loading {}", path.display())))
}
