//! Convergence sweeps under grid refinement.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use crate::composite::{
    convolution_identity_residual, plancherel_residual, AxisGrid, ConvolutionGrids, ConvolutionIdentity, GridSpec, Level,
};
use crate::error::{Error, Result};

/// Residuals at or below this are treated as converged; a flat tail there is
/// not flagged.
pub const SWEEP_FLOOR: f64 = 1e-12;

/// What a sweep measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepTarget {
    Plancherel(Level),
    Convolution(ConvolutionIdentity),
}

impl fmt::Display for SweepTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepTarget::Plancherel(l) => write!(f, "plancherel_{l}"),
            SweepTarget::Convolution(c) => write!(f, "{c}"),
        }
    }
}

impl FromStr for SweepTarget {
    type Err = Error;

    /// `plancherel:<level>` or a convolution identity name.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().split_once(':') {
            Some(("plancherel", level)) => Ok(SweepTarget::Plancherel(level.parse()?)),
            Some(_) => Err(Error::Parse(format!("unknown sweep target `{s}`"))),
            None => Ok(SweepTarget::Convolution(s.parse()?)),
        }
    }
}

/// A grid family that a sweep can refine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    N,
    A,
    T,
    Translation,
    K,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 5] = [SweepAxis::N, SweepAxis::A, SweepAxis::T, SweepAxis::Translation, SweepAxis::K];
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "n" => Ok(SweepAxis::N),
            "a" => Ok(SweepAxis::A),
            "t" => Ok(SweepAxis::T),
            "translation" => Ok(SweepAxis::Translation),
            "k" => Ok(SweepAxis::K),
            other => Err(Error::Parse(format!("unknown sweep axis `{other}` (expected n, a, t, translation or k)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub grid: String,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub target: String,
    pub rows: Vec<SweepRow>,
    /// Set when some refinement failed to lower a residual above [`SWEEP_FLOOR`].
    pub flagged: bool,
}

impl SweepTable {
    fn new(target: String, rows: Vec<SweepRow>) -> Self {
        let flagged = rows.windows(2).any(|w| w[0].residual > SWEEP_FLOOR && !(w[1].residual < w[0].residual));
        SweepTable { target, rows, flagged }
    }
}

fn scale_axis(g: AxisGrid, factor: usize) -> AxisGrid {
    AxisGrid::new(g.count * factor, g.lo, g.hi)
}

/// `spec` with the named axes `factor` times as dense.
pub fn refine_spec(spec: &GridSpec, axes: &[SweepAxis], factor: usize) -> GridSpec {
    let mut s = *spec;
    for axis in axes {
        match axis {
            SweepAxis::N => s.n_grid = scale_axis(s.n_grid, factor),
            SweepAxis::A => s.a_grid = scale_axis(s.a_grid, factor),
            SweepAxis::T => s.t_grid = scale_axis(s.t_grid, factor),
            SweepAxis::Translation => s.translation_grid = scale_axis(s.translation_grid, factor),
            SweepAxis::K => s.k_count *= factor,
        }
    }
    s
}

/// Residual of `target` on `steps` successively refined grids. Plancherel
/// targets refine the named axes of the configuration; convolution targets
/// refine every grid of the identity.
pub fn sweep_convergence(
    cfg: &RunConfig,
    target: SweepTarget,
    axes: &[SweepAxis],
    factor: usize,
    steps: usize,
) -> Result<SweepTable> {
    let factor = factor.max(1);
    let mut rows = Vec::with_capacity(steps);
    match target {
        SweepTarget::Plancherel(level) => {
            let mut spec = cfg.grids;
            for _ in 0..steps {
                let parts = cfg.bundle.components(level, cfg.n, &spec)?;
                let r = plancherel_residual(level, cfg.n, &parts, spec.band_limit, &spec.describe())?;
                rows.push(SweepRow { grid: r.grid, residual: r.residual });
                spec = refine_spec(&spec, axes, factor);
            }
        }
        SweepTarget::Convolution(which) => {
            let scale = if cfg.bundle.is_zero() { 0.0 } else { 1.0 };
            let mut grids = ConvolutionGrids::coarse(which, cfg.seed);
            for _ in 0..steps {
                let r = convolution_identity_residual(which, &grids, scale)?;
                rows.push(SweepRow { grid: grids.describe(), residual: r.residual });
                grids = grids.refined_by(factor);
            }
        }
    }
    Ok(SweepTable::new(target.to_string(), rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composite::Level;
    use crate::harness::{BundleName, FunctionDescriptor, Profile, TestFunctionBundle};

    fn row(r: f64) -> SweepRow {
        SweepRow { grid: String::new(), residual: r }
    }

    #[test]
    fn flagging() {
        assert!(!SweepTable::new(String::new(), vec![row(1e-2)]).flagged);
        assert!(!SweepTable::new(String::new(), vec![row(1e-2), row(1e-3), row(1e-14), row(2e-14)]).flagged);
        assert!(SweepTable::new(String::new(), vec![row(1e-2), row(1e-2)]).flagged);
        assert!(SweepTable::new(String::new(), vec![row(1e-3), row(f64::NAN)]).flagged);
    }

    #[test]
    fn single_step_has_one_row() {
        let cfg = RunConfig::profile(Profile::Default);
        let t = sweep_convergence(&cfg, SweepTarget::Plancherel(Level::N), &[SweepAxis::N], 2, 1).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert!(!t.flagged);
    }

    #[test]
    fn euclidean_parseval_sweep_reaches_floor() {
        let mut cfg = RunConfig::profile(Profile::Default);
        cfg.levels = vec![Level::N];
        cfg.grids.n_grid = AxisGrid::new(64, -8.0, 8.0);
        let t = sweep_convergence(&cfg, SweepTarget::Plancherel(Level::N), &[SweepAxis::N], 2, 3).unwrap();
        assert_eq!(t.rows.len(), 3);
        assert!(t.rows[2].grid.starts_with("N 256@"));
        assert!(!t.flagged, "{:?}", t.rows);
        assert!(t.rows.iter().all(|r| r.residual < SWEEP_FLOOR), "{:?}", t.rows);
    }

    #[test]
    fn compact_sweep_is_flat_beyond_exactness() {
        let mut cfg = RunConfig::profile(Profile::Default);
        cfg.bundle = TestFunctionBundle::preset(BundleName::Trig);
        cfg.bundle.k = FunctionDescriptor::Trig { terms: vec![(0, 1.0, 0.0), (3, 0.5, 0.2)] };
        let t = sweep_convergence(&cfg, SweepTarget::Plancherel(Level::SL), &[SweepAxis::K], 2, 3).unwrap();
        assert!(t.rows.iter().all(|r| r.residual < 1e-12), "{:?}", t.rows);
        assert!(!t.flagged);
    }

    #[test]
    fn convolution_sweep_decreases() {
        let cfg = RunConfig::profile(Profile::Default);
        let t = sweep_convergence(&cfg, SweepTarget::Convolution(ConvolutionIdentity::Lemma31a), &[], 2, 3).unwrap();
        assert!(!t.flagged, "{:?}", t.rows);
        assert!(t.rows[2].residual < t.rows[0].residual / 4.0);
    }

    #[test]
    fn targets_parse() {
        assert_eq!("plancherel:GA+".parse::<SweepTarget>().unwrap(), SweepTarget::Plancherel(Level::GAPlus));
        assert_eq!("Lemma5.1".parse::<SweepTarget>().unwrap(), SweepTarget::Convolution(ConvolutionIdentity::Lemma51));
        assert!("foo:S".parse::<SweepTarget>().is_err());
        assert_eq!("translation".parse::<SweepAxis>().unwrap(), SweepAxis::Translation);
    }
}
