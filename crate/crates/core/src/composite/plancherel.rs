//! Plancherel residuals and component integrals on GL and GA.

use std::time::Instant;

use num_complex::Complex64;

use super::level::{check_layout, Level, LevelFunction};
use super::report::IdentityReport;
use super::spectrum::level_transform;
use crate::error::{Error, Result};

/// Spatial L² norm against the spectral norm at `level`.
///
/// `components` holds one function per connected component; on GL and GA the
/// second entry is the GL₋ part pulled back to GL₊.
pub fn plancherel_residual(
    level: Level,
    n: usize,
    components: &[LevelFunction],
    band_limit: usize,
    grid: &str,
) -> Result<IdentityReport> {
    let start = Instant::now();
    let left: f64 = components.iter().map(LevelFunction::norm_sq).sum();
    let right = level_transform(level, n, components, band_limit)?.norm_sq();
    Ok(IdentityReport::new(
        format!("plancherel_{level}"),
        level,
        n,
        Complex64::new(left, 0.0),
        Complex64::new(right, 0.0),
        grid,
    )
    .with_seconds(start.elapsed().as_secs_f64()))
}

/// Integrals over the two components of GL or GA.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComponentIntegrals {
    pub plus: Complex64,
    pub minus: Complex64,
    pub total: Complex64,
}

impl ComponentIntegrals {
    /// total / plus.
    pub fn ratio(&self) -> Complex64 {
        self.total / self.plus
    }
}

/// ∫ f over GL = GL₊ ∪ GL₋ (or GA), with `minus` given on GL₊ coordinates via
/// the transport g ↦ J·g.
pub fn component_integrals(level: Level, n: usize, plus: &LevelFunction, minus: &LevelFunction) -> Result<ComponentIntegrals> {
    if level.components() != 2 {
        return Err(Error::contract(format!("{level} is connected")));
    }
    check_layout(level, n, &plus.axes())?;
    check_layout(level, n, &minus.axes())?;
    if plus.axes() != minus.axes() {
        return Err(Error::contract("components sampled on different grids"));
    }
    let (p, m) = (plus.integral(), minus.integral());
    Ok(ComponentIntegrals { plus: p, minus: m, total: p + m })
}

/// Report comparing the full integral with twice the GL₊ part.
pub fn gl_full_integrals(level: Level, n: usize, plus: &LevelFunction, minus: &LevelFunction, grid: &str) -> Result<IdentityReport> {
    let start = Instant::now();
    let c = component_integrals(level, n, plus, minus)?;
    Ok(IdentityReport::new(format!("doubling_{level}"), level, n, c.total, c.plus * 2.0, grid)
        .with_seconds(start.elapsed().as_secs_f64()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composite::level::{level_axes, level_factor_axes, GridSpec, SeparableFunction};
    use crate::spectra::SampledFunction;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gauss(s: f64, c: f64) -> impl Fn(&[f64]) -> Complex64 + Sync + Send {
        move |x: &[f64]| Complex64::new((-x.iter().map(|v| (v - c).powi(2)).sum::<f64>() / (2.0 * s * s)).exp(), 0.0)
    }

    fn spec() -> GridSpec {
        GridSpec::uniform(64, -8.0, 8.0, 64, 8)
    }

    fn bundle(level: Level, n: usize) -> LevelFunction {
        let fa = level_factor_axes(level, n, &spec()).unwrap();
        let layout = level.layout(n);
        let factors = layout
            .iter()
            .zip(fa)
            .map(|((_, kind, _), axes)| match kind {
                crate::quadrature::FactorKind::KSo2 => {
                    SampledFunction::from_fn(axes, |x| Complex64::new(1.0 + 0.5 * x[0].cos(), 0.3 * (2.0 * x[0]).sin())).unwrap()
                }
                _ => SampledFunction::from_fn(axes, gauss(0.8, 0.2)).unwrap(),
            })
            .collect();
        SeparableFunction::new(factors).unwrap().into()
    }

    #[test]
    fn zero_function_has_zero_residual() {
        let axes = level_axes(Level::S, 2, &spec()).unwrap();
        let z: LevelFunction = SampledFunction::zeros(axes).unwrap().into();
        let r = plancherel_residual(Level::S, 2, &[z], 0, "").unwrap();
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.left.re, 0.0);
    }

    #[test]
    fn nilpotent_gaussian() {
        let axes = level_axes(Level::N, 2, &GridSpec::uniform(32, -8.0, 8.0, 8, 1)).unwrap();
        let f: LevelFunction = SampledFunction::from_fn(axes, gauss(0.8, 0.0)).unwrap().into();
        let r = plancherel_residual(Level::N, 2, &[f], 0, "").unwrap();
        assert!(r.residual < 1e-6, "{}", r.residual);
    }

    #[test]
    fn separable_levels() {
        for level in [Level::S, Level::SL, Level::GLPlus, Level::GAPlus] {
            let f = bundle(level, 2);
            let r = plancherel_residual(level, 2, &[f], 8, "").unwrap();
            assert!(r.residual < 1e-10, "{level}: {}", r.residual);
        }
        let f = bundle(Level::GL, 2);
        let r = plancherel_residual(Level::GL, 2, &[f.clone(), f], 8, "").unwrap();
        assert!(r.residual < 1e-10);
    }

    #[test]
    fn doubling_and_additivity() {
        let f = bundle(Level::GL, 2);
        let r = gl_full_integrals(Level::GL, 2, &f, &f, "").unwrap();
        assert!(r.residual <= 1e-12);
        let zero = match &f {
            LevelFunction::Separable(s) => {
                let mut facs = s.factors().to_vec();
                facs[0] = SampledFunction::zeros(facs[0].axes().to_vec()).unwrap();
                LevelFunction::Separable(SeparableFunction::new(facs).unwrap())
            }
            _ => unreachable!(),
        };
        let c = component_integrals(Level::GL, 2, &f, &zero).unwrap();
        assert!((c.ratio() - 1.0).norm() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let axes = level_axes(Level::GL, 2, &GridSpec::uniform(8, -1.0, 1.0, 8, 2)).unwrap();
        let mut random = || {
            let vals = (0..axes.iter().map(|a| a.len()).product::<usize>())
                .map(|_| Complex64::new(rng.random::<f64>(), rng.random::<f64>()))
                .collect();
            LevelFunction::Dense(SampledFunction::new(axes.clone(), vals).unwrap())
        };
        let (p, m) = (random(), random());
        let c = component_integrals(Level::GL, 2, &p, &m).unwrap();
        assert!((c.total - (p.integral() + m.integral())).norm() <= 1e-12 * c.total.norm());
    }
}
