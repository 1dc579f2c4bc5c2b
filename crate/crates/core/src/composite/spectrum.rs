//! Chained transforms: Euclidean on ℝⁿ and N, Mellin on A and ℝ₊*, Peter–Weyl on K.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::level::{check_layout, Level, LevelFunction, SeparableFunction};
use crate::error::{Error, Result};
use crate::spectra::kernel::forward_axis;
use crate::spectra::{check_band, dual_label, irrep_axis, nyquist_frequencies, Axis, AxisKind, SampledFunction, DECAY_THRESHOLD};

/// Transform of a function on one level, one entry per connected component.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositeSpectrum {
    pub level: Level,
    pub n: usize,
    pub band_limit: usize,
    pub components: Vec<LevelFunction>,
}

impl CompositeSpectrum {
    /// Σ_γ d_γ ∫ ‖·‖²_HS summed over components.
    pub fn norm_sq(&self) -> f64 {
        self.components.iter().map(LevelFunction::norm_sq).sum()
    }

    pub fn axes(&self) -> Vec<Axis> {
        self.components.first().map(LevelFunction::axes).unwrap_or_default()
    }

    /// Value at a multi-index over all spectral axes of one component.
    pub fn value(&self, component: usize, index: &[usize]) -> Result<Complex64> {
        let part = self
            .components
            .get(component)
            .ok_or_else(|| Error::contract(format!("no component {component}")))?;
        let axes = part.axes();
        if index.len() != axes.len() || index.iter().zip(&axes).any(|(i, a)| *i >= a.len()) {
            return Err(Error::contract("spectral index out of range"));
        }
        match part {
            LevelFunction::Dense(f) => {
                let flat = index.iter().zip(f.shape()).fold(0, |acc, (i, n)| acc * n + i);
                Ok(f.values()[flat])
            }
            LevelFunction::Separable(s) => {
                let mut offset = 0;
                let mut flat = Vec::with_capacity(s.factors().len());
                for fac in s.factors() {
                    let k = fac.axes().len();
                    let shape = fac.shape();
                    flat.push(index[offset..offset + k].iter().zip(shape).fold(0, |acc, (i, n)| acc * n + i));
                    offset += k;
                }
                Ok(s.value(&flat))
            }
        }
    }

    /// The d_γ × d_γ block at the non-compact spectral point `point` (indices of
    /// every axis except the irrep axis) and irrep key (m for SO(2), ℓ for SO(3)).
    pub fn block(&self, component: usize, point: &[usize], key: i64) -> Result<DMatrix<Complex64>> {
        let axes = self.axes();
        let k = axes
            .iter()
            .position(|a| matches!(a.kind, AxisKind::So2Irrep | AxisKind::So3Irrep))
            .ok_or_else(|| Error::contract(format!("{} spectrum has no compact axis", self.level)))?;
        let irreps = &axes[k];
        let entries: Vec<usize> = (0..irreps.len()).filter(|&j| irreps.point(j)[0] as i64 == key).collect();
        if entries.is_empty() {
            return Err(Error::contract(format!("irrep {key} is outside the band limit")));
        }
        let d = (entries.len() as f64).sqrt().round() as usize;
        let mut out = DMatrix::zeros(d, d);
        let mut idx: Vec<usize> = point.to_vec();
        idx.insert(k, 0);
        for (e, j) in entries.into_iter().enumerate() {
            idx[k] = j;
            out[(e / d, e % d)] = self.value(component, &idx)?;
        }
        Ok(out)
    }
}

/// Dual axis of a spatial axis.
pub fn dual_axis(axis: &Axis, band_limit: usize) -> Result<Axis> {
    match axis.kind {
        AxisKind::Linear | AxisKind::Log => {
            let grid = axis
                .grid
                .first()
                .ok_or_else(|| Error::contract(format!("axis `{}` has no grid", axis.label)))?;
            Ok(Axis::frequency(&dual_label(&axis.label), nyquist_frequencies(grid)))
        }
        AxisKind::Angle | AxisKind::So3 => {
            check_band(axis, band_limit)?;
            irrep_axis(axis, band_limit)
        }
        k => Err(Error::contract(format!("axis `{}` is already spectral ({k:?})", axis.label))),
    }
}

/// Transforms every spatial axis of `f` in order.
pub fn chain_transform(f: &SampledFunction, band_limit: usize) -> Result<SampledFunction> {
    f.check_decay(DECAY_THRESHOLD)?;
    let mut out = f.clone();
    for k in 0..f.axes().len() {
        let dual = dual_axis(&f.axes()[k], band_limit)?;
        out = forward_axis(&out, k, dual)?;
    }
    Ok(out)
}

fn transform_part(f: &LevelFunction, band_limit: usize) -> Result<LevelFunction> {
    Ok(match f {
        LevelFunction::Dense(d) => LevelFunction::Dense(chain_transform(d, band_limit)?),
        LevelFunction::Separable(s) => LevelFunction::Separable(SeparableFunction::new(
            s.factors().iter().map(|fac| chain_transform(fac, band_limit)).collect::<Result<_>>()?,
        )?),
    })
}

/// Transform of `components` (one per connected component) at `level`.
pub fn level_transform(level: Level, n: usize, components: &[LevelFunction], band_limit: usize) -> Result<CompositeSpectrum> {
    if components.len() != level.components() {
        return Err(Error::contract(format!(
            "{level} has {} components, got {}",
            level.components(),
            components.len()
        )));
    }
    let mut parts = Vec::with_capacity(components.len());
    for c in components {
        check_layout(level, n, &c.axes())?;
        parts.push(transform_part(c, band_limit)?);
    }
    Ok(CompositeSpectrum { level, n, band_limit, components: parts })
}

/// Euclidean transform on the entries of N.
pub fn nilpotent_transform(f: &LevelFunction, n: usize) -> Result<CompositeSpectrum> {
    level_transform(Level::N, n, std::slice::from_ref(f), 0)
}

/// Euclidean transform on N chained with the A transform in log coordinates.
pub fn solvable_transform(f: &LevelFunction, n: usize) -> Result<CompositeSpectrum> {
    level_transform(Level::S, n, std::slice::from_ref(f), 0)
}

/// Transform on SL(n) in NAK coordinates.
pub fn sl_transform(f: &LevelFunction, n: usize, band_limit: usize) -> Result<CompositeSpectrum> {
    level_transform(Level::SL, n, std::slice::from_ref(f), band_limit)
}

/// SL transform chained with the Mellin transform on t.
pub fn glplus_transform(f: &LevelFunction, n: usize, band_limit: usize) -> Result<CompositeSpectrum> {
    level_transform(Level::GLPlus, n, std::slice::from_ref(f), band_limit)
}

/// Euclidean transform on the translation part chained with the GL₊ transform.
pub fn ga_transform(f: &LevelFunction, n: usize, band_limit: usize) -> Result<CompositeSpectrum> {
    level_transform(Level::GAPlus, n, std::slice::from_ref(f), band_limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composite::level::{level_factor_axes, GridSpec};
    use crate::spectra::{euclid_ft, mellin_ft, peter_weyl};

    fn gauss(s: f64) -> impl Fn(&[f64]) -> Complex64 + Sync + Send {
        move |x: &[f64]| Complex64::new((-x.iter().map(|v| v * v).sum::<f64>() / (2.0 * s * s)).exp(), 0.0)
    }

    fn spec() -> GridSpec {
        GridSpec::uniform(48, -8.0, 8.0, 16, 4)
    }

    fn sl_factors() -> Vec<SampledFunction> {
        let fa = level_factor_axes(Level::SL, 2, &spec()).unwrap();
        vec![
            SampledFunction::from_fn(fa[0].clone(), gauss(0.8)).unwrap(),
            SampledFunction::from_fn(fa[1].clone(), |x| Complex64::new((-(x[0] - 0.3).powi(2) / 1.28).exp(), 0.0)).unwrap(),
            SampledFunction::from_fn(fa[2].clone(), |x| Complex64::from_polar(1.0, x[0])).unwrap(),
        ]
    }

    #[test]
    fn zero_maps_to_zero() {
        let axes = crate::composite::level::level_axes(Level::S, 2, &spec()).unwrap();
        let z = SampledFunction::zeros(axes).unwrap();
        let s = solvable_transform(&z.into(), 2).unwrap();
        assert_eq!(s.norm_sq(), 0.0);
    }

    #[test]
    fn solvable_transform_factorizes() {
        let fa = level_factor_axes(Level::S, 2, &spec()).unwrap();
        let fn_ = SampledFunction::from_fn(fa[0].clone(), gauss(0.8)).unwrap();
        let fa_ = SampledFunction::from_fn(fa[1].clone(), gauss(0.7)).unwrap();
        let sep = SeparableFunction::new(vec![fn_.clone(), fa_.clone()]).unwrap();
        let dense = solvable_transform(&sep.to_dense().unwrap().into(), 2).unwrap();
        let en = euclid_ft(&fn_, &[nyquist_frequencies(&fa[0][0].grid[0])]).unwrap();
        let ma = mellin_ft(&fa_, &nyquist_frequencies(&fa[1][0].grid[0])).unwrap();
        let d = dense.components[0].to_dense().unwrap();
        let m = ma.values().len();
        let mut worst: f64 = 0.0;
        for (i, v) in d.values().iter().enumerate() {
            worst = worst.max((v - en.values()[i / m] * ma.values()[i % m]).norm());
        }
        assert!(worst < 1e-10, "{worst}");
    }

    #[test]
    fn sl_transform_factorizes_with_single_character() {
        let facs = sl_factors();
        let sep = SeparableFunction::new(facs.clone()).unwrap();
        let dense = sl_transform(&sep.to_dense().unwrap().into(), 2, 4).unwrap();
        let fact = sl_transform(&sep.into(), 2, 4).unwrap();
        let pw = peter_weyl(&facs[2], 4).unwrap();
        let axes = dense.axes();
        let (nx, nu) = (axes[0].len(), axes[1].len());
        let mut worst: f64 = 0.0;
        for i in (0..nx).step_by(7) {
            for j in (0..nu).step_by(5) {
                for m in -4..=4i64 {
                    let a = dense.block(0, &[i, j], m).unwrap()[(0, 0)];
                    let b = fact.block(0, &[i, j], m).unwrap()[(0, 0)];
                    worst = worst.max((a - b).norm());
                    if m != 1 {
                        assert!(a.norm() < 1e-12);
                    }
                }
            }
        }
        assert!(worst < 1e-8, "{worst}");
        assert!((pw.block(1).unwrap()[(0, 0)].re - 1.0).abs() < 1e-12);
        let rel = (dense.norm_sq() - fact.norm_sq()).abs() / fact.norm_sq();
        assert!(rel < 1e-12);
    }

    #[test]
    fn layout_mismatch_rejected() {
        let facs = sl_factors();
        let sep = SeparableFunction::new(facs[..2].to_vec()).unwrap();
        assert!(matches!(sl_transform(&sep.into(), 2, 4), Err(Error::Contract(_))));
    }

    #[test]
    fn insufficient_k_grid_is_configuration_error() {
        let facs = sl_factors();
        let sep = SeparableFunction::new(facs).unwrap();
        assert!(matches!(sl_transform(&sep.into(), 2, 9), Err(Error::Configuration(_))));
    }
}
