//! Euclidean and Mellin transforms.

use num_complex::Complex64;

use super::kernel::{forward_axis, inverse_axis};
use super::tensor::{Axis, AxisKind, SampledFunction};
use crate::error::{Error, Result};
use crate::quadrature::Axis1d;

/// Relative boundary magnitude a sampled function must stay under.
pub const DECAY_THRESHOLD: f64 = 1e-14;

/// `count` frequencies spanning [−π/h, π/h] for a uniform spatial axis of step h.
pub fn nyquist_frequencies(spatial: &Axis1d) -> Axis1d {
    let h = spatial.step();
    let top = std::f64::consts::PI / h;
    Axis1d::trapezoid(spatial.len(), -top, top)
}

pub fn dual_label(label: &str) -> String {
    format!("{label}*")
}

fn primal_label(label: &str) -> String {
    label.strip_suffix('*').unwrap_or(label).to_string()
}

/// F f(λ) = ∫ f(x) e^{−i⟨λ, x⟩} dx on a grid of linear axes.
#[derive(Clone, Debug, PartialEq)]
pub struct EuclideanSpectrum {
    spectrum: SampledFunction,
}

impl EuclideanSpectrum {
    pub fn freqs(&self) -> Vec<&Axis1d> {
        self.spectrum.axes().iter().map(|a| &a.grid[0]).collect()
    }

    pub fn values(&self) -> &[Complex64] {
        self.spectrum.values()
    }

    pub fn as_sampled(&self) -> &SampledFunction {
        &self.spectrum
    }

    /// (2π)^{−d} ∫ |F f|² dλ.
    pub fn norm_sq(&self) -> f64 {
        self.spectrum.norm_sq()
    }
}

/// Mf(η) = ∫ f(t) t^{−iη} dt/t = ∫ f(eᵘ) e^{−iηu} du.
#[derive(Clone, Debug, PartialEq)]
pub struct MellinSpectrum {
    spectrum: SampledFunction,
}

impl MellinSpectrum {
    pub fn eta(&self) -> &Axis1d {
        &self.spectrum.axes()[0].grid[0]
    }

    pub fn values(&self) -> &[Complex64] {
        self.spectrum.values()
    }

    pub fn as_sampled(&self) -> &SampledFunction {
        &self.spectrum
    }

    /// (2π)^{−1} ∫ |Mf|² dη.
    pub fn norm_sq(&self) -> f64 {
        self.spectrum.norm_sq()
    }
}

fn transform_all(f: &SampledFunction, kind: AxisKind, freqs: &[Axis1d]) -> Result<SampledFunction> {
    if freqs.len() != f.axes().len() {
        return Err(Error::contract(format!(
            "{} frequency grids for {} axes",
            freqs.len(),
            f.axes().len()
        )));
    }
    if let Some(ax) = f.axes().iter().find(|a| a.kind != kind) {
        return Err(Error::contract(format!("axis `{}` is {:?}, expected {kind:?}", ax.label, ax.kind)));
    }
    f.check_decay(DECAY_THRESHOLD)?;
    let mut out = f.clone();
    for (k, grid) in freqs.iter().enumerate() {
        let label = dual_label(&f.axes()[k].label);
        out = forward_axis(&out, k, Axis::frequency(&label, grid.clone()))?;
    }
    Ok(out)
}

fn inverse_all(spec: &SampledFunction, kind: AxisKind, grids: &[Axis1d]) -> Result<SampledFunction> {
    if grids.len() != spec.axes().len() {
        return Err(Error::contract("one spatial grid per frequency axis is required"));
    }
    let mut out = spec.clone();
    for (k, grid) in grids.iter().enumerate() {
        let label = primal_label(&spec.axes()[k].label);
        let axis = match kind {
            AxisKind::Log => Axis::log(&label, grid.clone()),
            _ => Axis::linear(&label, grid.clone()),
        };
        out = inverse_axis(&out, k, axis)?;
    }
    Ok(out)
}

/// Euclidean transform over every axis of `f` (all linear).
pub fn euclid_ft(f: &SampledFunction, freqs: &[Axis1d]) -> Result<EuclideanSpectrum> {
    Ok(EuclideanSpectrum { spectrum: transform_all(f, AxisKind::Linear, freqs)? })
}

/// f(x) = (2π)^{−d} ∫ F(λ) e^{i⟨λ, x⟩} dλ on the given spatial grids.
pub fn euclid_ift(spec: &EuclideanSpectrum, grids: &[Axis1d]) -> Result<SampledFunction> {
    inverse_all(&spec.spectrum, AxisKind::Linear, grids)
}

/// Mellin transform of a function sampled on one log axis.
pub fn mellin_ft(f: &SampledFunction, eta: &Axis1d) -> Result<MellinSpectrum> {
    if f.axes().len() != 1 {
        return Err(Error::contract("Mellin transform takes a function of one log coordinate"));
    }
    Ok(MellinSpectrum { spectrum: transform_all(f, AxisKind::Log, std::slice::from_ref(eta))? })
}

/// f(eᵘ) = (2π)^{−1} ∫ Mf(η) e^{iηu} dη on the given log grid.
pub fn mellin_ift(spec: &MellinSpectrum, log_grid: &Axis1d) -> Result<SampledFunction> {
    inverse_all(&spec.spectrum, AxisKind::Log, std::slice::from_ref(log_grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn gauss_1d(count: usize) -> (Axis1d, SampledFunction) {
        let grid = Axis1d::trapezoid(count, -9.0, 9.0);
        let f = SampledFunction::from_fn(vec![Axis::linear("x", grid.clone())], |p| c((-0.5 * p[0] * p[0]).exp())).unwrap();
        (grid, f)
    }

    #[test]
    fn zero_transforms_to_zero() {
        let grid = Axis1d::trapezoid(16, -1.0, 1.0);
        let f = SampledFunction::zeros(vec![Axis::linear("x", grid.clone())]).unwrap();
        let s = euclid_ft(&f, &[nyquist_frequencies(&grid)]).unwrap();
        assert!(s.values().iter().all(|v| *v == c(0.0)));
        let m = SampledFunction::zeros(vec![Axis::log("u", grid.clone())]).unwrap();
        assert!(mellin_ft(&m, &grid).unwrap().values().iter().all(|v| *v == c(0.0)));
    }

    #[test]
    fn gaussian_closed_form_and_round_trip() {
        let (grid, f) = gauss_1d(129);
        let freqs = nyquist_frequencies(&grid);
        let s = euclid_ft(&f, std::slice::from_ref(&freqs)).unwrap();
        for (lam, v) in freqs.nodes.iter().zip(s.values()) {
            let want = (2.0 * PI).sqrt() * (-0.5 * lam * lam).exp();
            assert!((v - want).norm() < 1e-8);
        }
        let back = euclid_ift(&s, &[grid]).unwrap();
        let diff = back.combine(c(1.0), &f, c(-1.0)).unwrap();
        assert!((diff.norm_sq() / f.norm_sq()).sqrt() < 1e-8);
        assert!((s.norm_sq() - f.norm_sq()).abs() < 1e-8 * f.norm_sq());
    }

    #[test]
    fn shift_theorem() {
        let grid = Axis1d::trapezoid(181, -12.0, 12.0);
        let shift = 1.3;
        let g = |x: f64| (-0.5 * x * x).exp() * (1.0 + 0.3 * x);
        let f = SampledFunction::from_fn(vec![Axis::linear("x", grid.clone())], |p| c(g(p[0]))).unwrap();
        let fs = SampledFunction::from_fn(vec![Axis::linear("x", grid.clone())], |p| c(g(p[0] - shift))).unwrap();
        let freqs = Axis1d::trapezoid(41, -5.0, 5.0);
        let a = euclid_ft(&f, std::slice::from_ref(&freqs)).unwrap();
        let b = euclid_ft(&fs, std::slice::from_ref(&freqs)).unwrap();
        for ((lam, va), vb) in freqs.nodes.iter().zip(a.values()).zip(b.values()) {
            assert!((vb - va * Complex64::from_polar(1.0, -lam * shift)).norm() < 1e-8);
        }
    }

    #[test]
    fn decay_violation_is_reported() {
        let grid = Axis1d::trapezoid(33, -2.0, 2.0);
        let f = SampledFunction::from_fn(vec![Axis::linear("x", grid.clone())], |p| c((-p[0] * p[0]).exp())).unwrap();
        assert!(matches!(euclid_ft(&f, &[grid]), Err(Error::BoundaryDecay { .. })));
    }

    #[test]
    fn mellin_of_indicator() {
        // Indicator of [1, e] in t is the indicator of [0, 1] in u; half values at the jumps.
        let grid = Axis1d::trapezoid(3001, -1.0, 2.0);
        let f = SampledFunction::from_fn(vec![Axis::log("u", grid)], |p| {
            let u = p[0];
            if (u - 0.0).abs() < 1e-12 || (u - 1.0).abs() < 1e-12 {
                c(0.5)
            } else if u > 0.0 && u < 1.0 {
                c(1.0)
            } else {
                c(0.0)
            }
        })
        .unwrap();
        let eta = Axis1d::trapezoid(9, -4.0, 4.0);
        let m = mellin_ft(&f, &eta).unwrap();
        for (e, v) in eta.nodes.iter().zip(m.values()) {
            let want = if e.abs() < 1e-15 {
                c(1.0)
            } else {
                (c(1.0) - Complex64::from_polar(1.0, -e)) / Complex64::new(0.0, *e)
            };
            assert!((v - want).norm() < 1e-6, "eta={e}");
        }
        let _ = E;
    }

    #[test]
    fn mellin_of_log_gaussian_and_parseval() {
        let grid = Axis1d::trapezoid(129, -9.0, 9.0);
        // f(t) = exp(−(log t)²/2) sampled in u = log t.
        let f = SampledFunction::from_fn(vec![Axis::log("u", grid.clone())], |p| c((-0.5 * p[0] * p[0]).exp())).unwrap();
        let eta = nyquist_frequencies(&grid);
        let m = mellin_ft(&f, &eta).unwrap();
        for (e, v) in eta.nodes.iter().zip(m.values()) {
            assert!((v - (2.0 * PI).sqrt() * (-0.5 * e * e).exp()).norm() < 1e-8);
        }
        assert!((m.norm_sq() - f.norm_sq()).abs() < 1e-8 * f.norm_sq());
        let back = mellin_ift(&m, &grid).unwrap();
        let diff = back.combine(c(1.0), &f, c(-1.0)).unwrap();
        assert!(diff.max_abs() < 1e-8);
    }

    #[test]
    fn linearity() {
        let grid = Axis1d::trapezoid(97, -9.0, 9.0);
        let ax = vec![Axis::linear("x", grid.clone())];
        let f = SampledFunction::from_fn(ax.clone(), |p| c((-0.5 * p[0] * p[0]).exp())).unwrap();
        let g = SampledFunction::from_fn(ax, |p| Complex64::new(0.0, (-(p[0] - 1.0).powi(2)).exp())).unwrap();
        let (a, b) = (Complex64::new(0.7, -0.2), Complex64::new(-1.5, 0.4));
        let freqs = [nyquist_frequencies(&grid)];
        let lhs = euclid_ft(&f.combine(a, &g, b).unwrap(), &freqs).unwrap();
        let (tf, tg) = (euclid_ft(&f, &freqs).unwrap(), euclid_ft(&g, &freqs).unwrap());
        for ((l, x), y) in lhs.values().iter().zip(tf.values()).zip(tg.values()) {
            assert!((l - (a * x + b * y)).norm() < 1e-12);
        }
    }
}
