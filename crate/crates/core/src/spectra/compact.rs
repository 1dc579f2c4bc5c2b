//! Peter–Weyl transform on K = SO(2) and SO(3).

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::kernel::{forward_axis, inverse_axis};
use super::tensor::{Axis, AxisKind, SampledFunction};
use super::wigner::wigner_d;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupTag};
use crate::quadrature::chart::{angle_of, euler_zyz_angles};

/// Which compact group a spectrum lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CompactGroup {
    So2,
    So3,
}

/// An irreducible unitary representation: the character m of SO(2) or the
/// spin-ℓ representation of SO(3).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Irrep {
    So2(i64),
    So3(usize),
}

impl Irrep {
    pub fn dim(&self) -> usize {
        match *self {
            Irrep::So2(_) => 1,
            Irrep::So3(l) => 2 * l + 1,
        }
    }
}

/// D^ℓ_{mm'}(α, β, γ) = e^{−imα} d^ℓ_{mm'}(β) e^{−im'γ}, indexed by (m + ℓ, m' + ℓ).
pub fn wigner_big_d(l: usize, alpha: f64, beta: f64, gamma: f64) -> DMatrix<Complex64> {
    let d = wigner_d(l, beta);
    let li = l as i64;
    DMatrix::from_fn(2 * l + 1, 2 * l + 1, |r, c| {
        let (m, mp) = (r as i64 - li, c as i64 - li);
        Complex64::from_polar(d[(r, c)], -(m as f64) * alpha - (mp as f64) * gamma)
    })
}

/// γ(k) for a rotation `k`.
pub fn irrep_matrix(gamma: Irrep, k: &GroupElement) -> Result<DMatrix<Complex64>> {
    if k.tag() != GroupTag::Rotation {
        return Err(Error::contract(format!("irrep_matrix needs a rotation, got {}", k.tag())));
    }
    match (gamma, k.dim()) {
        (Irrep::So2(m), 2) => {
            let theta = angle_of(k.matrix());
            Ok(DMatrix::from_element(1, 1, Complex64::from_polar(1.0, m as f64 * theta)))
        }
        (Irrep::So3(l), 3) => {
            let (a, b, c) = euler_zyz_angles(k.matrix());
            Ok(wigner_big_d(l, a, b, c))
        }
        (_, n) => Err(Error::Unsupported(format!("{gamma:?} on SO({n})"))),
    }
}

/// Tf(γ) for every γ within the band limit.
#[derive(Clone, Debug, PartialEq)]
pub struct CompactSpectrum {
    pub group: CompactGroup,
    pub band_limit: usize,
    /// Keyed by m for SO(2) and by ℓ for SO(3).
    pub blocks: BTreeMap<i64, DMatrix<Complex64>>,
}

impl CompactSpectrum {
    pub fn zero(group: CompactGroup, band_limit: usize) -> Self {
        let l = band_limit as i64;
        let blocks = match group {
            CompactGroup::So2 => (-l..=l).map(|m| (m, DMatrix::zeros(1, 1))).collect(),
            CompactGroup::So3 => (0..=l).map(|j| (j, DMatrix::zeros(2 * j as usize + 1, 2 * j as usize + 1))).collect(),
        };
        CompactSpectrum { group, band_limit, blocks }
    }

    pub fn block(&self, key: i64) -> Option<&DMatrix<Complex64>> {
        self.blocks.get(&key)
    }

    fn irrep(&self, key: i64) -> Irrep {
        match self.group {
            CompactGroup::So2 => Irrep::So2(key),
            CompactGroup::So3 => Irrep::So3(key as usize),
        }
    }

    /// Σ_γ d_γ ‖Tf(γ)‖²_HS.
    pub fn norm_sq(&self) -> f64 {
        self.blocks
            .iter()
            .map(|(k, b)| self.irrep(*k).dim() as f64 * b.iter().map(|v| v.norm_sqr()).sum::<f64>())
            .sum()
    }

    /// Σ_γ d_γ tr[Tf(γ) γ(k)].
    pub fn evaluate(&self, k: &GroupElement) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for (key, block) in &self.blocks {
            let g = self.irrep(*key);
            total += (block * irrep_matrix(g, k)?).trace() * g.dim() as f64;
        }
        Ok(total)
    }

    /// The spectrum as a function on the irrep axis labelled `label`.
    pub fn to_sampled(&self, label: &str) -> Result<SampledFunction> {
        let axis = match self.group {
            CompactGroup::So2 => Axis::so2_irreps(label, self.band_limit),
            CompactGroup::So3 => Axis::so3_irreps(label, self.band_limit),
        };
        let mut values = Vec::with_capacity(axis.len());
        for block in self.blocks.values() {
            for r in 0..block.nrows() {
                for c in 0..block.ncols() {
                    values.push(block[(r, c)]);
                }
            }
        }
        SampledFunction::new(vec![axis], values)
    }

    /// Reads blocks back from a single irrep axis.
    pub fn from_sampled(spec: &SampledFunction) -> Result<Self> {
        let axis = match spec.axes() {
            [a] => a,
            _ => return Err(Error::contract("compact spectrum needs exactly one irrep axis")),
        };
        let values = spec.values();
        match axis.kind {
            AxisKind::So2Irrep => {
                let band_limit = (axis.len() - 1) / 2;
                let blocks = (0..axis.len())
                    .map(|j| (axis.coords[j] as i64, DMatrix::from_element(1, 1, values[j])))
                    .collect();
                Ok(CompactSpectrum { group: CompactGroup::So2, band_limit, blocks })
            }
            AxisKind::So3Irrep => {
                let band_limit = axis.point(axis.len() - 1)[0] as usize;
                let mut out = CompactSpectrum::zero(CompactGroup::So3, band_limit);
                for j in 0..axis.len() {
                    let e = axis.point(j);
                    let l = e[0] as i64;
                    let block = out.blocks.get_mut(&l).expect("ℓ within band");
                    block[((e[1] as i64 + l) as usize, (e[2] as i64 + l) as usize)] = values[j];
                }
                Ok(out)
            }
            k => Err(Error::contract(format!("{k:?} axis is not an irrep axis"))),
        }
    }
}

/// Checks that the K-grid integrates products of band-limited functions exactly.
pub fn check_band(axis: &Axis, band_limit: usize) -> Result<()> {
    match axis.kind {
        AxisKind::Angle => {
            if axis.len() < 2 * band_limit + 1 {
                return Err(Error::config(format!(
                    "SO(2) grid of {} nodes cannot resolve band limit {band_limit} (needs ≥ {})",
                    axis.len(),
                    2 * band_limit + 1
                )));
            }
        }
        AxisKind::So3 => {
            let (na, nb, ng) = match axis.grid.as_slice() {
                [a, b, g] => (a.len(), b.len(), g.len()),
                _ => return Err(Error::contract("SO(3) axis without tensor structure")),
            };
            if na.min(ng) < 2 * band_limit + 1 || nb < band_limit + 1 {
                return Err(Error::config(format!(
                    "SO(3) grid {na}×{nb}×{ng} cannot resolve band limit {band_limit} (needs α, γ ≥ {} and β ≥ {})",
                    2 * band_limit + 1,
                    band_limit + 1
                )));
            }
        }
        k => return Err(Error::contract(format!("{k:?} axis is not a compact-group axis"))),
    }
    Ok(())
}

/// Irrep axis dual to a K axis.
pub fn irrep_axis(spatial: &Axis, band_limit: usize) -> Result<Axis> {
    let label = super::euclid::dual_label(&spatial.label);
    match spatial.kind {
        AxisKind::Angle => Ok(Axis::so2_irreps(&label, band_limit)),
        AxisKind::So3 => Ok(Axis::so3_irreps(&label, band_limit)),
        k => Err(Error::contract(format!("{k:?} axis is not a compact-group axis"))),
    }
}

/// Tf(γ) = ∫ f(x) γ(x⁻¹) dx for f sampled on one K axis.
pub fn peter_weyl(f: &SampledFunction, band_limit: usize) -> Result<CompactSpectrum> {
    let axis = match f.axes() {
        [a] => a,
        _ => return Err(Error::contract("peter_weyl takes a function on one K axis")),
    };
    check_band(axis, band_limit)?;
    let out = irrep_axis(axis, band_limit)?;
    CompactSpectrum::from_sampled(&forward_axis(f, 0, out)?)
}

/// f(x) = Σ_γ d_γ tr[Tf(γ) γ(x)] at the nodes of `grid`.
pub fn peter_weyl_inverse(spec: &CompactSpectrum, grid: &Axis) -> Result<SampledFunction> {
    let s = spec.to_sampled("k*")?;
    inverse_axis(&s, 0, grid.clone())
}

/// |∫|f|² − Σ d_γ ‖Tf(γ)‖²_HS| / ∫|f|².
pub fn compact_plancherel_residual(f: &SampledFunction, band_limit: usize) -> Result<f64> {
    let left = f.norm_sq();
    let right = peter_weyl(f, band_limit)?.norm_sq();
    Ok(if left > 0.0 { (left - right).abs() / left } else { (left - right).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::sample;
    use crate::quadrature::{build_rule, FactorKind, RuleParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn so3_axis(l: usize) -> Axis {
        Axis::so3("k", &build_rule(FactorKind::KSo3, &RuleParams::so3_band_limit(l)).unwrap()).unwrap()
    }

    /// Random band-limited function: a random spectrum pushed through the inverse.
    fn random_so3(rng: &mut ChaCha8Rng, l: usize, grid: &Axis) -> (CompactSpectrum, SampledFunction) {
        let mut spec = CompactSpectrum::zero(CompactGroup::So3, l);
        for block in spec.blocks.values_mut() {
            for v in block.iter_mut() {
                *v = Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng));
            }
        }
        let f = peter_weyl_inverse(&spec, grid).unwrap();
        (spec, f)
    }

    #[test]
    fn irrep_examples() {
        let k = GroupElement::rotation_2d(PI / 2.0);
        let m = irrep_matrix(Irrep::So2(1), &k).unwrap();
        assert!((m[(0, 0)] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(irrep_matrix(Irrep::So2(0), &k).unwrap()[(0, 0)], c(1.0));
        let e3 = GroupElement::identity(GroupTag::Rotation, 3);
        let d1 = irrep_matrix(Irrep::So3(1), &e3).unwrap();
        assert!((d1 - DMatrix::<Complex64>::identity(3, 3)).camax() < 1e-15);
        let d0 = irrep_matrix(Irrep::So3(0), &sample::random_rotation(&mut ChaCha8Rng::seed_from_u64(1), 3)).unwrap();
        assert!((d0[(0, 0)] - 1.0).norm() < 1e-15);
        let r4 = GroupElement::identity(GroupTag::Rotation, 4);
        assert!(matches!(irrep_matrix(Irrep::So3(1), &r4), Err(Error::Unsupported(_))));
    }

    #[test]
    fn wigner_big_d_is_unitary_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let (k1, k2) = (sample::random_rotation(&mut rng, 3), sample::random_rotation(&mut rng, 3));
            let k12 = k1.compose(&k2).unwrap();
            for l in 0..=6 {
                let g = Irrep::So3(l);
                let (a, b, ab) = (irrep_matrix(g, &k1).unwrap(), irrep_matrix(g, &k2).unwrap(), irrep_matrix(g, &k12).unwrap());
                let id = DMatrix::<Complex64>::identity(2 * l + 1, 2 * l + 1);
                assert!((a.adjoint() * &a - id).camax() < 1e-12);
                assert!((&a * &b - ab).camax() < 1e-10);
                assert!((a.determinant().norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn so2_examples() {
        let axis = Axis::angle("k", 16);
        let one = SampledFunction::from_fn(vec![axis.clone()], |_| c(1.0)).unwrap();
        let s = peter_weyl(&one, 4).unwrap();
        for (m, b) in &s.blocks {
            let want = if *m == 0 { 1.0 } else { 0.0 };
            assert!((b[(0, 0)] - want).norm() < 1e-12);
        }
        let cos = SampledFunction::from_fn(vec![axis.clone()], |p| c(p[0].cos())).unwrap();
        let s = peter_weyl(&cos, 4).unwrap();
        for (m, b) in &s.blocks {
            let want = if m.abs() == 1 { 0.5 } else { 0.0 };
            assert!((b[(0, 0)] - want).norm() < 1e-12);
        }
        let e3 = SampledFunction::from_fn(vec![axis.clone()], |p| Complex64::from_polar(1.0, 3.0 * p[0])).unwrap();
        let s = peter_weyl(&e3, 4).unwrap();
        for (m, b) in &s.blocks {
            let want = if *m == 3 { 1.0 } else { 0.0 };
            assert!((b[(0, 0)] - want).norm() < 1e-12);
        }
        assert!(matches!(peter_weyl(&e3, 8), Err(Error::Configuration(_))));
    }

    #[test]
    fn so2_inverse_examples() {
        let axis = Axis::angle("k", 8);
        let zero = peter_weyl_inverse(&CompactSpectrum::zero(CompactGroup::So2, 2), &axis).unwrap();
        assert_eq!(zero.max_abs(), 0.0);
        let mut spec = CompactSpectrum::zero(CompactGroup::So2, 2);
        spec.blocks.insert(1, DMatrix::from_element(1, 1, c(0.5)));
        let f = peter_weyl_inverse(&spec, &axis).unwrap();
        for (theta, v) in axis.coords.iter().zip(f.values()) {
            assert!((v - Complex64::from_polar(0.5, *theta)).norm() < 1e-15);
        }
        let k = GroupElement::rotation_2d(0.3);
        assert!((spec.evaluate(&k).unwrap() - Complex64::from_polar(0.5, 0.3)).norm() < 1e-15);
    }

    #[test]
    fn so2_plancherel() {
        let axis = Axis::angle("k", 16);
        let f = SampledFunction::from_fn(vec![axis.clone()], |p| Complex64::from_polar(1.0, p[0])).unwrap();
        assert!(compact_plancherel_residual(&f, 4).unwrap() < 1e-12);
        let one = SampledFunction::from_fn(vec![axis], |_| c(1.0)).unwrap();
        assert!((one.norm_sq() - 1.0).abs() < 1e-15);
        assert!(compact_plancherel_residual(&one, 4).unwrap() < 1e-12);
    }

    #[test]
    fn so3_constant_and_round_trip() {
        let grid = so3_axis(3);
        let one = SampledFunction::from_fn(vec![grid.clone()], |_| c(1.0)).unwrap();
        let s = peter_weyl(&one, 3).unwrap();
        assert!((s.block(0).unwrap()[(0, 0)] - 1.0).norm() < 1e-12);
        for l in 1..=3 {
            assert!(s.block(l).unwrap().camax() < 1e-12);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (spec, f) = random_so3(&mut rng, 3, &grid);
        let back = peter_weyl(&f, 3).unwrap();
        for (l, b) in &spec.blocks {
            assert!((b - back.block(*l).unwrap()).camax() < 1e-10);
        }
        let again = peter_weyl_inverse(&back, &grid).unwrap();
        assert!(again.combine(c(1.0), &f, c(-1.0)).unwrap().max_abs() < 1e-10);
        // Pointwise evaluation off the grid agrees with the definition.
        let k = sample::random_rotation(&mut rng, 3);
        let (a, b, g) = euler_zyz_angles(k.matrix());
        let direct: Complex64 = spec
            .blocks
            .iter()
            .map(|(l, blk)| (blk * wigner_big_d(*l as usize, a, b, g)).trace() * (2 * l + 1) as f64)
            .sum();
        assert!((spec.evaluate(&k).unwrap() - direct).norm() < 1e-12);
    }

    #[test]
    fn so3_plancherel_random() {
        let grid = so3_axis(4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (_, f) = random_so3(&mut rng, 4, &grid);
        assert!(compact_plancherel_residual(&f, 4).unwrap() < 1e-8);
        let coarse = Axis::so3("k", &build_rule(FactorKind::KSo3, &RuleParams::so3_band_limit(2)).unwrap()).unwrap();
        assert!(matches!(peter_weyl(&SampledFunction::zeros(vec![coarse]).unwrap(), 4), Err(Error::Configuration(_))));
    }
}
