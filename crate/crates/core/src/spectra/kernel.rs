//! Matrices of the primitive transforms along a single axis.
//!
//! Every spectral point j carries a basis function φⱼ: e^{iλx} on a linear or
//! log axis, e^{imθ} on SO(2), D^ℓ_{ba} on SO(3) for the entry (ℓ, a, b). The
//! forward transform is Σᵢ conj φⱼ(xᵢ) wᵢ f(xᵢ) and the inverse Σⱼ φⱼ(x) Wⱼ F(j).

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::tensor::{Axis, AxisKind, SampledFunction};
use super::wigner::wigner_d_table;
use crate::error::{Error, Result};

fn dual_kinds(spatial: AxisKind, spectral: AxisKind) -> bool {
    matches!(
        (spatial, spectral),
        (AxisKind::Linear | AxisKind::Log, AxisKind::Frequency)
            | (AxisKind::Angle, AxisKind::So2Irrep)
            | (AxisKind::So3, AxisKind::So3Irrep)
    )
}

/// φⱼ(xᵢ) for all pairs, row-major in (j, i).
fn basis_values(spatial: &Axis, spectral: &Axis) -> Result<Vec<Complex64>> {
    if !dual_kinds(spatial.kind, spectral.kind) {
        return Err(Error::contract(format!(
            "no transform between {:?} axis `{}` and {:?} axis `{}`",
            spatial.kind, spatial.label, spectral.kind, spectral.label
        )));
    }
    let (n_in, n_out) = (spatial.len(), spectral.len());
    if spatial.kind != AxisKind::So3 {
        return Ok(crate::par::map_indexed(n_out * n_in, |idx| {
            let (j, i) = (idx / n_in, idx % n_in);
            Complex64::from_polar(1.0, spectral.coords[j] * spatial.coords[i])
        }));
    }
    let l_max = (0..n_out).map(|j| spectral.point(j)[0] as usize).max().unwrap_or(0);
    let mut tables: HashMap<u64, Vec<DMatrix<f64>>> = HashMap::new();
    for i in 0..n_in {
        let beta = spatial.point(i)[1];
        tables.entry(beta.to_bits()).or_insert_with(|| wigner_d_table(l_max, beta));
    }
    Ok(crate::par::map_indexed(n_out * n_in, |idx| {
        let (j, i) = (idx / n_in, idx % n_in);
        let (x, e) = (spatial.point(i), spectral.point(j));
        let (l, a, b) = (e[0] as usize, e[1] as i64, e[2] as i64);
        let li = l as i64;
        let d = tables[&x[1].to_bits()][l][((b + li) as usize, (a + li) as usize)];
        Complex64::from_polar(d, -(b as f64) * x[0] - (a as f64) * x[2])
    }))
}

/// Forward transform of axis `k` onto the spectral axis `out`.
pub fn forward_axis(f: &SampledFunction, k: usize, out: Axis) -> Result<SampledFunction> {
    let spatial = &f.axes()[k];
    let mut m = basis_values(spatial, &out)?;
    let n_in = spatial.len();
    for (idx, v) in m.iter_mut().enumerate() {
        *v = v.conj() * spatial.weights[idx % n_in];
    }
    f.apply_axis(k, out, &m)
}

/// Inverse transform of spectral axis `k` onto the spatial axis `out`.
pub fn inverse_axis(spec: &SampledFunction, k: usize, out: Axis) -> Result<SampledFunction> {
    let spectral = &spec.axes()[k];
    let phi = basis_values(&out, spectral)?;
    let (n_spec, n_space) = (spectral.len(), out.len());
    let mut m = vec![Complex64::new(0.0, 0.0); n_space * n_spec];
    for j in 0..n_spec {
        for i in 0..n_space {
            m[i * n_spec + j] = phi[j * n_space + i] * spectral.weights[j];
        }
    }
    spec.apply_axis(k, out, &m)
}
