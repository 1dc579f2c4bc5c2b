//! Coordinate charts from quadrature coordinates to group elements.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupTag};

/// How a coordinate tuple maps to a group element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    /// θ ↦ planar rotation.
    Angle,
    /// (α, β, γ) ↦ Rz(α)·Ry(β)·Rz(γ).
    EulerZyz,
    /// u ∈ ℝⁿ⁻¹ ↦ diag(e^{u₁}, …, e^{uₙ₋₁}, e^{−Σu}).
    LogDiagonal { n: usize },
    /// Strictly-upper entries, row by row, of a `size × size` unipotent matrix.
    UnipotentEntries { size: usize },
    /// Plain coordinates of ℝᵈ (translation part of an affine element).
    Cartesian { dim: usize },
    /// u ↦ t = eᵘ.
    LogScale,
}

impl Chart {
    pub fn dim(&self) -> usize {
        match *self {
            Chart::Angle | Chart::LogScale => 1,
            Chart::EulerZyz => 3,
            Chart::LogDiagonal { n } => n - 1,
            Chart::UnipotentEntries { size } => size * (size - 1) / 2,
            Chart::Cartesian { dim } => dim,
        }
    }

    /// Group element at `coords`. ℝᵈ points become affine elements with identity
    /// linear part; ℝ₊* points become 1×1 positive-diagonal elements.
    pub fn element(&self, coords: &[f64]) -> Result<GroupElement> {
        if coords.len() != self.dim() {
            return Err(Error::contract(format!(
                "chart {self:?} takes {} coordinates, got {}",
                self.dim(),
                coords.len()
            )));
        }
        match *self {
            Chart::Angle => Ok(GroupElement::rotation_2d(coords[0])),
            Chart::EulerZyz => GroupElement::rotation(euler_zyz_matrix(coords[0], coords[1], coords[2])),
            Chart::LogDiagonal { n } => GroupElement::positive_diagonal(&log_diagonal(coords, n)),
            Chart::UnipotentEntries { size } => GroupElement::unipotent(unipotent_from_entries(coords, size)),
            Chart::Cartesian { dim } => {
                GroupElement::affine(DVector::from_column_slice(coords), DMatrix::identity(dim, dim))
            }
            Chart::LogScale => GroupElement::positive_diagonal(&[coords[0].exp()]),
        }
    }

    /// Chart coordinates of `g`; inverse of [`Chart::element`].
    pub fn coordinates(&self, g: &GroupElement) -> Result<Vec<f64>> {
        let m = g.matrix();
        match *self {
            Chart::Angle => Ok(vec![angle_of(m)]),
            Chart::EulerZyz => {
                let (a, b, c) = euler_zyz_angles(m);
                Ok(vec![a, b, c])
            }
            Chart::LogDiagonal { n } => {
                if g.tag() != GroupTag::PositiveDiagonal || g.dim() != n {
                    return Err(Error::contract("log chart needs a positive-diagonal element"));
                }
                Ok((0..n - 1).map(|i| m[(i, i)].ln()).collect())
            }
            Chart::UnipotentEntries { size } => Ok(unipotent_entries(m, size)),
            Chart::Cartesian { .. } => g
                .translation()
                .map(|t| t.as_slice().to_vec())
                .ok_or_else(|| Error::contract("Cartesian chart needs an affine element")),
            Chart::LogScale => Ok(vec![m[(0, 0)].ln()]),
        }
    }
}

/// diag(e^{u₁}, …, e^{uₙ₋₁}, e^{−Σu}).
pub fn log_diagonal(u: &[f64], n: usize) -> Vec<f64> {
    let mut d: Vec<f64> = u.iter().map(|v| v.exp()).collect();
    d.push((-u.iter().sum::<f64>()).exp());
    debug_assert_eq!(d.len(), n);
    d
}

pub fn unipotent_from_entries(x: &[f64], size: usize) -> DMatrix<f64> {
    let mut m = DMatrix::identity(size, size);
    let mut idx = 0;
    for i in 0..size {
        for j in (i + 1)..size {
            m[(i, j)] = x[idx];
            idx += 1;
        }
    }
    m
}

pub fn unipotent_entries(m: &DMatrix<f64>, size: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(size * (size - 1) / 2);
    for i in 0..size {
        for j in (i + 1)..size {
            out.push(m[(i, j)]);
        }
    }
    out
}

/// Angle of a planar rotation in [0, 2π).
pub fn angle_of(m: &DMatrix<f64>) -> f64 {
    m[(1, 0)].atan2(m[(0, 0)]).rem_euclid(2.0 * PI)
}

pub fn rz(phi: f64) -> DMatrix<f64> {
    let (s, c) = phi.sin_cos();
    DMatrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0])
}

pub fn ry(beta: f64) -> DMatrix<f64> {
    let (s, c) = beta.sin_cos();
    DMatrix::from_row_slice(3, 3, &[c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c])
}

/// Rz(α)·Ry(β)·Rz(γ).
pub fn euler_zyz_matrix(alpha: f64, beta: f64, gamma: f64) -> DMatrix<f64> {
    rz(alpha) * ry(beta) * rz(gamma)
}

/// ZYZ Euler angles with α, γ ∈ [0, 2π) and β ∈ [0, π]. At the poles γ is set to 0.
pub fn euler_zyz_angles(r: &DMatrix<f64>) -> (f64, f64, f64) {
    let two_pi = 2.0 * PI;
    let cb = r[(2, 2)].clamp(-1.0, 1.0);
    let sb = (r[(0, 2)].powi(2) + r[(1, 2)].powi(2)).sqrt();
    let beta = sb.atan2(cb);
    if sb > 1e-12 {
        let alpha = r[(1, 2)].atan2(r[(0, 2)]);
        let gamma = r[(2, 1)].atan2(-r[(2, 0)]);
        (alpha.rem_euclid(two_pi), beta, gamma.rem_euclid(two_pi))
    } else if cb > 0.0 {
        (r[(1, 0)].atan2(r[(0, 0)]).rem_euclid(two_pi), 0.0, 0.0)
    } else {
        ((-r[(1, 0)]).atan2(r[(1, 1)]).rem_euclid(two_pi), PI, 0.0)
    }
}
