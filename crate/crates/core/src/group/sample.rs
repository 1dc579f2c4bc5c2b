//! Reproducible random group elements: Gaussian entries projected onto each group.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::element::{GroupElement, GroupTag};
use super::iwasawa::gram_schmidt;

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| normal(rng))
}

fn with_det_sign<R: Rng + ?Sized>(rng: &mut R, n: usize, positive: bool) -> DMatrix<f64> {
    loop {
        let mut m = gaussian_matrix(rng, n);
        let det = m.determinant();
        if det.abs() < 1e-3 {
            continue;
        }
        if (det > 0.0) != positive {
            m.row_mut(0).neg_mut();
        }
        return m;
    }
}

/// Haar-distributed rotation (QR of a Gaussian matrix).
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> GroupElement {
    let (mut q, _) = gram_schmidt(&with_det_sign(rng, n, true)).expect("nonsingular by construction");
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    GroupElement::rotation(q).expect("orthogonal by construction")
}

/// Diagonal `exp(u)` with Gaussian log-entries of width `sigma` summing to zero.
pub fn random_positive_diagonal<R: Rng + ?Sized>(rng: &mut R, n: usize, sigma: f64) -> GroupElement {
    let mut u: Vec<f64> = (0..n.saturating_sub(1)).map(|_| sigma * normal(rng)).collect();
    u.push(-u.iter().sum::<f64>());
    let diag: Vec<f64> = u.iter().map(|v| v.exp()).collect();
    GroupElement::positive_diagonal(&diag).expect("positive by construction")
}

pub fn random_unipotent<R: Rng + ?Sized>(rng: &mut R, n: usize) -> GroupElement {
    let mut m = DMatrix::identity(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            m[(i, j)] = normal(rng);
        }
    }
    GroupElement::unipotent(m).expect("unipotent by construction")
}

/// Gaussian matrix scaled to unit determinant.
pub fn random_special_linear<R: Rng + ?Sized>(rng: &mut R, n: usize) -> GroupElement {
    let m = with_det_sign(rng, n, true);
    let det = m.determinant();
    GroupElement::special_linear(m / det.powf(1.0 / n as f64)).expect("unit determinant by construction")
}

pub fn random_general_linear<R: Rng + ?Sized>(rng: &mut R, n: usize, positive: bool) -> GroupElement {
    let tag = if positive { GroupTag::GeneralLinearPlus } else { GroupTag::GeneralLinearMinus };
    GroupElement::new(tag, with_det_sign(rng, n, positive), None).expect("determinant sign by construction")
}

/// Gaussian translation with a GL₊ linear part.
pub fn random_affine<R: Rng + ?Sized>(rng: &mut R, n: usize) -> GroupElement {
    let t = DVector::from_fn(n, |_, _| normal(rng));
    GroupElement::affine(t, with_det_sign(rng, n, true)).expect("nonsingular by construction")
}

/// Random element of the group named by `tag`.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, tag: GroupTag, n: usize) -> GroupElement {
    match tag {
        GroupTag::Rotation => random_rotation(rng, n),
        GroupTag::PositiveDiagonal => random_positive_diagonal(rng, n, 0.5),
        GroupTag::Unipotent => random_unipotent(rng, n),
        GroupTag::SpecialLinear => random_special_linear(rng, n),
        GroupTag::GeneralLinearPlus => random_general_linear(rng, n, true),
        GroupTag::GeneralLinearMinus => random_general_linear(rng, n, false),
        GroupTag::Affine => random_affine(rng, n),
    }
}
