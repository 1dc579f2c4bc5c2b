//! GL₊ = SL × ℝ₊* and the identification of GL₋ with GL₊.

use nalgebra::DMatrix;

use super::element::{reflection, GroupElement, GroupTag};
use crate::error::{Error, Result};

/// `g = t·s` with `s ∈ SL(n)` and `t = det(g)^{1/n} > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct GlPlusFactorization {
    pub s: GroupElement,
    pub t: f64,
}

impl GlPlusFactorization {
    pub fn recompose(&self) -> DMatrix<f64> {
        self.s.matrix() * self.t
    }
}

pub fn split_gl_plus(g: &GroupElement) -> Result<GlPlusFactorization> {
    if g.tag() == GroupTag::Affine {
        return Err(Error::contract("split_gl_plus needs a linear element"));
    }
    split_gl_plus_matrix(g.matrix())
}

pub fn split_gl_plus_matrix(m: &DMatrix<f64>) -> Result<GlPlusFactorization> {
    let det = m.determinant();
    if !(det > 0.0) {
        return Err(Error::domain(format!("GL₊ split needs det > 0, got {det}")));
    }
    let t = det.powf(1.0 / m.nrows() as f64);
    let s = GroupElement::special_linear(m / t)?;
    Ok(GlPlusFactorization { s, t })
}

/// Maps `g ∈ GL₋` to `J·g ∈ GL₊`, `J = diag(-1, 1, …, 1)`.
pub fn gl_minus_transport(g: &GroupElement) -> Result<GroupElement> {
    if g.tag() == GroupTag::Affine || g.matrix().determinant() >= 0.0 {
        return Err(Error::domain("transport needs a matrix with det < 0"));
    }
    let j = reflection(g.dim());
    GroupElement::new(GroupTag::GeneralLinearPlus, j * g.matrix(), None)
}

/// Inverse of [`gl_minus_transport`]: `h ↦ J·h`.
pub fn gl_plus_to_minus(h: &GroupElement) -> Result<GroupElement> {
    if h.tag() == GroupTag::Affine || h.matrix().determinant() <= 0.0 {
        return Err(Error::domain("pull-back needs a matrix with det > 0"));
    }
    let j = reflection(h.dim());
    GroupElement::new(GroupTag::GeneralLinearMinus, j * h.matrix(), None)
}

/// Product on GL₋ carried over from GL₊: `a∘b = J·((J a)·(J b))`.
pub fn transported_product(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let j = reflection(a.nrows());
    &j * ((&j * a) * (&j * b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_examples() {
        let id = split_gl_plus_matrix(&DMatrix::identity(2, 2)).unwrap();
        assert_eq!(id.t, 1.0);
        let two = split_gl_plus_matrix(&(DMatrix::identity(2, 2) * 2.0)).unwrap();
        assert!((two.t - 2.0).abs() < 1e-15);
        assert!((two.s.matrix() - DMatrix::<f64>::identity(2, 2)).amax() < 1e-15);
        let d = split_gl_plus_matrix(&DMatrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 1.0])).unwrap();
        assert!((d.t - 2.0).abs() < 1e-15);
        assert!((d.s.matrix() - DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5])).amax() < 1e-15);
    }

    #[test]
    fn split_rejects_nonpositive_det() {
        let err = split_gl_plus_matrix(&DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0])).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn reflection_transports_to_identity() {
        let j = GroupElement::general_linear(reflection(3)).unwrap();
        let t = gl_minus_transport(&j).unwrap();
        assert_eq!(t.matrix(), &DMatrix::<f64>::identity(3, 3));
        assert!(gl_minus_transport(&GroupElement::identity(GroupTag::GeneralLinearPlus, 2)).is_err());
    }

    #[test]
    fn transported_square_of_reflection() {
        let j = reflection(2);
        assert_eq!(transported_product(&j, &j), j);
    }

    #[test]
    fn transport_round_trip() {
        let g = GroupElement::general_linear(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.3])).unwrap();
        let back = gl_plus_to_minus(&gl_minus_transport(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }
}
