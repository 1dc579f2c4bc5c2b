//! Lifting functions from a group to the auxiliary groups built on it.
//!
//! * H₊ = ℝⁿ × GL₊ × GL₊ with law (A, X, Y)(B, P, Q) = (A + Y B, X P, Y Q);
//!   GA₊ sits inside as (A, I, Y).
//! * Λ = N × A × A with law (n, a, b)(m, c, d) = (n · b m b⁻¹, a c, b d);
//!   S = N ⋊ A sits inside as (n, I, b).
//! * G × K for the compact extension f ↦ Υ(f).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A point (A, X, Y) of H₊.
#[derive(Clone, Debug, PartialEq)]
pub struct AuxiliaryElement {
    pub translation: DVector<f64>,
    pub x: DMatrix<f64>,
    pub y: DMatrix<f64>,
}

impl AuxiliaryElement {
    pub fn new(translation: DVector<f64>, x: DMatrix<f64>, y: DMatrix<f64>) -> Result<Self> {
        let n = translation.len();
        if x.shape() != (n, n) || y.shape() != (n, n) {
            return Err(Error::contract("auxiliary element blocks have mismatched sizes"));
        }
        if x.determinant() <= 0.0 || y.determinant() <= 0.0 {
            return Err(Error::domain("auxiliary element needs X, Y with det > 0"));
        }
        Ok(AuxiliaryElement { translation, x, y })
    }

    pub fn identity(n: usize) -> Self {
        AuxiliaryElement {
            translation: DVector::zeros(n),
            x: DMatrix::identity(n, n),
            y: DMatrix::identity(n, n),
        }
    }

    pub fn compose(&self, other: &AuxiliaryElement) -> AuxiliaryElement {
        AuxiliaryElement {
            translation: &self.translation + &self.y * &other.translation,
            x: &self.x * &other.x,
            y: &self.y * &other.y,
        }
    }
}

/// A point (n, a, b) of Λ: `n` unipotent, `a` and `b` positive diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct SolvableAuxElement {
    pub n: DMatrix<f64>,
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
}

/// `a·n·a⁻¹` for diagonal `a`.
pub fn conjugate_by_diagonal(a: &DMatrix<f64>, n: &DMatrix<f64>) -> DMatrix<f64> {
    let size = n.nrows();
    DMatrix::from_fn(size, size, |i, j| n[(i, j)] * a[(i, i)] / a[(j, j)])
}

impl SolvableAuxElement {
    pub fn compose(&self, other: &SolvableAuxElement) -> SolvableAuxElement {
        SolvableAuxElement {
            n: &self.n * conjugate_by_diagonal(&self.b, &other.n),
            a: &self.a * &other.a,
            b: &self.b * &other.b,
        }
    }
}

/// f̃(A, X, Y) = f(X·A, X·Y) for `f(translation, linear)` on GA₊.
pub fn tilde_extend<T, F>(f: F) -> impl Fn(&AuxiliaryElement) -> T
where
    F: Fn(&DVector<f64>, &DMatrix<f64>) -> T,
{
    move |h: &AuxiliaryElement| f(&(&h.x * &h.translation), &(&h.x * &h.y))
}

/// f̃(n, a, b) = f(a n a⁻¹, a b) for `f(n, a)` on S = N ⋊ A.
pub fn tilde_extend_solvable<T, F>(f: F) -> impl Fn(&SolvableAuxElement) -> T
where
    F: Fn(&DMatrix<f64>, &DMatrix<f64>) -> T,
{
    move |p: &SolvableAuxElement| f(&conjugate_by_diagonal(&p.a, &p.n), &(&p.a * &p.b))
}

/// Υ(f)(g, k₁) = f(g·k₁).
pub fn upsilon_extend<T, F>(f: F) -> impl Fn(&DMatrix<f64>, &DMatrix<f64>) -> T
where
    F: Fn(&DMatrix<f64>) -> T,
{
    move |g: &DMatrix<f64>, k1: &DMatrix<f64>| f(&(g * k1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_affine(a: &DVector<f64>, g: &DMatrix<f64>) -> f64 {
        (-(a.norm_squared()) - (g - DMatrix::<f64>::identity(g.nrows(), g.nrows())).norm_squared()).exp()
    }

    #[test]
    fn tilde_restricts_to_f_at_identity_x() {
        let ft = tilde_extend(gaussian_affine);
        let a = DVector::from_column_slice(&[0.3, -0.2]);
        let y = DMatrix::from_row_slice(2, 2, &[1.1, 0.2, -0.1, 0.9]);
        let h = AuxiliaryElement::new(a.clone(), DMatrix::identity(2, 2), y.clone()).unwrap();
        assert_eq!(ft(&h), gaussian_affine(&a, &y));
    }

    #[test]
    fn tilde_of_zero_is_zero() {
        let ft = tilde_extend(|_: &DVector<f64>, _: &DMatrix<f64>| 0.0);
        assert_eq!(ft(&AuxiliaryElement::identity(3)), 0.0);
    }

    #[test]
    fn solvable_tilde_at_identity_a() {
        let f = |n: &DMatrix<f64>, a: &DMatrix<f64>| n[(0, 1)] + a[(0, 0)];
        let ft = tilde_extend_solvable(f);
        let n = DMatrix::from_row_slice(2, 2, &[1.0, 0.7, 0.0, 1.0]);
        let b = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, 1.0 / 3.0]);
        let p = SolvableAuxElement { n: n.clone(), a: DMatrix::identity(2, 2), b: b.clone() };
        assert_eq!(ft(&p), f(&n, &b));
    }

    #[test]
    fn upsilon_restricts_to_f() {
        let f = |g: &DMatrix<f64>| g.trace();
        let up = upsilon_extend(f);
        let g = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 0.5]);
        assert_eq!(up(&g, &DMatrix::identity(2, 2)), f(&g));
        let c = upsilon_extend(|_: &DMatrix<f64>| 4.0);
        assert_eq!(c(&g, &g), 4.0);
    }

    #[test]
    fn auxiliary_law_has_identity() {
        let h = AuxiliaryElement::new(
            DVector::from_column_slice(&[1.0, 2.0]),
            DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 1.0, 1.0]),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 3.0]),
        )
        .unwrap();
        let e = AuxiliaryElement::identity(2);
        assert_eq!(h.compose(&e), h);
        assert_eq!(e.compose(&h), h);
    }
}
