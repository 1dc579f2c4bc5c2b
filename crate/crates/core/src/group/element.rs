use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Tolerance for the orthogonality and determinant invariants.
pub const INVARIANT_TOL: f64 = 1e-12;

/// Which matrix group an element belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupTag {
    /// SO(n).
    Rotation,
    /// Diagonal with positive entries.
    PositiveDiagonal,
    /// Upper triangular with unit diagonal.
    Unipotent,
    /// det = 1.
    SpecialLinear,
    /// det > 0.
    GeneralLinearPlus,
    /// det < 0, with the group law transported from GL₊ (see [`crate::group::transported_product`]).
    GeneralLinearMinus,
    /// A pair (translation, linear part) with law (a, g)(b, h) = (a + g b, g h).
    Affine,
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GroupTag::Rotation => "rotation",
            GroupTag::PositiveDiagonal => "positive-diagonal",
            GroupTag::Unipotent => "unipotent",
            GroupTag::SpecialLinear => "special-linear",
            GroupTag::GeneralLinearPlus => "general-linear+",
            GroupTag::GeneralLinearMinus => "general-linear-",
            GroupTag::Affine => "affine",
        };
        f.write_str(name)
    }
}

/// An element of one of the matrix groups, or of an affine group.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    tag: GroupTag,
    matrix: DMatrix<f64>,
    translation: Option<DVector<f64>>,
}

/// Reflection `diag(-1, 1, ..., 1)` used to identify GL₋ with GL₊.
pub fn reflection(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::identity(n, n);
    j[(0, 0)] = -1.0;
    j
}

fn det_tolerance(m: &DMatrix<f64>) -> f64 {
    let scale = m.norm().powi(m.nrows() as i32).max(1.0);
    INVARIANT_TOL * scale
}

fn check_matrix(tag: GroupTag, m: &DMatrix<f64>) -> Result<()> {
    let n = m.nrows();
    if n == 0 || m.ncols() != n {
        return Err(Error::contract(format!(
            "{tag} element needs a non-empty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain(format!("{tag} element has non-finite entries")));
    }
    match tag {
        GroupTag::Rotation => {
            let gram = m.transpose() * m - DMatrix::<f64>::identity(n, n);
            let dev = gram.amax();
            if dev > INVARIANT_TOL {
                return Err(Error::domain(format!(
                    "rotation is not orthogonal (deviation {dev:.3e})"
                )));
            }
            let det = m.determinant();
            if (det - 1.0).abs() > INVARIANT_TOL {
                return Err(Error::domain(format!("rotation has det {det}")));
            }
        }
        GroupTag::PositiveDiagonal => {
            for i in 0..n {
                for j in 0..n {
                    if i != j && m[(i, j)] != 0.0 {
                        return Err(Error::domain("positive-diagonal element has off-diagonal entries"));
                    }
                }
                if m[(i, i)] <= 0.0 {
                    return Err(Error::domain(format!(
                        "diagonal entry {} is not positive",
                        m[(i, i)]
                    )));
                }
            }
        }
        GroupTag::Unipotent => {
            for i in 0..n {
                if m[(i, i)] != 1.0 {
                    return Err(Error::domain("unipotent element needs a unit diagonal"));
                }
                for j in 0..i {
                    if m[(i, j)] != 0.0 {
                        return Err(Error::domain("unipotent element must be upper triangular"));
                    }
                }
            }
        }
        GroupTag::SpecialLinear => {
            let det = m.determinant();
            if (det - 1.0).abs() > det_tolerance(m) {
                return Err(Error::domain(format!("special-linear element has det {det}")));
            }
        }
        GroupTag::GeneralLinearPlus => {
            if m.determinant() <= 0.0 {
                return Err(Error::domain("general-linear+ element needs det > 0"));
            }
        }
        GroupTag::GeneralLinearMinus => {
            if m.determinant() >= 0.0 {
                return Err(Error::domain("general-linear- element needs det < 0"));
            }
        }
        GroupTag::Affine => {
            if m.determinant() == 0.0 {
                return Err(Error::domain("affine element has a singular linear part"));
            }
        }
    }
    Ok(())
}

impl GroupElement {
    /// Builds an element after checking the invariants of `tag`.
    pub fn new(tag: GroupTag, matrix: DMatrix<f64>, translation: Option<DVector<f64>>) -> Result<Self> {
        check_matrix(tag, &matrix)?;
        match (tag, &translation) {
            (GroupTag::Affine, Some(t)) if t.len() == matrix.nrows() => {}
            (GroupTag::Affine, Some(t)) => {
                return Err(Error::contract(format!(
                    "translation has length {} but the linear part is {}x{}",
                    t.len(),
                    matrix.nrows(),
                    matrix.nrows()
                )))
            }
            (GroupTag::Affine, None) => return Err(Error::contract("affine element needs a translation")),
            (_, Some(_)) => return Err(Error::contract(format!("{tag} element cannot carry a translation"))),
            (_, None) => {}
        }
        Ok(GroupElement { tag, matrix, translation })
    }

    pub fn rotation(matrix: DMatrix<f64>) -> Result<Self> {
        Self::new(GroupTag::Rotation, matrix, None)
    }

    /// Planar rotation by `theta`.
    pub fn rotation_2d(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        GroupElement {
            tag: GroupTag::Rotation,
            matrix: DMatrix::from_row_slice(2, 2, &[c, -s, s, c]),
            translation: None,
        }
    }

    pub fn positive_diagonal(diagonal: &[f64]) -> Result<Self> {
        Self::new(
            GroupTag::PositiveDiagonal,
            DMatrix::from_diagonal(&DVector::from_column_slice(diagonal)),
            None,
        )
    }

    pub fn unipotent(matrix: DMatrix<f64>) -> Result<Self> {
        Self::new(GroupTag::Unipotent, matrix, None)
    }

    pub fn special_linear(matrix: DMatrix<f64>) -> Result<Self> {
        Self::new(GroupTag::SpecialLinear, matrix, None)
    }

    /// Tags the matrix as GL₊ or GL₋ according to the sign of its determinant.
    pub fn general_linear(matrix: DMatrix<f64>) -> Result<Self> {
        let tag = if matrix.determinant() < 0.0 {
            GroupTag::GeneralLinearMinus
        } else {
            GroupTag::GeneralLinearPlus
        };
        Self::new(tag, matrix, None)
    }

    pub fn affine(translation: DVector<f64>, linear: DMatrix<f64>) -> Result<Self> {
        Self::new(GroupTag::Affine, linear, Some(translation))
    }

    /// Identity of the group named by `tag`. For GL₋ this is the reflection
    /// `J`, the identity of the transported law.
    pub fn identity(tag: GroupTag, n: usize) -> Self {
        let matrix = match tag {
            GroupTag::GeneralLinearMinus => reflection(n),
            _ => DMatrix::identity(n, n),
        };
        let translation = (tag == GroupTag::Affine).then(|| DVector::zeros(n));
        GroupElement { tag, matrix, translation }
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn translation(&self) -> Option<&DVector<f64>> {
        self.translation.as_ref()
    }

    /// Matrix size n.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn into_parts(self) -> (GroupTag, DMatrix<f64>, Option<DVector<f64>>) {
        (self.tag, self.matrix, self.translation)
    }

    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        compose(self, other)
    }

    pub fn inverse(&self) -> Result<GroupElement> {
        invert(self)
    }

    /// Largest elementwise difference between two elements of the same shape.
    pub fn max_deviation(&self, other: &GroupElement) -> f64 {
        let mut dev = (&self.matrix - &other.matrix).amax();
        if let (Some(a), Some(b)) = (&self.translation, &other.translation) {
            dev = dev.max((a - b).amax());
        }
        dev
    }
}

fn cleaned(tag: GroupTag, mut m: DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    match tag {
        GroupTag::Unipotent => {
            for i in 0..n {
                m[(i, i)] = 1.0;
                for j in 0..i {
                    m[(i, j)] = 0.0;
                }
            }
        }
        GroupTag::PositiveDiagonal => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        m[(i, j)] = 0.0;
                    }
                }
            }
        }
        _ => {}
    }
    m
}

/// Group product `g·h`.
pub fn compose(g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
    if g.tag != h.tag {
        return Err(Error::contract(format!("cannot compose {} with {}", g.tag, h.tag)));
    }
    if g.dim() != h.dim() {
        return Err(Error::contract(format!(
            "cannot compose elements of size {} and {}",
            g.dim(),
            h.dim()
        )));
    }
    match g.tag {
        GroupTag::Affine => {
            let (a, b) = (g.translation.as_ref(), h.translation.as_ref());
            let (a, b) = a.zip(b).ok_or_else(|| Error::contract("affine element without translation"))?;
            let translation = a + &g.matrix * b;
            GroupElement::new(GroupTag::Affine, &g.matrix * &h.matrix, Some(translation))
        }
        GroupTag::GeneralLinearMinus => {
            let j = reflection(g.dim());
            let product = &j * (&j * &g.matrix) * (&j * &h.matrix);
            GroupElement::new(GroupTag::GeneralLinearMinus, product, None)
        }
        tag => GroupElement::new(tag, cleaned(tag, &g.matrix * &h.matrix), None),
    }
}

fn inverse_matrix(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::domain("matrix is singular"))
}

/// Group inverse.
pub fn invert(g: &GroupElement) -> Result<GroupElement> {
    let n = g.dim();
    match g.tag {
        GroupTag::Rotation => GroupElement::new(GroupTag::Rotation, g.matrix.transpose(), None),
        GroupTag::PositiveDiagonal => {
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = 1.0 / g.matrix[(i, i)];
            }
            GroupElement::new(GroupTag::PositiveDiagonal, m, None)
        }
        GroupTag::Unipotent => {
            // Back substitution keeps the unit diagonal exact.
            let mut inv = DMatrix::<f64>::identity(n, n);
            for j in 0..n {
                for i in (0..j).rev() {
                    let mut s = 0.0;
                    for k in (i + 1)..=j {
                        s += g.matrix[(i, k)] * inv[(k, j)];
                    }
                    inv[(i, j)] = -s;
                }
            }
            GroupElement::new(GroupTag::Unipotent, inv, None)
        }
        GroupTag::GeneralLinearMinus => {
            let j = reflection(n);
            let inv = inverse_matrix(&g.matrix)?;
            GroupElement::new(GroupTag::GeneralLinearMinus, &j * inv * &j, None)
        }
        GroupTag::Affine => {
            let inv = inverse_matrix(&g.matrix)?;
            let t = g
                .translation
                .as_ref()
                .ok_or_else(|| Error::contract("affine element without translation"))?;
            let translation = -(&inv * t);
            GroupElement::new(GroupTag::Affine, inv, Some(translation))
        }
        tag => GroupElement::new(tag, inverse_matrix(&g.matrix)?, None),
    }
}
