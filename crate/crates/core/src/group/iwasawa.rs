//! Iwasawa factorizations of SL(n, ℝ) in the four factor orderings.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use super::element::{GroupElement, GroupTag};
use crate::error::{Error, Result};

/// Determinant tolerance accepted by [`iwasawa_decompose`].
pub const UNIT_DET_TOL: f64 = 1e-10;

/// Order in which the factors multiply back to the source matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IwasawaOrdering {
    /// g = k·n·a
    Kna,
    /// g = n·a·k
    Nak,
    /// g = a·n·k
    Ank,
    /// g = k·a·n
    Kan,
}

impl IwasawaOrdering {
    pub const ALL: [IwasawaOrdering; 4] = [Self::Kna, Self::Nak, Self::Ank, Self::Kan];

    /// True when the compact factor stands on the left.
    pub fn compact_left(self) -> bool {
        matches!(self, Self::Kna | Self::Kan)
    }
}

impl fmt::Display for IwasawaOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Kna => "KNA",
            Self::Nak => "NAK",
            Self::Ank => "ANK",
            Self::Kan => "KAN",
        })
    }
}

impl FromStr for IwasawaOrdering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "KNA" => Ok(Self::Kna),
            "NAK" => Ok(Self::Nak),
            "ANK" => Ok(Self::Ank),
            "KAN" => Ok(Self::Kan),
            other => Err(Error::Parse(format!("unknown Iwasawa ordering `{other}`"))),
        }
    }
}

/// The (k, n, a) factors of an SL(n) matrix together with their ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct IwasawaFactors {
    k: GroupElement,
    n: GroupElement,
    a: GroupElement,
    ordering: IwasawaOrdering,
}

impl IwasawaFactors {
    /// Checks the factor tags; the caller vouches for the ordering.
    pub fn new(k: GroupElement, n: GroupElement, a: GroupElement, ordering: IwasawaOrdering) -> Result<Self> {
        if k.tag() != GroupTag::Rotation || n.tag() != GroupTag::Unipotent || a.tag() != GroupTag::PositiveDiagonal {
            return Err(Error::contract(format!(
                "Iwasawa factors must be (rotation, unipotent, positive-diagonal), got ({}, {}, {})",
                k.tag(),
                n.tag(),
                a.tag()
            )));
        }
        Ok(IwasawaFactors { k, n, a, ordering })
    }

    pub fn k(&self) -> &GroupElement {
        &self.k
    }

    pub fn n(&self) -> &GroupElement {
        &self.n
    }

    pub fn a(&self) -> &GroupElement {
        &self.a
    }

    pub fn ordering(&self) -> IwasawaOrdering {
        self.ordering
    }

    /// Multiplies the factors back together in the stored ordering.
    pub fn recompose(&self) -> DMatrix<f64> {
        let (k, n, a) = (self.k.matrix(), self.n.matrix(), self.a.matrix());
        match self.ordering {
            IwasawaOrdering::Kna => k * n * a,
            IwasawaOrdering::Nak => n * a * k,
            IwasawaOrdering::Ank => a * n * k,
            IwasawaOrdering::Kan => k * a * n,
        }
    }

    /// Diagonal entries of `a`.
    pub fn a_diagonal(&self) -> Vec<f64> {
        (0..self.a.dim()).map(|i| self.a.matrix()[(i, i)]).collect()
    }
}

/// Column Gram–Schmidt with one reorthogonalization pass: `m = q·r`, `q`
/// orthogonal, `r` upper triangular with a positive diagonal.
pub fn gram_schmidt(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let size = m.nrows();
    if m.ncols() != size {
        return Err(Error::contract("Gram–Schmidt needs a square matrix"));
    }
    let mut q = DMatrix::<f64>::zeros(size, size);
    let mut r = DMatrix::<f64>::zeros(size, size);
    let scale = m.amax().max(f64::MIN_POSITIVE);
    for j in 0..size {
        let mut v = m.column(j).clone_owned();
        for _pass in 0..2 {
            for i in 0..j {
                let proj = q.column(i).dot(&v);
                r[(i, j)] += proj;
                v.axpy(-proj, &q.column(i), 1.0);
            }
        }
        let norm = v.norm();
        if norm <= 1e-14 * scale {
            return Err(Error::domain("matrix is singular; no Gram–Schmidt factorization"));
        }
        r[(j, j)] = norm;
        q.set_column(j, &(v / norm));
    }
    Ok((q, r))
}

fn conjugate(n: &DMatrix<f64>, a: &DMatrix<f64>, a_inv_left: bool) -> DMatrix<f64> {
    // a⁻¹·n·a when `a_inv_left`, otherwise a·n·a⁻¹. Entry (i, j) scales by a_j/a_i or a_i/a_j.
    let size = n.nrows();
    let mut out = n.clone();
    for i in 0..size {
        for j in (i + 1)..size {
            let ratio = a[(i, i)] / a[(j, j)];
            out[(i, j)] = if a_inv_left { n[(i, j)] / ratio } else { n[(i, j)] * ratio };
        }
    }
    out
}

fn kna_of(matrix: &DMatrix<f64>) -> Result<IwasawaFactors> {
    let size = matrix.nrows();
    let (q, r) = gram_schmidt(matrix)?;
    let mut a = DMatrix::<f64>::zeros(size, size);
    let mut n = DMatrix::<f64>::identity(size, size);
    for j in 0..size {
        a[(j, j)] = r[(j, j)];
        for i in 0..j {
            n[(i, j)] = r[(i, j)] / r[(j, j)];
        }
    }
    IwasawaFactors::new(
        GroupElement::rotation(q)?,
        GroupElement::unipotent(n)?,
        GroupElement::new(GroupTag::PositiveDiagonal, a, None)?,
        IwasawaOrdering::Kna,
    )
}

/// g = n·a·k from Gram–Schmidt on M = J·gᵀ·J (J the order-reversing
/// permutation): M = q·r gives g = (J N'ᵀ J)(J A' J)(J qᵀ J) with r = A'·N'.
fn nak_of(matrix: &DMatrix<f64>) -> Result<IwasawaFactors> {
    let size = matrix.nrows();
    let flip = |m: &DMatrix<f64>| DMatrix::from_fn(size, size, |i, j| m[(size - 1 - i, size - 1 - j)]);
    let (q, r) = gram_schmidt(&flip(&matrix.transpose()))?;
    let mut a = DMatrix::<f64>::zeros(size, size);
    let mut n_prime = DMatrix::<f64>::identity(size, size);
    for i in 0..size {
        a[(i, i)] = r[(i, i)];
        for j in (i + 1)..size {
            n_prime[(i, j)] = r[(i, j)] / r[(i, i)];
        }
    }
    IwasawaFactors::new(
        GroupElement::rotation(flip(&q.transpose()))?,
        GroupElement::unipotent(flip(&n_prime.transpose()))?,
        GroupElement::new(GroupTag::PositiveDiagonal, flip(&a), None)?,
        IwasawaOrdering::Nak,
    )
}

/// Factors `g` (det 1 to [`UNIT_DET_TOL`]) in the requested ordering, by
/// Gram–Schmidt on the columns (compact factor on the left) or on the rows.
pub fn iwasawa_decompose(g: &GroupElement, ordering: IwasawaOrdering) -> Result<IwasawaFactors> {
    if g.tag() == GroupTag::Affine {
        return Err(Error::contract("Iwasawa decomposition needs a linear group element"));
    }
    iwasawa_decompose_matrix(g.matrix(), ordering)
}

/// As [`iwasawa_decompose`], on a bare matrix.
pub fn iwasawa_decompose_matrix(matrix: &DMatrix<f64>, ordering: IwasawaOrdering) -> Result<IwasawaFactors> {
    if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
        return Err(Error::contract("Iwasawa decomposition needs a square matrix"));
    }
    let det = matrix.determinant();
    if (det - 1.0).abs() > UNIT_DET_TOL {
        return Err(Error::contract(format!(
            "Iwasawa decomposition needs det = 1, got {det}"
        )));
    }
    let base = if ordering.compact_left() { kna_of(matrix)? } else { nak_of(matrix)? };
    reorder_iwasawa(&base, ordering)
}

/// Converts between orderings. Orderings that keep the compact factor on the
/// same side only conjugate `n` by `a`; switching sides refactors the
/// recomposed matrix.
pub fn reorder_iwasawa(f: &IwasawaFactors, target: IwasawaOrdering) -> Result<IwasawaFactors> {
    use IwasawaOrdering::*;
    if f.ordering == target {
        return Ok(f.clone());
    }
    let a = f.a.matrix();
    let with_n = |n: DMatrix<f64>, ordering| {
        IwasawaFactors::new(f.k.clone(), GroupElement::unipotent(n)?, f.a.clone(), ordering)
    };
    match (f.ordering, target) {
        // k n a = k a (a⁻¹ n a)
        (Kna, Kan) => with_n(conjugate(f.n.matrix(), a, true), Kan),
        (Kan, Kna) => with_n(conjugate(f.n.matrix(), a, false), Kna),
        // n a k = a (a⁻¹ n a) k
        (Nak, Ank) => with_n(conjugate(f.n.matrix(), a, true), Ank),
        (Ank, Nak) => with_n(conjugate(f.n.matrix(), a, false), Nak),
        (from, to) if from.compact_left() => reorder_iwasawa(&nak_of(&f.recompose())?, to),
        (_, to) => {
            let kna = kna_of(&f.recompose())?;
            reorder_iwasawa(&kna, to)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(v: [f64; 4]) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &v)
    }

    #[test]
    fn identity_factors_trivially() {
        for ord in IwasawaOrdering::ALL {
            let f = iwasawa_decompose_matrix(&DMatrix::identity(3, 3), ord).unwrap();
            assert!((f.k().matrix() - DMatrix::<f64>::identity(3, 3)).amax() < 1e-15);
            assert!((f.n().matrix() - DMatrix::<f64>::identity(3, 3)).amax() < 1e-15);
            assert!((f.a().matrix() - DMatrix::<f64>::identity(3, 3)).amax() < 1e-15);
        }
    }

    #[test]
    fn rotation_is_its_own_compact_factor() {
        let r = m2([0.0, -1.0, 1.0, 0.0]);
        let f = iwasawa_decompose_matrix(&r, IwasawaOrdering::Kna).unwrap();
        assert!((f.k().matrix() - &r).amax() < 1e-15);
        assert!((f.a().matrix() - DMatrix::<f64>::identity(2, 2)).amax() < 1e-15);
    }

    #[test]
    fn nak_example_matches_hand_factorization() {
        let n = m2([1.0, 1.0, 0.0, 1.0]);
        let a = m2([2.0, 0.0, 0.0, 0.5]);
        let f = iwasawa_decompose_matrix(&(&n * &a), IwasawaOrdering::Nak).unwrap();
        assert!((f.k().matrix() - DMatrix::<f64>::identity(2, 2)).amax() < 1e-12);
        assert!((f.n().matrix() - n).amax() < 1e-12);
        assert!((f.a().matrix() - a).amax() < 1e-12);
    }

    #[test]
    fn kna_to_kan_conjugates_by_a() {
        let f = IwasawaFactors::new(
            GroupElement::identity(GroupTag::Rotation, 2),
            GroupElement::unipotent(m2([1.0, 1.0, 0.0, 1.0])).unwrap(),
            GroupElement::positive_diagonal(&[2.0, 0.5]).unwrap(),
            IwasawaOrdering::Kna,
        )
        .unwrap();
        let kan = reorder_iwasawa(&f, IwasawaOrdering::Kan).unwrap();
        assert_eq!(kan.n().matrix()[(0, 1)], 0.25);
        let back = reorder_iwasawa(&kan, IwasawaOrdering::Kna).unwrap();
        assert_eq!(back.n().matrix()[(0, 1)], 1.0);
        // the inverse direction scales the off-diagonal entry by a₁/a₂ = 4
        let kan_src = IwasawaFactors::new(f.k.clone(), f.n.clone(), f.a.clone(), IwasawaOrdering::Kan).unwrap();
        let kna = reorder_iwasawa(&kan_src, IwasawaOrdering::Kna).unwrap();
        assert_eq!(kna.n().matrix()[(0, 1)], 4.0);
        assert!((kan.recompose() - f.recompose()).amax() < 1e-15);
    }

    #[test]
    fn non_unit_determinant_is_a_contract_violation() {
        let err = iwasawa_decompose_matrix(&m2([2.0, 0.0, 0.0, 1.0]), IwasawaOrdering::Kna).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }

    #[test]
    fn parse_orderings() {
        for ord in IwasawaOrdering::ALL {
            assert_eq!(ord.to_string().parse::<IwasawaOrdering>().unwrap(), ord);
        }
        assert!("XYZ".parse::<IwasawaOrdering>().is_err());
    }
}
