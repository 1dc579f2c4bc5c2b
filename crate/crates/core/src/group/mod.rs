//! Matrix-group arithmetic: elements, Iwasawa factorizations, the GL₊/GL₋
//! structure and the function extensions onto auxiliary groups.

mod element;
mod extend;
mod iwasawa;
mod linear;
pub mod sample;

pub use element::{compose, invert, reflection, GroupElement, GroupTag, INVARIANT_TOL};
pub use extend::{
    conjugate_by_diagonal, tilde_extend, tilde_extend_solvable, upsilon_extend, AuxiliaryElement,
    SolvableAuxElement,
};
pub use iwasawa::{
    gram_schmidt, iwasawa_decompose, iwasawa_decompose_matrix, reorder_iwasawa, IwasawaFactors,
    IwasawaOrdering, UNIT_DET_TOL,
};
pub use linear::{
    gl_minus_transport, gl_plus_to_minus, split_gl_plus, split_gl_plus_matrix, transported_product,
    GlPlusFactorization,
};
