//! The primitive transforms: Euclidean (N, ℝⁿ), Mellin (A, ℝ₊*) and
//! Peter–Weyl (SO(2), SO(3)), with their inverses and Parseval identities.

mod compact;
mod euclid;
pub mod kernel;
mod tensor;
pub mod wigner;

pub use compact::{
    check_band, compact_plancherel_residual, irrep_axis, irrep_matrix, peter_weyl, peter_weyl_inverse,
    wigner_big_d, CompactGroup, CompactSpectrum, Irrep,
};
pub use euclid::{
    dual_label, euclid_ft, euclid_ift, mellin_ft, mellin_ift, nyquist_frequencies, EuclideanSpectrum, MellinSpectrum,
    DECAY_THRESHOLD,
};
pub use tensor::{Axis, AxisKind, SampledFunction};
