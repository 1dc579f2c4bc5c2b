//! Chained transforms on S, SL, GL₊, GL, GA₊ and GA, group convolution by
//! quadrature, and the residual evaluators built on them.

pub mod convolve;
mod identities;
mod level;
mod plancherel;
mod report;
mod spectrum;

pub use convolve::{convolve, convolve_at, Affine2, Analytic, ChartGroup, Euclidean, Field, GridAxis, Interpolant, LazyGrid, LinearPlus2, Solvable2};
pub use identities::{
    cor51_residual, convolution_identity_residual, defaults, lemma31a_residual, lemma31b_residual, lemma51_residual,
    AffineGaussian, ChartFn, ConvolutionGrids, ConvolutionIdentity,
};
pub use level::{
    chart_dim, chart_matrix, check_layout, factor_axes, factor_rule, level_axes, level_coordinates, level_element, level_factor_axes,
    sample_on_level, AxisGrid, GridSpec, Level, LevelFunction, SeparableFunction,
};
pub use plancherel::{component_integrals, gl_full_integrals, plancherel_residual, ComponentIntegrals};
pub use report::{relative_residual, IdentityReport, RESIDUAL_FLOOR};
pub use spectrum::{
    chain_transform, dual_axis, ga_transform, glplus_transform, level_transform, nilpotent_transform, sl_transform,
    solvable_transform, CompositeSpectrum,
};
