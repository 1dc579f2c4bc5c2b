//! Chained Fourier transforms on the general affine group GA(n, ℝ) = ℝⁿ ⋊ GL(n, ℝ)
//! and on its building blocks N, A, K, SL(n, ℝ), GL(n, ℝ), together with
//! quadrature-based residuals for the Plancherel and convolution identities
//! they satisfy.
//!
//! Layers, bottom up:
//!
//! * [`group`]: exact matrix-group arithmetic and Iwasawa factorizations.
//! * [`quadrature`]: Haar-measure quadrature rules for every factor.
//! * [`spectra`]: the Euclidean, Mellin and Peter–Weyl transforms.
//! * [`composite`]: the chained transforms, group convolution and identity residuals.
//! * [`harness`]: configuration, test-function bundles, suites and reports.

pub mod composite;
pub mod error;
pub mod group;
pub mod harness;
pub mod par;
pub mod quadrature;
pub mod spectra;

pub use error::{Error, Result};
pub use num_complex::Complex64;
