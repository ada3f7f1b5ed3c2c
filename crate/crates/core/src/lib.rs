//! Exact computations on approximate groups inside finite abelian groups.
//!
//! The crate covers the combinatorial kernel (sumsets, additive energy,
//! symmetry sets, convolutions), Fourier analysis (transforms, large
//! spectra, Bohr sets), convex coset progressions, and the structure
//! finders built on top of them (almost-period sampling, growth checks,
//! iteration traces, energy-to-doubling extraction and end-to-end
//! pipelines). Every reported inequality is recomputed exactly.
//!
//! Density maps and spectra are generic over the scalar type; the aliases
//! below name the instantiations used throughout.

pub mod character;
pub mod density;
pub mod error;
mod fft;
pub mod group;
pub mod gset;
pub mod progressions;
pub mod scalar;
mod serde_util;
pub mod setops;
pub mod spectral;
pub mod structure;
pub mod subgroup;

pub use character::{char_value, Character, Phase};
pub use density::{convolve, convolve_with, ConvolutionMethod, DensityMap};
pub use error::{Error, Result};
pub use group::{GroupElement, GroupSpec, DEFAULT_ENUMERATION_CAP};
pub use gset::GSet;
pub use scalar::{FftScalar, Scalar, ScalarKind};
pub use spectral::{CharSet, Spectrum};
pub use subgroup::{all_cosets, all_subgroups, is_coset, subgroup_generated, CosetWitness};

/// Exact rational used for thresholds, doubling constants and slab data.
pub type Rational = num_rational::Ratio<i64>;

/// Integer-valued counting functions such as `1_A ∗ 1_{−A}`.
pub type CountMap = DensityMap<i64>;
/// Exact normalised measures such as `μ_A`.
pub type RationalMap = DensityMap<Rational>;
/// Double-precision functions.
pub type RealMap = DensityMap<f64>;
/// Single-precision functions.
pub type RealMap32 = DensityMap<f32>;
/// Double-precision spectra.
pub type Spectrum64 = Spectrum<f64>;
/// Single-precision spectra.
pub type Spectrum32 = Spectrum<f32>;
