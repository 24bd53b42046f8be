//! Toolkit for deciding, constructing, and numerically certifying Gabor
//! orthonormal bases `{e^{2πisx} g(x−t) : (t,s) ∈ Λ}` over 2D lattices.
//!
//! The exact layer ([`scalar`], [`lattice`], [`tiling`], [`window`]) decides
//! the orthonormal-basis property from lattice density, discreteness of the
//! first-coordinate projection, and a translational tiling condition on the
//! window modulus. The numeric layer ([`signal`], [`frft`], [`zak`],
//! [`gram`], [`density`]) produces desk-scale certificates: truncated Gram
//! matrices, weighted Zak-transform diagnostics, fractional Fourier
//! transforms, and Beurling density estimates.

pub mod density;
pub mod frft;
pub mod gram;
pub mod json;
pub mod lattice;
pub mod scalar;
pub mod signal;
pub mod special;
pub mod tiling;
pub mod window;
pub mod zak;

pub use lattice::{ExactMatrix, FloatMatrix, Lattice2D, Matrix2};
pub use scalar::{FieldScalar, IrrationalSymbol, Rational};

/// Complex sample type used throughout the numeric layer.
pub type C64 = num_complex::Complex64;

/// Numeric-layer signal at the default precision.
pub type Signal = signal::SampledSignal<f64>;

/// Fractional Fourier plan at the default precision.
pub type Plan = frft::FrftPlan<f64>;

/// Interval set with exact rational endpoints.
pub type RationalIntervalSet = tiling::IntervalSet<Rational>;

/// Interval set with float endpoints.
pub type FloatIntervalSet = tiling::IntervalSet<f64>;
