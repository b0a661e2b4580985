//! Exact computation of the unique permutation-invariant probability measure
//! on the space of total orders of ℕ, finite-level Martin-Löf tests against
//! it, recursive presentations of the rational order, the Rado graph and the
//! universal poset, and the effective back-and-forth isomorphism.
//!
//! Measure-valued functions are generic over [`MeasureScalar`]; use
//! [`ExactRational`] for exact values and [`Approx64`] / [`Approx32`] for
//! floating point.

pub mod caps;
pub mod error;
pub mod fraisse;
pub mod measure;
pub mod orders;
pub mod randomizer;
pub mod sampler;
pub mod scalar;

#[cfg(test)]
pub(crate) mod testutil;

pub use caps::Caps;
pub use error::{Error, Result};
pub use scalar::MeasureScalar;

/// Arbitrary-precision reduced fraction; the canonical measure type.
pub type ExactRational = num_rational::BigRational;
/// Double-precision measure values.
pub type Approx64 = f64;
/// Single-precision measure values.
pub type Approx32 = f32;
