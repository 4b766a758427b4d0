//! Exponential frame, Riesz and orthogonal spectral pairs built by adding a
//! continuous pair `(Ω₁, Λ₁)` in `R^d` to a finite pair `(A, J)` in `Z_N^d`.
//!
//! The combined pair is `(Ω₁ + A, Λ₁ + J/N)`. The crate checks the
//! hypotheses that make the combination work, predicts frame constants,
//! certifies them numerically through analytic Gram matrices, builds the
//! explicit biorthogonal duals, and demonstrates alias-free sampling on
//! `[0, 1) + A`.
//!
//! Module map:
//!
//! - [`finite`]: sets in `Z_N^d`, evaluation matrices, finite classification
//! - [`domains`]: exact rational boxes, lattices with shifts, Minkowski sums
//! - [`constructor`]: combining a continuous pair with a finite pair
//! - [`analytics`]: Gram matrices, frame-bound estimates, dual bases
//! - [`sampling`]: sampling on `Z + J/N` and spectrum recovery
//! - [`search`]: enumeration of finite Riesz and orthogonal pairs

pub mod analytics;
pub mod constructor;
pub mod domains;
pub mod error;
pub mod finite;
pub mod kind;
pub mod linalg;
pub mod rational;
pub mod sampling;
pub mod search;
pub mod tolerance;

pub use error::{Error, Result};
pub use kind::PairKind;
pub use tolerance::Tolerances;
