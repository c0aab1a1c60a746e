//! Exact operator calculus on the unitarizable Verma module `V_h` over `sl(2, C)`.
//!
//! Operators are weighted-shift bands with rational-function coefficients in the
//! level `n` (the eigenvalue of `ξ = z∂_z` on `z^n`), plus finite-rank corrections.
//! On top of that calculus the crate builds the Berezin generators `D = ∂_z`,
//! `F = z∘(ξ + 2h)⁻¹`, the `q_R`-conformal generators `L_k`, and the defect
//! measurements (Hilbert–Schmidt membership, norms, `ħ`-scaling) that describe how
//! far these families are from exact representations.

pub mod berezin;
pub mod conformal;
mod error;
pub mod exact_scalar;
pub mod quantize;
pub mod verma_ops;

pub use error::{Error, Result};
pub use exact_scalar::{DecayOrder, GaussianRational, Limit, Poly, RatFunc};
pub use verma_ops::{BandOperator, DefectReport, NormBound, Weight};
