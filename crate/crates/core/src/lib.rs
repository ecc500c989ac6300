//! Spectral toolkit for Schrödinger operators with a singularity at the origin.
//!
//! The basis functions are
//!
//! ```text
//! b_n(x) = x^n exp(-a (x^2 + x^-2) / 2),   n ∈ ℤ, a > 0,
//! ```
//!
//! which are smooth and decay faster than any power both at infinity and at
//! the origin. Their span is invariant under multiplication by `x`, by `1/x`
//! and under `d/dx`, so every polynomial in `Q`, `Q⁻¹` and `P` has matrix
//! elements that reduce to the integrals
//!
//! ```text
//! I_n(a) = ∫ x^{2n} exp(-a (x^2 + x^-2)) dx = sqrt(π/a) e^{-2a} Λ_n(1/a)
//! ```
//!
//! where `Λ_n` is a polynomial with rational coefficients. Everything that
//! can be exact is exact ([`exact_coeffs`], [`basis`], [`gram`]); floating
//! point (MPFR, arbitrary precision) enters only in the eigensolver
//! ([`spectra`]) and the independent quadrature checks ([`oracle`]).

#![allow(clippy::needless_range_loop)]

pub mod basis;
pub mod cli;
pub mod error;
pub mod exact_coeffs;
pub mod gram;
pub mod linalg;
pub mod oracle;
pub mod potential;
pub mod rational;
pub mod serialize;
pub mod spectra;

pub use basis::{ComplexRational, LaurentState, OperatorExpr, Scale, Symbol};
pub use error::{Error, Result};
pub use exact_coeffs::{ClosedFormInner, CoeffTable, InversePoly};
pub use gram::{GramMatrix, OrthonormalBasis};
pub use rational::ExactRational;
pub use spectra::{HamiltonianSpec, RitzResult};
