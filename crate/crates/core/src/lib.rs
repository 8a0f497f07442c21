//! Exact symbolic computation for mass-action reaction networks.
//!
//! The crate is organized around the pipeline
//!
//! ```text
//! network text ──parse──▶ ReactionNetwork ──▶ steady-state ideal in R(k)[x]
//!                                   │
//!                 intermediates ────▶ Reduction (core network, mu, phi, H)
//!                                   │
//!                 groebner engine ──▶ reduced bases, lifting, elimination,
//!                                     binomiality, independence checks
//! ```
//!
//! All arithmetic is exact: coefficients live in the fraction field of
//! multivariate polynomials over arbitrary-precision rationals, so results
//! are valid for generic (transcendental) rate constants.

pub mod algebra;
pub mod error;
pub mod groebner;
pub mod independence;
pub mod lift;
pub mod network;
pub mod reduction;

pub use algebra::{ParamMatrix, ParamPoly, ParamScalar, VarSet, XPoly};
pub use error::Error;
pub use groebner::{GroebnerBasis, MonomialOrder};
pub use network::ReactionNetwork;
pub use reduction::Reduction;
