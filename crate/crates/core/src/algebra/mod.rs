//! Exact arithmetic: arbitrary-precision rationals, sparse multivariate
//! polynomials in parameter symbols, their fraction field, polynomials in
//! concentration variables over that field, and symbolic linear algebra.

mod expr;
mod gcd;
mod matrix;
mod mono;
mod poly;
mod scalar;
mod xpoly;

pub use expr::{parse_scalar, parse_xpoly};
pub use matrix::{solve_linear, ParamMatrix};
pub use mono::{Mono, VarSet};
pub use poly::ParamPoly;
pub use scalar::ParamScalar;
pub use xpoly::{Subst, XPoly};

pub(crate) use gcd::poly_gcd;

use num_rational::BigRational;

/// Shorthand for an exact rational from an integer pair.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
