//! Conjectural densities of squarefree values in elliptic-curve Frobenius
//! sequences `f_p(E) = f(a_p(E), p)`.
//!
//! The crate counts matrices in `GL2(Z/n^2 Z)` exactly through
//! trace/determinant fibers, assembles the generic Euler product `C_f` and the
//! per-curve Serre-curve constant `C_{E,f}`, and measures the same densities
//! empirically by point counting over `F_p`.
//!
//! ```
//! use frobsf::{gl2, BiPoly};
//!
//! let f = BiPoly::frobdisc();
//! let d = gl2::generic_density(&f, 2).unwrap();
//! assert_eq!(d.ratio(), frobsf::Rational::new(2.into(), 3.into()));
//! ```

pub mod bipoly;
mod error;
pub mod frobenius;
pub mod gl2;
pub mod integers;
pub mod scalar;
pub mod serre;

pub use bipoly::BiPoly;
pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact rational used for every density and constant.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision unsigned integer used for group orders and counts.
pub type Natural = num_bigint::BigUint;
/// Floating-point rendering of densities.
pub type Real = f64;
