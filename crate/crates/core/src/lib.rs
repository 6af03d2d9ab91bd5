//! Symbolic and numeric verification toolkit for moment maps of
//! reductive-group representations: builds the moment ideal of an action,
//! decides largeness and modularity for torus actions combinatorially,
//! certifies regular-sequence / complete-intersection / reducibility
//! consequences over prime fields, and runs Kempf-Ness gradient flows as
//! numeric evidence.

pub mod error;
pub mod groebner;
pub mod kempfness;
pub mod koszul;
pub mod linalg;
pub mod lp;
pub mod moment;
pub mod oracle;
pub mod poly;
pub mod repspec;
pub mod ring;
pub mod torus;

pub use error::{Error, Result};

/// Polynomials over a prime field with runtime modulus.
pub type PolyFp = poly::Poly<ring::PrimeField>;
/// Polynomials with arbitrary-precision rational coefficients.
pub type PolyQ = poly::Poly<ring::Rationals>;
