//! Exact computer algebra for Dehn-twist operators on free noncommutative
//! algebras over `Q(A)`, bounded-degree two-sided ideal membership, and a
//! concrete model of the Kauffman bracket skein algebra of the one-holed
//! torus.
//!
//! The crate is organised bottom-up:
//!
//! * [`coeff`]: Laurent polynomials in `A` and the rational function field `Q(A)`.
//! * [`freealg`]: the free algebra `Q(A)<X_1..X_n>`, twist operators `T_j^e`
//!   and relator elements of a mapping-class-group presentation.
//! * [`quotient`]: degree-truncated ideal spans, membership with certificates,
//!   and transport of membership along twist operators.
//! * [`torus`]: normal forms in the skein algebra of the one-holed torus,
//!   twist automorphisms, curves, the map `psi` and generation witnesses.

pub mod coeff;
pub mod error;
pub mod freealg;
pub mod parse;
pub mod quotient;
pub mod serial;
pub mod torus;

pub use error::{Error, Result};
