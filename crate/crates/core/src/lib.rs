//! Extensions and infinitesimal deformations of associative algebras,
//! modelled as odd codifferentials on a tensor coalgebra, with exact
//! arithmetic over the rationals.
//!
//! Ungraded algebras live on completely odd spaces (the parity-reversed
//! picture), so an associative product is an odd cochain `d` of arity two
//! with `[d,d] = 0`.

pub mod coalgebra;
pub mod cohomology;
pub mod deformations;
pub mod error;
pub mod extensions;
pub mod linalg;

pub use error::{Error, Result};
