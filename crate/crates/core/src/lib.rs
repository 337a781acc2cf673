//! Generalized base-b Hammersley point sets, the b-adic Haar coefficients of
//! their discrepancy function, and discrete Besov quasi-norms.
//!
//! Coefficient identities are computed exactly in the cyclotomic ring
//! [`numeric::CycloValue`]; norms are assembled in floating point.

pub mod digitsums;
pub mod discrepancy;
pub mod error;
pub mod exec;
pub mod haar;
pub mod hammersley;
pub mod norms;
pub mod numeric;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Exec;
