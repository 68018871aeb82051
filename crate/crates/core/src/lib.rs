//! Residues, symbols and adelic invariants over finite fields, with
//! discrete Heisenberg characters evaluated as theta series.

pub mod adeles;
pub mod cli;
pub mod error;
pub mod field;
pub mod heis;
pub mod laurent;
pub mod local2d;
pub mod reciprocity;
pub mod suite;
pub mod surface;

pub use error::{Error, Result};
