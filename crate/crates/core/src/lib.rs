//! Exact verification engine for Quillen–Lichtenbaum type identities.
//!
//! Every quantity is computed with arbitrary-precision integers and
//! rationals, and every identity is checked along several independent
//! computation paths.

pub mod abelian;
pub mod curves;
pub mod cyclotomic;
pub mod dirichlet;
pub mod equivariant;
pub mod error;
pub mod ffqlc;
pub mod numtheory;
pub mod report;
pub mod suite;

pub use error::{Error, Result};
