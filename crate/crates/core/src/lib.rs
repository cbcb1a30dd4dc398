//! Exact computations on smooth, squarefree and squarefull integers in residue
//! classes modulo a prime, with brute-force oracles for every count.
//!
//! Data-parallel paths use rayon when the `parallel` feature is on; each entry
//! point takes an [`Exec`] and produces identical integer results either way.

pub mod arith;
pub mod bounds;
pub mod characters;
pub mod congruence;
pub mod decimal;
pub mod error;
pub mod exec;
pub mod kfull;
pub mod progression;
pub mod report;
pub mod squarefull;

pub use error::{Error, Result};
pub use exec::Exec;
