//! Exact symbolic engine for tautological cycle relations on Jacobians.
//!
//! The crate builds the three relation families on the free Pontryagin
//! algebra generated by the Beauville components `C(0) .. C(g-1)`,
//! compares the graded ideals they generate, and replays the
//! Grothendieck-Riemann-Roch computation that produces them. All
//! arithmetic is exact.

pub mod arith;
pub mod cli;
pub mod combinat;
pub mod error;
pub mod grr;
pub mod relations;
pub mod tautalg;

pub use error::{Error, Result};
