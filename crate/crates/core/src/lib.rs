//! Exact equilibrium classification for multistable regulatory systems.
//!
//! The pipeline reduces the n-dimensional system to diagonal and two-value
//! templates, eliminates down to a critical polynomial in σ, isolates its
//! positive roots and counts (stable) equilibria on every band between them.

// dense matrix kernels read more clearly with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod classify;
pub mod counting;
pub mod elimination;
pub mod error;
pub mod exact_core;
pub mod interval;
pub mod model;
pub mod modular;
pub mod oracle;
pub mod realroots;
pub mod reduction;

pub use error::{MsrsError, Result};
pub use exact_core::{IntPoly, MPoly, Rat, RatFunc, UPoly, Var};
