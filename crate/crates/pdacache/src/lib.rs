//! Placement delivery arrays for coded caching.
//!
//! A placement delivery array is an F x K grid of stars and symbols
//! that encodes a complete caching scheme: stars say which packet each
//! user caches, equal symbols say which packets share one XOR
//! broadcast. This crate builds such arrays (several baseline families,
//! a stacked construction over proper orthogonal arrays, and a
//! column-selection transform of it), verifies the defining conditions
//! by brute force, refines arrays with coded placement over GF(2^8),
//! and simulates the full placement/delivery protocol to confirm rates
//! byte for byte.
//!
//! Arrays are immutable after construction and every operation is a
//! pure function, so shared read-only use across threads is safe.
//!
//! The `examples/` directory demonstrates each capability end to end;
//! the `pdacache` binary exposes the same operations as subcommands
//! (`construct`, `verify`, `simulate`, `compare`, `tables`).

pub mod coded;
pub mod compare;
pub mod construct;
pub mod error;
pub mod format;
pub mod gf256;
mod lex;
pub mod oa;
pub mod pda;
pub mod ratio;
pub mod sim;
pub mod verify;

pub use error::{Error, Result};
pub use pda::{canonicalize, ColLabel, PdaArray, PdaEntry, RawLabel, RowLabel, SchemeParams};
pub use ratio::Rational;
